//! Values computed by an independent brute-force implementation (Python
//! fractions, sympy ranks, networkx isomorphism and graph atlas) and frozen here.

use setalg::incidence::kantor_rank;
use setalg::relational::{corpus, profile_sequence, RelStructure};
use setalg::setfn::annihilator_basis;
use setalg::words::{max_shuffle, shuffle, shuffle_positions, Word};
use setalg::{product, product_by_splits, tau, Rational, SetFamily, SetFunction, Subset};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn set(xs: &[usize]) -> Subset {
    Subset::from_indices(xs.iter().copied())
}

#[test]
fn product_of_mixed_rationals() {
    let f = SetFunction::from_terms(
        5,
        2,
        [(set(&[0, 1]), q(3, 2)), (set(&[1, 2]), q(-1, 1)), (set(&[3, 4]), q(2, 3)), (set(&[0, 4]), q(5, 1))],
    )
    .unwrap();
    let g = SetFunction::from_terms(5, 1, [(set(&[0]), q(1, 1)), (set(&[2]), q(-2, 7)), (set(&[3]), q(4, 1))]).unwrap();
    let expected = [(7u64, q(-10, 7)), (11, q(6, 1)), (14, q(-4, 1)), (21, q(-10, 7)), (25, q(62, 3)), (28, q(-4, 21))];
    for fg in [product(&f, &g).unwrap(), product_by_splits(&f, &g).unwrap()] {
        let got: Vec<(u64, Rational)> = fg.terms().map(|(s, v)| (s.bits(), v.clone())).collect();
        assert_eq!(got, expected);
    }
}

#[test]
fn inclusion_ranks() {
    for ((l, n, m), rank) in
        [((8, 3, 2), 56), ((5, 2, 2), 5), ((6, 3, 1), 15), ((7, 3, 2), 21), ((4, 1, 3), 1), ((6, 2, 3), 6)]
    {
        assert_eq!(kantor_rank(l, n, m).unwrap().rank, rank, "(ℓ,n,m) = ({l},{n},{m})");
    }
}

#[test]
fn annihilator_dimension_of_e() {
    for ((l, n), nullity) in [((2, 1), 1), ((4, 2), 2), ((6, 3), 5), ((5, 3), 5), ((7, 4), 14)] {
        let e = SetFunction::e(l).unwrap();
        assert_eq!(annihilator_basis(&e, n).unwrap().len(), nullity, "ℓ={l}, n={n}");
    }
}

#[test]
fn transversal_numbers() {
    let fano = [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]];
    let fam = SetFamily::from_sets(7, fano.iter().map(|s| set(s))).unwrap();
    assert_eq!(tau(&fam).unwrap().size, 3);

    let petersen = [
        (0, 1),
        (0, 4),
        (0, 5),
        (1, 2),
        (1, 6),
        (2, 3),
        (2, 7),
        (3, 4),
        (3, 8),
        (4, 9),
        (5, 7),
        (5, 8),
        (6, 8),
        (6, 9),
        (7, 9),
    ];
    let fam = SetFamily::from_sets(10, petersen.iter().map(|&(a, b)| set(&[a, b]))).unwrap();
    assert_eq!(tau(&fam).unwrap().size, 6);

    let c7 = SetFamily::from_sets(7, (0..7).map(|i| set(&[i, (i + 1) % 7]))).unwrap();
    assert_eq!(tau(&c7).unwrap().size, 4);

    let k5 = SetFamily::from_sets(5, setalg::ksubsets(5, 2)).unwrap();
    assert_eq!(tau(&k5).unwrap().size, 4);

    let triples = SetFamily::from_sets(7, setalg::ksubsets(7, 3)).unwrap();
    assert_eq!(tau(&triples).unwrap().size, 5);
}

#[test]
fn graph_classes_per_order() {
    let counts: Vec<usize> = (0..=6).map(|l| corpus::all_graphs(l).len()).collect();
    assert_eq!(counts, [1, 1, 2, 4, 11, 34, 156]);
}

#[test]
fn graph_profiles() {
    let cycle = |l: usize| (0..l).map(|i| (i, (i + 1) % l)).collect::<Vec<_>>();
    type Case = (usize, Vec<(usize, usize)>, &'static [usize]);
    let cases: [Case; 5] = [
        (6, cycle(6), &[1, 1, 2, 3, 3, 1, 1]),
        (5, vec![(0, 1), (1, 2), (2, 3), (3, 4)], &[1, 1, 2, 3, 3, 1]),
        (5, vec![(0, 1), (0, 2), (0, 3), (0, 4)], &[1, 1, 2, 2, 2, 1]),
        (5, cycle(4), &[1, 1, 2, 3, 2, 1]),
        (6, vec![(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)], &[1, 1, 2, 2, 2, 1, 1]),
    ];
    for (l, edges, phi) in cases {
        let r = RelStructure::graph(l, &edges).unwrap();
        assert_eq!(profile_sequence(&r).unwrap(), phi, "{edges:?}");
    }
}

#[test]
fn max_shuffles() {
    let w = |m: &[u8]| Word::from_masks(m).unwrap();
    type Case = (&'static [u8], &'static [u8], &'static [u8], usize, usize);
    let cases: [Case; 4] = [
        (&[2, 1], &[2], &[2, 2, 1], 3, 2),
        (&[1, 3], &[2, 1], &[2, 1, 3, 1], 6, 5),
        (&[3], &[1, 2, 1], &[3, 1, 2, 1], 4, 4),
        (&[1, 2, 3], &[3, 1], &[3, 1, 2, 3, 1], 10, 8),
    ];
    for (u, v, best, positions, distinct) in cases {
        let (u, v) = (w(u), w(v));
        assert_eq!(max_shuffle(&u, &v), w(best));
        let all: Vec<Word> = shuffle_positions(u.len(), v.len()).map(|x| shuffle(&u, x, &v).unwrap()).collect();
        assert_eq!(all.len(), positions);
        let unique: std::collections::BTreeSet<_> = all.iter().collect();
        assert_eq!(unique.len(), distinct);
        assert_eq!(all.iter().max().unwrap(), &w(best));
    }
}
