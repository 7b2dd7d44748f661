use proptest::prelude::*;

use setalg::incidence::check_commutation;
use setalg::relational::{canonical_form, corpus, invariant_basis, is_invariant, profile};
use setalg::setfn::annihilator_basis;
use setalg::sign::chi;
use setalg::transversal::greedy_cover;
use setalg::witness::{self, discharge};
use setalg::words::{lex_compare, max_shuffle, radix_compare, shuffle, shuffle_positions, Word};
use setalg::{
    is_minimal_transversal, is_transversal, ksubsets, mult_matrix, product, product_by_splits, tau, Rational,
    SetFamily, SetFunction, Subset,
};

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

/// A function of the given degree on `l` points with up to `max_terms` terms.
fn set_function(l: usize, degree: usize, max_terms: usize) -> impl Strategy<Value = SetFunction> {
    let sets = ksubsets(l, degree);
    let count = sets.len();
    prop::collection::vec((0..count, rational()), 0..=max_terms).prop_map(move |terms| {
        SetFunction::from_terms(l, degree, terms.into_iter().map(|(i, v)| (sets[i], v))).unwrap()
    })
}

/// `(f, g)` on a common ground with `deg f + deg g ≤ ℓ`.
fn two_functions() -> impl Strategy<Value = (SetFunction, SetFunction)> {
    (1usize..=7)
        .prop_flat_map(|l| (Just(l), 0..=l))
        .prop_flat_map(|(l, m)| (Just(l), Just(m), 0..=l - m))
        .prop_flat_map(|(l, m, n)| (set_function(l, m, 8), set_function(l, n, 8)))
}

fn three_functions() -> impl Strategy<Value = (SetFunction, SetFunction, SetFunction)> {
    (1usize..=7)
        .prop_flat_map(|l| (Just(l), 0..=l / 2, 0..=l / 3))
        .prop_flat_map(|(l, a, b)| (Just(l), Just(a), Just(b), 0..=l - a - b))
        .prop_flat_map(|(l, a, b, c)| (set_function(l, a, 6), set_function(l, b, 6), set_function(l, c, 6)))
}

fn family() -> impl Strategy<Value = SetFamily> {
    (1usize..=10).prop_flat_map(|l| {
        prop::collection::vec(1u64..(1 << l), 0..12)
            .prop_map(move |masks| SetFamily::from_sets(l, masks.into_iter().map(Subset::from_bits)).unwrap())
    })
}

fn brute_tau(f: &SetFamily) -> usize {
    let l = f.ground_size();
    (0u64..1 << l).map(Subset::from_bits).filter(|t| is_transversal(*t, f)).map(Subset::len).min().unwrap()
}

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(1u8..=3, 0..=max_len).prop_map(|m| Word::from_masks(&m).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn product_commutes((f, g) in two_functions()) {
        prop_assert_eq!(product(&f, &g).unwrap(), product(&g, &f).unwrap());
    }

    #[test]
    fn product_matches_splitting_definition((f, g) in two_functions()) {
        prop_assert_eq!(product(&f, &g).unwrap(), product_by_splits(&f, &g).unwrap());
    }

    #[test]
    fn product_associates((f, g, h) in three_functions()) {
        let left = product(&product(&f, &g).unwrap(), &h).unwrap();
        let right = product(&f, &product(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn product_is_bilinear((f, g) in two_functions(), c in rational()) {
        let f2 = f.scale(&c).add(&f).unwrap();
        let lhs = product(&f2, &g).unwrap();
        let fg = product(&f, &g).unwrap();
        prop_assert_eq!(lhs, fg.scale(&c).add(&fg).unwrap());
        prop_assert_eq!(product(&f, &g.scale(&c)).unwrap(), fg.scale(&c));
    }

    #[test]
    fn unit_is_neutral((f, _g) in two_functions()) {
        let one = SetFunction::unit(f.ground_size()).unwrap();
        prop_assert_eq!(product(&one, &f).unwrap(), f);
    }

    #[test]
    fn relabelling_is_a_ring_map((f, g) in two_functions(), shift in 0usize..7) {
        let l = f.ground_size();
        let map = |x: usize| (x + shift) % l;
        let lhs = product(&f, &g).unwrap().relabel(l, map).unwrap();
        let rhs = product(&f.relabel(l, map).unwrap(), &g.relabel(l, map).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn multiplication_matrix_applies_product((f, g) in two_functions()) {
        let op = mult_matrix(&f, g.degree()).unwrap();
        prop_assert_eq!(op.apply(&g).unwrap(), product(&f, &g).unwrap());
    }

    #[test]
    fn rank_plus_nullity((f, g) in two_functions()) {
        let n = g.degree();
        let op = mult_matrix(&f, n).unwrap();
        let basis = annihilator_basis(&f, n).unwrap();
        prop_assert_eq!(op.matrix().rank() + basis.len(), op.matrix().cols());
        for b in basis {
            prop_assert!(!b.is_zero());
            prop_assert!(product(&f, &b).unwrap().is_zero());
        }
    }

    #[test]
    fn json_round_trip((f, _g) in two_functions()) {
        let text = serde_json::to_string(&f).unwrap();
        let back: SetFunction = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
        prop_assert_eq!(back, f);
    }

    #[test]
    fn commutation_identity(l in 1usize..=6, n in 0usize..=3, w in prop::collection::vec(rational(), 6)) {
        prop_assume!(n < l);
        let f = SetFunction::from_weights(&w[..l]).unwrap();
        prop_assert!(check_commutation(&f, n).unwrap());
    }

    #[test]
    fn tau_matches_exhaustive_search(fam in family()) {
        let r = tau(&fam).unwrap();
        prop_assert_eq!(r.size, brute_tau(&fam));
        prop_assert_eq!(r.witness.len(), r.size);
        prop_assert!(is_transversal(r.witness, &fam));
        prop_assert!(is_minimal_transversal(r.witness, &fam));
        prop_assert!(r.size <= greedy_cover(fam.sets()).len());
    }

    #[test]
    fn tau_is_monotone(fam in family(), extra in 1u64..1024) {
        let l = fam.ground_size();
        let extra = Subset::from_bits(extra & ((1 << l) - 1));
        prop_assume!(!extra.is_empty());
        let mut bigger = fam.clone();
        bigger.insert(extra).unwrap();
        prop_assert!(tau(&fam).unwrap().size <= tau(&bigger).unwrap().size);
    }

    #[test]
    fn cofactors_certify(l in 2usize..=6, m in 1usize..=2, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        prop_assume!(2 * m <= l);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let sets = ksubsets(l, m);
        let mut terms = Vec::new();
        for s in &sets {
            if rng.gen_bool(0.6) {
                terms.push((*s, Rational::from_integer(rng.gen_range(-2i64..=2).into())));
            }
        }
        let f = SetFunction::from_terms(l, m, terms).unwrap();
        prop_assume!(!f.is_zero());
        if let Some(g) = setalg::cofactor(&f, l - m).unwrap() {
            let cert = witness::certify(f, g).unwrap();
            prop_assert!(product_by_splits(cert.pair.f(), cert.pair.g()).unwrap().is_zero());
            prop_assert!(is_transversal(cert.tau_witness, &cert.pair.support()));
        }
    }

    #[test]
    fn radix_order_is_total(u in word(5), v in word(5), w in word(5)) {
        prop_assert_eq!(radix_compare(&u, &v), u.cmp(&v));
        prop_assert_eq!(radix_compare(&u, &v), radix_compare(&v, &u).reverse());
        prop_assert_eq!(radix_compare(&u, &v) == std::cmp::Ordering::Equal, u == v);
        if u <= v && v <= w {
            prop_assert!(u <= w);
        }
        if u.len() == v.len() {
            prop_assert_eq!(radix_compare(&u, &v), lex_compare(&u, &v));
        }
    }

    #[test]
    fn shuffles_interleave_and_stay_below_max(u in word(4), v in word(4), pick in any::<prop::sample::Index>()) {
        let positions: Vec<Subset> = shuffle_positions(u.len(), v.len()).collect();
        let x = positions[pick.index(positions.len())];
        let s = shuffle(&u, x, &v).unwrap();
        let all = Subset::full(u.len() + v.len());
        prop_assert_eq!(s.restrict(x), u.clone());
        prop_assert_eq!(s.restrict(all.difference(x)), v.clone());
        prop_assert!(s <= max_shuffle(&u, &v));
    }

    #[test]
    fn shuffle_is_monotone_in_each_argument(u in word(3), u2 in word(3), v in word(3), pick in any::<prop::sample::Index>()) {
        prop_assume!(u.len() == u2.len() && u != u2);
        let positions: Vec<Subset> = shuffle_positions(u.len(), v.len()).collect();
        let x = positions[pick.index(positions.len())];
        let a = shuffle(&u, x, &v).unwrap();
        let b = shuffle(&u2, x, &v).unwrap();
        prop_assert_eq!(lex_compare(&a, &b), lex_compare(&u, &u2));
    }

    #[test]
    fn chi_is_multiplicative(a in rational(), b in rational()) {
        prop_assert_eq!(chi(&(&a * &b)), chi(&a) * chi(&b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn canonical_form_ignores_labels(mask in 0u64..(1 << 10), perm in Just((0..5).collect::<Vec<usize>>()).prop_shuffle()) {
        let g = setalg::relational::RelStructure::graph_from_mask(5, mask);
        prop_assert_eq!(canonical_form(&g).unwrap(), canonical_form(&g.permuted(&perm)).unwrap());
    }

    #[test]
    fn profile_counts_invariant_basis(seed in any::<u64>(), l in 1usize..=5, binary in any::<bool>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let sig: &[usize] = if binary { &[2] } else { &[1, 2] };
        let r = corpus::random_structure(&mut rng, l, sig, 0.4);
        for n in 0..=l {
            let basis = invariant_basis(&r, n).unwrap();
            prop_assert_eq!(profile(&r, n).unwrap(), basis.len());
        }
        for a in 0..=l / 2 {
            for b in 0..=(l - a).min(2) {
                let fa = invariant_basis(&r, a).unwrap();
                let fb = invariant_basis(&r, b).unwrap();
                for f in &fa {
                    for g in &fb {
                        prop_assert!(is_invariant(&r, &product(f, g).unwrap()).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn discharging_stays_within_bound(which in 0usize..4, extra in any::<u64>()) {
        let pair = match which {
            0 => witness::gadget_tau1n(2).unwrap(),
            1 => witness::gadget_lower(1, 2).unwrap(),
            2 => witness::gadget_lower(2, 2).unwrap(),
            _ => witness::two_squares(),
        };
        let l = pair.ground_size();
        let base = tau(&pair.f().support()).unwrap().witness;
        let a = base.union(Subset::from_bits(extra & ((1u64 << l) - 1) & 0x5555_5555));
        let out = discharge(&pair, a).unwrap();
        prop_assert!(a.is_subset(out.transversal));
        prop_assert!(is_transversal(out.transversal, &pair.support()));
        prop_assert!(out.within_bound(), "{:?}", out);
    }
}
