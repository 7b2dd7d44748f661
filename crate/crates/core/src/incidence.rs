//! Inclusion matrices `M_{n,n+m}`, the weighted derivations `D_f` and scalings
//! `φ_f` on square-free monomials, and the kernel checks built on them.
//!
//! A square-free monomial `Π_{x∈B} X_x` is identified with its variable set
//! `B`, so the degree-`n` square-free space has the colex `n`-subsets as basis.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::relational::{invariant_basis, RelStructure};
use crate::setfn::{mult_matrix, SetFunction};
use crate::subset::{ksubsets, Subset};
use crate::Rational;

/// Basis of the square-free degree-`n` component over an `ℓ`-element set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareFreeSpace {
    ground_size: usize,
    degree: usize,
    basis: Vec<Subset>,
}

impl SquareFreeSpace {
    pub fn new(ground_size: usize, degree: usize) -> Self {
        SquareFreeSpace { ground_size, degree, basis: ksubsets(ground_size, degree) }
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn basis(&self) -> &[Subset] {
        &self.basis
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// 0/1 matrix with rows the `n`-subsets, columns the `(n+m)`-subsets, and a 1
/// exactly where the row set is contained in the column set.
pub fn inclusion_matrix(ground_size: usize, n: usize, m: usize) -> Result<RationalMatrix> {
    if n + m > ground_size {
        return Err(Error::DegreeExceedsGround { degree: n + m, ground_size });
    }
    let rows = ksubsets(ground_size, n);
    let cols = ksubsets(ground_size, n + m);
    let mut matrix = RationalMatrix::zeros(rows.len(), cols.len());
    for (i, p) in rows.iter().enumerate() {
        for (j, q) in cols.iter().enumerate() {
            if p.is_subset(*q) {
                matrix.set(i, j, Rational::one());
            }
        }
    }
    Ok(matrix.with_labels(rows, cols))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KantorCheck {
    pub rank: usize,
    pub rows: usize,
}

impl KantorCheck {
    pub fn full_row_rank(&self) -> bool {
        self.rank == self.rows
    }
}

/// Rank of `M_{n,n+m}` against its row count `C(ℓ,n)`.
pub fn kantor_rank(ground_size: usize, n: usize, m: usize) -> Result<KantorCheck> {
    let matrix = inclusion_matrix(ground_size, n, m)?;
    Ok(KantorCheck { rank: matrix.rank(), rows: matrix.rows() })
}

/// Whether `M_{n,n+m}` has full row rank; guaranteed when `2n + m ≤ ℓ`.
pub fn verify_kantor(ground_size: usize, n: usize, m: usize) -> Result<bool> {
    Ok(kantor_rank(ground_size, n, m)?.full_row_rank())
}

fn degree_one_weights(f: &SetFunction) -> Result<Vec<Rational>> {
    if f.degree() != 1 {
        return Err(Error::NotDegreeOne(f.degree()));
    }
    Ok((0..f.ground_size()).map(|x| f.value(Subset::singleton(x))).collect())
}

/// Matrix of `D_f` from degree `n+1` to degree `n`: the column of `Q` has
/// `f({x})` in the row of `Q ∖ {x}` for each `x ∈ Q`.
pub fn derivation_matrix(f: &SetFunction, n: usize) -> Result<RationalMatrix> {
    let weights = degree_one_weights(f)?;
    let l = f.ground_size();
    if n + 1 > l {
        return Err(Error::DegreeExceedsGround { degree: n + 1, ground_size: l });
    }
    let rows = ksubsets(l, n);
    let cols = ksubsets(l, n + 1);
    let mut matrix = RationalMatrix::zeros(rows.len(), cols.len());
    for (j, q) in cols.iter().enumerate() {
        for x in q.iter() {
            if !weights[x].is_zero() {
                matrix.set(q.without(x).colex_rank(), j, weights[x].clone());
            }
        }
    }
    Ok(matrix.with_labels(rows, cols))
}

/// Diagonal matrix of `φ_f` on degree `n`: `Π_{x∈B} f({x})` at `B`.
pub fn scaling_matrix(f: &SetFunction, n: usize) -> Result<RationalMatrix> {
    let weights = degree_one_weights(f)?;
    let l = f.ground_size();
    if n > l {
        return Err(Error::DegreeExceedsGround { degree: n, ground_size: l });
    }
    let basis = ksubsets(l, n);
    let mut matrix = RationalMatrix::zeros(basis.len(), basis.len());
    for (i, b) in basis.iter().enumerate() {
        let w = b.iter().fold(Rational::one(), |acc, x| acc * &weights[x]);
        matrix.set(i, i, w);
    }
    Ok(matrix.with_labels(basis.clone(), basis))
}

/// Applies `D_f` to a single monomial `Π_{x∈Q} X_x`, returning `(monomial, coefficient)` terms.
pub fn derive_monomial(f: &SetFunction, q: Subset) -> Result<Vec<(Subset, Rational)>> {
    let weights = degree_one_weights(f)?;
    Ok(q.iter().filter(|&x| !weights[x].is_zero()).map(|x| (q.without(x), weights[x].clone())).collect())
}

/// `D_e ∘ φ_f = φ_f ∘ D_f` on the degree-`(n+1)` component, compared exactly.
pub fn check_commutation(f: &SetFunction, n: usize) -> Result<bool> {
    let e = SetFunction::e(f.ground_size())?;
    let left = derivation_matrix(&e, n)?.mul(&scaling_matrix(f, n + 1)?);
    let right = scaling_matrix(f, n)?.mul(&derivation_matrix(f, n)?);
    Ok(left.same_entries(&right))
}

/// Whether `D_f` maps degree `n+1` onto degree `n` (full row rank).
pub fn derivation_surjective(f: &SetFunction, n: usize) -> Result<bool> {
    let d = derivation_matrix(f, n)?;
    Ok(d.rank() == d.rows())
}

/// True iff `g ↦ fg` is injective on degree `n`, i.e. `fg = 0` forces `g = 0`.
/// Holds whenever `f` is nonzero on at least `2n + 1` points.
pub fn weighted_kantor_check(f: &SetFunction, n: usize) -> Result<bool> {
    if f.degree() != 1 {
        return Err(Error::NotDegreeOne(f.degree()));
    }
    let op = mult_matrix(f, n)?;
    Ok(op.matrix().rank() == op.matrix().cols())
}

/// Whether multiplication by `e` is injective on the `R`-invariant functions
/// of degree `n`. Guaranteed when `2n + 1 ≤ ℓ`; reported, not asserted, below that.
pub fn e_regular_on_invariants(r: &RelStructure, n: usize) -> Result<bool> {
    let l = r.base_size();
    let e = SetFunction::e(l)?;
    let op = mult_matrix(&e, n)?;
    let basis = invariant_basis(r, n)?;
    let columns: Vec<Vec<Rational>> = basis.iter().map(SetFunction::to_dense).collect();
    let mut b = RationalMatrix::zeros(op.matrix().cols(), columns.len());
    for (j, col) in columns.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            if !v.is_zero() {
                b.set(i, j, v.clone());
            }
        }
    }
    let restricted = op.matrix().mul(&b);
    Ok(restricted.rank() == columns.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn inclusion_matrix_examples() {
        let m = inclusion_matrix(4, 1, 1).unwrap();
        assert_eq!((m.rows(), m.cols()), (4, 6));
        for j in 0..6 {
            let ones = (0..4).filter(|&i| m.get(i, j) == &q(1)).count();
            assert_eq!(ones, 2);
        }
        assert!(inclusion_matrix(4, 2, 0).unwrap().same_entries(&RationalMatrix::identity(6)));
        let m = inclusion_matrix(3, 2, 1).unwrap();
        assert_eq!((m.rows(), m.cols(), m.rank()), (3, 1, 1));
        assert!(inclusion_matrix(3, 2, 2).is_err());
    }

    #[test]
    fn kantor_examples() {
        assert_eq!(kantor_rank(5, 2, 1).unwrap(), KantorCheck { rank: 10, rows: 10 });
        assert_eq!(kantor_rank(8, 3, 2).unwrap(), KantorCheck { rank: 56, rows: 56 });
        assert!(!verify_kantor(3, 2, 1).unwrap());
    }

    #[test]
    fn derivation_of_a_cubic_monomial() {
        let xyz = Subset::from_indices([0, 1, 2]);
        let e = SetFunction::e(3).unwrap();
        let mut terms = derive_monomial(&e, xyz).unwrap();
        terms.sort();
        assert_eq!(
            terms,
            vec![
                (Subset::from_indices([0, 1]), q(1)),
                (Subset::from_indices([0, 2]), q(1)),
                (Subset::from_indices([1, 2]), q(1)),
            ]
        );
        let f = SetFunction::from_weights(&[q(2), q(3), q(5)]).unwrap();
        let terms = derive_monomial(&f, xyz).unwrap();
        // X_0 removed carries f({0}), and so on
        assert!(terms.contains(&(Subset::from_indices([1, 2]), q(2))));
        assert!(terms.contains(&(Subset::from_indices([0, 2]), q(3))));
        assert!(terms.contains(&(Subset::from_indices([0, 1]), q(5))));
        let d = derivation_matrix(&f, 2).unwrap();
        assert_eq!(d.get(Subset::from_indices([0, 1]).colex_rank(), 0), &q(5));
    }

    #[test]
    fn scaling_of_a_pair() {
        let f = SetFunction::from_weights(&[q(2), q(3), q(7)]).unwrap();
        let s = scaling_matrix(&f, 2).unwrap();
        assert_eq!(s.get(0, 0), &q(6));
    }

    #[test]
    fn commutation_with_e_and_zero_weights() {
        let e = SetFunction::e(5).unwrap();
        assert!(check_commutation(&e, 2).unwrap());
        let f = SetFunction::from_weights(&[q(0), q(3), q(-1), q(0), q(4), q(2)]).unwrap();
        assert!(check_commutation(&f, 2).unwrap());
        assert_eq!(check_commutation(&SetFunction::unit(3).unwrap(), 1), Err(Error::NotDegreeOne(0)));
    }

    #[test]
    fn derivation_of_e_is_the_inclusion_matrix() {
        for l in 1..=6 {
            for n in 0..l {
                let d = derivation_matrix(&SetFunction::e(l).unwrap(), n).unwrap();
                assert!(d.same_entries(&inclusion_matrix(l, n, 1).unwrap()));
            }
        }
    }

    #[test]
    fn weighted_kantor_examples() {
        // nonzero on exactly 2n+1 of 2n+2 points
        for n in 1..=3 {
            let mut w: Vec<Rational> = (1..=(2 * n + 2) as i64).map(q).collect();
            w[0] = q(0);
            assert!(weighted_kantor_check(&SetFunction::from_weights(&w).unwrap(), n).unwrap());
            assert!(!weighted_kantor_check(&SetFunction::e(2 * n).unwrap(), n).unwrap());
            assert!(weighted_kantor_check(&SetFunction::e(2 * n + 1).unwrap(), n).unwrap());
        }
    }

    #[test]
    fn surjectivity_matches_kernel_triviality() {
        for l in 2..=7 {
            for n in 0..l {
                let f = SetFunction::from_weights(&(1..=l as i64).map(q).collect::<Vec<_>>()).unwrap();
                assert_eq!(derivation_surjective(&f, n).unwrap(), weighted_kantor_check(&f, n).unwrap());
            }
        }
    }

    #[test]
    fn e_regular_examples() {
        assert!(e_regular_on_invariants(&RelStructure::empty(5), 2).unwrap());
        let g = RelStructure::graph(5, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(e_regular_on_invariants(&g, 2).unwrap());
        // below the 2n+1 regime the answer is only reported
        let _ = e_regular_on_invariants(&RelStructure::graph(4, &[(0, 1), (2, 3)]).unwrap(), 2).unwrap();
    }
}
