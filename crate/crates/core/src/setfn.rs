//! Homogeneous elements of the set algebra and their convolution product
//! `fg(Q) = Σ_{P ∈ [Q]^m} f(P)·g(Q∖P)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::subset::{check_ground, ksubsets, splits, SetFamily, Subset};
use crate::Rational;

/// A map `[E]^m → ℚ` with finitely many nonzero values, `E = {0, .., ℓ-1}`.
///
/// Zero coefficients are never stored, so the key set is exactly the support.
#[derive(Clone, PartialEq, Eq)]
pub struct SetFunction {
    ground_size: usize,
    degree: usize,
    coeffs: BTreeMap<Subset, Rational>,
}

impl SetFunction {
    /// The zero function of the given degree.
    pub fn zero(ground_size: usize, degree: usize) -> Result<Self> {
        check_ground(ground_size)?;
        Ok(SetFunction { ground_size, degree, coeffs: BTreeMap::new() })
    }

    pub fn from_terms<I>(ground_size: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Subset, Rational)>,
    {
        let mut f = Self::zero(ground_size, degree)?;
        for (set, value) in terms {
            f.add_at(set, value)?;
        }
        Ok(f)
    }

    /// `1` on the empty set.
    pub fn unit(ground_size: usize) -> Result<Self> {
        Self::from_terms(ground_size, 0, [(Subset::EMPTY, Rational::one())])
    }

    /// The constant `1` on singletons.
    pub fn e(ground_size: usize) -> Result<Self> {
        if ground_size == 0 {
            return Err(Error::DegenerateDegree("e needs a nonempty ground set".into()));
        }
        Self::indicator(ground_size, 1, (0..ground_size).map(Subset::singleton))
    }

    /// `1` on each listed set of size `degree`.
    pub fn indicator<I: IntoIterator<Item = Subset>>(ground_size: usize, degree: usize, sets: I) -> Result<Self> {
        Self::from_terms(ground_size, degree, sets.into_iter().map(|s| (s, Rational::one())))
    }

    /// Degree-1 function with `f({x}) = weights[x]`.
    pub fn from_weights(weights: &[Rational]) -> Result<Self> {
        Self::from_terms(weights.len(), 1, weights.iter().enumerate().map(|(x, w)| (Subset::singleton(x), w.clone())))
    }

    /// Builds a function from a coefficient vector indexed by the colex
    /// enumeration of `[E]^degree`.
    pub fn from_dense(ground_size: usize, degree: usize, values: &[Rational]) -> Result<Self> {
        let basis = ksubsets(ground_size, degree);
        if basis.len() != values.len() {
            return Err(Error::Invalid(format!("dense vector has length {}, expected {}", values.len(), basis.len())));
        }
        Self::from_terms(ground_size, degree, basis.into_iter().zip(values.iter().cloned()))
    }

    /// Coefficient vector over the colex enumeration of `[E]^degree`.
    pub fn to_dense(&self) -> Vec<Rational> {
        ksubsets(self.ground_size, self.degree).into_iter().map(|s| self.value(s)).collect()
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn value(&self, set: Subset) -> Rational {
        self.coeffs.get(&set).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Subset, &Rational)> + '_ {
        self.coeffs.iter().map(|(s, v)| (*s, v))
    }

    pub fn support_sets(&self) -> impl Iterator<Item = Subset> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn support(&self) -> SetFamily {
        SetFamily::from_sets(self.ground_size, self.support_sets()).expect("support fits the ground set")
    }

    /// Union of the support elements.
    pub fn support_points(&self) -> Subset {
        self.support_sets().fold(Subset::EMPTY, Subset::union)
    }

    /// Sets `f(set) = value`, removing the entry when `value` is zero.
    pub fn set(&mut self, set: Subset, value: Rational) -> Result<()> {
        self.check_key(set)?;
        if value.is_zero() {
            self.coeffs.remove(&set);
        } else {
            self.coeffs.insert(set, value);
        }
        Ok(())
    }

    /// Adds `value` to `f(set)`.
    pub fn add_at(&mut self, set: Subset, value: Rational) -> Result<()> {
        self.check_key(set)?;
        add_into(&mut self.coeffs, set, value);
        Ok(())
    }

    fn check_key(&self, set: Subset) -> Result<()> {
        if !set.fits(self.ground_size) {
            return Err(Error::OutOfGround { set, ground_size: self.ground_size });
        }
        if set.len() != self.degree {
            return Err(Error::WrongCardinality { set, expected: self.degree, found: set.len() });
        }
        Ok(())
    }

    fn check_same_space(&self, other: &SetFunction) -> Result<()> {
        if self.ground_size != other.ground_size {
            return Err(Error::GroundMismatch { left: self.ground_size, right: other.ground_size });
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { left: self.degree, right: other.degree });
        }
        Ok(())
    }

    /// Sum of two functions of the same degree.
    pub fn add(&self, other: &SetFunction) -> Result<SetFunction> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (s, v) in &other.coeffs {
            add_into(&mut out.coeffs, *s, v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SetFunction) -> Result<SetFunction> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> SetFunction {
        if c.is_zero() {
            return SetFunction { coeffs: BTreeMap::new(), ..self.clone() };
        }
        SetFunction {
            ground_size: self.ground_size,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(s, v)| (*s, v * c)).collect(),
        }
    }

    /// The same function viewed on a larger ground set.
    pub fn extend_ground(&self, ground_size: usize) -> Result<SetFunction> {
        check_ground(ground_size)?;
        if ground_size < self.ground_size {
            return Err(Error::Invalid("cannot shrink the ground set".into()));
        }
        Ok(SetFunction { ground_size, ..self.clone() })
    }

    /// Transports the function along an injective relabelling of the ground set.
    pub fn relabel(&self, ground_size: usize, map: impl Fn(usize) -> usize) -> Result<SetFunction> {
        Self::from_terms(ground_size, self.degree, self.terms().map(|(s, v)| (s.map(&map), v.clone())))
    }

    /// Restriction to `[A]^degree`, keeping the original indexing.
    pub fn restrict(&self, to: Subset) -> SetFunction {
        SetFunction {
            ground_size: self.ground_size,
            degree: self.degree,
            coeffs: self.coeffs.iter().filter(|(s, _)| s.is_subset(to)).map(|(s, v)| (*s, v.clone())).collect(),
        }
    }
}

fn add_into(coeffs: &mut BTreeMap<Subset, Rational>, set: Subset, value: Rational) {
    if value.is_zero() {
        return;
    }
    let slot = coeffs.entry(set).or_insert_with(Rational::zero);
    *slot += value;
    if slot.is_zero() {
        coeffs.remove(&set);
    }
}

impl fmt::Debug for SetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetFunction(ℓ={}, deg={}; ", self.ground_size, self.degree)?;
        for (i, (s, v)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}: {v}")?;
        }
        write!(f, ")")
    }
}

/// The convolution product, enumerating disjoint pairs of support sets.
pub fn product(f: &SetFunction, g: &SetFunction) -> Result<SetFunction> {
    if f.ground_size != g.ground_size {
        return Err(Error::GroundMismatch { left: f.ground_size, right: g.ground_size });
    }
    let mut out = SetFunction { ground_size: f.ground_size, degree: f.degree + g.degree, coeffs: BTreeMap::new() };
    if out.degree > out.ground_size {
        return Ok(out);
    }
    for (a, fa) in &f.coeffs {
        for (b, gb) in &g.coeffs {
            if a.is_disjoint(*b) {
                add_into(&mut out.coeffs, a.union(*b), fa * gb);
            }
        }
    }
    Ok(out)
}

/// The convolution product evaluated literally: for every `Q` of size
/// `m + n`, sum `f(P)·g(Q∖P)` over all `P ∈ [Q]^m`.
///
/// Independent of [`product`]; used as the reference path when certifying
/// zero-divisor pairs.
pub fn product_by_splits(f: &SetFunction, g: &SetFunction) -> Result<SetFunction> {
    if f.ground_size != g.ground_size {
        return Err(Error::GroundMismatch { left: f.ground_size, right: g.ground_size });
    }
    let degree = f.degree + g.degree;
    let mut out = SetFunction::zero(f.ground_size, degree)?;
    for q in ksubsets(f.ground_size, degree) {
        let value = splits(q, f.degree).into_iter().fold(Rational::zero(), |acc, (p, rest)| {
            match (f.coeffs.get(&p), g.coeffs.get(&rest)) {
                (Some(a), Some(b)) => acc + a * b,
                _ => acc,
            }
        });
        out.set(q, value)?;
    }
    Ok(out)
}

/// The linear map `g ↦ fg` from degree `n` to degree `deg f + n`.
#[derive(Clone, Debug)]
pub struct MultOperator {
    f: SetFunction,
    target_degree: usize,
    matrix: RationalMatrix,
}

impl MultOperator {
    pub fn f(&self) -> &SetFunction {
        &self.f
    }

    pub fn target_degree(&self) -> usize {
        self.target_degree
    }

    /// Rows are the `(m+n)`-subsets and columns the `n`-subsets, both in colex order.
    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> RationalMatrix {
        self.matrix
    }

    /// `fg` computed as a matrix-vector product.
    pub fn apply(&self, g: &SetFunction) -> Result<SetFunction> {
        if g.ground_size != self.f.ground_size {
            return Err(Error::GroundMismatch { left: self.f.ground_size, right: g.ground_size });
        }
        if g.degree != self.target_degree {
            return Err(Error::DegreeMismatch { left: self.target_degree, right: g.degree });
        }
        let image = self.matrix.mul_vec(&g.to_dense());
        SetFunction::from_dense(self.f.ground_size, self.f.degree + self.target_degree, &image)
    }
}

/// Matrix of multiplication by `f` on degree-`n` functions:
/// `entry(Q, B) = f(Q∖B)` when `B ⊆ Q`, else 0.
pub fn mult_matrix(f: &SetFunction, n: usize) -> Result<MultOperator> {
    let l = f.ground_size;
    let row_degree = f.degree + n;
    if row_degree > l {
        return Err(Error::DegreeExceedsGround { degree: row_degree, ground_size: l });
    }
    let rows = ksubsets(l, row_degree);
    let cols = ksubsets(l, n);
    let mut matrix = RationalMatrix::zeros(rows.len(), cols.len());
    for (j, b) in cols.iter().enumerate() {
        for (a, fa) in &f.coeffs {
            if a.is_disjoint(*b) {
                matrix.set(a.union(*b).colex_rank(), j, fa.clone());
            }
        }
    }
    Ok(MultOperator { f: f.clone(), target_degree: n, matrix: matrix.with_labels(rows, cols) })
}

/// A nonzero `g` of degree `n` with `fg = 0`, if one exists.
///
/// Returns the first kernel basis vector of [`mult_matrix`]; the product is
/// rechecked before returning.
pub fn cofactor(f: &SetFunction, n: usize) -> Result<Option<SetFunction>> {
    if f.is_zero() {
        return Err(Error::ZeroFunctionCofactor);
    }
    let op = mult_matrix(f, n)?;
    let Some(first) = op.matrix.nullspace_basis().into_iter().next() else {
        return Ok(None);
    };
    let g = SetFunction::from_dense(f.ground_size, n, &first)?;
    assert!(!g.is_zero() && product(f, &g)?.is_zero(), "cofactor failed verification");
    Ok(Some(g))
}

/// Kernel basis of `g ↦ fg` on degree `n`, as set functions.
pub fn annihilator_basis(f: &SetFunction, n: usize) -> Result<Vec<SetFunction>> {
    let op = mult_matrix(f, n)?;
    op.matrix.nullspace_basis().iter().map(|v| SetFunction::from_dense(f.ground_size, n, v)).collect()
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    set: Subset,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct SetFunctionRepr {
    ground_size: usize,
    degree: usize,
    terms: Vec<TermRepr>,
}

impl Serialize for SetFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SetFunctionRepr {
            ground_size: self.ground_size,
            degree: self.degree,
            terms: self
                .coeffs
                .iter()
                .map(|(set, v)| TermRepr { set: *set, num: v.numer().to_string(), den: v.denom().to_string() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SetFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = SetFunctionRepr::deserialize(d)?;
        let mut f = SetFunction::zero(repr.ground_size, repr.degree).map_err(D::Error::custom)?;
        for t in repr.terms {
            let value = crate::parse_rational(&t.num, &t.den).map_err(D::Error::custom)?;
            f.add_at(t.set, value).map_err(D::Error::custom)?;
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn unit_and_e() {
        let u = SetFunction::unit(5).unwrap();
        assert_eq!(u.support_len(), 1);
        assert_eq!(SetFunction::e(3).unwrap().support_len(), 3);
        assert!(SetFunction::e(0).is_err());
        let f = SetFunction::from_terms(4, 2, [(Subset::from_indices([0, 3]), q(5))]).unwrap();
        assert_eq!(product(&SetFunction::unit(4).unwrap(), &f).unwrap(), f);
        assert!(u.extend_ground(4).is_err());
    }

    #[test]
    fn e_squared_on_a_pair() {
        let e = SetFunction::e(2).unwrap();
        let ee = product(&e, &e).unwrap();
        assert_eq!(ee.value(Subset::from_indices([0, 1])), q(2));
    }

    #[test]
    fn powers_of_e_count_orderings() {
        for n in 1..=5 {
            let e = SetFunction::e(6).unwrap();
            let mut pow = e.clone();
            for _ in 1..n {
                pow = product(&pow, &e).unwrap();
            }
            let factorial: i64 = (1..=n as i64).product();
            for s in ksubsets(6, n) {
                assert_eq!(pow.value(s), q(factorial));
            }
        }
    }

    #[test]
    fn ground_mismatch_is_rejected() {
        let a = SetFunction::e(3).unwrap();
        let b = SetFunction::e(4).unwrap();
        assert!(matches!(product(&a, &b), Err(Error::GroundMismatch { .. })));
    }

    #[test]
    fn unequal_degree_addition_is_rejected() {
        let e = SetFunction::e(3).unwrap();
        let u = SetFunction::unit(3).unwrap();
        assert!(matches!(e.add(&u), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn wrong_cardinality_key_is_rejected() {
        let mut f = SetFunction::zero(4, 2).unwrap();
        assert!(f.set(Subset::singleton(1), q(1)).is_err());
        assert!(f.set(Subset::from_indices([1, 5]), q(1)).is_err());
    }

    #[test]
    fn product_beyond_ground_is_zero() {
        let e = SetFunction::e(2).unwrap();
        let ee = product(&e, &e).unwrap();
        let eee = product(&ee, &e).unwrap();
        assert_eq!(eee.degree(), 3);
        assert!(eee.is_zero());
    }

    #[test]
    fn mult_matrix_shapes() {
        let u = SetFunction::unit(5).unwrap();
        let op = mult_matrix(&u, 2).unwrap();
        assert!(op.matrix().same_entries(&RationalMatrix::identity(10)));

        let e = SetFunction::e(4).unwrap();
        let op = mult_matrix(&e, 1).unwrap();
        let m = op.matrix();
        assert_eq!((m.rows(), m.cols()), (6, 4));
        let rows = m.row_labels().unwrap();
        let cols = m.col_labels().unwrap();
        for (i, r) in rows.iter().enumerate() {
            for (j, c) in cols.iter().enumerate() {
                let expected = if c.is_subset(*r) { q(1) } else { q(0) };
                assert_eq!(m.get(i, j), &expected);
            }
        }
        assert!(matches!(mult_matrix(&e, 4), Err(Error::DegreeExceedsGround { .. })));
    }

    #[test]
    fn cofactor_examples() {
        let e4 = SetFunction::e(4).unwrap();
        let g = cofactor(&e4, 2).unwrap().expect("e is a zero divisor on 2n points");
        assert!(!g.is_zero());
        assert!(product(&e4, &g).unwrap().is_zero());

        let e5 = SetFunction::e(5).unwrap();
        assert_eq!(cofactor(&e5, 2).unwrap(), None);

        for n in 0..=4 {
            assert_eq!(cofactor(&SetFunction::unit(4).unwrap(), n).unwrap(), None);
        }
        assert_eq!(cofactor(&SetFunction::zero(4, 1).unwrap(), 1), Err(Error::ZeroFunctionCofactor));
    }

    #[test]
    fn json_shape() {
        let f = SetFunction::from_terms(
            3,
            1,
            [(Subset::singleton(0), Rational::new(1.into(), 2.into())), (Subset::singleton(2), q(-3))],
        )
        .unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(
            json,
            r#"{"ground_size":3,"degree":1,"terms":[{"set":[0],"num":"1","den":"2"},{"set":[2],"num":"-3","den":"1"}]}"#
        );
        let back: SetFunction = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<SetFunction>(
            r#"{"ground_size":3,"degree":1,"terms":[{"set":[0,1],"num":"1","den":"1"}]}"#
        )
        .is_err());
    }
}
