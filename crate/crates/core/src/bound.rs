//! Symbolic upper bound for `τ(m, n)` from the Ramsey recurrence
//!
//! ```text
//! φ(m, n) = n + m·(ν(n+m) − 1) + τ(m−1, n),   ν(l) = R^r_k(l)
//! r = max(m, n),  s = C(mr+n, m) + C(mr+n, n),  k = 5^s
//! ```
//!
//! Ramsey numbers are never evaluated. `τ(0, ·) = 0` and `τ(1, j) = 2j` are
//! substituted as exact values; deeper `τ` references are expanded recursively,
//! and the result is collected into an integer linear form over Ramsey symbols.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::subset::binomial;

/// `R^r_k(l)` with `k = 5^s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RamseySymbol {
    pub r: BigUint,
    /// Exponent `s` of `k = 5^s`.
    pub s: BigUint,
    pub l: BigUint,
}

impl RamseySymbol {
    /// The number of colours `k = 5^s`, as an exact integer.
    pub fn k(&self) -> BigUint {
        let s: u32 = self.s.clone().try_into().expect("exponent fits in u32");
        BigUint::from(5u32).pow(s)
    }
}

fn superscript(n: &BigUint) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}

impl fmt::Display for RamseySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R{}_{{5^{}}}({})", superscript(&self.r), self.s, self.l)
    }
}

/// Expression tree for the recurrence before expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Ramsey(RamseySymbol),
    /// Reference to `τ(m, n)`.
    Tau(usize, usize),
    Sum(Vec<Expr>),
    Product(Box<Expr>, Box<Expr>),
}

impl Expr {
    fn int(v: i64) -> Expr {
        Expr::Int(BigInt::from(v))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(v) => write!(f, "{v}"),
            Expr::Ramsey(r) => write!(f, "{r}"),
            Expr::Tau(m, n) => write!(f, "τ({m},{n})"),
            Expr::Sum(terms) => {
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            Expr::Product(a, b) => {
                let wrap = |e: &Expr| matches!(e, Expr::Sum(_));
                let (pa, pb) = (wrap(a), wrap(b));
                write!(
                    f,
                    "{}{a}{}·{}{b}{}",
                    if pa { "(" } else { "" },
                    if pa { ")" } else { "" },
                    if pb { "(" } else { "" },
                    if pb { ")" } else { "" }
                )
            }
        }
    }
}

/// `constant + Σ coeff·R` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearForm {
    pub constant: BigInt,
    pub terms: BTreeMap<RamseySymbol, BigInt>,
}

impl LinearForm {
    fn constant(v: BigInt) -> Self {
        LinearForm { constant: v, terms: BTreeMap::new() }
    }

    fn add(mut self, other: LinearForm) -> Self {
        self.constant += other.constant;
        for (sym, c) in other.terms {
            *self.terms.entry(sym).or_insert_with(BigInt::zero) += c;
        }
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    fn scale(mut self, by: &BigInt) -> Self {
        self.constant *= by;
        for c in self.terms.values_mut() {
            *c *= by;
        }
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    /// The value when no Ramsey symbol remains.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.terms.is_empty().then_some(&self.constant)
    }

    pub fn ramsey_symbols(&self) -> impl Iterator<Item = &RamseySymbol> {
        self.terms.keys()
    }

    fn fmt_terms(&self, f: &mut fmt::Formatter<'_>, divisor: &BigInt) -> fmt::Result {
        let mut first = true;
        // larger colour counts first
        for (sym, c) in self.terms.iter().rev() {
            let c = c / divisor;
            write_signed(f, &c, first, Some(sym))?;
            first = false;
        }
        let c = &self.constant / divisor;
        if !c.is_zero() || first {
            write_signed(f, &c, first, None)?;
        }
        Ok(())
    }
}

fn write_signed(f: &mut fmt::Formatter<'_>, c: &BigInt, first: bool, sym: Option<&RamseySymbol>) -> fmt::Result {
    let neg = c.is_negative();
    if neg {
        write!(f, "-")?;
    } else if !first {
        write!(f, "+")?;
    }
    let abs = c.abs();
    match sym {
        Some(s) if abs.is_one() => write!(f, "{s}"),
        Some(s) => write!(f, "{abs}·{s}"),
        None => write!(f, "{abs}"),
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "{}", self.constant);
        }
        let g = self.terms.values().chain(std::iter::once(&self.constant)).fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if g > BigInt::one() && !self.constant.is_zero() {
            write!(f, "{g}·(")?;
            self.fmt_terms(f, &g)?;
            write!(f, ")")
        } else {
            self.fmt_terms(f, &BigInt::one())
        }
    }
}

/// Exact values of `τ` that the expansion substitutes.
pub fn known_tau(m: usize, n: usize) -> Option<u64> {
    match (m.min(n), m.max(n)) {
        (0, _) => Some(0),
        (1, j) => Some(2 * j as u64),
        _ => None,
    }
}

/// Constants `(r, s)` of the recurrence at `(m, n)`.
pub fn constants(m: usize, n: usize) -> (usize, usize) {
    let r = m.max(n);
    let top = m * r + n;
    let s = binomial(top, m) + binomial(top, n);
    (r, usize::try_from(s).expect("s fits in usize"))
}

/// `φ(m, n)` as an unexpanded tree; requires `m ≥ 1`.
pub fn phi_tree(m: usize, n: usize) -> Expr {
    assert!(m >= 1, "φ is defined for m ≥ 1");
    let (r, s) = constants(m, n);
    let nu = RamseySymbol { r: r.into(), s: s.into(), l: (n + m).into() };
    Expr::Sum(vec![
        Expr::int(n as i64),
        Expr::Product(Box::new(Expr::int(m as i64)), Box::new(Expr::Sum(vec![Expr::Ramsey(nu), Expr::int(-1)]))),
        Expr::Tau(m - 1, n),
    ])
}

/// Collects an expression into linear form, expanding `τ` references.
pub fn expand(e: &Expr) -> LinearForm {
    match e {
        Expr::Int(v) => LinearForm::constant(v.clone()),
        Expr::Ramsey(sym) => {
            LinearForm { constant: BigInt::zero(), terms: BTreeMap::from([(sym.clone(), BigInt::one())]) }
        }
        Expr::Tau(m, n) => tau_upper_form(*m, *n),
        Expr::Sum(terms) => terms.iter().map(expand).fold(LinearForm::default(), LinearForm::add),
        Expr::Product(a, b) => {
            let (la, lb) = (expand(a), expand(b));
            match (la.as_integer(), lb.as_integer()) {
                (Some(c), _) => lb.scale(c),
                (_, Some(c)) => la.scale(c),
                _ => panic!("recurrence is linear in Ramsey symbols"),
            }
        }
    }
}

/// Linear form of the bound on `τ(m, n)`, using symmetry to put `m ≤ n`.
fn tau_upper_form(m: usize, n: usize) -> LinearForm {
    if let Some(v) = known_tau(m, n) {
        return LinearForm::constant(v.into());
    }
    let (a, b) = (m.min(n), m.max(n));
    expand(&phi_tree(a, b))
}

/// The bound on `τ(m, n)` together with the recurrence data behind it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundExpression {
    pub m: usize,
    pub n: usize,
    /// `(r, s)` for the pair actually expanded, after ordering `m ≤ n`.
    pub r: usize,
    pub s: usize,
    /// Exact value when one is known (`min(m,n) ≤ 1`).
    pub exact: Option<u64>,
    /// `φ(m, n)` unexpanded, when `min(m, n) ≥ 1`.
    pub phi: Option<Expr>,
    /// `φ(m, n)` collected into linear form.
    pub phi_expanded: Option<LinearForm>,
    /// The bound as stated with `φ(m, m)` in place of `φ(m, n)`, when `min(m, n) ≥ 1`.
    pub phi_mm_reading: Option<LinearForm>,
    /// The bound used: the exact value if known, otherwise `phi_expanded`.
    pub bound: LinearForm,
}

impl BoundExpression {
    pub fn has_ramsey_symbol(&self) -> bool {
        !self.bound.terms.is_empty()
    }
}

impl fmt::Display for BoundExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bound)
    }
}

impl Serialize for BoundExpression {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("BoundExpression", 8)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("r", &self.r)?;
        st.serialize_field("s", &self.s)?;
        st.serialize_field("exact", &self.exact)?;
        st.serialize_field("phi", &self.phi_expanded.as_ref().map(ToString::to_string))?;
        st.serialize_field("phi_mm_reading", &self.phi_mm_reading.as_ref().map(ToString::to_string))?;
        st.serialize_field("bound", &self.bound.to_string())?;
        st.end()
    }
}

pub fn tau_upper_expr(m: usize, n: usize) -> BoundExpression {
    let (a, b) = (m.min(n), m.max(n));
    let exact = known_tau(a, b);
    let (phi, phi_expanded, phi_mm_reading) = if a >= 1 {
        let tree = phi_tree(a, b);
        let expanded = expand(&tree);
        (Some(tree), Some(expanded), Some(expand(&phi_tree(a, a))))
    } else {
        (None, None, None)
    };
    let bound = match exact {
        Some(v) => LinearForm::constant(v.into()),
        None => phi_expanded.clone().expect("min(m,n) ≥ 2 here"),
    };
    let (r, s) = if a >= 1 { constants(a, b) } else { (b, 0) };
    BoundExpression { m, n, r, s, exact, phi, phi_expanded, phi_mm_reading, bound }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_degree_is_zero() {
        for n in 0..5 {
            let b = tau_upper_expr(0, n);
            assert_eq!(b.to_string(), "0");
            assert_eq!(b.exact, Some(0));
        }
    }

    #[test]
    fn two_two_matches_printed_bound() {
        let b = tau_upper_expr(2, 2);
        assert_eq!((b.r, b.s), (2, 30));
        assert_eq!(b.to_string(), "2·(R²_{5^30}(4)+2)");
        assert!(b.has_ramsey_symbol());
        assert_eq!(b.phi.as_ref().unwrap().to_string(), "2+2·(R²_{5^30}(4)+-1)+τ(1,2)");
    }

    #[test]
    fn one_two_keeps_exact_value() {
        let b = tau_upper_expr(1, 2);
        assert_eq!(b.exact, Some(4));
        assert_eq!(b.to_string(), "4");
        assert_eq!(b.s, 10);
        // n + m(ν - 1) + τ(0, n) = 2 + R - 1
        assert_eq!(b.phi_expanded.unwrap().to_string(), "R²_{5^10}(3)+1");
    }

    #[test]
    fn deeper_levels_nest() {
        let b = tau_upper_expr(3, 3);
        assert_eq!(b.bound.ramsey_symbols().count(), 2);
        assert_eq!(tau_upper_expr(3, 2).bound, tau_upper_expr(2, 3).bound);
        assert_eq!(tau_upper_expr(5, 1).exact, Some(10));
    }

    #[test]
    fn colour_count_is_exact() {
        let sym = RamseySymbol { r: 2u32.into(), s: 30u32.into(), l: 4u32.into() };
        assert_eq!(sym.k(), BigUint::from(931_322_574_615_478_515_625u128));
    }
}
