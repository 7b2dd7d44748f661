//! Exact workbench for the set algebra of weighted set functions, the age
//! algebra of finite relational structures, and the transversality of
//! zero-divisor supports.

pub mod bound;
pub mod cli;
pub mod error;
pub mod incidence;
pub mod invariance;
pub mod matrix;
pub mod relational;
pub mod report;
pub mod setfn;
pub mod sign;
pub mod subset;
pub mod transversal;
pub mod witness;
pub mod words;

pub use error::{Error, Result};
pub use matrix::RationalMatrix;
pub use setfn::{cofactor, mult_matrix, product, product_by_splits, MultOperator, SetFunction};
pub use subset::{ksubsets, splits, SetFamily, Subset};
pub use transversal::{is_minimal_transversal, is_transversal, tau, TransversalResult};

/// Exact scalars.
pub type Rational = num_rational::BigRational;

/// Parses a rational from decimal numerator and denominator strings.
pub fn parse_rational(num: &str, den: &str) -> Result<Rational> {
    use num_bigint::BigInt;
    use num_traits::Zero;
    let n: BigInt = num.trim().parse().map_err(|_| Error::Invalid(format!("bad numerator {num:?}")))?;
    let d: BigInt = den.trim().parse().map_err(|_| Error::Invalid(format!("bad denominator {den:?}")))?;
    if d.is_zero() {
        return Err(Error::Invalid("zero denominator".into()));
    }
    Ok(Rational::new(n, d))
}
