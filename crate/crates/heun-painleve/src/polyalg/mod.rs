//! Exact arithmetic kernel: multivariate polynomials and rational functions
//! over the rationals, Laurent expansion, substitution.

pub mod gcd;
pub mod identities;
pub mod laurent;
pub mod mono;
pub mod mpoly;
pub mod ratfunc;
pub mod text;
pub mod var;

pub use laurent::{degree_at, degree_or_none, laurent, local_series, Genericity, LaurentExpansion, LocalSeries, Point};
pub use mono::Monomial;
pub use mpoly::{rat, rat_to_f64, ratio, MPoly};
pub use ratfunc::RatFunc;
pub use var::Var;

pub type Rat = num_rational::BigRational;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum AlgError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("the zero function has no degree")]
    ZeroFunction,
    #[error("cannot certify leading coefficient {0} nonzero")]
    UndecidableLeadingCoefficient(String),
    #[error("denominator vanishes identically after localization")]
    ZeroDenominatorAtLocalization,
    #[error("homography with ad - bc = 0")]
    SingularHomography,
    #[error("degree bound violated: {0}")]
    DegreeBoundViolated(String),
}

/// `f` evaluated at `z = (d w - b) / (-c w + a)`, the inverse of
/// `w = (a z + b) / (c z + d)`. The result is written again in `z`.
pub fn substitute_moebius(f: &RatFunc, a: &Rat, b: &Rat, c: &Rat, d: &Rat) -> Result<RatFunc, AlgError> {
    use num_traits::Zero;
    if (a * d - b * c).is_zero() {
        return Err(AlgError::SingularHomography);
    }
    let w = RatFunc::var(&Var::z());
    let num = &w.scale(d) - &RatFunc::constant(b.clone());
    let den = &RatFunc::constant(a.clone()) - &w.scale(c);
    let image = num.checked_div(&den)?;
    Ok(f.substitute(&Var::z(), &image))
}
