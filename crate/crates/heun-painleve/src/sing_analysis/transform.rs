//! Exact transformations of principal operators: sandwiches, changes of
//! variable, and the replayable record of a sequence of them.

use serde::{Deserialize, Serialize};

use crate::polyalg::{AlgError, Point, Rat, RatFunc, Var};

use super::{PrincipalOperator, SingError};

fn z() -> RatFunc {
    RatFunc::var(&Var::z())
}

/// `e^{-r} A e^{r}` where `r' = rp`. Solutions of the result are `e^{-r}`
/// times solutions of `A`.
pub fn sandwich_general(a: &PrincipalOperator, rp: &RatFunc) -> PrincipalOperator {
    let zv = Var::z();
    let p = &a.p + &rp.scale(&Rat::from_integer(2.into()));
    let q = &(&(&a.q + &(&a.p * rp)) + &(rp * rp)) + &rp.derivative(&zv);
    PrincipalOperator {
        p,
        q,
        hints: a.hints.clone(),
    }
}

/// Logarithmic derivative used by [`sandwich_power`].
pub fn power_rp(site: &Point, kappa: &RatFunc) -> RatFunc {
    match site {
        Point::Finite(c) => &(-kappa) / &(&z() - c),
        Point::Infinity => &(-kappa) / &z(),
    }
}

/// Conjugation that multiplies every solution by `(z - z0)^kappa`, or by
/// `z^kappa` at infinity. Indices move by `+kappa` at a finite point and by
/// `-kappa` at infinity.
pub fn sandwich_power(a: &PrincipalOperator, site: &Point, kappa: &RatFunc) -> PrincipalOperator {
    sandwich_general(a, &power_rp(site, kappa))
}

pub fn exp_rp(site: &Point, kappa: &RatFunc, k: i64) -> Result<RatFunc, SingError> {
    match site {
        Point::Finite(c) => {
            if k < 2 {
                return Err(SingError::InvalidOrder(k));
            }
            Ok(kappa * &(&z() - c).powi(-(k as i32))?)
        }
        Point::Infinity => {
            if k < 0 {
                return Err(SingError::InvalidOrder(k));
            }
            Ok(kappa * &z().pow(k as u32))
        }
    }
}

/// Sandwich with `r' = kappa (z - z0)^{-k}` (`k >= 2`) or `r' = kappa z^k`
/// at infinity (`k >= 0`).
pub fn sandwich_exp(a: &PrincipalOperator, site: &Point, kappa: &RatFunc, k: i64) -> Result<PrincipalOperator, SingError> {
    Ok(sandwich_general(a, &exp_rp(site, kappa, k)?))
}

/// Principal form after the substitution `z = phi(w)`, written again in `z`:
/// `p -> phi' p(phi) - phi''/phi'`, `q -> phi'^2 q(phi)`.
pub fn change_of_variable(a: &PrincipalOperator, phi: &RatFunc) -> Result<PrincipalOperator, AlgError> {
    let zv = Var::z();
    let d1 = phi.derivative(&zv);
    let d2 = d1.derivative(&zv);
    let p = &(&d1 * &a.p.substitute(&zv, phi)) - &d2.checked_div(&d1)?;
    let q = &(&d1 * &d1) * &a.q.substitute(&zv, phi);
    Ok(PrincipalOperator {
        p,
        q,
        hints: Vec::new(),
    })
}

/// The operator in `w = (a z + b) / (c z + d)`.
pub fn moebius(op: &PrincipalOperator, a: &Rat, b: &Rat, c: &Rat, d: &Rat) -> Result<PrincipalOperator, AlgError> {
    use num_traits::Zero;
    if (a * d - b * c).is_zero() {
        return Err(AlgError::SingularHomography);
    }
    let w = z();
    let phi = (&w.scale(d) - &RatFunc::constant(b.clone())).checked_div(&(&RatFunc::constant(a.clone()) - &w.scale(c)))?;
    let mut out = change_of_variable(op, &phi)?;
    for h in &op.hints {
        let den = &h.scale(c) + &RatFunc::constant(d.clone());
        if !den.is_zero() {
            out.hints.push((&h.scale(a) + &RatFunc::constant(b.clone())).checked_div(&den)?);
        }
    }
    Ok(out)
}

/// The operator in `w` where `z = scale * w + shift`.
pub fn affine(op: &PrincipalOperator, scale: &RatFunc, shift: &RatFunc) -> Result<PrincipalOperator, AlgError> {
    if scale.is_zero() {
        return Err(AlgError::SingularHomography);
    }
    let phi = &(&z() * scale) + shift;
    let mut out = change_of_variable(op, &phi)?;
    for h in &op.hints {
        out.hints.push((h - shift).checked_div(scale)?);
    }
    Ok(out)
}

/// `z = y^2`, with the result written in `z` standing for `y`.
pub fn quadratic_substitution(op: &PrincipalOperator) -> PrincipalOperator {
    let mut out = change_of_variable(op, &z().pow(2)).expect("phi' = 2z is nonzero");
    if op.hints.iter().any(|h| h.is_zero()) {
        out.hints.push(RatFunc::zero());
    }
    out
}

/// Moves `site` to the origin: `z -> z + c`, or `z -> 1/z` for infinity.
pub fn localize(op: &PrincipalOperator, site: &Point) -> PrincipalOperator {
    let phi = match site {
        Point::Finite(c) => &z() + c,
        Point::Infinity => z().inv().expect("z is nonzero"),
    };
    change_of_variable(op, &phi).expect("nondegenerate substitution")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StepKind {
    Power { kappa: String },
    Exp { kappa: String, order: i64 },
    Moebius { a: String, b: String, c: String, d: String },
    Affine { scale: String, shift: String },
    Quadratic,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Step {
    Power { site: Point, kappa: RatFunc },
    Exp { site: Point, kappa: RatFunc, order: i64 },
    /// `w = (a z + b) / (c z + d)`.
    Moebius { a: Rat, b: Rat, c: Rat, d: Rat },
    /// Old variable `= scale * new + shift`.
    Affine { scale: RatFunc, shift: RatFunc },
    /// `z = y^2` at the origin.
    Quadratic,
}

impl Step {
    pub fn apply(&self, op: &PrincipalOperator) -> Result<PrincipalOperator, SingError> {
        match self {
            Step::Power { site, kappa } => Ok(sandwich_power(op, site, kappa)),
            Step::Exp { site, kappa, order } => sandwich_exp(op, site, kappa, *order),
            Step::Moebius { a, b, c, d } => Ok(moebius(op, a, b, c, d)?),
            Step::Affine { scale, shift } => Ok(affine(op, scale, shift)?),
            Step::Quadratic => Ok(quadratic_substitution(op)),
        }
    }

    pub fn site(&self) -> Option<Point> {
        match self {
            Step::Power { site, .. } | Step::Exp { site, .. } => Some(site.clone()),
            Step::Quadratic => Some(Point::zero()),
            Step::Moebius { .. } | Step::Affine { .. } => None,
        }
    }

    pub fn describe(&self) -> StepKind {
        match self {
            Step::Power { kappa, .. } => StepKind::Power { kappa: kappa.to_string() },
            Step::Exp { kappa, order, .. } => StepKind::Exp {
                kappa: kappa.to_string(),
                order: *order,
            },
            Step::Moebius { a, b, c, d } => StepKind::Moebius {
                a: a.to_string(),
                b: b.to_string(),
                c: c.to_string(),
                d: d.to_string(),
            },
            Step::Affine { scale, shift } => StepKind::Affine {
                scale: scale.to_string(),
                shift: shift.to_string(),
            },
            Step::Quadratic => StepKind::Quadratic,
        }
    }
}

/// Ordered transformations; replaying them on the source operator gives
/// the target operator exactly.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TransformRecord {
    pub steps: Vec<Step>,
}

impl TransformRecord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn push(&mut self, s: Step) {
        self.steps.push(s);
    }

    pub fn extend(&mut self, other: &TransformRecord) {
        self.steps.extend(other.steps.iter().cloned());
    }

    pub fn replay(&self, op: &PrincipalOperator) -> Result<PrincipalOperator, SingError> {
        let mut cur = op.clone();
        for s in &self.steps {
            cur = s.apply(&cur)?;
        }
        Ok(cur)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.steps
                .iter()
                .map(|s| {
                    let mut v = serde_json::to_value(s.describe()).expect("serializable");
                    if let (Some(site), Some(obj)) = (s.site(), v.as_object_mut()) {
                        obj.insert("site".into(), serde_json::Value::String(site.to_string()));
                    }
                    v
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::rat;

    fn op(p: RatFunc, q: RatFunc) -> PrincipalOperator {
        PrincipalOperator::new(p, q)
    }

    #[test]
    fn zero_kappa_is_identity() {
        let a = op(&RatFunc::int(3) / &z(), z());
        assert_eq!(sandwich_power(&a, &Point::zero(), &RatFunc::zero()), a);
        assert_eq!(sandwich_exp(&a, &Point::int(1), &RatFunc::zero(), 3).unwrap(), a);
    }

    #[test]
    fn quadratic_of_trivial_operator() {
        let a = op(RatFunc::zero(), RatFunc::zero());
        let b = quadratic_substitution(&a);
        assert_eq!(b.p, -&z().inv().unwrap());
        assert!(b.q.is_zero());
    }

    #[test]
    fn infinity_localization_matches_formula() {
        // p -> 2/w - p(1/w)/w^2, q -> q(1/w)/w^4
        let a = op(&RatFunc::named("c") / &z(), z());
        let l = localize(&a, &Point::Infinity);
        let expect_p = &(&RatFunc::int(2) - &RatFunc::named("c")) / &z();
        assert_eq!(l.p, expect_p);
        assert_eq!(l.q, z().powi(-5).unwrap());
    }

    #[test]
    fn moebius_round_trip() {
        let a = op(&RatFunc::one() / &(&z() - &RatFunc::one()), &z() / &(&z() + &RatFunc::int(2)));
        let f = moebius(&a, &rat(2), &rat(1), &rat(1), &rat(1)).unwrap();
        // inverse of w = (2z+1)/(z+1) is z = (w-1)/(-w+2)
        let back = moebius(&f, &rat(1), &rat(-1), &rat(-1), &rat(2)).unwrap();
        assert_eq!(back.p, a.p);
        assert_eq!(back.q, a.q);
    }
}

