//! Rational identities in `z`, `lambda` used by the compatibility proofs.
//! They double as self-tests of the kernel.

use super::mpoly::MPoly;
use super::ratfunc::RatFunc;
use super::var::Var;
use super::{AlgError, Rat};

/// Outcome of each identity, in the order: two pole identities in `s`,
/// the two second-order identities (only for `deg xi <= 2`), the two
/// third-order identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub pole_identities: [bool; 2],
    pub second_order: Option<[bool; 2]>,
    pub third_order: [bool; 2],
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.pole_identities.iter().all(|b| *b)
            && self.second_order.map(|s| s.iter().all(|b| *b)).unwrap_or(true)
            && self.third_order.iter().all(|b| *b)
    }
}

fn at_lambda(f: &RatFunc) -> RatFunc {
    f.substitute(&Var::z(), &RatFunc::var(&Var::lambda()))
}

/// Checks the identities for a polynomial `xi(z)` of degree at most 3 and a
/// point `s` (free of `z` and `lambda`).
pub fn check_identities(xi: &MPoly, s: &RatFunc) -> Result<IdentityReport, AlgError> {
    let zv = Var::z();
    if xi.depends_on(&Var::lambda()) || s.depends_on(&zv) || s.depends_on(&Var::lambda()) {
        return Err(AlgError::DegreeBoundViolated("xi must be a polynomial in z only".into()));
    }
    let deg = xi.degree_in(&zv).unwrap_or(0);
    if deg > 3 {
        return Err(AlgError::DegreeBoundViolated(format!("deg xi = {deg} > 3")));
    }
    let z = RatFunc::var(&zv);
    let l = RatFunc::var(&Var::lambda());
    let one = RatFunc::one();
    let two = RatFunc::int(2);
    let zl = &z - &l;
    let zs = &z - s;
    let ls = &l - s;

    let lhs1 = &(&ls / &zl) * &(&(&(&one / &zs) - &(&one / &ls)) + &(&zl / &ls.pow(2)));
    let rhs1 = &(&one / &ls) - &(&one / &zs);
    let lhs2 = &(&(&two / &zs) - &(&two / &ls)) + &(&zl * &(&(&one / &zs.pow(2)) + &(&one / &ls.pow(2))));
    let rhs2 = &zl.pow(3) / &(&zs.pow(2) * &ls.pow(2));

    let x = RatFunc::from_poly(xi.clone());
    let xl = at_lambda(&x);
    let dx = x.derivative(&zv);
    let psi = &x / &zs;
    let psil = at_lambda(&psi);
    let dpsi = psi.derivative(&zv);
    let xs = x.substitute(&zv, s);

    let second_order = if deg <= 2 {
        let d2 = dx.derivative(&zv);
        let a = &(&(&x - &xl) - &(&zl * &dx)) + &(&d2.scale(&Rat::new(1.into(), 2.into())) * &zl.pow(2));
        let b_l = &(&psi - &psil) - &(&zl * &dpsi);
        let b_r = -(&(&xs * &zl.pow(2)) / &(&zs.pow(2) * &ls));
        Some([a.is_zero(), b_l == b_r])
    } else {
        None
    };

    let d3 = dx.derivative(&zv).derivative(&zv);
    let c_l = &(&x.scale(&Rat::from_integer(2.into())) - &xl.scale(&Rat::from_integer(2.into())))
        - &(&zl * &(&dx + &at_lambda(&dx)));
    let c_r = -(&d3.scale(&Rat::new(1.into(), 6.into())) * &zl.pow(3));
    let d_l = &(&psi.scale(&Rat::from_integer(2.into())) - &psil.scale(&Rat::from_integer(2.into())))
        - &(&zl * &(&dpsi + &at_lambda(&dpsi)));
    let d_r = &(&xs * &zl.pow(3)) / &(&zs.pow(2) * &ls.pow(2));

    Ok(IdentityReport {
        pole_identities: [lhs1 == rhs1, lhs2 == rhs2],
        second_order,
        third_order: [c_l == c_r, d_l == d_r],
    })
}

/// True iff every identity applicable to `deg xi` holds exactly.
pub fn appendix_identities_check(xi: &MPoly, s: &Rat) -> Result<bool, AlgError> {
    Ok(check_identities(xi, &RatFunc::constant(s.clone()))?.all_hold())
}
