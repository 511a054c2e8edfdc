//! Hamiltonians `m(t) (f mu^2/2 + g mu + h)` with `f, g, h` functions of
//! `lambda` alone.

use super::{quadratic_parts, CatalogError};
use crate::polyalg::{rat, RatFunc, Var};

#[derive(Clone, Debug)]
pub struct QuadratureSolution {
    /// `ds/dt`.
    pub time_factor: RatFunc,
    pub f: RatFunc,
    pub g: RatFunc,
    pub h: RatFunc,
    /// Conserved `f mu^2/2 + g mu + h` in the new time.
    pub energy: RatFunc,
    /// `g^2 - 2 f (h - E)`, so that `dlambda/ds = ±sqrt(radicand)`.
    pub radicand: RatFunc,
}

pub fn energy_var() -> Var {
    Var::new("E")
}

pub fn solve_quadrature(hamiltonian: &RatFunc) -> Result<QuadratureSolution, CatalogError> {
    let (l, t) = (Var::lambda(), Var::t());
    let (f, g, h) = quadratic_parts(hamiltonian)?;
    let pivot = [&f, &g, &h].into_iter().find(|x| !x.is_zero()).ok_or(CatalogError::NotAutonomousShape)?.clone();
    // pivot = m(t) k(lambda): take m as pivot at a sample lambda
    let mut m = None;
    for k in 2..40 {
        let x = RatFunc::int(k);
        if pivot.den().substitute(&l, x.num()).is_zero() {
            continue;
        }
        let val = pivot.substitute(&l, &x);
        if !val.is_zero() {
            m = Some(val);
            break;
        }
    }
    let m = m.ok_or(CatalogError::NotAutonomousShape)?;
    if m.depends_on(&Var::mu()) {
        return Err(CatalogError::NotAutonomousShape);
    }
    let parts: Vec<RatFunc> = [&f, &g, &h].into_iter().map(|x| x.checked_div(&m)).collect::<Result<_, _>>()?;
    if parts.iter().any(|x| x.depends_on(&t)) {
        return Err(CatalogError::NotAutonomousShape);
    }
    let (f, g, h) = (parts[0].clone(), parts[1].clone(), parts[2].clone());
    let mu = RatFunc::var(&Var::mu());
    let energy = &(&(&f * &mu.pow(2)).scale(&crate::polyalg::ratio(1, 2)) + &(&g * &mu)) + &h;
    let e = RatFunc::var(&energy_var());
    let radicand = &g.pow(2) - &(&f * &(&h - &e)).scale(&rat(2));
    Ok(QuadratureSolution { time_factor: m, f, g, h, energy, radicand })
}
