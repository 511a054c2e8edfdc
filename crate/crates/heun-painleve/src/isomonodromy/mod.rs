//! Isomonodromic deformations of deformed Heun class operators: choice of
//! time variable, the compatibility polynomial `c`, conditions I/II/III,
//! Hamiltonians, and the full compatibility check.

use crate::deformation::{deform_symbolic, DeformError};
use crate::heun_class::{z_degree, HeunError, HeunOperator};
use crate::polyalg::{rat, AlgError, RatFunc, Var};

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum IsoError {
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Heun(#[from] HeunError),
    #[error(transparent)]
    Deform(#[from] DeformError),
    #[error("no subcase applies to this family")]
    NoSubcaseApplies,
}

fn zv() -> Var {
    Var::z()
}

fn z() -> RatFunc {
    RatFunc::var(&zv())
}

fn lam() -> RatFunc {
    RatFunc::var(&Var::lambda())
}

fn mu() -> RatFunc {
    RatFunc::var(&Var::mu())
}

fn at(f: &RatFunc, x: &RatFunc) -> RatFunc {
    f.substitute(&zv(), x)
}

fn dz(f: &RatFunc) -> RatFunc {
    f.derivative(&zv())
}

fn div(a: &RatFunc, b: &RatFunc) -> Result<RatFunc, AlgError> {
    a.checked_div(b)
}

/// A Heun class operator whose coefficients depend on the time variable.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeFamily {
    pub op: HeunOperator,
    pub time: Var,
}

impl TimeFamily {
    pub fn new(op: HeunOperator) -> TimeFamily {
        TimeFamily { op, time: Var::t() }
    }

    pub fn sigma(&self) -> RatFunc {
        self.op.sigma()
    }

    pub fn dt(&self, f: &RatFunc) -> RatFunc {
        f.derivative(&self.time)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubcaseTag {
    A1,
    Ap,
    Aq,
    Bp,
    Bq,
}

impl SubcaseTag {
    pub const ALL: [SubcaseTag; 5] = [SubcaseTag::A1, SubcaseTag::Ap, SubcaseTag::Aq, SubcaseTag::Bp, SubcaseTag::Bq];

    pub fn name(self) -> &'static str {
        match self {
            SubcaseTag::A1 => "A1",
            SubcaseTag::Ap => "Ap",
            SubcaseTag::Aq => "Aq",
            SubcaseTag::Bp => "Bp",
            SubcaseTag::Bq => "Bq",
        }
    }

    pub fn case_a(self) -> bool {
        matches!(self, SubcaseTag::A1 | SubcaseTag::Ap | SubcaseTag::Aq)
    }

    pub fn parse(s: &str) -> Option<SubcaseTag> {
        SubcaseTag::ALL.into_iter().find(|t| t.name().eq_ignore_ascii_case(s))
    }
}

/// A time-variable ansatz. `scale` is the factor `eps` with which the
/// time slot carries `t`; `m` already includes it.
#[derive(Clone, Debug, PartialEq)]
pub struct Subcase {
    pub tag: SubcaseTag,
    pub s: Option<RatFunc>,
    pub m: RatFunc,
    pub scale: RatFunc,
}

fn time_free(f: &RatFunc, t: &Var) -> bool {
    !f.depends_on(t) && !f.depends_on(&zv())
}

/// `f / (z - s)^k` when exact.
fn strip_root(f: &RatFunc, s: &RatFunc, k: u32) -> Option<RatFunc> {
    let g = div(f, &(&z() - s).pow(k)).ok()?;
    if g.den().depends_on(&zv()) {
        None
    } else {
        Some(g)
    }
}

/// Structural candidates with their `m`; not yet certified.
fn candidates(f: &TimeFamily) -> Vec<Subcase> {
    let t = &f.time;
    let sigma = f.sigma();
    let tau = &f.op.tau;
    let eta = &f.op.eta;
    let mut out = Vec::new();
    let nonzero_scale = |e: &RatFunc| !e.is_zero() && time_free(e, t);
    for (r, mult) in &f.op.roots {
        if *mult == 1 {
            let eps = f.dt(r);
            if !nonzero_scale(&eps) {
                continue;
            }
            let Some(rho) = strip_root(&sigma, r, 1) else { continue };
            let rho_s = at(&rho, r);
            if let Ok(m) = div(&eps, &rho_s) {
                out.push(Subcase { tag: SubcaseTag::A1, s: Some(r.clone()), m, scale: eps });
            }
        } else if r.depends_on(t) {
            continue;
        } else {
            let Some(rho1) = strip_root(&sigma, r, 2) else { continue };
            if let Ok(eps) = div(&f.dt(tau), &rho1) {
                if nonzero_scale(&eps) {
                    if let Ok(m) = div(&eps, &at(tau, r)) {
                        out.push(Subcase { tag: SubcaseTag::Ap, s: Some(r.clone()), m, scale: eps.clone() });
                    }
                }
            }
            if at(tau, r).is_zero() {
                let eps = &f.dt(eta) * &(&z() - r);
                if nonzero_scale(&eps) {
                    let xi = &sigma * eta;
                    if let Ok(m) = div(&eps, &at(&dz(&xi), r)) {
                        out.push(Subcase { tag: SubcaseTag::Aq, s: Some(r.clone()), m, scale: eps });
                    }
                }
            }
        }
    }
    if !sigma.depends_on(t) && f.op.sigma_degree() <= 2 {
        if let Ok(eps) = div(&f.dt(tau), &sigma) {
            if nonzero_scale(&eps) {
                let half = dz(&dz(tau)).scale(&crate::polyalg::ratio(1, 2));
                if let Ok(m) = div(&eps, &half) {
                    out.push(Subcase { tag: SubcaseTag::Bp, s: None, m, scale: eps });
                }
            }
        }
        if let Ok(eps) = div(&f.dt(eta), &z()) {
            if nonzero_scale(&eps) {
                let xi = &sigma * eta;
                let third = dz(&dz(&dz(&xi))).scale(&crate::polyalg::ratio(1, 6));
                if let Ok(m) = div(&eps, &third) {
                    out.push(Subcase { tag: SubcaseTag::Bq, s: None, m, scale: eps });
                }
            }
        }
    }
    out
}

/// Every subcase whose conditions I/II/III vanish identically.
pub fn select_subcase(f: &TimeFamily) -> Result<Vec<Subcase>, IsoError> {
    let mut out = Vec::new();
    for sc in candidates(f) {
        let conds = conditions(f, &sc)?;
        if conds.all_zero() {
            out.push(sc);
        }
    }
    if out.is_empty() {
        Err(IsoError::NoSubcaseApplies)
    } else {
        Ok(out)
    }
}

/// The certified subcase with the given tag.
pub fn subcase_with_tag(f: &TimeFamily, tag: SubcaseTag) -> Result<Subcase, IsoError> {
    select_subcase(f)?.into_iter().find(|s| s.tag == tag).ok_or(IsoError::NoSubcaseApplies)
}

/// `m (lambda - s) rho(z)` in case A, `m sigma(z)` in case B.
pub fn build_c(f: &TimeFamily, sc: &Subcase) -> Result<RatFunc, IsoError> {
    let sigma = f.sigma();
    Ok(match &sc.s {
        Some(s) if sc.tag.case_a() => {
            let rho = div(&sigma, &(&z() - s))?;
            &(&sc.m * &(&lam() - s)) * &rho
        }
        _ => &sc.m * &sigma,
    })
}

/// Left-hand sides of conditions I, II, III: the general forms in terms of
/// `c`, and the forms specialized to the subcase.
#[derive(Clone, Debug)]
pub struct Conditions {
    pub general: [RatFunc; 3],
    pub specialized: [RatFunc; 3],
}

impl Conditions {
    pub fn all_zero(&self) -> bool {
        self.general.iter().chain(self.specialized.iter()).all(|c| c.is_zero())
    }
}

pub fn condition_i(f: &TimeFamily, c: &RatFunc) -> Result<RatFunc, IsoError> {
    let (sigma, tau) = (f.sigma(), &f.op.tau);
    let zl = &z() - &lam();
    let g = div(&(c * tau), &sigma)?;
    let head = &div(&f.dt(tau), &sigma)? - &div(&(tau * &f.dt(&sigma)), &sigma.pow(2))?;
    let tail = &(&g - &at(&g, &lam())) - &(&zl * &dz(&g));
    Ok(&head + &div(&tail, &zl.pow(2))?)
}

pub fn condition_ii(f: &TimeFamily, c: &RatFunc) -> Result<RatFunc, IsoError> {
    let (sigma, eta) = (f.sigma(), &f.op.eta);
    let l = lam();
    let zl = &z() - &l;
    let d_eta = eta - &at(eta, &l);
    let sd = div(&f.dt(&sigma), &sigma)?;
    let eta_dot = f.dt(eta);
    let w = &div(&(c * &dz(&sigma)), &sigma)? - &dz(c);
    let ce = c * eta;
    let mut out = &(&eta_dot - &at(&eta_dot, &l)) - &(&sd * &d_eta);
    out = &out + &(&div(&d_eta, &zl)? * &w);
    out = &out - &(&at(&dz(eta), &l) * &at(&w, &l));
    let num = &(&ce - &at(&ce, &l)).scale(&rat(2)) - &(&(&dz(&ce) + &at(&dz(&ce), &l)) * &zl);
    Ok(&out + &div(&num, &zl.pow(2))?)
}

pub fn condition_iii(f: &TimeFamily, c: &RatFunc) -> Result<RatFunc, IsoError> {
    let sigma = f.sigma();
    let l = lam();
    let zl = &z() - &l;
    let sd = div(&f.dt(&sigma), &sigma)?;
    let g = div(&(c * &dz(&sigma)), &sigma)?;
    let num = &(&g - &at(&g, &l)) - &(&at(&dz(&g), &l) * &zl);
    Ok(&(&sd - &at(&sd, &l)) - &div(&num, &zl)?)
}

fn specialized(f: &TimeFamily, sc: &Subcase) -> Result<[RatFunc; 3], IsoError> {
    let (sigma, tau, eta) = (f.sigma(), &f.op.tau, &f.op.eta);
    let l = lam();
    let zl = &z() - &l;
    let m = &sc.m;
    match &sc.s {
        Some(s) if sc.tag.case_a() => {
            let zs = &z() - s;
            let ls = &l - s;
            let rho = div(&sigma, &zs)?;
            let one = &f.dt(&div(tau, &sigma)?) - &div(&(m * &at(tau, s)), &zs.pow(2))?;
            let sd = div(&f.dt(&sigma), &sigma)?;
            let d_eta = eta - &at(eta, &l);
            let eta_dot = f.dt(eta);
            let lhs = &(&(&sd * &d_eta) - &eta_dot) + &at(&eta_dot, &l);
            let re = &rho * eta;
            let bracket = &div(&(&(&d_eta * &ls) * &rho), &(&zl * &zs))? - &(&at(&dz(eta), &l) * &at(&rho, &l));
            let num = &(&re - &at(&re, &l)).scale(&rat(2)) - &(&(&dz(&re) + &at(&dz(&re), &l)) * &zl);
            let rhs = &(m * &bracket) + &(m * &div(&(&ls * &num), &zl.pow(2))?);
            let two = &lhs - &rhs;
            let three = &(&sd - &at(&sd, &l)) - &div(&(&(m * &at(&rho, s)) * &zl), &(&zs * &ls))?;
            Ok([one, two, three])
        }
        _ => {
            let half = crate::polyalg::ratio(1, 2);
            let one = &div(&f.dt(tau), &sigma)? - &(m * &dz(&dz(tau)).scale(&half));
            let xi = &sigma * eta;
            let eta_dot = f.dt(eta);
            let third = dz(&dz(&dz(&xi))).scale(&crate::polyalg::ratio(1, 6));
            let two = &(&eta_dot - &at(&eta_dot, &l)) - &(&(m * &third) * &zl);
            Ok([one, two, RatFunc::zero()])
        }
    }
}

pub fn conditions(f: &TimeFamily, sc: &Subcase) -> Result<Conditions, IsoError> {
    let c = build_c(f, sc)?;
    Ok(Conditions {
        general: [condition_i(f, &c)?, condition_ii(f, &c)?, condition_iii(f, &c)?],
        specialized: specialized(f, sc)?,
    })
}

#[derive(Clone, Debug)]
pub struct IsomonodromyData {
    pub subcase: Subcase,
    pub c: RatFunc,
    pub a: RatFunc,
    pub b: RatFunc,
    pub h: RatFunc,
    /// `eta c/sigma + mu (tau c/sigma - c') + mu^2 c` at `z = lambda`.
    pub h_unified: RatFunc,
    /// `(d lambda/dt, d mu/dt)`.
    pub hamilton_rhs: (RatFunc, RatFunc),
    /// Numerator and denominator factors of `m`: times where the ansatz breaks.
    pub excluded_times: Vec<String>,
}

impl IsomonodromyData {
    pub fn with_hamiltonian(&self, h: RatFunc) -> IsomonodromyData {
        let mut d = self.clone();
        d.hamilton_rhs = hamilton_equations(&h);
        d.h = h;
        d
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "subcase": self.subcase.tag.name(),
            "s": self.subcase.s.as_ref().map(|s| s.to_string()),
            "m": self.subcase.m.to_string(),
            "scale": self.subcase.scale.to_string(),
            "c": self.c.to_string(),
            "a": self.a.to_string(),
            "b": self.b.to_string(),
            "H": self.h.to_string(),
            "dlambda_dt": self.hamilton_rhs.0.to_string(),
            "dmu_dt": self.hamilton_rhs.1.to_string(),
            "excluded_times": self.excluded_times,
        })
    }
}

pub fn hamilton_equations(h: &RatFunc) -> (RatFunc, RatFunc) {
    (h.derivative(&Var::mu()), -&h.derivative(&Var::lambda()))
}

/// `d lambda/dt` and `d mu/dt` written directly in terms of `c`.
pub fn compatibility_rhs(f: &TimeFamily, c: &RatFunc) -> Result<(RatFunc, RatFunc), IsoError> {
    let (sigma, tau, eta) = (f.sigma(), &f.op.tau, &f.op.eta);
    let l = lam();
    let ev = |g: &RatFunc| at(g, &l);
    let half = crate::polyalg::ratio(1, 2);
    let cs = div(c, &sigma)?;
    let ldot = &(&(&ev(c) * &mu()).scale(&rat(2)) - &ev(&dz(c))) + &ev(&(&cs * tau));
    let lin = &(&ev(&(&cs * &dz(tau))) - &ev(&(&cs * &dz(&dz(&sigma)))).scale(&half)) - &ev(&dz(&dz(c))).scale(&half);
    let mdot = &(&(-&ev(&(&cs * &dz(eta)))) - &(&mu() * &lin)) - &(&mu().pow(2) * &ev(&(&cs * &dz(&sigma))));
    Ok((ldot, mdot))
}

pub fn hamiltonian(f: &TimeFamily, sc: &Subcase) -> Result<IsomonodromyData, IsoError> {
    let (sigma, tau, eta) = (f.sigma(), &f.op.tau, &f.op.eta);
    let l = lam();
    let ev = |g: &RatFunc| at(g, &l);
    let c = build_c(f, sc)?;
    let linear = match &sc.s {
        Some(s) if sc.tag.case_a() => {
            let rho = div(&sigma, &(&z() - s))?;
            &ev(tau) - &(&(&l - s) * &ev(&dz(&rho)))
        }
        _ => &ev(tau) - &ev(&dz(&sigma)),
    };
    let h = &sc.m * &(&(&ev(eta) + &(&linear * &mu())) + &(&ev(&sigma) * &mu().pow(2)));
    let cs = div(&c, &sigma)?;
    let h_unified = &(&ev(&(eta * &cs)) + &(&mu() * &(&ev(&(tau * &cs)) - &ev(&dz(&c))))) + &(&mu().pow(2) * &ev(&c));
    let zl = &z() - &l;
    let a = div(&c, &zl)?;
    let b = div(&(-&(&ev(&c) * &mu())), &zl)?;
    let mut excluded = Vec::new();
    for p in [sc.m.num(), sc.m.den()] {
        if p.depends_on(&f.time) {
            excluded.push(p.to_string());
        }
    }
    Ok(IsomonodromyData {
        subcase: sc.clone(),
        c,
        a,
        b,
        hamilton_rhs: hamilton_equations(&h),
        h,
        h_unified,
        excluded_times: excluded,
    })
}

#[derive(Clone, Debug)]
pub struct CompatibilityResiduals {
    pub compa2: RatFunc,
    pub compa1: RatFunc,
}

impl CompatibilityResiduals {
    pub fn both_zero(&self) -> bool {
        self.compa2.is_zero() && self.compa1.is_zero()
    }
}

pub fn lambda_dot() -> Var {
    Var::new("lambda_dot")
}

pub fn mu_dot() -> Var {
    Var::new("mu_dot")
}

/// `p_t - a p' + 2b' - p a' + a''` and `q_t + p b' - 2q a' - a q' + b''` on the
/// deformed operator, with `d/dt` acting on `lambda`, `mu` through formal
/// symbols `lambda_dot`, `mu_dot`.
pub fn formal_residuals(f: &TimeFamily, data: &IsomonodromyData) -> Result<CompatibilityResiduals, IsoError> {
    let d = deform_symbolic(&f.op)?;
    let (p, q) = (d.p(), d.q());
    let (ld, md) = (RatFunc::var(&lambda_dot()), RatFunc::var(&mu_dot()));
    let total = |g: &RatFunc| &(&f.dt(g) + &(&g.derivative(&Var::lambda()) * &ld)) + &(&g.derivative(&Var::mu()) * &md);
    let (a, b) = (&data.a, &data.b);
    let two = rat(2);
    let compa2 = &(&(&(&total(&p) - &(a * &dz(&p))) + &dz(b).scale(&two)) - &(&p * &dz(a))) + &dz(&dz(a));
    let compa1 = &(&(&(&total(&q) + &(&p * &dz(b))) - &(&q * &dz(a)).scale(&two)) - &(a * &dz(&q))) + &dz(&dz(b));
    Ok(CompatibilityResiduals { compa2, compa1 })
}

pub fn verify_full_compatibility(f: &TimeFamily, data: &IsomonodromyData) -> Result<CompatibilityResiduals, IsoError> {
    let r = formal_residuals(f, data)?;
    let subs = [(lambda_dot(), data.hamilton_rhs.0.clone()), (mu_dot(), data.hamilton_rhs.1.clone())];
    Ok(CompatibilityResiduals {
        compa2: r.compa2.substitute_many(&subs),
        compa1: r.compa1.substitute_many(&subs),
    })
}

/// Degree of `c` in `z`.
pub fn c_degree(c: &RatFunc) -> Option<u32> {
    z_degree(c)
}

#[cfg(test)]
mod tests;
