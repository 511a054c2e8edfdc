//! General forms of the five supertypes, their scaling laws, reductions to
//! member types, and canonical maps between types.

use super::{derive_second_order, dlambda, e, entry, CatalogError, PainleveType, Supertype};
use crate::polyalg::{RatFunc, Var};

fn l() -> Var {
    Var::lambda()
}

fn m() -> Var {
    Var::mu()
}

fn t() -> Var {
    Var::t()
}

fn v(name: &str) -> Var {
    Var::new(name)
}

fn free_of_phase_space(f: &RatFunc) -> bool {
    !f.depends_on(&l()) && !f.depends_on(&m())
}

pub fn general_equation(st: Supertype) -> RatFunc {
    match st {
        Supertype::VI => entry(PainleveType::VI).expect("catalog").ode_rhs,
        Supertype::V => e("(1/(2*lambda) + 1/(lambda-1))*dlambda^2 - dlambda/t + (lambda-1)^2/t^2*(alpha*lambda + beta/lambda) + gamma*lambda/t + delta*lambda*(lambda+1)/(lambda-1)"),
        Supertype::IIIp => e("dlambda^2/lambda - dlambda/t + (alpha*lambda^2 + gamma*lambda^3)/(4*t^2) + beta/(4*t) + delta/(4*lambda)"),
        Supertype::IV34 => e("dlambda^2/(2*lambda) + rho*lambda*(2*lambda+t) + gamma*lambda*(lambda+t)*(3*lambda+t) + beta/(4*lambda)"),
        Supertype::III => e("gamma*(2*lambda^3 + t*lambda) + beta*(6*lambda^2 + t)"),
    }
}

pub fn general_hamiltonian(st: Supertype) -> RatFunc {
    match st {
        Supertype::VI => entry(PainleveType::VI).expect("catalog").hamiltonian,
        Supertype::V => e("((lambda-1)^2*lambda*mu^2 - (k0*(lambda-1)^2 + (chi1-1)*lambda*(lambda-1) - eta*t*lambda)*mu + ((k0+chi1-1)^2-kinf^2)*(lambda-1)/4)/t"),
        Supertype::IIIp => e("(lambda^2*mu^2 - (etainf*lambda^2 + (chi0-1)*lambda - eta0*t)*mu + etainf*(chi0+chiinf-1)*lambda/2)/t"),
        Supertype::IV34 => e("lambda*mu^2 - (eta*lambda^2 + eta*t*lambda - theta*lambda + k0)*mu + (theta^2/4 + (k0-1)*eta/2)*lambda"),
        Supertype::III => e("mu^2/2 - (eta*lambda^2 + eta*t/2)*mu - 2*beta*lambda^3 - t*beta*lambda - eta*lambda/2"),
    }
}

/// Equation constants in terms of Hamiltonian parameters.
pub fn general_dict(st: Supertype) -> Vec<(Var, RatFunc)> {
    let d: &[(&str, &str)] = match st {
        Supertype::VI => return entry(PainleveType::VI).expect("catalog").param_dict,
        Supertype::V => &[("alpha", "kinf^2/2"), ("beta", "-k0^2/2"), ("gamma", "chi1*eta"), ("delta", "-eta^2/2")],
        Supertype::IIIp => &[("alpha", "-4*etainf*chiinf"), ("beta", "4*eta0*chi0"), ("gamma", "4*etainf^2"), ("delta", "-4*eta0^2")],
        Supertype::IV34 => &[("beta", "-2*k0^2"), ("rho", "-eta*theta"), ("gamma", "eta^2/2")],
        Supertype::III => &[("gamma", "eta^2")],
    };
    d.iter().map(|(k, x)| (v(k), e(x))).collect()
}

/// Substitutes `lambda -> W lambda`, `dlambda -> (W/T) dlambda`, `t -> T t`
/// and multiplies by `T^2/W`.
fn rescale_equation(f: &RatFunc, time: &RatFunc, space: &RatFunc) -> RatFunc {
    let lam = RatFunc::var(&l());
    let d = RatFunc::var(&dlambda());
    let tt = RatFunc::var(&t());
    let g = f.substitute_many(&[(l(), space * &lam), (dlambda(), &(space / time) * &d), (t(), time * &tt)]);
    &(&time.pow(2) / space) * &g
}

/// `T H(T t, W lambda, mu/W)`.
fn rescale_hamiltonian(h: &RatFunc, time: &RatFunc, space: &RatFunc) -> RatFunc {
    let lam = RatFunc::var(&l());
    let mu = RatFunc::var(&m());
    let tt = RatFunc::var(&t());
    time * &h.substitute_many(&[(l(), space * &lam), (m(), &mu / space), (t(), time * &tt)])
}

#[derive(Clone, Debug)]
pub struct ScalingCheck {
    pub supertype: Supertype,
    pub law: String,
    /// Law exactly as tabulated, or a corrected version.
    pub as_printed: bool,
    pub holds: bool,
}

/// Scaling laws of every supertype for the given `eps`, `omega`.
pub fn supertype_scaling(st: Supertype, eps: &RatFunc, omega: &RatFunc) -> Vec<ScalingCheck> {
    let one = RatFunc::one();
    let sub = |f: &RatFunc, map: &[(&str, RatFunc)]| f.substitute_many(&map.iter().map(|(k, x)| (v(k), &RatFunc::var(&v(k)) * x)).collect::<Vec<_>>());
    let mut out = Vec::new();
    let mut push = |law: &str, as_printed: bool, holds: bool| {
        out.push(ScalingCheck { supertype: st, law: law.to_string(), as_printed, holds });
    };
    let (eq, h) = (general_equation(st), general_hamiltonian(st));
    match st {
        Supertype::VI => {}
        Supertype::V => {
            let lhs = rescale_equation(&eq, eps, &one);
            push("eps^2 P_{a,b,c,d}(eps t, lambda) = P_{a,b,eps c,eps^2 d}(t, lambda)", true, lhs == sub(&eq, &[("gamma", eps.clone()), ("delta", eps.pow(2))]));
            let lhs = rescale_hamiltonian(&h, eps, &one);
            push("eps H_{eta}(eps t, lambda, mu) = H_{eta/eps}(t, lambda, mu)", true, lhs == sub(&h, &[("eta", eps.inv().expect("eps nonzero"))]));
            push("eps H_{eta}(eps t, lambda, mu) = H_{eps eta}(t, lambda, mu)", false, lhs == sub(&h, &[("eta", eps.clone())]));
        }
        Supertype::IIIp => {
            let lhs = rescale_equation(&eq, eps, omega);
            let rhs = sub(&eq, &[("alpha", omega.clone()), ("beta", eps / omega), ("gamma", omega.pow(2)), ("delta", (eps / omega).pow(2))]);
            push("eps^2/omega P(eps t, omega lambda) = P_{omega a, eps/omega b, omega^2 c, eps^2/omega^2 d}(t, lambda)", true, lhs == rhs);
            let lhs = rescale_hamiltonian(&h, eps, omega);
            let rhs = sub(&h, &[("eta0", eps / omega), ("etainf", omega.clone())]);
            push("eps H(eps t, omega lambda, mu/omega) = H_{eps/omega eta0, omega etainf}(t, lambda, mu)", true, lhs == rhs);
        }
        Supertype::IV34 => {
            let lhs = rescale_equation(&eq, eps, eps);
            push("eps P(eps t, eps lambda) = P_{b, eps^3 rho, eps^4 c}(t, lambda)", true, lhs == sub(&eq, &[("rho", eps.pow(3)), ("gamma", eps.pow(4))]));
            let lhs = rescale_hamiltonian(&h, eps, eps);
            push("eps H(eps t, eps lambda, mu/eps) = H_{eps^2 eta, eps theta}(t, lambda, mu)", true, lhs == sub(&h, &[("eta", eps.pow(2)), ("theta", eps.clone())]));
        }
        Supertype::III => {
            let e2 = eps.pow(2);
            let lhs = rescale_equation(&eq, &e2, eps);
            push("eps^3 P(eps^2 t, eps lambda) = P_{eps^6 c, eps^5 b}(t, lambda)", true, lhs == sub(&eq, &[("gamma", eps.pow(6)), ("beta", eps.pow(5))]));
            let lhs = rescale_hamiltonian(&h, &e2, eps);
            push("eps^2 H(eps^2 t, eps lambda, mu/eps) = H_{eps^3 eta, eps^5 beta}(t, lambda, mu)", true, lhs == sub(&h, &[("eta", eps.pow(3)), ("beta", eps.pow(5))]));
        }
    }
    out
}

/// All scaling laws with symbolic `eps`, `omega`.
pub fn scaling_laws() -> Vec<ScalingCheck> {
    let (eps, omega) = (RatFunc::named("eps"), RatFunc::named("omega"));
    Supertype::ALL.into_iter().flat_map(|st| supertype_scaling(st, &eps, &omega)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Equation,
    Hamiltonian,
}

#[derive(Clone, Debug)]
pub struct ReductionCheck {
    pub name: &'static str,
    pub level: Level,
    /// Whether the reduction is claimed to work.
    pub claimed: bool,
    pub holds: bool,
}

fn specialize(f: &RatFunc, subs: &[(&str, &str)]) -> RatFunc {
    f.substitute_many(&subs.iter().map(|(k, x)| (v(k), e(x))).collect::<Vec<_>>())
}

fn target_ode(t: PainleveType) -> RatFunc {
    entry(t).expect("catalog").ode_rhs
}

fn target_h(t: PainleveType) -> RatFunc {
    entry(t).expect("catalog").hamiltonian
}

fn same_up_to_free(a: &RatFunc, b: &RatFunc) -> bool {
    free_of_phase_space(&(a - b))
}

/// Specializations of the supertype forms to their member types.
pub fn reductions() -> Vec<ReductionCheck> {
    use PainleveType::*;
    use Supertype as S;
    let mut out = Vec::new();
    let mut eq = |name, st, subs: &[(&str, &str)], target, claimed| {
        let holds = specialize(&general_equation(st), subs) == target_ode(target);
        out.push(ReductionCheck { name, level: Level::Equation, claimed, holds });
    };
    eq("V, delta=-1/2 -> ndeg-V", S::V, &[("delta", "-1/2")], NdegV, true);
    eq("V, delta=0, gamma=-2 -> deg-V", S::V, &[("delta", "0"), ("gamma", "-2")], DegV, true);
    eq("III', gamma=4, delta=-4 -> ndeg-III'", S::IIIp, &[("gamma", "4"), ("delta", "-4")], NdegIIIp, true);
    eq("III', gamma=0, delta=-4, alpha=-4 -> (2;3/2)", S::IIIp, &[("gamma", "0"), ("delta", "-4"), ("alpha", "-4")], DegIIIp1, true);
    eq("III', delta=0, gamma=4, beta=4 -> (3/2;2)", S::IIIp, &[("delta", "0"), ("gamma", "4"), ("beta", "4")], DegIIIp2, true);
    eq("III', gamma=delta=0, alpha=-4, beta=4 -> ddeg-III'", S::IIIp, &[("gamma", "0"), ("delta", "0"), ("alpha", "-4"), ("beta", "4")], DdegIIIp, true);
    eq("IV-34, gamma=0, rho=1 -> 34", S::IV34, &[("gamma", "0"), ("rho", "1"), ("beta", "-2*alpha")], P34, true);
    eq("I-II, gamma=0, beta=1 -> I", S::III, &[("gamma", "0"), ("beta", "1")], I, true);

    // IV-34 with gamma = 1/8 and a shifted, halved time.
    let iv = |shift: &str| {
        let g = specialize(&general_equation(S::IV34), &[("gamma", "1/8")]);
        let tt = e(&format!("2*(t - {shift})"));
        let half = e("1/2");
        let lam = RatFunc::var(&l());
        let d = RatFunc::var(&dlambda());
        let g = g.substitute_many(&[(t(), tt), (dlambda(), &half * &d), (l(), lam)]);
        let g = g.scale(&crate::polyalg::rat(4));
        g == specialize(&target_ode(IV), &[("alpha", "4*rho^2")])
    };
    out.push(ReductionCheck { name: "IV-34, gamma=1/8, new time t/2 + rho -> IV with alpha=4 rho^2", level: Level::Equation, claimed: true, holds: iv("rho") });
    out.push(ReductionCheck { name: "IV-34, gamma=1/8, new time t/2 + 2 rho -> IV with alpha=4 rho^2", level: Level::Equation, claimed: false, holds: iv("2*rho") });

    let mut ham = |name, st, subs: &[(&str, &str)], target, claimed| {
        let holds = same_up_to_free(&specialize(&general_hamiltonian(st), subs), &target_h(target));
        out.push(ReductionCheck { name, level: Level::Hamiltonian, claimed, holds });
    };
    ham("V, eta=1 -> ndeg-V", S::V, &[("eta", "1")], NdegV, true);
    ham("V, eta=0 -> deg-V", S::V, &[("eta", "0")], DegV, false);
    ham("III', eta0=etainf=1 -> ndeg-III'", S::IIIp, &[("eta0", "1"), ("etainf", "1")], NdegIIIp, true);
    ham("III', etainf=0 -> (2;3/2)", S::IIIp, &[("etainf", "0"), ("eta0", "1")], DegIIIp1, false);
    ham("III', eta0=0 -> (3/2;2)", S::IIIp, &[("eta0", "0"), ("etainf", "1")], DegIIIp2, false);
    ham("III', eta0=etainf=0 -> ddeg-III'", S::IIIp, &[("eta0", "0"), ("etainf", "0")], DdegIIIp, false);
    ham("IV-34, eta=0 -> 34", S::IV34, &[("eta", "0")], P34, false);
    ham("I-II, eta=0, beta=1 -> I", S::III, &[("eta", "0"), ("beta", "1")], I, true);

    // 2 H(2t) with eta = 1/2 and time shifted by theta lands on IV.
    let g = specialize(&general_hamiltonian(S::IV34), &[("eta", "1/2")]);
    let g = g.substitute(&t(), &e("2*(t + theta)")).scale(&crate::polyalg::rat(2));
    let target = specialize(&target_h(IV), &[("thinf", "(theta^2 + k0 - 1)/2")]);
    out.push(ReductionCheck { name: "IV-34, eta=1/2, 2H(2t), t -> t - theta -> IV", level: Level::Hamiltonian, claimed: true, holds: same_up_to_free(&g, &target) });
    out
}

/// A change of phase-space variables, given as the old `(lambda, mu)` in
/// terms of the new ones.
#[derive(Clone, Debug)]
pub struct CanonicalMap {
    pub lambda_old: RatFunc,
    pub mu_old: RatFunc,
}

impl CanonicalMap {
    pub fn new(lambda_old: &str, mu_old: &str) -> Self {
        CanonicalMap { lambda_old: e(lambda_old), mu_old: e(mu_old) }
    }

    pub fn jacobian(&self) -> RatFunc {
        let (a, b) = (&self.lambda_old, &self.mu_old);
        &(&a.derivative(&l()) * &b.derivative(&m())) - &(&a.derivative(&m()) * &b.derivative(&l()))
    }

    pub fn apply(&self, h: &RatFunc) -> RatFunc {
        h.substitute_many(&[(l(), self.lambda_old.clone()), (m(), self.mu_old.clone())])
    }
}

/// `lambda~ = lambda/t`, `mu~ = t mu`, `H~ = H - lambda~ mu~/t`.
pub fn time_transform(h: &RatFunc) -> RatFunc {
    let tt = RatFunc::var(&t());
    let lam = RatFunc::var(&l());
    let mu = RatFunc::var(&m());
    let moved = h.substitute_many(&[(l(), &tt * &lam), (m(), &mu / &tt)]);
    &moved - &(&(&lam * &mu) / &tt)
}

#[derive(Clone, Debug)]
pub struct EquivalenceCheck {
    pub name: &'static str,
    pub as_printed: bool,
    pub jacobian: RatFunc,
    /// Source minus target after the map.
    pub free_term: RatFunc,
    pub matches: bool,
}

impl EquivalenceCheck {
    pub fn canonical(&self) -> bool {
        self.jacobian.is_one()
    }

    pub fn holds(&self) -> bool {
        self.matches && self.canonical()
    }
}

fn check(name: &'static str, as_printed: bool, map: &CanonicalMap, mapped: RatFunc, target: &RatFunc) -> EquivalenceCheck {
    let free_term = &mapped - target;
    EquivalenceCheck {
        name,
        as_printed,
        jacobian: map.jacobian(),
        matches: free_of_phase_space(&free_term),
        free_term,
    }
}

pub fn canonical_equivalences() -> Result<Vec<EquivalenceCheck>, CatalogError> {
    use PainleveType::*;
    let mut out = Vec::new();

    let map = CanonicalMap::new("1/lambda", "-mu*lambda^2 + chi0*lambda/2");
    let mapped = map.apply(&time_transform(&target_h(DegIIIp1)));
    let target = specialize(&target_h(DegIIIp2), &[("chiinf", "chi0")]);
    out.push(check("(2;3/2) -> (3/2;2) via the time transform", true, &map, mapped, &target));

    let src = target_h(NdegIIIp);
    let degv = e("(lambda*(lambda-1)^2*mu^2 - k0*(lambda-1)^2*mu + (k0^2-kinf2)*(lambda-1)/4 - t*lambda/(lambda-1))/t");
    let kinf2 = "(chi0-chiinf-1)^2/4 + chiinf*(chi0-1)";
    let map = CanonicalMap::new("(1-lambda)^2*mu + (chi0-1)*(1-lambda)/2", "1/(1-lambda)");
    let target = specialize(&degv, &[("k0", "(chi0-chiinf-1)/2"), ("kinf2", kinf2)]);
    out.push(check("ndeg-III' -> deg-V", true, &map, map.apply(&src), &target));
    let map = CanonicalMap::new("-(1-lambda)^2*mu + (chi0-1)*(1-lambda)/2", "1/(1-lambda)");
    let target = specialize(&degv, &[("k0", "(chiinf-chi0+1)/2"), ("kinf2", kinf2)]);
    out.push(check("ndeg-III' -> deg-V with the new momentum negated", false, &map, map.apply(&src), &target));

    let map = CanonicalMap::new("mu", "-lambda");
    let swapped = map.apply(&target_h(P34));
    let reversed = -&swapped.substitute(&t(), &e("-t"));
    let target = specialize(&target_h(II), &[("alpha", "k0 - 1/2")]);
    out.push(check("34 -> II, then t -> -t, H -> -H", true, &map, reversed, &target));

    let one = specialize(&general_hamiltonian(Supertype::III), &[("eta", "1")]);
    let map = CanonicalMap::new("lambda - beta", "mu - 2*beta*lambda + 4*beta^2");
    let shifted = map.apply(&one).substitute(&t(), &e("t + 6*beta^2"));
    let printed = specialize(&target_h(II), &[("alpha", "2*beta^3")]);
    out.push(check("I-II with eta=1 -> II with alpha = 2 beta^3", true, &map, shifted.clone(), &printed));
    let fixed = specialize(&target_h(II), &[("alpha", "4*beta^3")]);
    out.push(check("I-II with eta=1 -> II with alpha = 4 beta^3", false, &map, shifted, &fixed));

    let v0 = specialize(&general_hamiltonian(Supertype::V), &[("eta", "0")]);
    let map = CanonicalMap::new("lambda", "mu + (chi1-1)/(2*(lambda-1))");
    let target = e("((lambda-1)^2*lambda*mu^2 - k0*(lambda-1)^2*mu + (k0^2-kinf^2)*(lambda-1)/4 - (chi1-1)^2/4)/t");
    out.push(check("V with eta=0: momentum shift removes chi1", true, &map, map.apply(&v0), &target));
    Ok(out)
}

/// Second-order equation of each general Hamiltonian against the general
/// equation under the parameter dictionary.
pub fn general_forms_consistent(st: Supertype) -> Result<bool, CatalogError> {
    let derived = derive_second_order(&general_hamiltonian(st))?.rhs;
    Ok(derived == general_equation(st).substitute_many(&general_dict(st)))
}
