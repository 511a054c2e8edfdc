//! The Painlevé types obtained from deformed Heun class families: one record
//! per type with its family, compatibility functions, Hamiltonian and
//! second-order equation.

mod quadrature;
mod supertype;

use crate::heun_class::{classify, HeunOperator};
use crate::isomonodromy::{hamiltonian, subcase_with_tag, verify_full_compatibility, IsoError, IsomonodromyData, SubcaseTag, TimeFamily};
use crate::polyalg::text::parse_ratfunc;
use crate::polyalg::{rat, AlgError, RatFunc, Var};

pub use quadrature::{solve_quadrature, QuadratureSolution};
pub use supertype::{
    canonical_equivalences, general_dict, general_equation, general_forms_consistent, general_hamiltonian, Level, reductions, scaling_laws, supertype_scaling, time_transform,
    CanonicalMap, EquivalenceCheck, ReductionCheck, ScalingCheck,
};

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum CatalogError {
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Iso(#[from] IsoError),
    #[error("unknown Painlevé type {0}")]
    UnknownType(String),
    #[error("Hamiltonian is not quadratic in mu")]
    NotQuadraticInMu,
    #[error("Hamiltonian is not m(t) times a function of lambda and mu")]
    NotAutonomousShape,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Supertype {
    VI,
    V,
    IIIp,
    IV34,
    III,
}

impl Supertype {
    pub const ALL: [Supertype; 5] = [Supertype::VI, Supertype::V, Supertype::IIIp, Supertype::IV34, Supertype::III];

    pub fn name(self) -> &'static str {
        match self {
            Supertype::VI => "VI",
            Supertype::V => "V",
            Supertype::IIIp => "III'",
            Supertype::IV34 => "IV-34",
            Supertype::III => "I-II",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PainleveType {
    VI,
    NdegV,
    DegV,
    NdegIIIp,
    DegIIIp1,
    DegIIIp2,
    DdegIIIp,
    IV,
    P34,
    II,
    I,
}

impl PainleveType {
    pub const ALL: [PainleveType; 11] = [
        PainleveType::VI,
        PainleveType::NdegV,
        PainleveType::DegV,
        PainleveType::NdegIIIp,
        PainleveType::DegIIIp1,
        PainleveType::DegIIIp2,
        PainleveType::DdegIIIp,
        PainleveType::IV,
        PainleveType::P34,
        PainleveType::II,
        PainleveType::I,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PainleveType::VI => "VI",
            PainleveType::NdegV => "ndeg-V",
            PainleveType::DegV => "deg-V",
            PainleveType::NdegIIIp => "ndeg-III'",
            PainleveType::DegIIIp1 => "deg-III'-1",
            PainleveType::DegIIIp2 => "deg-III'-2",
            PainleveType::DdegIIIp => "ddeg-III'",
            PainleveType::IV => "IV",
            PainleveType::P34 => "34",
            PainleveType::II => "II",
            PainleveType::I => "I",
        }
    }

    /// Rank symbol of the Painlevé type.
    pub fn symbol(self) -> &'static str {
        match self {
            PainleveType::VI => "(1_ 1_ 1_ 1_)",
            PainleveType::NdegV => "(1_ 1_ 2)",
            PainleveType::DegV => "(1_ 1_ 3/2)",
            PainleveType::NdegIIIp => "(2 2)",
            PainleveType::DegIIIp1 => "(2;3/2)",
            PainleveType::DegIIIp2 => "(3/2;2)",
            PainleveType::DdegIIIp => "(3/2 3/2)",
            PainleveType::IV => "(1_ 3)",
            PainleveType::P34 => "(1_ 5/2)",
            PainleveType::II => "(4)",
            PainleveType::I => "(7/2)",
        }
    }

    pub fn supertype(self) -> Supertype {
        use PainleveType::*;
        match self {
            VI => Supertype::VI,
            NdegV | DegV => Supertype::V,
            NdegIIIp | DegIIIp1 | DegIIIp2 | DdegIIIp => Supertype::IIIp,
            IV | P34 => Supertype::IV34,
            II | I => Supertype::III,
        }
    }

    pub fn parse(s: &str) -> Result<PainleveType, CatalogError> {
        let key = s.trim().to_ascii_lowercase().replace(['_', ' '], "-");
        let alias = match key.as_str() {
            "6" | "p6" => "vi",
            "5" | "p5" | "v" => "ndeg-v",
            "3" | "iii" | "iii'" | "ndeg-iii" => "ndeg-iii'",
            "deg-iii-1" => "deg-iii'-1",
            "deg-iii-2" => "deg-iii'-2",
            "ddeg-iii" => "ddeg-iii'",
            "4" | "p4" => "iv",
            "p34" => "34",
            "2" | "p2" => "ii",
            "1" | "p1" => "i",
            other => other,
        }
        .to_string();
        PainleveType::ALL
            .into_iter()
            .find(|t| t.name().to_ascii_lowercase() == alias)
            .ok_or_else(|| CatalogError::UnknownType(s.to_string()))
    }
}

pub fn dlambda() -> Var {
    Var::new("dlambda")
}

pub(crate) fn e(s: &str) -> RatFunc {
    parse_ratfunc(s).expect("catalog expression")
}

struct Row {
    heun_symbol: &'static str,
    lead: &'static str,
    roots: &'static [(&'static str, u32)],
    tau: &'static str,
    eta: &'static str,
    tag: SubcaseTag,
    a: &'static str,
    hamiltonian: &'static str,
    ode: &'static str,
    dict: &'static [(&'static str, &'static str)],
}

fn row(t: PainleveType) -> Row {
    use PainleveType::*;
    match t {
        VI => Row {
            heun_symbol: "(1_ 1_ 1_;1_)",
            lead: "1",
            roots: &[("0", 1), ("1", 1), ("t", 1)],
            tau: "(1-k0)*(z-1)*(z-t) + (1-k1)*z*(z-t) + (1-kt)*z*(z-1)",
            eta: "((k0+k1+kt-1)^2 - kinf^2)*z/4 - c",
            tag: SubcaseTag::A1,
            a: "(lambda-t)*z*(z-1)/(t*(t-1)*(z-lambda))",
            hamiltonian: "(lambda*(lambda-1)*(lambda-t)*mu^2 - (k0*(lambda-1)*(lambda-t) + k1*lambda*(lambda-t) + (kt-1)*lambda*(lambda-1))*mu + ((k0+k1+kt-1)^2-kinf^2)*(lambda-t)/4)/(t*(t-1))",
            ode: "(1/lambda + 1/(lambda-1) + 1/(lambda-t))*dlambda^2/2 - (1/t + 1/(t-1) + 1/(lambda-t))*dlambda + lambda*(lambda-1)*(lambda-t)/(t^2*(t-1)^2)*(alpha + beta*t/lambda^2 + gamma*(t-1)/(lambda-1)^2 + delta*t*(t-1)/(lambda-t)^2)",
            dict: &[("alpha", "kinf^2/2"), ("beta", "-k0^2/2"), ("gamma", "k1^2/2"), ("delta", "(1-kt^2)/2")],
        },
        NdegV => Row {
            heun_symbol: "(2 1_;1_)",
            lead: "1",
            roots: &[("1", 2), ("0", 1)],
            tau: "(2-chi1)*z*(z-1) + (1-k0)*(z-1)^2 + t*z",
            eta: "((k0+chi1-1)^2 - kinf^2)*(z-1)/4 - c",
            tag: SubcaseTag::Ap,
            a: "(lambda-1)*z*(z-1)/(t*(z-lambda))",
            hamiltonian: "((lambda-1)^2*lambda*mu^2 - (k0*(lambda-1)^2 + (chi1-1)*lambda*(lambda-1) - t*lambda)*mu + ((k0+chi1-1)^2-kinf^2)*(lambda-1)/4)/t",
            ode: "(1/(2*lambda) + 1/(lambda-1))*dlambda^2 - dlambda/t + (lambda-1)^2/t^2*(alpha*lambda + beta/lambda) + gamma*lambda/t - lambda*(lambda+1)/(2*(lambda-1))",
            dict: &[("alpha", "kinf^2/2"), ("beta", "-k0^2/2"), ("gamma", "chi1")],
        },
        DegV => Row {
            heun_symbol: "(3/2 1_;1_)",
            lead: "1",
            roots: &[("1", 2), ("0", 1)],
            tau: "(z-1)*z + (1-k0)*(z-1)^2",
            eta: "-t/(z-1) + (k0^2-kinf^2)*z/4 - c",
            tag: SubcaseTag::Aq,
            a: "(lambda-1)*z*(z-1)/(t*(z-lambda))",
            hamiltonian: "(lambda*(lambda-1)^2*mu^2 - k0*(lambda-1)^2*mu + (k0^2-kinf^2)*(lambda-1)/4 - t*lambda/(lambda-1))/t",
            ode: "(1/(2*lambda) + 1/(lambda-1))*dlambda^2 - dlambda/t + (lambda-1)^2/t^2*(alpha*lambda + beta/lambda) - 2*lambda/t",
            dict: &[("alpha", "kinf^2/2"), ("beta", "-k0^2/2")],
        },
        NdegIIIp => Row {
            heun_symbol: "(2;2)",
            lead: "1",
            roots: &[("0", 2)],
            tau: "t + (2-chi0)*z - z^2",
            eta: "(chi0+chiinf-1)*z/2 - c",
            tag: SubcaseTag::Ap,
            a: "lambda*z/(t*(z-lambda))",
            hamiltonian: "(lambda^2*mu^2 - (lambda^2 + (chi0-1)*lambda - t)*mu + (chi0+chiinf-1)*lambda/2)/t",
            ode: "dlambda^2/lambda - dlambda/t + alpha*lambda^2/(4*t^2) + lambda^3/t^2 + beta/(4*t) - 1/lambda",
            dict: &[("alpha", "-4*chiinf"), ("beta", "4*chi0")],
        },
        DegIIIp1 => Row {
            heun_symbol: "(2;3/2)",
            lead: "1",
            roots: &[("0", 2)],
            tau: "t + (2-chi0)*z",
            eta: "z/2 - c",
            tag: SubcaseTag::Ap,
            a: "lambda*z/(t*(z-lambda))",
            hamiltonian: "(lambda^2*mu^2 + ((1-chi0)*lambda + t)*mu + lambda/2)/t",
            ode: "dlambda^2/lambda - dlambda/t - lambda^2/t^2 + beta/(4*t) - 1/lambda",
            dict: &[("beta", "4*chi0")],
        },
        DegIIIp2 => Row {
            heun_symbol: "(3/2;2)",
            lead: "1",
            roots: &[("0", 2)],
            tau: "z - z^2",
            eta: "t/(2*z) - c + chiinf*z/2",
            tag: SubcaseTag::Aq,
            a: "lambda*z/(t*(z-lambda))",
            hamiltonian: "(lambda^2*mu^2 - lambda^2*mu + chiinf*lambda/2 + t/(2*lambda))/t",
            ode: "dlambda^2/lambda - dlambda/t + alpha*lambda^2/(4*t^2) + lambda^3/t^2 + 1/t",
            dict: &[("alpha", "-4*chiinf")],
        },
        DdegIIIp => Row {
            heun_symbol: "(3/2;3/2)",
            lead: "1",
            roots: &[("0", 2)],
            tau: "2*z",
            eta: "z/2 - c + t/(2*z)",
            tag: SubcaseTag::Aq,
            a: "lambda*z/(t*(z-lambda))",
            hamiltonian: "(lambda^2*mu^2 + lambda*mu + lambda/2 + t/(2*lambda))/t",
            ode: "dlambda^2/lambda - dlambda/t - lambda^2/t^2 + 1/t",
            dict: &[],
        },
        IV => Row {
            heun_symbol: "(1_;3)",
            lead: "1",
            roots: &[("0", 1)],
            tau: "1 - k0 - t*z - z^2/2",
            eta: "thinf*z/2 - c",
            tag: SubcaseTag::Bp,
            a: "2*z/(z-lambda)",
            hamiltonian: "2*lambda*mu^2 - (lambda^2 + 2*t*lambda + 2*k0)*mu + thinf*lambda",
            ode: "dlambda^2/(2*lambda) + 3*lambda^3/2 + 4*t*lambda^2 + 2*(t^2-alpha)*lambda + beta/lambda",
            dict: &[("alpha", "-k0 + 2*thinf + 1"), ("beta", "-2*k0^2")],
        },
        P34 => Row {
            heun_symbol: "(1_;5/2)",
            lead: "1",
            roots: &[("0", 1)],
            tau: "1 - k0",
            eta: "-z^2/2 - t*z/2 - c",
            tag: SubcaseTag::Bq,
            a: "z/(z-lambda)",
            hamiltonian: "lambda*mu^2 - k0*mu - lambda^2/2 - t*lambda/2",
            ode: "dlambda^2/(2*lambda) + 2*lambda^2 + t*lambda - alpha/(2*lambda)",
            dict: &[("alpha", "k0^2")],
        },
        II => Row {
            heun_symbol: "(;4)",
            lead: "1",
            roots: &[],
            tau: "-2*z^2 - t",
            eta: "-(2*alpha+1)*z - c",
            tag: SubcaseTag::Bp,
            a: "1/(2*(z-lambda))",
            hamiltonian: "mu^2/2 - (lambda^2 + t/2)*mu - (alpha + 1/2)*lambda",
            ode: "2*lambda^3 + t*lambda + alpha",
            dict: &[],
        },
        I => Row {
            heun_symbol: "(;7/2)",
            lead: "1",
            roots: &[],
            tau: "0",
            eta: "-4*z^3 - 2*t*z - c",
            tag: SubcaseTag::Bq,
            a: "1/(2*(z-lambda))",
            hamiltonian: "mu^2/2 - 2*lambda^3 - t*lambda",
            ode: "6*lambda^2 + t",
            dict: &[],
        },
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub ptype: PainleveType,
    pub heun_symbol: &'static str,
    pub family: TimeFamily,
    pub data: IsomonodromyData,
    /// Compatibility function `a` as tabulated.
    pub a: RatFunc,
    pub b: RatFunc,
    /// Hamiltonian as tabulated; equals `data.h` up to a function of `t`.
    pub hamiltonian: RatFunc,
    /// `F(t, lambda, dlambda)` with `lambda'' = F`, in the tabulated constants.
    pub ode_rhs: RatFunc,
    pub param_dict: Vec<(Var, RatFunc)>,
}

impl CatalogEntry {
    pub fn ode_in_hamiltonian_params(&self) -> RatFunc {
        self.ode_rhs.substitute_many(&self.param_dict)
    }

    /// `data.h - hamiltonian`; free of `lambda` and `mu` for a consistent entry.
    pub fn free_term(&self) -> RatFunc {
        &self.data.h - &self.hamiltonian
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "type": self.ptype.name(),
            "symbol": self.ptype.symbol(),
            "supertype": self.ptype.supertype().name(),
            "heun_symbol": self.heun_symbol,
            "subcase": self.data.subcase.tag.name(),
            "scale": self.data.subcase.scale.to_string(),
            "sigma": self.family.sigma().to_string(),
            "tau": self.family.op.tau.to_string(),
            "eta": self.family.op.eta.to_string(),
            "a": self.a.to_string(),
            "b": self.b.to_string(),
            "H": self.hamiltonian.to_string(),
            "ode": self.ode_rhs.to_string(),
            "param_dict": self.param_dict.iter().map(|(v, r)| (v.name().to_string(), serde_json::Value::String(r.to_string()))).collect::<serde_json::Map<_, _>>(),
        })
    }
}

pub fn entry(t: PainleveType) -> Result<CatalogEntry, CatalogError> {
    let r = row(t);
    let roots = r.roots.iter().map(|(x, m)| (e(x), *m)).collect();
    let op = HeunOperator::new(e(r.lead), roots, e(r.tau), e(r.eta)).map_err(IsoError::from)?;
    let family = TimeFamily::new(op);
    let sc = subcase_with_tag(&family, r.tag)?;
    let data = hamiltonian(&family, &sc)?;
    let a = e(r.a);
    let lam = RatFunc::var(&Var::lambda());
    let c_lam = (&a * &(&RatFunc::var(&Var::z()) - &lam)).substitute(&Var::z(), &lam);
    let b = (-&(&c_lam * &RatFunc::var(&Var::mu()))).checked_div(&(&RatFunc::var(&Var::z()) - &lam))?;
    Ok(CatalogEntry {
        ptype: t,
        heun_symbol: r.heun_symbol,
        family,
        data,
        a,
        b,
        hamiltonian: e(r.hamiltonian),
        ode_rhs: e(r.ode),
        param_dict: r.dict.iter().map(|(k, v)| (Var::new(k), e(v))).collect(),
    })
}

pub fn catalog() -> Result<Vec<CatalogEntry>, CatalogError> {
    PainleveType::ALL.into_iter().map(entry).collect()
}

/// Second-order equation `lambda'' = A lambda'^2 + B lambda' + C` from
/// `H = f mu^2/2 + g mu + h`.
#[derive(Clone, Debug, PartialEq)]
pub struct SecondOrder {
    pub a: RatFunc,
    pub b: RatFunc,
    pub c: RatFunc,
    /// `A dlambda^2 + B dlambda + C`.
    pub rhs: RatFunc,
}

/// `(f, g, h)` with `H = f mu^2/2 + g mu + h`.
pub fn quadratic_parts(h: &RatFunc) -> Result<(RatFunc, RatFunc, RatFunc), CatalogError> {
    let mu = Var::mu();
    if h.den().depends_on(&mu) {
        return Err(CatalogError::NotQuadraticInMu);
    }
    let cs = h.num().coeffs_in(&mu);
    if cs.len() > 3 {
        return Err(CatalogError::NotQuadraticInMu);
    }
    let den = RatFunc::from_poly(h.den().clone());
    let get = |k: usize| cs.get(k).map(|c| &RatFunc::from_poly(c.clone()) / &den).unwrap_or_default();
    Ok((get(2).scale(&rat(2)), get(1), get(0)))
}

pub fn derive_second_order(h: &RatFunc) -> Result<SecondOrder, CatalogError> {
    let (f, g, hh) = quadratic_parts(h)?;
    if f.is_zero() {
        return Err(CatalogError::NotQuadraticInMu);
    }
    let (l, t) = (Var::lambda(), Var::t());
    let fl = f.derivative(&l);
    let ft = f.derivative(&t);
    let a = fl.checked_div(&f.scale(&rat(2)))?;
    let b = ft.checked_div(&f)?;
    let c = &(&(&(&(-&(&g.pow(2) * &fl).checked_div(&f.scale(&rat(2)))?) - &(&g * &ft).checked_div(&f)?) + &(&g * &g.derivative(&l)))
        + &g.derivative(&t))
        - &(&f * &hh.derivative(&l));
    let d = RatFunc::var(&dlambda());
    let rhs = &(&(&a * &d.pow(2)) + &(&b * &d)) + &c;
    Ok(SecondOrder { a, b, c, rhs })
}

/// Consistency report for one catalog entry.
#[derive(Clone, Debug)]
pub struct EntryCheck {
    pub ptype: PainleveType,
    pub compatibility: bool,
    pub hamiltonian_matches: bool,
    pub a_matches: bool,
    pub ode_matches: bool,
    pub heun_symbol_matches: bool,
}

impl EntryCheck {
    pub fn all(&self) -> bool {
        self.compatibility && self.hamiltonian_matches && self.a_matches && self.ode_matches && self.heun_symbol_matches
    }
}

pub fn check_entry(en: &CatalogEntry) -> Result<EntryCheck, CatalogError> {
    let res = verify_full_compatibility(&en.family, &en.data)?;
    let free = en.free_term();
    let ode = derive_second_order(&en.hamiltonian)?;
    let sym = classify(&en.family.op).map(|c| c.symbol.to_string()).unwrap_or_default();
    Ok(EntryCheck {
        ptype: en.ptype,
        compatibility: res.both_zero(),
        hamiltonian_matches: !free.depends_on(&Var::lambda()) && !free.depends_on(&Var::mu()),
        a_matches: en.a == en.data.a && en.b == en.data.b,
        ode_matches: ode.rhs == en.ode_in_hamiltonian_params(),
        heun_symbol_matches: sym == en.heun_symbol,
    })
}

#[cfg(test)]
mod tests;
