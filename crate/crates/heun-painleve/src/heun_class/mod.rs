//! Heun class operators `sigma d^2 + tau d + eta` with `deg sigma <= 3`,
//! `deg tau <= 2`, `deg sigma*eta <= 4`; class membership for general `n`,
//! classification by singularity ranks, normal forms, swaps with infinity.

mod normal;
mod table;

use std::collections::BTreeMap;
use std::fmt;

use crate::polyalg::{AlgError, Genericity, MPoly, Point, RatFunc, Var};
use crate::sing_analysis::{analyze, HalfInt, PrincipalOperator, QExt, SingError, SingularityReport};

pub use normal::{to_normal_form, to_variety_b, ConstraintCheck, ConstraintStatus, NormalForm};
pub use table::{riemann_operators, RiemannRow, TableRow, Variety};

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum HeunError {
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Sing(#[from] SingError),
    #[error("not a Heun class operator: {0}")]
    NotHeunClass(String),
    #[error("no root of sigma at the origin")]
    RootNotAtOrigin,
    #[error("branch needs the square root of {0}, which is not rational")]
    IrrationalBranch(String),
    #[error("operator is not grounded")]
    NotGrounded,
    #[error("exponent equation {0} has no solution")]
    NoExponent(String),
    #[error("{0} has no variety b)")]
    NoVarietyB(String),
}

fn z() -> RatFunc {
    RatFunc::var(&Var::z())
}

/// Coefficients in `z` of a function polynomial in `z`.
pub fn z_coeffs(f: &RatFunc) -> Option<Vec<RatFunc>> {
    let zv = Var::z();
    if f.den().depends_on(&zv) {
        return None;
    }
    let den = RatFunc::from_poly(f.den().clone());
    Some(
        f.num()
            .coeffs_in(&zv)
            .into_iter()
            .map(|c| &RatFunc::from_poly(c) / &den)
            .collect(),
    )
}

/// Degree in `z` of a polynomial in `z`; `None` for zero.
pub fn z_degree(f: &RatFunc) -> Option<u32> {
    if f.is_zero() {
        None
    } else {
        f.num().degree_in(&Var::z())
    }
}

/// Laurent coefficients of a Laurent polynomial in `z` (denominator a power
/// of `z` times something free of `z`).
pub fn laurent_terms(f: &RatFunc) -> Option<BTreeMap<i64, RatFunc>> {
    let zv = Var::z();
    let dc = f.den().coeffs_in(&zv);
    let nz: Vec<usize> = (0..dc.len()).filter(|&i| !dc[i].is_zero()).collect();
    if nz.len() != 1 {
        return None;
    }
    let k = nz[0] as i64;
    let g = RatFunc::from_poly(dc[nz[0]].clone());
    let mut out = BTreeMap::new();
    for (j, c) in f.num().coeffs_in(&zv).into_iter().enumerate() {
        if !c.is_zero() {
            out.insert(j as i64 - k, &RatFunc::from_poly(c) / &g);
        }
    }
    Some(out)
}

/// Rational-function degree in `z` at infinity; `None` for zero.
fn deg_at_infinity(f: &RatFunc) -> Option<i64> {
    let zv = Var::z();
    if f.is_zero() {
        return None;
    }
    Some(f.num().degree_in(&zv).unwrap_or(0) as i64 - f.den().degree_in(&zv).unwrap_or(0) as i64)
}

/// `sigma d^2 + tau d + eta` with `sigma = lead * prod (z - r)^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeunOperator {
    pub lead: RatFunc,
    pub roots: Vec<(RatFunc, u32)>,
    pub tau: RatFunc,
    pub eta: RatFunc,
}

impl HeunOperator {
    pub fn new(lead: RatFunc, roots: Vec<(RatFunc, u32)>, tau: RatFunc, eta: RatFunc) -> Result<Self, HeunError> {
        let op = HeunOperator { lead, roots, tau, eta };
        op.validate()?;
        Ok(op)
    }

    /// Monic `sigma` given by its roots.
    pub fn monic_from_roots(roots: Vec<(RatFunc, u32)>, tau: RatFunc, eta: RatFunc) -> Result<Self, HeunError> {
        HeunOperator::new(RatFunc::one(), roots, tau, eta)
    }

    fn validate(&self) -> Result<(), HeunError> {
        let zv = Var::z();
        let bad = |m: &str| Err(HeunError::NotHeunClass(m.to_string()));
        if self.lead.is_zero() || self.lead.depends_on(&zv) {
            return bad("leading coefficient of sigma must be nonzero and free of z");
        }
        for (i, (r, m)) in self.roots.iter().enumerate() {
            if r.depends_on(&zv) || *m == 0 {
                return bad("roots of sigma must be free of z with positive multiplicity");
            }
            if self.roots[..i].iter().any(|(s, _)| (s - r).is_zero()) {
                return bad("roots of sigma must be distinct");
            }
        }
        if self.sigma_degree() > 3 {
            return bad("deg sigma > 3");
        }
        match z_coeffs(&self.tau) {
            Some(c) if c.len() <= 3 => {}
            _ => return bad("tau must be a polynomial in z of degree <= 2"),
        }
        match z_coeffs(&self.xi()) {
            Some(c) if c.len() <= 5 => {}
            _ => return bad("sigma*eta must be a polynomial in z of degree <= 4"),
        }
        Ok(())
    }

    pub fn sigma_degree(&self) -> u32 {
        self.roots.iter().map(|(_, m)| m).sum()
    }

    pub fn sigma(&self) -> RatFunc {
        let mut s = self.lead.clone();
        for (r, m) in &self.roots {
            s = &s * &(&z() - r).pow(*m);
        }
        s
    }

    pub fn xi(&self) -> RatFunc {
        &self.sigma() * &self.eta
    }

    pub fn root_values(&self) -> Vec<RatFunc> {
        self.roots.iter().map(|(r, _)| r.clone()).collect()
    }

    pub fn principal(&self) -> PrincipalOperator {
        let s = self.sigma();
        PrincipalOperator::from_coefficients(&s, &self.tau, &self.eta)
            .expect("sigma is nonzero")
            .with_hints(self.root_values())
    }

    /// Reassembles `tau = p sigma`, `eta = q sigma` for a given `sigma`.
    pub fn from_principal(lead: RatFunc, roots: Vec<(RatFunc, u32)>, a: &PrincipalOperator) -> Result<Self, HeunError> {
        let mut op = HeunOperator {
            lead,
            roots,
            tau: RatFunc::zero(),
            eta: RatFunc::zero(),
        };
        let s = op.sigma();
        op.tau = &a.p * &s;
        op.eta = &a.q * &s;
        op.validate()?;
        Ok(op)
    }

    /// Same equation with `sigma` made monic.
    pub fn monic(&self) -> HeunOperator {
        let inv = self.lead.inv().expect("lead is nonzero");
        HeunOperator {
            lead: RatFunc::one(),
            roots: self.roots.clone(),
            tau: &self.tau * &inv,
            eta: &self.eta * &inv,
        }
    }

    /// `sigma | xi` and `deg eta <= 1`.
    pub fn is_grounded(&self) -> bool {
        matches!(z_coeffs(&self.eta), Some(c) if c.len() <= 2)
    }

    /// The operator in `w = z - c`.
    pub fn translate(&self, c: &RatFunc) -> HeunOperator {
        let zv = Var::z();
        let phi = &z() + c;
        HeunOperator {
            lead: self.lead.clone(),
            roots: self.roots.iter().map(|(r, m)| (r - c, *m)).collect(),
            tau: self.tau.substitute(&zv, &phi),
            eta: self.eta.substitute(&zv, &phi),
        }
    }

    pub fn has_root_at_origin(&self) -> bool {
        self.roots.iter().any(|(r, _)| r.is_zero())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "sigma": self.sigma().to_string(),
            "tau": self.tau.to_string(),
            "eta": self.eta.to_string(),
            "roots": self.roots.iter().map(|(r, m)| serde_json::json!({"root": r.to_string(), "multiplicity": m})).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for HeunOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*d^2 + ({})*d + ({})", self.sigma(), self.tau, self.eta)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Membership {
    pub in_class: bool,
    pub grounded: bool,
    /// Smallest admissible `sigma` for the class test.
    pub sigma: RatFunc,
}

fn z_part(d: &MPoly) -> MPoly {
    let zv = Var::z();
    if d.depends_on(&zv) {
        d.clone()
    } else {
        MPoly::one()
    }
}

/// Smallest `s` (up to factors free of `z`) with `d | s^2`, by square-free
/// decomposition in `z`.
fn square_cover(d: &MPoly) -> MPoly {
    use crate::polyalg::gcd::gcd;
    let zv = Var::z();
    if !d.depends_on(&zv) {
        return MPoly::one();
    }
    let df = d.derivative(&zv);
    let b = gcd(d, &df);
    let mut c = d.exact_div(&b).expect("gcd divides");
    let mut e = &df.exact_div(&b).expect("gcd divides") - &c.derivative(&zv);
    let mut i = 1u32;
    let mut out = MPoly::one();
    while c.depends_on(&zv) {
        let a = gcd(&c, &e);
        out = &out * &a.pow(i.div_ceil(2));
        c = c.exact_div(&a).expect("gcd divides");
        e = &e.exact_div(&a).expect("gcd divides") - &c.derivative(&zv);
        i += 1;
    }
    out
}

/// Is `a` in the `M_n` class, resp. the grounded `M_n` class?
pub fn mn_class_membership(a: &PrincipalOperator, n: u32) -> Membership {
    use crate::polyalg::gcd::lcm;
    let n = n as i64;
    let le = |d: Option<i64>, b: i64| d.map_or(true, |d| d <= b);
    let dp = z_part(a.p.den());
    let s = RatFunc::from_poly(lcm(&dp, &square_cover(&z_part(a.q.den()))));
    let ds = deg_at_infinity(&s).unwrap_or(0);
    let in_class = ds <= n
        && le(deg_at_infinity(&(&a.p * &s)), n - 1)
        && le(deg_at_infinity(&(&(&a.q * &s) * &s)), 2 * n - 2);
    let g = RatFunc::from_poly(lcm(&dp, &z_part(a.q.den())));
    let eta = &a.q * &g;
    let grounded = deg_at_infinity(&g).unwrap_or(0) <= n
        && le(deg_at_infinity(&(&a.p * &g)), n - 1)
        && z_coeffs(&eta).is_some()
        && le(deg_at_infinity(&eta), n - 2);
    Membership { in_class, grounded, sigma: s }
}

/// `(m1 m2 ...; m_inf)`; Fuchsian points carry rank one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeunTypeSymbol {
    /// Descending.
    pub finite: Vec<HalfInt>,
    /// `None` when infinity is an ordinary point.
    pub infinity: Option<HalfInt>,
}

impl HeunTypeSymbol {
    pub fn new(mut finite: Vec<HalfInt>, infinity: Option<HalfInt>) -> Self {
        finite.sort_by(|a, b| b.cmp(a));
        HeunTypeSymbol { finite, infinity }
    }

    /// From twice the ranks; `0` at infinity means ordinary.
    pub fn twice(finite: &[i64], infinity: i64) -> Self {
        HeunTypeSymbol::new(
            finite.iter().map(|&r| HalfInt(r)).collect(),
            if infinity == 0 { None } else { Some(HalfInt(infinity)) },
        )
    }

    pub fn all(&self) -> Vec<HalfInt> {
        let mut v = self.finite.clone();
        v.extend(self.infinity);
        v.sort_by(|a, b| b.cmp(a));
        v
    }

    pub fn rounded_sum(&self) -> i64 {
        self.all().iter().map(|r| r.ceil()).sum()
    }
}

fn render_rank(r: HalfInt) -> String {
    if r == HalfInt(2) {
        "1_".into()
    } else {
        r.to_string()
    }
}

impl fmt::Display for HeunTypeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fin: Vec<String> = self.finite.iter().map(|r| render_rank(*r)).collect();
        write!(f, "({};{})", fin.join(" "), self.infinity.map(render_rank).unwrap_or_default())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeunType {
    Standard,
    NdegConfluent,
    DegConfluent,
    NdegDoublyConfluent,
    DegDoublyConfluent,
    DdegDoublyConfluent,
    NdegBiconfluent,
    DegBiconfluent,
    NdegTriconfluent,
    DegTriconfluent,
    RiemannReducible,
}

impl HeunType {
    pub fn name(self) -> &'static str {
        match self {
            HeunType::Standard => "standard Heun",
            HeunType::NdegConfluent => "non-degenerate confluent Heun",
            HeunType::DegConfluent => "degenerate confluent Heun",
            HeunType::NdegDoublyConfluent => "non-degenerate doubly confluent Heun",
            HeunType::DegDoublyConfluent => "degenerate doubly confluent Heun",
            HeunType::DdegDoublyConfluent => "doubly degenerate doubly confluent Heun",
            HeunType::NdegBiconfluent => "non-degenerate biconfluent Heun",
            HeunType::DegBiconfluent => "degenerate biconfluent Heun",
            HeunType::NdegTriconfluent => "non-degenerate triconfluent Heun",
            HeunType::DegTriconfluent => "degenerate triconfluent Heun",
            HeunType::RiemannReducible => "Riemann class",
        }
    }

    pub fn of_symbol(s: &HeunTypeSymbol) -> HeunType {
        let all: Vec<i64> = s.all().iter().map(|r| r.0).collect();
        match all.as_slice() {
            [2, 2, 2, 2] => HeunType::Standard,
            [4, 2, 2] => HeunType::NdegConfluent,
            [3, 2, 2] => HeunType::DegConfluent,
            [4, 4] => HeunType::NdegDoublyConfluent,
            [4, 3] => HeunType::DegDoublyConfluent,
            [3, 3] => HeunType::DdegDoublyConfluent,
            [6, 2] => HeunType::NdegBiconfluent,
            [5, 2] => HeunType::DegBiconfluent,
            [8] => HeunType::NdegTriconfluent,
            [7] => HeunType::DegTriconfluent,
            _ => HeunType::RiemannReducible,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub symbol: HeunTypeSymbol,
    pub kind: HeunType,
    pub riemann: Option<RiemannRow>,
    pub table_row: Option<TableRow>,
    pub reports: Vec<SingularityReport>,
    /// Parameter expressions taken to be nonzero.
    pub assumptions: Vec<String>,
}

impl Classification {
    pub fn riemann_reducible(&self) -> bool {
        self.kind == HeunType::RiemannReducible
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "symbol": self.symbol.to_string(),
            "name": self.kind.name(),
            "riemann_reducible": self.riemann_reducible(),
            "riemann_row": self.riemann.map(|r| r.name()),
            "table_row": self.table_row.map(|r| r.label()),
            "assumptions": self.assumptions,
            "singularities": self.reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
        })
    }
}

fn leading_assumption(c: Option<QExt>, what: &str, site: &Point, out: &mut Vec<String>) {
    if let Some(c) = c {
        let constant = c.as_rational().map(|r| r.is_constant()).unwrap_or(false);
        if !constant {
            let s = format!("{c} != 0 ({what} at {site})");
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
}

/// Ranks at all singular points of a principal operator, as a type symbol.
pub fn classify_principal(a: &PrincipalOperator, mode: Genericity) -> Result<Classification, HeunError> {
    let reports = analyze(a, mode)?;
    let mut finite = Vec::new();
    let mut infinity = None;
    let mut assumptions = Vec::new();
    for r in &reports {
        let ar = r.absolute_rank.unwrap_or(r.rank).max(HalfInt(2));
        if r.location.is_infinity() {
            infinity = Some(ar);
        } else {
            finite.push(ar);
        }
        let l = a.local_op(&r.location, 0)?;
        leading_assumption(l.p.leading(), "leading coefficient of p", &r.location, &mut assumptions);
        leading_assumption(l.q.leading(), "leading coefficient of q", &r.location, &mut assumptions);
    }
    let symbol = HeunTypeSymbol::new(finite, infinity);
    let kind = HeunType::of_symbol(&symbol);
    let riemann = if kind == HeunType::RiemannReducible {
        RiemannRow::of_symbol(&symbol)
    } else {
        None
    };
    let table_row = TableRow::of_symbol(&symbol);
    Ok(Classification {
        symbol,
        kind,
        riemann,
        table_row,
        reports,
        assumptions,
    })
}

/// Type symbol and name of a Heun class operator. Symbolic leading
/// coefficients are taken to be nonzero and listed as assumptions.
pub fn classify(op: &HeunOperator) -> Result<Classification, HeunError> {
    op.validate()?;
    classify_principal(&op.principal(), Genericity::Generic)
}

/// `w = 1/z` for an operator with `sigma(0) = 0`:
/// `sigma~ = w^3 rho(1/w)`, `tau~ = w^2 (2 rho(1/w) - tau(1/w))`, `eta~ = eta(1/w)`.
pub fn swap_infinity(op: &HeunOperator) -> Result<HeunOperator, HeunError> {
    let (rho_roots, lead, rho) = split_origin(op)?;
    let zv = Var::z();
    let inv = z().inv().expect("z is nonzero");
    let w2 = z().pow(2);
    let tau = &w2 * &(&rho.substitute(&zv, &inv).scale(&crate::polyalg::rat(2)) - &op.tau.substitute(&zv, &inv));
    let eta = op.eta.substitute(&zv, &inv);
    let (lead, roots) = swapped_sigma(&rho_roots, &lead);
    HeunOperator::new(lead, roots, tau, eta)
}

/// `rho = sigma / z` as roots, leading coefficient and polynomial.
fn split_origin(op: &HeunOperator) -> Result<(Vec<(RatFunc, u32)>, RatFunc, RatFunc), HeunError> {
    if !op.has_root_at_origin() {
        return Err(HeunError::RootNotAtOrigin);
    }
    let mut roots = Vec::new();
    for (r, m) in &op.roots {
        if r.is_zero() {
            if *m > 1 {
                roots.push((r.clone(), m - 1));
            }
        } else {
            roots.push((r.clone(), *m));
        }
    }
    let mut rho = op.lead.clone();
    for (r, m) in &roots {
        rho = &rho * &(&z() - r).pow(*m);
    }
    Ok((roots, op.lead.clone(), rho))
}

/// `w^3 rho(1/w)` in factored form.
fn swapped_sigma(rho_roots: &[(RatFunc, u32)], lead: &RatFunc) -> (RatFunc, Vec<(RatFunc, u32)>) {
    let mut lead = lead.clone();
    let mut roots = Vec::new();
    let deg: u32 = rho_roots.iter().map(|(_, m)| m).sum();
    if deg < 3 {
        roots.push((RatFunc::zero(), 3 - deg));
    }
    for (r, m) in rho_roots {
        if r.is_zero() {
            continue;
        }
        lead = &lead * &(-r).pow(*m);
        roots.push((r.inv().expect("nonzero root"), *m));
    }
    (lead, roots)
}

/// Swap that stays grounded: `w = 1/z` followed by `w^{-alpha} . w^alpha`
/// with `alpha` a rational root of `(rho''/2) a(a+1) - (tau''/2) a + eta' = 0`.
pub fn grounded_swap(op: &HeunOperator) -> Result<(HeunOperator, RatFunc), HeunError> {
    if !op.is_grounded() {
        return Err(HeunError::NotGrounded);
    }
    let (rho_roots, lead, rho) = split_origin(op)?;
    let zv = Var::z();
    let coeff = |f: &RatFunc, k: usize| z_coeffs(f).and_then(|c| c.get(k).cloned()).unwrap_or_default();
    let r2 = coeff(&rho, 2);
    let t2 = coeff(&op.tau, 2);
    let e1 = coeff(&op.eta, 1);
    // r2 a^2 + (r2 - t2) a + e1 = 0
    let b = &r2 - &t2;
    let alpha = if r2.is_zero() {
        if b.is_zero() {
            if e1.is_zero() {
                RatFunc::zero()
            } else {
                return Err(HeunError::NoExponent(format!("{e1} = 0")));
            }
        } else {
            -&e1.checked_div(&b)?
        }
    } else {
        let (x1, _) = QExt::quadratic_roots(&b.checked_div(&r2)?, &e1.checked_div(&r2)?);
        match x1.as_rational() {
            Some(x) => x.clone(),
            None => return Err(HeunError::IrrationalBranch(x1.to_string())),
        }
    };
    let inv = z().inv().expect("z is nonzero");
    let w2 = z().pow(2);
    let one = RatFunc::one();
    let a1 = &alpha + &one;
    let tau = &(&(&w2 * &rho.substitute(&zv, &inv)) * &a1.scale(&crate::polyalg::rat(2))) - &(&w2 * &op.tau.substitute(&zv, &inv));
    let drho = rho.derivative(&zv);
    let dtau = op.tau.derivative(&zv);
    let at0 = |f: &RatFunc| f.substitute(&zv, &RatFunc::zero());
    let eta = &(&(&z() * &(&alpha * &(&(&a1 * &at0(&rho)) - &at0(&op.tau))))
        + &(&alpha * &(&(&a1 * &at0(&drho)) - &at0(&dtau))))
        + &at0(&op.eta);
    let (lead, roots) = swapped_sigma(&rho_roots, &lead);
    Ok((HeunOperator::new(lead, roots, tau, eta)?, alpha))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymmoCheck {
    pub statement: &'static str,
    pub before: bool,
    pub after: bool,
}

impl SymmoCheck {
    pub fn agrees(&self) -> bool {
        self.before == self.after
    }
}

/// The four equivalences between vanishing conditions at the origin and
/// degree bounds after [`swap_infinity`], each side evaluated separately.
pub fn swap_mapping_properties(op: &HeunOperator) -> Result<Vec<SymmoCheck>, HeunError> {
    let sw = swap_infinity(op)?;
    let zv = Var::z();
    let at0 = |f: &RatFunc| f.substitute(&zv, &RatFunc::zero()).is_zero();
    let sigma = op.sigma();
    let xi = op.xi();
    let ds_zero = at0(&sigma.derivative(&zv));
    let xi0 = at0(&xi);
    let dxi0 = at0(&xi.derivative(&zv));
    let tau0 = at0(&op.tau);
    let le = |f: &RatFunc, b: u32| z_degree(f).map_or(true, |d| d <= b);
    let st = sw.sigma();
    let se = sw.xi();
    Ok(vec![
        SymmoCheck {
            statement: "sigma*eta(0) = 0  <=>  deg sigma~*eta~ <= 3",
            before: xi0,
            after: le(&se, 3),
        },
        SymmoCheck {
            statement: "sigma'(0) = 0  <=>  deg sigma~ <= 2",
            before: ds_zero,
            after: le(&st, 2),
        },
        SymmoCheck {
            statement: "sigma'(0) = 0, tau(0) = 0  <=>  deg sigma~ <= 2, deg tau~ <= 1",
            before: ds_zero && tau0,
            after: le(&st, 2) && le(&sw.tau, 1),
        },
        SymmoCheck {
            statement: "sigma'(0) = 0, sigma*eta(0) = (sigma*eta)'(0) = 0  <=>  deg sigma~ <= 2, deg sigma~*eta~ <= 2",
            before: ds_zero && xi0 && dxi0,
            after: le(&st, 2) && le(&se, 2),
        },
    ])
}
