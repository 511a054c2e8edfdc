//! Floating-point integration of the catalog Hamiltonian flows.

mod compile;

pub use compile::Compiled;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::isomonodromy::hamilton_equations;
use crate::painleve_catalog::{dlambda, entry, CatalogEntry, CatalogError, PainleveType};
use crate::polyalg::{RatFunc, Var};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum NumericsError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error("parameter {0} has no value")]
    MissingParameter(String),
    #[error("parameter {0} does not occur in the equation")]
    UnknownParameter(String),
    #[error("initial state within the pole guard at t = {0}")]
    PoleProximity(f64),
    #[error("step size fell below h_min at t = {0}")]
    StepUnderflow(f64),
    #[error("need at least 5 samples, got {0}")]
    TooFewSamples(usize),
    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),
    #[error("export failed: {0}")]
    Export(String),
}

/// A point of phase space. For second-order runs `mu` holds `dlambda/dt`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub t: f64,
    pub lambda: f64,
    pub mu: f64,
}

impl State {
    pub fn new(t: f64, lambda: f64, mu: f64) -> State {
        State { t, lambda, mu }
    }

    pub fn finite(&self) -> bool {
        self.t.is_finite() && self.lambda.is_finite() && self.mu.is_finite()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Rk4,
    Rkf45,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoleGuard {
    /// Minimum distance of lambda to the singular points of the operator.
    pub lambda_distance: f64,
    /// Minimum distance of t to the excluded times.
    pub time_distance: f64,
    /// Larger |lambda| or |mu| is treated as an approaching movable pole.
    pub max_abs: f64,
}

impl Default for PoleGuard {
    fn default() -> Self {
        PoleGuard { lambda_distance: 1e-6, time_distance: 1e-6, max_abs: 1e8 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub method: Method,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub pole_guard: PoleGuard,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            method: Method::Rkf45,
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            h_init: 1e-3,
            h_min: 1e-12,
            h_max: 1e-2,
            pole_guard: PoleGuard::default(),
        }
    }
}

impl IntegratorConfig {
    pub fn rk4(h: f64) -> Self {
        IntegratorConfig { method: Method::Rk4, h_init: h, h_min: h, h_max: h, ..Default::default() }
    }

    pub fn validate(&self) -> Result<(), NumericsError> {
        let bad = |m: &str| Err(NumericsError::InvalidConfig(m.to_string()));
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return bad("tolerances must be positive");
        }
        if !(self.h_min > 0.0 && self.h_min <= self.h_init && self.h_init <= self.h_max) {
            return bad("need 0 < h_min <= h_init <= h_max");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Completed,
    PoleProximity,
    StepUnderflow,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<State>,
    pub step_stats: StepStats,
    pub termination: Termination,
}

impl Trajectory {
    pub fn last(&self) -> State {
        *self.samples.last().expect("trajectory has its initial state")
    }

    pub fn to_csv(&self) -> Result<String, NumericsError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| NumericsError::Export(e.to_string());
        w.write_record(["t", "lambda", "mu"]).map_err(err)?;
        for s in &self.samples {
            w.serialize((s.t, s.lambda, s.mu)).map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| NumericsError::Export(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| NumericsError::Export(e.to_string()))
    }

    pub fn to_json(&self, cfg: &IntegratorConfig, meta: serde_json::Value) -> serde_json::Value {
        serde_json::json!({
            "schema_version": SCHEMA_VERSION,
            "meta": meta,
            "config": cfg,
            "termination": self.termination,
            "step_stats": self.step_stats,
            "samples": self.samples.iter().map(|s| [s.t, s.lambda, s.mu]).collect::<Vec<_>>(),
        })
    }
}

/// Points lambda must avoid, and polynomials in t whose zeros are excluded.
#[derive(Clone, Debug, Default)]
pub struct GuardSet {
    pub lambda_points: Vec<RatFunc>,
    pub excluded_times: Vec<RatFunc>,
}

impl GuardSet {
    pub fn for_entry(en: &CatalogEntry) -> GuardSet {
        let mut lambda_points: Vec<RatFunc> = en.family.op.roots.iter().map(|(r, _)| r.clone()).collect();
        let l = Var::lambda();
        let den = en.hamiltonian.den();
        if den.depends_on(&l) && den.eval_var(&l, &crate::polyalg::rat(0)).is_zero() && !lambda_points.iter().any(|p| p.is_zero()) {
            lambda_points.push(RatFunc::zero());
        }
        let m = &en.data.subcase.m;
        let excluded_times = [m.num(), m.den()]
            .into_iter()
            .filter(|p| p.depends_on(&Var::t()))
            .map(|p| RatFunc::from_poly(p.clone()))
            .collect();
        GuardSet { lambda_points, excluded_times }
    }
}

fn slots(params: &BTreeMap<String, f64>) -> (Vec<Var>, Vec<f64>) {
    let mut vars = vec![Var::t(), Var::lambda(), Var::mu(), dlambda()];
    let mut vals = vec![0.0; 4];
    for (k, x) in params {
        vars.push(Var::new(k));
        vals.push(*x);
    }
    (vars, vals)
}

fn compile(f: &RatFunc, vars: &[Var]) -> Result<Compiled, NumericsError> {
    Compiled::new(f, vars).map_err(|v| NumericsError::MissingParameter(v.name().to_string()))
}

fn check_params_used(fs: &[&RatFunc], params: &BTreeMap<String, f64>) -> Result<(), NumericsError> {
    for k in params.keys() {
        let v = Var::new(k);
        if !fs.iter().any(|f| f.depends_on(&v)) {
            return Err(NumericsError::UnknownParameter(k.clone()));
        }
    }
    Ok(())
}

/// A planar first-order system `y' = f(t, y)` with guards.
struct System {
    rhs: [Compiled; 2],
    /// Second-order form: slot 3 carries y[1] instead of slot 2.
    second_order: bool,
    values: Vec<f64>,
    lambda_points: Vec<Compiled>,
    times: Vec<(Compiled, Compiled)>,
    guard: PoleGuard,
}

impl System {
    fn new(rhs: [&RatFunc; 2], second_order: bool, guards: &GuardSet, params: &BTreeMap<String, f64>, guard: PoleGuard) -> Result<System, NumericsError> {
        let (vars, values) = slots(params);
        let t = Var::t();
        Ok(System {
            rhs: [compile(rhs[0], &vars)?, compile(rhs[1], &vars)?],
            second_order,
            lambda_points: guards.lambda_points.iter().map(|p| compile(p, &vars)).collect::<Result<_, _>>()?,
            times: guards
                .excluded_times
                .iter()
                .map(|p| Ok((compile(p, &vars)?, compile(&p.derivative(&t), &vars)?)))
                .collect::<Result<_, NumericsError>>()?,
            values,
            guard,
        })
    }

    fn point(&self, t: f64, y: [f64; 2]) -> Vec<f64> {
        let mut x = self.values.clone();
        x[0] = t;
        x[1] = y[0];
        x[if self.second_order { 3 } else { 2 }] = y[1];
        x
    }

    fn eval(&self, t: f64, y: [f64; 2]) -> [f64; 2] {
        let x = self.point(t, y);
        [self.rhs[0].eval(&x), self.rhs[1].eval(&x)]
    }

    /// Whether lambda crossed a guarded point during the step.
    fn crossed(&self, t0: f64, y0: [f64; 2], t1: f64, y1: [f64; 2]) -> bool {
        let (x0, x1) = (self.point(t0, y0), self.point(t1, y1));
        self.lambda_points.iter().any(|p| (y0[0] - p.eval(&x0)).signum() != (y1[0] - p.eval(&x1)).signum())
    }

    fn tripped(&self, t: f64, y: [f64; 2]) -> bool {
        if !(t.is_finite() && y[0].is_finite() && y[1].is_finite()) {
            return true;
        }
        if y[0].abs() > self.guard.max_abs || y[1].abs() > self.guard.max_abs {
            return true;
        }
        let x = self.point(t, y);
        if self.lambda_points.iter().any(|p| (y[0] - p.eval(&x)).abs() < self.guard.lambda_distance) {
            return true;
        }
        // distance to the nearest zero, to first order
        self.times.iter().any(|(p, dp)| {
            let (v, d) = (p.eval(&x), dp.eval(&x));
            v == 0.0 || (d != 0.0 && (v / d).abs() < self.guard.time_distance)
        })
    }
}

fn add(y: [f64; 2], k: [f64; 2], h: f64) -> [f64; 2] {
    [y[0] + h * k[0], y[1] + h * k[1]]
}

fn combo(y: [f64; 2], h: f64, ks: &[[f64; 2]], ws: &[f64]) -> [f64; 2] {
    let mut out = y;
    for (k, w) in ks.iter().zip(ws) {
        out[0] += h * w * k[0];
        out[1] += h * w * k[1];
    }
    out
}

fn rk4_step(sys: &System, t: f64, y: [f64; 2], h: f64) -> [f64; 2] {
    let k1 = sys.eval(t, y);
    let k2 = sys.eval(t + h / 2.0, add(y, k1, h / 2.0));
    let k3 = sys.eval(t + h / 2.0, add(y, k2, h / 2.0));
    let k4 = sys.eval(t + h, add(y, k3, h));
    combo(y, h, &[k1, k2, k3, k4], &[1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0])
}

/// Fehlberg pair; returns the fifth-order solution and the error estimate.
fn rkf45_step(sys: &System, t: f64, y: [f64; 2], h: f64) -> ([f64; 2], [f64; 2]) {
    let k1 = sys.eval(t, y);
    let k2 = sys.eval(t + h / 4.0, combo(y, h, &[k1], &[0.25]));
    let k3 = sys.eval(t + 3.0 * h / 8.0, combo(y, h, &[k1, k2], &[3.0 / 32.0, 9.0 / 32.0]));
    let k4 = sys.eval(t + 12.0 * h / 13.0, combo(y, h, &[k1, k2, k3], &[1932.0 / 2197.0, -7200.0 / 2197.0, 7296.0 / 2197.0]));
    let k5 = sys.eval(t + h, combo(y, h, &[k1, k2, k3, k4], &[439.0 / 216.0, -8.0, 3680.0 / 513.0, -845.0 / 4104.0]));
    let k6 = sys.eval(
        t + h / 2.0,
        combo(y, h, &[k1, k2, k3, k4, k5], &[-8.0 / 27.0, 2.0, -3544.0 / 2565.0, 1859.0 / 4104.0, -11.0 / 40.0]),
    );
    let ks = [k1, k2, k3, k4, k5, k6];
    let b5 = [16.0 / 135.0, 0.0, 6656.0 / 12825.0, 28561.0 / 56430.0, -9.0 / 50.0, 2.0 / 55.0];
    let b4 = [25.0 / 216.0, 0.0, 1408.0 / 2565.0, 2197.0 / 4104.0, -1.0 / 5.0, 0.0];
    let diff: Vec<f64> = b5.iter().zip(&b4).map(|(a, b)| a - b).collect();
    (combo(y, h, &ks, &b5), combo([0.0, 0.0], h, &ks, &diff))
}

fn run(sys: &System, init: State, t_end: f64, cfg: &IntegratorConfig) -> Result<Trajectory, NumericsError> {
    cfg.validate()?;
    let mut y = [init.lambda, init.mu];
    if sys.tripped(init.t, y) {
        return Err(NumericsError::PoleProximity(init.t));
    }
    let dir = if t_end >= init.t { 1.0 } else { -1.0 };
    let mut t = init.t;
    let mut samples = vec![init];
    let mut stats = StepStats::default();
    let mut h = cfg.h_init;
    let done = |t: f64| dir * (t_end - t) <= 1e-14 * t_end.abs().max(1.0);
    let mut termination = Termination::Completed;
    while !done(t) {
        let remaining = dir * (t_end - t);
        let step = h.min(remaining);
        let (y_new, accepted, next_h) = match cfg.method {
            Method::Rk4 => (rk4_step(sys, t, y, dir * step), true, h),
            Method::Rkf45 => {
                let (y5, err) = rkf45_step(sys, t, y, dir * step);
                let scale = |i: usize| cfg.abs_tol + cfg.rel_tol * y[i].abs().max(y5[i].abs());
                let norm = (err[0] / scale(0)).abs().max((err[1] / scale(1)).abs());
                if !norm.is_finite() {
                    (y5, false, step / 4.0)
                } else {
                    let factor = if norm == 0.0 { 5.0 } else { (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0) };
                    (y5, norm <= 1.0, (step * factor).min(cfg.h_max))
                }
            }
        };
        if !accepted {
            stats.rejected += 1;
            if next_h < cfg.h_min {
                termination = Termination::StepUnderflow;
                break;
            }
            h = next_h;
            continue;
        }
        let t_new = if step == remaining { t_end } else { t + dir * step };
        if sys.tripped(t_new, y_new) || sys.crossed(t, y, t_new, y_new) {
            termination = Termination::PoleProximity;
            break;
        }
        stats.accepted += 1;
        t = t_new;
        y = y_new;
        samples.push(State::new(t, y[0], y[1]));
        h = next_h.max(cfg.h_min);
    }
    Ok(Trajectory { samples, step_stats: stats, termination })
}

pub fn parse_params<'a, I: IntoIterator<Item = (&'a str, f64)>>(it: I) -> BTreeMap<String, f64> {
    it.into_iter().map(|(k, v)| (Var::new(k).name().to_string(), v)).collect()
}

/// Integrates the Hamilton equations of an arbitrary Hamiltonian.
pub fn integrate_hamiltonian(
    h: &RatFunc,
    guards: &GuardSet,
    params: &BTreeMap<String, f64>,
    init: State,
    t_end: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, NumericsError> {
    check_params_used(&[h], params)?;
    let (dl, dm) = hamilton_equations(h);
    run(&System::new([&dl, &dm], false, guards, params, cfg.pole_guard)?, init, t_end, cfg)
}

/// Integrates the Hamilton equations of a catalog type.
pub fn integrate(ptype: PainleveType, params: &BTreeMap<String, f64>, init: State, t_end: f64, cfg: &IntegratorConfig) -> Result<Trajectory, NumericsError> {
    let en = entry(ptype)?;
    integrate_hamiltonian(&en.hamiltonian, &GuardSet::for_entry(&en), params, init, t_end, cfg)
}

/// Integrates `lambda'' = F(t, lambda, lambda')` as a first-order pair.
pub fn integrate_second_order_rhs(
    f: &RatFunc,
    guards: &GuardSet,
    params: &BTreeMap<String, f64>,
    init: State,
    t_end: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, NumericsError> {
    check_params_used(&[f], params)?;
    let first = RatFunc::var(&dlambda());
    run(&System::new([&first, f], true, guards, params, cfg.pole_guard)?, init, t_end, cfg)
}

/// Second-order form of a catalog type, in the Hamiltonian parameters.
pub fn integrate_second_order(ptype: PainleveType, params: &BTreeMap<String, f64>, init: State, t_end: f64, cfg: &IntegratorConfig) -> Result<Trajectory, NumericsError> {
    let en = entry(ptype)?;
    integrate_second_order_rhs(&en.ode_in_hamiltonian_params(), &GuardSet::for_entry(&en), params, init, t_end, cfg)
}

/// Three-point derivatives on a non-uniform grid at interior sample `i`.
fn centered(samples: &[State], i: usize) -> (f64, f64) {
    let (a, b, c) = (samples[i - 1], samples[i], samples[i + 1]);
    let (h1, h2) = (b.t - a.t, c.t - b.t);
    let d1 = -h2 / (h1 * (h1 + h2)) * a.lambda + (h2 - h1) / (h1 * h2) * b.lambda + h1 / (h2 * (h1 + h2)) * c.lambda;
    let d2 = 2.0 * (a.lambda / (h1 * (h1 + h2)) - b.lambda / (h1 * h2) + c.lambda / (h2 * (h1 + h2)));
    (d1, d2)
}

/// Max over interior samples of `|lambda''_num - F(t, lambda, lambda'_num)|`.
pub fn residual_with(traj: &Trajectory, ode: &RatFunc, params: &BTreeMap<String, f64>) -> Result<f64, NumericsError> {
    let n = traj.samples.len();
    if n < 5 {
        return Err(NumericsError::TooFewSamples(n));
    }
    let (vars, mut x) = slots(params);
    let f = compile(ode, &vars)?;
    let mut worst: f64 = 0.0;
    for i in 1..n - 1 {
        let (d1, d2) = centered(&traj.samples, i);
        x[0] = traj.samples[i].t;
        x[1] = traj.samples[i].lambda;
        x[3] = d1;
        worst = worst.max((d2 - f.eval(&x)).abs());
    }
    Ok(worst)
}

pub fn residual_second_order(traj: &Trajectory, en: &CatalogEntry, params: &BTreeMap<String, f64>) -> Result<f64, NumericsError> {
    residual_with(traj, &en.ode_in_hamiltonian_params(), params)
}

/// Values of `h` along the samples.
pub fn series_of(traj: &Trajectory, h: &RatFunc, params: &BTreeMap<String, f64>) -> Result<Vec<f64>, NumericsError> {
    let (vars, mut x) = slots(params);
    let f = compile(h, &vars)?;
    Ok(traj
        .samples
        .iter()
        .map(|s| {
            x[0] = s.t;
            x[1] = s.lambda;
            x[2] = s.mu;
            f.eval(&x)
        })
        .collect())
}

pub fn hamiltonian_drift(traj: &Trajectory, en: &CatalogEntry, params: &BTreeMap<String, f64>) -> Result<Vec<f64>, NumericsError> {
    series_of(traj, &en.hamiltonian, params)
}

pub fn max_drift(series: &[f64]) -> f64 {
    series.iter().map(|v| (v - series[0]).abs()).fold(0.0, f64::max)
}

/// `|y_h - y_{h/2}| / |y_{h/2} - y_{h/4}|` at `t_end` for fixed-step RK4.
pub fn rk4_self_convergence(ptype: PainleveType, params: &BTreeMap<String, f64>, init: State, t_end: f64, h: f64) -> Result<f64, NumericsError> {
    let end = |h: f64| integrate(ptype, params, init, t_end, &IntegratorConfig::rk4(h)).map(|tr| tr.last());
    let (a, b, c) = (end(h)?, end(h / 2.0)?, end(h / 4.0)?);
    let d = |p: State, q: State| (p.lambda - q.lambda).abs().max((p.mu - q.mu).abs());
    Ok(d(a, b) / d(b, c))
}

#[cfg(test)]
mod tests;
