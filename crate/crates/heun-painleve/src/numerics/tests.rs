use super::*;
use crate::painleve_catalog::{solve_quadrature, PainleveType};
use crate::polyalg::text::parse_ratfunc;

fn none() -> BTreeMap<String, f64> {
    BTreeMap::new()
}

fn fine() -> IntegratorConfig {
    IntegratorConfig { h_max: 1e-3, ..Default::default() }
}

#[test]
fn first_painleve_residual_small() {
    let tr = integrate(PainleveType::I, &none(), State::new(0.0, 0.0, 0.0), 1.0, &fine()).unwrap();
    assert_eq!(tr.termination, Termination::Completed);
    let en = entry(PainleveType::I).unwrap();
    let r = residual_second_order(&tr, &en, &none()).unwrap();
    assert!(r <= 1e-5, "{r}");
    assert!(tr.samples.windows(2).all(|w| w[1].t > w[0].t));
}

#[test]
fn rk4_is_fourth_order() {
    let ratio = rk4_self_convergence(PainleveType::I, &none(), State::new(0.0, 0.0, 0.0), 1.0, 0.05).unwrap();
    assert!(ratio >= 8.0, "{ratio}");
}

#[test]
fn residual_is_second_order_in_grid() {
    let en = entry(PainleveType::I).unwrap();
    let r = |h: f64| {
        let tr = integrate(PainleveType::I, &none(), State::new(0.0, 0.0, 0.0), 1.0, &IntegratorConfig::rk4(h)).unwrap();
        residual_second_order(&tr, &en, &none()).unwrap()
    };
    let ratio = r(0.02) / r(0.01);
    assert!(ratio > 3.0 && ratio < 5.0, "{ratio}");
}

#[test]
fn hamilton_and_second_order_agree() {
    let p = parse_params([("alpha", 1.0)]);
    let init = State::new(0.0, 0.0, 0.0);
    let tr = integrate(PainleveType::II, &p, init, 1.0, &fine()).unwrap();
    // lambda' = mu - lambda^2 - t/2
    let d0 = init.mu - init.lambda.powi(2) - init.t / 2.0;
    let so = integrate_second_order(PainleveType::II, &p, State::new(0.0, 0.0, d0), 1.0, &fine()).unwrap();
    assert!((tr.last().lambda - so.last().lambda).abs() <= 1e-7);
    let en = entry(PainleveType::II).unwrap();
    let r = residual_second_order(&tr, &en, &p).unwrap();
    assert!(r <= 1e-5, "{r}");
}

#[test]
fn zero_solves_second_painleve_at_alpha_zero() {
    let p = parse_params([("alpha", 0.0)]);
    let so = integrate_second_order(PainleveType::II, &p, State::new(0.0, 0.0, 0.0), 1.0, &fine()).unwrap();
    assert!(so.samples.iter().all(|s| s.lambda.abs() < 1e-15));
}

#[test]
fn constant_trajectory_residual_is_the_rhs() {
    let samples = (0..6).map(|i| State::new(i as f64 * 0.1, 2.0, 0.0)).collect();
    let tr = Trajectory { samples, step_stats: StepStats::default(), termination: Termination::Completed };
    let en = entry(PainleveType::I).unwrap();
    // F = 6*4 + t, worst at t = 0.4
    let r = residual_second_order(&tr, &en, &none()).unwrap();
    assert!((r - 24.4).abs() < 1e-9, "{r}");
    let short = Trajectory { samples: tr.samples[..4].to_vec(), ..tr };
    assert_eq!(residual_second_order(&short, &en, &none()), Err(NumericsError::TooFewSamples(4)));
}

#[test]
fn sixth_runs_into_lambda_equals_t() {
    let p = parse_params([("k0", 0.5), ("k1", 0.5), ("kt", 2.0), ("kinf", 0.5)]);
    let tr = integrate(PainleveType::VI, &p, State::new(0.5, 0.6, 0.0), 0.9, &fine()).unwrap();
    assert_eq!(tr.termination, Termination::PoleProximity);
    assert!(tr.last().t < 0.6, "{:?}", tr.last());
    let en = entry(PainleveType::VI).unwrap();
    assert!(residual_second_order(&tr, &en, &p).unwrap().is_finite());
    let drift = hamiltonian_drift(&tr, &en, &p).unwrap();
    assert_eq!(drift.len(), tr.samples.len());
}

fn quadrature_h() -> RatFunc {
    parse_ratfunc("((lambda-1)^2*lambda*mu^2 - (k0*(lambda-1)^2 + (chi1-1)*lambda*(lambda-1))*mu + (lambda-1)/5)/t").unwrap()
}

#[test]
fn quadrature_energy_conserved() {
    let h = quadrature_h();
    let q = solve_quadrature(&h).unwrap();
    let p = parse_params([("k0", 0.3), ("chi1", 0.7)]);
    let guards = GuardSet { lambda_points: vec![RatFunc::zero(), RatFunc::one()], excluded_times: vec![RatFunc::var(&Var::t())] };
    let tr = integrate_hamiltonian(&h, &guards, &p, State::new(1.0, 0.4, 0.2), 2.0, &Default::default()).unwrap();
    assert_eq!(tr.termination, Termination::Completed);
    let e = series_of(&tr, &q.energy, &p).unwrap();
    assert!(max_drift(&e) <= 1e-8, "{}", max_drift(&e));
    // same orbit in s = c log t, where m = c/t
    let c = q.time_factor.eval_f64(&|_| 1.0);
    let s_end = c * 2f64.ln();
    let free = GuardSet { excluded_times: vec![], ..guards };
    let s = integrate_hamiltonian(&q.energy, &free, &p, State::new(0.0, 0.4, 0.2), s_end, &Default::default()).unwrap();
    assert!((s.last().lambda - tr.last().lambda).abs() < 1e-8);
    assert!((s.last().mu - tr.last().mu).abs() < 1e-8);
}

#[test]
fn parameter_errors() {
    let tr = integrate(PainleveType::II, &none(), State::new(0.0, 0.0, 0.0), 1.0, &fine());
    assert_eq!(tr, Err(NumericsError::MissingParameter("alpha".into())));
    let p = parse_params([("alpha", 0.0), ("zeta", 1.0)]);
    let tr = integrate(PainleveType::II, &p, State::new(0.0, 0.0, 0.0), 1.0, &fine());
    assert_eq!(tr, Err(NumericsError::UnknownParameter("zeta".into())));
    let bad = IntegratorConfig { h_min: 1.0, ..Default::default() };
    assert!(matches!(integrate(PainleveType::I, &none(), State::new(0.0, 0.0, 0.0), 1.0, &bad), Err(NumericsError::InvalidConfig(_))));
}

#[test]
fn exports() {
    let tr = integrate(PainleveType::I, &none(), State::new(0.0, 0.0, 0.0), 0.01, &IntegratorConfig::rk4(0.005)).unwrap();
    let csv = tr.to_csv().unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.starts_with("t,lambda,mu"));
    let js = tr.to_json(&IntegratorConfig::rk4(0.005), serde_json::json!({"type": "I"}));
    assert_eq!(js["schema_version"], 1);
    assert_eq!(js["config"]["method"], "rk4");
    assert_eq!(js["samples"].as_array().unwrap().len(), 3);
}

