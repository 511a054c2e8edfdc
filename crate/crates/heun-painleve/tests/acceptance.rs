//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria 6 and 7 contain statements that do not hold as printed. Their
//! lines report FAIL; the corrected statements are checked on an extra line
//! each. The process exits nonzero when any other criterion fails or a
//! corrected statement stops holding.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use common::*;
use heun_painleve::cli::spec::{parse_operator, print_operator};
use heun_painleve::deformation::{deform_symbolic, verify_apparent, verify_apparent_numeric, DeformError};
use heun_painleve::heun_class::{classify, riemann_operators, swap_infinity, to_normal_form, HeunOperator, TableRow};
use heun_painleve::isomonodromy::{conditions, verify_full_compatibility};
use heun_painleve::numerics::{
    integrate, integrate_hamiltonian, integrate_second_order, max_drift, parse_params, residual_second_order, rk4_self_convergence, series_of,
    GuardSet, IntegratorConfig, State, Termination,
};
use heun_painleve::painleve_catalog::{
    canonical_equivalences, catalog, derive_second_order, entry, scaling_laws, solve_quadrature, CatalogEntry, PainleveType,
};
use heun_painleve::polyalg::text::parse_ratfunc;
use heun_painleve::polyalg::identities::appendix_identities_check;
use heun_painleve::polyalg::{Genericity, Rat, RatFunc, Var};
use heun_painleve::sing_analysis::{analyze, fuchs_relation_check, index_sum_prediction, QExt, SingError};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

const G: Genericity = Genericity::Generic;

struct Line {
    id: &'static str,
    pass: bool,
    /// Failure is a known conflict with the source statement.
    known: bool,
    detail: String,
    elapsed: Duration,
}

fn sample<S: Strategy>(runner: &mut TestRunner, s: &S) -> S::Value {
    loop {
        if let Ok(t) = s.new_tree(runner) {
            return t.current();
        }
    }
}

fn run(id: &'static str, known: bool, f: impl FnOnce() -> (bool, String)) -> Line {
    let start = Instant::now();
    let (pass, detail) = f();
    Line { id, pass, known, detail, elapsed: start.elapsed() }
}

fn free_vars(op: &HeunOperator) -> Vec<Var> {
    let mut vs = op.lead.vars();
    for (r, _) in &op.roots {
        vs.extend(r.vars());
    }
    vs.extend(op.tau.vars());
    vs.extend(op.eta.vars());
    vs.remove(&Var::z());
    vs.into_iter().collect()
}

fn criterion_1(cat: &[CatalogEntry]) -> (bool, String) {
    let start = Instant::now();
    let mut bad = Vec::new();
    for en in cat {
        let f = &en.family;
        let ok = conditions(f, &en.data.subcase).map(|c| c.all_zero()).unwrap_or(false)
            && verify_full_compatibility(f, &en.data).map(|r| r.both_zero()).unwrap_or(false);
        if !ok {
            bad.push(en.ptype.name());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let n = cat.len();
    (bad.is_empty() && secs < 60.0, format!("{}/{n} families, {secs:.1} s; failing: {bad:?}", n - bad.len()))
}

fn criterion_2(cat: &[CatalogEntry]) -> (bool, String) {
    let mut bad = Vec::new();
    for en in cat {
        match derive_second_order(&en.hamiltonian) {
            Ok(so) if so.rhs == en.ode_in_hamiltonian_params() => {}
            _ => bad.push(en.ptype.name()),
        }
    }
    (bad.is_empty(), format!("{}/{} equations; failing: {bad:?}", cat.len() - bad.len(), cat.len()))
}

fn criterion_3(runner: &mut TestRunner) -> (bool, String) {
    let mut bad = Vec::new();
    let mut n_rows = 0;
    for row in TableRow::ALL {
        for _ in 0..10 {
            let cs = sample(runner, &proptest::collection::vec(nonzero_rat(), 6));
            let third = sample(runner, &third_root());
            let op = instance(row, &cs, &third);
            n_rows += 1;
            if classify(&op).map(|c| c.symbol != row.symbol()).unwrap_or(true) {
                bad.push(row.label().to_string());
            }
        }
    }
    let mut n_riemann = 0;
    for (row, symbol, op) in riemann_operators() {
        n_riemann += 1;
        let ok = classify(&op).map(|c| c.symbol.to_string() == symbol && c.riemann == Some(row)).unwrap_or(false);
        if !ok {
            bad.push(row.name().to_string());
        }
    }
    (bad.is_empty(), format!("{n_rows} table instances, {n_riemann} Riemann operators; failing: {bad:?}"))
}

/// Index sums agree with the prediction at every analyzed point.
fn index_sums_hold(op: &HeunOperator) -> Result<usize, String> {
    let a = op.principal();
    let reps = analyze(&a, G).map_err(|e| e.to_string())?;
    for r in &reps {
        let (Some(rk), Some((r1, r2))) = (r.absolute_rank, r.indices.as_ref()) else { return Err(format!("no data at {}", r.location)) };
        let pred = index_sum_prediction(&a, &r.location, rk).map_err(|e| e.to_string())?;
        if &(r1 + r2) != &QExt::rational(pred) {
            return Err(format!("index sum at {}", r.location));
        }
    }
    Ok(reps.len())
}

fn criterion_4(cat: &[CatalogEntry], runner: &mut TestRunner) -> (bool, String) {
    let mut bad = Vec::new();
    let mut points = 0;
    for en in cat {
        let op = &en.family.op;
        if !fuchs_relation_check(&op.principal(), G).map(|f| f.holds).unwrap_or(false) {
            bad.push(format!("Fuchs relation on {}", en.ptype.name()));
        }
        match index_sums_hold(op) {
            Ok(n) => points += n,
            Err(e) => bad.push(format!("{}: {e}", en.ptype.name())),
        }
    }
    let (mut random, mut skipped) = (0, 0);
    while random < 100 {
        let op = sample(runner, &grounded_op());
        match fuchs_relation_check(&op.principal(), G) {
            Ok(f) if f.holds => {}
            Ok(_) => bad.push(format!("Fuchs relation on {op:?}")),
            Err(SingError::IrrationalBranch(_)) => {
                skipped += 1;
                continue;
            }
            Err(e) => bad.push(e.to_string()),
        }
        match index_sums_hold(&op) {
            Ok(n) => points += n,
            Err(e) => bad.push(format!("{op:?}: {e}")),
        }
        random += 1;
    }
    let mut identities = 0;
    while identities < 100 {
        let xi = sample(runner, &z_poly(3));
        if xi.is_zero() {
            continue;
        }
        let s = sample(runner, &small_rat());
        if !appendix_identities_check(&xi, &s).unwrap_or(false) {
            bad.push(format!("identities for {xi}, s = {s}"));
        }
        identities += 1;
    }
    (
        bad.is_empty(),
        format!(
            "{} catalog + {random} random operators ({skipped} irrational skipped), {points} points, {identities} identity cases; failing: {bad:?}",
            cat.len()
        ),
    )
}

fn criterion_5(cat: &[CatalogEntry], runner: &mut TestRunner) -> (bool, String) {
    let mut bad = Vec::new();
    let zero_two = |a: &Rat, b: &Rat| {
        let mut v = [a.to_string(), b.to_string()];
        v.sort();
        v == ["0", "2"]
    };
    for en in cat {
        let ok = deform_symbolic(&en.family.op).and_then(|d| verify_apparent(&d, 6)).map(|r| {
            let idx = (r.indices.0.constant_value(), r.indices.1.constant_value());
            let idx_ok = matches!(idx, (Some(a), Some(b)) if zero_two(&a, &b));
            r.apparent && idx_ok && r.second_row.is_zero() && r.v1_over_v0 == RatFunc::var(&Var::mu())
        });
        if !ok.unwrap_or(false) {
            bad.push(en.ptype.name().to_string());
        }
    }
    let mut numeric = 0;
    let mut worst: f64 = 0.0;
    while numeric < 50 {
        let en = &cat[sample(runner, &(0..cat.len()))];
        let vals = sample(runner, &proptest::collection::vec(nonzero_rat(), 8));
        let op = &en.family.op;
        let mut env: BTreeMap<Var, Rat> = free_vars(op).into_iter().zip(vals.iter().cycle().cloned()).collect();
        env.insert(Var::lambda(), sample(runner, &small_rat()));
        env.insert(Var::mu(), sample(runner, &small_rat()));
        let d = deform_symbolic(op).unwrap();
        let r = match verify_apparent_numeric(&d, &|v: &Var| env.get(v).cloned().unwrap_or_else(|| Rat::from_integer(0.into()))) {
            Ok(r) => r,
            Err(DeformError::LambdaAtSigmaRoot(_) | DeformError::Heun(_)) => continue,
            Err(e) => {
                bad.push(e.to_string());
                numeric += 1;
                continue;
            }
        };
        worst = worst.max(r.first_row_residual).max(r.second_row_residual);
        let idx = (r.indices.0.as_rational().and_then(|x| x.constant_value()), r.indices.1.as_rational().and_then(|x| x.constant_value()));
        if !matches!(idx, (Some(a), Some(b)) if zero_two(&a, &b)) || r.first_row_residual >= 1e-12 || r.second_row_residual >= 1e-12 {
            bad.push(format!("{} at {env:?}", en.ptype.name()));
        }
        numeric += 1;
    }
    (bad.is_empty(), format!("{} symbolic families, {numeric} numeric cases, worst residual {worst:.1e}; failing: {bad:?}", cat.len()))
}

fn criterion_6() -> (bool, String, bool, String) {
    let checks = canonical_equivalences().expect("equivalences");
    let describe = |c: &heun_painleve::painleve_catalog::EquivalenceCheck| {
        format!("{} [jacobian {}, {}]", c.name, c.jacobian, if c.matches { "matches" } else { "no match" })
    };
    let printed: Vec<_> = checks.iter().filter(|c| c.as_printed).collect();
    let corrected: Vec<_> = checks.iter().filter(|c| !c.as_printed).collect();
    let failing: Vec<String> = printed.iter().filter(|c| !c.holds()).map(|c| describe(c)).collect();
    let fixed_ok = corrected.iter().all(|c| c.holds());
    (
        failing.is_empty(),
        format!("{}/{} printed equivalences hold; failing: {failing:?}", printed.len() - failing.len(), printed.len()),
        fixed_ok,
        corrected.iter().map(|c| describe(c)).collect::<Vec<_>>().join("; "),
    )
}

fn criterion_7() -> (bool, String, bool, String) {
    let laws = scaling_laws();
    let printed: Vec<_> = laws.iter().filter(|c| c.as_printed).collect();
    let failing: Vec<String> = printed.iter().filter(|c| !c.holds).map(|c| format!("{}: {}", c.supertype.name(), c.law)).collect();
    let corrected: Vec<_> = laws.iter().filter(|c| !c.as_printed).collect();
    (
        failing.is_empty(),
        format!("{}/{} printed laws hold; failing: {failing:?}", printed.len() - failing.len(), printed.len()),
        corrected.iter().all(|c| c.holds),
        corrected.iter().map(|c| format!("{}: {} holds = {}", c.supertype.name(), c.law, c.holds)).collect::<Vec<_>>().join("; "),
    )
}

fn timed(limit: f64, f: impl FnOnce() -> Result<(bool, String), String>) -> (bool, String) {
    let start = Instant::now();
    let r = f();
    let secs = start.elapsed().as_secs_f64();
    match r {
        Ok((ok, d)) => (ok && secs < limit, format!("{d}, {secs:.2} s")),
        Err(e) => (false, e),
    }
}

fn criterion_8() -> (bool, String) {
    let none = BTreeMap::new();
    let alpha = parse_params([("alpha", 1.0)]);
    let origin = State::new(0.0, 0.0, 0.0);
    let fine = IntegratorConfig { h_max: 1e-3, ..Default::default() };
    let err = |e: &dyn std::fmt::Display| e.to_string();

    let a = timed(5.0, || {
        let ratio = rk4_self_convergence(PainleveType::I, &none, origin, 1.0, 0.05).map_err(|e| err(&e))?;
        let order = ratio.log2();
        Ok((order >= 3.0, format!("(a) order {order:.2}")))
    });
    let b = timed(5.0, || {
        let mut worst: f64 = 0.0;
        for (t, p) in [(PainleveType::I, &none), (PainleveType::II, &alpha)] {
            let tr = integrate(t, p, origin, 1.0, &fine).map_err(|e| err(&e))?;
            if tr.termination != Termination::Completed {
                return Err(format!("(b) {} stopped early", t.name()));
            }
            let en = entry(t).map_err(|e| err(&e))?;
            worst = worst.max(residual_second_order(&tr, &en, p).map_err(|e| err(&e))?);
        }
        Ok((worst <= 1e-5, format!("(b) residual {worst:.1e}")))
    });
    let c = timed(5.0, || {
        let tr = integrate(PainleveType::II, &alpha, origin, 1.0, &fine).map_err(|e| err(&e))?;
        // lambda' = mu - lambda^2 - t/2
        let d0 = origin.mu - origin.lambda.powi(2) - origin.t / 2.0;
        let so = integrate_second_order(PainleveType::II, &alpha, State::new(0.0, 0.0, d0), 1.0, &fine).map_err(|e| err(&e))?;
        let gap = (tr.last().lambda - so.last().lambda).abs();
        Ok((gap <= 1e-7, format!("(c) gap {gap:.1e}")))
    });
    let d = timed(5.0, || {
        let h = parse_ratfunc("((lambda-1)^2*lambda*mu^2 - (k0*(lambda-1)^2 + (chi1-1)*lambda*(lambda-1))*mu + (lambda-1)/5)/t").map_err(|e| err(&e))?;
        let q = solve_quadrature(&h).map_err(|e| err(&e))?;
        let p = parse_params([("k0", 0.3), ("chi1", 0.7)]);
        let guards = GuardSet { lambda_points: vec![RatFunc::zero(), RatFunc::one()], excluded_times: vec![RatFunc::var(&Var::t())] };
        let tr = integrate_hamiltonian(&h, &guards, &p, State::new(1.0, 0.4, 0.2), 2.0, &Default::default()).map_err(|e| err(&e))?;
        let drift = max_drift(&series_of(&tr, &q.energy, &p).map_err(|e| err(&e))?);
        Ok((tr.termination == Termination::Completed && drift <= 1e-8, format!("(d) drift {drift:.1e}")))
    });
    let parts = [a, b, c, d];
    (parts.iter().all(|p| p.0), parts.iter().map(|p| p.1.clone()).collect::<Vec<_>>().join("; "))
}

fn criterion_9(cat: &[CatalogEntry], runner: &mut TestRunner) -> (bool, String) {
    let mut bad = Vec::new();
    let mut swaps = 0;
    let mut ops: Vec<HeunOperator> = cat.iter().map(|en| en.family.op.clone()).filter(|op| op.has_root_at_origin()).collect();
    for _ in 0..50 {
        ops.push(sample(runner, &origin_op()));
    }
    for op in &ops {
        let back = swap_infinity(op).and_then(|sw| swap_infinity(&sw));
        match back {
            Ok(b) if b.principal().p == op.principal().p && b.principal().q == op.principal().q => {}
            _ => bad.push(format!("swap twice: {op:?}")),
        }
        swaps += 1;
    }

    let mut texts = 0;
    let mut check_text = |op: &HeunOperator, time: Option<&str>, bad: &mut Vec<String>| {
        let text = print_operator(op, time);
        let ok = parse_operator(&text).ok().is_some_and(|b| b.heun().ok() == Some(op) && print_operator(b.heun().unwrap(), b.time.as_deref()) == text);
        if !ok {
            bad.push(format!("text: {text}"));
        }
        texts += 1;
    };
    for en in cat {
        check_text(&en.family.op, Some("t"), &mut bad);
    }
    for _ in 0..50 {
        check_text(&sample(runner, &grounded_op()), None, &mut bad);
    }

    let mut replays = 0;
    for _ in 0..50 {
        let op = sample(runner, &grounded_op());
        match to_normal_form(&op) {
            Ok(nf) => {
                if nf.trace.replay(&op.principal()).ok() != Some(nf.operator.principal()) {
                    bad.push(format!("replay: {op:?}"));
                }
                replays += 1;
            }
            Err(e) if skip_heun(&e) => {}
            Err(e) => bad.push(e.to_string()),
        }
    }
    (bad.is_empty(), format!("{swaps} double swaps, {texts} texts, {replays} replays; failing: {bad:?}"))
}

fn main() {
    let mut runner = TestRunner::deterministic();
    let start = Instant::now();
    let cat = catalog().expect("catalog");
    let build = start.elapsed();
    println!("catalog built in {:.1} s", build.as_secs_f64());

    let mut lines = vec![
        run("1", false, || criterion_1(&cat)),
        run("2", false, || criterion_2(&cat)),
        run("3", false, || criterion_3(&mut runner)),
        run("4", false, || criterion_4(&cat, &mut runner)),
        run("5", false, || criterion_5(&cat, &mut runner)),
    ];
    let (ok6, d6, fixed6, c6) = criterion_6();
    lines.push(Line { id: "6", pass: ok6, known: true, detail: d6, elapsed: Duration::ZERO });
    lines.push(Line { id: "6, corrected", pass: fixed6, known: false, detail: c6, elapsed: Duration::ZERO });
    let (ok7, d7, fixed7, c7) = criterion_7();
    lines.push(Line { id: "7", pass: ok7, known: true, detail: d7, elapsed: Duration::ZERO });
    lines.push(Line { id: "7, corrected", pass: fixed7, known: false, detail: c7, elapsed: Duration::ZERO });
    lines.push(run("8", false, criterion_8));
    lines.push(run("9", false, || criterion_9(&cat, &mut runner)));

    let mut unexpected = false;
    for l in &lines {
        let status = if l.pass { "PASS" } else { "FAIL" };
        let note = if !l.pass && l.known { " (known conflict)" } else { "" };
        println!("criterion {}: {status}{note} [{:.1} s] {}", l.id, l.elapsed.as_secs_f64(), l.detail);
        unexpected |= !l.pass && !l.known;
    }
    if unexpected {
        std::process::exit(1);
    }
}
