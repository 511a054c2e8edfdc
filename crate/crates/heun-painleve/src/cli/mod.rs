//! Command-line front end. Every command prints one JSON document, except
//! `integrate --format csv`.

pub mod spec;

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::deformation::{deform, deform_symbolic, verify_apparent};
use crate::heun_class::{classify, classify_principal, to_normal_form};
use crate::isomonodromy::{conditions, hamiltonian, select_subcase, subcase_with_tag, verify_full_compatibility, SubcaseTag, TimeFamily};
use crate::numerics::{self, IntegratorConfig, Method, State, SCHEMA_VERSION};
use crate::painleve_catalog::{canonical_equivalences, catalog, check_entry, derive_second_order, entry, reductions, scaling_laws, PainleveType};
use crate::polyalg::text::parse_ratfunc;
use crate::polyalg::{Genericity, MPoly, Point, RatFunc, Var};
use crate::sing_analysis::{indices, rank, thome};

pub use spec::{parse_operator, print_operator, OperatorSpec, ParsedOperator, SpecError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BAD_SPEC: i32 = 3;
pub const EXIT_COMPUTATION: i32 = 4;

/// Series truncation order, `HEUN_SERIES_ORDER` or 20.
pub fn series_order() -> usize {
    std::env::var("HEUN_SERIES_ORDER").ok().and_then(|s| s.trim().parse().ok()).filter(|n| *n > 0).unwrap_or(20)
}

#[derive(Parser, Debug)]
#[command(name = "heun-painleve", version, about = "Heun class operators, isomonodromic deformations and Painleve Hamiltonians")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MethodArg {
    Rk4,
    Rkf45,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Type symbol, name and singularity reports.
    Classify { spec: String },
    /// Normal form from the classification table, with the transformations used.
    Normalize { spec: String },
    /// Index pair, rank and Thome heads at one point.
    Indices {
        spec: String,
        /// A rational expression, or `inf`.
        #[arg(long)]
        at: String,
    },
    /// Add an apparent singularity at lambda and check it.
    Deform {
        spec: String,
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        mu: Option<String>,
    },
    /// Subcase, compatibility functions, Hamiltonian and second-order equation.
    Derive {
        spec: String,
        /// One of A1, Ap, Aq, Bp, Bq; by default the first that applies.
        #[arg(long)]
        subcase: Option<String>,
    },
    /// Catalog entries.
    Catalog {
        #[arg(long = "type")]
        ptype: Option<String>,
    },
    /// Symbolic checks of every catalog entry.
    VerifyCatalog,
    /// Integrate the Hamilton equations of a catalog type.
    Integrate {
        #[arg(long = "type")]
        ptype: String,
        /// `name=value` pairs separated by commas.
        #[arg(long, default_value = "")]
        params: String,
        /// `t0,lambda0,mu0`; with --second-order the last entry is dlambda/dt.
        #[arg(long, allow_hyphen_values = true)]
        init: String,
        #[arg(long, allow_hyphen_values = true)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Rkf45)]
        method: MethodArg,
        /// Fixed step for rk4, largest step for rkf45.
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        second_order: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn json(v: Value, ok: bool) -> Outcome {
        Outcome {
            code: if ok { EXIT_OK } else { EXIT_VERIFICATION_FAILED },
            stdout: serde_json::to_string_pretty(&v).expect("json") + "\n",
            stderr: String::new(),
        }
    }

    fn error(code: i32, kind: &str, msg: String) -> Outcome {
        let v = json!({"schema_version": SCHEMA_VERSION, "error": kind, "message": msg});
        Outcome { code, stdout: String::new(), stderr: serde_json::to_string_pretty(&v).expect("json") + "\n" }
    }
}

fn read_spec(arg: &str) -> Result<OperatorSpec, Outcome> {
    let text = if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Outcome::error(EXIT_USAGE, "io", e.to_string()))?;
        s
    } else if std::path::Path::new(arg).is_file() {
        std::fs::read_to_string(arg).map_err(|e| Outcome::error(EXIT_USAGE, "io", e.to_string()))?
    } else {
        arg.to_string()
    };
    parse_operator(&text).map_err(|e| {
        let kind = match e {
            SpecError::Syntax(_) => "SyntaxError",
            SpecError::UndeclaredParameter { .. } => "UndeclaredParameter",
            SpecError::SigmaNotFactored { .. } => "SigmaNotFactored",
            SpecError::Invalid(_) => "InvalidOperator",
        };
        let mut o = Outcome::error(EXIT_BAD_SPEC, kind, e.to_string());
        if let SpecError::Syntax(p) = &e {
            let v = json!({"schema_version": SCHEMA_VERSION, "error": kind, "message": p.message, "line": p.line, "col": p.col, "expected": p.expected});
            o.stderr = serde_json::to_string_pretty(&v).expect("json") + "\n";
        }
        o
    })
}

fn compute<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, Outcome> {
    r.map_err(|e| Outcome::error(EXIT_COMPUTATION, "ComputationError", e.to_string()))
}

fn expr(s: &str) -> Result<RatFunc, Outcome> {
    parse_ratfunc(s).map_err(|e| Outcome::error(EXIT_USAGE, "SyntaxError", e.to_string()))
}

fn header(command: &str) -> Value {
    json!({"schema_version": SCHEMA_VERSION, "command": command})
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Some(x), Value::Object(y)) = (a.as_object_mut(), b) {
        x.extend(y);
    }
    a
}

/// `h` without its terms free of lambda and mu, when that split is unique.
pub fn drop_free_terms(h: &RatFunc) -> RatFunc {
    let (l, m) = (Var::lambda(), Var::mu());
    if h.den().depends_on(&l) || h.den().depends_on(&m) {
        return h.clone();
    }
    let kept = MPoly::from_terms(h.num().terms().filter(|(mono, _)| mono.exp(&l) > 0 || mono.exp(&m) > 0).map(|(a, b)| (a.clone(), b.clone())));
    RatFunc::new(kept, h.den().clone()).unwrap_or_else(|_| h.clone())
}

fn cmd_classify(spec: &OperatorSpec) -> Result<Outcome, Outcome> {
    let c = compute(match &spec.operator {
        ParsedOperator::Heun(op) => classify(op),
        ParsedOperator::Principal(a) => classify_principal(a, Genericity::Generic),
    })?;
    Ok(Outcome::json(merge(header("classify"), c.to_json()), true))
}

fn cmd_normalize(spec: &OperatorSpec) -> Result<Outcome, Outcome> {
    let nf = compute(to_normal_form(compute(spec.heun())?))?;
    Ok(Outcome::json(merge(header("normalize"), nf.to_json()), true))
}

fn cmd_indices(spec: &OperatorSpec, at: &str) -> Result<Outcome, Outcome> {
    let a = spec.principal();
    let site = if at.trim() == "inf" || at.trim() == "infinity" { Point::Infinity } else { Point::at(expr(at)?) };
    let mode = Genericity::Generic;
    let rk = compute(rank(&a, &site, mode))?;
    let (r1, r2) = compute(indices(&a, &site, mode))?;
    let heads = thome(&a, &site, series_order(), mode).ok().map(|s| s.iter().map(|x| x.to_json()).collect::<Vec<_>>());
    let v = json!({
        "at": site.to_string(),
        "rank": rk.to_string(),
        "indices": [r1.to_string(), r2.to_string()],
        "thome": heads,
        "series_order": series_order(),
    });
    Ok(Outcome::json(merge(header("indices"), v), true))
}

fn cmd_deform(spec: &OperatorSpec, lambda: Option<&str>, mu: Option<&str>) -> Result<Outcome, Outcome> {
    let op = compute(spec.heun())?;
    let d = match (lambda, mu) {
        (None, None) => compute(deform_symbolic(op))?,
        (Some(l), Some(m)) => compute(deform(op, &expr(l)?, &expr(m)?))?,
        _ => return Err(Outcome::error(EXIT_USAGE, "Usage", "give both --lambda and --mu, or neither".into())),
    };
    let rep = compute(verify_apparent(&d, series_order()))?;
    let v = json!({
        "deformed": d.to_json(),
        "apparency": {
            "indices": [rep.indices.0.to_string(), rep.indices.1.to_string()],
            "v1_over_v0": rep.v1_over_v0.to_string(),
            "obstruction_row": rep.second_row.to_string(),
            "v_series": rep.v_series.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "apparent": rep.apparent,
        },
    });
    Ok(Outcome::json(merge(header("deform"), v), rep.apparent))
}

fn cmd_derive(spec: &OperatorSpec, tag: Option<&str>) -> Result<Outcome, Outcome> {
    let f = TimeFamily::new(compute(spec.heun())?.clone());
    let sc = match tag {
        Some(t) => {
            let tag = SubcaseTag::parse(t).ok_or_else(|| Outcome::error(EXIT_USAGE, "Usage", format!("unknown subcase {t}")))?;
            compute(subcase_with_tag(&f, tag))?
        }
        None => compute(select_subcase(&f))?.into_iter().next().ok_or_else(|| Outcome::error(EXIT_COMPUTATION, "NoSubcaseApplies", "no subcase applies".into()))?,
    };
    let conds = compute(conditions(&f, &sc))?;
    let data = compute(hamiltonian(&f, &sc))?;
    let res = compute(verify_full_compatibility(&f, &data))?;
    let ode = compute(derive_second_order(&data.h))?;
    let ok = conds.all_zero() && res.both_zero();
    let v = json!({
        "isomonodromy": data.to_json(),
        "H_reduced": drop_free_terms(&data.h).to_string(),
        "second_order": {"A": ode.a.to_string(), "B": ode.b.to_string(), "C": ode.c.to_string(), "rhs": ode.rhs.to_string()},
        "conditions": conds.general.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "specialized_conditions": conds.specialized.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "compatibility_residuals": [res.compa2.to_string(), res.compa1.to_string()],
        "verified": ok,
    });
    Ok(Outcome::json(merge(header("derive"), v), ok))
}

fn parse_type(s: &str) -> Result<PainleveType, Outcome> {
    PainleveType::parse(s).map_err(|e| Outcome::error(EXIT_USAGE, "UnknownType", e.to_string()))
}

fn cmd_catalog(ptype: Option<&str>) -> Result<Outcome, Outcome> {
    let entries = match ptype {
        Some(t) => vec![compute(entry(parse_type(t)?))?],
        None => compute(catalog())?,
    };
    let v = json!({"entries": entries.iter().map(|e| e.to_json()).collect::<Vec<_>>()});
    Ok(Outcome::json(merge(header("catalog"), v), true))
}

fn cmd_verify_catalog() -> Result<Outcome, Outcome> {
    let mut rows = Vec::new();
    let mut passed = 0;
    let all = compute(catalog())?;
    for en in &all {
        let c = compute(check_entry(en))?;
        passed += c.all() as usize;
        rows.push(json!({
            "type": en.ptype.name(),
            "compatibility": c.compatibility,
            "hamiltonian": c.hamiltonian_matches,
            "a_b": c.a_matches,
            "equation": c.ode_matches,
            "heun_symbol": c.heun_symbol_matches,
            "pass": c.all(),
        }));
    }
    let scaling: Vec<Value> = scaling_laws().iter().map(|s| json!({"supertype": s.supertype.name(), "law": s.law, "as_printed": s.as_printed, "holds": s.holds})).collect();
    let reds: Vec<Value> = reductions().iter().map(|r| json!({"reduction": r.name, "level": format!("{:?}", r.level), "claimed": r.claimed, "holds": r.holds})).collect();
    let eqs: Vec<Value> = compute(canonical_equivalences())?
        .iter()
        .map(|q| json!({"map": q.name, "as_printed": q.as_printed, "jacobian": q.jacobian.to_string(), "free_term": q.free_term.to_string(), "holds": q.holds()}))
        .collect();
    let ok = passed == all.len();
    let v = json!({
        "passed": passed,
        "total": all.len(),
        "entries": rows,
        "scaling_laws": scaling,
        "reductions": reds,
        "equivalences": eqs,
    });
    Ok(Outcome::json(merge(header("verify-catalog"), v), ok))
}

fn parse_triple(s: &str) -> Result<State, Outcome> {
    let xs: Vec<f64> = s.split(',').map(|x| x.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|e| Outcome::error(EXIT_USAGE, "Usage", format!("--init: {e}")))?;
    match xs.as_slice() {
        [t, l, m] => Ok(State::new(*t, *l, *m)),
        _ => Err(Outcome::error(EXIT_USAGE, "Usage", "--init needs t0,lambda0,mu0".into())),
    }
}

fn parse_param_list(s: &str) -> Result<std::collections::BTreeMap<String, f64>, Outcome> {
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| Outcome::error(EXIT_USAGE, "Usage", format!("--params: expected name=value, got {item}")))?;
        let v: f64 = v.trim().parse().map_err(|e| Outcome::error(EXIT_USAGE, "Usage", format!("--params {k}: {e}")))?;
        out.push((k.trim().to_string(), v));
    }
    Ok(numerics::parse_params(out.iter().map(|(k, v)| (k.as_str(), *v))))
}

#[allow(clippy::too_many_arguments)]
fn cmd_integrate(ptype: &str, params: &str, init: &str, t_end: f64, tol: f64, method: MethodArg, h: Option<f64>, second_order: bool, format: Format, out: Option<&PathBuf>) -> Result<Outcome, Outcome> {
    let ty = parse_type(ptype)?;
    let p = parse_param_list(params)?;
    let init = parse_triple(init)?;
    let cfg = match method {
        MethodArg::Rk4 => IntegratorConfig::rk4(h.unwrap_or(1e-3)),
        MethodArg::Rkf45 => {
            let h_max = h.unwrap_or(1e-2);
            IntegratorConfig { method: Method::Rkf45, abs_tol: tol, rel_tol: tol, h_init: h_max.min(1e-3), h_max, ..Default::default() }
        }
    };
    let tr = compute(if second_order { numerics::integrate_second_order(ty, &p, init, t_end, &cfg) } else { numerics::integrate(ty, &p, init, t_end, &cfg) })?;
    let en = compute(entry(ty))?;
    let residual = numerics::residual_second_order(&tr, &en, &p).ok();
    let summary = json!({
        "type": ty.name(),
        "params": p,
        "second_order": second_order,
        "residual_second_order": residual,
        "samples": tr.samples.len(),
        "termination": tr.termination,
    });
    let body = match format {
        Format::Csv => compute(tr.to_csv())?,
        Format::Json => serde_json::to_string_pretty(&merge(header("integrate"), tr.to_json(&cfg, summary.clone()))).expect("json") + "\n",
    };
    let mut o = Outcome { code: EXIT_OK, stdout: String::new(), stderr: String::new() };
    match out {
        Some(path) => {
            std::fs::write(path, body).map_err(|e| Outcome::error(EXIT_USAGE, "io", e.to_string()))?;
            o.stdout = serde_json::to_string_pretty(&merge(header("integrate"), json!({"written": path, "summary": summary}))).expect("json") + "\n";
        }
        None => {
            o.stdout = body;
            if matches!(format, Format::Csv) {
                o.stderr = serde_json::to_string(&summary).expect("json") + "\n";
            }
        }
    }
    Ok(o)
}

pub fn execute(cli: &Cli) -> Outcome {
    let r = match &cli.command {
        Command::Classify { spec } => read_spec(spec).and_then(|s| cmd_classify(&s)),
        Command::Normalize { spec } => read_spec(spec).and_then(|s| cmd_normalize(&s)),
        Command::Indices { spec, at } => read_spec(spec).and_then(|s| cmd_indices(&s, at)),
        Command::Deform { spec, lambda, mu } => read_spec(spec).and_then(|s| cmd_deform(&s, lambda.as_deref(), mu.as_deref())),
        Command::Derive { spec, subcase } => read_spec(spec).and_then(|s| cmd_derive(&s, subcase.as_deref())),
        Command::Catalog { ptype } => cmd_catalog(ptype.as_deref()),
        Command::VerifyCatalog => cmd_verify_catalog(),
        Command::Integrate { ptype, params, init, t_end, tol, method, h, second_order, format, out } => {
            cmd_integrate(ptype, params, init, *t_end, *tol, *method, *h, *second_order, *format, out.as_ref())
        }
    };
    r.unwrap_or_else(|e| e)
}

/// Parses arguments (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            }
        }
    }
}

#[cfg(test)]
mod tests;
