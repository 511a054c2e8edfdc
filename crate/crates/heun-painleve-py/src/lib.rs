//! Python bindings. Every function runs the matching CLI command and returns
//! its JSON report as Python objects.

use heun_painleve::cli::{self, Outcome};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn invoke(args: Vec<String>) -> Outcome {
    cli::run(std::iter::once("heun-painleve".to_string()).chain(args))
}

fn report(py: Python<'_>, o: Outcome, allow_failed: bool) -> PyResult<Py<PyAny>> {
    let ok = o.code == cli::EXIT_OK || (allow_failed && o.code == cli::EXIT_VERIFICATION_FAILED);
    if !ok {
        let msg = o.stderr.trim().to_string();
        return Err(match o.code {
            cli::EXIT_USAGE | cli::EXIT_BAD_SPEC => PyValueError::new_err(msg),
            _ => PyRuntimeError::new_err(msg),
        });
    }
    Ok(py.import("json")?.call_method1("loads", (o.stdout,))?.unbind())
}

fn opt(args: &mut Vec<String>, flag: &str, v: Option<String>) {
    if let Some(v) = v {
        args.push(flag.to_string());
        args.push(v);
    }
}

/// Runs the CLI with `args` (without the program name); returns
/// `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run(args: Vec<String>) -> (i32, String, String) {
    let o = invoke(args);
    (o.code, o.stdout, o.stderr)
}

#[pyfunction]
fn classify(py: Python<'_>, spec: String) -> PyResult<Py<PyAny>> {
    report(py, invoke(vec!["classify".into(), spec]), false)
}

#[pyfunction]
fn normalize(py: Python<'_>, spec: String) -> PyResult<Py<PyAny>> {
    report(py, invoke(vec!["normalize".into(), spec]), false)
}

#[pyfunction]
fn indices(py: Python<'_>, spec: String, at: String) -> PyResult<Py<PyAny>> {
    report(py, invoke(vec!["indices".into(), spec, "--at".into(), at]), false)
}

#[pyfunction]
#[pyo3(signature = (spec, lambda_=None, mu=None))]
fn deform(py: Python<'_>, spec: String, lambda_: Option<String>, mu: Option<String>) -> PyResult<Py<PyAny>> {
    let mut args = vec!["deform".into(), spec];
    opt(&mut args, "--lambda", lambda_);
    opt(&mut args, "--mu", mu);
    report(py, invoke(args), false)
}

#[pyfunction]
#[pyo3(signature = (spec, subcase=None))]
fn derive(py: Python<'_>, spec: String, subcase: Option<String>) -> PyResult<Py<PyAny>> {
    let mut args = vec!["derive".into(), spec];
    opt(&mut args, "--subcase", subcase);
    report(py, invoke(args), false)
}

#[pyfunction]
#[pyo3(signature = (ptype=None))]
fn catalog(py: Python<'_>, ptype: Option<String>) -> PyResult<Py<PyAny>> {
    let mut args = vec!["catalog".into()];
    opt(&mut args, "--type", ptype);
    report(py, invoke(args), false)
}

/// The report is returned even when some entry fails; see its `all_pass`.
#[pyfunction]
fn verify_catalog(py: Python<'_>) -> PyResult<Py<PyAny>> {
    report(py, invoke(vec!["verify-catalog".into()]), true)
}

/// `init` is `(t0, lambda0, mu0)`, or `(t0, lambda0, dlambda0)` with
/// `second_order`.
#[pyfunction]
#[pyo3(signature = (ptype, init, t_end, params=None, tol=1e-10, method="rkf45".to_string(), h=None, second_order=false))]
#[allow(clippy::too_many_arguments)]
fn integrate(
    py: Python<'_>,
    ptype: String,
    init: (f64, f64, f64),
    t_end: f64,
    params: Option<std::collections::BTreeMap<String, f64>>,
    tol: f64,
    method: String,
    h: Option<f64>,
    second_order: bool,
) -> PyResult<Py<PyAny>> {
    let params = params.unwrap_or_default().iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",");
    let mut args = vec![
        "integrate".into(),
        "--type".into(),
        ptype,
        "--params".into(),
        params,
        "--init".into(),
        format!("{},{},{}", init.0, init.1, init.2),
        "--t-end".into(),
        t_end.to_string(),
        "--tol".into(),
        tol.to_string(),
        "--method".into(),
        method,
    ];
    opt(&mut args, "--h", h.map(|x| x.to_string()));
    if second_order {
        args.push("--second-order".into());
    }
    report(py, invoke(args), false)
}

#[pymodule]
fn heun_painleve_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(indices, m)?)?;
    m.add_function(wrap_pyfunction!(deform, m)?)?;
    m.add_function(wrap_pyfunction!(derive, m)?)?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(verify_catalog, m)?)?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    Ok(())
}
