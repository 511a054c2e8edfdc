use super::*;

const SIXTH: &str = "param k0, k1, kt, kinf, c; time t
sigma = z*(z-1)*(z-t)
tau = (1-k0)*(z-1)*(z-t) + (1-k1)*z*(z-t) + (1-kt)*z*(z-1)
eta = ((k0+k1+kt-1)^2 - kinf^2)*z/4 - c";

const SECOND: &str = "param alpha, c; time t; sigma = 1; tau = -2*z^2 - t; eta = -(2*alpha+1)*z - c";

fn run_args(args: &[&str]) -> Outcome {
    run(std::iter::once("heun-painleve").chain(args.iter().copied()))
}

fn stdout_json(o: &Outcome) -> Value {
    serde_json::from_str(&o.stdout).unwrap()
}

#[test]
fn parses_sixth_family() {
    let s = parse_operator(SIXTH).unwrap();
    let op = s.heun().unwrap();
    assert_eq!(op.roots.len(), 3);
    assert_eq!(s.time.as_deref(), Some("t"));
    assert_eq!(classify(op).unwrap().symbol.to_string(), "(1_ 1_ 1_;1_)");
}

#[test]
fn parses_first_family() {
    let s = parse_operator("param c; sigma = 1; tau = 0; eta = -4*z^3 - 2*t*z - c; time t").unwrap();
    assert_eq!(classify(s.heun().unwrap()).unwrap().symbol.to_string(), "(;7/2)");
}

#[test]
fn zero_denominator_is_a_syntax_error() {
    match parse_operator("sigma = z^2; eta = 1/0") {
        Err(SpecError::Syntax(e)) => {
            assert_eq!((e.line, e.col), (1, 22));
            assert!(e.message.contains("division by zero"));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn reports_expected_tokens() {
    match parse_operator("sigma = z*(z-1\ntau = 1") {
        Err(SpecError::Syntax(e)) => {
            assert_eq!(e.line, 2);
            assert!(e.expected.contains(&")".to_string()));
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_operator("sigma = z; tau == 1"), Err(SpecError::Syntax(_))));
}

#[test]
fn undeclared_and_unfactored() {
    assert_eq!(
        parse_operator("sigma = z; tau = a*z").unwrap_err(),
        SpecError::UndeclaredParameter { name: "a".into(), line: 1, col: 18 }
    );
    assert!(matches!(parse_operator("sigma = z^2 - 1"), Err(SpecError::SigmaNotFactored { .. })));
    let ok = parse_operator("sigma = 2*(z-1)^2*z; tau = 1").unwrap();
    let op = ok.heun().unwrap();
    assert_eq!(op.lead, RatFunc::int(2));
    assert!(op.roots.contains(&(RatFunc::int(1), 2)));
}

#[test]
fn other_time_name_becomes_t() {
    let s = parse_operator("param c; time s; sigma = 1; tau = 0; eta = -4*z^3 - 2*s*z - c").unwrap();
    assert!(s.heun().unwrap().eta.depends_on(&Var::t()));
    let clash = parse_operator("param t; time s; sigma = 1; tau = 0; eta = s*z - t");
    assert!(matches!(clash, Err(SpecError::Invalid(_))));
}

#[test]
fn print_parse_round_trip() {
    for src in [SIXTH, SECOND] {
        let s = parse_operator(src).unwrap();
        let op = s.heun().unwrap();
        let again = parse_operator(&print_operator(op, Some("t"))).unwrap();
        assert_eq!(again.heun().unwrap(), op);
    }
}

#[test]
fn derive_second_prints_its_hamiltonian() {
    let o = run_args(&["derive", SECOND]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let v = stdout_json(&o);
    assert_eq!(v["schema_version"], 1);
    let h = parse_ratfunc(v["H_reduced"].as_str().unwrap()).unwrap();
    assert_eq!(h, parse_ratfunc("mu^2/2 - (lambda^2 + t/2)*mu - (alpha + 1/2)*lambda").unwrap());
    for c in v["conditions"].as_array().unwrap() {
        assert_eq!(c, "0");
    }
}

#[test]
fn classify_airy() {
    let o = run_args(&["classify", "sigma = 1; tau = 0; eta = -z"]);
    let v = stdout_json(&o);
    assert_eq!(v["riemann_reducible"], true);
    assert_eq!(v["riemann_row"], "Airy");
}

#[test]
fn exit_codes() {
    assert_eq!(run_args(&["classify", "sigma = z^2; eta = 1/0"]).code, EXIT_BAD_SPEC);
    assert_eq!(run_args(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(run_args(&["catalog", "--type", "XIV"]).code, EXIT_USAGE);
    let o = run_args(&["catalog", "--type", "II"]);
    assert_eq!(stdout_json(&o)["entries"].as_array().unwrap().len(), 1);
}

#[test]
fn integrate_csv() {
    let o = run_args(&["integrate", "--type", "I", "--init", "0,0,0", "--t-end", "0.01", "--method", "rk4", "--h", "0.005", "--format", "csv"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert_eq!(o.stdout.lines().count(), 4);
}

#[test]
fn drop_free_terms_keeps_phase_space_part() {
    let h = parse_ratfunc("mu^2/2 - t*lambda + t^2 + c").unwrap();
    assert_eq!(drop_free_terms(&h), parse_ratfunc("mu^2/2 - t*lambda").unwrap());
}
