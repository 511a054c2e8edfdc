use super::*;
use crate::polyalg::text::parse_ratfunc;

fn e(s: &str) -> RatFunc {
    parse_ratfunc(s).unwrap()
}

fn family(lead: &str, roots: &[(&str, u32)], tau: &str, eta: &str) -> TimeFamily {
    let rs = roots.iter().map(|(r, m)| (e(r), *m)).collect();
    TimeFamily::new(HeunOperator::new(e(lead), rs, e(tau), e(eta)).unwrap())
}

fn sixth() -> TimeFamily {
    family(
        "1",
        &[("0", 1), ("1", 1), ("t", 1)],
        "(1-k0)*(z-1)*(z-t) + (1-k1)*z*(z-t) + (1-kt)*z*(z-1)",
        "((k0+k1+kt-1)^2 - kinf^2)*z/4 - c",
    )
}

fn first() -> TimeFamily {
    family("1", &[], "0", "-4*z^3 - 2*t*z - c")
}

#[test]
fn sixth_is_a1_with_expected_m() {
    let f = sixth();
    let subs = select_subcase(&f).unwrap();
    let a1 = subs.iter().find(|s| s.tag == SubcaseTag::A1).unwrap();
    assert_eq!(a1.m, e("1/(t*(t-1))"));
    let c = build_c(&f, a1).unwrap();
    assert_eq!(c, e("(lambda-t)*z*(z-1)/(t*(t-1))"));
    let data = hamiltonian(&f, a1).unwrap();
    assert_eq!(data.h, data.h_unified);
    let tabulated = e("(lambda*(lambda-1)*(lambda-t)*mu^2 - (k0*(lambda-1)*(lambda-t) + k1*lambda*(lambda-t) + (kt-1)*lambda*(lambda-1))*mu + ((k0+k1+kt-1)^2-kinf^2)*(lambda-t)/4)/(t*(t-1))");
    let diff = &data.h - &tabulated;
    assert!(!diff.depends_on(&Var::lambda()) && !diff.depends_on(&Var::mu()));
    assert!(verify_full_compatibility(&f, &data).unwrap().both_zero());
}

#[test]
fn wrong_m_leaves_condition_one() {
    let f = sixth();
    let mut sc = subcase_with_tag(&f, SubcaseTag::A1).unwrap();
    sc.m = RatFunc::one();
    let conds = conditions(&f, &sc).unwrap();
    assert_eq!(conds.specialized[0], e("(1-kt)*(1-t*(t-1))/(z-t)^2"));
    assert!(!conds.general[0].is_zero());
}

#[test]
fn second_painleve_bp_rescaled() {
    let f = family("1", &[], "-2*z^2 - t", "-(2*alpha+1)*z - c");
    let sc = subcase_with_tag(&f, SubcaseTag::Bp).unwrap();
    assert_eq!(sc.scale, RatFunc::int(-1));
    let data = hamiltonian(&f, &sc).unwrap();
    assert_eq!(data.a, e("1/(2*(z-lambda))"));
    assert_eq!(data.b, e("-mu/(2*(z-lambda))"));
    assert!(verify_full_compatibility(&f, &data).unwrap().both_zero());
}

#[test]
fn first_painleve_hamiltonian() {
    let f = first();
    let sc = subcase_with_tag(&f, SubcaseTag::Bq).unwrap();
    let data = hamiltonian(&f, &sc).unwrap();
    assert_eq!(&data.h + &e("c/2"), e("mu^2/2 - 2*lambda^3 - t*lambda"));
    assert!(verify_full_compatibility(&f, &data).unwrap().both_zero());
    let bumped = data.with_hamiltonian(&data.h + &lam());
    let r = verify_full_compatibility(&f, &bumped).unwrap();
    assert!(!r.compa1.is_zero());
}

#[test]
fn hamilton_rhs_matches_c_form() {
    for f in [sixth(), first()] {
        for sc in select_subcase(&f).unwrap() {
            let data = hamiltonian(&f, &sc).unwrap();
            let (l, m) = compatibility_rhs(&f, &data.c).unwrap();
            assert_eq!(l, data.hamilton_rhs.0);
            assert_eq!(m, data.hamilton_rhs.1);
        }
    }
}

#[test]
fn formal_compa2_has_no_mu_dot() {
    let f = first();
    let data = hamiltonian(&f, &subcase_with_tag(&f, SubcaseTag::Bq).unwrap()).unwrap();
    let r = formal_residuals(&f, &data).unwrap();
    assert!(!r.compa2.depends_on(&mu_dot()));
    assert!(r.compa1.depends_on(&mu_dot()));
}

#[test]
fn no_time_no_subcase() {
    let f = family("1", &[("0", 1)], "1", "z");
    assert_eq!(select_subcase(&f), Err(IsoError::NoSubcaseApplies));
}
