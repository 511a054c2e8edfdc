mod common;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use common::*;
use heun_painleve::deformation::{deform, deform_symbolic, deformed_swap, verify_apparent, verify_apparent_numeric, DeformError};
use heun_painleve::heun_class::HeunOperator;
use heun_painleve::isomonodromy::{compatibility_rhs, conditions, hamilton_equations, verify_full_compatibility};
use heun_painleve::painleve_catalog::{catalog, supertype_scaling, CatalogEntry, Supertype};
use heun_painleve::polyalg::{Genericity, Point, Rat, RatFunc, Var};
use heun_painleve::sing_analysis::{find_singularities, rank};
use proptest::prelude::*;

const G: Genericity = Genericity::Generic;

fn entries() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(|| catalog().unwrap())
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

/// Every symbol of `op` replaced by a value; `None` when roots collide.
fn specialize(op: &HeunOperator, env: &BTreeMap<Var, Rat>) -> Option<HeunOperator> {
    let subs: Vec<(Var, RatFunc)> = env.iter().map(|(v, x)| (v.clone(), constant(x))).collect();
    let s = |f: &RatFunc| f.substitute_many(&subs);
    let roots: Vec<(RatFunc, u32)> = op.roots.iter().map(|(r, m)| (s(r), *m)).collect();
    for (i, (r, _)) in roots.iter().enumerate() {
        if roots[..i].iter().any(|(q, _)| q == r) {
            return None;
        }
    }
    HeunOperator::new(s(&op.lead), roots, s(&op.tau), s(&op.eta)).ok()
}

fn env_for(op: &HeunOperator, values: &[Rat]) -> BTreeMap<Var, Rat> {
    free_vars(op).into_iter().zip(values.iter().cycle().cloned()).collect()
}

fn entry_index() -> impl Strategy<Value = usize> {
    0usize..11
}

#[test]
fn catalog_families_are_apparent_symbolically() {
    for en in entries() {
        let d = deform_symbolic(&en.family.op).unwrap();
        let r = verify_apparent(&d, 6).unwrap();
        assert!(r.apparent, "{}", en.ptype.name());
        assert!(r.second_row.is_zero(), "{}", en.ptype.name());
        assert_eq!(r.v1_over_v0, RatFunc::var(&Var::mu()), "{}", en.ptype.name());
    }
}

#[test]
fn free_term_of_eta_drops_out() {
    let c = RatFunc::named("c_shift");
    for en in entries() {
        let op = &en.family.op;
        let shifted = HeunOperator::new(op.lead.clone(), op.roots.clone(), op.tau.clone(), &op.eta + &c).unwrap();
        let (d0, d1) = (deform_symbolic(op).unwrap(), deform_symbolic(&shifted).unwrap());
        assert!(d1.eta_d.derivative(&Var::new("c_shift")).is_zero(), "{}", en.ptype.name());
        assert_eq!(d0.eta_d, d1.eta_d);
        assert_eq!(d0.tau_d, d1.tau_d);
    }
}

#[test]
fn compatibility_holds_on_catalog_families() {
    for en in entries() {
        let f = &en.family;
        assert!(conditions(f, &en.data.subcase).unwrap().all_zero(), "{}", en.ptype.name());
        assert!(verify_full_compatibility(f, &en.data).unwrap().both_zero(), "{}", en.ptype.name());
        // the Hamilton equations agree with the direct formulas in c
        assert_eq!(compatibility_rhs(f, &en.data.c).unwrap(), en.data.hamilton_rhs, "{}", en.ptype.name());
        // the unified c-form differs from H by a function of t at most
        let diff = &en.data.h_unified - &en.data.h;
        assert!(!diff.depends_on(&Var::lambda()) && !diff.depends_on(&Var::mu()), "{}", en.ptype.name());
    }
}

#[test]
fn time_rescaling_follows_the_chain_rule() {
    let eps = RatFunc::named("eps");
    let t = Var::t();
    let et = &eps * &RatFunc::var(&t);
    for en in entries() {
        let h = &en.data.h;
        let h_eps = &eps * &h.substitute(&t, &et);
        let (l1, m1) = hamilton_equations(&h_eps);
        let (l0, m0) = hamilton_equations(h);
        assert_eq!(l1, &eps * &l0.substitute(&t, &et), "{}", en.ptype.name());
        assert_eq!(m1, &eps * &m0.substitute(&t, &et), "{}", en.ptype.name());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn numeric_apparency(i in entry_index(), vals in proptest::collection::vec(nonzero_rat(), 8), lam in small_rat(), mu in small_rat()) {
        let en = &entries()[i];
        let op = &en.family.op;
        let mut env = env_for(op, &vals);
        env.insert(Var::lambda(), lam);
        env.insert(Var::mu(), mu);
        let d = deform_symbolic(op).unwrap();
        let r = match verify_apparent_numeric(&d, &|v: &Var| env.get(v).cloned().unwrap_or_else(|| Rat::from_integer(0.into()))) {
            Ok(r) => r,
            Err(DeformError::LambdaAtSigmaRoot(_) | DeformError::Heun(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert!(r.first_row_residual < 1e-12 && r.second_row_residual < 1e-12);
        let (a, b) = (r.indices.0.as_rational().cloned(), r.indices.1.as_rational().cloned());
        let mut got = [a.unwrap().to_string(), b.unwrap().to_string()];
        got.sort();
        prop_assert_eq!(got, ["0".to_string(), "2".to_string()]);
    }

    #[test]
    fn deformation_adds_one_point(i in entry_index(), vals in proptest::collection::vec(nonzero_rat(), 8), lam in small_rat(), mu in nonzero_rat()) {
        let en = &entries()[i];
        let Some(base) = specialize(&en.family.op, &env_for(&en.family.op, &vals)) else { return Ok(()) };
        let l = constant(&lam);
        let d = match deform(&base, &l, &constant(&mu)) {
            Ok(d) => d,
            Err(DeformError::LambdaAtSigmaRoot(_)) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let a0 = base.principal();
        let a1 = d.principal();
        let before: Vec<Point> = find_singularities(&a0, G).unwrap().into_iter().map(|r| r.location).filter(|p| !p.is_infinity()).collect();
        let after: Vec<Point> = find_singularities(&a1, G).unwrap().into_iter().map(|r| r.location).filter(|p| !p.is_infinity()).collect();
        let mut want: Vec<String> = before.iter().map(|p| p.to_string()).collect();
        want.push(Point::at(l.clone()).to_string());
        want.sort();
        let mut got: Vec<String> = after.iter().map(|p| p.to_string()).collect();
        got.sort();
        prop_assert_eq!(got, want);
        for p in before.iter().chain([Point::Infinity].iter()) {
            prop_assert_eq!(rank(&a0, p, G).unwrap(), rank(&a1, p, G).unwrap(), "at {}", p);
        }
    }

    #[test]
    fn swap_keeps_apparency(i in entry_index()) {
        let en = &entries()[i];
        let op = &en.family.op;
        prop_assume!(op.has_root_at_origin());
        let d = deform_symbolic(op).unwrap();
        let sw = deformed_swap(&d).unwrap();
        prop_assert!(verify_apparent(&sw, 6).unwrap().apparent);
        let back = deformed_swap(&sw).unwrap();
        prop_assert_eq!(&back.lambda, &d.lambda);
        prop_assert_eq!(&back.mu, &d.mu);
        prop_assert_eq!(back.principal().p, d.principal().p);
        prop_assert_eq!(back.principal().q, d.principal().q);
    }

    #[test]
    fn scaling_laws_hold_numerically(e in nonzero_rat(), w in nonzero_rat(), st in proptest::sample::select(Supertype::ALL.to_vec())) {
        for c in supertype_scaling(st, &constant(&e), &constant(&w)) {
            if c.law.contains("H_{eta/eps}") {
                // eta -> eta/eps agrees with eta -> eps eta only for eps = +-1
                prop_assert_eq!(c.holds, &e * &e == Rat::from_integer(1.into()));
            } else {
                prop_assert!(c.holds, "{} {}", st.name(), c.law);
            }
        }
    }
}
