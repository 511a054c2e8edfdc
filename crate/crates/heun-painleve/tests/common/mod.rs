#![allow(dead_code)]

use heun_painleve::heun_class::{HeunError, HeunOperator, TableRow};
use heun_painleve::polyalg::{MPoly, Monomial, Rat, RatFunc, Var};
use proptest::prelude::*;

pub fn z() -> RatFunc {
    RatFunc::var(&Var::z())
}

pub fn small_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rat::new(n.into(), d.into()))
}

pub fn nonzero_rat() -> impl Strategy<Value = Rat> {
    small_rat().prop_filter("nonzero", |r| *r != Rat::from_integer(0.into()))
}

/// Polynomial in `z` of degree at most `deg` with small rational coefficients.
pub fn z_poly(deg: usize) -> impl Strategy<Value = MPoly> {
    proptest::collection::vec(small_rat(), deg + 1).prop_map(|cs| {
        MPoly::from_terms(cs.into_iter().enumerate().map(|(i, c)| (Monomial::var(&Var::z(), i as u32), c)))
    })
}

/// Sparse polynomial in `z`, `lambda` and a parameter `a`.
pub fn mixed_poly() -> impl Strategy<Value = MPoly> {
    proptest::collection::vec((small_rat(), 0u32..3, 0u32..2, 0u32..2), 1..4).prop_map(|ts| {
        MPoly::from_terms(ts.into_iter().map(|(c, ez, el, ea)| {
            (Monomial::from_pairs(vec![(Var::z(), ez), (Var::lambda(), el), (Var::new("a"), ea)]), c)
        }))
    })
}

pub fn mixed_ratfunc() -> impl Strategy<Value = RatFunc> {
    (mixed_poly(), mixed_poly()).prop_filter_map("nonzero denominator", |(n, d)| RatFunc::new(n, d).ok())
}

pub fn constant(r: &Rat) -> RatFunc {
    RatFunc::constant(r.clone())
}

/// Random grounded operator with distinct rational roots and `deg sigma <= 3`.
pub fn grounded_op() -> impl Strategy<Value = HeunOperator> {
    (
        proptest::collection::btree_set(-4i64..=4, 1..=3),
        proptest::collection::vec(1u32..=2, 3),
        z_poly(2),
        z_poly(1),
    )
        .prop_filter_map("degree bounds", |(rs, ms, tau, eta)| {
            let mut roots = Vec::new();
            let mut deg = 0;
            for (r, m) in rs.into_iter().zip(ms) {
                if deg + m > 3 {
                    break;
                }
                deg += m;
                roots.push((RatFunc::int(r), m));
            }
            let tau = RatFunc::from_poly(tau);
            if tau.num().degree_in(&Var::z()).unwrap_or(0) + 1 > deg {
                return None;
            }
            HeunOperator::monic_from_roots(roots, tau, RatFunc::from_poly(eta)).ok()
        })
}

/// A variety-a member of `row` with random nonzero coefficients.
pub fn instance(row: TableRow, cs: &[Rat], third: &Rat) -> HeunOperator {
    let sh = row.shape();
    let c = |i: usize| RatFunc::constant(cs[i % cs.len()].clone());
    let roots = sh.sigma.iter().map(|(r, m)| (r.map(RatFunc::int).unwrap_or_else(|| constant(third)), *m)).collect();
    let mut tau = RatFunc::zero();
    for &k in sh.tau {
        tau = &tau + &(&c(k) * &z().pow(k as u32));
    }
    let mut eta = RatFunc::zero();
    for (i, &k) in sh.eta_a.iter().enumerate() {
        eta = &eta + &(&c(3 + i) * &z().powi(k as i32).unwrap());
    }
    HeunOperator::monic_from_roots(roots, tau, eta).unwrap()
}

pub fn third_root() -> impl Strategy<Value = Rat> {
    nonzero_rat().prop_filter("not 1", |r| *r != Rat::from_integer(1.into()))
}

pub fn skip_heun(e: &HeunError) -> bool {
    matches!(e, HeunError::IrrationalBranch(_) | HeunError::NoExponent(_) | HeunError::Sing(heun_painleve::sing_analysis::SingError::IrrationalBranch(_)))
}

/// Operator with a root of sigma at the origin, `deg sigma <= 3`.
pub fn origin_op() -> impl Strategy<Value = HeunOperator> {
    (proptest::collection::btree_set(1i64..=4, 0..=2), 1u32..=2, z_poly(2), z_poly(2)).prop_filter_map("degree", |(rs, m0, tau, eta)| {
        let mut roots = vec![(RatFunc::zero(), m0)];
        roots.extend(rs.into_iter().map(|r| (RatFunc::int(r), 1)));
        let deg: u32 = roots.iter().map(|(_, m)| m).sum();
        if deg > 3 {
            return None;
        }
        HeunOperator::monic_from_roots(roots, RatFunc::from_poly(tau), RatFunc::from_poly(eta)).ok()
    })
}
