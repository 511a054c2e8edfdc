//! Multivariate gcd over the rationals by recursive primitive remainder
//! sequences.

use std::collections::BTreeSet;

use num_traits::Zero;

use super::mpoly::MPoly;
use super::var::Var;
use super::Rat;

/// Greatest common divisor, normalized to leading coefficient 1.
/// `gcd(0, 0) = 0`.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    gcd_raw(a, b).monic()
}

/// Gcd of a list of polynomials.
pub fn gcd_list(items: &[MPoly]) -> MPoly {
    let mut g = MPoly::zero();
    for it in items {
        g = gcd_raw(&g, it);
        if g.is_constant() && !g.is_zero() {
            return MPoly::one();
        }
    }
    g.monic()
}

fn gcd_raw(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mg = ma.gcd(&mb);
    let a1 = a.div_monomial(&ma).expect("monomial content divides");
    let b1 = b.div_monomial(&mb).expect("monomial content divides");
    let g = gcd_no_monomial(&a1, &b1);
    g.mul_monomial(&mg)
}

fn gcd_no_monomial(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_constant() || b.is_constant() {
        return MPoly::one();
    }
    if a == b {
        return a.primitive();
    }
    let (small, big) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if big.exact_div(small).is_some() {
        return small.primitive();
    }
    let va = a.vars();
    let vb = b.vars();
    if let Some(x) = va.difference(&vb).next() {
        return gcd_raw(&content_in(a, x), b);
    }
    if let Some(x) = vb.difference(&va).next() {
        return gcd_raw(a, &content_in(b, x));
    }
    let x = pick_main_var(a, b, &va);
    let ca = a.coeffs_in(&x);
    let cb = b.coeffs_in(&x);
    let cont_a = gcd_list_raw(&ca);
    let cont_b = gcd_list_raw(&cb);
    let pa: Vec<MPoly> = ca.iter().map(|c| c.exact_div(&cont_a).unwrap()).collect();
    let pb: Vec<MPoly> = cb.iter().map(|c| c.exact_div(&cont_b).unwrap()).collect();
    let gc = gcd_raw(&cont_a, &cont_b);
    let gp = if coprime_by_evaluation(&pa, &pb) {
        MPoly::one()
    } else {
        primitive_prs(pa, pb, &x)
    };
    (&gc * &gp).primitive()
}

fn gcd_list_raw(items: &[MPoly]) -> MPoly {
    let mut g = MPoly::zero();
    for it in items {
        g = gcd_raw(&g, it);
        if g.is_constant() && !g.is_zero() {
            return MPoly::one();
        }
    }
    g
}

/// Content of `p` seen as a polynomial in `x`.
fn content_in(p: &MPoly, x: &Var) -> MPoly {
    gcd_list_raw(&p.coeffs_in(x))
}

fn pick_main_var(a: &MPoly, b: &MPoly, vars: &BTreeSet<Var>) -> Var {
    vars.iter()
        .min_by_key(|v| {
            let da = a.degree_in(v).unwrap_or(0);
            let db = b.degree_in(v).unwrap_or(0);
            (da.max(db), da.min(db))
        })
        .cloned()
        .expect("nonconstant polynomials have variables")
}

/// Specializes all coefficient variables at a fixed pseudo-random point and
/// checks whether the univariate images are coprime. A coprime image with
/// both leading coefficients nonvanishing proves the gcd is free of the main
/// variable.
fn coprime_by_evaluation(pa: &[MPoly], pb: &[MPoly]) -> bool {
    let mut vars = BTreeSet::new();
    for c in pa.iter().chain(pb.iter()) {
        vars.extend(c.vars());
    }
    let point = |v: &Var| -> Rat {
        let mut h: u64 = 1469598103934665603;
        for byte in v.name().bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(1099511628211);
        }
        super::mpoly::ratio(((h % 89) as i64) + 7, ((h / 89 % 13) as i64) + 2)
    };
    let eval = |c: &MPoly| c.eval_rat(&point);
    let ua: Vec<Rat> = pa.iter().map(eval).collect();
    let ub: Vec<Rat> = pb.iter().map(eval).collect();
    if ua.last().map(|c| c.is_zero()).unwrap_or(true) || ub.last().map(|c| c.is_zero()).unwrap_or(true) {
        return false;
    }
    univariate_gcd_degree(ua, ub) == 0
}

fn univariate_gcd_degree(mut a: Vec<Rat>, mut b: Vec<Rat>) -> usize {
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = univariate_rem(&a, &b);
        a = b;
        b = r;
    }
    a.len().saturating_sub(1)
}

fn trim(v: &mut Vec<Rat>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

fn univariate_rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut r = a.to_vec();
    let lb = b.last().unwrap().clone();
    while r.len() >= b.len() {
        let lr = r.last().unwrap().clone();
        let q = &lr / &lb;
        let shift = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            r[shift + i] = &r[shift + i] - &(&q * c);
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn trim_poly(v: &mut Vec<MPoly>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

/// Pseudo-remainder of `a` by `b` as polynomials in the main variable.
fn prem(a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
    let mut r = a.to_vec();
    let lb = b.last().unwrap().clone();
    while r.len() >= b.len() && !r.is_empty() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - b.len();
        for c in r.iter_mut() {
            *c = &*c * &lb;
        }
        for (i, c) in b.iter().enumerate() {
            r[shift + i] = &r[shift + i] - &(&lr * c);
        }
        r.pop();
        trim_poly(&mut r);
    }
    r
}

fn primitive_prs(mut a: Vec<MPoly>, mut b: Vec<MPoly>, x: &Var) -> MPoly {
    trim_poly(&mut a);
    trim_poly(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.len() <= 1 {
            return if b.is_empty() {
                MPoly::from_coeffs_in(x, &a).primitive()
            } else {
                MPoly::one()
            };
        }
        let r = prem(&a, &b);
        if r.is_empty() {
            return MPoly::from_coeffs_in(x, &b).primitive();
        }
        if r.len() == 1 {
            return MPoly::one();
        }
        let c = gcd_list_raw(&r);
        let rp: Vec<MPoly> = r.iter().map(|t| t.exact_div(&c).unwrap()).collect();
        a = b;
        b = rp;
    }
}

/// Lowest common multiple up to a rational factor.
pub fn lcm(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() || b.is_zero() {
        return MPoly::zero();
    }
    let g = gcd(a, b);
    (a * &b.exact_div(&g).unwrap()).monic()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::mono::Monomial;
    use crate::polyalg::mpoly::rat;

    fn v(n: &str) -> MPoly {
        MPoly::named(n)
    }

    #[test]
    fn shared_factor_is_recovered() {
        let z = v("z");
        let t = v("t");
        let k = v("k");
        let common = &(&z - &t) * &(&(&z * &k) + &MPoly::one());
        let a = &common * &(&z + &MPoly::int(3));
        let b = &common * &(&(&t * &t) - &k);
        assert_eq!(gcd(&a, &b), common.monic());
    }

    #[test]
    fn coprime_inputs() {
        let z = v("z");
        let l = v("lambda");
        let a = &z - &l;
        let b = &z * &l - &MPoly::one();
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn monomial_parts() {
        let z = v("z");
        let t = v("t");
        let a = z.pow(3).mul_monomial(&Monomial::var(&Var::t(), 1));
        let b = (&z * &z).scale(&rat(4)) * (&t + &MPoly::one());
        assert_eq!(gcd(&a, &b), &z * &z);
    }
}
