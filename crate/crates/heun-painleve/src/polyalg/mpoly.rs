use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::mono::Monomial;
use super::var::Var;
use super::Rat;

/// Multivariate polynomial over the rationals.
///
/// Terms are kept in a map ordered by the graded lexicographic monomial
/// order, so the last entry is the leading term. Zero coefficients are never
/// stored, which makes the representation canonical.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rat>,
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

impl MPoly {
    pub fn zero() -> MPoly {
        MPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> MPoly {
        MPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> MPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        MPoly { terms }
    }

    pub fn int(n: i64) -> MPoly {
        MPoly::constant(rat(n))
    }

    pub fn var(v: &Var) -> MPoly {
        MPoly::term(Rat::one(), Monomial::var(v, 1))
    }

    pub fn named(name: &str) -> MPoly {
        MPoly::var(&Var::new(name))
    }

    pub fn term(c: Rat, m: Monomial) -> MPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rat)>>(it: I) -> MPoly {
        let mut terms: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (m, c) in it {
            add_term(&mut terms, m, c);
        }
        MPoly { terms }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, c)| m.is_one() && c.is_one())
                .unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    /// Coefficient of the monomial 1.
    pub fn constant_term(&self) -> Rat {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rat {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Degree in `v`; `None` for the zero polynomial.
    pub fn degree_in(&self, v: &Var) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(v)).max()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for v in m.vars() {
                out.insert(v.clone());
            }
        }
        out
    }

    pub fn depends_on(&self, v: &Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(n, a)| (n.mul(m), a.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut result = MPoly::one();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Coefficients as a polynomial in `v`: entry `i` multiplies `v^i`.
    pub fn coeffs_in(&self, v: &Var) -> Vec<MPoly> {
        let deg = match self.degree_in(v) {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let mut out: Vec<BTreeMap<Monomial, Rat>> = vec![BTreeMap::new(); deg + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split(v);
            out[e as usize].insert(rest, c.clone());
        }
        out.into_iter().map(|terms| MPoly { terms }).collect()
    }

    pub fn from_coeffs_in(v: &Var, coeffs: &[MPoly]) -> MPoly {
        let mut terms = BTreeMap::new();
        for (i, c) in coeffs.iter().enumerate() {
            let vm = Monomial::var(v, i as u32);
            for (m, a) in &c.terms {
                terms.insert(m.mul(&vm), a.clone());
            }
        }
        MPoly { terms }
    }

    pub fn derivative(&self, v: &Var) -> MPoly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(v);
            if e > 0 {
                let nm = rest.mul(&Monomial::var(v, e - 1));
                add_term(&mut terms, nm, c * rat(e as i64));
            }
        }
        MPoly { terms }
    }

    /// Replaces `v` by the polynomial `g`.
    pub fn substitute(&self, v: &Var, g: &MPoly) -> MPoly {
        if !self.depends_on(v) {
            return self.clone();
        }
        let coeffs = self.coeffs_in(v);
        let mut acc = MPoly::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * g) + c;
        }
        acc
    }

    /// Replaces `v` by a rational constant.
    pub fn eval_var(&self, v: &Var, x: &Rat) -> MPoly {
        self.substitute(v, &MPoly::constant(x.clone()))
    }

    /// Gcd of the exponent vectors (largest monomial dividing every term).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let first = match it.next() {
            Some(m) => m.clone(),
            None => return Monomial::one(),
        };
        it.fold(first, |acc, m| acc.gcd(m))
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<MPoly> {
        let mut terms = BTreeMap::new();
        for (n, c) in &self.terms {
            terms.insert(n.div(m)?, c.clone());
        }
        Some(MPoly { terms })
    }

    /// Rational number c such that `self / c` has coprime integer
    /// coefficients and a positive leading coefficient.
    pub fn rational_content(&self) -> Rat {
        if self.is_zero() {
            return Rat::one();
        }
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        let mut content = Rat::new(num, den);
        if self.leading_coeff().is_negative() {
            content = -content;
        }
        content
    }

    pub fn primitive(&self) -> MPoly {
        let c = self.rational_content();
        self.scale(&(Rat::one() / c))
    }

    /// Divides so that the leading coefficient becomes 1.
    pub fn monic(&self) -> MPoly {
        if self.is_zero() {
            return MPoly::zero();
        }
        let lc = self.leading_coeff();
        self.scale(&(Rat::one() / lc))
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &MPoly) -> Option<MPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MPoly::zero());
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&(Rat::one() / c)));
        }
        if d.len() == 1 {
            let (m, c) = d.leading().unwrap();
            return self.div_monomial(m).map(|q| q.scale(&(Rat::one() / c)));
        }
        for v in d.vars() {
            if self.degree_in(&v).unwrap_or(0) < d.degree_in(&v).unwrap_or(0) {
                return None;
            }
        }
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut rem = self.terms.clone();
        let mut quot: BTreeMap<Monomial, Rat> = BTreeMap::new();
        while let Some((lm, lc)) = rem.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = lm.div(&dm)?;
            let qc = &lc / &dc;
            for (m, c) in &d.terms {
                add_term(&mut rem, m.mul(&qm), -(c * &qc));
            }
            quot.insert(qm, qc);
        }
        Some(MPoly { terms: quot })
    }

    /// Exact square root when `self` is the square of a polynomial.
    pub fn sqrt(&self) -> Option<MPoly> {
        if self.is_zero() {
            return Some(MPoly::zero());
        }
        let (lm, lc) = self.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut half = Vec::new();
        for (v, e) in lm.pairs() {
            if e % 2 != 0 {
                return None;
            }
            half.push((v.clone(), e / 2));
        }
        let root_c = rat_sqrt(&lc)?;
        let lead_m = Monomial::from_pairs(half);
        let two_lead_c = &root_c * rat(2);
        let mut r = MPoly::term(root_c, lead_m.clone());
        let mut last_m = lead_m.clone();
        loop {
            let diff = self - &(&r * &r);
            let (dm, dc) = match diff.leading() {
                None => return Some(r),
                Some((m, c)) => (m.clone(), c.clone()),
            };
            let qm = dm.div(&lead_m)?;
            if qm >= last_m {
                return None;
            }
            r = &r + &MPoly::term(&dc / &two_lead_c, qm.clone());
            last_m = qm;
        }
    }

    pub fn eval_f64(&self, env: &dyn Fn(&Var) -> f64) -> f64 {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = rat_to_f64(c);
            for (v, e) in m.pairs() {
                t *= env(v).powi(*e as i32);
            }
            acc += t;
        }
        acc
    }

    /// Evaluates at rational values for every variable present.
    pub fn eval_rat(&self, env: &dyn Fn(&Var) -> Rat) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.pairs() {
                t *= num_traits::pow::pow(env(v), *e as usize);
            }
            acc += t;
        }
        acc
    }
}

pub(crate) fn add_term(terms: &mut BTreeMap<Monomial, Rat>, m: Monomial, c: Rat) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match terms.entry(m) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            let s = e.get() + &c;
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

pub fn rat_to_f64(c: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    c.to_f64().unwrap_or(f64::NAN)
}

fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

pub fn rat_sqrt(c: &Rat) -> Option<Rat> {
    Some(Rat::new(int_sqrt(c.numer())?, int_sqrt(c.denom())?))
}

impl Add<&MPoly> for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let (big, small) = if self.len() >= rhs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut terms = big.terms.clone();
        for (m, c) in &small.terms {
            add_term(&mut terms, m.clone(), c.clone());
        }
        MPoly { terms }
    }
}

impl Sub<&MPoly> for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            add_term(&mut terms, m.clone(), -c.clone());
        }
        MPoly { terms }
    }
}

impl Mul<&MPoly> for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        if self.is_zero() || rhs.is_zero() {
            return MPoly::zero();
        }
        let mut terms = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                add_term(&mut terms, m1.mul(m2), c1 * c2);
            }
        }
        MPoly { terms }
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: MPoly) -> MPoly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: &MPoly) -> MPoly {
                (&self).$f(rhs)
            }
        }
        impl $tr<MPoly> for &MPoly {
            type Output = MPoly;
            fn $f(self, rhs: MPoly) -> MPoly {
                self.$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

/// Canonical text: terms from the leading one down, `coeff*mon` joined by
/// `+`/`-`, rationals written `p/q`.
impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
