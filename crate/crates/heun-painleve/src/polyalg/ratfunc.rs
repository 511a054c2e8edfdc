use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gcd::gcd;
use super::mpoly::{rat, MPoly};
use super::var::Var;
use super::{AlgError, Rat};

/// Rational function `num / den` in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    pub fn new(num: MPoly, den: MPoly) -> Result<RatFunc, AlgError> {
        if den.is_zero() {
            return Err(AlgError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: MPoly, den: MPoly) -> RatFunc {
        if num.is_zero() {
            return RatFunc::zero();
        }
        if let Some(c) = den.constant_value() {
            return RatFunc {
                num: num.scale(&(Rat::one() / c)),
                den: MPoly::one(),
            };
        }
        let g = gcd(&num, &den);
        let (n, d) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        Self::normalized(n, d)
    }

    /// Assumes `n`, `d` coprime; only fixes the denominator's leading
    /// coefficient.
    fn normalized(n: MPoly, d: MPoly) -> RatFunc {
        let lc = d.leading_coeff();
        if lc.is_one() {
            RatFunc { num: n, den: d }
        } else {
            let inv = Rat::one() / lc;
            RatFunc {
                num: n.scale(&inv),
                den: d.scale(&inv),
            }
        }
    }

    pub fn zero() -> RatFunc {
        RatFunc {
            num: MPoly::zero(),
            den: MPoly::one(),
        }
    }

    pub fn one() -> RatFunc {
        RatFunc::from_poly(MPoly::one())
    }

    pub fn from_poly(p: MPoly) -> RatFunc {
        RatFunc {
            num: p,
            den: MPoly::one(),
        }
    }

    pub fn constant(c: Rat) -> RatFunc {
        RatFunc::from_poly(MPoly::constant(c))
    }

    pub fn int(n: i64) -> RatFunc {
        RatFunc::constant(rat(n))
    }

    pub fn ratio(n: i64, d: i64) -> RatFunc {
        RatFunc::constant(super::mpoly::ratio(n, d))
    }

    pub fn var(v: &Var) -> RatFunc {
        RatFunc::from_poly(MPoly::var(v))
    }

    pub fn named(name: &str) -> RatFunc {
        RatFunc::var(&Var::new(name))
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&MPoly> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut s = self.num.vars();
        s.extend(self.den.vars());
        s
    }

    pub fn depends_on(&self, v: &Var) -> bool {
        self.num.depends_on(v) || self.den.depends_on(v)
    }

    pub fn scale(&self, c: &Rat) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<RatFunc, AlgError> {
        if self.is_zero() {
            return Err(AlgError::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &RatFunc) -> Result<RatFunc, AlgError> {
        Ok(self * &other.inv()?)
    }

    pub fn powi(&self, n: i32) -> Result<RatFunc, AlgError> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let k = n.unsigned_abs();
        Ok(RatFunc {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    pub fn pow(&self, n: u32) -> RatFunc {
        RatFunc {
            num: self.num.pow(n),
            den: self.den.pow(n),
        }
    }

    pub fn derivative(&self, v: &Var) -> RatFunc {
        let dn = self.num.derivative(v);
        if !self.den.depends_on(v) {
            return Self::reduce(dn, self.den.clone());
        }
        let dd = self.den.derivative(v);
        let g = gcd(&self.den, &dd);
        let d1 = self.den.exact_div(&g).unwrap();
        let d2 = dd.exact_div(&g).unwrap();
        let n = &(&dn * &d1) - &(&self.num * &d2);
        Self::reduce(n, &(&g * &d1) * &d1)
    }

    /// Replaces the variable `v` by the rational function `r`.
    pub fn substitute(&self, v: &Var, r: &RatFunc) -> RatFunc {
        if !self.depends_on(v) {
            return self.clone();
        }
        if r.is_poly() {
            return Self::reduce(
                self.num.substitute(v, &r.num),
                self.den.substitute(v, &r.num),
            );
        }
        let dn = self.num.degree_in(v).unwrap_or(0);
        let dd = self.den.degree_in(v).unwrap_or(0);
        let hn = homogenized_substitution(&self.num, v, &r.num, &r.den);
        let hd = homogenized_substitution(&self.den, v, &r.num, &r.den);
        // num(a/b) = hn / b^dn, den(a/b) = hd / b^dd
        let (n, d) = if dn >= dd {
            (hn, &hd * &r.den.pow(dn - dd))
        } else {
            (&hn * &r.den.pow(dd - dn), hd)
        };
        Self::reduce(n, d)
    }

    /// Substitutes several variables simultaneously.
    pub fn substitute_many(&self, subs: &[(Var, RatFunc)]) -> RatFunc {
        if subs.is_empty() {
            return self.clone();
        }
        // Rename to fresh variables first so that replacements may mention
        // the substituted variables themselves.
        let mut cur = self.clone();
        let mut fresh = Vec::with_capacity(subs.len());
        for (i, (v, _)) in subs.iter().enumerate() {
            let f = Var::new(&format!("__sub{i}"));
            cur = cur.substitute(v, &RatFunc::var(&f));
            fresh.push(f);
        }
        for (f, (_, r)) in fresh.iter().zip(subs.iter()) {
            cur = cur.substitute(f, r);
        }
        cur
    }

    pub fn eval_f64(&self, env: &dyn Fn(&Var) -> f64) -> f64 {
        self.num.eval_f64(env) / self.den.eval_f64(env)
    }

    /// Exact evaluation at rational values of every variable.
    pub fn eval_rat(&self, env: &dyn Fn(&Var) -> Rat) -> Result<Rat, AlgError> {
        let d = self.den.eval_rat(env);
        if d.is_zero() {
            return Err(AlgError::DivisionByZero);
        }
        Ok(self.num.eval_rat(env) / d)
    }

    /// Canonical text form `(num)/(den)`, or just `num` for polynomials.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

/// `p(a/b) * b^deg_v(p)` as a polynomial.
fn homogenized_substitution(p: &MPoly, v: &Var, a: &MPoly, b: &MPoly) -> MPoly {
    let coeffs = p.coeffs_in(v);
    if coeffs.is_empty() {
        return MPoly::zero();
    }
    let deg = coeffs.len() - 1;
    let mut apow = vec![MPoly::one()];
    let mut bpow = vec![MPoly::one()];
    for i in 1..=deg {
        apow.push(&apow[i - 1] * a);
        bpow.push(&bpow[i - 1] * b);
    }
    let mut acc = MPoly::zero();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        acc = &acc + &(&(c * &apow[i]) * &bpow[deg - i]);
    }
    acc
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl From<MPoly> for RatFunc {
    fn from(p: MPoly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl Add<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc::reduce(&self.num + &rhs.num, self.den.clone());
        }
        if self.den.is_one() {
            return RatFunc::normalized(&(&self.num * &rhs.den) + &rhs.num, rhs.den.clone());
        }
        if rhs.den.is_one() {
            return RatFunc::normalized(&self.num + &(&rhs.num * &self.den), self.den.clone());
        }
        let d = gcd(&self.den, &rhs.den);
        if d.is_one() {
            let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            return RatFunc::normalized(n, &self.den * &rhs.den);
        }
        let b1 = self.den.exact_div(&d).unwrap();
        let d1 = rhs.den.exact_div(&d).unwrap();
        let n = &(&self.num * &d1) + &(&rhs.num * &b1);
        if n.is_zero() {
            return RatFunc::zero();
        }
        let g = gcd(&n, &d);
        let den = &self.den * &d1;
        if g.is_one() {
            RatFunc::normalized(n, den)
        } else {
            RatFunc::normalized(n.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        }
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl Sub<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.exact_div(&g1).unwrap();
        let d2 = rhs.den.exact_div(&g1).unwrap();
        let n2 = rhs.num.exact_div(&g2).unwrap();
        let d1 = self.den.exact_div(&g2).unwrap();
        RatFunc::normalized(&n1 * &n2, &d1 * &d2)
    }
}

impl Div<&RatFunc> for &RatFunc {
    type Output = RatFunc;
    /// Panics on division by the zero function; use `checked_div` to handle
    /// that case.
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs).expect("division by the zero rational function")
    }
}

macro_rules! forward_owned_rf {
    ($tr:ident, $f:ident) => {
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $f(self, rhs: RatFunc) -> RatFunc {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $f(self, rhs: &RatFunc) -> RatFunc {
                (&self).$f(rhs)
            }
        }
        impl $tr<RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $f(self, rhs: RatFunc) -> RatFunc {
                self.$f(&rhs)
            }
        }
    };
}
forward_owned_rf!(Add, add);
forward_owned_rf!(Sub, sub);
forward_owned_rf!(Mul, mul);
forward_owned_rf!(Div, div);

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> RatFunc {
        RatFunc::var(&Var::z())
    }

    #[test]
    fn additive_inverse_is_zero() {
        let f = &z() / &(&z() - &RatFunc::one());
        assert!((&f + &(-&f)).is_zero());
    }

    #[test]
    fn common_factor_cancels() {
        let f = RatFunc::new(
            (&z() * &z() - &RatFunc::one()).num().clone(),
            (&z() - &RatFunc::one()).num().clone(),
        )
        .unwrap();
        assert_eq!(f, &z() + &RatFunc::one());
    }

    #[test]
    fn product_against_multiplying_back() {
        let l = RatFunc::var(&Var::lambda());
        let f = &(&RatFunc::one() / &z()) * &(&z() / &(&z() - &l));
        assert_eq!(f.to_string(), "(1)/(z - lambda)");
        assert_eq!(&f * &(&z() - &l), RatFunc::one());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(z().checked_div(&RatFunc::zero()).is_err());
        assert!(RatFunc::new(MPoly::one(), MPoly::zero()).is_err());
    }

    #[test]
    fn derivative_of_quotient() {
        let f = &RatFunc::one() / &(&z() * &z() - &RatFunc::one());
        let d = f.derivative(&Var::z());
        let expected = &(-&z().scale(&rat(2))) / &(&z() * &z() - &RatFunc::one()).pow(2);
        assert_eq!(d, expected);
    }

    #[test]
    fn rational_substitution() {
        let f = &RatFunc::one() / &(&z() - &RatFunc::one());
        let w = &RatFunc::one() / &z();
        // 1/(1/w - 1) = w/(1 - w)
        let g = f.substitute(&Var::z(), &w);
        assert_eq!(g, &z() / &(&RatFunc::one() - &z()));
    }
}
