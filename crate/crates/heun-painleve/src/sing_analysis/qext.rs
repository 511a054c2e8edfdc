//! Elements `a + b*sqrt(d)` of a quadratic extension of the rational
//! function field. Used when a branch or an indicial root is not rational.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::polyalg::{AlgError, MPoly, Rat, RatFunc};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QExt {
    pub a: RatFunc,
    pub b: RatFunc,
    /// Radicand; zero whenever `b` is zero.
    pub d: RatFunc,
}

/// Square root of a rational function when it is a perfect square.
pub fn ratfunc_sqrt(f: &RatFunc) -> Option<RatFunc> {
    if f.is_zero() {
        return Some(RatFunc::zero());
    }
    let n = f.num().sqrt()?;
    let d = f.den().sqrt()?;
    RatFunc::new(n, d).ok()
}

impl QExt {
    pub fn rational(a: RatFunc) -> QExt {
        QExt {
            a,
            b: RatFunc::zero(),
            d: RatFunc::zero(),
        }
    }

    pub fn zero() -> QExt {
        QExt::rational(RatFunc::zero())
    }

    pub fn one() -> QExt {
        QExt::rational(RatFunc::one())
    }

    pub fn int(n: i64) -> QExt {
        QExt::rational(RatFunc::int(n))
    }

    pub fn from_rat(r: &Rat) -> QExt {
        QExt::rational(RatFunc::constant(r.clone()))
    }

    /// `a + b*sqrt(d)`, collapsed to a rational value when `d` is a square.
    pub fn new(a: RatFunc, b: RatFunc, d: RatFunc) -> QExt {
        if b.is_zero() || d.is_zero() {
            return QExt::rational(a);
        }
        if let Some(s) = ratfunc_sqrt(&d) {
            return QExt::rational(&a + &(&b * &s));
        }
        QExt { a, b, d }
    }

    pub fn sqrt_of(d: &RatFunc) -> QExt {
        QExt::new(RatFunc::zero(), RatFunc::one(), d.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&RatFunc> {
        if self.b.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }

    pub fn conj(&self) -> QExt {
        QExt {
            a: self.a.clone(),
            b: -&self.b,
            d: self.d.clone(),
        }
    }

    fn radicand(x: &QExt, y: &QExt) -> RatFunc {
        match (x.b.is_zero(), y.b.is_zero()) {
            (true, _) => y.d.clone(),
            (_, true) => x.d.clone(),
            _ => {
                assert!(x.d == y.d, "mixing incompatible quadratic extensions");
                x.d.clone()
            }
        }
    }

    pub fn scale(&self, c: &RatFunc) -> QExt {
        QExt::new(&self.a * c, &self.b * c, self.d.clone())
    }

    pub fn inv(&self) -> Result<QExt, AlgError> {
        if self.b.is_zero() {
            return Ok(QExt::rational(self.a.inv()?));
        }
        let norm = &(&self.a * &self.a) - &(&(&self.b * &self.b) * &self.d);
        let n = norm.inv()?;
        Ok(QExt::new(&self.a * &n, -&(&self.b * &n), self.d.clone()))
    }

    pub fn checked_div(&self, other: &QExt) -> Result<QExt, AlgError> {
        Ok(self * &other.inv()?)
    }

    pub fn is_integer_constant(&self) -> Option<i64> {
        use num_traits::ToPrimitive;
        let r = self.as_rational()?.constant_value()?;
        if r.is_integer() {
            r.to_integer().to_i64()
        } else {
            None
        }
    }

    /// Numeric value with every symbol bound by `env`; the square root is
    /// taken as the principal real root (NaN if the radicand is negative).
    pub fn eval_f64(&self, env: &dyn Fn(&crate::polyalg::Var) -> f64) -> f64 {
        let a = self.a.eval_f64(env);
        if self.b.is_zero() {
            return a;
        }
        a + self.b.eval_f64(env) * self.d.eval_f64(env).sqrt()
    }

    /// Both roots of `x^2 + b x + c`.
    pub fn quadratic_roots(b: &RatFunc, c: &RatFunc) -> (QExt, QExt) {
        let disc = &(b * b) - &c.scale(&Rat::from_integer(4.into()));
        let half = Rat::new(1.into(), 2.into());
        let a = (-b).scale(&half);
        let r1 = QExt::new(a.clone(), RatFunc::constant(half.clone()), disc.clone());
        let r2 = QExt::new(a, RatFunc::constant(-half), disc);
        (r1, r2)
    }
}

impl From<RatFunc> for QExt {
    fn from(a: RatFunc) -> Self {
        QExt::rational(a)
    }
}

impl From<MPoly> for QExt {
    fn from(a: MPoly) -> Self {
        QExt::rational(RatFunc::from_poly(a))
    }
}

impl Add<&QExt> for &QExt {
    type Output = QExt;
    fn add(self, o: &QExt) -> QExt {
        let d = QExt::radicand(self, o);
        QExt::new(&self.a + &o.a, &self.b + &o.b, d)
    }
}

impl Sub<&QExt> for &QExt {
    type Output = QExt;
    fn sub(self, o: &QExt) -> QExt {
        let d = QExt::radicand(self, o);
        QExt::new(&self.a - &o.a, &self.b - &o.b, d)
    }
}

impl Mul<&QExt> for &QExt {
    type Output = QExt;
    fn mul(self, o: &QExt) -> QExt {
        if self.b.is_zero() && o.b.is_zero() {
            return QExt::rational(&self.a * &o.a);
        }
        let d = QExt::radicand(self, o);
        let a = &(&self.a * &o.a) + &(&(&self.b * &o.b) * &d);
        let b = &(&self.a * &o.b) + &(&self.b * &o.a);
        QExt::new(a, b, d)
    }
}

impl Neg for &QExt {
    type Output = QExt;
    fn neg(self) -> QExt {
        QExt {
            a: -&self.a,
            b: -&self.b,
            d: self.d.clone(),
        }
    }
}

impl fmt::Display for QExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            write!(f, "({})*sqrt({})", self.b, self.d)
        } else {
            write!(f, "{} + ({})*sqrt({})", self.a, self.b, self.d)
        }
    }
}

impl fmt::Debug for QExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
