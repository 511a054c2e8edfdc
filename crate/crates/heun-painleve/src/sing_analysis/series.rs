//! Truncated Laurent series at the origin with coefficients in a quadratic
//! extension. Every series records the highest exponent it knows exactly.

use crate::polyalg::{local_series, AlgError, Point, RatFunc, Var};

use super::qext::QExt;

#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    /// Exponent of `c[0]`; all coefficients below it vanish.
    pub lo: i64,
    pub c: Vec<QExt>,
    /// Highest exponent known exactly (may exceed `lo + c.len() - 1`,
    /// in which case the tail is zero).
    pub hi: i64,
}

impl Series {
    pub fn zero(hi: i64) -> Series {
        Series { lo: hi + 1, c: Vec::new(), hi }
    }

    /// Expansion of a rational function in `z` about `0`, exact through
    /// exponent `hi`.
    pub fn of(f: &RatFunc, hi: i64) -> Result<Series, AlgError> {
        if f.is_zero() {
            return Ok(Series::zero(hi));
        }
        let probe = local_series(f, &Var::z(), &Point::zero(), 1)?;
        let v = probe.valuation;
        let len = if hi >= v { (hi - v + 1) as usize } else { 0 };
        let s = local_series(f, &Var::z(), &Point::zero(), len.max(1))?;
        let c = s.coeffs.into_iter().take(len).map(QExt::rational).collect();
        Ok(Series { lo: v, c, hi })
    }

    /// Finite Laurent polynomial from `(exponent, coefficient)` pairs.
    pub fn from_terms(terms: &[(i64, QExt)], hi: i64) -> Series {
        let mut s = Series::zero(hi);
        for (e, c) in terms {
            s.add_at(*e, c);
        }
        s
    }

    pub fn coeff(&self, k: i64) -> QExt {
        assert!(k <= self.hi, "coefficient {k} beyond known precision {}", self.hi);
        if k < self.lo {
            return QExt::zero();
        }
        self.c.get((k - self.lo) as usize).cloned().unwrap_or_else(QExt::zero)
    }

    fn add_at(&mut self, k: i64, v: &QExt) {
        if k > self.hi || v.is_zero() {
            return;
        }
        if self.c.is_empty() {
            self.lo = k;
        }
        if k < self.lo {
            let mut front = vec![QExt::zero(); (self.lo - k) as usize];
            front.append(&mut self.c);
            self.c = front;
            self.lo = k;
        }
        let i = (k - self.lo) as usize;
        if i >= self.c.len() {
            self.c.resize(i + 1, QExt::zero());
        }
        self.c[i] = &self.c[i] + v;
    }

    /// Exponent of the first nonzero coefficient, if any is known.
    pub fn valuation(&self) -> Option<i64> {
        self.c.iter().position(|x| !x.is_zero()).map(|i| self.lo + i as i64)
    }

    /// `deg(f, 0)` in the sense of pole order; `None` for a series that is
    /// zero through its precision.
    pub fn degree(&self) -> Option<i64> {
        self.valuation().map(|v| -v)
    }

    pub fn leading(&self) -> Option<QExt> {
        self.valuation().map(|v| self.coeff(v))
    }

    pub fn add(&self, o: &Series) -> Series {
        let mut s = Series::zero(self.hi.min(o.hi));
        for (i, x) in self.c.iter().enumerate() {
            s.add_at(self.lo + i as i64, x);
        }
        for (i, x) in o.c.iter().enumerate() {
            s.add_at(o.lo + i as i64, x);
        }
        s
    }

    pub fn scale(&self, k: &QExt) -> Series {
        let mut s = Series::zero(self.hi);
        for (i, x) in self.c.iter().enumerate() {
            s.add_at(self.lo + i as i64, &(x * k));
        }
        s
    }

    pub fn mul(&self, o: &Series) -> Series {
        let va = self.valuation().unwrap_or(self.hi + 1);
        let vb = o.valuation().unwrap_or(o.hi + 1);
        let hi = (self.hi + vb).min(o.hi + va);
        let mut s = Series::zero(hi);
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let ei = self.lo + i as i64;
            for (j, y) in o.c.iter().enumerate() {
                let e = ei + o.lo + j as i64;
                if e > hi {
                    break;
                }
                if !y.is_zero() {
                    s.add_at(e, &(x * y));
                }
            }
        }
        s
    }

    pub fn derivative(&self) -> Series {
        let mut s = Series::zero(self.hi - 1);
        for (i, x) in self.c.iter().enumerate() {
            let e = self.lo + i as i64;
            if e != 0 {
                s.add_at(e - 1, &x.scale(&RatFunc::int(e)));
            }
        }
        s
    }

    /// `f(y^2)` as a series in `y`.
    pub fn compose_square(&self) -> Series {
        let mut s = Series::zero(2 * self.hi + 1);
        for (i, x) in self.c.iter().enumerate() {
            s.add_at(2 * (self.lo + i as i64), x);
        }
        s
    }

    /// Multiplication by `y^k`.
    pub fn shift(&self, k: i64) -> Series {
        Series {
            lo: self.lo + k,
            c: self.c.clone(),
            hi: self.hi + k,
        }
    }
}

/// Local data `(p, q)` of an operator at the origin.
#[derive(Clone, Debug)]
pub struct LocalOp {
    pub p: Series,
    pub q: Series,
}

impl LocalOp {
    /// `e^{-r} A e^{r}` with `r' = rp`.
    pub fn sandwich(&self, rp: &Series) -> LocalOp {
        let two = QExt::int(2);
        let p = self.p.add(&rp.scale(&two));
        let q = self.q.add(&self.p.mul(rp)).add(&rp.mul(rp)).add(&rp.derivative());
        LocalOp { p, q }
    }

    /// `z = y^2`: `p -> 2y p(y^2) - 1/y`, `q -> 4 y^2 q(y^2)`.
    pub fn quadratic(&self) -> LocalOp {
        let p = self.p.compose_square().shift(1).scale(&QExt::int(2));
        let p = p.add(&Series::from_terms(&[(-1, QExt::int(-1))], p.hi));
        let q = self.q.compose_square().shift(2).scale(&QExt::int(4));
        LocalOp { p, q }
    }
}
