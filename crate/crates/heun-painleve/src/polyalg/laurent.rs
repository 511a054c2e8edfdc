use std::collections::BTreeMap;
use std::fmt;

use super::mpoly::MPoly;
use super::ratfunc::RatFunc;
use super::var::Var;
use super::AlgError;

/// Expansion point: a finite center (free of the expansion variable; may
/// involve parameters such as `t` or `lambda`) or infinity.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Point {
    Finite(RatFunc),
    Infinity,
}

impl Point {
    pub fn zero() -> Point {
        Point::Finite(RatFunc::zero())
    }

    pub fn at(c: RatFunc) -> Point {
        Point::Finite(c)
    }

    pub fn int(n: i64) -> Point {
        Point::Finite(RatFunc::int(n))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(c) => write!(f, "{c}"),
            Point::Infinity => f.write_str("inf"),
        }
    }
}

/// How to treat a coefficient that is nonzero as a rational function but
/// depends on symbols, when deciding a degree.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Genericity {
    /// Refuse: only parameter-free coefficients certify nonvanishing.
    Strict,
    /// Symbols are independent indeterminates, so a nonzero rational
    /// function counts as nonzero.
    Generic,
}

/// Local series `f = sum_i coeffs[i] * x^(valuation + i)` in the local
/// parameter `x = z - z0` (finite) or `x = 1/z` (infinity).
#[derive(Clone, Debug)]
pub struct LocalSeries {
    pub valuation: i64,
    pub coeffs: Vec<RatFunc>,
}

/// Laurent coefficients of a function at a point; at infinity `coeffs[k]`
/// multiplies `z^k`, at a finite point it multiplies `(z - z0)^k`.
#[derive(Clone, Debug)]
pub struct LaurentExpansion {
    pub center: Point,
    pub coeffs: BTreeMap<i64, RatFunc>,
    pub k_min: i64,
    pub k_max: i64,
    /// All coefficients below `k_min` vanish (finite point), or above
    /// `k_max` (infinity).
    pub exact_below: bool,
}

impl LaurentExpansion {
    pub fn coeff(&self, k: i64) -> RatFunc {
        self.coeffs.get(&k).cloned().unwrap_or_else(RatFunc::zero)
    }
}

/// Coefficients of `p(c + x)` as a polynomial in `x`.
fn taylor_shift(p: &MPoly, z: &Var, c: &RatFunc) -> Vec<RatFunc> {
    let coeffs: Vec<RatFunc> = p.coeffs_in(z).into_iter().map(RatFunc::from_poly).collect();
    if coeffs.is_empty() {
        return Vec::new();
    }
    if c.is_zero() {
        return coeffs;
    }
    let mut acc: Vec<RatFunc> = Vec::new();
    for a in coeffs.iter().rev() {
        // acc := acc * (c + x) + a
        let mut next = vec![RatFunc::zero(); acc.len() + 1];
        for (i, b) in acc.iter().enumerate() {
            next[i] = &next[i] + &(b * c);
            next[i + 1] = &next[i + 1] + b;
        }
        next[0] = &next[0] + a;
        acc = next;
    }
    acc
}

/// `f` in the local parameter as `x^shift * num(x) / den(x)`.
fn local_rational(f: &RatFunc, z: &Var, point: &Point) -> (i64, Vec<RatFunc>, Vec<RatFunc>) {
    match point {
        Point::Finite(c) => (0, taylor_shift(f.num(), z, c), taylor_shift(f.den(), z, c)),
        Point::Infinity => {
            let mut n: Vec<RatFunc> = f.num().coeffs_in(z).into_iter().map(RatFunc::from_poly).collect();
            let mut d: Vec<RatFunc> = f.den().coeffs_in(z).into_iter().map(RatFunc::from_poly).collect();
            let dn = n.len() as i64 - 1;
            let dd = d.len() as i64 - 1;
            n.reverse();
            d.reverse();
            (dd - dn, n, d)
        }
    }
}

/// First `len` coefficients of the local series, starting at the valuation.
pub fn local_series(f: &RatFunc, z: &Var, point: &Point, len: usize) -> Result<LocalSeries, AlgError> {
    if f.is_zero() {
        return Err(AlgError::ZeroFunction);
    }
    if let Point::Finite(c) = point {
        if c.depends_on(z) {
            return Err(AlgError::ZeroDenominatorAtLocalization);
        }
    }
    let (shift, num, den) = local_rational(f, z, point);
    let vn = num.iter().position(|c| !c.is_zero()).ok_or(AlgError::ZeroFunction)?;
    let vd = den
        .iter()
        .position(|c| !c.is_zero())
        .ok_or(AlgError::ZeroDenominatorAtLocalization)?;
    let n = &num[vn..];
    let d = &den[vd..];
    let d0inv = d[0].inv()?;
    let mut s: Vec<RatFunc> = Vec::with_capacity(len);
    for k in 0..len {
        let mut acc = n.get(k).cloned().unwrap_or_else(RatFunc::zero);
        for j in 1..=k.min(d.len() - 1) {
            if d[j].is_zero() || s[k - j].is_zero() {
                continue;
            }
            acc = &acc - &(&d[j] * &s[k - j]);
        }
        s.push(&acc * &d0inv);
    }
    Ok(LocalSeries {
        valuation: shift + vn as i64 - vd as i64,
        coeffs: s,
    })
}

/// Laurent coefficients for `k` in `[k_min, k_max]`.
pub fn laurent(f: &RatFunc, z: &Var, point: &Point, k_min: i64, k_max: i64) -> Result<LaurentExpansion, AlgError> {
    let mut coeffs = BTreeMap::new();
    if f.is_zero() {
        return Ok(LaurentExpansion {
            center: point.clone(),
            coeffs,
            k_min,
            k_max,
            exact_below: true,
        });
    }
    let probe = local_series(f, z, point, 1)?;
    let v = probe.valuation;
    // local exponents needed: finite k itself, infinity -k
    let (lo, hi) = match point {
        Point::Finite(_) => (k_min, k_max),
        Point::Infinity => (-k_max, -k_min),
    };
    let len = if hi >= v { (hi - v + 1) as usize } else { 0 };
    let series = if len > 0 {
        local_series(f, z, point, len)?
    } else {
        probe
    };
    for e in lo.max(v)..=hi {
        let idx = (e - v) as usize;
        if let Some(c) = series.coeffs.get(idx) {
            if !c.is_zero() {
                let k = match point {
                    Point::Finite(_) => e,
                    Point::Infinity => -e,
                };
                coeffs.insert(k, c.clone());
            }
        }
    }
    Ok(LaurentExpansion {
        center: point.clone(),
        coeffs,
        k_min,
        k_max,
        exact_below: v >= lo,
    })
}

/// Degree of the singularity: `-min k` of the nonzero Laurent coefficients
/// at a finite point, `max k` at infinity. Both equal minus the valuation in
/// the local parameter.
pub fn degree_at(f: &RatFunc, z: &Var, point: &Point, mode: Genericity) -> Result<i64, AlgError> {
    let s = local_series(f, z, point, 1)?;
    if mode == Genericity::Strict && !s.coeffs[0].is_constant() {
        return Err(AlgError::UndecidableLeadingCoefficient(s.coeffs[0].to_string()));
    }
    Ok(-s.valuation)
}

/// Degree with the convention `deg(0) = -inf`, reported as `None`.
pub fn degree_or_none(f: &RatFunc, z: &Var, point: &Point, mode: Genericity) -> Result<Option<i64>, AlgError> {
    if f.is_zero() {
        return Ok(None);
    }
    degree_at(f, z, point, mode).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> RatFunc {
        RatFunc::var(&Var::z())
    }

    #[test]
    fn geometric_series_at_zero() {
        // 1/(z(z-1)) = -1/z - 1 - z - ...
        let f = &RatFunc::one() / &(&z() * &(&z() - &RatFunc::one()));
        let e = laurent(&f, &Var::z(), &Point::zero(), -1, 1).unwrap();
        for k in -1..=1 {
            assert_eq!(e.coeff(k), RatFunc::int(-1));
        }
    }

    #[test]
    fn polynomial_at_infinity() {
        let e = laurent(&z(), &Var::z(), &Point::Infinity, 0, 1).unwrap();
        assert_eq!(e.coeff(1), RatFunc::one());
        assert!(e.coeff(0).is_zero());
        let f = &z().pow(3) + &RatFunc::one();
        assert_eq!(degree_at(&f, &Var::z(), &Point::Infinity, Genericity::Strict).unwrap(), 3);
    }

    #[test]
    fn residue_at_symbolic_center() {
        let c = RatFunc::named("c");
        let l = RatFunc::var(&Var::lambda());
        let f = &c / &(&z() - &l);
        let e = laurent(&f, &Var::z(), &Point::at(l.clone()), -1, 0).unwrap();
        assert_eq!(e.coeff(-1), c);
        assert!(e.coeff(0).is_zero());
    }

    #[test]
    fn degrees_at_finite_points() {
        let f = &RatFunc::one() / &z().pow(2);
        assert_eq!(degree_at(&f, &Var::z(), &Point::zero(), Genericity::Strict).unwrap(), 2);
        let g = &(&z() - &RatFunc::one()) / &(&z().pow(2) * &(&z() - &RatFunc::int(3)));
        assert_eq!(degree_at(&g, &Var::z(), &Point::zero(), Genericity::Strict).unwrap(), 2);
    }

    #[test]
    fn parameter_leading_coefficient() {
        let f = &RatFunc::named("a") / &z();
        let r = degree_at(&f, &Var::z(), &Point::zero(), Genericity::Strict);
        assert!(matches!(r, Err(AlgError::UndecidableLeadingCoefficient(_))));
        assert_eq!(degree_at(&f, &Var::z(), &Point::zero(), Genericity::Generic).unwrap(), 1);
    }
}
