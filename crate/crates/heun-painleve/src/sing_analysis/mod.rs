//! Singular points of `d^2 + p d + q`: rank, rounded and absolute rank,
//! indices, sandwich transforms, formal solutions, Fuchs relation.

pub mod frobenius;
pub mod ground;
pub mod qext;
pub mod series;
pub mod transform;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::polyalg::{laurent, AlgError, Genericity, MPoly, Point, Rat, RatFunc, Var};

pub use frobenius::{frobenius_attempt, is_nonlogarithmic, SeriesCase, SeriesOutcome};
pub use ground::{reduce_at, thome, thome_residual_valuation, FormalSolution, Reduction, SolutionKind};
pub use qext::QExt;
pub use series::{LocalOp, Series};
pub use transform::{
    affine, change_of_variable, localize, moebius, quadratic_substitution, sandwich_exp, sandwich_general, sandwich_power, Step,
    TransformRecord,
};

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum SingError {
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error("absolute rank below two; ground with a power sandwich instead")]
    RankBelowTwo,
    #[error("branch needs the square root of {0}, which is not rational")]
    IrrationalBranch(String),
    #[error("singular point is not Fuchsian")]
    NotFuchsian,
    #[error("index difference {0} is not an integer")]
    NonIntegerIndexDifference(String),
    #[error("denominator factor {0} has no supplied linear factorization")]
    UnfactoredDenominator(String),
    #[error("sandwich order {0} out of range")]
    InvalidOrder(i64),
    #[error("reduction did not terminate within {0} steps")]
    IterationBound(usize),
    #[error("the point reduces to a Fuchsian one; use the Frobenius method")]
    ReducesToFuchsian,
}

/// Half-integer stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct HalfInt(pub i64);

impl HalfInt {
    pub fn int(n: i64) -> HalfInt {
        HalfInt(2 * n)
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn ceil(self) -> i64 {
        self.0.div_euclid(2) + self.0.rem_euclid(2)
    }

    pub fn to_rat(self) -> Rat {
        Rat::new(self.0.into(), 2.into())
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// `d^2 + p d + q`. `hints` lists finite points known to be candidates for
/// singularities (typically roots of a factored leading coefficient).
#[derive(Clone, Debug)]
pub struct PrincipalOperator {
    pub p: RatFunc,
    pub q: RatFunc,
    pub hints: Vec<RatFunc>,
}

impl PartialEq for PrincipalOperator {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && self.q == o.q
    }
}

impl PrincipalOperator {
    pub fn new(p: RatFunc, q: RatFunc) -> Self {
        PrincipalOperator { p, q, hints: Vec::new() }
    }

    pub fn with_hints(mut self, hints: Vec<RatFunc>) -> Self {
        self.hints = hints;
        self
    }

    /// `sigma d^2 + tau d + eta` divided by `sigma`.
    pub fn from_coefficients(sigma: &RatFunc, tau: &RatFunc, eta: &RatFunc) -> Result<Self, AlgError> {
        Ok(PrincipalOperator::new(tau.checked_div(sigma)?, eta.checked_div(sigma)?))
    }

    /// Local series of `p` and `q` at the origin of the localized operator,
    /// exact through exponent `hi`.
    pub fn local_op(&self, site: &Point, hi: i64) -> Result<LocalOp, AlgError> {
        let l = localize(self, site);
        Ok(LocalOp {
            p: Series::of(&l.p, hi)?,
            q: Series::of(&l.q, hi)?,
        })
    }
}

fn check_constant(c: &QExt, mode: Genericity) -> Result<(), AlgError> {
    if mode == Genericity::Strict {
        let ok = c.as_rational().map(|r| r.is_constant()).unwrap_or(false);
        if !ok {
            return Err(AlgError::UndecidableLeadingCoefficient(c.to_string()));
        }
    }
    Ok(())
}

/// Rank at the origin from local series (exact through exponent 0).
pub fn local_rank(op: &LocalOp, mode: Genericity) -> Result<HalfInt, AlgError> {
    let dp = op.p.degree();
    let dq = op.q.degree();
    if let Some(v) = op.p.leading() {
        check_constant(&v, mode)?;
    }
    if let Some(v) = op.q.leading() {
        check_constant(&v, mode)?;
    }
    if dp.unwrap_or(i64::MIN) <= 0 && dq.unwrap_or(i64::MIN) <= 0 {
        return Ok(HalfInt(0));
    }
    if dp.unwrap_or(i64::MIN) <= 1 && dq.unwrap_or(i64::MIN) <= 1 {
        let shifted = &op.p.coeff(-1) - &QExt::from_rat(&Rat::new(1.into(), 2.into()));
        check_constant(&shifted, mode)?;
        if shifted.is_zero() {
            return Ok(HalfInt(1));
        }
    }
    let twice = [dp.map(|d| 2 * d), dq, Some(2)].into_iter().flatten().max().unwrap();
    Ok(HalfInt(twice))
}

/// Rank of `a` at `site`.
pub fn rank(a: &PrincipalOperator, site: &Point, mode: Genericity) -> Result<HalfInt, AlgError> {
    local_rank(&a.local_op(site, 0)?, mode)
}

pub fn rounded_rank(a: &PrincipalOperator, site: &Point, mode: Genericity) -> Result<i64, AlgError> {
    Ok(rank(a, site, mode)?.ceil())
}

#[derive(Clone, Debug)]
pub struct SingularityReport {
    pub location: Point,
    pub rank: HalfInt,
    pub rounded_rank: i64,
    pub absolute_rank: Option<HalfInt>,
    pub indices: Option<(QExt, QExt)>,
    pub fuchsian: bool,
    pub grounded: bool,
}

impl SingularityReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "location": self.location.to_string(),
            "rank": self.rank.to_string(),
            "rounded_rank": self.rounded_rank,
            "absolute_rank": self.absolute_rank.map(|r| r.to_string()),
            "indices": self.indices.as_ref().map(|(a, b)| vec![a.to_string(), b.to_string()]),
            "fuchsian": self.fuchsian,
            "grounded": self.grounded,
        })
    }
}

fn linear_factor(c: &RatFunc) -> MPoly {
    // den(c) z - num(c)
    let z = MPoly::var(&Var::z());
    &(&z * c.den()) - c.num()
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut i = BigInt::one();
    while &i * &i <= n {
        if (&n % &i).is_zero() {
            out.push(i.clone());
            let j = &n / &i;
            if j != i {
                out.push(j);
            }
        }
        i += 1;
    }
    out
}

/// Rational roots of a parameter-free polynomial in `z`.
fn rational_roots(f: &MPoly) -> Vec<Rat> {
    let zv = Var::z();
    let coeffs: Vec<Rat> = f.coeffs_in(&zv).iter().map(|c| c.constant_term()).collect();
    let lcm_den = coeffs.iter().fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * Rat::from_integer(lcm_den.clone())).to_integer()).collect();
    let mut roots = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero());
    let Some(low) = low else { return roots };
    if low > 0 {
        roots.push(Rat::zero());
    }
    let a0 = &ints[low];
    let an = ints.last().unwrap();
    for p in divisors(a0) {
        for q in divisors(an) {
            for s in [Rat::new(p.clone(), q.clone()), -Rat::new(p.clone(), q.clone())] {
                if !roots.contains(&s) && f.eval_var(&zv, &s).is_zero() {
                    roots.push(s);
                }
            }
        }
    }
    roots
}

/// Finite candidate points: the hints plus rational roots of what remains
/// of the denominators. A leftover factor that is not linear over the
/// rationals is reported.
pub fn candidate_points(a: &PrincipalOperator) -> Result<Vec<RatFunc>, SingError> {
    let zv = Var::z();
    let mut rest = crate::polyalg::gcd::lcm(a.p.den(), a.q.den());
    let mut pts: Vec<RatFunc> = Vec::new();
    let divide_out = |c: &RatFunc, rest: &mut MPoly| {
        let f = linear_factor(c);
        while let Some(qt) = rest.exact_div(&f) {
            if rest.degree_in(&zv).unwrap_or(0) == 0 {
                break;
            }
            *rest = qt;
        }
    };
    for h in &a.hints {
        if h.depends_on(&zv) {
            continue;
        }
        divide_out(h, &mut rest);
        if !pts.contains(h) {
            pts.push(h.clone());
        }
    }
    if rest.depends_on(&zv) {
        let free = rest.vars().iter().all(|v| *v == zv);
        if free {
            for r in rational_roots(&rest) {
                let c = RatFunc::constant(r);
                divide_out(&c, &mut rest);
                if !pts.contains(&c) {
                    pts.push(c);
                }
            }
        }
        if rest.depends_on(&zv) {
            return Err(SingError::UnfactoredDenominator(rest.to_string()));
        }
    }
    Ok(pts)
}

/// Is `site` singular? Uses the regularity bounds on `p` and `q`.
pub fn is_singular(a: &PrincipalOperator, site: &Point) -> Result<bool, AlgError> {
    let l = a.local_op(site, 0)?;
    Ok(l.p.degree().unwrap_or(i64::MIN) > 0 || l.q.degree().unwrap_or(i64::MIN) > 0)
}

/// Every singular point with its rank; infinity is always examined.
pub fn find_singularities(a: &PrincipalOperator, mode: Genericity) -> Result<Vec<SingularityReport>, SingError> {
    let mut out = Vec::new();
    let mut sites: Vec<Point> = candidate_points(a)?.into_iter().map(Point::Finite).collect();
    sites.push(Point::Infinity);
    for site in sites {
        let l = a.local_op(&site, 0)?;
        let r = local_rank(&l, mode)?;
        if r.0 == 0 {
            continue;
        }
        let dp = l.p.degree().unwrap_or(i64::MIN);
        let dq = l.q.degree().unwrap_or(i64::MIN);
        out.push(SingularityReport {
            location: site,
            rank: r,
            rounded_rank: r.ceil(),
            absolute_rank: None,
            indices: None,
            fuchsian: r.ceil() == 1,
            grounded: dp >= dq,
        });
    }
    Ok(out)
}

/// Singularities with absolute ranks and indices.
pub fn analyze(a: &PrincipalOperator, mode: Genericity) -> Result<Vec<SingularityReport>, SingError> {
    let mut reps = find_singularities(a, mode)?;
    for r in reps.iter_mut() {
        let red = ground::local_reduction(&a.local_op(&r.location, ground::working_precision(r.rank))?, mode)?;
        r.absolute_rank = Some(red.absolute_rank());
        r.indices = Some(red.indices()?);
    }
    Ok(reps)
}

/// Absolute rank at `site`, as computed by the reduction algorithm. Points
/// that reduce to rounded rank at most one count as one.
pub fn absolute_rank(a: &PrincipalOperator, site: &Point, mode: Genericity) -> Result<HalfInt, SingError> {
    let r = rank(a, site, mode)?;
    let red = ground::local_reduction(&a.local_op(site, ground::working_precision(r))?, mode)?;
    Ok(red.absolute_rank())
}

/// Indices `(rho1, rho2)` at `site`: indicial roots at Fuchsian points,
/// Thome indices otherwise.
pub fn indices(a: &PrincipalOperator, site: &Point, mode: Genericity) -> Result<(QExt, QExt), SingError> {
    let r = rank(a, site, mode)?;
    let red = ground::local_reduction(&a.local_op(site, ground::working_precision(r))?, mode)?;
    red.indices()
}

/// Coefficient `p_{z0,-1}` of the Laurent expansion at `site` (for infinity,
/// the coefficient of `z^{-1}`).
pub fn residue_of_p(a: &PrincipalOperator, site: &Point) -> Result<RatFunc, AlgError> {
    if a.p.is_zero() {
        return Ok(RatFunc::zero());
    }
    Ok(laurent(&a.p, &Var::z(), site, -1, -1)?.coeff(-1))
}

#[derive(Clone, Debug)]
pub struct FuchsRelation {
    pub lhs: RatFunc,
    pub rhs: RatFunc,
    pub holds: bool,
}

/// Sum of all indices against the sum of absolute ranks minus two.
pub fn fuchs_relation_check(a: &PrincipalOperator, mode: Genericity) -> Result<FuchsRelation, SingError> {
    let reps = analyze(a, mode)?;
    let mut lhs = QExt::zero();
    let mut rhs = RatFunc::int(-2);
    for r in &reps {
        let (x, y) = r.indices.as_ref().expect("analyzed");
        lhs = &(&lhs + x) + y;
        rhs = &rhs + &RatFunc::constant(r.absolute_rank.expect("analyzed").to_rat());
    }
    let lhs = lhs.as_rational().cloned().ok_or_else(|| SingError::IrrationalBranch(lhs.to_string()))?;
    let holds = lhs == rhs;
    Ok(FuchsRelation { lhs, rhs, holds })
}

/// Index-sum identity at one point: `-p_{-1} + Rk` (finite) or
/// `p_{inf,-1} - 2 + Rk` (infinity).
pub fn index_sum_prediction(a: &PrincipalOperator, site: &Point, rk: HalfInt) -> Result<RatFunc, AlgError> {
    let res = residue_of_p(a, site)?;
    let rk = RatFunc::constant(rk.to_rat());
    Ok(match site {
        Point::Finite(_) => &rk - &res,
        Point::Infinity => &(&res - &RatFunc::int(2)) + &rk,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> RatFunc {
        RatFunc::var(&Var::z())
    }

    fn g() -> Genericity {
        Genericity::Generic
    }

    #[test]
    fn laplace_and_airy() {
        let lap = PrincipalOperator::new(RatFunc::zero(), RatFunc::zero());
        let s = find_singularities(&lap, g()).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s[0].location.is_infinity());
        assert_eq!(s[0].rank, HalfInt(2));
        let airy = PrincipalOperator::new(RatFunc::zero(), z());
        let s = find_singularities(&airy, g()).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].rank, HalfInt(5));
        assert_eq!(s[0].rounded_rank, 3);
    }

    #[test]
    fn inverse_z_drift() {
        let a = PrincipalOperator::new(z().inv().unwrap(), RatFunc::zero());
        let s = find_singularities(&a, g()).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s[0].fuchsian);
        assert_eq!(s[0].location, Point::zero());
        assert!(s[1].location.is_infinity());
    }

    #[test]
    fn rank_examples() {
        let half = PrincipalOperator::new(&RatFunc::ratio(1, 2) / &z(), z().inv().unwrap());
        assert_eq!(rank(&half, &Point::zero(), g()).unwrap(), HalfInt(1));
        let t = RatFunc::var(&Var::t());
        let two = PrincipalOperator::new(&t / &z().pow(2), RatFunc::zero());
        assert_eq!(rank(&two, &Point::zero(), g()).unwrap(), HalfInt(4));
        assert!(matches!(
            rank(&two, &Point::zero(), Genericity::Strict),
            Err(AlgError::UndecidableLeadingCoefficient(_))
        ));
    }

    #[test]
    fn euler_indices_and_power_shift() {
        // z d^2 + c d in principal form
        let c = RatFunc::named("c");
        let a = PrincipalOperator::new(&c / &z(), RatFunc::zero());
        let (r1, r2) = indices(&a, &Point::zero(), g()).unwrap();
        let mut got = [r1.to_string(), r2.to_string()];
        got.sort();
        let mut want = [RatFunc::zero().to_string(), (&RatFunc::one() - &c).to_string()];
        want.sort();
        assert_eq!(got, want);
        let k = RatFunc::named("k");
        let b = sandwich_power(&a, &Point::zero(), &k);
        let (s1, s2) = indices(&b, &Point::zero(), g()).unwrap();
        assert_eq!(&s1 + &s2, QExt::rational(&(&(&RatFunc::one() - &c) + &k) + &k));
        assert_eq!(&s1 * &s2, QExt::rational(&k * &(&(&RatFunc::one() - &c) + &k)));
    }

    #[test]
    fn hypergeometric_fuchs_relation() {
        let (a, b, c) = (RatFunc::named("a"), RatFunc::named("b"), RatFunc::named("c"));
        let sigma = &z() * &(&RatFunc::one() - &z());
        let tau = &c - &(&(&(&a + &b) + &RatFunc::one()) * &z());
        let eta = -&(&a * &b);
        let op = PrincipalOperator::from_coefficients(&sigma, &tau, &eta).unwrap();
        let f = fuchs_relation_check(&op, g()).unwrap();
        assert!(f.holds, "{} vs {}", f.lhs, f.rhs);
        assert_eq!(f.lhs, RatFunc::one());
        let reps = analyze(&op, g()).unwrap();
        assert_eq!(reps.len(), 3);
        let inf = reps.iter().find(|r| r.location.is_infinity()).unwrap();
        let (x, y) = inf.indices.clone().unwrap();
        assert_eq!(&x + &y, QExt::rational(&a + &b));
        assert_eq!(&x * &y, QExt::rational(&a * &b));
    }

    #[test]
    fn laplace_fuchs_relation() {
        let lap = PrincipalOperator::new(RatFunc::zero(), RatFunc::zero());
        let f = fuchs_relation_check(&lap, g()).unwrap();
        assert!(f.holds);
        assert_eq!(f.lhs, RatFunc::int(-1));
    }

    #[test]
    fn unfactored_denominator_is_reported() {
        let t = RatFunc::var(&Var::t());
        let a = PrincipalOperator::new(&RatFunc::one() / &(&z().pow(2) - &t), RatFunc::zero());
        assert!(matches!(candidate_points(&a), Err(SingError::UnfactoredDenominator(_))));
        let b = a.clone().with_hints(vec![]);
        let irr = PrincipalOperator::new(&RatFunc::one() / &(&z().pow(2) + &RatFunc::one()), RatFunc::zero());
        assert!(candidate_points(&irr).is_err());
        let _ = b;
    }

    #[test]
    fn rational_root_search() {
        let a = PrincipalOperator::new(
            &RatFunc::one() / &(&(&z().scale(&Rat::from_integer(2.into())) - &RatFunc::int(3)) * &z()),
            RatFunc::zero(),
        );
        let pts = candidate_points(&a).unwrap();
        assert_eq!(pts.len(), 2);
        assert!(pts.contains(&RatFunc::ratio(3, 2)));
    }
}
