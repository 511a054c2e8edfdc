//! Reduction of an irregular point to grounded form, absolute rank, and
//! Thome solutions.
//!
//! All work happens on local series at the origin. Transformations are
//! sandwiches with `r' = sum w_k x^{k-1}` in the local parameter `x`:
//! - I (rank `m - 1/2`): `r' = -1/2 sum_{j=-m+1}^{-1} p_j x^j`;
//! - II (rank `m`, `p_{-m}^2 != 4 q_{-2m}`): `w_{-m+1}` solves
//!   `w^2 + p_{-m} w + q_{-2m} = 0`, the rest follow linearly;
//! - III (rank `m`, `p_{-m}^2 = 4 q_{-2m}`): `r' = -(p_{-m}/2) x^{-m}`.

use std::collections::BTreeMap;

use crate::polyalg::{local_series, AlgError, Genericity, Point, Rat, RatFunc, Var};

use super::qext::QExt;
use super::series::{LocalOp, Series};
use super::transform::{localize, quadratic_substitution, sandwich_general, Step, TransformRecord};
use super::{check_constant, local_rank, rank, HalfInt, PrincipalOperator, SingError};

/// Series precision sufficient for the reduction at a point of this rank.
pub fn working_precision(r: HalfInt) -> i64 {
    let m = r.ceil().max(1);
    2 * m * m + 4 * m + 6
}

#[derive(Clone, Debug)]
pub struct LocalStep {
    pub label: &'static str,
    /// Terms `(e, w)` of `r' = sum w x^e`.
    pub rp: Vec<(i64, QExt)>,
}

#[derive(Clone, Debug)]
pub struct Branch {
    pub rp: Vec<(i64, QExt)>,
    pub op: LocalOp,
}

#[derive(Clone, Debug)]
pub enum Outcome {
    /// Rounded rank at most one after the steps.
    Fuchsian { op: LocalOp, rank: HalfInt },
    /// Grounded integer rank `m >= 2`, two branches.
    Integer { m: i64, branches: Vec<Branch> },
    /// Half-integer rank `>= 3/2`; `quad` is the reduction of the
    /// quadratic substitution of `op`.
    HalfInteger { twice: i64, op: LocalOp, quad: Box<LocalReduction> },
}

#[derive(Clone, Debug)]
pub struct LocalReduction {
    pub pre: Vec<LocalStep>,
    pub outcome: Outcome,
}

fn rp_series(terms: &[(i64, QExt)], hi: i64) -> Series {
    Series::from_terms(terms, hi)
}

fn log_coefficient(terms: &[(i64, QExt)]) -> QExt {
    terms.iter().filter(|(e, _)| *e == -1).fold(QExt::zero(), |acc, (_, w)| &acc + w)
}

fn indicial_roots(op: &LocalOp) -> (QExt, QExt) {
    let p1 = op.p.coeff(-1);
    let q2 = op.q.coeff(-2);
    let b = &p1 - &QExt::one();
    match (b.as_rational(), q2.as_rational()) {
        (Some(b), Some(c)) => QExt::quadratic_roots(b, c),
        _ => panic!("indicial coefficients outside the base field"),
    }
}

impl LocalReduction {
    pub fn absolute_rank(&self) -> HalfInt {
        match &self.outcome {
            Outcome::Fuchsian { .. } => HalfInt(2),
            Outcome::Integer { m, .. } => HalfInt::int(*m),
            Outcome::HalfInteger { twice, .. } => HalfInt(*twice),
        }
    }

    pub fn pre_log(&self) -> QExt {
        self.pre.iter().fold(QExt::zero(), |acc, s| &acc + &log_coefficient(&s.rp))
    }

    pub fn indices(&self) -> Result<(QExt, QExt), SingError> {
        let shift = self.pre_log();
        match &self.outcome {
            Outcome::Fuchsian { op, .. } => {
                let (a, b) = indicial_roots(op);
                Ok((&a + &shift, &b + &shift))
            }
            Outcome::Integer { branches, .. } => {
                let i1 = &shift + &log_coefficient(&branches[0].rp);
                let i2 = &shift + &log_coefficient(&branches[1].rp);
                Ok((i1, i2))
            }
            Outcome::HalfInteger { quad, .. } => {
                let (y1, y2) = quad.indices()?;
                let half = RatFunc::ratio(1, 2);
                Ok((&shift + &y1.scale(&half), &shift + &y2.scale(&half)))
            }
        }
    }
}

/// The reduction algorithm on local data at the origin.
pub fn local_reduction(op: &LocalOp, mode: Genericity) -> Result<LocalReduction, SingError> {
    let r0 = local_rank(op, mode)?;
    let bound = (r0.0.max(2)) as usize;
    let mut cur = op.clone();
    let mut pre = Vec::new();
    for _ in 0..=bound {
        let r = local_rank(&cur, mode)?;
        if r.0 <= 2 {
            return Ok(LocalReduction {
                pre,
                outcome: Outcome::Fuchsian { op: cur, rank: r },
            });
        }
        if !r.is_integer() {
            let m = (r.0 + 1) / 2;
            let half = QExt::from_rat(&Rat::new((-1).into(), 2.into()));
            let terms: Vec<(i64, QExt)> = (-m + 1..=-1)
                .map(|j| (j, &cur.p.coeff(j) * &half))
                .filter(|(_, w)| !w.is_zero())
                .collect();
            let next = cur.sandwich(&rp_series(&terms, cur.p.hi));
            pre.push(LocalStep { label: "I", rp: terms });
            let quad_op = next.quadratic();
            let quad = local_reduction(&quad_op, mode)?;
            return Ok(LocalReduction {
                pre,
                outcome: Outcome::HalfInteger {
                    twice: r.0,
                    op: next,
                    quad: Box::new(quad),
                },
            });
        }
        let m = r.0 / 2;
        let pm = cur.p.coeff(-m);
        let q2m = cur.q.coeff(-2 * m);
        let disc = &(&pm * &pm) - &q2m.scale(&RatFunc::int(4));
        check_constant(&disc, mode)?;
        if disc.is_zero() {
            let terms = vec![(-m, pm.scale(&RatFunc::ratio(-1, 2)))];
            cur = cur.sandwich(&rp_series(&terms, cur.p.hi));
            pre.push(LocalStep { label: "III", rp: terms });
            continue;
        }
        let (b, c) = match (pm.as_rational(), q2m.as_rational()) {
            (Some(b), Some(c)) => (b.clone(), c.clone()),
            _ => panic!("leading coefficients outside the base field"),
        };
        let (r1, r2) = QExt::quadratic_roots(&b, &c);
        let mut branches = Vec::new();
        for w1 in [r1, r2] {
            branches.push(transformation_two(&cur, m, &pm, w1)?);
        }
        // a branch with no work to do comes first
        branches.sort_by_key(|br| br.rp.iter().any(|(_, w)| !w.is_zero()));
        return Ok(LocalReduction {
            pre,
            outcome: Outcome::Integer { m, branches },
        });
    }
    Err(SingError::IterationBound(bound))
}

fn transformation_two(cur: &LocalOp, m: i64, pm: &QExt, w1: QExt) -> Result<Branch, SingError> {
    let denom = &w1.scale(&RatFunc::int(2)) + pm;
    let dinv = denom.inv()?;
    let mut terms = vec![(-m, w1)];
    for j in 1..m + 1 {
        let k = -m + 1 + j;
        if k > 0 {
            break;
        }
        let n = -2 * m + j;
        let trial = cur.sandwich(&rp_series(&terms, cur.p.hi));
        let c = trial.q.coeff(n);
        terms.push((k - 1, &(-&c) * &dinv));
    }
    let op = cur.sandwich(&rp_series(&terms, cur.p.hi));
    for n in -2 * m..-m {
        debug_assert!(op.q.coeff(n).is_zero(), "q coefficient {n} survived");
    }
    terms.retain(|(_, w)| !w.is_zero());
    Ok(Branch { rp: terms, op })
}

/// Result of [`reduce_at`]: one record and operator per branch.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub records: Vec<TransformRecord>,
    pub operators: Vec<PrincipalOperator>,
    pub absolute_rank: HalfInt,
}

fn step_for(site: &Point, e: i64, w: &QExt) -> Result<Step, SingError> {
    let w = w.as_rational().ok_or_else(|| SingError::IrrationalBranch(w.d.to_string()))?;
    Ok(match site {
        Point::Finite(_) if e == -1 => Step::Power {
            site: site.clone(),
            kappa: -w,
        },
        Point::Finite(_) => Step::Exp {
            site: site.clone(),
            kappa: w.clone(),
            order: -e,
        },
        Point::Infinity if e == -1 => Step::Power {
            site: site.clone(),
            kappa: w.clone(),
        },
        Point::Infinity => Step::Exp {
            site: site.clone(),
            kappa: -w,
            order: -e - 2,
        },
    })
}

/// Grounded form (integer absolute rank `>= 2`, both branches) or the
/// half-integer form at `site`.
pub fn reduce_at(a: &PrincipalOperator, site: &Point, mode: Genericity) -> Result<Reduction, SingError> {
    let r = rank(a, site, mode)?;
    let local = a.local_op(site, working_precision(r))?;
    let red = local_reduction(&local, mode)?;
    let mut base = TransformRecord::new();
    for s in &red.pre {
        for (e, w) in &s.rp {
            base.push(step_for(site, *e, w)?);
        }
    }
    let mut records = Vec::new();
    match &red.outcome {
        Outcome::Fuchsian { .. } => return Err(SingError::RankBelowTwo),
        Outcome::HalfInteger { .. } => {
            if site.is_infinity() {
                // restore the 2/x term of the localization: deg(p, inf) <= -2
                base.push(Step::Power { site: Point::Infinity, kappa: RatFunc::one() });
            }
            records.push(base)
        }
        Outcome::Integer { branches, .. } => {
            for br in branches {
                let mut rec = base.clone();
                for (e, w) in &br.rp {
                    rec.push(step_for(site, *e, w)?);
                }
                records.push(rec);
            }
        }
    }
    let operators = records.iter().map(|r| r.replay(a)).collect::<Result<Vec<_>, _>>()?;
    Ok(Reduction {
        records,
        operators,
        absolute_rank: red.absolute_rank(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolutionKind {
    Frobenius,
    Thome,
}

/// Formal solution `exp(sum_k w_k x^k / k) x^index sum_j v_j x^{j*step}` in
/// the local parameter `x` (`z - z0`, or `1/z` at infinity). Keys of
/// `exponential_part` are local exponents; at infinity the key `k`
/// corresponds to `z^{-k}`.
#[derive(Clone, Debug)]
pub struct FormalSolution {
    pub kind: SolutionKind,
    pub location: Point,
    pub exponential_part: BTreeMap<HalfInt, QExt>,
    pub index: QExt,
    pub series: Vec<QExt>,
    pub series_step: HalfInt,
    pub log_partner: bool,
}

impl FormalSolution {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "kind": match self.kind { SolutionKind::Frobenius => "frobenius", SolutionKind::Thome => "thome" },
            "location": self.location.to_string(),
            "exponential_part": self.exponential_part.iter().map(|(k, w)| (k.to_string(), w.to_string())).collect::<BTreeMap<_, _>>(),
            "index": self.index.to_string(),
            "series": self.series.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "series_step": self.series_step.to_string(),
            "log_partner": self.log_partner,
        })
    }
}

/// Power series solution `v_0 = 1` of a local operator whose newest unknown
/// in row `j - m - 1` is `v_j` with coefficient `j p_{-m} + q_{-m-1}`.
pub fn leading_row_series(op: &LocalOp, m: i64, start: i64, n_terms: usize) -> Result<Vec<QExt>, AlgError> {
    let pm = op.p.coeff(-m);
    let ql = op.q.coeff(-m - 1);
    let mut v: Vec<QExt> = vec![QExt::zero(); start as usize];
    v.push(QExt::one());
    for j in (start + 1)..(start + n_terms as i64) {
        let n = j - m - 1;
        let mut rest = QExt::zero();
        for (k, vk) in v.iter().enumerate() {
            let k = k as i64;
            if vk.is_zero() {
                continue;
            }
            if k >= 1 {
                rest = &rest + &(&op.p.coeff(n + 1 - k) * &vk.scale(&RatFunc::int(k)));
            }
            rest = &rest + &(&op.q.coeff(n - k) * vk);
        }
        if n + 2 >= 0 && n + 2 < j {
            let vk = &v[(n + 2) as usize];
            rest = &rest + &vk.scale(&RatFunc::int((n + 2) * (n + 1)));
        }
        let c = &pm.scale(&RatFunc::int(j)) + &ql;
        v.push(&(-&rest) * &c.inv()?);
    }
    Ok(v)
}

fn gather(map: &mut BTreeMap<HalfInt, QExt>, index: &mut QExt, terms: &[(i64, QExt)], halve: bool) {
    for (e, w) in terms {
        let k = e + 1;
        let (key, w) = if halve {
            (HalfInt(k), w.scale(&RatFunc::ratio(1, 2)))
        } else {
            (HalfInt::int(k), w.clone())
        };
        if k == 0 {
            *index = &*index + &w;
        } else {
            let slot = map.entry(key).or_insert_with(QExt::zero);
            *slot = &*slot + &w;
        }
    }
    map.retain(|_, w| !w.is_zero());
}

/// Two Thome solutions at an irregular point, series to `n_terms` terms.
pub fn thome(a: &PrincipalOperator, site: &Point, n_terms: usize, mode: Genericity) -> Result<[FormalSolution; 2], SingError> {
    let r = rank(a, site, mode)?;
    let hi = working_precision(r) + n_terms as i64 + 2 * r.ceil() + 4;
    let local = a.local_op(site, hi)?;
    let red = local_reduction(&local, mode)?;
    let mut base = BTreeMap::new();
    let mut base_index = QExt::zero();
    for s in &red.pre {
        gather(&mut base, &mut base_index, &s.rp, false);
    }
    let (m, branches, halve) = match &red.outcome {
        Outcome::Fuchsian { .. } => return Err(SingError::ReducesToFuchsian),
        Outcome::Integer { m, branches } => (*m, branches.clone(), false),
        Outcome::HalfInteger { quad, .. } => {
            let mut b2 = base.clone();
            let mut i2 = base_index.clone();
            for s in &quad.pre {
                gather(&mut b2, &mut i2, &s.rp, true);
            }
            base = b2;
            base_index = i2;
            match &quad.outcome {
                Outcome::Integer { m, branches } => (*m, branches.clone(), true),
                _ => unreachable!("quadratic substitution of a half-integer rank gives an integer rank"),
            }
        }
    };
    let mut sols = Vec::new();
    for br in &branches {
        let mut exp = base.clone();
        let mut index = base_index.clone();
        gather(&mut exp, &mut index, &br.rp, halve);
        let series = leading_row_series(&br.op, m, 0, n_terms)?;
        sols.push(FormalSolution {
            kind: SolutionKind::Thome,
            location: site.clone(),
            exponential_part: exp,
            index,
            series,
            series_step: if halve { HalfInt(1) } else { HalfInt(2) },
            log_partner: false,
        });
    }
    let s2 = sols.pop().unwrap();
    let s1 = sols.pop().unwrap();
    Ok([s1, s2])
}

/// Local valuation of the residual left by substituting the truncated
/// solution into the operator at its location. Needs rational coefficients.
pub fn thome_residual_valuation(a: &PrincipalOperator, sol: &FormalSolution) -> Result<i64, SingError> {
    let mut l = localize(a, &sol.location);
    let factor: i64 = if sol.series_step == HalfInt(1) {
        l = quadratic_substitution(&l);
        2
    } else {
        1
    };
    let x = RatFunc::var(&Var::z());
    let rat = |w: &QExt| w.as_rational().cloned().ok_or_else(|| SingError::IrrationalBranch(w.d.to_string()));
    let mut rp = &rat(&sol.index)?.scale(&Rat::from_integer(factor.into())) / &x;
    for (k, w) in &sol.exponential_part {
        // key k has x-exponent k*factor - 1 in the local variable
        let e = k.0 * factor / 2 - 1;
        rp = &rp + &(&rat(w)?.scale(&Rat::from_integer(factor.into())) * &x.powi(e as i32)?);
    }
    let t = sandwich_general(&l, &rp);
    let mut v = RatFunc::zero();
    for (j, c) in sol.series.iter().enumerate() {
        v = &v + &(&rat(c)? * &x.pow(j as u32));
    }
    let zv = Var::z();
    let d1 = v.derivative(&zv);
    let d2 = d1.derivative(&zv);
    let res = &(&d2 + &(&t.p * &d1)) + &(&t.q * &v);
    if res.is_zero() {
        return Ok(i64::MAX);
    }
    Ok(local_series(&res, &zv, &Point::zero(), 1)?.valuation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sing_analysis::indices;

    fn z() -> RatFunc {
        RatFunc::var(&Var::z())
    }

    fn g() -> Genericity {
        Genericity::Generic
    }

    #[test]
    fn transformation_three_then_one() {
        // p = 2/z^2, q = 1/z^4: one III step, then rank 3/2
        let a = PrincipalOperator::new(&RatFunc::int(2) / &z().pow(2), z().powi(-4).unwrap());
        let red = reduce_at(&a, &Point::zero(), g()).unwrap();
        assert_eq!(red.absolute_rank, HalfInt(3));
        assert_eq!(red.records.len(), 1);
        let out = &red.operators[0];
        assert_eq!(out.p, RatFunc::zero());
        assert_eq!(out.q, &RatFunc::int(2) / &z().pow(3));
    }

    #[test]
    fn grounded_input_is_unchanged() {
        // rank 2, already grounded
        let a = PrincipalOperator::new(&RatFunc::one() / &z().pow(2), &RatFunc::int(3) / &z());
        let red = reduce_at(&a, &Point::zero(), g()).unwrap();
        assert_eq!(red.absolute_rank, HalfInt(4));
        assert!(red.records[0].is_empty());
        assert_eq!(red.operators[0], a);
        assert_eq!(red.records.len(), 2);
    }

    #[test]
    fn transformation_two_grounds() {
        // rank 2 with p_{-2}^2 != 4 q_{-4}: w^2 + 3w + 2 = 0
        let a = PrincipalOperator::new(
            &RatFunc::int(3) / &z().pow(2),
            &(&RatFunc::int(2) / &z().pow(4)) + &(&RatFunc::int(5) / &z().pow(3)),
        );
        let red = reduce_at(&a, &Point::zero(), g()).unwrap();
        assert_eq!(red.absolute_rank, HalfInt(4));
        for op in &red.operators {
            let l = op.local_op(&Point::zero(), 2).unwrap();
            assert_eq!(l.p.degree(), Some(2));
            assert!(l.q.degree().unwrap_or(i64::MIN) <= 2);
        }
        let (r1, r2) = indices(&a, &Point::zero(), g()).unwrap();
        // rho1 + rho2 = -p_{-1} + Rk = 2
        assert_eq!(&r1 + &r2, QExt::int(2));
    }

    #[test]
    fn irrational_branch_is_reported() {
        // w^2 + 1 = 0
        let a = PrincipalOperator::new(RatFunc::zero(), z().powi(-4).unwrap());
        assert!(matches!(reduce_at(&a, &Point::zero(), g()), Err(SingError::IrrationalBranch(_))));
        let (r1, r2) = indices(&a, &Point::zero(), g()).unwrap();
        assert_eq!(&r1 + &r2, QExt::int(2));
    }

    #[test]
    fn half_integer_reduction_at_infinity() {
        let a = PrincipalOperator::new(RatFunc::zero(), z().pow(3));
        let red = reduce_at(&a, &Point::Infinity, g()).unwrap();
        assert_eq!(red.absolute_rank, HalfInt(7));
        let op = &red.operators[0];
        assert!(op.p.is_zero() || crate::polyalg::degree_at(&op.p, &Var::z(), &Point::Infinity, g()).unwrap() <= -2);
        assert_eq!(crate::polyalg::degree_at(&op.q, &Var::z(), &Point::Infinity, g()).unwrap(), 3);
    }

    #[test]
    fn half_integer_indices_coincide() {
        // rank 3/2 at 0 with p_{-1} = 0: rho = 3/4
        let a = PrincipalOperator::new(RatFunc::zero(), z().powi(-3).unwrap());
        let (r1, r2) = indices(&a, &Point::zero(), g()).unwrap();
        assert_eq!(r1, QExt::from_rat(&Rat::new(3.into(), 4.into())));
        assert_eq!(r1, r2);
    }

    #[test]
    fn thome_integer_rank_residual() {
        let a = PrincipalOperator::new(
            &RatFunc::int(3) / &z().pow(2),
            &(&RatFunc::int(2) / &z().pow(4)) + &(&RatFunc::int(5) / &z().pow(3)),
        );
        let n = 8;
        let sols = thome(&a, &Point::zero(), n, g()).unwrap();
        for s in &sols {
            let v = thome_residual_valuation(&a, s).unwrap();
            assert!(v >= n as i64 - 4, "valuation {v}");
        }
        assert_ne!(sols[0].exponential_part, sols[1].exponential_part);
    }

    #[test]
    fn thome_half_integer_sign_flip() {
        // q = -1/z^3: after z = y^2, q = -4/y^4 and w = +-2 are rational
        let a = PrincipalOperator::new(RatFunc::zero(), -&z().powi(-3).unwrap());
        let n = 8;
        let [s1, s2] = thome(&a, &Point::zero(), n, g()).unwrap();
        for (k, w) in &s1.exponential_part {
            let sign = if k.is_integer() { 1 } else { -1 };
            assert_eq!(s2.exponential_part[k], w.scale(&RatFunc::int(sign)));
        }
        for (j, v) in s1.series.iter().enumerate() {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            assert_eq!(s2.series[j], v.scale(&RatFunc::int(sign)));
        }
        for s in [&s1, &s2] {
            let v = thome_residual_valuation(&a, s).unwrap();
            assert!(v >= n as i64 - 3, "valuation {v}");
        }
    }

    #[test]
    fn airy_at_infinity() {
        let airy = PrincipalOperator::new(RatFunc::zero(), z());
        let (r1, r2) = indices(&airy, &Point::Infinity, g()).unwrap();
        // rho = (p_{inf,-1} - 2 + 5/2)/2 = 1/4
        assert_eq!(r1, QExt::from_rat(&Rat::new(1.into(), 4.into())));
        assert_eq!(r2, r1);
        let sols = thome(&airy, &Point::Infinity, 4, g()).unwrap();
        // w = sqrt(-q) is imaginary: the leading exponential coefficient is irrational
        assert!(sols[0].exponential_part.values().any(|w| !w.is_rational()));
    }
}
