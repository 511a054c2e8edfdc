//! Power series solutions at a point and the logarithmic obstruction at
//! Fuchsian points.

use crate::polyalg::{Genericity, Point, RatFunc};

use super::ground::{leading_row_series, working_precision, FormalSolution, SolutionKind};
use super::qext::QExt;
use super::series::LocalOp;
use super::{local_rank, HalfInt, PrincipalOperator, SingError};

/// Which of the five situations applies, by `m = deg(p, 0)`, `l = deg(q, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesCase {
    /// `m <= 0`, `l <= 0`: `v_0`, `v_1` free.
    Regular,
    /// `m <= 1`, `l <= 2`: Fuchsian, solutions start at nonnegative integer
    /// indicial roots.
    Fuchsian,
    /// `m >= 2`, `l <= m`: unique solution for each `v_0`.
    Grounded,
    /// `m >= 2`, `l = m + 1`: needs `p_{-m} n + q_{-m-1} = 0`.
    Borderline,
    /// No power series solutions (`l >= m + 2`, also covers `m <= 0`,
    /// `l >= 3`).
    None,
}

#[derive(Clone, Debug)]
pub struct SeriesOutcome {
    pub case: SeriesCase,
    pub deg_p: Option<i64>,
    pub deg_q: Option<i64>,
    /// Starting exponents `n >= 0` allowed by the indicial condition.
    pub admissible_starts: Vec<i64>,
    /// Coefficient lists `v_0..v_N` of the solutions found; in the regular
    /// case the basis with `(v_0, v_1) = (1, 0)` and `(0, 1)`.
    pub solutions: Vec<Vec<QExt>>,
}

impl SeriesOutcome {
    pub fn exists(&self) -> bool {
        !self.solutions.is_empty()
    }
}

/// Frobenius rows at a Fuchsian point: `F(rho + j) v_j = -sum_{k<j} ...`.
/// Returns the coefficients and, if some `F(rho + j)` vanishes, the value of
/// the right-hand side there (zero means no obstruction; `v_j` set to 0).
fn frobenius_rows(op: &LocalOp, rho: &QExt, n_terms: usize) -> (Vec<QExt>, Vec<(usize, QExt)>) {
    let p1 = op.p.coeff(-1);
    let q2 = op.q.coeff(-2);
    let f = |x: &QExt| &(&(x * &(x - &QExt::one())) + &(&p1 * x)) + &q2;
    let mut v = vec![QExt::one()];
    let mut resonances = Vec::new();
    for j in 1..n_terms {
        let mut rhs = QExt::zero();
        for (k, vk) in v.iter().enumerate() {
            if vk.is_zero() {
                continue;
            }
            let x = rho + &QExt::int(k as i64);
            let pk = op.p.coeff(j as i64 - k as i64 - 1);
            let qk = op.q.coeff(j as i64 - k as i64 - 2);
            rhs = &rhs - &(&(&(&x * &pk) + &qk) * vk);
        }
        let fj = f(&(rho + &QExt::int(j as i64)));
        if fj.is_zero() {
            resonances.push((j, rhs));
            v.push(QExt::zero());
        } else {
            v.push(&rhs * &fj.inv().expect("nonzero"));
        }
    }
    (v, resonances)
}

fn nonneg_integer(x: &QExt) -> Option<i64> {
    x.is_integer_constant().filter(|n| *n >= 0)
}

/// Tries to solve `A v = 0` by a power series at `site`, to `n_terms` terms.
pub fn frobenius_attempt(a: &PrincipalOperator, site: &Point, n_terms: usize, mode: Genericity) -> Result<SeriesOutcome, SingError> {
    let probe = a.local_op(site, 0)?;
    let dp = probe.p.degree();
    let dq = probe.q.degree();
    let m = dp.unwrap_or(i64::MIN);
    let l = dq.unwrap_or(i64::MIN);
    let r = local_rank(&probe, mode)?;
    let op = a.local_op(site, working_precision(r) + n_terms as i64 + 4)?;
    let mut out = SeriesOutcome {
        case: SeriesCase::None,
        deg_p: dp,
        deg_q: dq,
        admissible_starts: Vec::new(),
        solutions: Vec::new(),
    };
    if m <= 0 && l <= 0 {
        out.case = SeriesCase::Regular;
        out.admissible_starts = vec![0, 1];
        let (v0, _) = frobenius_rows(&op, &QExt::zero(), n_terms);
        let (v1, _) = frobenius_rows(&op, &QExt::one(), n_terms - 1);
        let mut shifted = vec![QExt::zero()];
        shifted.extend(v1);
        out.solutions = vec![v0, shifted];
    } else if m <= 1 && l <= 2 {
        out.case = SeriesCase::Fuchsian;
        let (r1, r2) = super::ground::local_reduction(&op, mode)?.indices()?;
        let mut starts: Vec<i64> = [r1, r2].iter().filter_map(nonneg_integer).collect();
        starts.sort_unstable();
        starts.dedup();
        starts.reverse();
        for n in &starts {
            let (v, res) = frobenius_rows(&op, &QExt::int(*n), n_terms.saturating_sub(*n as usize).max(1));
            if res.iter().all(|(_, r)| r.is_zero()) {
                let mut full = vec![QExt::zero(); *n as usize];
                full.extend(v);
                full.truncate(n_terms.max(*n as usize + 1));
                out.solutions.push(full);
            }
        }
        out.admissible_starts = starts;
    } else if m >= 2 && l <= m {
        out.case = SeriesCase::Grounded;
        out.admissible_starts = vec![0];
        out.solutions.push(leading_row_series(&op, m, 0, n_terms)?);
    } else if m >= 2 && l == m + 1 {
        out.case = SeriesCase::Borderline;
        let pm = op.p.coeff(-m);
        let ql = op.q.coeff(-m - 1);
        let n = (-&ql).checked_div(&pm)?;
        if let Some(n) = nonneg_integer(&n).filter(|n| *n >= 1) {
            out.admissible_starts = vec![n];
            let v = leading_row_series(&op, m, n, n_terms.saturating_sub(n as usize).max(1))?;
            out.solutions.push(v);
        }
    }
    Ok(out)
}

/// Frobenius solutions at a Fuchsian point. When the indices differ by a
/// positive integer and the lower one is obstructed, its solution carries
/// `log_partner` and its series stops before the obstruction.
pub fn frobenius_solutions(a: &PrincipalOperator, site: &Point, n_terms: usize, mode: Genericity) -> Result<[FormalSolution; 2], SingError> {
    let op = a.local_op(site, working_precision(HalfInt(2)) + n_terms as i64 + 4)?;
    if local_rank(&op, mode)?.ceil() > 1 {
        return Err(SingError::NotFuchsian);
    }
    let (r1, r2) = super::ground::local_reduction(&op, mode)?.indices()?;
    let diff = (&r1 - &r2).is_integer_constant();
    let (hi, lo) = match diff {
        Some(d) if d < 0 => (r2, r1),
        _ => (r1, r2),
    };
    let mk = |rho: &QExt, series: Vec<QExt>, log: bool| FormalSolution {
        kind: SolutionKind::Frobenius,
        location: site.clone(),
        exponential_part: Default::default(),
        index: rho.clone(),
        series,
        series_step: HalfInt(2),
        log_partner: log,
    };
    let (v_hi, _) = frobenius_rows(&op, &hi, n_terms);
    let (mut v_lo, res) = frobenius_rows(&op, &lo, n_terms);
    let log = match diff {
        Some(0) => true,
        _ => res.iter().any(|(_, r)| !r.is_zero()),
    };
    if log {
        let cut = res.first().map(|(j, _)| *j).unwrap_or(v_lo.len());
        v_lo.truncate(cut.max(1));
    }
    Ok([mk(&hi, v_hi, false), mk(&lo, v_lo, log)])
}

/// Is the Fuchsian point `site` free of logarithms? The indices must differ
/// by an integer. A regular point counts as indices `{0, 1}`.
pub fn is_nonlogarithmic(a: &PrincipalOperator, site: &Point, n_terms: usize, mode: Genericity) -> Result<bool, SingError> {
    let op = a.local_op(site, working_precision(HalfInt(2)) + n_terms as i64 + 4)?;
    let r = local_rank(&op, mode)?;
    if r.0 == 0 {
        return Ok(true);
    }
    if r.ceil() > 1 {
        return Err(SingError::NotFuchsian);
    }
    let (r1, r2) = super::ground::local_reduction(&op, mode)?.indices()?;
    let d = &r1 - &r2;
    let n = d.is_integer_constant().ok_or_else(|| SingError::NonIntegerIndexDifference(d.to_string()))?;
    if n == 0 {
        return Ok(false);
    }
    let lo = if n > 0 { r2 } else { r1 };
    let n = n.unsigned_abs() as usize;
    let op = if n_terms > n {
        op
    } else {
        a.local_op(site, working_precision(HalfInt(2)) + n as i64 + 4)?
    };
    let (_, res) = frobenius_rows(&op, &lo, n_terms.max(n + 1));
    Ok(res.iter().filter(|(j, _)| *j == n).all(|(_, r)| r.is_zero()))
}

/// Indicial polynomial value `x(x-1) + p_{-1} x + q_{-2}` of the local data.
pub fn indicial_value(op: &LocalOp, x: &RatFunc) -> QExt {
    let x = QExt::rational(x.clone());
    &(&(&x * &(&x - &QExt::one())) + &(&op.p.coeff(-1) * &x)) + &op.q.coeff(-2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{Rat, Var};

    fn z() -> RatFunc {
        RatFunc::var(&Var::z())
    }

    fn g() -> Genericity {
        Genericity::Generic
    }

    #[test]
    fn regular_point_two_parameter_family() {
        let a = PrincipalOperator::new(RatFunc::zero(), RatFunc::one());
        let o = frobenius_attempt(&a, &Point::zero(), 6, g()).unwrap();
        assert_eq!(o.case, SeriesCase::Regular);
        assert_eq!(o.solutions.len(), 2);
        // cos: 1 - z^2/2 + z^4/24
        assert_eq!(o.solutions[0][2], QExt::from_rat(&Rat::new((-1).into(), 2.into())));
        assert_eq!(o.solutions[0][4], QExt::from_rat(&Rat::new(1.into(), 24.into())));
        assert_eq!(o.solutions[1][3], QExt::from_rat(&Rat::new((-1).into(), 6.into())));
    }

    #[test]
    fn no_series_when_q_dominates() {
        // m = 1, l = 3
        let a = PrincipalOperator::new(z().inv().unwrap(), z().powi(-3).unwrap());
        let o = frobenius_attempt(&a, &Point::zero(), 5, g()).unwrap();
        assert_eq!(o.case, SeriesCase::None);
        assert!(!o.exists());
    }

    #[test]
    fn grounded_first_row() {
        // m = 2, l = 2, p_{-2} = 1: v_1 = -q_{-2} v_0
        let q2 = RatFunc::named("b");
        let a = PrincipalOperator::new(z().powi(-2).unwrap(), &q2 / &z().pow(2));
        let o = frobenius_attempt(&a, &Point::zero(), 4, g()).unwrap();
        assert_eq!(o.case, SeriesCase::Grounded);
        assert_eq!(o.solutions[0][1], QExt::rational(-&q2));
    }

    #[test]
    fn borderline_case() {
        // p = 1/z^2, q = -3/z^3: n = 3
        let a = PrincipalOperator::new(z().powi(-2).unwrap(), z().powi(-3).unwrap().scale(&Rat::from_integer((-3).into())));
        let o = frobenius_attempt(&a, &Point::zero(), 6, g()).unwrap();
        assert_eq!(o.case, SeriesCase::Borderline);
        assert_eq!(o.admissible_starts, vec![3]);
        assert!(o.exists());
    }

    #[test]
    fn logarithmic_and_apparent() {
        let a = PrincipalOperator::new(z().inv().unwrap(), RatFunc::zero());
        assert!(!is_nonlogarithmic(&a, &Point::zero(), 5, g()).unwrap());
        let [_, s2] = frobenius_solutions(&a, &Point::zero(), 5, g()).unwrap();
        assert!(s2.log_partner);
        // regular point
        let b = PrincipalOperator::new(RatFunc::zero(), RatFunc::one());
        assert!(is_nonlogarithmic(&b, &Point::zero(), 5, g()).unwrap());
        // Euler with indices 0, 2 and no obstruction: d^2 - (1/z) d
        let c = PrincipalOperator::new(-&z().inv().unwrap(), RatFunc::zero());
        assert!(is_nonlogarithmic(&c, &Point::zero(), 5, g()).unwrap());
        // indices 0, 1 with obstruction: d^2 + 1/z (Bessel-type)
        let d = PrincipalOperator::new(RatFunc::zero(), z().inv().unwrap());
        assert!(!is_nonlogarithmic(&d, &Point::zero(), 5, g()).unwrap());
        let e = PrincipalOperator::new(&RatFunc::named("c") / &z(), RatFunc::zero());
        assert!(matches!(
            is_nonlogarithmic(&e, &Point::zero(), 5, g()),
            Err(SingError::NonIntegerIndexDifference(_))
        ));
        let f = PrincipalOperator::new(RatFunc::zero(), z().powi(-3).unwrap());
        assert_eq!(is_nonlogarithmic(&f, &Point::zero(), 5, g()), Err(SingError::NotFuchsian));
    }
}
