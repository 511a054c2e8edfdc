//! Deformed Heun operators: an extra apparent singularity at `lambda` with
//! accessory parameter `mu`.

use crate::heun_class::{swap_infinity, HeunError, HeunOperator};
use crate::polyalg::{local_series, rat, AlgError, Genericity, Point, Rat, RatFunc, Var};
use crate::sing_analysis::{indices, PrincipalOperator, QExt};

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum DeformError {
    #[error(transparent)]
    Heun(#[from] HeunError),
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error("lambda = {0} is a root of sigma")]
    LambdaAtSigmaRoot(String),
    #[error("series recurrence obstructed at row {0}")]
    ObstructionFound(usize),
}

fn z() -> RatFunc {
    RatFunc::var(&Var::z())
}

fn at(f: &RatFunc, x: &RatFunc) -> RatFunc {
    f.substitute(&Var::z(), x)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeformedHeunOperator {
    pub base: HeunOperator,
    pub lambda: RatFunc,
    pub mu: RatFunc,
    /// First-order coefficient `tau - sigma/(z - lambda)`.
    pub tau_d: RatFunc,
    /// Zeroth-order coefficient.
    pub eta_d: RatFunc,
}

impl DeformedHeunOperator {
    pub fn principal(&self) -> PrincipalOperator {
        let s = self.base.sigma();
        let mut hints = self.base.root_values();
        hints.push(self.lambda.clone());
        PrincipalOperator::from_coefficients(&s, &self.tau_d, &self.eta_d)
            .expect("sigma is nonzero")
            .with_hints(hints)
    }

    pub fn p(&self) -> RatFunc {
        self.principal().p
    }

    pub fn q(&self) -> RatFunc {
        self.principal().q
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "sigma": self.base.sigma().to_string(),
            "tau": self.tau_d.to_string(),
            "eta": self.eta_d.to_string(),
            "lambda": self.lambda.to_string(),
            "mu": self.mu.to_string(),
        })
    }
}

/// `sigma d^2 + (tau - sigma/(z-lambda)) d + eta(z) - eta(lambda) - sigma(lambda) mu^2
/// - (tau(lambda) - sigma'(lambda)) mu + sigma(lambda) mu/(z-lambda)`.
pub fn deform(op: &HeunOperator, lambda: &RatFunc, mu: &RatFunc) -> Result<DeformedHeunOperator, DeformError> {
    let zv = Var::z();
    let sigma = op.sigma();
    let s_l = at(&sigma, lambda);
    if s_l.is_zero() {
        return Err(DeformError::LambdaAtSigmaRoot(lambda.to_string()));
    }
    let zl = &z() - lambda;
    let tau_d = &op.tau - &sigma.checked_div(&zl)?;
    let ds_l = at(&sigma.derivative(&zv), lambda);
    let t_l = at(&op.tau, lambda);
    let eta_d = &(&(&(&op.eta - &at(&op.eta, lambda)) - &(&s_l * &mu.pow(2))) - &(&(&t_l - &ds_l) * mu))
        + &(&s_l * mu).checked_div(&zl)?;
    Ok(DeformedHeunOperator {
        base: op.clone(),
        lambda: lambda.clone(),
        mu: mu.clone(),
        tau_d,
        eta_d,
    })
}

/// Symbolic `lambda` and `mu`.
pub fn deform_symbolic(op: &HeunOperator) -> Result<DeformedHeunOperator, DeformError> {
    deform(op, &RatFunc::var(&Var::lambda()), &RatFunc::var(&Var::mu()))
}

#[derive(Clone, Debug)]
pub struct ApparencyReport {
    pub indices: (RatFunc, RatFunc),
    /// `v_0 = 1`, `v_2 = 0`; the rest from the recurrence, at most
    /// [`SYMBOLIC_V_TERMS`] of them when the coefficients carry symbols.
    pub v_series: Vec<RatFunc>,
    /// `v_1 / v_0`, equal to `mu`.
    pub v1_over_v0: RatFunc,
    /// Row at `(z - lambda)^1` after `v_1 = mu v_0`; identically zero.
    pub second_row: RatFunc,
    /// Diagonal coefficients `sigma(lambda) n (n-2)` for `n >= 3`.
    pub diagonal: Vec<RatFunc>,
    pub apparent: bool,
}

/// Coefficient matrix `c[n][m]` of `v_m` in the `(z - lambda)^{n-1}` row of
/// `(z - lambda) A v` for `v = sum v_m (z - lambda)^m`.
pub fn recurrence_rows(d: &DeformedHeunOperator, n_rows: usize) -> Result<Vec<Vec<RatFunc>>, DeformError> {
    let zl = &z() - &d.lambda;
    let s = &d.base.sigma() * &zl;
    let t = &d.tau_d * &zl;
    let u = &d.eta_d * &zl;
    let site = Point::Finite(d.lambda.clone());
    let len = n_rows + 2;
    let coeffs = |f: &RatFunc| -> Result<Vec<RatFunc>, DeformError> {
        if f.is_zero() {
            return Ok(vec![RatFunc::zero(); len]);
        }
        let ls = local_series(f, &Var::z(), &site, len)?;
        let mut out = vec![RatFunc::zero(); len];
        for (i, c) in ls.coeffs.into_iter().enumerate() {
            let k = ls.valuation + i as i64;
            if k < 0 {
                return Err(DeformError::ObstructionFound(0));
            }
            if (k as usize) < len {
                out[k as usize] = c;
            }
        }
        Ok(out)
    };
    let (sc, tc, uc) = (coeffs(&s)?, coeffs(&t)?, coeffs(&u)?);
    let get = |v: &[RatFunc], k: i64| if k < 0 { RatFunc::zero() } else { v.get(k as usize).cloned().unwrap_or_default() };
    let mut rows = Vec::new();
    for n in 0..=n_rows as i64 {
        let mut row = Vec::new();
        for m in 0..=n {
            let c = &(&get(&sc, n + 1 - m).scale(&rat(m * (m - 1))) + &get(&tc, n - m).scale(&rat(m))) + &get(&uc, n - 1 - m);
            row.push(c);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Symbolic `v_n` grow exponentially in size; beyond this many terms only
/// the diagonal is checked.
pub const SYMBOLIC_V_TERMS: usize = 5;

/// Runs the local recurrence at `lambda` through `n_terms` coefficients.
pub fn verify_apparent(d: &DeformedHeunOperator, n_terms: usize) -> Result<ApparencyReport, DeformError> {
    let n_terms = n_terms.max(4);
    let rows = recurrence_rows(d, n_terms)?;
    if !rows[0][0].is_zero() {
        return Err(DeformError::ObstructionFound(0));
    }
    let c10 = &rows[1][0];
    let c11 = &rows[1][1];
    let ratio = (-c10).checked_div(c11)?;
    let second = &rows[2][0] + &(&rows[2][1] * &ratio);
    let mut v = vec![RatFunc::one(), ratio.clone(), RatFunc::zero()];
    let mut diagonal = Vec::new();
    let mut ok = second.is_zero() && rows[2][2].is_zero();
    let symbolic = rows.iter().flatten().any(|c| !c.is_constant());
    let v_len = if symbolic { SYMBOLIC_V_TERMS } else { n_terms };
    for (n, row) in rows.iter().enumerate().take(n_terms).skip(3) {
        let diag = row[n].clone();
        if diag.is_zero() {
            ok = false;
            break;
        }
        if n < v_len {
            let mut acc = RatFunc::zero();
            for (m, vm) in v.iter().enumerate() {
                acc = &acc + &(&row[m] * vm);
            }
            v.push((-&acc).checked_div(&diag)?);
        }
        diagonal.push(diag);
    }
    Ok(ApparencyReport {
        indices: (RatFunc::zero(), RatFunc::int(2)),
        v_series: v,
        v1_over_v0: ratio,
        second_row: second,
        diagonal,
        apparent: ok,
    })
}

#[derive(Clone, Debug)]
pub struct NumericApparency {
    pub indices: (QExt, QExt),
    pub first_row_residual: f64,
    pub second_row_residual: f64,
}

/// The recurrence evaluated in floating point after substituting values for
/// every symbol, with the indices recomputed from the indicial equation.
pub fn verify_apparent_numeric(d: &DeformedHeunOperator, env: &dyn Fn(&Var) -> Rat) -> Result<NumericApparency, DeformError> {
    let spec = |f: &RatFunc| -> RatFunc {
        let subs: Vec<(Var, RatFunc)> = f.vars().into_iter().filter(|v| *v != Var::z()).map(|v| (v.clone(), RatFunc::constant(env(&v)))).collect();
        f.substitute_many(&subs)
    };
    let lam = spec(&d.lambda);
    let base = HeunOperator::new(spec(&d.base.lead), d.base.roots.iter().map(|(r, m)| (spec(r), *m)).collect(), spec(&d.base.tau), spec(&d.base.eta))?;
    let num = deform(&base, &lam, &spec(&d.mu))?;
    let rows = recurrence_rows(&num, 3)?;
    let f = |r: &RatFunc| r.eval_f64(&|_| 0.0);
    let mu = f(&num.mu);
    let (v0, v1) = (1.0, mu);
    let r1 = f(&rows[1][0]) * v0 + f(&rows[1][1]) * v1;
    let r2 = f(&rows[2][0]) * v0 + f(&rows[2][1]) * v1;
    let scale = rows[1..=2].iter().flatten().map(|c| f(c).abs()).fold(1.0, f64::max);
    let idx = indices(&num.principal(), &Point::Finite(lam), Genericity::Generic).map_err(HeunError::from)?;
    Ok(NumericApparency {
        indices: idx,
        first_row_residual: r1.abs() / scale,
        second_row_residual: r2.abs() / scale,
    })
}

/// `w = 1/z` on a deformed operator with `sigma(0) = 0`: the base becomes
/// `(w^3 rho(1/w), w^2 (3 rho(1/w) - tau(1/w)), eta(1/w))`, and
/// `lambda -> 1/lambda`, `mu -> -lambda^2 mu`.
pub fn deformed_swap(d: &DeformedHeunOperator) -> Result<DeformedHeunOperator, DeformError> {
    let s = swap_infinity(&d.base)?;
    // swap_infinity uses 2 rho; the deformed swap needs 3 rho.
    let rho = d.base.sigma().checked_div(&z())?;
    let inv = z().inv()?;
    let extra = &z().pow(2) * &at(&rho, &inv);
    let base = HeunOperator::new(s.lead.clone(), s.roots.clone(), &s.tau + &extra, s.eta.clone())?;
    let lam = d.lambda.inv()?;
    let mu = -&(&d.lambda.pow(2) * &d.mu);
    deform(&base, &lam, &mu)
}
