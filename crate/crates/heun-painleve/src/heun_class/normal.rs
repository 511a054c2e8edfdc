//! Reduction of a Heun class operator to one of the table rows by affine
//! maps, power and exponential sandwiches and swaps with infinity.

use crate::polyalg::{rat, Genericity, Point, Rat, RatFunc, Var};
use crate::sing_analysis::{indices, PrincipalOperator, QExt, Step, TransformRecord};

use super::table::{Coef, RiemannRow, TableRow, Variety};
use super::{classify_principal, laurent_terms, z_coeffs, HeunError, HeunOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstraintStatus {
    Holds,
    /// Symbolic expression, taken to be nonzero.
    Assumed,
    Fails,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintCheck {
    pub text: String,
    pub value: RatFunc,
    pub status: ConstraintStatus,
}

#[derive(Clone, Debug)]
pub struct NormalForm {
    pub row: Option<TableRow>,
    pub variety: Option<Variety>,
    pub riemann: Option<RiemannRow>,
    pub operator: HeunOperator,
    pub constraints: Vec<ConstraintCheck>,
    pub trace: TransformRecord,
    /// Branch choices made along the way.
    pub choices: Vec<String>,
}

impl NormalForm {
    pub fn riemann_reducible(&self) -> bool {
        self.riemann.is_some() || self.row.map_or(false, |r| r.is_trivial())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "row": self.row.map(|r| r.label()),
            "variety": self.variety.map(|v| match v { Variety::A => "a", Variety::B => "b" }),
            "riemann_reducible": self.riemann_reducible(),
            "riemann_row": self.riemann.map(|r| r.name()),
            "sigma": self.operator.sigma().to_string(),
            "tau": self.operator.tau.to_string(),
            "eta": self.operator.eta.to_string(),
            "constraints": self.constraints.iter().map(|c| serde_json::json!({
                "constraint": c.text,
                "value": c.value.to_string(),
                "status": match c.status {
                    ConstraintStatus::Holds => "holds",
                    ConstraintStatus::Assumed => "assumed",
                    ConstraintStatus::Fails => "fails",
                },
            })).collect::<Vec<_>>(),
            "choices": self.choices,
            "trace": self.trace.to_json(),
        })
    }
}

fn status(x: &RatFunc) -> ConstraintStatus {
    if x.is_zero() {
        ConstraintStatus::Fails
    } else if x.is_constant() {
        ConstraintStatus::Holds
    } else {
        ConstraintStatus::Assumed
    }
}

fn row_constraints(row: TableRow, op: &HeunOperator) -> Vec<ConstraintCheck> {
    row.shape()
        .nonzero
        .iter()
        .map(|&c| {
            if c == Coef::ThirdRoot {
                let t = TableRow::coefficient(op, c);
                let s1 = status(&t);
                let s2 = status(&(&t - &RatFunc::one()));
                let st = if s1 == ConstraintStatus::Fails || s2 == ConstraintStatus::Fails {
                    ConstraintStatus::Fails
                } else if s1 == ConstraintStatus::Assumed || s2 == ConstraintStatus::Assumed {
                    ConstraintStatus::Assumed
                } else {
                    ConstraintStatus::Holds
                };
                ConstraintCheck {
                    text: "t != 0, 1".into(),
                    value: t,
                    status: st,
                }
            } else {
                let v = TableRow::coefficient(op, c);
                ConstraintCheck {
                    text: format!("{} != 0", c.label()),
                    status: status(&v),
                    value: v,
                }
            }
        })
        .collect()
}

/// Rows whose pattern and constraints the operator satisfies.
pub fn recognize(op: &HeunOperator) -> Option<(TableRow, Variety, Vec<ConstraintCheck>)> {
    for row in TableRow::ALL {
        if let Some(v) = row.match_shape(op) {
            let cs = row_constraints(row, op);
            if cs.iter().all(|c| c.status != ConstraintStatus::Fails) {
                return Some((row, v, cs));
            }
        }
    }
    None
}

struct Pipe {
    roots: Vec<(RatFunc, u32)>,
    a: PrincipalOperator,
    trace: TransformRecord,
    choices: Vec<String>,
}

enum Target {
    Row,
    Riemann,
}

fn z() -> RatFunc {
    RatFunc::var(&Var::z())
}

impl Pipe {
    fn push(&mut self, s: Step) -> Result<(), HeunError> {
        self.a = s.apply(&self.a)?;
        self.a.hints = self.roots.iter().map(|(r, _)| r.clone()).collect();
        self.trace.push(s);
        Ok(())
    }

    fn sigma(&self) -> RatFunc {
        let mut s = RatFunc::one();
        for (r, m) in &self.roots {
            s = &s * &(&z() - r).pow(*m);
        }
        s
    }

    fn deg(&self) -> u32 {
        self.roots.iter().map(|(_, m)| m).sum()
    }

    fn tau(&self, k: usize) -> RatFunc {
        let t = &self.a.p * &self.sigma();
        z_coeffs(&t).and_then(|c| c.get(k).cloned()).unwrap_or_default()
    }

    fn eta(&self, k: i64) -> RatFunc {
        let e = &self.a.q * &self.sigma();
        laurent_terms(&e).and_then(|m| m.get(&k).cloned()).unwrap_or_default()
    }

    /// Old variable `= scale * new + shift`.
    fn affine(&mut self, scale: RatFunc, shift: RatFunc) -> Result<(), HeunError> {
        if scale.is_one() && shift.is_zero() {
            return Ok(());
        }
        self.roots = self
            .roots
            .iter()
            .map(|(r, m)| Ok(((r - &shift).checked_div(&scale)?, *m)))
            .collect::<Result<_, HeunError>>()?;
        self.push(Step::Affine { scale, shift })
    }

    /// `w = 1/z`, requires a root at the origin.
    fn swap(&mut self) -> Result<(), HeunError> {
        let d = self.deg();
        let mut roots = vec![(RatFunc::zero(), 4 - d)];
        for (r, m) in &self.roots {
            if !r.is_zero() {
                roots.push((r.inv()?, *m));
            }
        }
        self.roots = roots;
        let (zero, one) = (rat(0), rat(1));
        self.push(Step::Moebius {
            a: zero.clone(),
            b: one.clone(),
            c: one,
            d: zero,
        })
    }

    fn power(&mut self, at: &RatFunc, kappa: RatFunc) -> Result<(), HeunError> {
        if kappa.is_zero() {
            return Ok(());
        }
        self.push(Step::Power {
            site: Point::Finite(at.clone()),
            kappa,
        })
    }

    fn exp(&mut self, site: Point, kappa: RatFunc, order: i64) -> Result<(), HeunError> {
        if kappa.is_zero() {
            return Ok(());
        }
        self.push(Step::Exp { site, kappa, order })
    }

    /// A root of `k^2 + b k + c`, zero when `c` vanishes.
    fn root(&mut self, b: &RatFunc, c: &RatFunc, what: &str) -> Result<RatFunc, HeunError> {
        if c.is_zero() {
            return Ok(RatFunc::zero());
        }
        let (r1, r2) = QExt::quadratic_roots(b, c);
        match r1.as_rational() {
            Some(r) => {
                self.choices.push(format!("{what}: kappa = {r} (other root {r2})"));
                Ok(r.clone())
            }
            None => Err(HeunError::IrrationalBranch(format!("{what}: {}", r1))),
        }
    }

    /// Like [`Pipe::root`] but an irrational branch leaves the operator as is.
    fn optional_root(&mut self, b: &RatFunc, c: &RatFunc, what: &str) -> RatFunc {
        match self.root(b, c, what) {
            Ok(k) => k,
            Err(_) => {
                self.choices.push(format!("{what}: irrational roots, step skipped"));
                RatFunc::zero()
            }
        }
    }

    /// Power sandwich making one index at `r` zero.
    fn ground(&mut self, r: &RatFunc) -> Result<(), HeunError> {
        let (i1, i2) = indices(&self.a, &Point::Finite(r.clone()), Genericity::Generic)?;
        if i1.is_zero() || i2.is_zero() {
            return Ok(());
        }
        let rho = match (i1.as_rational(), i2.as_rational()) {
            (Some(x), _) => x.clone(),
            (None, Some(x)) => x.clone(),
            _ => return Err(HeunError::IrrationalBranch(format!("indices {i1}, {i2} at {r}"))),
        };
        self.choices.push(format!("grounding at {r}: index {rho} moved to 0"));
        self.power(r, -rho)
    }

    fn ground_all(&mut self) -> Result<(), HeunError> {
        let rs: Vec<RatFunc> = self.roots.iter().map(|(r, _)| r.clone()).collect();
        for r in rs {
            self.ground(&r)?;
        }
        Ok(())
    }

    fn root_with_mult(&self, m: u32) -> Option<RatFunc> {
        self.roots.iter().find(|(_, k)| *k == m).map(|(r, _)| r.clone())
    }

    fn send_to_zero_one(&mut self, r0: RatFunc, r1: RatFunc) -> Result<(), HeunError> {
        let scale = &r1 - &r0;
        self.affine(scale, r0)
    }

    /// `sigma = z(z-1)` after grounding. With `allow_b`, an irrational index
    /// at the origin is left alone and variety b) is produced instead.
    fn two_simple(&mut self, allow_b: bool) -> Result<Target, HeunError> {
        let one = RatFunc::one();
        self.ground(&one)?;
        let mut grounded_at_origin = true;
        match self.ground(&RatFunc::zero()) {
            Err(HeunError::IrrationalBranch(m)) if allow_b => {
                self.choices.push(format!("origin left ungrounded ({m})"));
                grounded_at_origin = false;
            }
            r => r?,
        }
        let k = self.root(&self.tau(2), &self.eta(2), "kill b2 at infinity")?;
        self.exp(Point::Infinity, k, 0)?;
        if !self.tau(2).is_zero() {
            if !grounded_at_origin {
                let k = self.eta(1).checked_div(&self.tau(2))?;
                self.power(&RatFunc::zero(), k)?;
            }
            return Ok(Target::Row);
        }
        Ok(if self.eta(1).is_zero() { Target::Riemann } else { Target::Row })
    }

    /// `sigma = z^2`.
    fn double(&mut self) -> Result<Target, HeunError> {
        let k = self.root(&self.tau(2), &self.eta(2), "kill b2 at infinity")?;
        self.exp(Point::Infinity, k, 0)?;
        let k = self.root(&self.tau(0), &self.eta(-2), "kill b_2 at 0")?;
        self.exp(Point::zero(), k, 2)?;
        let zero = RatFunc::zero();
        if !self.tau(0).is_zero() {
            let k = self.eta(-1).checked_div(&self.tau(0))?;
            self.power(&zero, k)?;
            if !self.tau(2).is_zero() || !self.eta(1).is_zero() {
                return Ok(Target::Row);
            }
            return Ok(Target::Riemann);
        }
        if !self.tau(2).is_zero() {
            let k = self.eta(1).checked_div(&self.tau(2))?;
            self.power(&zero, k)?;
            return Ok(if self.eta(-1).is_zero() { Target::Riemann } else { Target::Row });
        }
        let (b1, bm1) = (self.eta(1), self.eta(-1));
        if b1.is_zero() && bm1.is_zero() {
            return Ok(Target::Riemann);
        }
        if b1.is_zero() || bm1.is_zero() {
            // k^2 + (1 - a1) k + b0 = 0
            let b = &RatFunc::one() - &self.tau(1);
            let k = self.root(&b, &self.eta(0), "kill b0 at 0")?;
            self.power(&zero, k)?;
            return Ok(Target::Row);
        }
        let k = self.tau(1).scale(&Rat::new(1.into(), 2.into()));
        self.power(&zero, k)?;
        Ok(Target::Row)
    }

    /// `sigma = z` after grounding.
    fn single(&mut self) -> Result<Target, HeunError> {
        self.ground_all()?;
        let k = self.root(&self.tau(2), &self.eta(3), "kill b3 at infinity")?;
        self.exp(Point::Infinity, k, 1)?;
        let a2 = self.tau(2);
        if !a2.is_zero() {
            let k = -&self.eta(2).checked_div(&a2)?;
            self.exp(Point::Infinity, k, 0)?;
            return Ok(Target::Row);
        }
        if !self.eta(2).is_zero() {
            let k = self.tau(1).scale(&Rat::new((-1).into(), 2.into()));
            self.exp(Point::Infinity, k, 0)?;
            return Ok(Target::Row);
        }
        let k = self.optional_root(&self.tau(1), &self.eta(1), "Riemann tail at infinity");
        self.exp(Point::Infinity, k, 0)?;
        Ok(Target::Riemann)
    }

    /// `sigma = 1`.
    fn constant(&mut self) -> Result<Target, HeunError> {
        let k = self.root(&self.tau(2), &self.eta(4), "kill b4 at infinity")?;
        self.exp(Point::Infinity, k, 2)?;
        let a2 = self.tau(2);
        let half = Rat::new((-1).into(), 2.into());
        if !a2.is_zero() {
            let k = -&self.eta(3).checked_div(&a2)?;
            self.exp(Point::Infinity, k, 1)?;
            let k = -&self.eta(2).checked_div(&a2)?;
            self.exp(Point::Infinity, k, 0)?;
            let s = (-&self.tau(1)).checked_div(&a2.scale(&rat(2)))?;
            self.affine(RatFunc::one(), s)?;
            return Ok(Target::Row);
        }
        let k = self.tau(1).scale(&half);
        self.exp(Point::Infinity, k, 1)?;
        let k = self.tau(0).scale(&half);
        self.exp(Point::Infinity, k, 0)?;
        let b3 = self.eta(3);
        if b3.is_zero() {
            return Ok(Target::Riemann);
        }
        let s = (-&self.eta(2)).checked_div(&b3.scale(&rat(3)))?;
        self.affine(RatFunc::one(), s)?;
        Ok(Target::Row)
    }

    fn finish(self, target: Target) -> Result<NormalForm, HeunError> {
        let op = HeunOperator::from_principal(RatFunc::one(), self.roots.clone(), &self.a)?;
        let cl = classify_principal(&op.principal(), Genericity::Generic)?;
        let (row, variety, constraints) = match recognize(&op) {
            Some((r, v, c)) => (Some(r), Some(v), c),
            None => (None, None, Vec::new()),
        };
        if let Target::Row = target {
            if row.is_none() {
                return Err(HeunError::NotHeunClass(format!("reduction ended outside the table: {op}")));
            }
        }
        let riemann = if cl.riemann_reducible() { cl.riemann } else { None };
        Ok(NormalForm {
            row,
            variety,
            riemann,
            operator: op,
            constraints,
            trace: self.trace,
            choices: self.choices,
        })
    }
}

/// Reduces a Heun class operator to a table row, or to a Riemann class
/// operator. The trace replays exactly on the principal form of `op`.
pub fn to_normal_form(op: &HeunOperator) -> Result<NormalForm, HeunError> {
    op.validate()?;
    let mut p = Pipe {
        roots: op.roots.clone(),
        a: op.principal(),
        trace: TransformRecord::new(),
        choices: Vec::new(),
    };
    if recognize(&op.monic()).is_some() {
        return p.finish(Target::Row);
    }
    let target = match (p.deg(), p.roots.len()) {
        (3, 3) => {
            let (r0, r1) = (p.roots[0].0.clone(), p.roots[1].0.clone());
            p.send_to_zero_one(r0, r1)?;
            p.ground_all()?;
            Target::Row
        }
        (3, 2) => {
            let r0 = p.root_with_mult(2).expect("double root");
            let r1 = p.root_with_mult(1).expect("simple root");
            p.send_to_zero_one(r0, r1)?;
            p.swap()?;
            let t = p.two_simple(true)?;
            p.swap()?;
            t
        }
        (3, 1) => {
            let r0 = p.roots[0].0.clone();
            p.affine(RatFunc::one(), r0)?;
            p.swap()?;
            let t = p.single()?;
            p.swap()?;
            t
        }
        (2, 2) => {
            let (r0, r1) = (p.roots[0].0.clone(), p.roots[1].0.clone());
            p.send_to_zero_one(r0, r1)?;
            p.two_simple(false)?
        }
        (2, 1) => {
            let r0 = p.roots[0].0.clone();
            p.affine(RatFunc::one(), r0)?;
            p.double()?
        }
        (1, 1) => {
            let r0 = p.roots[0].0.clone();
            p.affine(RatFunc::one(), r0)?;
            p.single()?
        }
        (0, 0) => p.constant()?,
        _ => unreachable!("validated sigma degree"),
    };
    p.finish(target)
}

/// Form b) from form a) for the rows that have one, by a power sandwich
/// at the origin that trades `b1 z` for `b_1 / z`.
pub fn to_variety_b(nf: &NormalForm) -> Result<NormalForm, HeunError> {
    let row = match nf.row {
        Some(r @ (TableRow::Confluent | TableRow::Biconfluent | TableRow::Doubly)) => r,
        _ => return Err(HeunError::NoVarietyB(nf.row.map_or("this operator", |r| r.label()).to_string())),
    };
    if nf.variety == Some(Variety::B) {
        return Ok(nf.clone());
    }
    let op = &nf.operator;
    let b1 = TableRow::coefficient(op, Coef::Eta(1));
    let a2 = TableRow::coefficient(op, Coef::Tau(2));
    let mut p = Pipe {
        roots: op.roots.clone(),
        a: op.principal(),
        trace: TransformRecord::new(),
        choices: nf.choices.clone(),
    };
    p.power(&RatFunc::zero(), b1.checked_div(&a2)?)?;
    let mut out = p.finish(Target::Row)?;
    if out.row != Some(row) {
        return Err(HeunError::NoVarietyB(row.label().to_string()));
    }
    let mut trace = nf.trace.clone();
    trace.extend(&out.trace);
    out.trace = trace;
    Ok(out)
}
