//! Nested Horner evaluation of exact rational functions at f64 points.

use crate::polyalg::{rat_to_f64, MPoly, RatFunc, Var};

#[derive(Clone, Debug)]
enum Horner {
    Const(f64),
    /// `sum_i coeffs[i] * x_slot^i`
    Nest { slot: usize, coeffs: Vec<Horner> },
}

impl Horner {
    fn build(p: &MPoly, vars: &[Var], k: usize) -> Horner {
        if k == vars.len() || p.is_constant() {
            return Horner::Const(p.constant_value().map(|c| rat_to_f64(&c)).unwrap_or(0.0));
        }
        let cs = p.coeffs_in(&vars[k]);
        match cs.len() {
            0 => Horner::Const(0.0),
            1 => Horner::build(&cs[0], vars, k + 1),
            _ => Horner::Nest { slot: k, coeffs: cs.iter().map(|c| Horner::build(c, vars, k + 1)).collect() },
        }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Horner::Const(c) => *c,
            Horner::Nest { slot, coeffs } => {
                let v = x[*slot];
                coeffs.iter().rev().fold(0.0, |acc, c| acc * v + c.eval(x))
            }
        }
    }
}

/// A rational function compiled over a fixed variable order.
#[derive(Clone, Debug)]
pub struct Compiled {
    num: Horner,
    den: Horner,
}

impl Compiled {
    /// Fails with the first variable of `f` not in `vars`.
    pub fn new(f: &RatFunc, vars: &[Var]) -> Result<Compiled, Var> {
        if let Some(v) = f.vars().into_iter().find(|v| !vars.contains(v)) {
            return Err(v);
        }
        Ok(Compiled { num: Horner::build(f.num(), vars, 0), den: Horner::build(f.den(), vars, 0) })
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.num.eval(x) / self.den.eval(x)
    }

    pub fn eval_den(&self, x: &[f64]) -> f64 {
        self.den.eval(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::text::parse_ratfunc;

    #[test]
    fn matches_direct_evaluation() {
        let f = parse_ratfunc("(lambda^3 - 2*t*lambda*mu + 1/3)/(t - lambda^2 + 5)").unwrap();
        let vars = [Var::t(), Var::lambda(), Var::mu()];
        let c = Compiled::new(&f, &vars).unwrap();
        let x = [0.3, -1.25, 2.0];
        let direct = f.eval_f64(&|v: &Var| x[vars.iter().position(|w| w == v).unwrap()]);
        assert!((c.eval(&x) - direct).abs() < 1e-14);
        assert_eq!(Compiled::new(&f, &vars[..2]).unwrap_err(), Var::mu());
    }
}
