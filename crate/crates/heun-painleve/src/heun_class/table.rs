//! The seventeen normal-form rows and the ten Riemann class operators.

use crate::polyalg::{RatFunc, Var};
use crate::sing_analysis::HalfInt;

use super::{laurent_terms, z_coeffs, HeunOperator, HeunTypeSymbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variety {
    A,
    B,
}

/// Which coefficient a row constraint refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coef {
    Tau(usize),
    Eta(i64),
    /// The third root `t` of `z(z-1)(z-t)`, required to differ from 0 and 1.
    ThirdRoot,
}

impl Coef {
    pub fn label(self) -> String {
        match self {
            Coef::Tau(k) => format!("a{k}"),
            Coef::Eta(k) if k < 0 => format!("b_{}", -k),
            Coef::Eta(k) => format!("b{k}"),
            Coef::ThirdRoot => "t".into(),
        }
    }
}

pub struct RowShape {
    /// `(root, multiplicity)`; `None` stands for the free root `t`.
    pub sigma: &'static [(Option<i64>, u32)],
    pub tau: &'static [usize],
    pub eta_a: &'static [i64],
    pub eta_b: Option<&'static [i64]>,
    pub nonzero: &'static [Coef],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableRow {
    Heun,
    Confluent,
    ConfluentAlt,
    DegConfluent,
    DegConfluentAlt,
    Doubly,
    DegDoubly,
    DegDoublyAlt,
    DdegDoubly,
    TrivialOneHalf,
    TrivialHalfOne,
    Biconfluent,
    BiconfluentAlt,
    DegBiconfluent,
    DegBiconfluentAlt,
    Triconfluent,
    DegTriconfluent,
}

const AB_A: &[i64] = &[0, 1];
const AB_B: &[i64] = &[-1, 0];
const ZERO: Option<i64> = Some(0);
const ONE: Option<i64> = Some(1);

impl TableRow {
    pub const ALL: [TableRow; 17] = [
        TableRow::Heun,
        TableRow::Confluent,
        TableRow::ConfluentAlt,
        TableRow::DegConfluent,
        TableRow::DegConfluentAlt,
        TableRow::Doubly,
        TableRow::DegDoubly,
        TableRow::DegDoublyAlt,
        TableRow::DdegDoubly,
        TableRow::TrivialOneHalf,
        TableRow::TrivialHalfOne,
        TableRow::Biconfluent,
        TableRow::BiconfluentAlt,
        TableRow::DegBiconfluent,
        TableRow::DegBiconfluentAlt,
        TableRow::Triconfluent,
        TableRow::DegTriconfluent,
    ];

    pub fn label(self) -> &'static str {
        match self {
            TableRow::Heun => "(1_ 1_ 1_;1_)",
            TableRow::Confluent => "(1_ 1_;2)",
            TableRow::ConfluentAlt => "(2 1_;1_)",
            TableRow::DegConfluent => "(1_ 1_;3/2)",
            TableRow::DegConfluentAlt => "(3/2 1_;1_)",
            TableRow::Doubly => "(2;2)",
            TableRow::DegDoubly => "(3/2;2)",
            TableRow::DegDoublyAlt => "(2;3/2)",
            TableRow::DdegDoubly => "(3/2;3/2)",
            TableRow::TrivialOneHalf => "(1;3/2)",
            TableRow::TrivialHalfOne => "(3/2;1)",
            TableRow::Biconfluent => "(1_;3)",
            TableRow::BiconfluentAlt => "(3;1_)",
            TableRow::DegBiconfluent => "(1_;5/2)",
            TableRow::DegBiconfluentAlt => "(5/2;1_)",
            TableRow::Triconfluent => "(;4)",
            TableRow::DegTriconfluent => "(;7/2)",
        }
    }

    /// Symbol the row classifies to.
    pub fn symbol(self) -> HeunTypeSymbol {
        match self {
            TableRow::Heun => HeunTypeSymbol::twice(&[2, 2, 2], 2),
            TableRow::Confluent => HeunTypeSymbol::twice(&[2, 2], 4),
            TableRow::ConfluentAlt => HeunTypeSymbol::twice(&[4, 2], 2),
            TableRow::DegConfluent => HeunTypeSymbol::twice(&[2, 2], 3),
            TableRow::DegConfluentAlt => HeunTypeSymbol::twice(&[3, 2], 2),
            TableRow::Doubly => HeunTypeSymbol::twice(&[4], 4),
            TableRow::DegDoubly => HeunTypeSymbol::twice(&[3], 4),
            TableRow::DegDoublyAlt => HeunTypeSymbol::twice(&[4], 3),
            TableRow::DdegDoubly => HeunTypeSymbol::twice(&[3], 3),
            TableRow::TrivialOneHalf => HeunTypeSymbol::twice(&[2], 3),
            TableRow::TrivialHalfOne => HeunTypeSymbol::twice(&[3], 2),
            TableRow::Biconfluent => HeunTypeSymbol::twice(&[2], 6),
            TableRow::BiconfluentAlt => HeunTypeSymbol::twice(&[6], 2),
            TableRow::DegBiconfluent => HeunTypeSymbol::twice(&[2], 5),
            TableRow::DegBiconfluentAlt => HeunTypeSymbol::twice(&[5], 2),
            TableRow::Triconfluent => HeunTypeSymbol::twice(&[], 8),
            TableRow::DegTriconfluent => HeunTypeSymbol::twice(&[], 7),
        }
    }

    pub fn of_symbol(s: &HeunTypeSymbol) -> Option<TableRow> {
        TableRow::ALL.iter().copied().find(|r| &r.symbol() == s)
    }

    /// Rows that are `z` or `1/z` times a Riemann class operator.
    pub fn is_trivial(self) -> bool {
        matches!(self, TableRow::TrivialOneHalf | TableRow::TrivialHalfOne)
    }

    pub fn shape(self) -> RowShape {
        let s = |sigma, tau, eta_a, eta_b, nonzero| RowShape {
            sigma,
            tau,
            eta_a,
            eta_b,
            nonzero,
        };
        use Coef::*;
        match self {
            TableRow::Heun => s(&[(ZERO, 1), (ONE, 1), (None, 1)], &[0, 1, 2], AB_A, Some(AB_B), &[ThirdRoot]),
            TableRow::Confluent => s(&[(ZERO, 1), (ONE, 1)], &[0, 1, 2], AB_A, Some(AB_B), &[Tau(2)]),
            TableRow::ConfluentAlt => s(&[(ZERO, 2), (ONE, 1)], &[0, 1, 2], AB_A, Some(AB_B), &[Tau(0)]),
            TableRow::DegConfluent => s(&[(ZERO, 1), (ONE, 1)], &[0, 1], &[0, 1], None, &[Eta(1)]),
            TableRow::DegConfluentAlt => s(&[(ZERO, 2), (ONE, 1)], &[1, 2], &[-1, 0], None, &[Eta(-1)]),
            TableRow::Doubly => s(&[(ZERO, 2)], &[0, 1, 2], AB_A, Some(AB_B), &[Tau(2), Tau(0)]),
            TableRow::DegDoubly => s(&[(ZERO, 2)], &[1, 2], &[-1, 0], None, &[Eta(-1), Tau(2)]),
            TableRow::DegDoublyAlt => s(&[(ZERO, 2)], &[0, 1], &[0, 1], None, &[Eta(1), Tau(0)]),
            TableRow::DdegDoubly => s(&[(ZERO, 2)], &[], &[-1, 0, 1], None, &[Eta(-1), Eta(1)]),
            TableRow::TrivialOneHalf => s(&[(ZERO, 2)], &[1], &[1], None, &[Eta(1)]),
            TableRow::TrivialHalfOne => s(&[(ZERO, 2)], &[1], &[-1], None, &[Eta(-1)]),
            TableRow::Biconfluent => s(&[(ZERO, 1)], &[0, 1, 2], AB_A, Some(AB_B), &[Tau(2)]),
            TableRow::BiconfluentAlt => s(&[(ZERO, 3)], &[0, 1, 2], AB_A, Some(AB_B), &[Tau(0)]),
            TableRow::DegBiconfluent => s(&[(ZERO, 1)], &[0], &[0, 1, 2], None, &[Eta(2)]),
            TableRow::DegBiconfluentAlt => s(&[(ZERO, 3)], &[2], &[-2, -1, 0], None, &[Eta(-2)]),
            TableRow::Triconfluent => s(&[], &[0, 2], &[0, 1], None, &[Tau(2)]),
            TableRow::DegTriconfluent => s(&[], &[], &[0, 1, 3], None, &[Eta(3)]),
        }
    }

    /// Matches the operator (with monic `sigma`) against the row pattern,
    /// ignoring the nonzero constraints. Returns the `eta` variety.
    pub fn match_shape(self, op: &HeunOperator) -> Option<Variety> {
        let sh = self.shape();
        if !op.lead.is_one() || op.roots.len() != sh.sigma.len() {
            return None;
        }
        let mut free_root = false;
        for (r, m) in &op.roots {
            let hit = sh.sigma.iter().any(|(v, mm)| {
                mm == m
                    && match v {
                        Some(v) => (r - &RatFunc::int(*v)).is_zero(),
                        None => false,
                    }
            });
            if !hit {
                if free_root || !sh.sigma.iter().any(|(v, mm)| v.is_none() && mm == m) {
                    return None;
                }
                free_root = true;
            }
        }
        let tau = z_coeffs(&op.tau)?;
        for (k, c) in tau.iter().enumerate() {
            if !c.is_zero() && !sh.tau.contains(&k) {
                return None;
            }
        }
        let eta = laurent_terms(&op.eta)?;
        let fits = |allowed: &[i64]| eta.keys().all(|k| allowed.contains(k));
        if fits(sh.eta_a) {
            Some(Variety::A)
        } else if sh.eta_b.map_or(false, fits) {
            Some(Variety::B)
        } else {
            None
        }
    }

    /// Value of a constrained coefficient on an operator of this shape.
    pub fn coefficient(op: &HeunOperator, c: Coef) -> RatFunc {
        match c {
            Coef::Tau(k) => z_coeffs(&op.tau).and_then(|v| v.get(k).cloned()).unwrap_or_default(),
            Coef::Eta(k) => laurent_terms(&op.eta).and_then(|m| m.get(&k).cloned()).unwrap_or_default(),
            Coef::ThirdRoot => op
                .roots
                .iter()
                .map(|(r, _)| r.clone())
                .find(|r| !r.is_zero() && !(r - &RatFunc::one()).is_zero())
                .unwrap_or_default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RiemannRow {
    Gauss2F1,
    Hyper2F0,
    Kummer1F1,
    Hyper0F1,
    Hermite,
    Airy,
    Euler,
    Helmholtz,
    Laplace,
}

impl RiemannRow {
    pub fn name(self) -> &'static str {
        match self {
            RiemannRow::Gauss2F1 => "2F1",
            RiemannRow::Hyper2F0 => "2F0",
            RiemannRow::Kummer1F1 => "1F1",
            RiemannRow::Hyper0F1 => "0F1",
            RiemannRow::Hermite => "Hermite",
            RiemannRow::Airy => "Airy",
            RiemannRow::Euler => "Euler",
            RiemannRow::Helmholtz => "Helmholtz",
            RiemannRow::Laplace => "Laplace",
        }
    }

    pub fn of_symbol(s: &HeunTypeSymbol) -> Option<RiemannRow> {
        let all: Vec<i64> = s.all().iter().map(|r| r.0).collect();
        let finite_two = s.finite.contains(&HalfInt(4));
        Some(match all.as_slice() {
            [2, 2, 2] => RiemannRow::Gauss2F1,
            [4, 2] if finite_two => RiemannRow::Hyper2F0,
            [4, 2] => RiemannRow::Kummer1F1,
            [3, 2] => RiemannRow::Hyper0F1,
            [6] => RiemannRow::Hermite,
            [5] => RiemannRow::Airy,
            [2, 2] => RiemannRow::Euler,
            [4] => RiemannRow::Helmholtz,
            [2] => RiemannRow::Laplace,
            _ => return None,
        })
    }

    pub const ALL: [RiemannRow; 9] = [
        RiemannRow::Gauss2F1,
        RiemannRow::Hyper2F0,
        RiemannRow::Kummer1F1,
        RiemannRow::Hyper0F1,
        RiemannRow::Hermite,
        RiemannRow::Airy,
        RiemannRow::Euler,
        RiemannRow::Helmholtz,
        RiemannRow::Laplace,
    ];
}

/// The Riemann table operators `(sigma, tau, eta)` with symbolic `a, b, c`.
/// Both Euler forms are listed.
pub fn riemann_operators() -> Vec<(RiemannRow, &'static str, HeunOperator)> {
    let z = RatFunc::var(&Var::z());
    let a = RatFunc::named("a");
    let b = RatFunc::named("b");
    let c = RatFunc::named("c");
    let one = RatFunc::one();
    let zero = RatFunc::zero();
    let mk = |lead: RatFunc, roots: Vec<(i64, u32)>, tau: RatFunc, eta: RatFunc| {
        HeunOperator::new(lead, roots.into_iter().map(|(r, m)| (RatFunc::int(r), m)).collect(), tau, eta).expect("valid Riemann operator")
    };
    let abp1 = &(&a + &b) + &one;
    vec![
        (
            RiemannRow::Gauss2F1,
            "(1_ 1_;1_)",
            mk(RatFunc::int(-1), vec![(0, 1), (1, 1)], &c - &(&abp1 * &z), -&(&a * &b)),
        ),
        (RiemannRow::Hyper2F0, "(2;1_)", mk(one.clone(), vec![(0, 2)], &RatFunc::int(-1) + &(&abp1 * &z), &a * &b)),
        (RiemannRow::Kummer1F1, "(1_;2)", mk(one.clone(), vec![(0, 1)], &c - &z, -&a)),
        (RiemannRow::Hyper0F1, "(1_;3/2)", mk(one.clone(), vec![(0, 1)], c.clone(), RatFunc::int(-1))),
        (RiemannRow::Hermite, "(;3)", mk(one.clone(), vec![], z.scale(&crate::polyalg::rat(-2)), a.scale(&crate::polyalg::rat(-2)))),
        (RiemannRow::Airy, "(;5/2)", mk(one.clone(), vec![], zero.clone(), z.clone())),
        (RiemannRow::Euler, "(1_;1_)", mk(one.clone(), vec![(0, 2)], &c * &z, zero.clone())),
        (RiemannRow::Euler, "(1_;1_)", mk(one.clone(), vec![(0, 1)], c.clone(), zero.clone())),
        (RiemannRow::Helmholtz, "(;2)", mk(one.clone(), vec![], zero.clone(), one.clone())),
        (RiemannRow::Laplace, "(;1_)", mk(one, vec![], zero.clone(), zero)),
    ]
}
