use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// A named indeterminate.
///
/// Variables are ordered `z`, `lambda`, `mu`, `t`, then every other name
/// alphabetically. The order fixes the canonical monomial order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Var {
    rank: u8,
    name: Arc<str>,
}

impl Var {
    pub fn new(name: &str) -> Var {
        let canonical = match name {
            "λ" | "lambda" => "lambda",
            "μ" | "mu" => "mu",
            other => other,
        };
        let rank = match canonical {
            "z" => 0,
            "lambda" => 1,
            "mu" => 2,
            "t" => 3,
            _ => 4,
        };
        Var {
            rank,
            name: Arc::from(canonical),
        }
    }

    pub fn z() -> Var {
        Var::new("z")
    }

    pub fn lambda() -> Var {
        Var::new("lambda")
    }

    pub fn mu() -> Var {
        Var::new("mu")
    }

    pub fn t() -> Var {
        Var::new("t")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// True for the four dynamical variables `z`, `lambda`, `mu`, `t`.
    pub fn is_core(&self) -> bool {
        self.rank < 4
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank
            .cmp(&other.rank)
            .then_with(|| self.name.cmp(&other.name))
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_order_then_alphabetical() {
        let mut v = vec![
            Var::new("b"),
            Var::t(),
            Var::new("a"),
            Var::mu(),
            Var::z(),
            Var::new("λ"),
        ];
        v.sort();
        let names: Vec<&str> = v.iter().map(|x| x.name()).collect();
        assert_eq!(names, ["z", "lambda", "mu", "t", "a", "b"]);
    }
}
