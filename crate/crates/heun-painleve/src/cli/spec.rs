//! Operator specifications:
//!
//! ```text
//! spec      = { statement [ ";" ] } ;
//! statement = "param" ident { "," ident }
//!           | "time" ident
//!           | ( "sigma" | "tau" | "eta" | "p" | "q" ) "=" expr ;
//! ```
//!
//! `sigma` must be a product of a constant and powers of factors linear in
//! `z`. Every identifier other than `z` must be declared.

use std::collections::BTreeSet;
use std::fmt;

use crate::heun_class::{HeunError, HeunOperator};
use crate::polyalg::text::{tokenize, ExprParser, ParseError, Tok, Token};
use crate::polyalg::{RatFunc, Var};
use crate::sing_analysis::PrincipalOperator;

#[derive(Clone, Debug, PartialEq)]
pub enum SpecError {
    Syntax(ParseError),
    UndeclaredParameter { name: String, line: usize, col: usize },
    SigmaNotFactored { line: usize, col: usize, factor: String },
    Invalid(String),
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::Syntax(e) => write!(f, "syntax error at {e}"),
            SpecError::UndeclaredParameter { name, line, col } => write!(f, "{line}:{col}: undeclared parameter '{name}'"),
            SpecError::SigmaNotFactored { line, col, factor } => {
                write!(f, "{line}:{col}: sigma factor '{factor}' is not a power of a linear factor in z")
            }
            SpecError::Invalid(m) => write!(f, "invalid operator: {m}"),
        }
    }
}

impl std::error::Error for SpecError {}

impl From<ParseError> for SpecError {
    fn from(e: ParseError) -> Self {
        match e.message.strip_prefix("undeclared parameter '") {
            Some(rest) => SpecError::UndeclaredParameter { name: rest.trim_end_matches('\'').to_string(), line: e.line, col: e.col },
            None => SpecError::Syntax(e),
        }
    }
}

impl From<HeunError> for SpecError {
    fn from(e: HeunError) -> Self {
        SpecError::Invalid(e.to_string())
    }
}

#[derive(Clone, Debug)]
pub enum ParsedOperator {
    Heun(HeunOperator),
    Principal(PrincipalOperator),
}

#[derive(Clone, Debug)]
pub struct OperatorSpec {
    pub operator: ParsedOperator,
    pub params: Vec<String>,
    pub time: Option<String>,
}

impl OperatorSpec {
    pub fn heun(&self) -> Result<&HeunOperator, SpecError> {
        match &self.operator {
            ParsedOperator::Heun(op) => Ok(op),
            ParsedOperator::Principal(_) => Err(SpecError::Invalid("command needs sigma, tau, eta".into())),
        }
    }

    pub fn principal(&self) -> PrincipalOperator {
        match &self.operator {
            ParsedOperator::Heun(op) => op.principal(),
            ParsedOperator::Principal(a) => a.clone(),
        }
    }
}

const SLOTS: [&str; 5] = ["sigma", "tau", "eta", "p", "q"];

fn syntax(t: &Token, message: &str, expected: &[&str]) -> SpecError {
    SpecError::Syntax(ParseError { line: t.line, col: t.col, message: message.into(), expected: expected.iter().map(|s| s.to_string()).collect() })
}

fn ident(t: &Token) -> Option<&str> {
    match &t.tok {
        Tok::Ident(s) => Some(s),
        _ => None,
    }
}

/// `c (z - r)^n` from a factor, if it has that shape.
fn linear_power(f: &RatFunc) -> Option<(RatFunc, Option<(RatFunc, u32)>)> {
    let z = Var::z();
    if !f.depends_on(&z) {
        return Some((f.clone(), None));
    }
    if f.den().depends_on(&z) {
        return None;
    }
    let cs = f.num().coeffs_in(&z);
    let n = cs.len() - 1;
    let lead = RatFunc::new(cs[n].clone(), f.den().clone()).ok()?;
    let next = RatFunc::new(cs[n - 1].clone(), f.den().clone()).ok()?;
    let root = -&next.checked_div(&lead.scale(&crate::polyalg::rat(n as i64))).ok()?;
    let rebuilt = &lead * &(&RatFunc::var(&z) - &root).pow(n as u32);
    (rebuilt == *f && !root.depends_on(&z)).then_some((lead, Some((root, n as u32))))
}

fn sigma_factors(toks: &[Token], known: &dyn Fn(&str) -> bool) -> Result<(RatFunc, Vec<(RatFunc, u32)>), SpecError> {
    let mut chunks: Vec<&[Token]> = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, t) in toks.iter().enumerate() {
        match t.tok {
            Tok::Sym('(') => depth += 1,
            Tok::Sym(')') => depth -= 1,
            Tok::Sym('*') if depth == 0 => {
                chunks.push(&toks[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    chunks.push(&toks[start..]);
    let mut lead = RatFunc::one();
    let mut roots: Vec<(RatFunc, u32)> = Vec::new();
    for c in chunks {
        let mut v = c.to_vec();
        let last = c.last().map(|t| (t.line, t.col + 1)).unwrap_or((1, 1));
        v.push(Token { tok: Tok::End, line: last.0, col: last.1 });
        let mut p = ExprParser::new(&v, known);
        let f = p.expr()?;
        let shown = c.iter().map(|t| match &t.tok {
            Tok::Num(n) => n.to_string(),
            Tok::Ident(s) => s.clone(),
            Tok::Sym(ch) => ch.to_string(),
            Tok::End => String::new(),
        }).collect::<String>();
        let Some((k, root)) = linear_power(&f) else {
            return Err(SpecError::SigmaNotFactored { line: c[0].line, col: c[0].col, factor: shown });
        };
        lead = &lead * &k;
        if let Some((r, n)) = root {
            match roots.iter_mut().find(|(s, _)| *s == r) {
                Some(e) => e.1 += n,
                None => roots.push((r, n)),
            }
        }
    }
    if lead.is_zero() {
        return Err(SpecError::Invalid("sigma is zero".into()));
    }
    Ok((lead, roots))
}

pub fn parse_operator(src: &str) -> Result<OperatorSpec, SpecError> {
    let toks = tokenize(src, 1, 1)?;
    // declarations may appear anywhere
    let mut params: BTreeSet<String> = BTreeSet::new();
    let mut time: Option<String> = None;
    for (i, t) in toks.iter().enumerate() {
        match ident(t) {
            Some("param") => {
                let mut j = i + 1;
                while let Some(name) = toks.get(j).and_then(ident) {
                    params.insert(Var::new(name).name().to_string());
                    j += 1;
                    if toks.get(j).map(|t| t.tok == Tok::Sym(',')) != Some(true) {
                        break;
                    }
                    j += 1;
                }
            }
            Some("time") => time = toks.get(i + 1).and_then(ident).map(|s| Var::new(s).name().to_string()),
            _ => {}
        }
    }
    let declared = {
        let params = params.clone();
        let time = time.clone();
        move |s: &str| {
            let v = Var::new(s);
            v == Var::z() || params.contains(v.name()) || time.as_deref() == Some(v.name())
        }
    };
    let mut slots: [Option<RatFunc>; 5] = Default::default();
    let mut sigma_shape = None;
    let mut p = ExprParser::new(&toks, &declared);
    loop {
        let t = p.peek().clone();
        match &t.tok {
            Tok::End => break,
            Tok::Sym(';') => {
                p.advance();
            }
            Tok::Ident(kw) if kw == "param" || kw == "time" => {
                p.advance();
                loop {
                    let n = p.advance();
                    if ident(&n).is_none() {
                        return Err(syntax(&n, "expected a name", &["identifier"]));
                    }
                    if kw == "time" || p.peek().tok != Tok::Sym(',') {
                        break;
                    }
                    p.advance();
                }
            }
            Tok::Ident(kw) if SLOTS.contains(&kw.as_str()) => {
                let slot = SLOTS.iter().position(|s| s == kw).unwrap();
                p.advance();
                let eq = p.advance();
                if eq.tok != Tok::Sym('=') {
                    return Err(syntax(&eq, "expected '='", &["="]));
                }
                let start = p.position();
                let f = p.expr()?;
                if slot == 0 {
                    sigma_shape = Some(sigma_factors(&toks[start..p.position()], &declared)?);
                }
                slots[slot] = Some(f);
                match p.peek().tok {
                    Tok::Sym(';') | Tok::End | Tok::Ident(_) => {}
                    _ => return Err(syntax(p.peek(), "unexpected token", &[";", "+", "-", "*", "/", "^", "end of input"])),
                }
            }
            _ => return Err(syntax(&t, "expected a statement", &["sigma", "tau", "eta", "p", "q", "param", "time"])),
        }
    }
    let [sigma, tau, eta, pp, qq] = slots;
    let operator = if pp.is_some() || qq.is_some() {
        if sigma.is_some() || tau.is_some() || eta.is_some() {
            return Err(SpecError::Invalid("give either sigma, tau, eta or p, q".into()));
        }
        ParsedOperator::Principal(PrincipalOperator::new(pp.unwrap_or_else(RatFunc::zero), qq.unwrap_or_else(RatFunc::zero)))
    } else {
        let (lead, roots) = sigma_shape.unwrap_or((RatFunc::one(), vec![]));
        let op = HeunOperator::new(lead, roots, tau.unwrap_or_else(RatFunc::zero), eta.unwrap_or_else(RatFunc::zero))?;
        ParsedOperator::Heun(op)
    };
    let mut spec = OperatorSpec { operator, params: params.into_iter().collect(), time };
    rename_time(&mut spec)?;
    Ok(spec)
}

/// The deformation machinery works with the time called `t`.
fn rename_time(spec: &mut OperatorSpec) -> Result<(), SpecError> {
    let Some(name) = spec.time.clone() else { return Ok(()) };
    let (from, to) = (Var::new(&name), Var::t());
    if from == to {
        return Ok(());
    }
    if spec.params.iter().any(|p| Var::new(p) == to) {
        return Err(SpecError::Invalid(format!("time '{name}' cannot be renamed to t while a parameter is called t")));
    }
    let r = RatFunc::var(&to);
    let sub = |f: &RatFunc| f.substitute(&from, &r);
    spec.operator = match &spec.operator {
        ParsedOperator::Heun(op) => ParsedOperator::Heun(HeunOperator {
            lead: sub(&op.lead),
            roots: op.roots.iter().map(|(x, m)| (sub(x), *m)).collect(),
            tau: sub(&op.tau),
            eta: sub(&op.eta),
        }),
        ParsedOperator::Principal(a) => ParsedOperator::Principal(PrincipalOperator::new(sub(&a.p), sub(&a.q))),
    };
    spec.time = Some("t".into());
    Ok(())
}

/// Canonical spec text of an operator; parses back to the same operator.
pub fn print_operator(op: &HeunOperator, time: Option<&str>) -> String {
    let z = Var::z();
    let mut names: BTreeSet<String> = BTreeSet::new();
    let mut collect = |f: &RatFunc| names.extend(f.vars().into_iter().filter(|v| *v != z).map(|v| v.name().to_string()));
    collect(&op.lead);
    op.roots.iter().for_each(|(r, _)| collect(r));
    collect(&op.tau);
    collect(&op.eta);
    let mut out = String::new();
    let params: Vec<String> = names.into_iter().filter(|n| Some(n.as_str()) != time).collect();
    if !params.is_empty() {
        out.push_str(&format!("param {};\n", params.join(", ")));
    }
    if let Some(t) = time {
        out.push_str(&format!("time {t};\n"));
    }
    let mut sigma = vec![format!("({})", op.lead.to_text())];
    for (r, m) in &op.roots {
        sigma.push(format!("(z - ({}))^{m}", r.to_text()));
    }
    out.push_str(&format!("sigma = {};\n", sigma.join("*")));
    out.push_str(&format!("tau = {};\n", op.tau.to_text()));
    out.push_str(&format!("eta = {};\n", op.eta.to_text()));
    out
}
