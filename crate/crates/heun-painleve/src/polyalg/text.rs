//! Parser for the canonical text form and for operator specifications.
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { ("*" | "/") unary } ;
//! unary   = "-" unary | "+" unary | power ;
//! power   = atom [ "^" integer ] ;
//! atom    = number | identifier | "(" expr ")" ;
//! number  = digit { digit } [ "." digit { digit } ] ;
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::mpoly::MPoly;
use super::ratfunc::RatFunc;
use super::var::Var;
use super::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected one of: {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Num(Rat),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn tokenize(src: &str, line0: usize, col0: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (line0, col0);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (l0, c0) = (line, col);
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let mut frac = String::new();
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    frac.push(chars[i]);
                    i += 1;
                }
            }
            let int_part: String = chars[start..i].iter().take_while(|c| c.is_ascii_digit()).collect();
            let digits = format!("{int_part}{frac}");
            let n: BigInt = digits.parse().expect("digits");
            let d = num_traits::pow::pow(BigInt::from(10), frac.len());
            out.push(Token {
                tok: Tok::Num(Rat::new(n, d)),
                line: l0,
                col: c0,
            });
            col += i - start;
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token {
                tok: Tok::Ident(s),
                line: l0,
                col: c0,
            });
            col += i - start;
            continue;
        }
        let c = match c {
            '−' | '–' => '-',
            '·' => '*',
            other => other,
        };
        if "+-*/^()=;,".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                line: l0,
                col: c0,
            });
            i += 1;
            col += 1;
            continue;
        }
        return Err(ParseError {
            line: l0,
            col: c0,
            message: format!("unexpected character '{c}'"),
            expected: vec![],
        });
    }
    out.push(Token {
        tok: Tok::End,
        line,
        col,
    });
    Ok(out)
}

/// Recursive-descent expression parser over a token slice.
pub struct ExprParser<'a> {
    toks: &'a [Token],
    pos: usize,
    known: &'a dyn Fn(&str) -> bool,
}

impl<'a> ExprParser<'a> {
    pub fn new(toks: &'a [Token], known: &'a dyn Fn(&str) -> bool) -> Self {
        ExprParser { toks, pos: 0, known }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn peek(&self) -> &Token {
        &self.toks[self.pos.min(self.toks.len() - 1)]
    }

    pub fn advance(&mut self) -> Token {
        let t = self.peek().clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    pub fn error(&self, message: &str, expected: &[&str]) -> ParseError {
        let t = self.peek();
        ParseError {
            line: t.line,
            col: t.col,
            message: message.to_string(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn expr(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Sym('+') => {
                    self.advance();
                    acc = &acc + &self.term()?;
                }
                Tok::Sym('-') => {
                    self.advance();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Sym('*') => {
                    self.advance();
                    acc = &acc * &self.unary()?;
                }
                Tok::Sym('/') => {
                    self.advance();
                    let at = self.peek().clone();
                    let d = self.unary()?;
                    acc = acc.checked_div(&d).map_err(|_| ParseError {
                        line: at.line,
                        col: at.col,
                        message: "division by zero".into(),
                        expected: vec![],
                    })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc, ParseError> {
        match self.peek().tok {
            Tok::Sym('-') => {
                self.advance();
                Ok(-self.unary()?)
            }
            Tok::Sym('+') => {
                self.advance();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc, ParseError> {
        let base = self.atom()?;
        if let Tok::Sym('^') = self.peek().tok {
            self.advance();
            match self.peek().tok.clone() {
                Tok::Num(n) if n.is_integer() && n >= Rat::zero() => {
                    self.advance();
                    let e: u32 = n
                        .to_integer()
                        .try_into()
                        .map_err(|_| self.error("exponent too large", &[]))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(self.error("expected a nonnegative integer exponent", &["integer"])),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFunc, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Num(n) => {
                self.advance();
                Ok(RatFunc::constant(n))
            }
            Tok::Ident(name) => {
                if !(self.known)(&name) {
                    return Err(ParseError {
                        line: t.line,
                        col: t.col,
                        message: format!("undeclared parameter '{name}'"),
                        expected: vec![],
                    });
                }
                self.advance();
                Ok(RatFunc::var(&Var::new(&name)))
            }
            Tok::Sym('(') => {
                self.advance();
                let e = self.expr()?;
                match self.peek().tok {
                    Tok::Sym(')') => {
                        self.advance();
                        Ok(e)
                    }
                    _ => Err(self.error("unbalanced parenthesis", &[")", "+", "-", "*", "/"])),
                }
            }
            _ => Err(self.error("expected an operand", &["number", "identifier", "("])),
        }
    }
}

/// Parses a complete expression; every identifier is accepted.
pub fn parse_ratfunc(src: &str) -> Result<RatFunc, ParseError> {
    let toks = tokenize(src, 1, 1)?;
    let accept = |_: &str| true;
    let mut p = ExprParser::new(&toks, &accept);
    let e = p.expr()?;
    if p.peek().tok != Tok::End {
        return Err(p.error("trailing input", &["+", "-", "*", "/", "end of input"]));
    }
    Ok(e)
}

pub fn parse_mpoly(src: &str) -> Result<MPoly, ParseError> {
    let f = parse_ratfunc(src)?;
    if f.is_poly() {
        Ok(f.num().clone())
    } else {
        Err(ParseError {
            line: 1,
            col: 1,
            message: "expected a polynomial".into(),
            expected: vec![],
        })
    }
}

pub fn parse_rat(src: &str) -> Result<Rat, ParseError> {
    let f = parse_ratfunc(src)?;
    f.constant_value().ok_or(ParseError {
        line: 1,
        col: 1,
        message: "expected a rational constant".into(),
        expected: vec![],
    })
}

pub fn rat_one() -> Rat {
    Rat::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_round_trip() {
        for s in ["z^2 - 1", "(1)/(z - lambda)", "-3/2*t*z + a", "0", "(2*z)/(z^2 - t)"] {
            let f = parse_ratfunc(s).unwrap();
            let again = parse_ratfunc(&f.to_string()).unwrap();
            assert_eq!(f, again);
            assert_eq!(f.to_string(), again.to_string());
        }
    }

    #[test]
    fn errors_carry_position() {
        let e = parse_ratfunc("z^2 +\n  * 3").unwrap_err();
        assert_eq!((e.line, e.col), (2, 3));
        let e = parse_ratfunc("1/0").unwrap_err();
        assert!(e.message.contains("division by zero"));
        let e = parse_ratfunc("(z + 1").unwrap_err();
        assert!(e.expected.contains(&")".to_string()));
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_rat("0.25").unwrap(), Rat::new(1.into(), 4.into()));
    }
}
