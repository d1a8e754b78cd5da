use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::ClockValuation;
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClockId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cmp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Cmp {
    fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Eq => "=",
            Cmp::Ge => ">=",
            Cmp::Gt => ">",
        }
    }

    pub fn holds(self, ord: std::cmp::Ordering) -> bool {
        use std::cmp::Ordering::*;
        match self {
            Cmp::Lt => ord == Less,
            Cmp::Le => ord != Greater,
            Cmp::Eq => ord == Equal,
            Cmp::Ge => ord != Less,
            Cmp::Gt => ord == Greater,
        }
    }
}

/// `x ~ c` when `y` is `None`, otherwise `x - y ~ c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub x: ClockId,
    pub y: Option<ClockId>,
    pub cmp: Cmp,
    pub c: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ClockConstraint {
    True,
    False,
    Atom(Atom),
    Not(Box<ClockConstraint>),
    And(Vec<ClockConstraint>),
    Or(Vec<ClockConstraint>),
}

impl ClockConstraint {
    pub fn atom(x: ClockId, cmp: Cmp, c: i64) -> Self {
        ClockConstraint::Atom(Atom { x, y: None, cmp, c })
    }

    pub fn diag(x: ClockId, y: ClockId, cmp: Cmp, c: i64) -> Self {
        ClockConstraint::Atom(Atom { x, y: Some(y), cmp, c })
    }

    /// Conjunction with trivial operands folded away.
    pub fn and(parts: Vec<ClockConstraint>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                ClockConstraint::True => {}
                ClockConstraint::False => return ClockConstraint::False,
                ClockConstraint::And(inner) => out.extend(inner),
                p => out.push(p),
            }
        }
        match out.len() {
            0 => ClockConstraint::True,
            1 => out.pop().unwrap(),
            _ => ClockConstraint::And(out),
        }
    }

    pub fn or(parts: Vec<ClockConstraint>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                ClockConstraint::False => {}
                ClockConstraint::True => return ClockConstraint::True,
                ClockConstraint::Or(inner) => out.extend(inner),
                p => out.push(p),
            }
        }
        match out.len() {
            0 => ClockConstraint::False,
            1 => out.pop().unwrap(),
            _ => ClockConstraint::Or(out),
        }
    }

    pub fn negate(self) -> Self {
        match self {
            ClockConstraint::True => ClockConstraint::False,
            ClockConstraint::False => ClockConstraint::True,
            ClockConstraint::Not(inner) => *inner,
            c => ClockConstraint::Not(Box::new(c)),
        }
    }

    pub fn eval(&self, v: &ClockValuation) -> bool {
        match self {
            ClockConstraint::True => true,
            ClockConstraint::False => false,
            ClockConstraint::Atom(a) => {
                let lhs: Rational = match a.y {
                    None => v.get(a.x),
                    Some(y) => v.get(a.x) - v.get(y),
                };
                a.cmp.holds(lhs.cmp(&Rational::from_integer(a.c)))
            }
            ClockConstraint::Not(c) => !c.eval(v),
            ClockConstraint::And(cs) => cs.iter().all(|c| c.eval(v)),
            ClockConstraint::Or(cs) => cs.iter().any(|c| c.eval(v)),
        }
    }

    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<Atom>) {
        match self {
            ClockConstraint::Atom(a) => out.push(*a),
            ClockConstraint::Not(c) => c.collect_atoms(out),
            ClockConstraint::And(cs) | ClockConstraint::Or(cs) => cs.iter().for_each(|c| c.collect_atoms(out)),
            _ => {}
        }
    }

    /// Largest absolute constant occurring in an atom.
    pub fn max_constant(&self) -> u32 {
        self.atoms().iter().map(|a| a.c.unsigned_abs() as u32).max().unwrap_or(0)
    }

    /// Unordered clock pairs compared by diagonal atoms, as `(min, max)`.
    pub fn diagonal_pairs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self
            .atoms()
            .iter()
            .filter_map(|a| a.y.map(|y| (a.x.0.min(y.0), a.x.0.max(y.0))))
            .filter(|(a, b)| a != b)
            .collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn map_clocks(&self, f: &impl Fn(ClockId) -> ClockId) -> ClockConstraint {
        match self {
            ClockConstraint::Atom(a) => ClockConstraint::Atom(Atom { x: f(a.x), y: a.y.map(f), ..*a }),
            ClockConstraint::Not(c) => ClockConstraint::Not(Box::new(c.map_clocks(f))),
            ClockConstraint::And(cs) => ClockConstraint::And(cs.iter().map(|c| c.map_clocks(f)).collect()),
            ClockConstraint::Or(cs) => ClockConstraint::Or(cs.iter().map(|c| c.map_clocks(f)).collect()),
            c => c.clone(),
        }
    }

    /// Rewrites every atom through `f`.
    pub fn map_atoms(&self, f: &impl Fn(&Atom) -> ClockConstraint) -> ClockConstraint {
        match self {
            ClockConstraint::Atom(a) => f(a),
            ClockConstraint::Not(c) => c.map_atoms(f).negate(),
            ClockConstraint::And(cs) => ClockConstraint::and(cs.iter().map(|c| c.map_atoms(f)).collect()),
            ClockConstraint::Or(cs) => ClockConstraint::or(cs.iter().map(|c| c.map_atoms(f)).collect()),
            c => c.clone(),
        }
    }

    /// Multiplies every constant by `factor`.
    pub fn scale(&self, factor: i64) -> ClockConstraint {
        self.map_atoms(&|a| ClockConstraint::Atom(Atom { c: a.c * factor, ..*a }))
    }

    pub fn display(&self, names: &[String]) -> String {
        let mut s = String::new();
        self.write(names, &mut s);
        s
    }

    fn write(&self, names: &[String], s: &mut String) {
        let wrapped = |c: &ClockConstraint, s: &mut String| match c {
            ClockConstraint::And(_) | ClockConstraint::Or(_) => {
                s.push('(');
                c.write(names, s);
                s.push(')');
            }
            c => c.write(names, s),
        };
        match self {
            ClockConstraint::True => s.push_str("true"),
            ClockConstraint::False => s.push_str("false"),
            ClockConstraint::Atom(a) => {
                s.push_str(&names[a.x.0]);
                if let Some(y) = a.y {
                    let _ = write!(s, " - {}", names[y.0]);
                }
                let _ = write!(s, " {} {}", a.cmp.symbol(), a.c);
            }
            ClockConstraint::Not(c) => {
                s.push('!');
                match **c {
                    ClockConstraint::Atom(_) => {
                        s.push('(');
                        c.write(names, s);
                        s.push(')');
                    }
                    _ => wrapped(c, s),
                }
            }
            ClockConstraint::And(cs) | ClockConstraint::Or(cs) => {
                let sep = if matches!(self, ClockConstraint::And(_)) { " && " } else { " || " };
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        s.push_str(sep);
                    }
                    wrapped(c, s);
                }
            }
        }
    }

    /// Parses the concrete syntax, resolving clock names against `names`.
    pub fn parse(input: &str, names: &[String]) -> Result<ClockConstraint> {
        let tokens = tokenize(input)?;
        let mut p = Parser { tokens, pos: 0, names, input };
        let c = p.or()?;
        if p.pos != p.tokens.len() {
            return Err(p.err("trailing input"));
        }
        Ok(c)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Minus,
    Cmp(Cmp),
    Not,
    And,
    Or,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let b = s.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    let err = |msg: &str| Error::Parse(format!("{msg} in constraint `{s}`"));
    while i < b.len() {
        let c = b[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'(' => {
                out.push(Tok::LParen);
                i += 1
            }
            b')' => {
                out.push(Tok::RParen);
                i += 1
            }
            b'-' => {
                out.push(Tok::Minus);
                i += 1
            }
            b'!' if b.get(i + 1) != Some(&b'=') => {
                out.push(Tok::Not);
                i += 1
            }
            b'&' if b.get(i + 1) == Some(&b'&') => {
                out.push(Tok::And);
                i += 2
            }
            b'|' if b.get(i + 1) == Some(&b'|') => {
                out.push(Tok::Or);
                i += 2
            }
            b'<' | b'>' | b'=' => {
                let eq_next = b.get(i + 1) == Some(&b'=');
                let cmp = match (c, eq_next) {
                    (b'<', true) => Cmp::Le,
                    (b'<', false) => Cmp::Lt,
                    (b'>', true) => Cmp::Ge,
                    (b'>', false) => Cmp::Gt,
                    _ => Cmp::Eq,
                };
                out.push(Tok::Cmp(cmp));
                i += if eq_next { 2 } else { 1 };
            }
            b'0'..=b'9' => {
                let start = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                let v = s[start..i].parse().map_err(|_| err("integer out of range"))?;
                out.push(Tok::Int(v));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                    i += 1;
                }
                out.push(Tok::Ident(s[start..i].to_string()));
            }
            _ => return Err(err(&format!("unexpected character `{}`", c as char))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Tok>,
    pos: usize,
    names: &'a [String],
    input: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at token {} in constraint `{}`", self.pos, self.input))
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn or(&mut self) -> Result<ClockConstraint> {
        let mut parts = vec![self.and()?];
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            parts.push(self.and()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { ClockConstraint::Or(parts) })
    }

    fn and(&mut self) -> Result<ClockConstraint> {
        let mut parts = vec![self.unary()?];
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { ClockConstraint::And(parts) })
    }

    fn unary(&mut self) -> Result<ClockConstraint> {
        match self.next() {
            Some(Tok::Not) => Ok(ClockConstraint::Not(Box::new(self.unary()?))),
            Some(Tok::LParen) => {
                let c = self.or()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(c),
                    _ => Err(self.err("expected `)`")),
                }
            }
            Some(Tok::Ident(id)) if id == "true" => Ok(ClockConstraint::True),
            Some(Tok::Ident(id)) if id == "false" => Ok(ClockConstraint::False),
            Some(Tok::Ident(id)) => self.atom(id),
            _ => Err(self.err("expected a constraint")),
        }
    }

    fn clock(&self, id: &str) -> Result<ClockId> {
        self.names
            .iter()
            .position(|n| n == id)
            .map(ClockId)
            .ok_or_else(|| Error::Parse(format!("unknown clock `{id}` in constraint `{}`", self.input)))
    }

    fn atom(&mut self, first: String) -> Result<ClockConstraint> {
        let x = self.clock(&first)?;
        let mut y = None;
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            match self.next() {
                Some(Tok::Ident(id)) => y = Some(self.clock(&id)?),
                _ => return Err(self.err("expected a clock after `-`")),
            }
        }
        let cmp = match self.next() {
            Some(Tok::Cmp(c)) => c,
            _ => return Err(self.err("expected a comparison")),
        };
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let c = match self.next() {
            Some(Tok::Int(c)) => c,
            _ => return Err(self.err("expected an integer constant")),
        };
        Ok(ClockConstraint::Atom(Atom { x, y, cmp, c: if neg { -c } else { c } }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn round_trips() {
        for s in [
            "x - y <= 3",
            "x >= 1",
            "x = 0",
            "true",
            "!(x < 1)",
            "x > 0 && x < 1",
            "(x > 0 && y = 1) || x - y < -2",
            "!(x = 0 || y = 0)",
        ] {
            let c = ClockConstraint::parse(s, &names()).unwrap();
            assert_eq!(c.display(&names()), s);
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(ClockConstraint::parse("x <", &names()).is_err());
        assert!(ClockConstraint::parse("z < 1", &names()).is_err());
        assert!(ClockConstraint::parse("x < 1 &&", &names()).is_err());
    }

    #[test]
    fn evaluates() {
        let c = ClockConstraint::parse("x - y <= 3 && y > 0", &names()).unwrap();
        let v = ClockValuation(vec![Rational::new(7, 2), Rational::new(1, 2)]);
        assert!(c.eval(&v));
        let v = ClockValuation(vec![Rational::new(9, 2), Rational::new(1, 2)]);
        assert!(!c.eval(&v));
    }
}
