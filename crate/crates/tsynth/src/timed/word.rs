use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

/// Finite timed word: symbol indices with non-decreasing timestamps.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TimedWord(pub Vec<(usize, Rational)>);

impl TimedWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_monotonic(&self) -> bool {
        let zero = Rational::from_integer(0);
        self.0.first().map_or(true, |(_, t)| *t >= zero) && self.0.windows(2).all(|w| w[0].1 <= w[1].1)
    }

    pub fn is_strictly_monotonic(&self) -> bool {
        self.is_monotonic() && self.0.windows(2).all(|w| w[0].1 < w[1].1)
    }

    /// Parses `(a,0)(b,2/5)(a,1.5)` against `alphabet`.
    pub fn parse(s: &str, alphabet: &[String]) -> Result<Self> {
        let mut out = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let pos = s.len() - rest.len();
            let inner_end = rest
                .find(')')
                .filter(|_| rest.starts_with('('))
                .ok_or_else(|| Error::Parse(format!("malformed timed word at position {pos}")))?;
            let inner = &rest[1..inner_end];
            let (sym, t) = inner
                .rsplit_once(',')
                .ok_or_else(|| Error::Parse(format!("malformed letter `({inner})` at position {pos}")))?;
            let sym = sym.trim();
            let idx = alphabet
                .iter()
                .position(|a| a == sym)
                .ok_or_else(|| Error::Parse(format!("unknown symbol `{sym}` at position {pos}")))?;
            out.push((
                idx,
                parse_rational(t).map_err(|e| match e {
                    Error::Parse(msg) => Error::Parse(format!("{msg} at position {pos}")),
                    e => e,
                })?,
            ));
            rest = rest[inner_end + 1..].trim_start();
        }
        let w = TimedWord(out);
        if !w.is_monotonic() {
            return Err(Error::Invalid("timestamps must be non-negative and non-decreasing".into()));
        }
        Ok(w)
    }

    pub fn display<'a>(&'a self, alphabet: &'a [String]) -> impl fmt::Display + 'a {
        WordDisplay(self, alphabet)
    }
}

/// Ultimately periodic timed word: `stem`, then `cycle` repeated with every
/// pass shifted by `period`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TimedLasso {
    pub stem: TimedWord,
    pub cycle: TimedWord,
    pub period: Rational,
}

impl TimedLasso {
    pub fn new(stem: TimedWord, cycle: TimedWord, period: Rational) -> Result<Self> {
        let zero = Rational::from_integer(0);
        let ok = !cycle.is_empty()
            && period > zero
            && stem.is_monotonic()
            && cycle.is_monotonic()
            && stem.0.last().map_or(true, |(_, t)| *t <= cycle.0[0].1)
            && cycle.0.last().unwrap().1 - cycle.0[0].1 <= period;
        if !ok {
            return Err(Error::Invalid("not a monotone lasso with a positive period".into()));
        }
        Ok(TimedLasso { stem, cycle, period })
    }

    /// Letters with the delay since the previous one: the stem and the
    /// first pass, then one more pass that repeats forever.
    pub fn delays(&self) -> (Vec<(usize, Rational)>, Vec<(usize, Rational)>) {
        let mut prefix = Vec::new();
        let mut prev = Rational::from_integer(0);
        for &(x, t) in self.stem.0.iter().chain(&self.cycle.0) {
            prefix.push((x, t - prev));
            prev = t;
        }
        let c = &self.cycle.0;
        let loop_part = (0..c.len())
            .map(|j| {
                let before = if j == 0 { c[c.len() - 1].1 - self.period } else { c[j - 1].1 };
                (c[j].0, c[j].1 - before)
            })
            .collect();
        (prefix, loop_part)
    }
}

struct WordDisplay<'a>(&'a TimedWord, &'a [String]);

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, t) in &self.0 .0 {
            write!(f, "({},{})", self.1[*a], format_rational(t))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let ab = vec!["a".to_string(), "b".to_string()];
        let w = TimedWord::parse("(a,0)(b,2/5)(a, 1.5)", &ab).unwrap();
        assert_eq!(w.display(&ab).to_string(), "(a,0)(b,2/5)(a,3/2)");
        assert!(TimedWord::parse("(a,1)(a,0)", &ab).is_err());
        assert!(TimedWord::parse("(c,1)", &ab).is_err());
        assert!(TimedWord::parse("", &ab).unwrap().is_empty());
    }
}
