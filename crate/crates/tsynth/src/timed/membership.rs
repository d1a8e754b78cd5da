use std::collections::HashSet;

use num_integer::Integer;
use num_traits::Zero;

use super::{nta_emptiness, product, region_automaton, Label, Mode, TimedAutomaton, TimedLasso, TimedWord};
use crate::error::{Error, Result};
use crate::graph;
use crate::rational::Rational;
use crate::regions::{ClockConstraint, ClockId, ClockValuation, Cmp};

/// Finite-word membership. Epsilon-free automata are simulated exactly on
/// rational valuations; otherwise the word-automaton product is used.
pub fn accepts_finite(a: &TimedAutomaton, w: &TimedWord) -> Result<bool> {
    if a.mode != Mode::Finite {
        return Err(Error::Invalid("finite membership needs a finite-mode automaton".into()));
    }
    if !w.is_monotonic() {
        return Err(Error::Invalid("timestamps must be non-decreasing".into()));
    }
    if a.has_epsilon() {
        return accepts_finite_by_product(a, w);
    }
    let out = a.outgoing();
    let mut configs: HashSet<(usize, ClockValuation)> =
        a.initial.iter().map(|&l| (l, ClockValuation::zero(a.k()))).collect();
    let mut now = Rational::zero();
    for &(x, t) in &w.0 {
        let d = t - now;
        now = t;
        let mut next = HashSet::new();
        for (l, v) in &configs {
            let v = v.delay(d);
            for &ti in &out[*l] {
                let tr = &a.transitions[ti];
                if tr.label == Label::Sym(x) && tr.guard.eval(&v) {
                    next.insert((tr.to, v.reset(&tr.resets)));
                }
            }
        }
        configs = next;
        if configs.is_empty() {
            return Ok(false);
        }
    }
    Ok(configs.iter().any(|(l, _)| a.is_final(*l)))
}

fn scaled(a: &TimedAutomaton, den: i64) -> TimedAutomaton {
    TimedAutomaton {
        transitions: a
            .transitions
            .iter()
            .map(|t| super::Transition { guard: t.guard.scale(den), ..t.clone() })
            .collect(),
        ..a.clone()
    }
}

/// Büchi membership of an ultimately periodic timed word, decided on the
/// product with a one-clock automaton generating exactly that word.
pub fn accepts_lasso(a: &TimedAutomaton, w: &TimedLasso) -> Result<bool> {
    if a.mode != Mode::Buchi {
        return Err(Error::Invalid("lasso membership needs a Büchi automaton".into()));
    }
    let (prefix, cycle) = w.delays();
    let den = prefix.iter().chain(&cycle).fold(1i64, |acc, (_, d)| acc.lcm(d.denom()));
    let mut g = TimedAutomaton::new(a.alphabet.clone(), vec!["w".into()], Mode::Buchi);
    for i in 0..prefix.len() + cycle.len() {
        g.add_location(format!("w{i}"));
    }
    let head = prefix.len();
    g.initial = vec![0];
    g.final_sets = vec![vec![head]];
    let edge = |g: &mut TimedAutomaton, from: usize, (x, d): (usize, Rational), to: usize| {
        let gap = (d * Rational::from_integer(den)).to_integer();
        g.add_transition(from, Label::Sym(x), ClockConstraint::atom(ClockId(0), Cmp::Eq, gap), vec![ClockId(0)], to);
    };
    for (i, &l) in prefix.iter().enumerate() {
        edge(&mut g, i, l, i + 1);
    }
    for (j, &l) in cycle.iter().enumerate() {
        let to = if j + 1 == cycle.len() { head } else { head + j + 1 };
        edge(&mut g, head + j, l, to);
    }
    Ok(nta_emptiness(&product(&scaled(a, den), &g)?)?.is_some())
}

/// Membership through emptiness of the product with a one-clock automaton
/// reading exactly `w`, after scaling all constants to integers.
pub fn accepts_finite_by_product(a: &TimedAutomaton, w: &TimedWord) -> Result<bool> {
    let den = w.0.iter().fold(1i64, |acc, (_, t)| acc.lcm(t.denom()));
    let scaled = scaled(a, den);
    let mut word_aut = TimedAutomaton::new(a.alphabet.clone(), vec!["w".into()], Mode::Finite);
    for i in 0..=w.len() {
        word_aut.add_location(format!("w{i}"));
    }
    word_aut.initial = vec![0];
    word_aut.final_sets = vec![vec![w.len()]];
    let mut prev = Rational::zero();
    for (i, &(x, t)) in w.0.iter().enumerate() {
        let gap = ((t - prev) * Rational::from_integer(den)).to_integer();
        prev = t;
        word_aut.add_transition(
            i,
            Label::Sym(x),
            ClockConstraint::atom(ClockId(0), Cmp::Eq, gap),
            vec![ClockId(0)],
            i + 1,
        );
    }
    let p = product(&scaled, &word_aut)?;
    let ra = region_automaton(&p, p.max_constant())?;
    let u = &ra.automaton;
    let reach = graph::reachable(u.num_states(), &u.successors(), &u.initial);
    Ok((0..u.num_states()).any(|q| reach[q] && u.in_all(q as u32)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn example_words() {
        let a = fixtures::example_l();
        let p = |s: &str| TimedWord::parse(s, &a.alphabet).unwrap();
        assert!(accepts_finite(&a, &p("(a,0)(a,2/5)(a,1)")).unwrap());
        assert!(!accepts_finite(&a, &p("(a,0)(a,1/2)(a,6/5)")).unwrap());
        assert!(accepts_finite_by_product(&a, &p("(a,0)(a,2/5)(a,1)")).unwrap());
        assert!(!accepts_finite_by_product(&a, &p("(a,0)(a,1/2)(a,6/5)")).unwrap());
    }

    #[test]
    fn periodic_words() {
        let mut a = TimedAutomaton::new(vec!["a".into()], vec!["x".into()], Mode::Finite);
        let p = a.add_location("p");
        let q = a.add_location("q");
        a.initial = vec![p];
        a.final_sets = vec![vec![q]];
        a.add_transition(p, Label::Sym(0), ClockConstraint::atom(ClockId(0), Cmp::Eq, 0), vec![], q);
        let b = super::super::suffix_omega(&a).unwrap();
        let w = |s: &str| TimedWord::parse(s, &b.alphabet).unwrap();
        let one = Rational::from_integer(1);
        let good = TimedLasso::new(w("(a,0)"), w("(a,1)"), one).unwrap();
        let bad = TimedLasso::new(w(""), w("(a,1)"), one).unwrap();
        assert!(accepts_lasso(&b, &good).unwrap());
        assert!(!accepts_lasso(&b, &bad).unwrap());
        assert!(TimedLasso::new(w(""), w("(a,0)(a,2)"), one).is_err());
    }
}
