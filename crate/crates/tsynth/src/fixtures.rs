//! Automata and games used in examples, tests and the `fixtures` command.

use crate::regions::{ClockConstraint, ClockId, Cmp};
use crate::synthesis::GameSpec;
use crate::timed::{Label, Mode, TimedAutomaton};

fn c(x: usize) -> ClockId {
    ClockId(x)
}

fn atom(x: usize, cmp: Cmp, k: i64) -> ClockConstraint {
    ClockConstraint::atom(c(x), cmp, k)
}

/// Words over {a} whose last letter comes exactly one time unit after an
/// earlier letter.
pub fn example_l() -> TimedAutomaton {
    let mut a = TimedAutomaton::new(vec!["a".into()], vec!["x".into()], Mode::Finite);
    let p = a.add_location("p");
    let q = a.add_location("q");
    let r = a.add_location("r");
    a.initial = vec![p];
    a.final_sets = vec![vec![r]];
    a.add_transition(p, Label::Sym(0), ClockConstraint::True, vec![], p);
    a.add_transition(p, Label::Sym(0), ClockConstraint::True, vec![c(0)], q);
    a.add_transition(q, Label::Sym(0), atom(0, Cmp::Lt, 1), vec![], q);
    a.add_transition(q, Label::Sym(0), atom(0, Cmp::Eq, 1), vec![], r);
    a
}

/// Complement of [`example_l`] with two clocks. Accepts words of length at
/// most one, words spanning less than one time unit, words with a
/// position `i` such that the last letter is more than one unit after `i`
/// and less than one unit after `i + 1`, and words whose last two letters
/// share a timestamp (the automaton above never ends on such a pair).
pub fn example_l_complement() -> TimedAutomaton {
    let mut a = TimedAutomaton::new(vec!["a".into()], vec!["x".into(), "y".into()], Mode::Finite);
    let s0 = a.add_location("start");
    let s1 = a.add_location("single");
    let m2 = a.add_location("short");
    let m2f = a.add_location("short_end");
    let p3 = a.add_location("wait");
    let q3 = a.add_location("marked");
    let r3 = a.add_location("after");
    let f3 = a.add_location("gap_end");
    a.initial = vec![s0];
    a.final_sets = vec![vec![s0, s1, m2f, f3]];
    let a_ = Label::Sym(0);
    let t = ClockConstraint::True;
    // length at most one
    a.add_transition(s0, a_, t.clone(), vec![], s1);
    // whole word within less than one unit of the first letter
    a.add_transition(s0, a_, t.clone(), vec![c(0)], m2);
    a.add_transition(m2, a_, atom(0, Cmp::Lt, 1), vec![], m2f);
    a.add_transition(m2f, a_, atom(0, Cmp::Lt, 1), vec![], m2f);
    // a gap straddling the last letter minus one
    a.add_transition(s0, a_, t.clone(), vec![], p3);
    a.add_transition(p3, a_, t.clone(), vec![], p3);
    a.add_transition(s0, a_, t.clone(), vec![c(0)], q3);
    a.add_transition(p3, a_, t.clone(), vec![c(0)], q3);
    a.add_transition(q3, a_, t.clone(), vec![c(1)], r3);
    a.add_transition(q3, a_, atom(0, Cmp::Gt, 1), vec![c(1)], f3);
    a.add_transition(r3, a_, t, vec![], r3);
    let end = ClockConstraint::and(vec![atom(0, Cmp::Gt, 1), atom(1, Cmp::Lt, 1)]);
    a.add_transition(r3, a_, end, vec![], f3);
    // last two letters simultaneous
    let z4 = a.add_location("penultimate");
    let f4 = a.add_location("tie_end");
    a.final_sets[0].push(f4);
    a.add_transition(s0, a_, ClockConstraint::True, vec![c(1)], z4);
    a.add_transition(p3, a_, ClockConstraint::True, vec![c(1)], z4);
    a.add_transition(z4, a_, atom(1, Cmp::Eq, 0), vec![], f4);
    a
}

/// Strictly monotonic words whose last letter is exactly one time unit
/// after the letter `2^k` positions earlier. Clocks `x0..xk, y0..yk`;
/// `x0` enforces strict monotonicity, `y0` measures the distance, and the
/// pairs `(xj, yj)` form a binary counter in which `xj = yj` encodes 0.
pub fn example_lk(k: usize) -> TimedAutomaton {
    let mut clocks: Vec<String> = (0..=k).map(|j| format!("x{j}")).collect();
    clocks.extend((0..=k).map(|j| format!("y{j}")));
    let x = |j: usize| c(j);
    let y = |j: usize| c(k + 1 + j);
    let mut a = TimedAutomaton::new(vec!["a".into()], clocks, Mode::Finite);
    let first = a.add_location("first");
    let wait = a.add_location("wait");
    let count = a.add_location("count");
    let done = a.add_location("done");
    a.initial = vec![first];
    a.final_sets = vec![vec![done]];
    let sym = Label::Sym(0);
    let strict = ClockConstraint::atom(x(0), Cmp::Gt, 0);
    let one = |j: usize| ClockConstraint::diag(x(j), y(j), Cmp::Lt, 0);
    let zero = |j: usize| ClockConstraint::diag(x(j), y(j), Cmp::Eq, 0);
    let mut start_resets = vec![x(0), y(0)];
    for j in 1..=k {
        start_resets.push(x(j));
        start_resets.push(y(j));
    }
    // first letter: either skip it or mark it as the reference position
    a.add_transition(first, sym, ClockConstraint::True, vec![x(0)], wait);
    a.add_transition(first, sym, ClockConstraint::True, start_resets.clone(), count);
    a.add_transition(wait, sym, strict.clone(), vec![x(0)], wait);
    a.add_transition(wait, sym, strict.clone(), start_resets, count);
    // increment: bits below j0 are one and get cleared, bit j0 becomes one
    for j0 in 1..=k {
        let mut guard = vec![strict.clone(), zero(j0)];
        let mut resets = vec![x(0), x(j0)];
        for j in 1..j0 {
            guard.push(one(j));
            resets.push(x(j));
            resets.push(y(j));
        }
        a.add_transition(count, sym, ClockConstraint::and(guard), resets, count);
    }
    let mut last = vec![strict, ClockConstraint::atom(y(0), Cmp::Eq, 1)];
    last.extend((1..=k).map(one));
    a.add_transition(count, sym, ClockConstraint::and(last), vec![x(0)], done);
    a
}

/// The point languages `{(a,1)}` and `{(a,2)}`.
pub fn points() -> (TimedAutomaton, TimedAutomaton) {
    let at = |t: i64| {
        let mut a = TimedAutomaton::new(vec!["a".into()], vec!["x".into()], Mode::Finite);
        let p = a.add_location("p");
        let q = a.add_location("q");
        a.initial = vec![p];
        a.final_sets = vec![vec![q]];
        a.add_transition(p, Label::Sym(0), atom(0, Cmp::Eq, t), vec![], q);
        a
    };
    (at(1), at(2))
}

fn deadline(late_bad: bool, early_ok: bool) -> GameSpec {
    let a = vec!["a".to_string()];
    let b = vec!["b_bad".to_string(), "b_ok".to_string()];
    let mut w = TimedAutomaton::new(vec!["a|b_bad".into(), "a|b_ok".into()], vec!["g".into()], Mode::Buchi);
    let wait = w.add_location("wait");
    let won = w.add_location("won");
    w.initial = vec![wait];
    w.final_sets = vec![vec![won]];
    let t = ClockConstraint::True;
    for x in 0..2 {
        w.add_transition(wait, Label::Sym(x), t.clone(), vec![], wait);
        w.add_transition(won, Label::Sym(x), t.clone(), vec![], won);
    }
    if late_bad {
        w.add_transition(wait, Label::Sym(0), atom(0, Cmp::Ge, 1), vec![], won);
    }
    if early_ok {
        w.add_transition(wait, Label::Sym(1), atom(0, Cmp::Lt, 1), vec![], won);
    }
    GameSpec::new(a, b, w).expect("well-formed game")
}

/// Player I wins once Player II answers `b_bad` at time 1 or later, or
/// `b_ok` before time 1. Winnable for Player II with one clock and
/// constant 1, not without clocks.
pub fn deadline_game() -> GameSpec {
    deadline(true, true)
}

/// Player I wins once Player II answers `b_bad` at time 1 or later.
pub fn deadline_one_sided() -> GameSpec {
    deadline(true, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::timed::{accepts_finite, TimedWord};

    fn acc(a: &TimedAutomaton, w: &str) -> bool {
        accepts_finite(a, &TimedWord::parse(w, &a.alphabet).unwrap()).unwrap()
    }

    #[test]
    fn complement_examples() {
        let c = example_l_complement();
        assert!(acc(&c, ""));
        assert!(acc(&c, "(a,3)"));
        assert!(acc(&c, "(a,0)(a,1/2)(a,6/5)"));
        assert!(!acc(&c, "(a,0)(a,2/5)(a,1)"));
        assert!(!acc(&c, "(a,0)(a,1)"));
        assert!(acc(&c, "(a,0)(a,1)(a,1)"));
        assert!(!acc(&example_l(), "(a,0)(a,1)(a,1)"));
    }

    #[test]
    fn lk_counts() {
        let a1 = example_lk(1);
        assert_eq!(a1.clocks.len(), 4);
        assert!(acc(&a1, "(a,0)(a,1/2)(a,1)"));
        assert!(!acc(&a1, "(a,0)(a,1)"));
        assert!(!acc(&a1, "(a,0)(a,1/3)(a,2/3)(a,1)"));
        assert!(acc(&a1, "(a,1/4)(a,1/2)(a,1)(a,3/2)"));
        let a2 = example_lk(2);
        assert!(acc(&a2, "(a,0)(a,1/4)(a,1/2)(a,3/4)(a,1)"));
        assert!(!acc(&a2, "(a,0)(a,1/4)(a,1/2)(a,1)"));
        assert!(!acc(&a2, "(a,0)(a,1/4)(a,1/2)(a,3/4)(a,4/5)(a,1)"));
        let a0 = example_lk(0);
        assert!(acc(&a0, "(a,0)(a,1)"));
        assert!(!acc(&a0, "(a,0)(a,1/2)(a,1)"));
    }
}
