use super::enriched::Enriched;
use crate::regions::{ClockConstraint, ClockId, Cmp};
use crate::timed::{Label, Mode, TimedAutomaton};

/// Decoded letter of `A' × B'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Letter {
    pub index: usize,
    /// Player I letter, `None` for tick.
    pub a: Option<usize>,
    pub f: usize,
    /// Player II letter, `None` for tick.
    pub b: Option<usize>,
    pub requests: u32,
}

impl Letter {
    pub fn all(e: &Enriched) -> Vec<Letter> {
        let nb2 = e.b_size();
        (0..e.a_size() * nb2)
            .map(|index| {
                let (a, f) = e.split_a(index / nb2);
                let (b, requests) = e.split_b(index % nb2);
                Letter { index, a: (a < e.na()).then_some(a), f, b: (b < e.nb()).then_some(b), requests }
            })
            .collect()
    }

    pub fn requests(&self, x: usize) -> bool {
        self.requests >> x & 1 == 1
    }
}

fn h(x: usize) -> ClockId {
    ClockId(x)
}

fn atom(x: usize, cmp: Cmp, c: i64) -> ClockConstraint {
    ClockConstraint::atom(h(x), cmp, c)
}

fn not(c: ClockConstraint) -> ClockConstraint {
    c.negate()
}

/// Builder for monitors whose first `k` clocks are the request clocks,
/// reset on every letter requesting them. Keeping that layout in every
/// component lets products merge the copies.
struct Monitor<'a> {
    e: &'a Enriched,
    letters: &'a [Letter],
    t: TimedAutomaton,
}

impl<'a> Monitor<'a> {
    fn new(e: &'a Enriched, letters: &'a [Letter], extra: &[&str], locations: &[&str]) -> Self {
        let mut clocks: Vec<String> = (1..=e.k).map(|i| format!("h{i}")).collect();
        clocks.extend(extra.iter().map(|s| s.to_string()));
        let mut t = TimedAutomaton::new(e.alphabet(), clocks, Mode::Buchi);
        for l in locations {
            t.add_location(*l);
        }
        t.initial = vec![0];
        Monitor { e, letters, t }
    }

    fn edge(&mut self, from: usize, l: &Letter, guard: ClockConstraint, extra_resets: &[usize], to: usize) {
        if guard == ClockConstraint::False {
            return;
        }
        let mut resets: Vec<ClockId> = (0..self.e.k).filter(|&x| l.requests(x)).map(h).collect();
        resets.extend(extra_resets.iter().map(|&c| ClockId(self.e.k + c)));
        self.t.add_transition(from, Label::Sym(l.index), guard, resets, to);
    }

    /// Adds a self-loop on every letter at `loc`.
    fn absorbing(&mut self, loc: usize) {
        for l in self.letters {
            self.edge(loc, l, ClockConstraint::True, &[], loc);
        }
    }

    fn finish(mut self, finals: Vec<usize>) -> TimedAutomaton {
        self.t.final_sets = vec![finals];
        self.t
    }
}

const OK: [&str; 2] = ["ok", "bad"];

/// For clock `x`: Player I reports `x` expired exactly when the
/// latest `x`-request is one time unit old.
fn expiry_monitor(e: &Enriched, letters: &[Letter], x: usize) -> TimedAutomaton {
    let mut m = Monitor::new(e, letters, &[], &["unseen", "seen", "bad"]);
    let (unseen, seen, bad) = (0, 1, 2);
    for l in letters {
        let expired = e.fregions[l.f].value(x) == Some(0);
        let next = if l.requests(x) { seen } else { unseen };
        if expired {
            m.edge(unseen, l, ClockConstraint::True, &[], bad);
        } else {
            m.edge(unseen, l, ClockConstraint::True, &[], next);
        }
        let at_one = atom(x, Cmp::Eq, 1);
        let (good, wrong) = if expired { (at_one.clone(), not(at_one)) } else { (not(at_one.clone()), at_one) };
        m.edge(seen, l, good, &[], seen);
        m.edge(seen, l, wrong, &[], bad);
    }
    m.absorbing(bad);
    m.finish(vec![unseen, seen])
}

/// For clock `x`: `x` is tracked exactly when its latest
/// request lies in the last time unit, strictly in the past.
fn tracking_monitor(e: &Enriched, letters: &[Letter], x: usize) -> TimedAutomaton {
    let mut m = Monitor::new(e, letters, &[], &["unseen", "seen", "bad"]);
    let (unseen, seen, bad) = (0, 1, 2);
    for l in letters {
        let tracked = e.fregions[l.f].in_dom(x);
        let next = if l.requests(x) { seen } else { unseen };
        m.edge(unseen, l, ClockConstraint::True, &[], if tracked { bad } else { next });
        let live = ClockConstraint::and(vec![atom(x, Cmp::Gt, 0), atom(x, Cmp::Le, 1)]);
        let (good, wrong) = if tracked { (live.clone(), not(live)) } else { (not(live.clone()), live) };
        m.edge(seen, l, good, &[], seen);
        m.edge(seen, l, wrong, &[], bad);
    }
    m.absorbing(bad);
    m.finish(vec![unseen, seen])
}

/// Constraint on request clocks saying the submitted fractional region
/// agrees with the region of the request clocks at constant 1.
pub(crate) fn fregion_guard(e: &Enriched, f: usize) -> ClockConstraint {
    let f = &e.fregions[f];
    let dom: Vec<usize> = f.dom().iter().map(|c| c.0).collect();
    let bounded = |x: usize| atom(x, Cmp::Le, 1);
    let zero = |x: usize| ClockConstraint::or(vec![atom(x, Cmp::Eq, 0), atom(x, Cmp::Eq, 1)]);
    let mut parts = Vec::new();
    for &x in &dom {
        let zero_or_escaped = ClockConstraint::or(vec![atom(x, Cmp::Eq, 0), atom(x, Cmp::Ge, 1)]);
        parts.push(if f.value(x) == Some(0) { zero_or_escaped } else { not(zero_or_escaped) });
    }
    for &x in &dom {
        for &y in &dom {
            if x == y {
                continue;
            }
            let frac_lt = ClockConstraint::or(vec![
                ClockConstraint::and(vec![zero(x), not(zero(y))]),
                ClockConstraint::and(vec![not(zero(x)), not(zero(y)), ClockConstraint::diag(h(x), h(y), Cmp::Lt, 0)]),
            ]);
            let lt = ClockConstraint::or(vec![not(bounded(x)), not(bounded(y)), frac_lt]);
            parts.push(if f.value(x) < f.value(y) { lt } else { not(lt) });
        }
    }
    ClockConstraint::and(parts)
}

/// The submitted fractional region is that of the tracked
/// request clocks.
fn fregion_monitor(e: &Enriched, letters: &[Letter]) -> TimedAutomaton {
    let mut m = Monitor::new(e, letters, &[], &OK);
    let guards: Vec<ClockConstraint> = (0..e.fregions.len()).map(|f| fregion_guard(e, f)).collect();
    for l in letters {
        m.edge(0, l, guards[l.f].clone(), &[], 0);
        m.edge(0, l, not(guards[l.f].clone()), &[], 1);
    }
    m.absorbing(1);
    m.finish(vec![0])
}

fn zero_monitor(e: &Enriched, letters: &[Letter]) -> TimedAutomaton {
    let mut m = Monitor::new(e, letters, &["z"], &["first", "ok", "bad"]);
    let z = e.k;
    for l in letters {
        m.edge(0, l, atom(z, Cmp::Eq, 0), &[], 1);
        m.edge(0, l, atom(z, Cmp::Gt, 0), &[], 2);
    }
    m.absorbing(1);
    m.absorbing(2);
    m.finish(vec![1])
}

fn strict_monitor(e: &Enriched, letters: &[Letter]) -> TimedAutomaton {
    let mut m = Monitor::new(e, letters, &["s"], &["first", "ok", "bad"]);
    let s = e.k;
    for l in letters {
        m.edge(0, l, ClockConstraint::True, &[0], 1);
        m.edge(1, l, atom(s, Cmp::Gt, 0), &[0], 1);
        m.edge(1, l, atom(s, Cmp::Eq, 0), &[0], 2);
    }
    m.absorbing(2);
    m.finish(vec![1])
}

/// Player I's obligations: expiry reports, tracked clocks, fractional
/// regions, zero start and strict monotonicity. Each monitor accepts the
/// plays respecting its condition and sinks into `bad` otherwise.
pub fn build_wi_monitors(e: &Enriched) -> Vec<TimedAutomaton> {
    let letters = Letter::all(e);
    let mut out = Vec::new();
    for x in 0..e.k {
        out.push(expiry_monitor(e, &letters, x));
        out.push(tracking_monitor(e, &letters, x));
    }
    if e.k > 0 {
        out.push(fregion_monitor(e, &letters));
    }
    out.push(zero_monitor(e, &letters));
    out.push(strict_monitor(e, &letters));
    out
}

/// Player II moves properly exactly when Player I does.
fn properness_monitor(e: &Enriched, letters: &[Letter]) -> TimedAutomaton {
    let mut m = Monitor::new(e, letters, &[], &OK);
    for l in letters {
        let to = if l.a.is_some() == l.b.is_some() { 0 } else { 1 };
        m.edge(0, l, ClockConstraint::True, &[], to);
    }
    m.absorbing(1);
    m.finish(vec![0])
}

/// Improper requests only renew expired clocks.
fn renewal_monitor(e: &Enriched, letters: &[Letter]) -> TimedAutomaton {
    let mut m = Monitor::new(e, letters, &[], &OK);
    for l in letters {
        let f = &e.fregions[l.f];
        let ok = l.b.is_some() || (0..e.k).all(|x| !l.requests(x) || f.value(x) == Some(0));
        m.edge(0, l, ClockConstraint::True, &[], if ok { 0 } else { 1 });
    }
    m.absorbing(1);
    m.finish(vec![0])
}

/// For clock `x`: chains of improper `x`-requests spaced exactly
/// one time unit apart stay shorter than `m`. Location `c` holds the length
/// of the current chain.
fn chain_monitor(e: &Enriched, letters: &[Letter], x: usize, m: u32) -> TimedAutomaton {
    let names: Vec<String> = (0..m).map(|c| format!("chain{c}")).chain(["bad".to_string()]).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let mut mon = Monitor::new(e, letters, &[], &refs);
    let bad = m as usize;
    let cap = |c: usize| if c >= m as usize { bad } else { c };
    for l in letters {
        for c in 0..m as usize {
            if !l.requests(x) {
                mon.edge(c, l, ClockConstraint::True, &[], c);
            } else if l.b.is_some() {
                mon.edge(c, l, ClockConstraint::True, &[], 0);
            } else if c == 0 {
                mon.edge(c, l, ClockConstraint::True, &[], cap(1));
            } else {
                mon.edge(c, l, atom(x, Cmp::Eq, 1), &[], cap(c + 1));
                mon.edge(c, l, not(atom(x, Cmp::Eq, 1)), &[], cap(1));
            }
        }
    }
    mon.absorbing(bad);
    mon.finish((0..m as usize).collect())
}

/// Player II's obligations for constant `m`: properness, renewal and the
/// per-clock chain bound.
pub fn build_wii_monitors(e: &Enriched, m: u32) -> Vec<TimedAutomaton> {
    let letters = Letter::all(e);
    let mut out = vec![properness_monitor(e, &letters), renewal_monitor(e, &letters)];
    for x in 0..e.k {
        out.push(chain_monitor(e, &letters, x, m));
    }
    out
}

/// Nondeterministic Büchi automaton for an infinite chain of improper
/// `x`-requests spaced exactly one time unit apart.
pub fn infinite_chain_monitor(e: &Enriched, x: usize) -> TimedAutomaton {
    let letters = Letter::all(e);
    let mut m = Monitor::new(e, &letters, &[], &["wait", "link", "between"]);
    let (wait, link, between) = (0, 1, 2);
    for l in &letters {
        m.edge(wait, l, ClockConstraint::True, &[], wait);
        let improper_request = l.requests(x) && l.b.is_none();
        if improper_request {
            m.edge(wait, l, ClockConstraint::True, &[], link);
        }
        for from in [link, between] {
            if improper_request {
                m.edge(from, l, atom(x, Cmp::Eq, 1), &[], link);
            } else if !l.requests(x) {
                m.edge(from, l, atom(x, Cmp::Lt, 1), &[], between);
            }
        }
    }
    m.finish(vec![link])
}

/// Flips a monitor's verdict: accepting exactly the plays reaching `bad`.
pub(crate) fn violations(mut t: TimedAutomaton) -> TimedAutomaton {
    let bad = t.location("bad").expect("monitor with a bad sink");
    t.final_sets = vec![vec![bad]];
    t
}
