use std::collections::{HashMap, VecDeque};

use super::spec::{letter_name, GameSpec};
use crate::error::Result;
use crate::regions::{Atom, ClockConstraint, ClockId, Cmp};
use crate::timed::{product, simplify, Label, Mode, TimedAutomaton};

/// Player I letter opening every play of the zero-starting game.
pub const ZERO_MARK: &str = "▷";

fn fresh(taken: &[String], want: &str) -> String {
    let mut s = want.to_string();
    while taken.contains(&s) {
        s.push('\'');
    }
    s
}

fn composite_alphabet(a: &[String], b: &[String]) -> Vec<String> {
    a.iter().flat_map(|x| b.iter().map(move |y| letter_name(x, y))).collect()
}

/// Plays of the game that start at time 0.
pub(crate) fn zero_start_monitor(alphabet: Vec<String>) -> TimedAutomaton {
    let n = alphabet.len();
    let mut t = TimedAutomaton::new(alphabet, vec!["z".into()], Mode::Buchi);
    let first = t.add_location("first");
    let run = t.add_location("run");
    t.initial = vec![first];
    t.final_sets = vec![vec![run]];
    let z = ClockId(0);
    for x in 0..n {
        t.add_transition(first, Label::Sym(x), ClockConstraint::atom(z, Cmp::Eq, 0), vec![], run);
        t.add_transition(run, Label::Sym(x), ClockConstraint::True, vec![], run);
    }
    t
}

/// Plays with strictly increasing timestamps.
pub(crate) fn strict_monitor(alphabet: Vec<String>) -> TimedAutomaton {
    let n = alphabet.len();
    let mut t = TimedAutomaton::new(alphabet, vec!["s".into()], Mode::Buchi);
    let first = t.add_location("first");
    let run = t.add_location("run");
    t.initial = vec![first];
    t.final_sets = vec![vec![run]];
    let s = ClockId(0);
    for x in 0..n {
        t.add_transition(first, Label::Sym(x), ClockConstraint::True, vec![s], run);
        t.add_transition(run, Label::Sym(x), ClockConstraint::atom(s, Cmp::Gt, 0), vec![s], run);
    }
    t
}

/// The winning condition intersected with the play restrictions the game
/// declares.
pub(crate) fn restricted_condition(g: &GameSpec) -> Result<TimedAutomaton> {
    let mut w = g.condition.clone();
    if g.zero_starting {
        w = simplify(&product(&w, &zero_start_monitor(w.alphabet.clone()))?);
    }
    if g.strictly_monotonic {
        w = simplify(&product(&w, &strict_monitor(w.alphabet.clone()))?);
    }
    Ok(w)
}

/// Prefixes every play with the letter [`ZERO_MARK`] at time 0.
pub fn zero_starting_transform(g: &GameSpec) -> Result<GameSpec> {
    let w = restricted_condition(g)?;
    let mut a = g.player_i.clone();
    a.push(fresh(&a, ZERO_MARK));
    let nb = g.player_ii.len();
    let mut t = TimedAutomaton::new(composite_alphabet(&a, &g.player_ii), w.clocks.clone(), Mode::Buchi);
    t.clocks.push(fresh(&w.clocks, "z"));
    t.locations = w.locations.clone();
    t.transitions = w.transitions.clone();
    t.final_sets = w.final_sets.clone();
    let names = t.locations.clone();
    let start = t.add_location(fresh(&names, "start"));
    t.initial = vec![start];
    let z = ClockId(w.k());
    let mark = a.len() - 1;
    for b in 0..nb {
        for &l in &w.initial {
            t.add_transition(start, Label::Sym(mark * nb + b), ClockConstraint::atom(z, Cmp::Eq, 0), vec![], l);
        }
    }
    Ok(GameSpec {
        player_i: a,
        player_ii: g.player_ii.clone(),
        condition: simplify(&t),
        zero_starting: true,
        strictly_monotonic: false,
    })
}

const NONE: u8 = u8::MAX;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Phase {
    Start,
    Frozen,
    Thawed,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Collapse {
    loc: usize,
    alias: Vec<u8>,
    gen: u8,
    phase: Phase,
}

fn const_atom(cmp: Cmp, c: i64) -> ClockConstraint {
    if cmp.holds(0.cmp(&c)) {
        ClockConstraint::True
    } else {
        ClockConstraint::False
    }
}

fn pclock(p: u8) -> ClockId {
    ClockId(p as usize)
}

/// Guard over physical clocks, read at the current time.
fn real_guard(g: &ClockConstraint, alias: &[u8]) -> ClockConstraint {
    g.map_atoms(&|a: &Atom| match a.y {
        None => ClockConstraint::atom(pclock(alias[a.x.0]), a.cmp, a.c),
        Some(y) if alias[a.x.0] == alias[y.0] => const_atom(a.cmp, a.c),
        Some(y) => ClockConstraint::diag(pclock(alias[a.x.0]), pclock(alias[y.0]), a.cmp, a.c),
    })
}

/// Guard read at the time clock `gen` was last reset.
fn frozen_guard(g: &ClockConstraint, alias: &[u8], gen: u8) -> ClockConstraint {
    g.map_atoms(&|a: &Atom| {
        let x = alias[a.x.0];
        let y = a.y.map_or(gen, |y| alias[y.0]);
        if x == y {
            const_atom(a.cmp, a.c)
        } else {
            ClockConstraint::diag(pclock(x), pclock(y), a.cmp, a.c)
        }
    })
}

fn free_clock(alias: &[u8], resets: &[ClockId], physical: usize) -> u8 {
    let busy: Vec<u8> = (0..alias.len()).filter(|x| !resets.iter().any(|r| r.0 == *x)).map(|x| alias[x]).collect();
    (0..physical as u8).find(|p| !busy.contains(p)).expect("one spare physical clock")
}

/// Game over `A × {0,1}` with strictly monotonic plays. A letter with flag
/// 0 is read as if it occurred together with the previous flag-1 letter.
///
/// The condition tracks which physical clock carries each original clock
/// and evaluates flag-0 guards relative to the clock reset at the last
/// flag-1 letter. Epsilon moves of the original condition are taken either
/// at that frozen instant or in real time. Strict monotonicity itself is
/// carried by the game's flag rather than by the condition.
pub fn strict_monotonic_transform(g: &GameSpec) -> Result<GameSpec> {
    let w = simplify(&restricted_condition(g)?);
    let kw = w.k();
    let physical = kw + 1;
    let nb = g.player_ii.len();
    let a2: Vec<String> = g.player_i.iter().flat_map(|a| [format!("{a}#0"), format!("{a}#1")]).collect();
    let mut clocks = w.clocks.clone();
    clocks.push(fresh(&w.clocks, "spare"));
    let mut t = TimedAutomaton::new(composite_alphabet(&a2, &g.player_ii), clocks, Mode::Buchi);
    let out = w.outgoing();
    let mut ids: HashMap<Collapse, usize> = HashMap::new();
    let mut states: Vec<Collapse> = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |c: Collapse, states: &mut Vec<Collapse>, queue: &mut VecDeque<usize>| {
        *ids.entry(c.clone()).or_insert_with(|| {
            states.push(c);
            queue.push_back(states.len() - 1);
            states.len() - 1
        })
    };
    let identity: Vec<u8> = (0..kw as u8).collect();
    let mut transitions = Vec::new();
    for &l in &w.initial {
        let c = Collapse { loc: l, alias: identity.clone(), gen: NONE, phase: Phase::Start };
        t.initial.push(intern(c, &mut states, &mut queue));
    }
    while let Some(id) = queue.pop_front() {
        let s = states[id].clone();
        for &ti in &out[s.loc] {
            let tr = &w.transitions[ti];
            let mapped = |p: u8| -> Vec<u8> {
                let mut al = s.alias.clone();
                for y in &tr.resets {
                    al[y.0] = p;
                }
                al
            };
            match tr.label {
                Label::Sym(x) => {
                    let (a, b) = (x / nb, x % nb);
                    let sym = |flag: usize| (a * 2 + flag) * nb + b;
                    let guard = real_guard(&tr.guard, &s.alias);
                    if guard != ClockConstraint::False {
                        let p = free_clock(&s.alias, &tr.resets, physical);
                        let c = Collapse { loc: tr.to, alias: mapped(p), gen: p, phase: Phase::Frozen };
                        let to = intern(c, &mut states, &mut queue);
                        transitions.push((id, Label::Sym(sym(1)), guard.clone(), vec![pclock(p)], to));
                        if s.phase == Phase::Start {
                            transitions.push((id, Label::Sym(sym(0)), guard, vec![pclock(p)], to));
                        }
                    }
                    if s.phase == Phase::Frozen {
                        let guard = frozen_guard(&tr.guard, &s.alias, s.gen);
                        if guard != ClockConstraint::False {
                            let c = Collapse { loc: tr.to, alias: mapped(s.gen), ..s.clone() };
                            let to = intern(c, &mut states, &mut queue);
                            transitions.push((id, Label::Sym(sym(0)), guard, vec![], to));
                        }
                    }
                }
                Label::Eps => {
                    if tr.guard == ClockConstraint::True && tr.resets.is_empty() {
                        let to = intern(Collapse { loc: tr.to, ..s.clone() }, &mut states, &mut queue);
                        transitions.push((id, Label::Eps, ClockConstraint::True, vec![], to));
                        continue;
                    }
                    let guard = real_guard(&tr.guard, &s.alias);
                    if guard != ClockConstraint::False {
                        let (alias, resets) = if tr.resets.is_empty() {
                            (s.alias.clone(), vec![])
                        } else {
                            let p = free_clock(&s.alias, &tr.resets, physical);
                            (mapped(p), vec![pclock(p)])
                        };
                        let c = match s.phase {
                            Phase::Start => Collapse { loc: tr.to, alias, gen: NONE, phase: Phase::Start },
                            _ => Collapse { loc: tr.to, alias, gen: NONE, phase: Phase::Thawed },
                        };
                        let to = intern(c, &mut states, &mut queue);
                        transitions.push((id, Label::Eps, guard, resets, to));
                    }
                    if s.phase == Phase::Frozen {
                        let guard = frozen_guard(&tr.guard, &s.alias, s.gen);
                        if guard != ClockConstraint::False {
                            let c = Collapse { loc: tr.to, alias: mapped(s.gen), ..s.clone() };
                            let to = intern(c, &mut states, &mut queue);
                            transitions.push((id, Label::Eps, guard, vec![], to));
                        }
                    }
                }
            }
        }
    }
    t.locations = states
        .iter()
        .map(|c| {
            let al: Vec<String> = c.alias.iter().map(|p| t.clocks[*p as usize].clone()).collect();
            format!("{}[{}]{:?}", w.locations[c.loc], al.join(","), c.phase)
        })
        .collect();
    for (from, label, guard, resets, to) in transitions {
        t.add_transition(from, label, guard, resets, to);
    }
    t.final_sets =
        w.final_sets.iter().map(|f| (0..states.len()).filter(|&i| f.contains(&states[i].loc)).collect()).collect();
    let cond = simplify(&t);
    Ok(GameSpec {
        player_i: a2,
        player_ii: g.player_ii.clone(),
        condition: cond,
        zero_starting: false,
        strictly_monotonic: true,
    })
}

/// Index in the transformed game of letter `a` with the given flag.
pub fn flagged(a: usize, flag: bool) -> usize {
    a * 2 + flag as usize
}
