//! Deterministic separability of finite-word timed languages, decided as a
//! synthesis game where Player II labels every prefix `acc` or `rej`.
use std::collections::VecDeque;

use itertools::Itertools;
use serde_json::json;

use crate::error::{Error, Result};
use crate::regions::{ClockConstraint, ClockValuation};
use crate::synthesis::{solve_k, solve_km, GameSpec, KMController, Options, Rule};
use crate::timed::{
    complement_dta, inverse_projection, is_deterministic, nta_emptiness, product, simplify, suffix_omega, union, Label,
    Mode, TimedAutomaton, TimedWord,
};

pub const ACC: &str = "acc";
pub const REJ: &str = "rej";

fn verdicts() -> Vec<String> {
    vec![ACC.to_string(), REJ.to_string()]
}

fn check_alphabets(a: &TimedAutomaton, b: &TimedAutomaton) -> Result<()> {
    if a.mode != Mode::Finite || b.mode != Mode::Finite {
        return Err(Error::Invalid("separability takes finite-word automata".into()));
    }
    if a.alphabet != b.alphabet {
        return Err(Error::Invalid("the two automata must share one alphabet".into()));
    }
    Ok(())
}

/// Words over `Σ|{acc,rej}` whose last answer is `want`.
fn last_answer(sigma: &[String], want: usize) -> TimedAutomaton {
    let alphabet = sigma.iter().flat_map(|x| verdicts().into_iter().map(move |v| format!("{x}|{v}"))).collect();
    let mut t = TimedAutomaton::new(alphabet, vec![], Mode::Finite);
    let other = t.add_location(format!("not_{}", verdicts()[want]));
    let hit = t.add_location(verdicts()[want].clone());
    t.initial = vec![other];
    t.final_sets = vec![vec![hit]];
    for x in 0..sigma.len() {
        for v in 0..2 {
            let to = if v == want { hit } else { other };
            for from in [other, hit] {
                t.add_transition(from, Label::Sym(x * 2 + v), ClockConstraint::True, vec![], to);
            }
        }
    }
    t
}

/// Player I's winning condition: some non-empty prefix lies in `L(a)` and
/// was answered `rej`, or lies in `L(b)` and was answered `acc`.
pub fn build_w0(a: &TimedAutomaton, b: &TimedAutomaton) -> Result<TimedAutomaton> {
    check_alphabets(a, b)?;
    let v = verdicts();
    let missed = product(&inverse_projection(a, &v), &last_answer(&a.alphabet, 1))?;
    let wrong = product(&inverse_projection(b, &v), &last_answer(&a.alphabet, 0))?;
    let w = suffix_omega(&union(&simplify(&missed), &simplify(&wrong))?)?;
    Ok(simplify(&w))
}

/// The separability game for `a` and `b`.
pub fn w0_game(a: &TimedAutomaton, b: &TimedAutomaton) -> Result<GameSpec> {
    GameSpec::new(a.alphabet.clone(), verdicts(), build_w0(a, b)?)
}

/// Whether the empty word is accepted: a final location is reachable from
/// an initial one through epsilon moves taken at time 0.
pub fn accepts_empty(a: &TimedAutomaton) -> bool {
    let zero = ClockValuation::zero(a.k());
    let out = a.outgoing();
    let mut seen = vec![false; a.locations.len()];
    let mut queue: VecDeque<usize> = a.initial.iter().copied().collect();
    for &l in &a.initial {
        seen[l] = true;
    }
    while let Some(l) = queue.pop_front() {
        if a.is_final(l) {
            return true;
        }
        for &ti in &out[l] {
            let t = &a.transitions[ti];
            if t.label == Label::Eps && t.guard.eval(&zero) && !seen[t.to] {
                seen[t.to] = true;
                queue.push_back(t.to);
            }
        }
    }
    false
}

fn verdict_index(c: &KMController) -> Result<usize> {
    match c.outputs.iter().position(|o| o == ACC) {
        Some(i) if c.outputs.len() == 2 && c.outputs.iter().any(|o| o == REJ) => Ok(i),
        _ => Err(Error::Invalid("controller outputs must be acc and rej".into())),
    }
}

/// Deterministic automaton over the controller's inputs accepting the words
/// whose last letter the controller answers `acc`. The initial verdict is
/// whether `a` accepts the empty word.
pub fn controller_to_separator(c: &KMController, a: &TimedAutomaton) -> Result<TimedAutomaton> {
    let acc = verdict_index(c)?;
    let mut s = TimedAutomaton::new(c.inputs.clone(), c.clocks.clone(), Mode::Finite);
    for mem in &c.memory {
        for o in &c.outputs {
            s.add_location(format!("{mem}/{o}"));
        }
    }
    let no = c.outputs.len();
    let start = if accepts_empty(a) { acc } else { 1 - acc };
    s.initial = vec![c.initial as usize * no + start];
    s.final_sets = vec![(0..c.memory.len()).map(|q| q * no + acc).collect()];
    let chars: Vec<ClockConstraint> = c.regions.iter().map(|r| c.space.characteristic(r)).collect();
    for mem in 0..c.memory.len() as u32 {
        for x in 0..c.inputs.len() {
            let groups = (0..c.regions.len()).into_group_map_by(|&r| c.rule(mem, x, r));
            for (rule, regs) in groups.into_iter().sorted_by_key(|(_, regs)| regs[0]) {
                let guard = if regs.len() == c.regions.len() {
                    ClockConstraint::True
                } else {
                    ClockConstraint::or(regs.iter().map(|&r| chars[r].clone()).collect())
                };
                let to = rule.next as usize * no + rule.output as usize;
                for o in 0..no {
                    s.add_transition(
                        mem as usize * no + o,
                        Label::Sym(x),
                        guard.clone(),
                        c.mask_clocks(rule.resets),
                        to,
                    );
                }
            }
        }
    }
    Ok(prune(&s))
}

/// Drops locations unreachable in the location graph.
fn prune(s: &TimedAutomaton) -> TimedAutomaton {
    let out = s.outgoing();
    let mut keep = vec![false; s.locations.len()];
    let mut queue: VecDeque<usize> = s.initial.iter().copied().collect();
    for &l in &s.initial {
        keep[l] = true;
    }
    while let Some(l) = queue.pop_front() {
        for &ti in &out[l] {
            let to = s.transitions[ti].to;
            if !keep[to] {
                keep[to] = true;
                queue.push_back(to);
            }
        }
    }
    let mut id = vec![usize::MAX; keep.len()];
    let mut t = TimedAutomaton { locations: Vec::new(), transitions: Vec::new(), ..s.clone() };
    for (l, name) in s.locations.iter().enumerate().filter(|(l, _)| keep[*l]) {
        id[l] = t.add_location(name.clone());
    }
    t.initial = s.initial.iter().map(|&l| id[l]).collect();
    t.final_sets = s.final_sets.iter().map(|f| f.iter().filter(|&&l| keep[l]).map(|&l| id[l]).collect()).collect();
    for tr in s.transitions.iter().filter(|tr| keep[tr.from]) {
        t.add_transition(id[tr.from], tr.label, tr.guard.clone(), tr.resets.clone(), id[tr.to]);
    }
    t
}

/// Controller answering `acc` exactly when the separator's run ends in a
/// final location. Guards must be decided by the classic regions of
/// constant `m` (raised to the separator's largest constant).
pub fn separator_to_controller(s: &TimedAutomaton, m: u32) -> Result<KMController> {
    if s.mode != Mode::Finite || !is_deterministic(s) {
        return Err(Error::Invalid("separator must be a deterministic finite-word automaton".into()));
    }
    let m = m.max(s.max_constant()).max(1);
    let mut c = KMController::new(s.alphabet.clone(), verdicts(), s.k(), m);
    c.clocks = s.clocks.clone();
    let sink = s.locations.len() as u32;
    c.memory = s.locations.clone();
    c.memory.push("reject".into());
    c.initial = s.initial.first().map_or(sink, |&l| l as u32);
    let out = s.outgoing();
    let answer = |to: usize| if s.is_final(to) { 0 } else { 1 };
    let mut sink_used = s.initial.is_empty();
    for l in 0..s.locations.len() {
        for x in 0..s.alphabet.len() {
            for r in &c.regions {
                let rule = {
                    let mut hit = None;
                    for &ti in &out[l] {
                        let t = &s.transitions[ti];
                        if t.label != Label::Sym(x) {
                            continue;
                        }
                        match c.space.try_satisfies(r, &t.guard) {
                            Some(true) => {
                                hit = Some(t);
                                break;
                            }
                            Some(false) => {}
                            None => {
                                return Err(Error::Invalid(
                                    "separator guards are not decided by classic regions".into(),
                                ))
                            }
                        }
                    }
                    hit.map(|t| Rule {
                        next: t.to as u32,
                        output: answer(t.to),
                        resets: t.resets.iter().fold(0, |acc, y| acc | 1 << y.0),
                    })
                };
                let rule = rule.unwrap_or_else(|| {
                    sink_used = true;
                    Rule { next: sink, output: 1, resets: 0 }
                });
                c.rules.push(rule);
            }
        }
    }
    if sink_used {
        let per = s.alphabet.len() * c.regions.len();
        c.rules.extend(std::iter::repeat_n(Rule { next: sink, output: 1, resets: 0 }, per));
    } else {
        c.memory.pop();
    }
    Ok(c)
}

/// Outcome of the two exact checks on a separator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatorReport {
    /// A word of `L(a)` the separator rejects.
    pub inclusion: Option<TimedWord>,
    /// A word of `L(b)` the separator accepts.
    pub disjointness: Option<TimedWord>,
}

impl SeparatorReport {
    pub fn passed(&self) -> bool {
        self.inclusion.is_none() && self.disjointness.is_none()
    }

    pub fn to_json(&self, alphabet: &[String]) -> serde_json::Value {
        let show = |w: &Option<TimedWord>| match w {
            None => json!("ok"),
            Some(w) => json!({ "counterexample": w.display(alphabet).to_string() }),
        };
        json!({ "inclusion": show(&self.inclusion), "disjointness": show(&self.disjointness) })
    }
}

/// Checks `L(a) ⊆ L(s)` and `L(s) ∩ L(b) = ∅` exactly.
pub fn verify_separator(s: &TimedAutomaton, a: &TimedAutomaton, b: &TimedAutomaton) -> Result<SeparatorReport> {
    check_alphabets(a, b)?;
    if s.alphabet != a.alphabet {
        return Err(Error::Invalid("separator alphabet differs from the languages'".into()));
    }
    let missed = product(a, &complement_dta(s)?)?;
    let inclusion = nta_emptiness(&missed)?.map(|w| w.word);
    let shared = product(s, b)?;
    let disjointness = nta_emptiness(&shared)?.map(|w| w.word);
    Ok(SeparatorReport { inclusion, disjointness })
}

/// A verified separator with the resources it uses.
#[derive(Clone, Debug)]
pub struct Separator {
    pub automaton: TimedAutomaton,
    pub controller: KMController,
    pub m: u32,
    pub report: SeparatorReport,
}

fn extract(c: KMController, m: u32, a: &TimedAutomaton, b: &TimedAutomaton) -> Result<Separator> {
    let s = controller_to_separator(&c, a)?;
    let report = verify_separator(&s, a, b)?;
    if !report.passed() {
        return Err(Error::Check(format!("extracted separator fails verification: {}", report.to_json(&a.alphabet))));
    }
    Ok(Separator { automaton: s, controller: c, m, report })
}

/// A deterministic separator with `k` clocks and constant `m`, if any.
pub fn decide_km_separability(
    a: &TimedAutomaton,
    b: &TimedAutomaton,
    k: usize,
    m: u32,
    opts: &Options,
) -> Result<Option<Separator>> {
    let g = w0_game(a, b)?;
    match solve_km(&g, k, m, opts)? {
        None => Ok(None),
        Some(sol) => extract(sol.controller, sol.m, a, b).map(Some),
    }
}

/// A deterministic separator with `k` clocks and some constant, if any.
pub fn decide_k_separability(
    a: &TimedAutomaton,
    b: &TimedAutomaton,
    k: usize,
    opts: &Options,
) -> Result<Option<Separator>> {
    let g = w0_game(a, b)?;
    match solve_k(&g, k, opts)? {
        None => Ok(None),
        Some(sol) => extract(sol.controller, sol.m, a, b).map(Some),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn empty_language(sigma: &[String]) -> TimedAutomaton {
        let mut t = TimedAutomaton::new(sigma.to_vec(), vec![], Mode::Finite);
        let p = t.add_location("p");
        t.initial = vec![p];
        t.final_sets = vec![vec![]];
        t
    }

    fn universal(sigma: &[String]) -> TimedAutomaton {
        let mut t = TimedAutomaton::new(sigma.to_vec(), vec![], Mode::Finite);
        let p = t.add_location("p");
        t.initial = vec![p];
        t.final_sets = vec![vec![p]];
        for x in 0..sigma.len() {
            t.add_transition(p, Label::Sym(x), ClockConstraint::True, vec![], p);
        }
        t
    }

    fn constant(sigma: &[String], output: u32) -> KMController {
        let mut c = KMController::new(sigma.to_vec(), verdicts(), 0, 1);
        c.memory = vec!["q".into()];
        c.rules = vec![Rule { next: 0, output, resets: 0 }; sigma.len()];
        c
    }

    #[test]
    fn w0_of_empty_languages_is_empty() {
        let s = vec!["a".to_string()];
        let w = build_w0(&empty_language(&s), &empty_language(&s)).unwrap();
        assert!(nta_emptiness(&w).unwrap().is_none());
    }

    #[test]
    fn w0_needs_a_wrong_answer() {
        let s = vec!["a".to_string()];
        let w = build_w0(&universal(&s), &empty_language(&s)).unwrap();
        let g = GameSpec::new(s.clone(), verdicts(), w.clone()).unwrap();
        let always_acc = constant(&s, 0).to_automaton();
        assert!(nta_emptiness(&product(&always_acc, &g.condition).unwrap()).unwrap().is_none());
        let always_rej = constant(&s, 1).to_automaton();
        assert!(nta_emptiness(&product(&always_rej, &g.condition).unwrap()).unwrap().is_some());
    }

    #[test]
    fn constant_controllers_give_trivial_separators() {
        let s = vec!["a".to_string()];
        let (a, _) = fixtures::points();
        let all = controller_to_separator(&constant(&s, 0), &a).unwrap();
        let none = controller_to_separator(&constant(&s, 1), &a).unwrap();
        assert!(is_deterministic(&all) && is_deterministic(&none));
        for w in ["(a,0)", "(a,1)(a,3/2)"] {
            let w = TimedWord::parse(w, &s).unwrap();
            assert!(crate::timed::accepts_finite(&all, &w).unwrap());
            assert!(!crate::timed::accepts_finite(&none, &w).unwrap());
        }
        let e = TimedWord::parse("", &s).unwrap();
        assert!(!crate::timed::accepts_finite(&all, &e).unwrap());
        assert!(!accepts_empty(&a));
    }

    #[test]
    fn separator_round_trip() {
        let (a, b) = fixtures::points();
        let c = separator_to_controller(&a, 2).unwrap();
        assert_eq!(c.rules.iter().filter(|r| r.output == 0).count() > 0, true);
        let s = controller_to_separator(&c, &a).unwrap();
        let report = verify_separator(&s, &a, &b).unwrap();
        assert!(report.passed());
        assert_eq!(report.to_json(&a.alphabet), json!({"inclusion": "ok", "disjointness": "ok"}));
    }

    #[test]
    fn overlapping_languages_fail_with_witness() {
        let (a, _) = fixtures::points();
        let report = verify_separator(&a, &a, &a).unwrap();
        let w = report.disjointness.clone().unwrap();
        assert!(crate::timed::accepts_finite(&a, &w).unwrap());
        assert!(report.inclusion.is_none());
    }

    #[test]
    fn universal_controller_and_empty_separator() {
        let s = vec!["a".to_string()];
        let c = separator_to_controller(&universal(&s), 1).unwrap();
        assert!(c.rules.iter().all(|r| r.output == 0));
        let c = separator_to_controller(&empty_language(&s), 1).unwrap();
        assert!(c.rules.iter().all(|r| r.output == 1));
    }
}
