use itertools::Itertools;

use super::enriched::Enriched;
use super::monitors::{build_wi_monitors, build_wii_monitors, infinite_chain_monitor, violations, Letter};
use super::spec::GameSpec;
use crate::error::Result;
use crate::regions::{ClockConstraint, ClockId};
use crate::timed::{product, simplify, union, Label, Mode, TimedAutomaton};

/// Plays over `A' × B'` whose proper letters form a play of `w`. Letters
/// with a tick component only let time pass; one extra final set demands
/// infinitely many proper letters.
pub fn phi_inverse(g: &GameSpec, e: &Enriched) -> TimedAutomaton {
    let w = &g.condition;
    let k = e.k;
    let nb = g.player_ii.len();
    let mut clocks: Vec<String> = (1..=k).map(|i| format!("h{i}")).collect();
    clocks.extend(w.clocks.iter().cloned());
    let mut t = TimedAutomaton::new(e.alphabet(), clocks, Mode::Buchi);
    let n = w.locations.len();
    for bit in 0..2 {
        for l in &w.locations {
            t.add_location(format!("{l}/{bit}"));
        }
    }
    let loc = |l: usize, proper: bool| l + if proper { n } else { 0 };
    t.initial = w.initial.iter().map(|&l| loc(l, false)).collect();
    let shift = |c: &ClockConstraint| c.map_clocks(&|x: ClockId| ClockId(x.0 + k));
    let requests = |l: &Letter| (0..k).filter(|&x| l.requests(x)).map(ClockId).collect::<Vec<_>>();
    let letters = Letter::all(e);
    let by_proper = letters.iter().filter_map(|l| Some(((l.a?, l.b?), l))).into_group_map();
    let out = w.outgoing();
    for l in 0..n {
        for proper in [false, true] {
            let from = loc(l, proper);
            for &ti in &out[l] {
                let tr = &w.transitions[ti];
                let resets: Vec<ClockId> = tr.resets.iter().map(|c| ClockId(c.0 + k)).collect();
                match tr.label {
                    Label::Eps => t.add_transition(from, Label::Eps, shift(&tr.guard), resets, loc(tr.to, proper)),
                    Label::Sym(x) => {
                        for letter in by_proper.get(&(x / nb, x % nb)).into_iter().flatten() {
                            let mut r = resets.clone();
                            r.extend(requests(letter));
                            t.add_transition(from, Label::Sym(letter.index), shift(&tr.guard), r, loc(tr.to, true));
                        }
                    }
                }
            }
            for letter in letters.iter().filter(|l| l.a.is_none() || l.b.is_none()) {
                t.add_transition(
                    from,
                    Label::Sym(letter.index),
                    ClockConstraint::True,
                    requests(letter),
                    loc(l, false),
                );
            }
        }
    }
    t.final_sets =
        w.final_sets.iter().map(|f| f.iter().flat_map(|&l| [loc(l, false), loc(l, true)]).sorted().collect()).collect();
    t.final_sets.push((n..2 * n).collect());
    t
}

fn conjunction(parts: Vec<TimedAutomaton>) -> Result<TimedAutomaton> {
    let mut it = parts.into_iter().map(|p| simplify(&p));
    let first = it.next().expect("at least one conjunct");
    it.try_fold(first, |acc, p| Ok(simplify(&product(&acc, &p)?)))
}

fn disjunction(parts: Vec<TimedAutomaton>) -> Result<TimedAutomaton> {
    let mut it = parts.into_iter();
    let first = it.next().expect("at least one disjunct");
    it.try_fold(first, |acc, p| union(&acc, &p))
}

/// Player I wins the enriched game for constant `m`: he keeps his
/// obligations and either the projected play is in the condition or
/// Player II breaks one of hers.
pub fn build_wprime(g: &GameSpec, k: usize, m: u32) -> Result<(TimedAutomaton, Enriched)> {
    let e = Enriched::new(g.player_i.clone(), g.player_ii.clone(), k);
    let wi = conjunction(build_wi_monitors(&e))?;
    let mut rhs = vec![phi_inverse(g, &e)];
    rhs.extend(build_wii_monitors(&e, m).into_iter().map(violations));
    let w = simplify(&product(&wi, &disjunction(rhs)?)?);
    log::debug!("W' for k={k} m={m}: {} locations, {} clocks", w.locations.len(), w.k());
    Ok((w, e))
}

/// As [`build_wprime`] with the chain bound replaced by the finiteness of
/// every improper request chain.
pub fn build_wdoubleprime(g: &GameSpec, k: usize) -> Result<(TimedAutomaton, Enriched)> {
    let e = Enriched::new(g.player_i.clone(), g.player_ii.clone(), k);
    let wi = conjunction(build_wi_monitors(&e))?;
    let mut rhs = vec![phi_inverse(g, &e)];
    // the chain bound is the last k monitors; properness and renewal come first
    rhs.extend(build_wii_monitors(&e, 1).into_iter().take(2).map(violations));
    rhs.extend((0..k).map(|x| infinite_chain_monitor(&e, x)));
    let w = simplify(&product(&wi, &disjunction(rhs)?)?);
    log::debug!("W'' for k={k}: {} locations, {} clocks", w.locations.len(), w.k());
    Ok((w, e))
}
