use std::collections::HashMap;

use super::{Mode, TimedAutomaton, Transition};
use crate::graph;
use crate::regions::{ClockConstraint, ClockId};

/// Language-preserving clean-up: drops useless locations, untested clocks,
/// clocks that are always reset together with an earlier one, and final
/// sets that contain every location.
pub fn simplify(a: &TimedAutomaton) -> TimedAutomaton {
    let a = prune_locations(a);
    let a = drop_untested_clocks(&a);
    let a = merge_twin_clocks(&a);
    drop_full_final_sets(&a)
}

fn prune_locations(a: &TimedAutomaton) -> TimedAutomaton {
    let n = a.locations.len();
    let live: Vec<&Transition> = a.transitions.iter().filter(|t| t.guard != ClockConstraint::False).collect();
    let mut succ = vec![Vec::new(); n];
    for t in &live {
        succ[t.from].push(t.to as u32);
    }
    let init: Vec<u32> = a.initial.iter().map(|&l| l as u32).collect();
    let reach = graph::reachable(n, &succ, &init);
    let useful = match a.mode {
        Mode::Finite => {
            let fin: Vec<bool> = (0..n).map(|l| a.is_final(l)).collect();
            graph::coreachable(n, &succ, &fin)
        }
        Mode::Buchi => {
            let (comps, comp) = graph::sccs(n, &succ);
            let masks: Vec<Vec<bool>> = (0..a.final_sets.len()).map(|i| a.final_mask(i)).collect();
            let mut good = vec![false; n];
            for (ci, c) in comps.iter().enumerate() {
                let internal_sym = live
                    .iter()
                    .any(|t| t.label.sym().is_some() && comp[t.from] == ci as u32 && comp[t.to] == ci as u32);
                if internal_sym && masks.iter().all(|f| c.iter().any(|&l| f[l as usize])) {
                    c.iter().for_each(|&l| good[l as usize] = true);
                }
            }
            graph::coreachable(n, &succ, &good)
        }
    };
    let keep: Vec<bool> = (0..n).map(|l| reach[l] && useful[l]).collect();
    let mut map = vec![usize::MAX; n];
    let mut locations = Vec::new();
    for l in 0..n {
        if keep[l] {
            map[l] = locations.len();
            locations.push(a.locations[l].clone());
        }
    }
    TimedAutomaton {
        alphabet: a.alphabet.clone(),
        clocks: a.clocks.clone(),
        locations,
        initial: a.initial.iter().filter(|&&l| keep[l]).map(|&l| map[l]).collect(),
        final_sets: a.final_sets.iter().map(|s| s.iter().filter(|&&l| keep[l]).map(|&l| map[l]).collect()).collect(),
        mode: a.mode,
        transitions: live
            .into_iter()
            .filter(|t| keep[t.from] && keep[t.to])
            .map(|t| Transition { from: map[t.from], to: map[t.to], ..t.clone() })
            .collect(),
    }
}

fn renumber_clocks(a: &TimedAutomaton, target: &[Option<usize>], names: Vec<String>) -> TimedAutomaton {
    let f = |c: ClockId| ClockId(target[c.0].expect("tested clock kept"));
    TimedAutomaton {
        clocks: names,
        transitions: a
            .transitions
            .iter()
            .map(|t| {
                let mut resets: Vec<ClockId> = t.resets.iter().filter_map(|c| target[c.0].map(ClockId)).collect();
                resets.sort();
                resets.dedup();
                Transition { guard: t.guard.map_clocks(&f), resets, ..t.clone() }
            })
            .collect(),
        ..a.clone()
    }
}

fn drop_untested_clocks(a: &TimedAutomaton) -> TimedAutomaton {
    let mut tested = vec![false; a.k()];
    for t in &a.transitions {
        for at in t.guard.atoms() {
            tested[at.x.0] = true;
            if let Some(y) = at.y {
                tested[y.0] = true;
            }
        }
    }
    let mut target = vec![None; a.k()];
    let mut names = Vec::new();
    for c in 0..a.k() {
        if tested[c] {
            target[c] = Some(names.len());
            names.push(a.clocks[c].clone());
        }
    }
    renumber_clocks(a, &target, names)
}

fn merge_twin_clocks(a: &TimedAutomaton) -> TimedAutomaton {
    // signature: the set of transitions resetting the clock
    let mut sig: Vec<Vec<bool>> = vec![vec![false; a.transitions.len()]; a.k()];
    for (i, t) in a.transitions.iter().enumerate() {
        for c in &t.resets {
            sig[c.0][i] = true;
        }
    }
    let mut first: HashMap<&Vec<bool>, usize> = HashMap::new();
    let mut target = vec![None; a.k()];
    let mut names = Vec::new();
    let mut rep_index = vec![0usize; a.k()];
    for c in 0..a.k() {
        match first.get(&sig[c]) {
            Some(&r) => target[c] = Some(rep_index[r]),
            None => {
                first.insert(&sig[c], c);
                rep_index[c] = names.len();
                target[c] = Some(names.len());
                names.push(a.clocks[c].clone());
            }
        }
    }
    renumber_clocks(a, &target, names)
}

/// Drops final sets visited by every cycle.
fn drop_full_final_sets(a: &TimedAutomaton) -> TimedAutomaton {
    if a.mode == Mode::Finite || a.final_sets.len() <= 1 {
        return a.clone();
    }
    let n = a.locations.len();
    let mut succ = vec![Vec::new(); n];
    for t in &a.transitions {
        succ[t.from].push(t.to as u32);
    }
    let (comps, comp) = graph::sccs(n, &succ);
    let cyclic: Vec<usize> =
        (0..n).filter(|&l| comps[comp[l] as usize].len() > 1 || succ[l].contains(&(l as u32))).collect();
    let mut sets: Vec<Vec<usize>> = (0..a.final_sets.len())
        .map(|i| a.final_mask(i))
        .zip(&a.final_sets)
        .filter(|(mask, _)| !cyclic.iter().all(|&l| mask[l]))
        .map(|(_, s)| s.clone())
        .collect();
    sets.sort();
    sets.dedup();
    if sets.is_empty() {
        sets.push((0..n).collect());
    }
    TimedAutomaton { final_sets: sets, ..a.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::Cmp;
    use crate::timed::Label;

    #[test]
    fn merges_and_drops() {
        let mut a = TimedAutomaton::new(vec!["a".into()], vec!["x".into(), "y".into(), "z".into()], Mode::Finite);
        let p = a.add_location("p");
        let q = a.add_location("q");
        let dead = a.add_location("dead");
        a.initial = vec![p];
        a.final_sets = vec![vec![q]];
        let g = ClockConstraint::and(vec![
            ClockConstraint::atom(ClockId(0), Cmp::Lt, 1),
            ClockConstraint::atom(ClockId(1), Cmp::Gt, 0),
        ]);
        a.add_transition(p, Label::Sym(0), g, vec![ClockId(0), ClockId(1), ClockId(2)], q);
        a.add_transition(p, Label::Sym(0), ClockConstraint::True, vec![], dead);
        let s = simplify(&a);
        assert_eq!(s.clocks, vec!["x".to_string()]);
        assert_eq!(s.locations.len(), 2);
        assert_eq!(s.transitions.len(), 1);
    }
}
