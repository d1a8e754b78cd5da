use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use super::{Label, Mode, TimedAutomaton, Transition};
use crate::error::{Error, Result};
use crate::regions::{ClockConstraint, ClockId, Region, RegionSpace};

/// Appends primes until every name is distinct.
pub(crate) fn dedup_names(names: &mut [String]) {
    let mut seen = HashSet::new();
    for n in names.iter_mut() {
        while !seen.insert(n.clone()) {
            n.push('\'');
        }
    }
}

fn fresh_clock_names(taken: &[String], wanted: &[String]) -> Vec<String> {
    let mut used: HashSet<String> = taken.iter().cloned().collect();
    wanted
        .iter()
        .map(|w| {
            let mut name = w.clone();
            let mut i = 2;
            while used.contains(&name) {
                name = format!("{w}_{i}");
                i += 1;
            }
            used.insert(name.clone());
            name
        })
        .collect()
}

fn symbol_map(a: &TimedAutomaton, b: &TimedAutomaton) -> Result<Vec<usize>> {
    let sa: BTreeSet<&String> = a.alphabet.iter().collect();
    let sb: BTreeSet<&String> = b.alphabet.iter().collect();
    if sa != sb {
        return Err(Error::Invalid("operands have different alphabets".into()));
    }
    Ok(b.alphabet.iter().map(|x| a.symbol(x).unwrap()).collect())
}

/// Synchronous product on symbols, interleaving epsilon moves. Clocks of
/// `b` are renamed when they clash. Büchi operands give generalized
/// acceptance with the final sets of both sides.
pub fn product(a: &TimedAutomaton, b: &TimedAutomaton) -> Result<TimedAutomaton> {
    if a.mode != b.mode {
        return Err(Error::Invalid("product of automata with different acceptance modes".into()));
    }
    let bmap = symbol_map(a, b)?;
    let ka = a.k();
    let shift = |c: &ClockConstraint| c.map_clocks(&|x: ClockId| ClockId(x.0 + ka));
    let mut clocks = a.clocks.clone();
    clocks.extend(fresh_clock_names(&a.clocks, &b.clocks));
    let out_a = a.outgoing();
    let out_b = b.outgoing();
    let mut out_b_sym: Vec<HashMap<usize, Vec<usize>>> = vec![HashMap::new(); b.locations.len()];
    for (j, t) in b.transitions.iter().enumerate() {
        if let Label::Sym(y) = t.label {
            out_b_sym[t.from].entry(bmap[y]).or_default().push(j);
        }
    }
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut locs: Vec<(usize, usize)> = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |p: (usize, usize), locs: &mut Vec<(usize, usize)>, queue: &mut VecDeque<usize>| {
        *ids.entry(p).or_insert_with(|| {
            locs.push(p);
            queue.push_back(locs.len() - 1);
            locs.len() - 1
        })
    };
    let mut initial = Vec::new();
    for &la in &a.initial {
        for &lb in &b.initial {
            initial.push(intern((la, lb), &mut locs, &mut queue));
        }
    }
    let mut transitions = Vec::new();
    while let Some(id) = queue.pop_front() {
        let (la, lb) = locs[id];
        for &ti in &out_a[la] {
            let ta = &a.transitions[ti];
            match ta.label {
                Label::Eps => {
                    let to = intern((ta.to, lb), &mut locs, &mut queue);
                    transitions.push(Transition { from: id, to, ..ta.clone() });
                }
                Label::Sym(x) => {
                    for &tj in out_b_sym[lb].get(&x).map(|v| v.as_slice()).unwrap_or(&[]) {
                        let tb = &b.transitions[tj];
                        let guard = ClockConstraint::and(vec![ta.guard.clone(), shift(&tb.guard)]);
                        if guard == ClockConstraint::False {
                            continue;
                        }
                        let mut resets = ta.resets.clone();
                        resets.extend(tb.resets.iter().map(|c| ClockId(c.0 + ka)));
                        let to = intern((ta.to, tb.to), &mut locs, &mut queue);
                        transitions.push(Transition { from: id, label: Label::Sym(x), guard, resets, to });
                    }
                }
            }
        }
        for &tj in &out_b[lb] {
            let tb = &b.transitions[tj];
            if tb.label == Label::Eps {
                let to = intern((la, tb.to), &mut locs, &mut queue);
                transitions.push(Transition {
                    from: id,
                    label: Label::Eps,
                    guard: shift(&tb.guard),
                    resets: tb.resets.iter().map(|c| ClockId(c.0 + ka)).collect(),
                    to,
                });
            }
        }
    }
    let fa: Vec<Vec<bool>> = (0..a.final_sets.len()).map(|i| a.final_mask(i)).collect();
    let fb: Vec<Vec<bool>> = (0..b.final_sets.len()).map(|i| b.final_mask(i)).collect();
    let final_sets = match a.mode {
        Mode::Finite => vec![(0..locs.len()).filter(|&i| a.is_final(locs[i].0) && b.is_final(locs[i].1)).collect()],
        Mode::Buchi => fa
            .iter()
            .map(|f| (0..locs.len()).filter(|&i| f[locs[i].0]).collect())
            .chain(fb.iter().map(|f| (0..locs.len()).filter(|&i| f[locs[i].1]).collect()))
            .collect(),
    };
    let mut names: Vec<String> =
        locs.iter().map(|&(x, y)| format!("({},{})", a.locations[x], b.locations[y])).collect();
    dedup_names(&mut names);
    Ok(TimedAutomaton {
        alphabet: a.alphabet.clone(),
        clocks,
        locations: names,
        initial,
        final_sets,
        mode: a.mode,
        transitions,
    })
}

/// Disjoint union. The operands share clocks by position since a run only
/// ever lives in one of them.
pub fn union(a: &TimedAutomaton, b: &TimedAutomaton) -> Result<TimedAutomaton> {
    if a.mode != b.mode {
        return Err(Error::Invalid("union of automata with different acceptance modes".into()));
    }
    let bmap = symbol_map(a, b)?;
    let mut clocks = a.clocks.clone();
    if b.k() > a.k() {
        clocks.extend(fresh_clock_names(&a.clocks, &b.clocks[a.k()..]));
    }
    let off = a.locations.len();
    let mut locations = a.locations.clone();
    locations.extend(b.locations.iter().cloned());
    dedup_names(&mut locations);
    let mut transitions = a.transitions.clone();
    transitions.extend(b.transitions.iter().map(|t| Transition {
        from: t.from + off,
        to: t.to + off,
        label: match t.label {
            Label::Sym(x) => Label::Sym(bmap[x]),
            Label::Eps => Label::Eps,
        },
        ..t.clone()
    }));
    let g = a.final_sets.len().max(b.final_sets.len());
    let pick = |sets: &[Vec<usize>], i: usize| sets[i.min(sets.len() - 1)].clone();
    let final_sets = (0..g)
        .map(|i| {
            let mut s = pick(&a.final_sets, i);
            s.extend(pick(&b.final_sets, i).into_iter().map(|l| l + off));
            s
        })
        .collect();
    let mut initial = a.initial.clone();
    initial.extend(b.initial.iter().map(|l| l + off));
    Ok(TimedAutomaton {
        alphabet: a.alphabet.clone(),
        clocks,
        locations,
        initial,
        final_sets,
        mode: a.mode,
        transitions,
    })
}

/// Lifts `a` to the alphabet `Σ × Γ`, written `a|g`, ignoring the second
/// component.
pub fn inverse_projection(a: &TimedAutomaton, gamma: &[String]) -> TimedAutomaton {
    let g = gamma.len();
    let alphabet = a.alphabet.iter().flat_map(|x| gamma.iter().map(move |y| format!("{x}|{y}"))).collect();
    let transitions = a
        .transitions
        .iter()
        .flat_map(|t| match t.label {
            Label::Eps => vec![t.clone()],
            Label::Sym(x) => (0..g).map(|j| Transition { label: Label::Sym(x * g + j), ..t.clone() }).collect(),
        })
        .collect();
    TimedAutomaton { alphabet, transitions, ..a.clone() }
}

/// Finite-word automaton to Büchi: after acceptance any suffix is allowed.
pub fn suffix_omega(a: &TimedAutomaton) -> Result<TimedAutomaton> {
    if a.mode != Mode::Finite {
        return Err(Error::Invalid("suffix_omega expects a finite-mode automaton".into()));
    }
    let mut b = a.clone();
    let mut names = b.locations.clone();
    names.push("sink".into());
    dedup_names(&mut names);
    let sink = b.add_location(names.pop().unwrap());
    for &f in &a.final_sets[0] {
        b.add_transition(f, Label::Eps, ClockConstraint::True, vec![], sink);
    }
    for x in 0..a.alphabet.len() {
        b.add_transition(sink, Label::Sym(x), ClockConstraint::True, vec![], sink);
    }
    b.final_sets = vec![vec![sink]];
    b.mode = Mode::Buchi;
    Ok(b)
}

fn deciding_space(a: &TimedAutomaton, m: u32) -> RegionSpace {
    RegionSpace::with_pairs(a.k(), m, a.diagonal_pairs())
}

/// No epsilon, at most one initial location, and overlapping guards on the
/// same symbol always agree on resets and target.
pub fn is_deterministic(a: &TimedAutomaton) -> bool {
    if a.has_epsilon() || a.initial.len() > 1 {
        return false;
    }
    let space = deciding_space(a, a.max_constant());
    let regions = space.enumerate();
    let out = a.outgoing();
    for ts in &out {
        for (i, &ti) in ts.iter().enumerate() {
            for &tj in &ts[i + 1..] {
                let (x, y) = (&a.transitions[ti], &a.transitions[tj]);
                if x.label != y.label {
                    continue;
                }
                let rx: BTreeSet<ClockId> = x.resets.iter().copied().collect();
                let ry: BTreeSet<ClockId> = y.resets.iter().copied().collect();
                if x.to == y.to && rx == ry {
                    continue;
                }
                if regions.iter().any(|r| space.satisfies(r, &x.guard) && space.satisfies(r, &y.guard)) {
                    return false;
                }
            }
        }
    }
    true
}

/// Transitions grouped per location and symbol, one guard per region of
/// the deciding space; regions not covered lead to a fresh rejecting sink.
fn complete_by_regions(d: &TimedAutomaton, m: u32, space: &RegionSpace, per_region: bool) -> TimedAutomaton {
    let regions: Vec<Region> = space.enumerate();
    let out = d.outgoing();
    let mut b = TimedAutomaton { transitions: Vec::new(), ..d.clone() };
    let mut sink: Option<usize> = None;
    let mut names = d.locations.clone();
    names.push("reject".into());
    dedup_names(&mut names);
    let sink_name = names.pop().unwrap();
    let _ = m;
    let covered = |l: usize, x: usize, r: &Region| {
        out[l].iter().map(|&i| &d.transitions[i]).find(|t| t.label == Label::Sym(x) && space.satisfies(r, &t.guard))
    };
    let any_missing = (0..d.locations.len())
        .any(|l| (0..d.alphabet.len()).any(|x| regions.iter().any(|r| covered(l, x, r).is_none())));
    if any_missing || d.initial.is_empty() {
        sink = Some(b.add_location(sink_name.clone()));
    }
    for l in 0..d.locations.len() {
        for x in 0..d.alphabet.len() {
            if per_region {
                for r in &regions {
                    match covered(l, x, r) {
                        Some(t) => b.add_transition(l, t.label, space.characteristic(r), t.resets.clone(), t.to),
                        None => b.add_transition(l, Label::Sym(x), space.characteristic(r), vec![], sink.unwrap()),
                    }
                }
            } else {
                let mut missing = Vec::new();
                for t in out[l].iter().map(|&i| &d.transitions[i]).filter(|t| t.label == Label::Sym(x)) {
                    b.transitions.push(t.clone());
                }
                for r in &regions {
                    if covered(l, x, r).is_none() {
                        missing.push(space.characteristic(r));
                    }
                }
                if !missing.is_empty() {
                    b.add_transition(l, Label::Sym(x), ClockConstraint::or(missing), vec![], sink.unwrap());
                }
            }
        }
    }
    if let Some(s) = sink {
        for x in 0..d.alphabet.len() {
            if per_region {
                for r in &regions {
                    b.add_transition(s, Label::Sym(x), space.characteristic(r), vec![], s);
                }
            } else {
                b.add_transition(s, Label::Sym(x), ClockConstraint::True, vec![], s);
            }
        }
    }
    if b.initial.is_empty() {
        b.initial = vec![sink.unwrap()];
    }
    b
}

/// Complement of a deterministic finite-word automaton: complete with a
/// sink on the uncovered regions, then swap final and non-final locations.
pub fn complement_dta(d: &TimedAutomaton) -> Result<TimedAutomaton> {
    if d.mode != Mode::Finite || !is_deterministic(d) {
        return Err(Error::Invalid("complement_dta expects a deterministic finite-mode automaton".into()));
    }
    let m = d.max_constant();
    let space = deciding_space(d, m);
    let mut b = complete_by_regions(d, m, &space, false);
    let finals: HashSet<usize> = d.final_sets[0].iter().copied().collect();
    b.final_sets = vec![(0..b.locations.len()).filter(|l| !finals.contains(l)).collect()];
    Ok(b)
}

/// One transition per location, symbol and region, guarded by the region's
/// characteristic constraint. Classic regions unless `d` has diagonal
/// guards.
pub fn regionise(d: &TimedAutomaton, m: u32) -> Result<TimedAutomaton> {
    if !is_deterministic(d) {
        return Err(Error::Invalid("regionise expects a deterministic automaton".into()));
    }
    let needed = d.max_constant();
    if m < needed {
        return Err(Error::ConstantTooSmall { m, needed });
    }
    let space = deciding_space(d, m);
    Ok(complete_by_regions(d, m, &space, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::timed::{accepts_finite, TimedWord};

    #[test]
    fn example_l_is_nondeterministic() {
        assert!(!is_deterministic(&fixtures::example_l()));
        let (a, b) = fixtures::points();
        assert!(is_deterministic(&a) && is_deterministic(&b));
    }

    #[test]
    fn complement_flips_membership() {
        let (a, _) = fixtures::points();
        let c = complement_dta(&a).unwrap();
        for w in ["(a,1)", "(a,2)", "(a,1/2)", "", "(a,1)(a,1)"] {
            let w = TimedWord::parse(w, &a.alphabet).unwrap();
            assert_ne!(accepts_finite(&a, &w).unwrap(), accepts_finite(&c, &w).unwrap());
        }
    }

    #[test]
    fn regionise_is_idempotent() {
        let (a, _) = fixtures::points();
        let r1 = regionise(&a, 2).unwrap();
        let r2 = regionise(&r1, 2).unwrap();
        assert_eq!(r1, r2);
    }
}
