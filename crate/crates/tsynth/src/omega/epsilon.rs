use std::collections::{HashMap, VecDeque};

use super::UntimedAutomaton;
use crate::timed::Mode;

fn marks(a: &UntimedAutomaton, q: u32) -> u32 {
    a.final_sets.iter().enumerate().filter(|(_, f)| f[q as usize]).fold(0, |acc, (i, _)| acc | 1 << i)
}

/// All `(state, marks)` reachable from `start` through epsilon edges,
/// accumulating the final-set marks of the states entered.
fn closure(a: &UntimedAutomaton, start: &[(u32, u32)]) -> Vec<(u32, u32)> {
    let mut seen: HashMap<(u32, u32), ()> = HashMap::new();
    let mut queue: VecDeque<(u32, u32)> = VecDeque::new();
    let mut out = Vec::new();
    for &s in start {
        if seen.insert(s, ()).is_none() {
            queue.push_back(s);
            out.push(s);
        }
    }
    while let Some((q, m)) = queue.pop_front() {
        for &(l, t) in &a.edges[q as usize] {
            if l.is_none() {
                let s = (t, m | marks(a, t));
                if seen.insert(s, ()).is_none() {
                    queue.push_back(s);
                    out.push(s);
                }
            }
        }
    }
    out
}

/// Equivalent automaton without epsilon edges. In Büchi mode a state is
/// paired with the final sets visited since the previous symbol; runs that
/// end in epsilon-only loops are not preserved.
pub fn remove_epsilon(a: &UntimedAutomaton) -> UntimedAutomaton {
    if !a.has_epsilon() {
        return a.clone();
    }
    match a.mode {
        Mode::Finite => remove_finite(a),
        Mode::Buchi => remove_buchi(a),
    }
}

fn remove_finite(a: &UntimedAutomaton) -> UntimedAutomaton {
    let n = a.num_states();
    let cl: Vec<Vec<u32>> =
        (0..n as u32).map(|q| closure(a, &[(q, 0)]).into_iter().map(|(p, _)| p).collect()).collect();
    let edges = (0..n)
        .map(|q| {
            let mut out: Vec<(Option<u32>, u32)> = Vec::new();
            for &p in &cl[q] {
                for &(l, t) in &a.edges[p as usize] {
                    if l.is_some() {
                        out.push((l, t));
                    }
                }
            }
            out.sort();
            out.dedup();
            out
        })
        .collect();
    let mut initial: Vec<u32> = a.initial.iter().flat_map(|&q| cl[q as usize].clone()).collect();
    initial.sort();
    initial.dedup();
    let fin: Vec<bool> = (0..n).map(|q| cl[q].iter().any(|&p| a.in_all(p))).collect();
    UntimedAutomaton { alphabet: a.alphabet.clone(), initial, edges, mode: Mode::Finite, final_sets: vec![fin] }
}

fn remove_buchi(a: &UntimedAutomaton) -> UntimedAutomaton {
    let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
    let mut states: Vec<(u32, u32)> = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |s: (u32, u32), states: &mut Vec<(u32, u32)>, queue: &mut VecDeque<u32>| {
        *ids.entry(s).or_insert_with(|| {
            states.push(s);
            queue.push_back(states.len() as u32 - 1);
            states.len() as u32 - 1
        })
    };
    let start: Vec<(u32, u32)> = a.initial.iter().map(|&q| (q, marks(a, q))).collect();
    let mut initial: Vec<u32> = closure(a, &start).into_iter().map(|s| intern(s, &mut states, &mut queue)).collect();
    initial.sort();
    initial.dedup();
    let mut edges: Vec<Vec<(Option<u32>, u32)>> = Vec::new();
    let mut pre_cache: HashMap<u32, Vec<(u32, u32)>> = HashMap::new();
    while let Some(id) = queue.pop_front() {
        let (q, _) = states[id as usize];
        let pre = pre_cache.entry(q).or_insert_with(|| closure(a, &[(q, 0)])).clone();
        let mut out = Vec::new();
        for (p, m1) in pre {
            for &(l, t) in &a.edges[p as usize] {
                if l.is_none() {
                    continue;
                }
                for s in closure(a, &[(t, m1 | marks(a, t))]) {
                    out.push((l, intern(s, &mut states, &mut queue)));
                }
            }
        }
        out.sort();
        out.dedup();
        if edges.len() <= id as usize {
            edges.resize(id as usize + 1, Vec::new());
        }
        edges[id as usize] = out;
    }
    edges.resize(states.len(), Vec::new());
    let final_sets = (0..a.final_sets.len()).map(|i| states.iter().map(|&(_, m)| m >> i & 1 == 1).collect()).collect();
    UntimedAutomaton { alphabet: a.alphabet.clone(), initial, edges, mode: Mode::Buchi, final_sets }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::omega::LassoWord;

    #[test]
    fn keeps_lasso_language() {
        // a-loop at 0, eps to accepting 1, b-loop at 1, eps back to 0
        let a = UntimedAutomaton {
            alphabet: vec!["a".into(), "b".into()],
            initial: vec![0],
            edges: vec![vec![(Some(0), 0), (None, 1)], vec![(Some(1), 1), (None, 0)], vec![]],
            mode: Mode::Buchi,
            final_sets: vec![vec![false, true, false]],
        };
        let b = remove_epsilon(&a);
        assert!(!b.has_epsilon());
        for (stem, cycle) in [(vec![], vec![0]), (vec![0], vec![1]), (vec![], vec![0, 1]), (vec![1, 1], vec![0, 0])] {
            let w = LassoWord { stem, cycle };
            assert_eq!(a.accepts_lasso(&w), b.accepts_lasso(&w), "{w:?}");
        }
    }
}
