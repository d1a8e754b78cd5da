use std::collections::{HashMap, VecDeque};

use log::debug;

use super::{ParityAutomaton, UntimedAutomaton};
use crate::error::{Error, Result};
use crate::timed::Mode;

pub const DEFAULT_CAP: usize = 200_000;

const ROOT: u16 = u16::MAX;

/// Compact Safra tree: nodes listed by age, so the list index is the name.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Tree(Vec<(u16, Vec<u32>)>);

fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn minus(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut j, mut out) = (0, Vec::new());
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j >= b.len() || b[j] != x {
            out.push(x);
        }
    }
    out
}

fn union(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

struct Nba {
    sigma: usize,
    /// successor lists indexed by `q * sigma + a`
    succ: Vec<Vec<u32>>,
    accepting: Vec<bool>,
}

impl Nba {
    fn post(&self, label: &[u32], a: usize) -> Vec<u32> {
        let mut out: Vec<u32> =
            label.iter().flat_map(|&q| self.succ[q as usize * self.sigma + a].iter().copied()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// One Safra step; returns the successor tree and the step priority.
fn step(nba: &Nba, t: &Tree, a: usize, insignificant: u32) -> (Tree, u32) {
    let old = t.0.len();
    let mut nodes: Vec<(u16, Vec<u32>)> = t.0.iter().map(|(p, l)| (*p, nba.post(l, a))).collect();
    for i in 0..old {
        let acc: Vec<u32> = nodes[i].1.iter().copied().filter(|&q| nba.accepting[q as usize]).collect();
        if !acc.is_empty() {
            nodes.push((i as u16, acc));
        }
    }
    let n = nodes.len();
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, (p, _)) in nodes.iter().enumerate() {
        if *p != ROOT {
            children[*p as usize].push(i);
        }
    }
    // horizontal merge: a state stays only in the oldest branch holding it
    let mut order = Vec::new();
    let mut stack: Vec<usize> = (0..n).filter(|&i| nodes[i].0 == ROOT).rev().collect();
    while let Some(v) = stack.pop() {
        order.push(v);
        let mut claimed: Vec<u32> = Vec::new();
        for &c in &children[v] {
            let own = intersect(&nodes[c].1, &nodes[v].1);
            let own = minus(&own, &claimed);
            claimed = union(&claimed, &own);
            nodes[c].1 = own;
        }
        for &c in children[v].iter().rev() {
            stack.push(c);
        }
    }
    let mut alive: Vec<bool> = nodes.iter().map(|(_, l)| !l.is_empty()).collect();
    let mut green = vec![false; n];
    // vertical merge, top-down
    for &v in &order {
        if !alive[v] || children[v].is_empty() {
            continue;
        }
        let live_children: Vec<usize> = children[v].iter().copied().filter(|&c| alive[c]).collect();
        if live_children.is_empty() {
            continue;
        }
        let total: usize = live_children.iter().map(|&c| nodes[c].1.len()).sum();
        if total == nodes[v].1.len() {
            green[v] = true;
            let mut st = live_children;
            while let Some(c) = st.pop() {
                alive[c] = false;
                st.extend(children[c].iter().copied().filter(|&d| alive[d]));
            }
        }
    }
    // a dead ancestor kills its descendants (labels are nested, so this only
    // matters for bookkeeping)
    for &v in &order {
        if nodes[v].0 != ROOT && !alive[nodes[v].0 as usize] {
            alive[v] = false;
        }
    }
    let removed = (0..old).find(|&i| !alive[i]).map(|i| i as u32 + 1);
    let flashed = (0..old).find(|&i| green[i] && alive[i]).map(|i| i as u32 + 1);
    let prio = match (flashed, removed) {
        (Some(f), Some(e)) if f < e => 2 * f,
        (Some(f), None) => 2 * f,
        (_, Some(e)) => 2 * e - 1,
        (None, None) => insignificant,
    };
    let mut rename = vec![ROOT; n];
    let mut next = 0u16;
    for i in 0..n {
        if alive[i] {
            rename[i] = next;
            next += 1;
        }
    }
    let tree = (0..n)
        .filter(|&i| alive[i])
        .map(|i| {
            let p = nodes[i].0;
            (if p == ROOT { ROOT } else { rename[p as usize] }, std::mem::take(&mut nodes[i].1))
        })
        .collect();
    (Tree(tree), prio)
}

/// Safra–Piterman determinization of an epsilon-free Büchi automaton into
/// a state-based parity automaton (least priority seen infinitely often
/// must be even). Fails once more than `cap` states are built.
pub fn determinize(a: &UntimedAutomaton, cap: usize) -> Result<ParityAutomaton> {
    if a.mode != Mode::Buchi || a.final_sets.len() != 1 || a.has_epsilon() {
        return Err(Error::Invalid("determinize expects an epsilon-free Büchi automaton with one final set".into()));
    }
    let sigma = a.alphabet.len();
    let n = a.num_states();
    let mut succ = vec![Vec::new(); n * sigma];
    for (q, es) in a.edges.iter().enumerate() {
        for &(l, t) in es {
            succ[q * sigma + l.unwrap() as usize].push(t);
        }
    }
    for s in succ.iter_mut() {
        s.sort_unstable();
        s.dedup();
    }
    let nba = Nba { sigma, succ, accepting: a.final_sets[0].clone() };
    let insignificant = 2 * n as u32 + 1;
    let mut init: Vec<u32> = a.initial.clone();
    init.sort_unstable();
    init.dedup();
    let t0 = if init.is_empty() { Tree(Vec::new()) } else { Tree(vec![(ROOT, init)]) };
    let mut tree_ids: HashMap<Tree, u32> = HashMap::new();
    let mut trees: Vec<Tree> = Vec::new();
    let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
    let mut states: Vec<(u32, u32)> = Vec::new();
    let mut queue = VecDeque::new();
    let mut delta: Vec<u32> = Vec::new();
    let mut tree_step_cache: HashMap<u32, Vec<(u32, u32)>> = HashMap::new();
    tree_ids.insert(t0.clone(), 0);
    trees.push(t0);
    ids.insert((0, insignificant), 0);
    states.push((0, insignificant));
    queue.push_back(0u32);
    while let Some(s) = queue.pop_front() {
        let (tid, _) = states[s as usize];
        if !tree_step_cache.contains_key(&tid) {
            let t = trees[tid as usize].clone();
            let mut row = Vec::with_capacity(sigma);
            for x in 0..sigma {
                let (t2, p) = step(&nba, &t, x, insignificant);
                let next = tree_ids.len() as u32;
                let id = *tree_ids.entry(t2.clone()).or_insert_with(|| {
                    trees.push(t2);
                    next
                });
                row.push((id, p));
            }
            tree_step_cache.insert(tid, row);
        }
        let row = tree_step_cache[&tid].clone();
        if delta.len() < (s as usize + 1) * sigma {
            delta.resize((s as usize + 1) * sigma, 0);
        }
        for (x, key) in row.into_iter().enumerate() {
            let next = states.len() as u32;
            let id = *ids.entry(key).or_insert_with(|| {
                states.push(key);
                queue.push_back(next);
                next
            });
            delta[s as usize * sigma + x] = id;
        }
        if states.len() > cap {
            return Err(Error::Resource { what: "determinization".into(), cap });
        }
    }
    delta.resize(states.len() * sigma, 0);
    debug!("determinized {} NBA states into {} parity states ({} trees)", n, states.len(), trees.len());
    Ok(ParityAutomaton {
        alphabet: a.alphabet.clone(),
        initial: 0,
        delta,
        priority: states.iter().map(|&(_, p)| p).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::omega::LassoWord;
    use itertools::Itertools;

    fn all_lassos(sigma: u32, max_stem: usize, max_cycle: usize) -> Vec<LassoWord> {
        let words = |len: usize| (0..len).map(|_| 0..sigma).multi_cartesian_product().collect::<Vec<_>>();
        let mut out = Vec::new();
        for s in 0..=max_stem {
            let stems: Vec<Vec<u32>> = if s == 0 { vec![vec![]] } else { words(s) };
            for c in 1..=max_cycle {
                for stem in &stems {
                    for cycle in words(c) {
                        out.push(LassoWord { stem: stem.clone(), cycle });
                    }
                }
            }
        }
        out
    }

    #[test]
    fn finitely_many_b() {
        // the classic automaton with no deterministic Büchi equivalent
        let a = UntimedAutomaton {
            alphabet: vec!["a".into(), "b".into()],
            initial: vec![0],
            edges: vec![vec![(Some(0), 0), (Some(1), 0), (Some(0), 1)], vec![(Some(0), 1)]],
            mode: Mode::Buchi,
            final_sets: vec![vec![false, true]],
        };
        let p = determinize(&a, DEFAULT_CAP).unwrap();
        for w in all_lassos(2, 3, 3) {
            assert_eq!(a.accepts_lasso(&w), p.accepts_lasso(&w), "{w:?}");
        }
    }

    #[test]
    fn cap_is_reported() {
        let a = UntimedAutomaton {
            alphabet: vec!["a".into(), "b".into()],
            initial: vec![0],
            edges: vec![vec![(Some(0), 0), (Some(1), 0), (Some(0), 1)], vec![(Some(0), 1)]],
            mode: Mode::Buchi,
            final_sets: vec![vec![false, true]],
        };
        let err = determinize(&a, 1).unwrap_err();
        assert!(err.to_string().contains("cap of 1"));
    }
}
