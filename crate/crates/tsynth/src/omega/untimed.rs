use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::graph;
use crate::timed::Mode;

/// Ultimately periodic word `stem · cycle^ω` over symbol indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LassoWord {
    pub stem: Vec<u32>,
    pub cycle: Vec<u32>,
}

impl LassoWord {
    pub fn letter(&self, pos: usize) -> u32 {
        if pos < self.stem.len() {
            self.stem[pos]
        } else {
            self.cycle[(pos - self.stem.len()) % self.cycle.len()]
        }
    }

    /// Position following `pos` in the finite lasso graph.
    pub fn next_pos(&self, pos: usize) -> usize {
        let n = self.stem.len() + self.cycle.len();
        if pos + 1 < n {
            pos + 1
        } else {
            self.stem.len()
        }
    }

    pub fn positions(&self) -> usize {
        self.stem.len() + self.cycle.len()
    }
}

/// Nondeterministic automaton with epsilon edges (`None` labels).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UntimedAutomaton {
    pub alphabet: Vec<String>,
    pub initial: Vec<u32>,
    pub edges: Vec<Vec<(Option<u32>, u32)>>,
    pub mode: Mode,
    pub final_sets: Vec<Vec<bool>>,
}

impl UntimedAutomaton {
    pub fn num_states(&self) -> usize {
        self.edges.len()
    }

    pub fn has_epsilon(&self) -> bool {
        self.edges.iter().flatten().any(|(l, _)| l.is_none())
    }

    pub fn in_all(&self, q: u32) -> bool {
        self.final_sets.iter().all(|s| s[q as usize])
    }

    pub fn successors(&self) -> Vec<Vec<u32>> {
        self.edges.iter().map(|es| es.iter().map(|e| e.1).collect()).collect()
    }

    /// Finite-word membership (finite mode).
    pub fn accepts_finite(&self, word: &[u32]) -> bool {
        let n = self.num_states();
        let closure = |set: &mut Vec<bool>| {
            let mut stack: Vec<u32> = (0..n as u32).filter(|&q| set[q as usize]).collect();
            while let Some(q) = stack.pop() {
                for &(l, t) in &self.edges[q as usize] {
                    if l.is_none() && !set[t as usize] {
                        set[t as usize] = true;
                        stack.push(t);
                    }
                }
            }
        };
        let mut cur = vec![false; n];
        for &q in &self.initial {
            cur[q as usize] = true;
        }
        closure(&mut cur);
        for &a in word {
            let mut next = vec![false; n];
            for q in 0..n {
                if cur[q] {
                    for &(l, t) in &self.edges[q] {
                        if l == Some(a) {
                            next[t as usize] = true;
                        }
                    }
                }
            }
            closure(&mut next);
            cur = next;
        }
        (0..n).any(|q| cur[q] && self.in_all(q as u32))
    }

    /// Büchi (or generalized Büchi) membership of a lasso word. Runs whose
    /// suffix only takes epsilon edges do not count.
    pub fn accepts_lasso(&self, w: &LassoWord) -> bool {
        assert!(!w.cycle.is_empty(), "lasso cycle must be non-empty");
        let n = self.num_states();
        let p = w.positions();
        let id = |q: u32, pos: usize| q as usize * p + pos;
        let total = n * p;
        let mut succ: Vec<Vec<u32>> = vec![Vec::new(); total];
        let mut sym_edge: Vec<Vec<bool>> = vec![Vec::new(); total];
        for q in 0..n as u32 {
            for pos in 0..p {
                let letter = w.letter(pos);
                for &(l, t) in &self.edges[q as usize] {
                    let (target, is_sym) = match l {
                        None => (id(t, pos), false),
                        Some(a) if a == letter => (id(t, w.next_pos(pos)), true),
                        _ => continue,
                    };
                    succ[id(q, pos)].push(target as u32);
                    sym_edge[id(q, pos)].push(is_sym);
                }
            }
        }
        let start: Vec<u32> = self.initial.iter().map(|&q| id(q, 0) as u32).collect();
        let reach = graph::reachable(total, &succ, &start);
        let (comps, comp) = graph::sccs(total, &succ);
        comps.iter().enumerate().any(|(ci, c)| {
            if !reach[c[0] as usize] {
                return false;
            }
            let has_sym = c.iter().any(|&v| {
                succ[v as usize].iter().zip(&sym_edge[v as usize]).any(|(&t, &s)| s && comp[t as usize] == ci as u32)
            });
            has_sym && self.final_sets.iter().all(|f| c.iter().any(|&v| f[v as usize / p]))
        })
    }

    /// Keeps the states that are reachable and, in Büchi mode, can reach an
    /// accepting cycle; in finite mode, can reach a final state.
    pub fn prune(&self) -> UntimedAutomaton {
        let n = self.num_states();
        let succ = self.successors();
        let reach = graph::reachable(n, &succ, &self.initial);
        let useful = match self.mode {
            Mode::Finite => {
                let finals: Vec<bool> = (0..n).map(|q| reach[q] && self.in_all(q as u32)).collect();
                graph::coreachable(n, &succ, &finals)
            }
            Mode::Buchi => {
                let (comps, comp) = graph::sccs(n, &succ);
                let mut good = vec![false; n];
                for (ci, c) in comps.iter().enumerate() {
                    if !reach[c[0] as usize] {
                        continue;
                    }
                    let internal_sym = c.iter().any(|&v| {
                        self.edges[v as usize].iter().any(|&(l, t)| l.is_some() && comp[t as usize] == ci as u32)
                    });
                    let all_sets = self.final_sets.iter().all(|f| c.iter().any(|&v| f[v as usize]));
                    if internal_sym && all_sets {
                        for &v in c {
                            good[v as usize] = true;
                        }
                    }
                }
                graph::coreachable(n, &succ, &good)
            }
        };
        let keep: Vec<bool> = (0..n).map(|q| reach[q] && useful[q]).collect();
        self.restrict(&keep)
    }

    pub fn restrict(&self, keep: &[bool]) -> UntimedAutomaton {
        let mut map = vec![u32::MAX; keep.len()];
        let mut next = 0u32;
        for (q, &k) in keep.iter().enumerate() {
            if k {
                map[q] = next;
                next += 1;
            }
        }
        let edges = (0..keep.len())
            .filter(|&q| keep[q])
            .map(|q| self.edges[q].iter().filter(|e| keep[e.1 as usize]).map(|&(l, t)| (l, map[t as usize])).collect())
            .collect();
        UntimedAutomaton {
            alphabet: self.alphabet.clone(),
            initial: self.initial.iter().filter(|&&q| keep[q as usize]).map(|&q| map[q as usize]).collect(),
            edges,
            mode: self.mode,
            final_sets: self
                .final_sets
                .iter()
                .map(|f| (0..keep.len()).filter(|&q| keep[q]).map(|q| f[q]).collect())
                .collect(),
        }
    }

    /// Quotient by the coarsest bisimulation respecting final-set
    /// membership. Language preserving in both modes.
    pub fn quotient(&self) -> UntimedAutomaton {
        let n = self.num_states();
        let mut block: Vec<u32> = {
            let mut ids: HashMap<Vec<bool>, u32> = HashMap::new();
            (0..n)
                .map(|q| {
                    let key: Vec<bool> = self.final_sets.iter().map(|f| f[q]).collect();
                    let len = ids.len() as u32;
                    *ids.entry(key).or_insert(len)
                })
                .collect()
        };
        let mut count = block.iter().copied().max().map_or(0, |b| b as usize + 1);
        loop {
            let mut ids: HashMap<(u32, Vec<(Option<u32>, u32)>), u32> = HashMap::new();
            let next: Vec<u32> = (0..n)
                .map(|q| {
                    let mut sig: Vec<(Option<u32>, u32)> =
                        self.edges[q].iter().map(|&(l, t)| (l, block[t as usize])).collect();
                    sig.sort_unstable();
                    sig.dedup();
                    let len = ids.len() as u32;
                    *ids.entry((block[q], sig)).or_insert(len)
                })
                .collect();
            let done = ids.len() == count;
            count = ids.len();
            block = next;
            if done {
                break;
            }
        }
        let mut edges = vec![Vec::new(); count];
        let mut final_sets = vec![vec![false; count]; self.final_sets.len()];
        for q in 0..n {
            let b = block[q] as usize;
            if edges[b].is_empty() {
                let mut es: Vec<(Option<u32>, u32)> =
                    self.edges[q].iter().map(|&(l, t)| (l, block[t as usize])).collect();
                es.sort_unstable();
                es.dedup();
                edges[b] = es;
            }
            for (i, f) in self.final_sets.iter().enumerate() {
                final_sets[i][b] = f[q];
            }
        }
        let mut initial: Vec<u32> = self.initial.iter().map(|&q| block[q as usize]).collect();
        initial.sort_unstable();
        initial.dedup();
        UntimedAutomaton { alphabet: self.alphabet.clone(), initial, edges, mode: self.mode, final_sets }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Infinitely many `a` over {a, b}.
    pub(crate) fn inf_a() -> UntimedAutomaton {
        UntimedAutomaton {
            alphabet: vec!["a".into(), "b".into()],
            initial: vec![0],
            edges: vec![vec![(Some(0), 1), (Some(1), 0)], vec![(Some(0), 1), (Some(1), 0)]],
            mode: Mode::Buchi,
            final_sets: vec![vec![false, true]],
        }
    }

    #[test]
    fn lasso_membership() {
        let a = inf_a();
        assert!(a.accepts_lasso(&LassoWord { stem: vec![1, 1], cycle: vec![1, 0] }));
        assert!(!a.accepts_lasso(&LassoWord { stem: vec![0, 0], cycle: vec![1] }));
    }

    #[test]
    fn epsilon_only_suffix_rejected() {
        let a = UntimedAutomaton {
            alphabet: vec!["a".into()],
            initial: vec![0],
            edges: vec![vec![(Some(0), 0), (None, 1)], vec![(None, 1)]],
            mode: Mode::Buchi,
            final_sets: vec![vec![false, true]],
        };
        assert!(!a.accepts_lasso(&LassoWord { stem: vec![], cycle: vec![0] }));
        assert!(a.prune().num_states() == 0);
    }
}
