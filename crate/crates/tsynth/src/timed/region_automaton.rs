use std::collections::{HashMap, VecDeque};
use std::rc::Rc;

use log::debug;

use super::{Label, TimedAutomaton};
use crate::error::{Error, Result};
use crate::omega::UntimedAutomaton;
use crate::regions::{Region, RegionSpace};

/// Untimed automaton whose states are `(location, region)` pairs.
#[derive(Clone, Debug)]
pub struct RegionAutomaton {
    pub space: RegionSpace,
    pub states: Vec<(usize, Region)>,
    pub automaton: UntimedAutomaton,
}

impl RegionAutomaton {
    pub fn state_of(&self, loc: usize, r: &Region) -> Option<u32> {
        self.states.binary_search_by(|(l, s)| (l, s).cmp(&(&loc, r))).ok().map(|i| i as u32)
    }
}

/// Region automaton restricted to the part reachable from the initial
/// configurations. States are sorted by location index, then region.
pub fn region_automaton(a: &TimedAutomaton, m: u32) -> Result<RegionAutomaton> {
    region_automaton_capped(a, m, usize::MAX)
}

pub fn region_automaton_capped(a: &TimedAutomaton, m: u32, cap: usize) -> Result<RegionAutomaton> {
    let needed = a.max_constant();
    if m < needed {
        return Err(Error::ConstantTooSmall { m, needed });
    }
    let space = RegionSpace::with_pairs(a.k(), m, a.diagonal_pairs());
    let out = a.outgoing();
    let mut ids: HashMap<(usize, Region), u32> = HashMap::new();
    let mut states: Vec<(usize, Region)> = Vec::new();
    let mut queue = VecDeque::new();
    let mut chains: HashMap<Region, Rc<Vec<Region>>> = HashMap::new();
    let zero = space.zero();
    for &l in &a.initial {
        let key = (l, zero.clone());
        if !ids.contains_key(&key) {
            ids.insert(key.clone(), states.len() as u32);
            states.push(key);
            queue.push_back(states.len() as u32 - 1);
        }
    }
    let mut edges: Vec<Vec<(Option<u32>, u32)>> = Vec::new();
    while let Some(id) = queue.pop_front() {
        let (l, r) = states[id as usize].clone();
        let chain = chains.entry(r.clone()).or_insert_with(|| Rc::new(space.successor_chain(&r))).clone();
        let mut es = Vec::new();
        for &ti in &out[l] {
            let t = &a.transitions[ti];
            for s in chain.iter() {
                if space.satisfies(s, &t.guard) {
                    let key = (t.to, space.reset(s, &t.resets));
                    let next = states.len() as u32;
                    let tid = *ids.entry(key.clone()).or_insert_with(|| {
                        states.push(key);
                        queue.push_back(next);
                        next
                    });
                    let label = match t.label {
                        Label::Sym(x) => Some(x as u32),
                        Label::Eps => None,
                    };
                    es.push((label, tid));
                }
            }
        }
        es.sort_unstable();
        es.dedup();
        if edges.len() <= id as usize {
            edges.resize(id as usize + 1, Vec::new());
        }
        edges[id as usize] = es;
        if states.len() > cap {
            return Err(Error::Resource { what: "region automaton".into(), cap });
        }
    }
    edges.resize(states.len(), Vec::new());
    // canonical order
    let mut order: Vec<u32> = (0..states.len() as u32).collect();
    order.sort_by(|&x, &y| states[x as usize].cmp(&states[y as usize]));
    let mut rank = vec![0u32; states.len()];
    for (i, &o) in order.iter().enumerate() {
        rank[o as usize] = i as u32;
    }
    let sorted_states: Vec<(usize, Region)> = order.iter().map(|&o| states[o as usize].clone()).collect();
    let sorted_edges: Vec<Vec<(Option<u32>, u32)>> = order
        .iter()
        .map(|&o| {
            let mut es: Vec<_> = edges[o as usize].iter().map(|&(l, t)| (l, rank[t as usize])).collect();
            es.sort_unstable();
            es
        })
        .collect();
    let mut initial: Vec<u32> = a.initial.iter().map(|&l| rank[ids[&(l, zero.clone())] as usize]).collect();
    initial.sort_unstable();
    initial.dedup();
    let final_sets = (0..a.final_sets.len())
        .map(|i| {
            let mask = a.final_mask(i);
            sorted_states.iter().map(|(l, _)| mask[*l]).collect()
        })
        .collect();
    debug!("region automaton: {} states", sorted_states.len());
    Ok(RegionAutomaton {
        space,
        states: sorted_states,
        automaton: UntimedAutomaton {
            alphabet: a.alphabet.clone(),
            initial,
            edges: sorted_edges,
            mode: a.mode,
            final_sets,
        },
    })
}
