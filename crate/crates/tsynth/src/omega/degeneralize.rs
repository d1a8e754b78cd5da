use std::collections::{HashMap, VecDeque};

use super::UntimedAutomaton;
use crate::error::{Error, Result};
use crate::timed::Mode;

/// Counter construction from generalized Büchi to Büchi acceptance.
pub fn degeneralize(a: &UntimedAutomaton) -> Result<UntimedAutomaton> {
    if a.mode != Mode::Buchi {
        return Err(Error::Invalid("degeneralize expects Büchi acceptance".into()));
    }
    if a.has_epsilon() {
        return Err(Error::Invalid("degeneralize expects an epsilon-free automaton".into()));
    }
    let g = a.final_sets.len();
    if g <= 1 {
        let mut b = a.clone();
        if g == 0 {
            b.final_sets = vec![vec![true; a.num_states()]];
        }
        return Ok(b);
    }
    let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
    let mut states = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |s: (u32, u32), states: &mut Vec<(u32, u32)>, queue: &mut VecDeque<u32>| {
        *ids.entry(s).or_insert_with(|| {
            states.push(s);
            queue.push_back(states.len() as u32 - 1);
            states.len() as u32 - 1
        })
    };
    let initial: Vec<u32> = a.initial.iter().map(|&q| intern((q, 0), &mut states, &mut queue)).collect();
    let mut edges: Vec<Vec<(Option<u32>, u32)>> = Vec::new();
    while let Some(id) = queue.pop_front() {
        let (q, c) = states[id as usize];
        let c2 = if a.final_sets[c as usize][q as usize] { (c + 1) % g as u32 } else { c };
        let out: Vec<_> =
            a.edges[q as usize].iter().map(|&(l, t)| (l, intern((t, c2), &mut states, &mut queue))).collect();
        if edges.len() <= id as usize {
            edges.resize(id as usize + 1, Vec::new());
        }
        edges[id as usize] = out;
    }
    edges.resize(states.len(), Vec::new());
    let fin = states.iter().map(|&(q, c)| c == 0 && a.final_sets[0][q as usize]).collect();
    Ok(UntimedAutomaton { alphabet: a.alphabet.clone(), initial, edges, mode: Mode::Buchi, final_sets: vec![fin] })
}
