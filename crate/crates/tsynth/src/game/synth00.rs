use log::debug;

use super::{build_synthesis_arena, solve_parity, MealyController, ParityGame, Player};
use crate::error::{Error, Result};
use crate::graph;
use crate::omega::{degeneralize, determinize, remove_epsilon, ParityAutomaton, UntimedAutomaton};

/// Untimed game: Player I plays `inputs`, Player II answers with
/// `outputs`, Player I wins when the play is in `winning` (over symbols
/// `a * |outputs| + b`).
#[derive(Clone, Debug)]
pub struct UntimedGame {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub winning: UntimedAutomaton,
}

/// Outcome of solving an untimed game for Player II.
#[derive(Clone, Debug)]
pub struct UntimedOutcome {
    pub controller: Option<MealyController>,
    pub parity_states: usize,
}

/// Determinizes the winning condition and solves the resulting parity game.
pub fn solve_untimed_game(g: &UntimedGame, cap: usize) -> Result<UntimedOutcome> {
    let (na, nb) = (g.inputs.len(), g.outputs.len());
    if g.winning.alphabet.len() != na * nb {
        return Err(Error::Invalid("winning condition alphabet is not inputs × outputs".into()));
    }
    let nba = remove_epsilon(&g.winning.prune().quotient()).prune().quotient();
    let nba = degeneralize(&nba)?.prune().quotient();
    debug!("game automaton: {} Büchi states", nba.num_states());
    let p = determinize(&nba, cap)?;
    let arena = build_synthesis_arena(&p, na, nb);
    let sol = solve_parity(&arena);
    let parity_states = p.num_states();
    if sol.winner[arena.initial as usize] != Player::II {
        return Ok(UntimedOutcome { controller: None, parity_states });
    }
    let m = extract_mealy(&p, &arena, &sol.strategy, na, nb, &g.inputs, &g.outputs);
    if !controller_avoids(&m, &p) {
        return Err(Error::Check("extracted controller does not win".into()));
    }
    Ok(UntimedOutcome { controller: Some(m.minimize()), parity_states })
}

/// A Mealy controller for Player II avoiding `winning`, if one exists.
pub fn decide_00_synthesis(g: &UntimedGame, cap: usize) -> Result<Option<MealyController>> {
    Ok(solve_untimed_game(g, cap)?.controller)
}

fn extract_mealy(
    p: &ParityAutomaton,
    arena: &ParityGame,
    strategy: &[Option<u32>],
    na: usize,
    nb: usize,
    inputs: &[String],
    outputs: &[String],
) -> MealyController {
    let n = p.num_states();
    let mut ids = vec![u32::MAX; n];
    let mut order = vec![p.initial];
    ids[p.initial as usize] = 0;
    let mut delta = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let q = order[i];
        for a in 0..na {
            let v = n + q as usize * na + a;
            let e = strategy[v].expect("Player II vertex in its winning region has a move");
            let (b, _) = arena.edges[v][e as usize];
            let t = p.step(q, (a * nb + b as usize) as u32);
            if ids[t as usize] == u32::MAX {
                ids[t as usize] = order.len() as u32;
                order.push(t);
            }
            delta.push((ids[t as usize], b));
        }
        i += 1;
    }
    MealyController { inputs: inputs.to_vec(), outputs: outputs.to_vec(), initial: 0, delta }
}

/// Every play consistent with `m` is rejected by `p`.
pub fn controller_avoids(m: &MealyController, p: &ParityAutomaton) -> bool {
    let na = m.inputs.len();
    let nb = m.outputs.len();
    let nm = m.num_states();
    let np = p.num_states();
    let id = |l: u32, q: u32| l as usize * np + q as usize;
    let total = nm * np;
    let mut succ = vec![Vec::new(); total];
    for l in 0..nm as u32 {
        for q in 0..np as u32 {
            for a in 0..na as u32 {
                let (l2, b) = m.step(l, a);
                let q2 = p.step(q, a * nb as u32 + b);
                succ[id(l, q)].push(id(l2, q2) as u32);
            }
        }
    }
    let reach = graph::reachable(total, &succ, &[id(m.initial, p.initial) as u32]);
    let prio = |v: usize| p.priority[v % np];
    let mut evens: Vec<u32> = p.priority.iter().copied().filter(|x| x % 2 == 0).collect();
    evens.sort_unstable();
    evens.dedup();
    evens.into_iter().all(|e| {
        let sub: Vec<Vec<u32>> = (0..total)
            .map(|v| {
                if reach[v] && prio(v) >= e {
                    succ[v].iter().copied().filter(|&w| prio(w as usize) >= e).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        let (comps, _) = graph::sccs(total, &sub);
        !comps
            .iter()
            .any(|c| c.iter().any(|&v| prio(v as usize) == e) && (c.len() > 1 || sub[c[0] as usize].contains(&c[0])))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::omega::DEFAULT_CAP;
    use crate::timed::Mode;

    fn game(winning_edges: Vec<Vec<(Option<u32>, u32)>>, fin: Vec<bool>) -> UntimedGame {
        UntimedGame {
            inputs: vec!["a".into(), "b".into()],
            outputs: vec!["a".into(), "b".into()],
            winning: UntimedAutomaton {
                alphabet: vec!["a|a".into(), "a|b".into(), "b|a".into(), "b|b".into()],
                initial: vec![0],
                edges: winning_edges,
                mode: Mode::Buchi,
                final_sets: vec![fin],
            },
        }
    }

    #[test]
    fn copycat_avoids_mismatch() {
        // Player I wins once a mismatch happens
        let all: Vec<(Option<u32>, u32)> = (0..4).map(|x| (Some(x), 1)).collect();
        let g = game(vec![vec![(Some(0), 0), (Some(3), 0), (Some(1), 1), (Some(2), 1)], all], vec![false, true]);
        let m = decide_00_synthesis(&g, DEFAULT_CAP).unwrap().unwrap();
        assert_eq!(m.num_states(), 1);
        assert_eq!(m.run(&[0, 1, 1, 0]), vec![0, 1, 1, 0]);
    }

    #[test]
    fn unwinnable_when_everything_wins() {
        let all: Vec<(Option<u32>, u32)> = (0..4).map(|x| (Some(x), 0)).collect();
        let g = game(vec![all], vec![true]);
        assert!(decide_00_synthesis(&g, DEFAULT_CAP).unwrap().is_none());
    }
}
