use std::collections::VecDeque;

use super::{ParityGame, Player};

/// Winning regions and positional winning strategies (an edge index per
/// vertex owned by the player winning there).
#[derive(Clone, Debug)]
pub struct Solution {
    pub winner: Vec<Player>,
    pub strategy: Vec<Option<u32>>,
}

impl Solution {
    pub fn region(&self, p: Player) -> Vec<u32> {
        (0..self.winner.len() as u32).filter(|&v| self.winner[v as usize] == p).collect()
    }
}

struct Ctx<'a> {
    g: &'a ParityGame,
    pred: Vec<Vec<u32>>,
    strategy: Vec<Option<u32>>,
}

impl Ctx<'_> {
    /// Attractor of `target` for `p` inside `inside`; records attractor
    /// moves for `p` in `self.strategy`.
    fn attractor(&mut self, inside: &[bool], target: &[u32], p: Player) -> Vec<bool> {
        let n = self.g.num_vertices();
        let mut attr = vec![false; n];
        let mut count: Vec<u32> = vec![u32::MAX; n];
        let mut queue: VecDeque<u32> = VecDeque::new();
        for &t in target {
            if !attr[t as usize] {
                attr[t as usize] = true;
                queue.push_back(t);
            }
        }
        while let Some(v) = queue.pop_front() {
            for i in 0..self.pred[v as usize].len() {
                let u = self.pred[v as usize][i] as usize;
                if !inside[u] || attr[u] {
                    continue;
                }
                if self.g.owner[u] == p {
                    attr[u] = true;
                    let e = self.g.edges[u].iter().position(|&(_, t)| t == v).unwrap();
                    self.strategy[u] = Some(e as u32);
                    queue.push_back(u as u32);
                } else {
                    if count[u] == u32::MAX {
                        let mut ts: Vec<u32> =
                            self.g.edges[u].iter().map(|e| e.1).filter(|&t| inside[t as usize]).collect();
                        ts.sort_unstable();
                        ts.dedup();
                        count[u] = ts.len() as u32;
                    }
                    count[u] -= 1;
                    if count[u] == 0 {
                        attr[u] = true;
                        queue.push_back(u as u32);
                    }
                }
            }
        }
        attr
    }

    /// Returns the winner of each vertex in `inside` (others untouched).
    fn solve(&mut self, inside: Vec<bool>, winner: &mut [Player]) {
        let verts: Vec<u32> = (0..inside.len() as u32).filter(|&v| inside[v as usize]).collect();
        if verts.is_empty() {
            return;
        }
        let p = verts.iter().map(|&v| self.g.priority[v as usize]).min().unwrap();
        let alpha = Player::of_priority(p);
        let top: Vec<u32> = verts.iter().copied().filter(|&v| self.g.priority[v as usize] == p).collect();
        for &v in &top {
            if self.g.owner[v as usize] == alpha {
                let e = self.g.edges[v as usize].iter().position(|&(_, t)| inside[t as usize]).unwrap();
                self.strategy[v as usize] = Some(e as u32);
            }
        }
        let a = self.attractor(&inside, &top, alpha);
        let rest: Vec<bool> = (0..inside.len()).map(|v| inside[v] && !a[v]).collect();
        self.solve(rest.clone(), winner);
        let beta_region: Vec<u32> =
            (0..inside.len() as u32).filter(|&v| rest[v as usize] && winner[v as usize] == alpha.opponent()).collect();
        if beta_region.is_empty() {
            for &v in &verts {
                winner[v as usize] = alpha;
            }
            return;
        }
        let b = self.attractor(&inside, &beta_region, alpha.opponent());
        for v in 0..inside.len() {
            if b[v] {
                winner[v] = alpha.opponent();
            }
        }
        let rest2: Vec<bool> = (0..inside.len()).map(|v| inside[v] && !b[v]).collect();
        self.solve(rest2, winner);
    }
}

/// Zielonka's recursive algorithm.
pub fn solve_parity(g: &ParityGame) -> Solution {
    assert!(g.is_total(), "every vertex needs a successor");
    let n = g.num_vertices();
    let mut pred = vec![Vec::new(); n];
    for (u, es) in g.edges.iter().enumerate() {
        for &(_, v) in es {
            pred[v as usize].push(u as u32);
        }
    }
    for p in pred.iter_mut() {
        p.sort_unstable();
        p.dedup();
    }
    let mut ctx = Ctx { g, pred, strategy: vec![None; n] };
    let mut winner = vec![Player::I; n];
    ctx.solve(vec![true; n], &mut winner);
    let strategy = (0..n).map(|v| if g.owner[v] == winner[v] { ctx.strategy[v] } else { None }).collect();
    Solution { winner, strategy }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::graph;
    use rand::{Rng, SeedableRng};

    /// Some cycle reachable from `start` has least priority of parity `odd`.
    pub fn bad_cycle(g: &ParityGame, succ: &[Vec<u32>], start: u32, odd: bool) -> bool {
        let n = g.num_vertices();
        let reach = graph::reachable(n, succ, &[start]);
        let mut prios: Vec<u32> = g.priority.clone();
        prios.sort_unstable();
        prios.dedup();
        prios.into_iter().filter(|p| (p % 2 == 1) == odd).any(|p| {
            let sub: Vec<Vec<u32>> = (0..n)
                .map(|v| {
                    if reach[v] && g.priority[v] >= p {
                        succ[v].iter().copied().filter(|&w| g.priority[w as usize] >= p).collect()
                    } else {
                        Vec::new()
                    }
                })
                .collect();
            let (comps, _) = graph::sccs(n, &sub);
            comps.iter().any(|c| {
                c.iter().any(|&v| g.priority[v as usize] == p) && (c.len() > 1 || sub[c[0] as usize].contains(&c[0]))
            })
        })
    }

    /// Winning regions by enumerating positional strategies of `p`.
    pub fn brute_force(g: &ParityGame, p: Player) -> Vec<bool> {
        let n = g.num_vertices();
        let mine: Vec<usize> = (0..n).filter(|&v| g.owner[v] == p).collect();
        let mut win = vec![false; n];
        let mut choice = vec![0usize; mine.len()];
        loop {
            let succ: Vec<Vec<u32>> = (0..n)
                .map(|v| match mine.iter().position(|&m| m == v) {
                    Some(i) => vec![g.edges[v][choice[i]].1],
                    None => g.edges[v].iter().map(|e| e.1).collect(),
                })
                .collect();
            for v in 0..n {
                if !win[v] && !bad_cycle(g, &succ, v as u32, p == Player::I) {
                    win[v] = true;
                }
            }
            let mut i = 0;
            loop {
                if i == mine.len() {
                    return win;
                }
                choice[i] += 1;
                if choice[i] < g.edges[mine[i]].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    pub fn random_game(rng: &mut impl Rng, max_v: usize, max_p: u32) -> ParityGame {
        let n = rng.gen_range(1..=max_v);
        let owner = (0..n).map(|_| if rng.gen() { Player::I } else { Player::II }).collect();
        let priority = (0..n).map(|_| rng.gen_range(0..max_p)).collect();
        let edges = (0..n)
            .map(|_| {
                let d = rng.gen_range(1..=3.min(n));
                let mut es: Vec<u32> = (0..d).map(|_| rng.gen_range(0..n as u32)).collect();
                es.sort_unstable();
                es.dedup();
                es.into_iter().enumerate().map(|(i, t)| (i as u32, t)).collect()
            })
            .collect();
        ParityGame { owner, priority, edges, initial: 0 }
    }

    /// The strategy of each region's winner wins from every vertex there.
    pub fn strategies_win(g: &ParityGame, s: &Solution) -> bool {
        let n = g.num_vertices();
        [Player::I, Player::II].iter().all(|&p| {
            let succ: Vec<Vec<u32>> = (0..n)
                .map(|v| {
                    if g.owner[v] == p && s.winner[v] == p {
                        vec![g.edges[v][s.strategy[v].unwrap() as usize].1]
                    } else {
                        g.edges[v].iter().map(|e| e.1).collect()
                    }
                })
                .collect();
            (0..n).filter(|&v| s.winner[v] == p).all(|v| !bad_cycle(g, &succ, v as u32, p == Player::I))
        })
    }

    #[test]
    fn single_vertex() {
        let g = ParityGame { owner: vec![Player::I], priority: vec![0], edges: vec![vec![(0, 0)]], initial: 0 };
        assert_eq!(solve_parity(&g).winner, vec![Player::I]);
        let g = ParityGame { priority: vec![1], ..g };
        assert_eq!(solve_parity(&g).winner, vec![Player::II]);
    }

    #[test]
    fn matches_brute_force() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let g = random_game(&mut rng, 6, 3);
            let s = solve_parity(&g);
            let bi = brute_force(&g, Player::I);
            let bii = brute_force(&g, Player::II);
            for v in 0..g.num_vertices() {
                assert_eq!(bi[v], !bii[v]);
                assert_eq!(s.winner[v] == Player::I, bi[v], "{g:?}");
            }
            assert!(strategies_win(&g, &s));
        }
    }
}
