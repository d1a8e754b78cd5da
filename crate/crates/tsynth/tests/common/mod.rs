#![allow(dead_code)]
use rand::Rng;
use tsynth::game::{ParityGame, Player};
use tsynth::omega::LassoWord;
use tsynth::rational::Rational;
use tsynth::regions::ClockConstraint;
use tsynth::timed::{
    accepts_lasso, nta_emptiness, product, Label, Mode, TimedAutomaton, TimedLasso, TimedWord, Witness,
};

pub fn random_lasso(rng: &mut impl Rng, sigma: usize, max_stem: usize, max_cycle: usize) -> LassoWord {
    let stem = (0..rng.gen_range(0..=max_stem)).map(|_| rng.gen_range(0..sigma) as u32).collect();
    let cycle = (0..rng.gen_range(1..=max_cycle)).map(|_| rng.gen_range(0..sigma) as u32).collect();
    LassoWord { stem, cycle }
}

/// Monotone word of at most `max_len` letters, denominators at most `max_den`.
pub fn random_word(rng: &mut impl Rng, sigma: usize, max_len: usize, max_den: i64) -> TimedWord {
    let mut times: Vec<Rational> = (0..rng.gen_range(0..=max_len))
        .map(|_| Rational::new(rng.gen_range(0..=3 * max_den), rng.gen_range(1..=max_den)))
        .collect();
    times.sort();
    TimedWord(times.into_iter().map(|t| (rng.gen_range(0..sigma), t)).collect())
}

/// Büchi automaton over `alphabet` requiring letter `x` infinitely often.
pub fn infinitely_often(alphabet: &[String], x: usize) -> TimedAutomaton {
    let mut r = TimedAutomaton::new(alphabet.to_vec(), vec![], Mode::Buchi);
    let wait = r.add_location("wait");
    let seen = r.add_location("seen");
    r.initial = vec![wait];
    r.final_sets = vec![vec![seen]];
    for y in 0..alphabet.len() {
        let to = if y == x { seen } else { wait };
        for from in [wait, seen] {
            r.add_transition(from, Label::Sym(y), ClockConstraint::True, vec![], to);
        }
    }
    r
}

/// Turns an emptiness witness into a periodic word still accepted by `a`.
pub fn witness_lasso(a: &TimedAutomaton, wit: &Witness) -> Option<TimedLasso> {
    let c = wit.cycle_start?;
    let stem = TimedWord(wit.word.0[..c].to_vec());
    let cycle = TimedWord(wit.word.0[c..].to_vec());
    let span = cycle.0.last()?.1 - cycle.0[0].1;
    [Rational::new(1, 4), Rational::new(1, 2), Rational::from_integer(1), Rational::from_integer(2)]
        .into_iter()
        .filter_map(|d| TimedLasso::new(stem.clone(), cycle.clone(), span + d).ok())
        .find(|l| accepts_lasso(a, l).unwrap())
}

/// Up to `count` accepted periodic words of `a`, found by asking for
/// accepting runs that see random letters infinitely often.
pub fn member_lassos(a: &TimedAutomaton, rng: &mut impl Rng, count: usize) -> Vec<TimedLasso> {
    let mut out = Vec::new();
    for _ in 0..count * 4 {
        if out.len() == count {
            break;
        }
        let mut p = a.clone();
        for _ in 0..rng.gen_range(1..=2) {
            p = product(&p, &infinitely_often(&a.alphabet, rng.gen_range(0..a.alphabet.len()))).unwrap();
        }
        if let Some(l) = nta_emptiness(&p).unwrap().and_then(|w| witness_lasso(a, &w)) {
            out.push(l);
        }
    }
    out
}

pub fn random_arena(rng: &mut impl Rng, max_v: usize, max_p: u32) -> ParityGame {
    let n = rng.gen_range(1..=max_v);
    let owner = (0..n).map(|_| if rng.gen_bool(0.5) { Player::I } else { Player::II }).collect();
    let priority = (0..n).map(|_| rng.gen_range(0..max_p)).collect();
    let edges = (0..n)
        .map(|_| {
            let mut es: Vec<u32> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..n) as u32).collect();
            es.sort_unstable();
            es.dedup();
            es.into_iter().enumerate().map(|(i, t)| (i as u32, t)).collect()
        })
        .collect();
    ParityGame { owner, priority, edges, initial: 0 }
}

fn reach(succ: &[Vec<u32>], start: &[u32], allowed: &[bool]) -> Vec<bool> {
    let mut seen = vec![false; succ.len()];
    let mut stack: Vec<u32> = start.iter().copied().filter(|&v| allowed[v as usize]).collect();
    for &v in &stack {
        seen[v as usize] = true;
    }
    while let Some(v) = stack.pop() {
        for &w in &succ[v as usize] {
            if allowed[w as usize] && !seen[w as usize] {
                seen[w as usize] = true;
                stack.push(w);
            }
        }
    }
    seen
}

/// In the one-player graph `succ`, some cycle reachable from `start` has
/// least priority good for `p`'s opponent.
fn opponent_cycle(g: &ParityGame, succ: &[Vec<u32>], start: u32, p: Player) -> bool {
    let n = g.owner.len();
    let all = vec![true; n];
    let from_start = reach(succ, &[start], &all);
    (0..n).any(|v| {
        let pr = g.priority[v];
        if !from_start[v] || Player::of_priority(pr) == p {
            return false;
        }
        let allowed: Vec<bool> = (0..n).map(|u| g.priority[u] >= pr).collect();
        let next: Vec<u32> = succ[v].iter().copied().filter(|&w| allowed[w as usize]).collect();
        reach(succ, &next, &allowed)[v]
    })
}

/// Vertices from which `p` wins, by trying every positional strategy of `p`.
pub fn brute_force_region(g: &ParityGame, p: Player) -> Vec<bool> {
    let n = g.owner.len();
    let choices: Vec<usize> = (0..n).map(|v| if g.owner[v] == p { g.edges[v].len() } else { 1 }).collect();
    let mut won = vec![false; n];
    let mut pick = vec![0usize; n];
    loop {
        let succ: Vec<Vec<u32>> =
            (0..n)
                .map(|v| {
                    if g.owner[v] == p {
                        vec![g.edges[v][pick[v]].1]
                    } else {
                        g.edges[v].iter().map(|e| e.1).collect()
                    }
                })
                .collect();
        for v in 0..n {
            if !won[v] && !opponent_cycle(g, &succ, v as u32, p) {
                won[v] = true;
            }
        }
        let mut i = 0;
        while i < n {
            pick[i] += 1;
            if pick[i] < choices[i] {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
        if i == n {
            return won;
        }
    }
}
