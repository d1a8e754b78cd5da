use std::fmt;

use crate::omega::ParityAutomaton;

/// Player I wins plays whose least priority seen infinitely often is even.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Player {
    I,
    II,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::I => Player::II,
            Player::II => Player::I,
        }
    }

    pub fn of_priority(p: u32) -> Player {
        if p % 2 == 0 {
            Player::I
        } else {
            Player::II
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::I => write!(f, "Player I"),
            Player::II => write!(f, "Player II"),
        }
    }
}

/// Parity game with action-labelled edges. Every vertex needs at least one
/// outgoing edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityGame {
    pub owner: Vec<Player>,
    pub priority: Vec<u32>,
    pub edges: Vec<Vec<(u32, u32)>>,
    pub initial: u32,
}

impl ParityGame {
    pub fn num_vertices(&self) -> usize {
        self.owner.len()
    }

    pub fn is_total(&self) -> bool {
        self.edges.iter().all(|e| !e.is_empty())
    }
}

/// Arena for the game on a deterministic parity automaton over `A × B`
/// (symbol `a * |B| + b`): Player I picks `a` at automaton states, Player II
/// answers `b` at intermediate vertices `(q, a)`.
pub fn build_synthesis_arena(p: &ParityAutomaton, na: usize, nb: usize) -> ParityGame {
    assert_eq!(p.alphabet.len(), na * nb, "alphabet is not a product");
    let n = p.num_states();
    let mut owner = vec![Player::I; n];
    owner.extend(std::iter::repeat(Player::II).take(n * na));
    let mut priority = p.priority.clone();
    for q in 0..n {
        priority.extend(std::iter::repeat(p.priority[q]).take(na));
    }
    let mut edges = Vec::with_capacity(n * (na + 1));
    for q in 0..n {
        edges.push((0..na).map(|a| (a as u32, (n + q * na + a) as u32)).collect());
    }
    for q in 0..n {
        for a in 0..na {
            edges.push((0..nb).map(|b| (b as u32, p.step(q as u32, (a * nb + b) as u32))).collect());
        }
    }
    ParityGame { owner, priority, edges, initial: p.initial }
}
