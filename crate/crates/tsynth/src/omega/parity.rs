use std::collections::HashMap;

use super::LassoWord;

/// Deterministic complete parity automaton; a run is accepting when the
/// least priority seen infinitely often is even.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityAutomaton {
    pub alphabet: Vec<String>,
    pub initial: u32,
    /// `delta[q * |alphabet| + a]`
    pub delta: Vec<u32>,
    pub priority: Vec<u32>,
}

impl ParityAutomaton {
    pub fn num_states(&self) -> usize {
        self.priority.len()
    }

    pub fn step(&self, q: u32, a: u32) -> u32 {
        self.delta[q as usize * self.alphabet.len() + a as usize]
    }

    pub fn accepts_lasso(&self, w: &LassoWord) -> bool {
        assert!(!w.cycle.is_empty(), "lasso cycle must be non-empty");
        let mut q = self.initial;
        for &a in &w.stem {
            q = self.step(q, a);
        }
        let mut seen: HashMap<u32, usize> = HashMap::new();
        let mut trace = Vec::new();
        loop {
            if let Some(&start) = seen.get(&q) {
                let min = trace[start..].iter().copied().min().unwrap();
                return min % 2 == 0;
            }
            seen.insert(q, trace.len());
            let mut prios = u32::MAX;
            for &a in &w.cycle {
                prios = prios.min(self.priority[q as usize]);
                q = self.step(q, a);
            }
            trace.push(prios);
        }
    }

    /// Parity automaton for the complement language.
    pub fn complement(&self) -> ParityAutomaton {
        ParityAutomaton { priority: self.priority.iter().map(|p| p + 1).collect(), ..self.clone() }
    }
}
