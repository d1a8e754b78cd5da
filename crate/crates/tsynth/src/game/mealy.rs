use std::collections::HashMap;

use serde::{Deserialize, Serialize};

/// Deterministic Mealy machine: `delta[state * |inputs| + input] =
/// (next, output)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MealyController {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub initial: u32,
    pub delta: Vec<(u32, u32)>,
}

impl MealyController {
    pub fn num_states(&self) -> usize {
        self.delta.len() / self.inputs.len().max(1)
    }

    pub fn step(&self, q: u32, a: u32) -> (u32, u32) {
        self.delta[q as usize * self.inputs.len() + a as usize]
    }

    /// Outputs produced on an input sequence.
    pub fn run(&self, inputs: &[u32]) -> Vec<u32> {
        let mut q = self.initial;
        inputs
            .iter()
            .map(|&a| {
                let (n, b) = self.step(q, a);
                q = n;
                b
            })
            .collect()
    }

    /// Smallest equivalent machine (reachable part, partition refinement).
    pub fn minimize(&self) -> MealyController {
        let na = self.inputs.len();
        let n = self.num_states();
        // reachable states in BFS order
        let mut order = vec![self.initial];
        let mut seen = vec![false; n];
        seen[self.initial as usize] = true;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for a in 0..na {
                let (t, _) = self.step(q, a as u32);
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    order.push(t);
                }
            }
            i += 1;
        }
        let mut class: HashMap<u32, u32> = order.iter().map(|&q| (q, 0)).collect();
        loop {
            let mut sigs: HashMap<(u32, Vec<(u32, u32)>), u32> = HashMap::new();
            let mut next: HashMap<u32, u32> = HashMap::new();
            for &q in &order {
                let sig: Vec<(u32, u32)> = (0..na)
                    .map(|a| {
                        let (t, b) = self.step(q, a as u32);
                        (class[&t], b)
                    })
                    .collect();
                let len = sigs.len() as u32;
                let id = *sigs.entry((class[&q], sig)).or_insert(len);
                next.insert(q, id);
            }
            let stable = sigs.len() == class.values().collect::<std::collections::HashSet<_>>().len();
            class = next;
            if stable {
                break;
            }
        }
        // renumber classes by first appearance in BFS order
        let mut renum: HashMap<u32, u32> = HashMap::new();
        let mut reps = Vec::new();
        for &q in &order {
            let c = class[&q];
            if !renum.contains_key(&c) {
                renum.insert(c, reps.len() as u32);
                reps.push(q);
            }
        }
        let delta = reps
            .iter()
            .flat_map(|&q| {
                (0..na).map(move |a| {
                    let (t, b) = self.step(q, a as u32);
                    (t, b)
                })
            })
            .map(|(t, b)| (renum[&class[&t]], b))
            .collect();
        MealyController { inputs: self.inputs.clone(), outputs: self.outputs.clone(), initial: 0, delta }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_duplicate_states() {
        // two copies of "echo": output equals input
        let m = MealyController {
            inputs: vec!["a".into(), "b".into()],
            outputs: vec!["a".into(), "b".into()],
            initial: 0,
            delta: vec![(1, 0), (1, 1), (0, 0), (0, 1)],
        };
        let min = m.minimize();
        assert_eq!(min.num_states(), 1);
        assert_eq!(min.run(&[0, 1, 1]), m.run(&[0, 1, 1]));
    }
}
