use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regions::{ClockConstraint, ClockId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Sym(usize),
    Eps,
}

impl Label {
    pub fn sym(self) -> Option<usize> {
        match self {
            Label::Sym(s) => Some(s),
            Label::Eps => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Finite,
    Buchi,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub from: usize,
    pub label: Label,
    pub guard: ClockConstraint,
    pub resets: Vec<ClockId>,
    pub to: usize,
}

/// Timed automaton with optional epsilon transitions.
///
/// `final_sets` holds one set for finite and plain Büchi acceptance and
/// several for generalized Büchi acceptance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimedAutomaton {
    pub alphabet: Vec<String>,
    pub clocks: Vec<String>,
    pub locations: Vec<String>,
    pub initial: Vec<usize>,
    pub final_sets: Vec<Vec<usize>>,
    pub mode: Mode,
    pub transitions: Vec<Transition>,
}

#[derive(Serialize, Deserialize)]
struct TransitionDoc {
    from: String,
    label: String,
    guard: String,
    resets: Vec<String>,
    to: String,
}

#[derive(Serialize, Deserialize)]
struct AutomatonDoc {
    alphabet: Vec<String>,
    clocks: Vec<String>,
    locations: Vec<String>,
    initial: Vec<String>,
    #[serde(rename = "final")]
    finals: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    final_sets: Option<Vec<Vec<String>>>,
    mode: Mode,
    transitions: Vec<TransitionDoc>,
}

fn valid_clock_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && s != "true"
        && s != "false"
}

impl TimedAutomaton {
    pub fn new(alphabet: Vec<String>, clocks: Vec<String>, mode: Mode) -> Self {
        TimedAutomaton {
            alphabet,
            clocks,
            locations: Vec::new(),
            initial: Vec::new(),
            final_sets: vec![Vec::new()],
            mode,
            transitions: Vec::new(),
        }
    }

    pub fn add_location(&mut self, name: impl Into<String>) -> usize {
        self.locations.push(name.into());
        self.locations.len() - 1
    }

    pub fn add_transition(
        &mut self,
        from: usize,
        label: Label,
        guard: ClockConstraint,
        resets: Vec<ClockId>,
        to: usize,
    ) {
        self.transitions.push(Transition { from, label, guard, resets, to });
    }

    pub fn symbol(&self, name: &str) -> Option<usize> {
        self.alphabet.iter().position(|a| a == name)
    }

    pub fn clock(&self, name: &str) -> Option<ClockId> {
        self.clocks.iter().position(|a| a == name).map(ClockId)
    }

    pub fn location(&self, name: &str) -> Option<usize> {
        self.locations.iter().position(|a| a == name)
    }

    pub fn k(&self) -> usize {
        self.clocks.len()
    }

    pub fn has_epsilon(&self) -> bool {
        self.transitions.iter().any(|t| t.label == Label::Eps)
    }

    pub fn max_constant(&self) -> u32 {
        self.transitions.iter().map(|t| t.guard.max_constant()).max().unwrap_or(0)
    }

    pub fn diagonal_pairs(&self) -> Vec<(usize, usize)> {
        let set: BTreeSet<(usize, usize)> = self.transitions.iter().flat_map(|t| t.guard.diagonal_pairs()).collect();
        set.into_iter().collect()
    }

    pub fn final_mask(&self, set: usize) -> Vec<bool> {
        let mut mask = vec![false; self.locations.len()];
        for &l in &self.final_sets[set] {
            mask[l] = true;
        }
        mask
    }

    pub fn is_final(&self, loc: usize) -> bool {
        self.final_sets.iter().all(|s| s.contains(&loc))
    }

    pub fn outgoing(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.locations.len()];
        for (i, t) in self.transitions.iter().enumerate() {
            out[t.from].push(i);
        }
        out
    }

    pub fn label_name(&self, l: Label) -> &str {
        match l {
            Label::Sym(s) => &self.alphabet[s],
            Label::Eps => "eps",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let dup = |v: &[String], what: &str| -> Result<()> {
            let set: BTreeSet<&String> = v.iter().collect();
            if set.len() != v.len() {
                return Err(Error::Invalid(format!("duplicate {what} names")));
            }
            Ok(())
        };
        dup(&self.alphabet, "symbol")?;
        dup(&self.clocks, "clock")?;
        dup(&self.locations, "location")?;
        if self.alphabet.iter().any(|a| a == "eps") {
            return Err(Error::Invalid("`eps` is reserved for epsilon transitions".into()));
        }
        if let Some(c) = self.clocks.iter().find(|c| !valid_clock_name(c)) {
            return Err(Error::Invalid(format!("bad clock name `{c}`")));
        }
        if self.final_sets.is_empty() || (self.mode == Mode::Finite && self.final_sets.len() != 1) {
            return Err(Error::Invalid("wrong number of final sets".into()));
        }
        let n = self.locations.len();
        let locs_ok = self.initial.iter().chain(self.final_sets.iter().flatten()).all(|&l| l < n);
        let trans_ok = self.transitions.iter().all(|t| {
            t.from < n
                && t.to < n
                && t.label.sym().map_or(true, |s| s < self.alphabet.len())
                && t.resets.iter().all(|c| c.0 < self.k())
                && t.guard.atoms().iter().all(|a| a.x.0 < self.k() && a.y.map_or(true, |y| y.0 < self.k()))
        });
        if !locs_ok || !trans_ok {
            return Err(Error::Invalid("index out of range".into()));
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: AutomatonDoc = serde_json::from_str(s)?;
        Self::from_doc(doc)
    }

    pub fn from_value(v: serde_json::Value) -> Result<Self> {
        let doc: AutomatonDoc = serde_json::from_value(v)?;
        Self::from_doc(doc)
    }

    fn from_doc(doc: AutomatonDoc) -> Result<Self> {
        let loc_index: HashMap<&str, usize> = doc.locations.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect();
        let loc =
            |name: &str| loc_index.get(name).copied().ok_or_else(|| Error::Parse(format!("unknown location `{name}`")));
        let clock = |name: &str| {
            doc.clocks
                .iter()
                .position(|c| c == name)
                .map(ClockId)
                .ok_or_else(|| Error::Parse(format!("unknown clock `{name}`")))
        };
        let initial = doc.initial.iter().map(|l| loc(l)).collect::<Result<Vec<_>>>()?;
        let final_sets = match &doc.final_sets {
            Some(sets) => {
                sets.iter().map(|s| s.iter().map(|l| loc(l)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?
            }
            None => vec![doc.finals.iter().map(|l| loc(l)).collect::<Result<Vec<_>>>()?],
        };
        let mut transitions = Vec::new();
        for t in &doc.transitions {
            let label = if t.label == "eps" {
                Label::Eps
            } else {
                Label::Sym(
                    doc.alphabet
                        .iter()
                        .position(|a| *a == t.label)
                        .ok_or_else(|| Error::Parse(format!("unknown symbol `{}`", t.label)))?,
                )
            };
            transitions.push(Transition {
                from: loc(&t.from)?,
                label,
                guard: ClockConstraint::parse(&t.guard, &doc.clocks)?,
                resets: t.resets.iter().map(|c| clock(c)).collect::<Result<Vec<_>>>()?,
                to: loc(&t.to)?,
            });
        }
        let a = TimedAutomaton {
            alphabet: doc.alphabet,
            clocks: doc.clocks,
            locations: doc.locations,
            initial,
            final_sets,
            mode: doc.mode,
            transitions,
        };
        a.validate()?;
        Ok(a)
    }

    pub fn to_value(&self) -> serde_json::Value {
        let names = |v: &[usize]| v.iter().map(|&l| self.locations[l].clone()).collect::<Vec<_>>();
        let doc = AutomatonDoc {
            alphabet: self.alphabet.clone(),
            clocks: self.clocks.clone(),
            locations: self.locations.clone(),
            initial: names(&self.initial),
            finals: names(&self.final_sets[0]),
            final_sets: (self.final_sets.len() > 1).then(|| self.final_sets.iter().map(|s| names(s)).collect()),
            mode: self.mode,
            transitions: self
                .transitions
                .iter()
                .map(|t| TransitionDoc {
                    from: self.locations[t.from].clone(),
                    label: self.label_name(t.label).to_string(),
                    guard: t.guard.display(&self.clocks),
                    resets: t.resets.iter().map(|c| self.clocks[c.0].clone()).collect(),
                    to: self.locations[t.to].clone(),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("serializable")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn json_round_trip_is_byte_stable() {
        let a = fixtures::example_l();
        let s1 = a.to_json();
        let b = TimedAutomaton::from_json(&s1).unwrap();
        assert_eq!(a, b);
        assert_eq!(s1, b.to_json());
    }

    #[test]
    fn rejects_unknown_names() {
        let bad = r#"{"alphabet":["a"],"clocks":["x"],"locations":["p"],"initial":["q"],
            "final":[],"mode":"finite","transitions":[]}"#;
        assert!(TimedAutomaton::from_json(bad).is_err());
        let bad = r#"{"alphabet":["a"],"clocks":["x"],"locations":["p"],"initial":["p"],
            "final":[],"mode":"finite","transitions":[{"from":"p","label":"b","guard":"true","resets":[],"to":"p"}]}"#;
        assert!(TimedAutomaton::from_json(bad).is_err());
    }
}
