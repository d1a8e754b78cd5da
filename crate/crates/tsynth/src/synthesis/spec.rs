use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::timed::{Label, Mode, TimedAutomaton, Transition};

/// Timed synthesis game: Player I plays `player_i` letters with
/// timestamps, Player II answers each with a `player_ii` letter, and
/// Player I wins when the play is accepted by `condition` (Büchi, over
/// letters `a|b`, symbol index `a * |player_ii| + b`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameSpec {
    pub player_i: Vec<String>,
    pub player_ii: Vec<String>,
    pub condition: TimedAutomaton,
    /// Only plays starting at time 0 are considered.
    pub zero_starting: bool,
    /// Only plays with strictly increasing timestamps are considered.
    pub strictly_monotonic: bool,
}

#[derive(Serialize, Deserialize)]
struct GameDoc {
    #[serde(rename = "playerI")]
    player_i: Vec<String>,
    #[serde(rename = "playerII")]
    player_ii: Vec<String>,
    condition: serde_json::Value,
    #[serde(default, rename = "zeroStarting", skip_serializing_if = "std::ops::Not::not")]
    zero_starting: bool,
    #[serde(default, rename = "strictlyMonotonic", skip_serializing_if = "std::ops::Not::not")]
    strictly_monotonic: bool,
}

pub fn letter_name(a: &str, b: &str) -> String {
    format!("{a}|{b}")
}

impl GameSpec {
    /// Builds a game, reordering the condition's alphabet to `a|b` order.
    pub fn new(player_i: Vec<String>, player_ii: Vec<String>, condition: TimedAutomaton) -> Result<Self> {
        if condition.mode != Mode::Buchi {
            return Err(Error::Invalid("the winning condition must use Büchi acceptance".into()));
        }
        let names: Vec<String> =
            player_i.iter().flat_map(|a| player_ii.iter().map(move |b| letter_name(a, b))).collect();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != names.len() {
            return Err(Error::Invalid("ambiguous composite letters; symbols must not contain `|`".into()));
        }
        let mut cond_sorted = condition.alphabet.clone();
        cond_sorted.sort();
        if cond_sorted != sorted {
            return Err(Error::Invalid("condition alphabet must be exactly playerI × playerII as `a|b`".into()));
        }
        let remap: Vec<usize> = condition.alphabet.iter().map(|x| names.iter().position(|n| n == x).unwrap()).collect();
        let condition = TimedAutomaton {
            alphabet: names,
            transitions: condition
                .transitions
                .iter()
                .map(|t| Transition {
                    label: match t.label {
                        Label::Sym(x) => Label::Sym(remap[x]),
                        Label::Eps => Label::Eps,
                    },
                    ..t.clone()
                })
                .collect(),
            ..condition
        };
        Ok(GameSpec { player_i, player_ii, condition, zero_starting: false, strictly_monotonic: false })
    }

    pub fn letter(&self, a: usize, b: usize) -> usize {
        a * self.player_ii.len() + b
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: GameDoc = serde_json::from_str(s)?;
        let cond = TimedAutomaton::from_value(doc.condition)?;
        let mut g = GameSpec::new(doc.player_i, doc.player_ii, cond)?;
        g.zero_starting = doc.zero_starting;
        g.strictly_monotonic = doc.strictly_monotonic;
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        let doc = GameDoc {
            player_i: self.player_i.clone(),
            player_ii: self.player_ii.clone(),
            condition: self.condition.to_value(),
            zero_starting: self.zero_starting,
            strictly_monotonic: self.strictly_monotonic,
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }
}
