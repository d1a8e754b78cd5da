use std::collections::HashMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::spec::GameSpec;
use super::transforms::restricted_condition;
use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::regions::{ClockConstraint, ClockId, ClockValuation, Region, RegionSpace};
use crate::timed::{nta_emptiness, product, Label, Mode, TimedAutomaton, Witness};

/// One controller decision: next memory, Player II letter, clock resets
/// (bit mask).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub next: u32,
    pub output: u32,
    pub resets: u32,
}

/// Player II strategy with `k` clocks and constant `m`; decisions depend on
/// the memory, Player I's letter and the region of the clocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KMController {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub clocks: Vec<String>,
    pub m: u32,
    pub memory: Vec<String>,
    pub initial: u32,
    pub space: RegionSpace,
    pub regions: Vec<Region>,
    /// Indexed `(memory * |inputs| + input) * |regions| + region`.
    pub rules: Vec<Rule>,
}

#[derive(Serialize, Deserialize)]
struct RuleDoc {
    memory: String,
    input: String,
    guard: String,
    next: String,
    output: String,
    resets: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct ControllerDoc {
    inputs: Vec<String>,
    outputs: Vec<String>,
    clocks: Vec<String>,
    m: u32,
    memory: Vec<String>,
    initial: String,
    rules: Vec<RuleDoc>,
}

/// A step of a conform run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConformStep {
    pub input: usize,
    pub time: Rational,
    pub region: Region,
    pub output: usize,
    pub resets: Vec<ClockId>,
    pub memory: u32,
    pub valuation: ClockValuation,
}

impl KMController {
    pub fn new(inputs: Vec<String>, outputs: Vec<String>, k: usize, m: u32) -> Self {
        let space = RegionSpace::classic(k, m);
        let regions = space.enumerate();
        KMController {
            inputs,
            outputs,
            clocks: (1..=k).map(|i| format!("c{i}")).collect(),
            m,
            memory: Vec::new(),
            initial: 0,
            space,
            regions,
            rules: Vec::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.clocks.len()
    }

    fn slot(&self, mem: u32, input: usize, region: usize) -> usize {
        (mem as usize * self.inputs.len() + input) * self.regions.len() + region
    }

    pub fn region_index(&self, r: &Region) -> usize {
        self.regions.binary_search(r).expect("region of the controller's space")
    }

    pub fn rule(&self, mem: u32, input: usize, region: usize) -> Rule {
        self.rules[self.slot(mem, input, region)]
    }

    pub fn step(&self, mem: u32, input: usize, r: &Region) -> Rule {
        self.rule(mem, input, self.region_index(r))
    }

    pub fn mask_clocks(&self, mask: u32) -> Vec<ClockId> {
        (0..self.k()).filter(|i| mask >> i & 1 == 1).map(ClockId).collect()
    }

    /// Keeps the memory reachable from the initial one and merges memories
    /// with identical futures.
    pub fn minimize(&self) -> KMController {
        let per = self.inputs.len() * self.regions.len();
        let n = self.memory.len();
        let mut order = vec![self.initial];
        let mut seen = vec![false; n];
        seen[self.initial as usize] = true;
        let mut i = 0;
        while i < order.len() {
            let q = order[i] as usize;
            for r in &self.rules[q * per..(q + 1) * per] {
                if !seen[r.next as usize] {
                    seen[r.next as usize] = true;
                    order.push(r.next);
                }
            }
            i += 1;
        }
        let mut class: HashMap<u32, u32> = order.iter().map(|&q| (q, 0)).collect();
        let mut count = 1;
        loop {
            let mut sigs: HashMap<(u32, Vec<(u32, u32, u32)>), u32> = HashMap::new();
            let mut next = HashMap::new();
            for &q in &order {
                let row = &self.rules[q as usize * per..(q as usize + 1) * per];
                let sig = (class[&q], row.iter().map(|r| (class[&r.next], r.output, r.resets)).collect());
                let len = sigs.len() as u32;
                next.insert(q, *sigs.entry(sig).or_insert(len));
            }
            let done = sigs.len() == count;
            count = sigs.len();
            class = next;
            if done {
                break;
            }
        }
        // representative per class, in order of first appearance
        let mut reps: Vec<u32> = Vec::new();
        let mut renum: HashMap<u32, u32> = HashMap::new();
        for &q in &order {
            renum.entry(class[&q]).or_insert_with(|| {
                reps.push(q);
                reps.len() as u32 - 1
            });
        }
        let rules = reps
            .iter()
            .flat_map(|&q| {
                self.rules[q as usize * per..(q as usize + 1) * per]
                    .iter()
                    .map(|r| Rule { next: renum[&class[&r.next]], ..*r })
                    .collect::<Vec<_>>()
            })
            .collect();
        KMController {
            memory: reps.iter().map(|&q| self.memory[q as usize].clone()).collect(),
            initial: 0,
            rules,
            ..self.clone()
        }
    }

    /// The controller as a timed automaton over `inputs|outputs` whose runs
    /// are exactly the plays conform to it.
    pub fn to_automaton(&self) -> TimedAutomaton {
        let nb = self.outputs.len();
        let alphabet = self.inputs.iter().flat_map(|a| self.outputs.iter().map(move |b| format!("{a}|{b}"))).collect();
        let mut t = TimedAutomaton::new(alphabet, self.clocks.clone(), Mode::Buchi);
        t.locations = self.memory.clone();
        t.initial = vec![self.initial as usize];
        t.final_sets = vec![(0..self.memory.len()).collect()];
        let chars: Vec<ClockConstraint> = self.regions.iter().map(|r| self.space.characteristic(r)).collect();
        for mem in 0..self.memory.len() as u32 {
            for a in 0..self.inputs.len() {
                let groups = (0..self.regions.len()).into_group_map_by(|&r| self.rule(mem, a, r));
                for (rule, regs) in groups.into_iter().sorted_by_key(|(_, regs)| regs[0]) {
                    let guard = if regs.len() == self.regions.len() {
                        ClockConstraint::True
                    } else {
                        ClockConstraint::or(regs.iter().map(|&r| chars[r].clone()).collect())
                    };
                    t.add_transition(
                        mem as usize,
                        Label::Sym(a * nb + rule.output as usize),
                        guard,
                        self.mask_clocks(rule.resets),
                        rule.next as usize,
                    );
                }
            }
        }
        t
    }

    pub fn to_json(&self) -> String {
        let chars: Vec<String> =
            self.regions.iter().map(|r| self.space.characteristic(r).display(&self.clocks)).collect();
        let mut rules = Vec::new();
        for mem in 0..self.memory.len() as u32 {
            for a in 0..self.inputs.len() {
                let groups = (0..self.regions.len()).into_group_map_by(|&r| self.rule(mem, a, r));
                let mut groups: Vec<(Rule, Vec<usize>)> = groups.into_iter().sorted_by_key(|(_, g)| g[0]).collect();
                // the largest group goes last with a catch-all guard
                let last = groups.iter().position_max_by_key(|(_, g)| g.len()).unwrap();
                let big = groups.remove(last);
                for (rule, regs) in groups.into_iter().chain([(big.0, vec![])]) {
                    let guard = if regs.is_empty() {
                        "true".to_string()
                    } else {
                        regs.iter().map(|&r| format!("({})", chars[r])).join(" || ")
                    };
                    rules.push(RuleDoc {
                        memory: self.memory[mem as usize].clone(),
                        input: self.inputs[a].clone(),
                        guard,
                        next: self.memory[rule.next as usize].clone(),
                        output: self.outputs[rule.output as usize].clone(),
                        resets: self.mask_clocks(rule.resets).iter().map(|c| self.clocks[c.0].clone()).collect(),
                    });
                }
            }
        }
        let doc = ControllerDoc {
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            clocks: self.clocks.clone(),
            m: self.m,
            memory: self.memory.clone(),
            initial: self.memory[self.initial as usize].clone(),
            rules,
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    /// Reads a controller. For every memory, input and region the first
    /// rule whose guard holds in the region applies; every combination must
    /// be covered.
    pub fn from_json(s: &str) -> Result<Self> {
        let doc: ControllerDoc = serde_json::from_str(s)?;
        let mut c = KMController::new(doc.inputs, doc.outputs, doc.clocks.len(), doc.m);
        c.clocks = doc.clocks;
        c.memory = doc.memory;
        let find = |names: &[String], n: &str, what: &str| {
            names.iter().position(|x| x == n).ok_or_else(|| Error::Parse(format!("unknown {what} `{n}`")))
        };
        c.initial = find(&c.memory, &doc.initial, "memory")? as u32;
        let reps: Vec<ClockValuation> =
            c.regions.iter().map(|r| c.space.representative(r).expect("nonempty region")).collect();
        let mut table: Vec<Option<Rule>> = vec![None; c.memory.len() * c.inputs.len() * c.regions.len()];
        for r in &doc.rules {
            let mem = find(&c.memory, &r.memory, "memory")? as u32;
            let a = find(&c.inputs, &r.input, "input")?;
            let guard = ClockConstraint::parse(&r.guard, &c.clocks)?;
            let rule = Rule {
                next: find(&c.memory, &r.next, "memory")? as u32,
                output: find(&c.outputs, &r.output, "output")? as u32,
                resets: r
                    .resets
                    .iter()
                    .try_fold(0u32, |acc, x| Ok::<_, Error>(acc | 1 << find(&c.clocks, x, "clock")?))?,
            };
            for (ri, v) in reps.iter().enumerate() {
                let slot = c.slot(mem, a, ri);
                if table[slot].is_none() && guard.eval(v) {
                    table[slot] = Some(rule);
                }
            }
        }
        c.rules = table
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Invalid("controller rules are not total".into()))?;
        Ok(c)
    }
}

/// Runs the controller against timed Player I letters and returns the
/// conform run.
pub fn simulate_controller(c: &KMController, moves: &[(usize, Rational)]) -> Result<Vec<ConformStep>> {
    let mut mem = c.initial;
    let mut v = ClockValuation::zero(c.k());
    let mut now = Rational::from_integer(0);
    let mut out = Vec::new();
    for &(a, t) in moves {
        if t < now {
            return Err(Error::Invalid(format!(
                "timestamps must not decrease ({} after {})",
                format_rational(&t),
                format_rational(&now)
            )));
        }
        if a >= c.inputs.len() {
            return Err(Error::Invalid(format!("input index {a} out of range")));
        }
        v = v.delay(t - now);
        now = t;
        let region = c.space.region_of(&v);
        let rule = c.step(mem, a, &region);
        let resets = c.mask_clocks(rule.resets);
        v = v.reset(&resets);
        mem = rule.next;
        out.push(ConformStep {
            input: a,
            time: t,
            region,
            output: rule.output as usize,
            resets,
            memory: mem,
            valuation: v.clone(),
        });
    }
    Ok(out)
}

/// Parses `a@t` items separated by whitespace or commas.
pub fn parse_moves(c: &KMController, s: &str) -> Result<Vec<(usize, Rational)>> {
    s.split(|ch: char| ch.is_whitespace() || ch == ',')
        .filter(|x| !x.is_empty())
        .map(|item| {
            let (a, t) =
                item.split_once('@').ok_or_else(|| Error::Parse(format!("expected letter@time, got `{item}`")))?;
            let a = c.inputs.iter().position(|x| x == a).ok_or_else(|| Error::Parse(format!("unknown input `{a}`")))?;
            Ok((a, parse_rational(t)?))
        })
        .collect()
}

/// A play conform to `c` that Player I wins, if any. `None` means the
/// controller is winning.
pub fn verify_controller(g: &GameSpec, c: &KMController) -> Result<Option<Witness>> {
    if c.inputs != g.player_i || c.outputs != g.player_ii {
        return Err(Error::Invalid("controller alphabets do not match the game".into()));
    }
    let w = restricted_condition(g)?;
    let p = product(&c.to_automaton(), &w)?;
    nta_emptiness(&p)
}
