use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use super::conditions::{build_wdoubleprime, build_wprime};
use super::controller::{verify_controller, KMController, Rule};
use super::enriched::Enriched;
use super::lift::lift_controller;
use super::spec::GameSpec;
use super::transforms::{flagged, restricted_condition, strict_monotonic_transform, zero_starting_transform};
use crate::error::{Error, Result};
use crate::game::{solve_untimed_game, MealyController, UntimedGame};
use crate::omega::DEFAULT_CAP;
use num_traits::Signed;

use crate::rational::{frac, Rational};
use crate::regions::{ClockValuation, Region};
use crate::timed::{region_automaton_capped, TimedAutomaton};

#[derive(Clone, Debug)]
pub struct Options {
    /// State cap for region automata and determinization.
    pub cap: usize,
    /// Check the returned controller against the game exactly.
    pub verify: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { cap: DEFAULT_CAP, verify: true }
    }
}

/// A winning controller and the sizes of the intermediate objects.
#[derive(Clone, Debug)]
pub struct Solved {
    pub controller: KMController,
    pub m: u32,
    pub condition_locations: usize,
    pub condition_clocks: usize,
    pub region_states: usize,
    pub parity_states: usize,
    pub untimed_memory: usize,
}

fn context(stage: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::Resource { what, cap } if what.starts_with(stage) => Error::Resource { what, cap },
        Error::Resource { what, cap } => Error::Resource { what: format!("{stage}: {what}"), cap },
        e => e,
    }
}

struct Untimed {
    controller: Option<MealyController>,
    region_states: usize,
    parity_states: usize,
}

fn solve_untimed(w: &TimedAutomaton, inputs: Vec<String>, outputs: Vec<String>, cap: usize) -> Result<Untimed> {
    let bound = w.max_constant().max(1);
    let ra = region_automaton_capped(w, bound, cap).map_err(context("region automaton"))?;
    let region_states = ra.automaton.num_states();
    log::debug!("region automaton: {region_states} states");
    let game = UntimedGame { inputs, outputs, winning: ra.automaton };
    let out = solve_untimed_game(&game, cap).map_err(context("determinization"))?;
    log::debug!("parity automaton: {} states", out.parity_states);
    Ok(Untimed { controller: out.controller, region_states, parity_states: out.parity_states })
}

fn clockless(g: &GameSpec, mealy: &MealyController, m: u32) -> KMController {
    let mut c = KMController::new(g.player_i.clone(), g.player_ii.clone(), 0, m);
    c.memory = (0..mealy.num_states()).map(|q| format!("q{q}")).collect();
    c.initial = mealy.initial;
    c.rules = (0..mealy.num_states() as u32)
        .flat_map(|q| (0..g.player_i.len() as u32).map(move |a| (q, a)))
        .map(|(q, a)| {
            let (next, output) = mealy.step(q, a);
            Rule { next, output, resets: 0 }
        })
        .collect();
    c
}

fn finish(g: &GameSpec, c: KMController, opts: &Options) -> Result<KMController> {
    let c = c.minimize();
    if opts.verify {
        if let Some(w) = verify_controller(g, &c)? {
            let shown: Vec<String> =
                w.word.0.iter().map(|(x, t)| format!("({},{})", g.condition.alphabet[*x], t)).collect();
            return Err(Error::Check(format!("constructed controller loses on the play {}", shown.join(""))));
        }
    }
    Ok(c)
}

fn solve_clockless(g: &GameSpec, m: u32, opts: &Options) -> Result<Option<Solved>> {
    let w = restricted_condition(g)?;
    let u = solve_untimed(&w, g.player_i.clone(), g.player_ii.clone(), opts.cap)?;
    let Some(mealy) = u.controller else { return Ok(None) };
    let c = finish(g, clockless(g, &mealy, m), opts)?;
    Ok(Some(Solved {
        controller: c,
        m,
        condition_locations: w.locations.len(),
        condition_clocks: w.k(),
        region_states: u.region_states,
        parity_states: u.parity_states,
        untimed_memory: mealy.num_states(),
    }))
}

/// Reinforced game and the controller-free translation back to `g`.
fn transformed(g: &GameSpec) -> Result<(GameSpec, GameSpec)> {
    let g1 = zero_starting_transform(g)?;
    let g2 = strict_monotonic_transform(&g1)?;
    log::debug!("transformed condition: {} locations, {} clocks", g2.condition.locations.len(), g2.condition.k());
    Ok((g1, g2))
}

fn back_to_original(g: &GameSpec, g1: &GameSpec, c2: &KMController, opts: &Options) -> Result<KMController> {
    let c1 = unflag(c2, g1)?;
    let c0 = drop_mark(&c1, g);
    finish(g, c0, opts)
}

/// Player II controller with `k` clocks and constant `m`, if one wins.
pub fn solve_km(g: &GameSpec, k: usize, m: u32, opts: &Options) -> Result<Option<Solved>> {
    if k == 0 {
        return solve_clockless(g, m, opts);
    }
    if m == 0 {
        return Err(Error::Invalid("the constant must be at least 1 when clocks are available".into()));
    }
    let (g1, g2) = transformed(g)?;
    let (w, e) = build_wprime(&g2, k, m)?;
    let u = solve_untimed(&w, e.a_alphabet(), e.b_alphabet(), opts.cap)?;
    let Some(mealy) = u.controller else { return Ok(None) };
    let c2 = lift_controller(&mealy, &e, m)?;
    let c = back_to_original(g, &g1, &c2, opts)?;
    Ok(Some(Solved {
        controller: c,
        m,
        condition_locations: w.locations.len(),
        condition_clocks: w.k(),
        region_states: u.region_states,
        parity_states: u.parity_states,
        untimed_memory: mealy.num_states(),
    }))
}

/// The constant bound for a winning untimed controller with `memory`
/// states over the enriched alphabet.
pub fn constant_bound(e: &Enriched, memory: usize) -> u32 {
    (e.a_size() * memory + 1) as u32
}

/// Player II controller with `k` clocks and some constant, if one wins. The
/// constant is the bound derived from the untimed solution, not a minimal
/// one.
pub fn solve_k(g: &GameSpec, k: usize, opts: &Options) -> Result<Option<Solved>> {
    if k == 0 {
        return solve_clockless(g, 0, opts);
    }
    let (g1, g2) = transformed(g)?;
    let (w, e) = build_wdoubleprime(&g2, k)?;
    let u = solve_untimed(&w, e.a_alphabet(), e.b_alphabet(), opts.cap)?;
    let Some(mealy) = u.controller else { return Ok(None) };
    let m = constant_bound(&e, mealy.num_states());
    let c2 = lift_controller(&mealy, &e, m)?;
    let c = back_to_original(g, &g1, &c2, opts)?;
    Ok(Some(Solved {
        controller: c,
        m,
        condition_locations: w.locations.len(),
        condition_clocks: w.k(),
        region_states: u.region_states,
        parity_states: u.parity_states,
        untimed_memory: mealy.num_states(),
    }))
}

/// Offset of a letter of the transformed game relative to the time of the
/// original play: 0 for flag-1 letters, otherwise `(burst, position)`
/// meaning an infinitesimal delay that shrinks with later bursts and grows
/// within a burst.
type Tag = Option<(u16, u16)>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Unflag {
    inner: u32,
    last: Region,
    tags: Vec<Tag>,
    now: Tag,
    started: bool,
}

/// Sort key increasing with the size of the offset.
fn tag_key(t: &Tag) -> (i64, i64) {
    match t {
        None => (i64::MIN, 0),
        Some((b, p)) => (-(*b as i64), *p as i64),
    }
}

fn normalize(s: &mut Unflag) {
    let bursts: BTreeSet<u16> = s.tags.iter().chain([&s.now]).flatten().map(|t| t.0).collect();
    let map: HashMap<u16, u16> = bursts.iter().enumerate().map(|(i, &b)| (b, i as u16)).collect();
    let fix = |t: &mut Tag| {
        if let Some((b, _)) = t {
            *b = map[b];
        }
    };
    s.tags.iter_mut().for_each(fix);
    fix(&mut s.now);
    let positions: BTreeSet<(u16, u16)> = s.tags.iter().chain([&s.now]).flatten().copied().collect();
    let mut rank: HashMap<(u16, u16), u16> = HashMap::new();
    for b in positions.iter().map(|t| t.0).collect::<BTreeSet<_>>() {
        for (i, t) in positions.iter().filter(|t| t.0 == b).enumerate() {
            rank.insert(*t, i as u16 + 1);
        }
    }
    let fix = |t: &mut Tag| {
        if let Some(x) = t {
            *x = (x.0, rank[x]);
        }
    };
    s.tags.iter_mut().for_each(fix);
    fix(&mut s.now);
}

/// Region of the transformed game's clocks when they run ahead of the
/// original ones by infinitesimal offsets.
fn shifted_region(
    c: &KMController,
    samples: &[(ClockValuation, Rational)],
    actual: usize,
    tags: &[Tag],
    now: &Tag,
) -> Region {
    let (v, gap) = &samples[actual];
    let mut keys: Vec<(i64, i64)> = tags.iter().chain([now]).map(tag_key).collect();
    keys.sort();
    keys.dedup();
    let unit = gap / Rational::from_integer(4 * (keys.len() as i64 + 2));
    let eps = |t: &Tag| match t {
        None => Rational::from_integer(0),
        Some(_) => unit * Rational::from_integer(keys.binary_search(&tag_key(t)).unwrap() as i64 + 1),
    };
    let shifted: Vec<Rational> = v.0.iter().zip(tags).map(|(x, t)| x + eps(now) - eps(t)).collect();
    c.space.region_of(&ClockValuation(shifted))
}

/// A point of the region and the smallest positive distance between the
/// fractional parts, integers and the constant that it exhibits.
fn sample(c: &KMController, actual: &Region) -> (ClockValuation, Rational) {
    let v = c.space.representative(actual).expect("nonempty region");
    let m = Rational::from_integer(c.m as i64);
    let mut gaps = vec![Rational::from_integer(1)];
    let fr: Vec<Rational> = v.0.iter().map(frac).collect();
    for (i, x) in v.0.iter().enumerate() {
        if *x > m {
            gaps.push(x - m);
        } else if !x.is_integer() {
            gaps.push(fr[i]);
            gaps.push(Rational::from_integer(1) - fr[i]);
            for j in 0..i {
                if fr[j] != fr[i] && !v.0[j].is_integer() && v.0[j] <= m {
                    gaps.push((fr[j] - fr[i]).abs());
                }
            }
        }
    }
    let gap = gaps.into_iter().min().unwrap();
    (v, gap)
}

/// Controller for the game before the strict-monotonicity transform. Equal
/// timestamps are detected when a bounded clock was integral at the last
/// move and the region has not changed; such letters go to the inner
/// controller with flag 0.
fn unflag(c2: &KMController, g1: &GameSpec) -> Result<KMController> {
    let k = c2.k();
    let mut c = KMController::new(g1.player_i.clone(), g1.player_ii.clone(), k, c2.m);
    let space = c.space.clone();
    let regions = c.regions.clone();
    let samples: Vec<(ClockValuation, Rational)> = regions.iter().map(|r| sample(c2, r)).collect();
    let init = Unflag { inner: c2.initial, last: space.zero(), tags: vec![None; k], now: None, started: false };
    let mut ids: HashMap<Unflag, u32> = HashMap::from([(init.clone(), 0)]);
    let mut states = vec![init];
    let mut queue = VecDeque::from([0u32]);
    let mut rules = Vec::new();
    while let Some(id) = queue.pop_front() {
        let s = states[id as usize].clone();
        let pinned = (0..k).any(|x| space.is_bounded(&s.last, x) && space.is_integral(&s.last, x));
        let later: HashSet<Region> = space.successor_chain(&s.last).into_iter().collect();
        for a in 0..g1.player_i.len() {
            for (ri, r) in regions.iter().enumerate() {
                if !later.contains(r) {
                    // time cannot lead here from the last move
                    rules.push(Rule { next: id, output: 0, resets: 0 });
                    continue;
                }
                let same_instant = s.started && pinned && *r == s.last;
                let now = if same_instant {
                    Some(match s.now {
                        Some((b, p)) => (b, p + 1),
                        None => (s.tags.iter().chain([&s.now]).flatten().map(|t| t.0 + 1).max().unwrap_or(0), 1),
                    })
                } else {
                    None
                };
                let virt = shifted_region(c2, &samples, ri, &s.tags, &now);
                let rule = c2.step(s.inner, flagged(a, !same_instant), &virt);
                let y = c2.mask_clocks(rule.resets);
                let mut tags = s.tags.clone();
                for x in &y {
                    tags[x.0] = now;
                }
                let mut next = Unflag { inner: rule.next, last: space.reset(r, &y), tags, now, started: true };
                normalize(&mut next);
                let nid = *ids.entry(next.clone()).or_insert_with(|| {
                    states.push(next);
                    queue.push_back(states.len() as u32 - 1);
                    states.len() as u32 - 1
                });
                rules.push(Rule { next: nid, ..rule });
            }
        }
    }
    c.memory = (0..states.len()).map(|i| format!("s{i}")).collect();
    c.rules = rules;
    Ok(c.minimize())
}

/// Controller for the game before the zero-start transform: the start
/// letter is consumed at time 0 by the initial memory.
fn drop_mark(c1: &KMController, g: &GameSpec) -> KMController {
    let mark = c1.inputs.len() - 1;
    let start = c1.step(c1.initial, mark, &c1.space.zero()).next;
    let na = g.player_i.len();
    let nr = c1.regions.len();
    let rules = (0..c1.memory.len() as u32)
        .flat_map(|q| (0..na).flat_map(move |a| (0..nr).map(move |r| (q, a, r))))
        .map(|(q, a, r)| c1.rule(q, a, r))
        .collect();
    KMController { inputs: g.player_i.clone(), outputs: g.player_ii.clone(), initial: start, rules, ..c1.clone() }
}
