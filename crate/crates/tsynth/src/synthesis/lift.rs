use std::collections::{HashMap, VecDeque};

use super::controller::{KMController, Rule};
use super::enriched::Enriched;
use crate::error::{Error, Result};
use crate::game::MealyController;
use crate::regions::{agrees, FractionalRegion, Region, RegionSpace};

/// Memory of the complete controller: memory of the untimed controller,
/// region of the real clocks and fractional region of the tracked request
/// clocks, both taken right after the last move.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CompleteState {
    pub inner: u32,
    pub region: Region,
    pub fregion: FractionalRegion,
}

/// One move of the complete controller: Player I plays `(a_ext, f)` while
/// the real clocks are in region `at`. Returns the new state and the
/// untimed controller's answer `(b_ext, mask)`.
pub fn complete_step(
    inner: &MealyController,
    e: &Enriched,
    space: &RegionSpace,
    s: &CompleteState,
    a_ext: usize,
    f: &FractionalRegion,
    at: &Region,
) -> (CompleteState, usize, u32) {
    let (next, b) = inner.step(s.inner, e.a_letter(a_ext, e.f_index(f)) as u32);
    let (b_ext, mask) = e.split_b(b as usize);
    let y = e.mask_clocks(mask);
    let proper = b_ext < e.nb();
    let region = if proper { space.reset(at, &y) } else { at.clone() };
    let fregion = f.drop_one().reset(&y);
    (CompleteState { inner: next, region, fregion }, b_ext, mask)
}

/// Outcome of feeding one timed Player I letter through the complete
/// controller.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftStep {
    pub next: CompleteState,
    pub output: usize,
    pub resets: u32,
    /// Improper moves inserted before the proper one.
    pub ticks: usize,
}

/// Outcomes of the proper letter `a` for every region reachable from
/// `s.region` by letting time pass, in order. The untimed controller is fed
/// the improper moves an honest Player I makes on the way: one tick at
/// every expiry strictly before the proper letter. `None` marks regions
/// where the letter cannot follow consistently.
pub fn lift_walk(
    inner: &MealyController,
    e: &Enriched,
    space: &RegionSpace,
    s: &CompleteState,
    a: usize,
) -> Vec<(Region, Option<LiftStep>)> {
    let proper = |cur: &CompleteState, f: &FractionalRegion, at: &Region, ticks: usize| {
        let (next, b_ext, mask) = complete_step(inner, e, space, cur, a, f, at);
        (b_ext < e.nb()).then_some(LiftStep { next, output: b_ext, resets: mask, ticks })
    };
    let mut cur = s.clone();
    let mut f = s.fregion.clone();
    let mut at = s.region.clone();
    let mut ticks = 0;
    let mut out = Vec::new();
    let first = if agrees(&f, space, &at) { proper(&cur, &f, &at, 0) } else { None };
    out.push((at.clone(), first));
    loop {
        let succ = space.successor(&at);
        if succ == at {
            return out;
        }
        at = succ;
        if !agrees(&f, space, &at) {
            f = match f.immediate_successor() {
                Ok(g) if agrees(&g, space, &at) => g,
                _ => return out,
            };
        }
        out.push((at.clone(), proper(&cur, &f, &at, ticks)));
        if !f.one().is_empty() {
            // expiry before a later proper letter: Player I reports it with a tick
            let (next, b_ext, _) = complete_step(inner, e, space, &cur, e.na(), &f, &at);
            if b_ext < e.nb() {
                return out;
            }
            ticks += 1;
            cur = next;
            f = cur.fregion.clone();
        }
    }
}

/// Single-target version of [`lift_walk`].
pub fn lift_step(
    inner: &MealyController,
    e: &Enriched,
    space: &RegionSpace,
    s: &CompleteState,
    a: usize,
    target: &Region,
) -> Option<LiftStep> {
    lift_walk(inner, e, space, s, a).into_iter().find(|(r, _)| r == target).and_then(|(_, x)| x)
}

/// `k, m`-controller playing like the complete version of `inner` and
/// skipping improper moves. Memory is built from the initial state on
/// demand; inconsistent region inputs get a fixed self-rule with the first
/// Player II letter.
pub fn lift_controller(inner: &MealyController, e: &Enriched, m: u32) -> Result<KMController> {
    let mut c = KMController::new(e.a_names.clone(), e.b_names.clone(), e.k, m);
    let space = c.space.clone();
    let regions = c.regions.clone();
    let init = CompleteState { inner: inner.initial, region: space.zero(), fregion: FractionalRegion::empty(e.k) };
    let mut ids: HashMap<CompleteState, u32> = HashMap::new();
    let mut states = vec![init.clone()];
    ids.insert(init, 0);
    let mut queue = VecDeque::from([0u32]);
    let mut rules = Vec::new();
    let mut max_ticks = 0;
    while let Some(id) = queue.pop_front() {
        let s = states[id as usize].clone();
        for a in 0..e.na() {
            let walk = lift_walk(inner, e, &space, &s, a);
            if walk.len() > regions.len() {
                return Err(Error::Check(format!("lift recursion deeper than {}", regions.len())));
            }
            let found: HashMap<Region, Option<LiftStep>> = walk.into_iter().collect();
            for r in &regions {
                let rule = match found.get(r).cloned().flatten() {
                    None => Rule { next: id, output: 0, resets: 0 },
                    Some(step) => {
                        max_ticks = max_ticks.max(step.ticks);
                        let next = *ids.entry(step.next.clone()).or_insert_with(|| {
                            states.push(step.next);
                            queue.push_back(states.len() as u32 - 1);
                            states.len() as u32 - 1
                        });
                        Rule { next, output: step.output as u32, resets: step.resets }
                    }
                };
                rules.push(rule);
            }
        }
    }
    log::debug!("lifted controller: {} memory states, up to {max_ticks} improper moves per step", states.len());
    c.memory = states
        .iter()
        .map(|s| {
            format!("q{}:{}:{}", s.inner, space.describe(&s.region, &e.clock_names), s.fregion.describe(&e.clock_names))
        })
        .collect();
    c.initial = 0;
    c.rules = rules;
    Ok(c)
}
