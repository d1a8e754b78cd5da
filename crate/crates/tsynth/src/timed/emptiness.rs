use num_traits::Zero;

use super::{region_automaton, Mode, RegionAutomaton, TimedAutomaton, TimedWord};
use crate::error::{Error, Result};
use crate::graph;
use crate::rational::Rational;
use crate::regions::{ClockValuation, Region, RegionSpace};

/// Evidence of non-emptiness. For Büchi acceptance the word is the stem
/// followed by one pass through the cycle, which starts at `cycle_start`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub word: TimedWord,
    pub cycle_start: Option<usize>,
}

/// Decides emptiness on the region automaton (constant: the largest guard
/// constant). Returns a witness when the language is non-empty.
pub fn nta_emptiness(a: &TimedAutomaton) -> Result<Option<Witness>> {
    let ra = region_automaton(a, a.max_constant())?;
    let u = &ra.automaton;
    let n = u.num_states();
    let succ = u.successors();
    match a.mode {
        Mode::Finite => {
            let path = graph::bfs_path(&succ, &u.initial, |_| true, |q| u.in_all(q));
            match path {
                None => Ok(None),
                Some(p) => Ok(Some(Witness { word: instantiate_path(a, &ra, &p)?, cycle_start: None })),
            }
        }
        Mode::Buchi => {
            let reach = graph::reachable(n, &succ, &u.initial);
            let (comps, comp) = graph::sccs(n, &succ);
            for (ci, c) in comps.iter().enumerate() {
                if !reach[c[0] as usize] {
                    continue;
                }
                let ci = ci as u32;
                let inside = |q: u32| comp[q as usize] == ci;
                let sym_edge = c.iter().find_map(|&v| {
                    u.edges[v as usize].iter().find(|&&(l, t)| l.is_some() && inside(t)).map(|&(_, t)| (v, t))
                });
                let Some((sv, st)) = sym_edge else { continue };
                if !u.final_sets.iter().all(|f| c.iter().any(|&v| f[v as usize])) {
                    continue;
                }
                let stem = graph::bfs_path(&succ, &u.initial, |_| true, |q| q == sv).unwrap();
                // cycle: sv -> st, then visit each final set, then back to sv
                let mut cycle = vec![sv, st];
                for f in &u.final_sets {
                    let cur = *cycle.last().unwrap();
                    if f[cur as usize] {
                        continue;
                    }
                    let p = graph::bfs_path(&succ, &[cur], inside, |q| f[q as usize]).unwrap();
                    cycle.extend_from_slice(&p[1..]);
                }
                let cur = *cycle.last().unwrap();
                if cur != sv {
                    let p = graph::bfs_path(&succ, &[cur], inside, |q| q == sv).unwrap();
                    cycle.extend_from_slice(&p[1..]);
                }
                let stem_word = instantiate_path(a, &ra, &stem)?;
                let mut full = stem.clone();
                full.extend_from_slice(&cycle[1..]);
                let word = instantiate_path(a, &ra, &full)?;
                return Ok(Some(Witness { word, cycle_start: Some(stem_word.len()) }));
            }
            Ok(None)
        }
    }
}

/// Interval of delays `d` with `v + d` in region `target`, as
/// (lower, lower strict, upper, upper strict).
fn delay_window(space: &RegionSpace, v: &ClockValuation, target: &Region) -> (Rational, bool, Option<Rational>, bool) {
    let mut lo = Rational::zero();
    let mut lo_strict = false;
    let mut hi: Option<Rational> = None;
    let mut hi_strict = false;
    let m = space.m() as i64;
    let raise = |b: Rational, strict: bool, lo: &mut Rational, lo_strict: &mut bool| {
        if b > *lo || (b == *lo && strict) {
            *lo = b;
            *lo_strict = strict;
        }
    };
    for x in 0..space.k() {
        let u = space.unary(target, x);
        let c = (u / 2) as i64;
        let val = v.0[x];
        let (l, ls, h, hs) = if !space.is_bounded(target, x) {
            (Rational::from_integer(m) - val, true, None, false)
        } else if u % 2 == 0 {
            let d = Rational::from_integer(c) - val;
            (d, false, Some(d), false)
        } else {
            (Rational::from_integer(c) - val, true, Some(Rational::from_integer(c + 1) - val), true)
        };
        raise(l, ls, &mut lo, &mut lo_strict);
        if let Some(h) = h {
            match hi {
                Some(cur) if h > cur || (h == cur && !hs) => {}
                _ => {
                    hi = Some(h);
                    hi_strict = hs;
                }
            }
        }
    }
    (lo, lo_strict, hi, hi_strict)
}

/// Turns a path of region-automaton states into a concrete timed word.
pub fn instantiate_path(a: &TimedAutomaton, ra: &RegionAutomaton, path: &[u32]) -> Result<TimedWord> {
    let space = &ra.space;
    let out = a.outgoing();
    let mut v = ClockValuation::zero(a.k());
    let mut now = Rational::zero();
    let mut word = Vec::new();
    for w in path.windows(2) {
        let (l, r) = &ra.states[w[0] as usize];
        let (l2, r2) = &ra.states[w[1] as usize];
        debug_assert_eq!(&space.region_of(&v), r);
        let chain = space.successor_chain(r);
        let found = out[*l].iter().find_map(|&ti| {
            let t = &a.transitions[ti];
            if t.to != *l2 {
                return None;
            }
            chain
                .iter()
                .find(|s| space.satisfies(s, &t.guard) && &space.reset(s, &t.resets) == r2)
                .map(|s| (t, s.clone()))
        });
        let (t, s) = found.ok_or_else(|| Error::Check("path is not a region-automaton path".into()))?;
        let (lo, lo_strict, hi, _) = delay_window(space, &v, &s);
        let d = match hi {
            Some(h) if h == lo && !lo_strict => lo,
            Some(h) => (lo + h) / Rational::from_integer(2),
            None => lo + Rational::from_integer(1),
        };
        v = v.delay(d);
        debug_assert_eq!(space.region_of(&v), s);
        now += d;
        debug_assert!(t.guard.eval(&v));
        if let Some(x) = t.label.sym() {
            word.push((x, now));
        }
        v = v.reset(&t.resets);
    }
    Ok(TimedWord(word))
}
