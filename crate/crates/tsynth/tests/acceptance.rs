//! Acceptance suite: one line per criterion, non-zero exit if any fails.
mod common;

use std::collections::{BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use tsynth::fixtures;
use tsynth::game::{solve_parity, Player};
use tsynth::omega::{degeneralize, determinize, remove_epsilon, DEFAULT_CAP};
use tsynth::rational::{frac, Rational};
use tsynth::regions::{ClockId, ClockValuation, Region, RegionSpace};
use tsynth::separability::{decide_k_separability, decide_km_separability, verify_separator};
use tsynth::synthesis::{
    build_wdoubleprime, build_wi_monitors, build_wii_monitors, build_wprime, constant_bound, simulate_controller,
    solve_k, solve_km, strict_monotonic_transform, verify_controller, zero_starting_transform, Enriched, GameSpec,
    Options,
};
use tsynth::timed::{accepts_finite, accepts_lasso, region_automaton, suffix_omega, TimedAutomaton};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// Regions by hand: integer part and zero fraction for clocks up to m, and
// the order of fractional parts among such clocks with non-zero fraction.
type Signature = (Vec<Option<(i64, bool)>>, Vec<std::cmp::Ordering>);

fn signature(v: &ClockValuation, m: u32) -> Signature {
    let k = v.0.len();
    let bound = Rational::from_integer(m as i64);
    let cls: Vec<Option<(i64, bool)>> = v
        .0
        .iter()
        .map(|x| if *x > bound { None } else { Some((x.floor().to_integer(), frac(x) == Rational::from_integer(0))) })
        .collect();
    let mut order = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            if let (Some((_, false)), Some((_, false))) = (cls[i], cls[j]) {
                order.push(frac(&v.0[i]).cmp(&frac(&v.0[j])));
            }
        }
    }
    (cls, order)
}

fn grid(k: usize, m: u32) -> Vec<ClockValuation> {
    let d = k as i64 + 1;
    let top = (m as i64 + 1) * d;
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p: Vec<Rational>| (0..=top).map(move |j| [p.clone(), vec![Rational::new(j, d)]].concat()))
            .collect();
    }
    out.into_iter().map(ClockValuation).collect()
}

fn successor_oracle(v: &ClockValuation, m: u32) -> ClockValuation {
    let bound = Rational::from_integer(m as i64);
    let zero = Rational::from_integer(0);
    let bounded: Vec<&Rational> = v.0.iter().filter(|x| **x <= bound).collect();
    if bounded.is_empty() {
        return v.clone();
    }
    let gaps: Vec<Rational> =
        bounded.iter().filter(|x| frac(x) != zero).map(|x| Rational::from_integer(1) - frac(x)).collect();
    let d = gaps.iter().min().copied().unwrap_or(Rational::from_integer(1));
    if bounded.iter().any(|x| frac(x) == zero) {
        v.delay(d / 2)
    } else {
        v.delay(d)
    }
}

fn criterion_1() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0;
    for k in 1..=2usize {
        for m in 1..=2u32 {
            let space = RegionSpace::classic(k, m);
            let listed: BTreeSet<Region> = space.enumerate().into_iter().collect();
            let mut by_sig: HashMap<Signature, Region> = HashMap::new();
            for v in grid(k, m) {
                let r = space.region_of(&v);
                if let Some(old) = by_sig.insert(signature(&v, m), r.clone()) {
                    ensure(old == r, || format!("k={k} m={m}: one sign pattern, two regions at {:?}", v.0))?;
                }
            }
            let found: BTreeSet<Region> = by_sig.values().cloned().collect();
            ensure(found.len() == by_sig.len(), || format!("k={k} m={m}: two sign patterns share a region"))?;
            ensure(found == listed, || {
                format!("k={k} m={m}: enumerate gives {} regions, sign patterns {}", listed.len(), found.len())
            })?;
            for _ in 0..1000 {
                let v = ClockValuation(
                    (0..k)
                        .map(|_| Rational::new(rng.gen_range(0..=16 * (m as i64 + 2)), rng.gen_range(1..=16)))
                        .collect(),
                );
                let r = space.region_of(&v);
                ensure(by_sig.get(&signature(&v, m)) == Some(&r), || format!("region_of disagrees at {:?}", v.0))?;
                ensure(space.contains(&r, &v), || format!("contains fails at {:?}", v.0))?;
                let ys: Vec<ClockId> = (0..k).filter(|_| rng.gen_bool(0.5)).map(ClockId).collect();
                ensure(space.region_of(&v.reset(&ys)) == space.reset(&r, &ys), || {
                    format!("reset disagrees at {:?}", v.0)
                })?;
                let s = space.region_of(&successor_oracle(&v, m));
                ensure(space.successor(&r) == s, || format!("time successor disagrees at {:?}", v.0))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} valuations"))
}

fn criterion_2() -> Check {
    let l = fixtures::example_l();
    let c = fixtures::example_l_complement();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut accepted = 0;
    for _ in 0..500 {
        let w = random_word(&mut rng, l.alphabet.len(), 6, 8);
        let (a, b) = (accepts_finite(&l, &w).unwrap(), accepts_finite(&c, &w).unwrap());
        ensure(a != b, || format!("both or neither accept {}", w.display(&l.alphabet)))?;
        accepted += a as usize;
    }
    Ok(format!("500 words, {accepted} in L"))
}

fn criterion_3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..300 {
        let g = random_arena(&mut rng, 6, 3);
        let sol = solve_parity(&g);
        let mine = brute_force_region(&g, Player::I);
        let theirs = brute_force_region(&g, Player::II);
        for v in 0..g.owner.len() {
            ensure(mine[v] != theirs[v], || format!("arena {i}: brute force not determined at {v}"))?;
            let expect = if mine[v] { Player::I } else { Player::II };
            ensure(sol.winner[v] == expect, || {
                format!("arena {i}: vertex {v} won by {expect}, solver says {}", sol.winner[v])
            })?;
        }
    }
    Ok("300 arenas".into())
}

fn determinization_agrees(name: &str, a: &TimedAutomaton, rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let ra = region_automaton(a, a.max_constant().max(1)).map_err(|e| e.to_string())?.automaton;
    let nba = degeneralize(&remove_epsilon(&ra)).map_err(|e| e.to_string())?;
    let det = determinize(&nba, DEFAULT_CAP).map_err(|e| format!("{name}: {e}"))?;
    let mut hits = 0;
    for _ in 0..50 {
        let w = random_lasso(rng, a.alphabet.len(), 6, 6);
        let want = ra.accepts_lasso(&w);
        ensure(det.accepts_lasso(&w) == want, || format!("{name}: lasso {:?} differs", w))?;
        hits += want as usize;
    }
    Ok(hits)
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let g = fixtures::deadline_game();
    let e = Enriched::new(g.player_i.clone(), g.player_ii.clone(), 1);
    let mut subjects = vec![
        ("lifted L".to_string(), suffix_omega(&fixtures::example_l()).unwrap()),
        ("lifted complement".to_string(), suffix_omega(&fixtures::example_l_complement()).unwrap()),
    ];
    for (i, w) in build_wi_monitors(&e).into_iter().enumerate() {
        subjects.push((format!("player I monitor {i}"), w));
    }
    for (i, w) in build_wii_monitors(&e, 2).into_iter().enumerate() {
        subjects.push((format!("player II monitor {i}"), w));
    }
    let mut hits = 0;
    for (name, a) in &subjects {
        hits += determinization_agrees(name, a, &mut rng)?;
    }
    Ok(format!("{} automata x 50 lassos, {hits} accepted", subjects.len()))
}

fn criterion_5() -> Check {
    let g = fixtures::deadline_game();
    let opts = Options::default();
    let won = solve_km(&g, 1, 1, &opts).map_err(|e| e.to_string())?;
    let s = won.ok_or("no controller at k=1, m=1")?;
    ensure(verify_controller(&g, &s.controller).map_err(|e| e.to_string())?.is_none(), || "controller loses".into())?;
    let c = &s.controller;
    for times in [["0", "1/2", "3/2"], ["1", "1", "5/2"], ["0", "0", "0"]] {
        let moves: Vec<(usize, Rational)> =
            times.iter().map(|t| (0, tsynth::rational::parse_rational(t).unwrap())).collect();
        let run = simulate_controller(c, &moves).map_err(|e| e.to_string())?;
        for st in &run {
            let late = st.time >= Rational::from_integer(1);
            let ok = g.player_ii[st.output] == "b_ok";
            ensure(late == ok, || format!("answer {} at time {}", g.player_ii[st.output], st.time))?;
        }
    }
    ensure(solve_km(&g, 0, 1, &opts).map_err(|e| e.to_string())?.is_none(), || "k=0 should lose".into())?;
    Ok(format!("k=1 m=1 wins with {} memory states, k=0 loses", c.memory.len()))
}

fn criterion_6() -> Check {
    let (a, b) = fixtures::points();
    let opts = Options::default();
    let s =
        decide_km_separability(&a, &b, 1, 2, &opts).map_err(|e| e.to_string())?.ok_or("not separable at k=1 m=2")?;
    ensure(verify_separator(&s.automaton, &a, &b).map_err(|e| e.to_string())?.passed(), || "separator fails".into())?;
    let none = decide_km_separability(&a, &b, 0, 1, &opts).map_err(|e| e.to_string())?;
    ensure(none.is_none(), || "separable without clocks".into())?;
    Ok(format!("k=1 m=2 separator with {} locations, k=0 not separable", s.automaton.locations.len()))
}

fn criterion_7() -> Check {
    let g = fixtures::deadline_game();
    let (w2, _) = build_wdoubleprime(&g, 1).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let corpus = member_lassos(&w2, &mut rng, 50);
    ensure(corpus.len() == 50, || format!("only {} lassos found in the smaller condition", corpus.len()))?;
    for m in [2, 3] {
        let (w1, _) = build_wprime(&g, 1, m).map_err(|e| e.to_string())?;
        for l in &corpus {
            ensure(accepts_lasso(&w1, l).unwrap(), || format!("m={m}: lasso {:?} escapes", l))?;
        }
    }
    Ok("50 member lassos contained for m=2,3".into())
}

fn enriched(g: &GameSpec, k: usize) -> Enriched {
    let g2 = strict_monotonic_transform(&zero_starting_transform(g).unwrap()).unwrap();
    Enriched::new(g2.player_i.clone(), g2.player_ii.clone(), k)
}

fn criterion_8() -> Check {
    let (a, b) = fixtures::points();
    let suite = vec![
        ("deadline", fixtures::deadline_game()),
        ("one-sided deadline", fixtures::deadline_one_sided()),
        ("points separation", tsynth::separability::w0_game(&a, &b).unwrap()),
    ];
    let opts = Options::default();
    let mut seen = Vec::new();
    for (name, g) in suite {
        let Some(s) = solve_k(&g, 1, &opts).map_err(|e| format!("{name}: {e}"))? else { continue };
        let e = enriched(&g, 1);
        let want = (e.a_size() * s.untimed_memory + 1) as u32;
        ensure(s.m == want && constant_bound(&e, s.untimed_memory) == want, || {
            format!("{name}: m = {} but |A'| = {} and memory {}", s.m, e.a_size(), s.untimed_memory)
        })?;
        let again = solve_km(&g, 1, s.m, &opts).map_err(|e| format!("{name} at m={}: {e}", s.m))?;
        ensure(again.is_some(), || format!("{name}: no controller at m={}", s.m))?;
        seen.push(format!("{name} m={}", s.m));
    }
    ensure(!seen.is_empty(), || "no game solved".into())?;
    Ok(seen.join(", "))
}

fn criterion_9() -> Check {
    let a = fixtures::example_l();
    let b = fixtures::example_l_complement();
    let opts = Options { cap: 2_000_000, verify: true };
    match decide_k_separability(&a, &b, 1, &opts) {
        Ok(None) => Ok("not-separable".into()),
        Ok(Some(s)) => Err(format!("reported separable with m={}", s.m)),
        Err(e) if e.is_resource() => Ok(format!("resource exit: {e}")),
        Err(e) => Err(e.to_string()),
    }
}

fn main() {
    let criteria: Vec<(u32, &str, Duration, fn() -> Check)> = vec![
        (1, "region oracle", Duration::from_secs(10), criterion_1),
        (2, "complementarity", Duration::from_secs(30), criterion_2),
        (3, "parity solver oracle", Duration::from_secs(60), criterion_3),
        (4, "determinization lassos", Duration::from_secs(300), criterion_4),
        (5, "synthesis sanity", Duration::from_secs(300), criterion_5),
        (6, "separability end-to-end", Duration::from_secs(300), criterion_6),
        (7, "condition containment", Duration::from_secs(120), criterion_7),
        (8, "k-mode constant", Duration::from_secs(600), criterion_8),
        (9, "best-effort non-separability", Duration::MAX, criterion_9),
    ];
    let only: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (n, name, limit, run) in criteria {
        if only.is_some_and(|o| o != n) {
            continue;
        }
        let start = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let out = match out {
            Ok(_) if took > limit => Err(format!("took {took:.1?}, limit {limit:.0?}")),
            o => o,
        };
        match out {
            Ok(detail) => println!("criterion {n} ({name}): PASS [{took:.1?}] {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n} ({name}): FAIL [{took:.1?}] {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
