use proptest::prelude::*;

use tsynth::rational::Rational;
use tsynth::regions::{ClockId, ClockValuation, RegionSpace};

fn space() -> impl Strategy<Value = RegionSpace> {
    (1usize..=3, 0u32..=3, any::<bool>()).prop_map(|(k, m, full)| {
        if full {
            RegionSpace::full(k, m)
        } else {
            RegionSpace::classic(k, m)
        }
    })
}

/// Valuations with values `p/q` up to `m + 2`.
fn valuation(s: &RegionSpace) -> impl Strategy<Value = ClockValuation> {
    let top = (s.m() as i64 + 2) * 12;
    prop::collection::vec((0..=top, prop::sample::select(vec![1i64, 2, 3, 4, 6, 12])), s.k())
        .prop_map(|xs| ClockValuation(xs.into_iter().map(|(p, q)| Rational::new(p * q / 12, q)).collect()))
}

fn space_and_valuation() -> impl Strategy<Value = (RegionSpace, ClockValuation)> {
    space().prop_flat_map(|s| {
        let v = valuation(&s);
        (Just(s), v)
    })
}

fn space_and_two() -> impl Strategy<Value = (RegionSpace, ClockValuation, ClockValuation)> {
    space().prop_flat_map(|s| {
        let (v, w) = (valuation(&s), valuation(&s));
        (Just(s), v, w)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn representative_round_trip((s, v) in space_and_valuation()) {
        let r = s.region_of(&v);
        prop_assert!(s.contains(&r, &v));
        let rep = s.representative(&r).expect("regions are nonempty");
        prop_assert_eq!(s.region_of(&rep), r);
    }

    #[test]
    fn characteristic_is_exact((s, v, w) in space_and_two()) {
        let r = s.region_of(&v);
        let ch = s.characteristic(&r);
        prop_assert!(ch.eval(&v));
        prop_assert_eq!(ch.eval(&w), s.region_of(&w) == r);
    }

    #[test]
    fn reset_commutes((s, v) in space_and_valuation(), mask in 0u32..8) {
        let y: Vec<ClockId> = (0..s.k()).filter(|i| mask >> i & 1 == 1).map(ClockId).collect();
        prop_assert_eq!(s.reset(&s.region_of(&v), &y), s.region_of(&v.reset(&y)));
    }

    #[test]
    fn delays_follow_successor_chain((s, v) in space_and_valuation(), steps in prop::collection::vec(1i64..=12, 1..6)) {
        let chain = s.successor_chain(&s.region_of(&v));
        let mut pos = 0;
        let mut cur = v;
        for d in steps {
            cur = cur.delay(Rational::new(d, 24));
            let r = s.region_of(&cur);
            let at = chain.iter().position(|c| *c == r);
            prop_assert!(at.is_some(), "delay left the successor chain");
            let at = at.unwrap();
            prop_assert!(at >= pos);
            pos = at;
        }
    }

    #[test]
    fn successor_is_monotone((s, v) in space_and_valuation()) {
        let r = s.region_of(&v);
        let next = s.successor(&r);
        prop_assert!(next == r || s.precedes(&r, &next));
    }
}
