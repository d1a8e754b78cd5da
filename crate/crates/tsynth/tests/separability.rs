use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tsynth::fixtures;
use tsynth::rational::Rational;
use tsynth::regions::ClockConstraint;
use tsynth::separability::{
    controller_to_separator, decide_k_separability, decide_km_separability, separator_to_controller, verify_separator,
    w0_game, ACC, REJ,
};
use tsynth::synthesis::Options;
use tsynth::timed::{
    accepts_finite, accepts_lasso, is_deterministic, Label, Mode, TimedAutomaton, TimedLasso, TimedWord,
};

#[test]
fn points_need_a_clock() {
    let (a, b) = fixtures::points();
    let opts = Options::default();
    assert!(decide_km_separability(&a, &b, 0, 1, &opts).unwrap().is_none());
    let s = decide_km_separability(&a, &b, 1, 2, &opts).unwrap().expect("separable");
    assert!(is_deterministic(&s.automaton));
    assert!(verify_separator(&s.automaton, &a, &b).unwrap().passed());
    let one = TimedWord::parse("(a,1)", &a.alphabet).unwrap();
    let two = TimedWord::parse("(a,2)", &a.alphabet).unwrap();
    assert!(accepts_finite(&s.automaton, &one).unwrap());
    assert!(!accepts_finite(&s.automaton, &two).unwrap());
}

#[test]
fn points_with_derived_constant() {
    let (a, b) = fixtures::points();
    let opts = Options::default();
    let s = decide_k_separability(&a, &b, 1, &opts).unwrap().expect("separable");
    assert!(s.m >= 1);
    assert!(s.report.passed());
    let again = decide_km_separability(&a, &b, 1, s.m, &opts).unwrap();
    assert!(again.is_some());
}

fn universal() -> TimedAutomaton {
    let mut a = TimedAutomaton::new(vec!["a".into()], vec![], Mode::Finite);
    let q = a.add_location("q");
    a.initial = vec![q];
    a.final_sets = vec![vec![q]];
    a.add_transition(q, Label::Sym(0), ClockConstraint::True, vec![], q);
    a
}

fn empty() -> TimedAutomaton {
    let mut a = universal();
    a.final_sets = vec![vec![]];
    a
}

#[test]
fn w0_plays() {
    let g = w0_game(&universal(), &empty()).unwrap();
    let letter = |b: &str| g.condition.symbol(&format!("a|{b}")).unwrap();
    let one = Rational::from_integer(1);
    let play = |stem: Vec<(usize, Rational)>, b: &str| {
        TimedLasso::new(TimedWord(stem), TimedWord(vec![(letter(b), one)]), one).unwrap()
    };
    // always accepting never contradicts a universal A and an empty B
    assert!(!accepts_lasso(&g.condition, &play(vec![], ACC)).unwrap());
    // one rejected prefix of A is enough for Player I
    assert!(accepts_lasso(&g.condition, &play(vec![(letter(REJ), Rational::new(1, 2))], ACC)).unwrap());
    assert!(accepts_lasso(&g.condition, &play(vec![], REJ)).unwrap());
}

#[test]
fn trivial_separators() {
    let opts = Options::default();
    let s = decide_km_separability(&universal(), &empty(), 0, 1, &opts).unwrap().expect("universal separator");
    assert!(accepts_finite(&s.automaton, &TimedWord(vec![])).unwrap());
    assert!(accepts_finite(&s.automaton, &TimedWord(vec![(0, Rational::new(7, 3))])).unwrap());
    let overlap = decide_km_separability(&universal(), &universal(), 1, 1, &opts).unwrap();
    assert!(overlap.is_none());
}

#[test]
fn more_resources_do_not_hurt() {
    let (a, b) = fixtures::points();
    let opts = Options::default();
    for (k, m) in [(1, 2), (1, 3), (2, 2)] {
        let s = decide_km_separability(&a, &b, k, m, &opts).unwrap();
        assert!(s.is_some_and(|s| s.report.passed()), "k={k} m={m}");
    }
}

#[test]
fn separator_controller_round_trip() {
    let (a, b) = fixtures::points();
    let s = decide_km_separability(&a, &b, 1, 2, &Options::default()).unwrap().unwrap();
    let c = separator_to_controller(&s.automaton, s.m).unwrap();
    let back = controller_to_separator(&c, &a).unwrap();
    assert!(is_deterministic(&back));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.gen_range(0..4);
        let mut ts: Vec<Rational> = (0..n).map(|_| Rational::new(rng.gen_range(0..=16), 4)).collect();
        ts.sort();
        let w = TimedWord(ts.into_iter().map(|t| (0, t)).collect());
        assert_eq!(accepts_finite(&s.automaton, &w).unwrap(), accepts_finite(&back, &w).unwrap(), "{w:?}");
    }
}
