//! Graphviz export. Node and edge order follow the document order, so the
//! output is stable across runs.
use std::fmt::Write;

use crate::regions::ClockConstraint;
use crate::synthesis::{GameSpec, KMController};
use crate::timed::{Label, TimedAutomaton};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn body(a: &TimedAutomaton, out: &mut String) {
    out.push_str("  rankdir=LR;\n  node [shape=circle];\n");
    for (i, name) in a.locations.iter().enumerate() {
        let sets: Vec<usize> = (0..a.final_sets.len()).filter(|&s| a.final_sets[s].contains(&i)).collect();
        let mut attrs = vec![format!("label={}", quote(name))];
        if !sets.is_empty() {
            attrs.push("shape=doublecircle".into());
        }
        if a.final_sets.len() > 1 && !sets.is_empty() {
            let tags: Vec<String> = sets.iter().map(|s| format!("F{s}")).collect();
            attrs.push(format!("xlabel={}", quote(&tags.join(","))));
        }
        if a.initial.contains(&i) {
            attrs.push("style=bold".into());
        }
        let _ = writeln!(out, "  n{i} [{}];", attrs.join(", "));
    }
    for t in &a.transitions {
        let mut label = match t.label {
            Label::Eps => "ε".to_string(),
            Label::Sym(x) => a.alphabet[x].clone(),
        };
        if t.guard != ClockConstraint::True {
            let _ = write!(label, ", {}", t.guard.display(&a.clocks));
        }
        if !t.resets.is_empty() {
            let names: Vec<&str> = t.resets.iter().map(|c| a.clocks[c.0].as_str()).collect();
            let _ = write!(label, " / {{{}}}", names.join(","));
        }
        let _ = writeln!(out, "  n{} -> n{} [label={}];", t.from, t.to, quote(&label));
    }
}

fn graph(name: &str, a: &TimedAutomaton) -> String {
    let mut out = format!("digraph {} {{\n", quote(name));
    body(a, &mut out);
    out.push_str("}\n");
    out
}

/// Locations as nodes (bold: initial, double circle: final), transitions
/// labelled `symbol, guard / {resets}`.
pub fn automaton_dot(a: &TimedAutomaton) -> String {
    graph("automaton", a)
}

/// The winning condition of a game, letters written `a|b`.
pub fn game_dot(g: &GameSpec) -> String {
    graph("game", &g.condition)
}

/// Memory states as nodes, one edge per group of regions sharing a rule.
pub fn controller_dot(c: &KMController) -> String {
    let mut a = c.to_automaton();
    a.final_sets = vec![vec![]];
    graph("controller", &a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::timed::Mode;

    #[test]
    fn empty_automaton_has_no_nodes() {
        let a = TimedAutomaton::new(vec!["a".into()], vec![], Mode::Finite);
        let d = automaton_dot(&a);
        assert!(!d.contains(" n0 "));
        assert!(!d.contains("->"));
    }

    #[test]
    fn example_l_shape() {
        let d = automaton_dot(&fixtures::example_l());
        assert_eq!(d.lines().filter(|l| l.contains("[label") && !l.contains("->")).count(), 3);
        assert_eq!(d.matches("->").count(), 4);
        assert_eq!(d, automaton_dot(&fixtures::example_l()));
    }

    #[test]
    fn quotes_are_escaped() {
        assert_eq!(quote("a\"b"), "\"a\\\"b\"");
    }
}
