//! Graphviz DOT export for visual inspection.

use super::dfa::Dfa;
use super::dfao::Dfao;
use super::Alphabet;

fn tuple_label(alphabet: &Alphabet, sym: u16) -> String {
    let digits = alphabet.decode(sym);
    if digits.len() == 1 {
        digits[0].to_string()
    } else {
        let parts: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
        format!("[{}]", parts.join(","))
    }
}

pub fn dfa_to_dot(dfa: &Dfa, name: &str) -> String {
    let mut out = format!("digraph {name} {{\n  rankdir=LR;\n  node [shape=circle];\n");
    out.push_str("  init [shape=point];\n  init -> 0;\n");
    for s in 0..dfa.n_states() as u32 {
        if dfa.is_accepting(s) {
            out.push_str(&format!("  {s} [shape=doublecircle];\n"));
        }
    }
    for s in 0..dfa.n_states() as u32 {
        // Group parallel edges into one label.
        let mut per_target: Vec<(u32, Vec<String>)> = Vec::new();
        for sym in dfa.alphabet().symbols() {
            if let Some(t) = dfa.step(s, sym) {
                let label = tuple_label(dfa.alphabet(), sym);
                match per_target.iter_mut().find(|(tt, _)| *tt == t) {
                    Some((_, labels)) => labels.push(label),
                    None => per_target.push((t, vec![label])),
                }
            }
        }
        for (t, labels) in per_target {
            out.push_str(&format!("  {s} -> {t} [label=\"{}\"];\n", labels.join(",")));
        }
    }
    out.push_str("}\n");
    out
}

pub fn dfao_to_dot(dfao: &Dfao, name: &str) -> String {
    let mut out = format!("digraph {name} {{\n  rankdir=LR;\n  node [shape=circle];\n");
    out.push_str("  init [shape=point];\n  init -> 0;\n");
    for s in 0..dfao.n_states() as u32 {
        out.push_str(&format!("  {s} [label=\"{s}/{}\"];\n", dfao.output(s)));
    }
    for s in 0..dfao.n_states() as u32 {
        let mut per_target: Vec<(u32, Vec<String>)> = Vec::new();
        for sym in dfao.alphabet().symbols() {
            if let Some(t) = dfao.step(s, sym) {
                let label = tuple_label(dfao.alphabet(), sym);
                match per_target.iter_mut().find(|(tt, _)| *tt == t) {
                    Some((_, labels)) => labels.push(label),
                    None => per_target.push((t, vec![label])),
                }
            }
        }
        for (t, labels) in per_target {
            out.push_str(&format!("  {s} -> {t} [label=\"{}\"];\n", labels.join(",")));
        }
    }
    out.push_str("}\n");
    out
}
