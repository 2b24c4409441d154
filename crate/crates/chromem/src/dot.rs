//! Graphviz export. Automaton and memory states draw as diamonds (a double
//! border marks final states); player-1 arena vertices draw as circles,
//! player-2 vertices as squares. Parallel edges between the same endpoints
//! merge their color labels.

use std::collections::BTreeMap;

use crate::automaton::Dfa;
use crate::games::{Arena, Player};
use crate::memory::MemoryStructure;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn grouped_edges<'a>(
    edges: impl Iterator<Item = (usize, &'a str, usize)>,
) -> BTreeMap<(usize, usize), Vec<&'a str>> {
    let mut grouped: BTreeMap<(usize, usize), Vec<&'a str>> = BTreeMap::new();
    for (s, label, t) in edges {
        grouped.entry((s, t)).or_default().push(label);
    }
    grouped
}

pub fn dfa_to_dot(d: &Dfa) -> String {
    let mut out = String::from("digraph dfa {\n  rankdir=LR;\n  __init [shape=point, style=invis];\n");
    for q in 0..d.n_states() {
        let peripheries = if d.finals().contains(&q) { 2 } else { 1 };
        out.push_str(&format!(
            "  q{q} [shape=diamond, peripheries={peripheries}, label=\"{}\"];\n",
            escape(d.state_name(q))
        ));
    }
    out.push_str(&format!("  __init -> q{};\n", d.initial()));
    let edges = (0..d.n_states()).flat_map(|q| {
        (0..d.n_colors()).map(move |c| (q, d.alphabet()[c].as_str(), {
            use crate::automaton::ColorTransitions;
            d.step(q, c)
        }))
    });
    for ((s, t), labels) in grouped_edges(edges) {
        out.push_str(&format!(
            "  q{s} -> q{t} [label=\"{}\"];\n",
            escape(&labels.join(","))
        ));
    }
    out.push_str("}\n");
    out
}

pub fn memory_to_dot(m: &MemoryStructure) -> String {
    let mut out =
        String::from("digraph memory {\n  rankdir=LR;\n  __init [shape=point, style=invis];\n");
    for s in 0..m.n_states() {
        out.push_str(&format!(
            "  m{s} [shape=diamond, label=\"{}\"];\n",
            escape(m.state_name(s))
        ));
    }
    out.push_str(&format!("  __init -> m{};\n", m.initial()));
    let edges = (0..m.n_states()).flat_map(|s| {
        (0..m.alphabet().len()).map(move |c| (s, m.alphabet()[c].as_str(), {
            use crate::automaton::ColorTransitions;
            m.step(s, c)
        }))
    });
    for ((s, t), labels) in grouped_edges(edges) {
        out.push_str(&format!(
            "  m{s} -> m{t} [label=\"{}\"];\n",
            escape(&labels.join(","))
        ));
    }
    out.push_str("}\n");
    out
}

pub fn arena_to_dot(a: &Arena) -> String {
    let mut out = String::from("digraph arena {\n  rankdir=LR;\n");
    for v in 0..a.n_vertices() {
        let shape = match a.owner(v) {
            Player::P1 => "circle",
            Player::P2 => "square",
        };
        out.push_str(&format!(
            "  v{v} [shape={shape}, label=\"{}\"];\n",
            escape(a.vertex_name(v))
        ));
    }
    let edges = a
        .edges()
        .iter()
        .map(|e| (e.src, a.alphabet()[e.color].as_str(), e.dst));
    for ((s, t), labels) in grouped_edges(edges) {
        out.push_str(&format!(
            "  v{s} -> v{t} [label=\"{}\"];\n",
            escape(&labels.join(","))
        ));
    }
    out.push_str("}\n");
    out
}
