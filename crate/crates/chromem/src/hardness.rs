//! Hamiltonicity-encoding automata.
//!
//! `graph_to_dfa` turns a directed graph `G` with `n` vertices and `m` edges
//! into an automaton `D_G` whose states are a cycle graph with `n` vertices,
//! a copy of `G`, an initial state, and two sinks. Per-state letters order
//! the sinks below and above everything, put each cycle vertex strictly
//! below every graph vertex and each cycle edge strictly below every graph
//! edge, and leave all other pairs incomparable, so the maximum antichain
//! has size `n + m + 1` and a monotone decomposition of that size exists
//! exactly when `G` has a Hamiltonian cycle.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::automaton::Dfa;
use crate::Error;

/// A directed graph with string-named vertices; self-loops allowed,
/// duplicate edges not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    vertex_names: Vec<String>,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

impl DirectedGraph {
    pub fn new(vertex_names: Vec<String>, edges: Vec<(usize, usize)>) -> Result<DirectedGraph, Error> {
        let n = vertex_names.len();
        let mut seen = BTreeSet::new();
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::MalformedDocument("edge endpoint out of range".into()));
            }
            if !seen.insert((u, v)) {
                return Err(Error::DuplicateIdentifier(format!(
                    "edge ({}, {})",
                    vertex_names[u], vertex_names[v]
                )));
            }
        }
        Ok(DirectedGraph {
            vertex_names,
            edges,
        })
    }

    pub fn from_json(text: &str) -> Result<DirectedGraph, Error> {
        let doc: GraphDoc =
            serde_json::from_str(text).map_err(|e| Error::MalformedDocument(e.to_string()))?;
        let index: std::collections::HashMap<&str, usize> = doc
            .vertices
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        if index.len() != doc.vertices.len() {
            return Err(Error::DuplicateIdentifier("graph vertex".into()));
        }
        let mut edges = Vec::new();
        for (u, v) in &doc.edges {
            let ui = *index.get(u.as_str()).ok_or(Error::UnknownSymbol {
                kind: "vertex",
                name: u.clone(),
            })?;
            let vi = *index.get(v.as_str()).ok_or(Error::UnknownSymbol {
                kind: "vertex",
                name: v.clone(),
            })?;
            edges.push((ui, vi));
        }
        DirectedGraph::new(doc.vertices, edges)
    }

    pub fn to_json(&self) -> String {
        let doc = GraphDoc {
            vertices: self.vertex_names.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(u, v)| (self.vertex_names[u].clone(), self.vertex_names[v].clone()))
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("graph serializes")
    }

    pub fn n(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

/// State layout of `graph_to_dfa`, for reading decompositions back.
///
/// States appear in the order: cycle vertices `vC1..vCn`, cycle edges
/// `eC1..eCn`, graph vertices, graph edges (`e_<src>_<dst>`), then
/// `q_init`, `bot`, `top`.
pub struct DgLayout {
    pub n: usize,
    pub m: usize,
}

impl DgLayout {
    pub fn cycle_vertex(&self, i: usize) -> usize {
        i
    }
    pub fn cycle_edge(&self, i: usize) -> usize {
        self.n + i
    }
    pub fn graph_vertex(&self, i: usize) -> usize {
        2 * self.n + i
    }
    pub fn graph_edge(&self, i: usize) -> usize {
        3 * self.n + i
    }
    pub fn q_init(&self) -> usize {
        3 * self.n + self.m
    }
    pub fn bot(&self) -> usize {
        3 * self.n + self.m + 1
    }
    pub fn top(&self) -> usize {
        3 * self.n + self.m + 2
    }
    pub fn n_states(&self) -> usize {
        3 * self.n + self.m + 3
    }
}

/// Build `D_G`. The emitted automaton is already normalized. Graphs with
/// `m < n` are emitted too; they are simply never Hamiltonian.
pub fn graph_to_dfa(g: &DirectedGraph) -> Result<Dfa, Error> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    let (n, m) = (g.n(), g.m());
    let layout = DgLayout { n, m };
    let mut names: Vec<String> = Vec::with_capacity(layout.n_states());
    names.extend((1..=n).map(|i| format!("vC{i}")));
    names.extend((1..=n).map(|i| format!("eC{i}")));
    names.extend(g.vertex_names().iter().cloned());
    names.extend(
        g.edges()
            .iter()
            .map(|&(u, v)| format!("e_{}_{}", g.vertex_names()[u], g.vertex_names()[v])),
    );
    names.push("q_init".into());
    names.push("bot".into());
    names.push("top".into());

    // Letters: in, out, then one letter per middle state.
    let middle: Vec<usize> = (0..2 * n + n + m).collect();
    let mut alphabet: Vec<String> = vec!["in".into(), "out".into()];
    alphabet.extend(middle.iter().map(|&z| format!("a_{}", names[z])));
    let letter_of = |z: usize| 2 + z;

    let n_states = layout.n_states();
    let (q_init, bot, top) = (layout.q_init(), layout.bot(), layout.top());
    let mut delta = vec![vec![usize::MAX; alphabet.len()]; n_states];

    // in/out transitions.
    for i in 0..n {
        let vc = layout.cycle_vertex(i);
        delta[vc][0] = vc;
        delta[vc][1] = vc;
        let ec = layout.cycle_edge(i);
        delta[ec][0] = layout.cycle_vertex(i);
        delta[ec][1] = layout.cycle_vertex((i + 1) % n);
    }
    for i in 0..n {
        let v = layout.graph_vertex(i);
        delta[v][0] = v;
        delta[v][1] = v;
    }
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        let e = layout.graph_edge(i);
        delta[e][0] = layout.graph_vertex(u);
        delta[e][1] = layout.graph_vertex(v);
    }
    for s in [q_init, bot, top] {
        delta[s][0] = s;
        delta[s][1] = s;
    }

    // Per-state letters.
    let is_graph_vertex = |z: usize| (2 * n..2 * n + n).contains(&z);
    let is_graph_edge = |z: usize| (3 * n..3 * n + m).contains(&z);
    let is_cycle_vertex = |z: usize| z < n;
    let is_cycle_edge = |z: usize| (n..2 * n).contains(&z);
    for &zp in &middle {
        let a = letter_of(zp);
        for &z in &middle {
            let to_top = z == zp
                || (is_graph_vertex(z) && is_cycle_vertex(zp))
                || (is_graph_edge(z) && is_cycle_edge(zp));
            delta[z][a] = if to_top { top } else { bot };
        }
        delta[q_init][a] = zp;
        delta[bot][a] = bot;
        delta[top][a] = top;
    }

    Dfa::new(names, alphabet, q_init, BTreeSet::from([top]), delta)
}

/// First Hamiltonian cycle in vertex-index order, by depth-first search over
/// permutations anchored at vertex 0.
pub fn hamiltonian_bruteforce(g: &DirectedGraph) -> Result<Option<Vec<usize>>, Error> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    if g.n() > 10 {
        return Err(Error::GraphTooLarge(format!(
            "{} vertices exceed the brute-force bound of 10",
            g.n()
        )));
    }
    let n = g.n();
    let has_edge = |u: usize, v: usize| g.edges().contains(&(u, v));
    if n == 1 {
        return Ok(has_edge(0, 0).then(|| vec![0]));
    }
    let mut path = vec![0usize];
    let mut used = vec![false; n];
    used[0] = true;
    fn dfs(
        g: &DirectedGraph,
        path: &mut Vec<usize>,
        used: &mut Vec<bool>,
        has_edge: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        if path.len() == g.n() {
            return has_edge(*path.last().unwrap(), path[0]);
        }
        for v in 1..g.n() {
            if !used[v] && has_edge(*path.last().unwrap(), v) {
                used[v] = true;
                path.push(v);
                if dfs(g, path, used, has_edge) {
                    return true;
                }
                path.pop();
                used[v] = false;
            }
        }
        false
    }
    if dfs(g, &mut path, &mut used, &has_edge) {
        Ok(Some(path))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::memory::{check_progress_consistency, MemoryStructure};
    use crate::preorder::compute_preorder;

    fn fig6() -> DirectedGraph {
        DirectedGraph::from_json(include_str!("../fixtures/graph_fig6.json")).unwrap()
    }

    #[test]
    fn reduction_shape_on_fig6() {
        let g = fig6();
        let d = graph_to_dfa(&g).unwrap();
        assert_eq!(d.n_states(), 20);
        assert_eq!(d.n_colors(), 19);
        assert!(d.is_normalized());
        assert_eq!(d.state_name(d.final_state().unwrap()), "top");
    }

    #[test]
    fn reduction_preorder_structure() {
        let g = fig6();
        let d = graph_to_dfa(&g).unwrap();
        let p = compute_preorder(&d).unwrap();
        let layout = DgLayout { n: g.n(), m: g.m() };
        let (bot, top) = (layout.bot(), layout.top());
        for q in 0..d.n_states() {
            if q != bot {
                assert!(p.strictly_less(bot, q));
            }
            if q != top {
                assert!(p.strictly_less(q, top));
            }
        }
        for i in 0..g.n() {
            for j in 0..g.n() {
                assert!(p.strictly_less(layout.cycle_vertex(i), layout.graph_vertex(j)));
            }
            for e in 0..g.m() {
                assert!(p.strictly_less(layout.cycle_edge(i), layout.graph_edge(e)));
            }
        }
        // Everything else incomparable; in particular the big antichain.
        let mut antichain = vec![layout.q_init()];
        antichain.extend((0..g.n()).map(|i| layout.graph_vertex(i)));
        antichain.extend((0..g.m()).map(|e| layout.graph_edge(e)));
        for (ai, &a) in antichain.iter().enumerate() {
            for &b in &antichain[ai + 1..] {
                assert!(!p.comparable(a, b));
            }
        }
        assert_eq!(p.max_antichain().len(), g.n() + g.m() + 1);
    }

    #[test]
    fn reduction_reach_is_trivially_progress_consistent() {
        let g = fig6();
        let d = graph_to_dfa(&g).unwrap();
        let p = compute_preorder(&d).unwrap();
        let triv = MemoryStructure::trivial(&d.alphabet().to_vec());
        assert!(check_progress_consistency(&d, &triv, &p).unwrap().is_ok());
    }

    #[test]
    fn hamiltonian_on_fig6_and_small_cases() {
        assert_eq!(
            hamiltonian_bruteforce(&fig6()).unwrap(),
            Some(vec![0, 1, 2, 3])
        );
        let cycle3 = DirectedGraph::new(
            vec!["v1".into(), "v2".into(), "v3".into()],
            vec![(0, 1), (1, 2), (2, 0)],
        )
        .unwrap();
        assert_eq!(hamiltonian_bruteforce(&cycle3).unwrap(), Some(vec![0, 1, 2]));
        let no_cycle = DirectedGraph::new(
            vec!["v1".into(), "v2".into(), "v3".into()],
            vec![(0, 1), (1, 0)],
        )
        .unwrap();
        assert_eq!(hamiltonian_bruteforce(&no_cycle).unwrap(), None);
    }

    #[test]
    fn oversized_graph_guarded() {
        let g = DirectedGraph::new((0..11).map(|i| format!("v{i}")).collect(), vec![]).unwrap();
        assert!(matches!(
            hamiltonian_bruteforce(&g),
            Err(Error::GraphTooLarge(_))
        ));
    }
}
