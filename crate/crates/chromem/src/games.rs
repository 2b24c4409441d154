//! Exact game solving on finite arenas and memory-sufficiency validation.
//!
//! Plays are infinite; player 1 owns circles, player 2 squares. For the
//! reachability objective player 1 wins from the attractor of the positions
//! whose automaton component is final; safety is solved as the complement
//! game. A memory structure is sufficient on an arena when one next-move
//! table over (vertex, memory state) wins from every vertex that is winning
//! at all; insufficiency witnesses from the chain and progress checks
//! translate into small counterexample arenas on which the memory provably
//! fails while full memory wins.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::automaton::{ColorTransitions, Dfa, ObjectiveKind, Word};
use crate::memory::{MemoryStructure, PcWitness, SmWitness};
use crate::preorder::PrefixPreorder;
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Player {
    P1,
    P2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArenaEdge {
    pub src: usize,
    /// Index into the arena's alphabet.
    pub color: usize,
    pub dst: usize,
}

/// A finite two-player arena with colored edges. Every vertex has at least
/// one outgoing edge, so plays never stall.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arena {
    vertex_names: Vec<String>,
    owners: Vec<Player>,
    alphabet: Vec<String>,
    edges: Vec<ArenaEdge>,
    out: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct VertexDoc {
    id: String,
    owner: u8,
}

#[derive(Serialize, Deserialize)]
struct ArenaDoc {
    vertices: Vec<VertexDoc>,
    edges: Vec<(String, String, String)>,
}

impl Arena {
    pub fn new(
        vertex_names: Vec<String>,
        owners: Vec<Player>,
        alphabet: Vec<String>,
        edges: Vec<ArenaEdge>,
    ) -> Result<Arena, Error> {
        assert_eq!(vertex_names.len(), owners.len());
        let n = vertex_names.len();
        let mut out = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            assert!(e.src < n && e.dst < n && e.color < alphabet.len());
            out[e.src].push(i);
        }
        if let Some(v) = (0..n).find(|&v| out[v].is_empty()) {
            return Err(Error::DanglingVertex(vertex_names[v].clone()));
        }
        Ok(Arena {
            vertex_names,
            owners,
            alphabet,
            edges,
            out,
        })
    }

    pub fn from_json(text: &str) -> Result<Arena, Error> {
        let doc: ArenaDoc =
            serde_json::from_str(text).map_err(|e| Error::MalformedDocument(e.to_string()))?;
        let mut names = Vec::new();
        let mut owners = Vec::new();
        for v in &doc.vertices {
            names.push(v.id.clone());
            owners.push(match v.owner {
                1 => Player::P1,
                2 => Player::P2,
                o => {
                    return Err(Error::MalformedDocument(format!(
                        "owner must be 1 or 2, got {o}"
                    )))
                }
            });
        }
        let index: std::collections::HashMap<&str, usize> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        if index.len() != names.len() {
            return Err(Error::DuplicateIdentifier("arena vertex".into()));
        }
        let mut alphabet: Vec<String> = Vec::new();
        let mut edges = Vec::new();
        for (src, color, dst) in &doc.edges {
            let s = *index.get(src.as_str()).ok_or(Error::UnknownSymbol {
                kind: "vertex",
                name: src.clone(),
            })?;
            let t = *index.get(dst.as_str()).ok_or(Error::UnknownSymbol {
                kind: "vertex",
                name: dst.clone(),
            })?;
            let c = match alphabet.iter().position(|x| x == color) {
                Some(c) => c,
                None => {
                    alphabet.push(color.clone());
                    alphabet.len() - 1
                }
            };
            edges.push(ArenaEdge {
                src: s,
                color: c,
                dst: t,
            });
        }
        Arena::new(names, owners, alphabet, edges)
    }

    pub fn to_json(&self) -> String {
        let doc = ArenaDoc {
            vertices: self
                .vertex_names
                .iter()
                .zip(&self.owners)
                .map(|(id, &o)| VertexDoc {
                    id: id.clone(),
                    owner: if o == Player::P1 { 1 } else { 2 },
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| {
                    (
                        self.vertex_names[e.src].clone(),
                        self.alphabet[e.color].clone(),
                        self.vertex_names[e.dst].clone(),
                    )
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("arena serializes")
    }

    pub fn n_vertices(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn owner(&self, v: usize) -> Player {
        self.owners[v]
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertex_names[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|n| n == name)
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn edges(&self) -> &[ArenaEdge] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    /// Re-index edge colors against `alphabet`; arena colors must be a
    /// subset of it.
    fn aligned_to(&self, alphabet: &[String]) -> Result<Arena, Error> {
        if self.alphabet.len() == alphabet.len() && self.alphabet == alphabet {
            return Ok(self.clone());
        }
        let map: Vec<usize> = self
            .alphabet
            .iter()
            .map(|c| {
                alphabet
                    .iter()
                    .position(|x| x == c)
                    .ok_or_else(|| Error::ColorNotInAlphabet(c.clone()))
            })
            .collect::<Result<_, _>>()?;
        let edges = self
            .edges
            .iter()
            .map(|e| ArenaEdge {
                src: e.src,
                color: map[e.color],
                dst: e.dst,
            })
            .collect();
        Arena::new(
            self.vertex_names.clone(),
            self.owners.clone(),
            alphabet.to_vec(),
            edges,
        )
    }
}

/// A strategy table: one chosen outgoing edge per (player-1 vertex, memory
/// state).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NextMoveTable {
    n_mem: usize,
    /// `moves[v * n_mem + m]`, `Some` exactly for player-1 vertices.
    moves: Vec<Option<usize>>,
}

impl NextMoveTable {
    pub fn n_mem(&self) -> usize {
        self.n_mem
    }

    pub fn edge_for(&self, v: usize, m: usize) -> Option<usize> {
        self.moves[v * self.n_mem + m]
    }
}

/// Outcome of solving an arena against an automaton objective.
#[derive(Debug, Clone)]
pub struct GameSolution {
    n_states: usize,
    /// `winning[v * n_states + q]`: player 1 wins the objective with the
    /// automaton started at `q` from vertex `v`.
    winning: Vec<bool>,
    /// Uniform optimal strategy over memory = automaton states.
    pub strategy: NextMoveTable,
}

impl GameSolution {
    pub fn is_winning(&self, v: usize, q: usize) -> bool {
        self.winning[v * self.n_states + q]
    }

    pub fn winning_positions(&self) -> Vec<(usize, usize)> {
        (0..self.winning.len())
            .filter(|&i| self.winning[i])
            .map(|i| (i / self.n_states, i % self.n_states))
            .collect()
    }
}

/// Attractor for `player` towards `target` over the arena × automaton
/// product, with the attracting edge recorded for `player`'s positions.
fn attractor(
    arena: &Arena,
    d: &Dfa,
    player: Player,
    target: &[bool],
) -> (Vec<bool>, Vec<Option<usize>>) {
    let nq = d.n_states();
    let n_pos = arena.n_vertices() * nq;
    let pos = |v: usize, q: usize| v * nq + q;
    // Reverse product edges.
    let mut rev: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n_pos];
    for (ei, e) in arena.edges().iter().enumerate() {
        for q in 0..nq {
            rev[pos(e.dst, d.step(q, e.color))].push((pos(e.src, q), ei));
        }
    }
    let mut counts: Vec<usize> = (0..n_pos)
        .map(|p| arena.out_edges(p / nq).len())
        .collect();
    let mut in_attr = target.to_vec();
    let mut choice = vec![None; n_pos];
    let mut queue: VecDeque<usize> = (0..n_pos).filter(|&p| in_attr[p]).collect();
    while let Some(p) = queue.pop_front() {
        for &(u, ei) in &rev[p] {
            if in_attr[u] {
                continue;
            }
            if arena.owner(u / nq) == player {
                in_attr[u] = true;
                choice[u] = Some(ei);
                queue.push_back(u);
            } else {
                counts[u] -= 1;
                if counts[u] == 0 {
                    in_attr[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    (in_attr, choice)
}

/// Solve the game exactly: player 1's winning positions over (vertex,
/// automaton state) and a single uniform optimal strategy using the
/// automaton itself (finals unmarked) as memory.
pub fn solve_game(
    arena: &Arena,
    d: &Dfa,
    kind: ObjectiveKind,
) -> Result<GameSolution, Error> {
    if !d.is_normalized() {
        return Err(Error::NotNormalized("solve_game needs a normalized automaton".into()));
    }
    let arena = arena.aligned_to(d.alphabet())?;
    let nq = d.n_states();
    let n_pos = arena.n_vertices() * nq;
    let pos = |v: usize, q: usize| v * nq + q;
    let mut target = vec![false; n_pos];
    if let Some(fin) = d.final_state() {
        for v in 0..arena.n_vertices() {
            target[pos(v, fin)] = true;
        }
    }
    let (winning, mut choice) = match kind {
        ObjectiveKind::Reach => attractor(&arena, d, Player::P1, &target),
        ObjectiveKind::Safe => {
            let (attr2, _) = attractor(&arena, d, Player::P2, &target);
            let winning: Vec<bool> = attr2.iter().map(|&b| !b).collect();
            // Stay outside the opponent's attractor.
            let mut choice = vec![None; n_pos];
            for v in 0..arena.n_vertices() {
                if arena.owner(v) != Player::P1 {
                    continue;
                }
                for q in 0..nq {
                    if winning[pos(v, q)] {
                        choice[pos(v, q)] = arena
                            .out_edges(v)
                            .iter()
                            .copied()
                            .find(|&ei| {
                                let e = &arena.edges()[ei];
                                winning[pos(e.dst, d.step(q, e.color))]
                            });
                    }
                }
            }
            (winning, choice)
        }
    };
    // Total table: positions without an attracting/avoiding edge (already
    // final, or losing) take the first outgoing edge.
    for v in 0..arena.n_vertices() {
        if arena.owner(v) != Player::P1 {
            continue;
        }
        for q in 0..nq {
            if choice[pos(v, q)].is_none() {
                choice[pos(v, q)] = Some(arena.out_edges(v)[0]);
            }
        }
    }
    let moves = (0..n_pos)
        .map(|p| {
            if arena.owner(p / nq) == Player::P1 {
                choice[p]
            } else {
                None
            }
        })
        .collect();
    Ok(GameSolution {
        n_states: nq,
        winning,
        strategy: NextMoveTable { n_mem: nq, moves },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SufficiencyCheck {
    Sufficient(NextMoveTable),
    NoOptimalStrategyBasedOnM,
}

impl SufficiencyCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, SufficiencyCheck::Sufficient(_))
    }
}

/// Solve the arena × memory × automaton product with player 1 bound to the
/// partial `assignment` where present and free elsewhere, and report whether
/// every required start is (still, optimistically) winning.
fn partial_assignment_wins(
    arena: &Arena,
    d: &Dfa,
    mem: &MemoryStructure,
    kind: ObjectiveKind,
    pair_index: &[Option<usize>],
    assignment: &[Option<usize>],
    required: &[usize],
) -> bool {
    let (nq, nm) = (d.n_states(), mem.n_states());
    let n_pos = arena.n_vertices() * nm * nq;
    let pos = |v: usize, m: usize, q: usize| (v * nm + m) * nq + q;
    let fin = d.final_state();
    let available = |v: usize, m: usize| -> &[usize] {
        if let Some(pi) = pair_index[v] {
            if let Some(e) = assignment[pi * nm + m] {
                return std::slice::from_ref(&arena.out_edges(v)[e]);
            }
        }
        arena.out_edges(v)
    };
    // Attractor towards final-automaton positions for the attacking player.
    let attacker = match kind {
        ObjectiveKind::Reach => Player::P1,
        ObjectiveKind::Safe => Player::P2,
    };
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n_pos];
    let mut counts = vec![0usize; n_pos];
    for v in 0..arena.n_vertices() {
        for m in 0..nm {
            for q in 0..nq {
                let p = pos(v, m, q);
                let avail = available(v, m);
                counts[p] = avail.len();
                for &ei in avail {
                    let e = &arena.edges()[ei];
                    rev[pos(e.dst, mem.step(m, e.color), d.step(q, e.color))].push(p);
                }
            }
        }
    }
    let mut in_attr = vec![false; n_pos];
    let mut queue = VecDeque::new();
    if let Some(fin) = fin {
        for v in 0..arena.n_vertices() {
            for m in 0..nm {
                in_attr[pos(v, m, fin)] = true;
                queue.push_back(pos(v, m, fin));
            }
        }
    }
    while let Some(p) = queue.pop_front() {
        for i in 0..rev[p].len() {
            let u = rev[p][i];
            if in_attr[u] {
                continue;
            }
            let is_attacker = arena.owner(u / (nm * nq)) == attacker;
            if is_attacker {
                in_attr[u] = true;
                queue.push_back(u);
            } else {
                counts[u] -= 1;
                if counts[u] == 0 {
                    in_attr[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    let start_ok = |v: usize| {
        let p = pos(v, mem.initial(), d.initial());
        match kind {
            ObjectiveKind::Reach => in_attr[p],
            ObjectiveKind::Safe => !in_attr[p],
        }
    };
    required.iter().all(|&v| start_ok(v))
}

/// Decide whether some next-move table over (player-1 vertex, memory state)
/// wins from every vertex whose initial position is winning with full
/// memory. Searches tables depth-first, pruning prefixes that already lose
/// some required start even with all later choices left open.
pub fn check_memory_sufficient_on_arena(
    arena: &Arena,
    d: &Dfa,
    mem: &MemoryStructure,
    kind: ObjectiveKind,
) -> Result<SufficiencyCheck, Error> {
    let arena = arena.aligned_to(d.alphabet())?;
    let mem = mem.aligned_to(d.alphabet())?;
    let sol = solve_game(&arena, d, kind)?;
    let required: Vec<usize> = (0..arena.n_vertices())
        .filter(|&v| sol.is_winning(v, d.initial()))
        .collect();
    let nm = mem.n_states();
    // Vertices of player 1, each with an index into the assignment grid.
    let mut pair_index = vec![None; arena.n_vertices()];
    let mut p1_vertices = Vec::new();
    for v in 0..arena.n_vertices() {
        if arena.owner(v) == Player::P1 {
            pair_index[v] = Some(p1_vertices.len());
            p1_vertices.push(v);
        }
    }
    if required.is_empty() {
        // Optimality is vacuous; any total table will do.
        let moves = (0..arena.n_vertices() * nm)
            .map(|i| {
                let v = i / nm;
                (arena.owner(v) == Player::P1).then(|| arena.out_edges(v)[0])
            })
            .collect();
        return Ok(SufficiencyCheck::Sufficient(NextMoveTable { n_mem: nm, moves }));
    }
    // Guard on the per-memory-row branching product; the depth-first search
    // prunes aggressively but the worst case is exponential.
    let mut product = 1f64;
    for &v in &p1_vertices {
        product *= arena.out_edges(v).len() as f64;
        if product > 1e6 {
            return Err(Error::SearchSpaceTooLarge(format!(
                "strategy branching product exceeds 10^6 on {} player-1 vertices",
                p1_vertices.len()
            )));
        }
    }

    // assignment[pi * nm + m] = chosen index into out_edges(v).
    let mut assignment: Vec<Option<usize>> = vec![None; p1_vertices.len() * nm];
    fn search(
        arena: &Arena,
        d: &Dfa,
        mem: &MemoryStructure,
        kind: ObjectiveKind,
        pair_index: &[Option<usize>],
        p1_vertices: &[usize],
        required: &[usize],
        assignment: &mut Vec<Option<usize>>,
        slot: usize,
    ) -> bool {
        if !partial_assignment_wins(arena, d, mem, kind, pair_index, assignment, required) {
            return false;
        }
        if slot == assignment.len() {
            return true;
        }
        let v = p1_vertices[slot / mem.n_states()];
        for e in 0..arena.out_edges(v).len() {
            assignment[slot] = Some(e);
            if search(
                arena, d, mem, kind, pair_index, p1_vertices, required, assignment,
                slot + 1,
            ) {
                return true;
            }
        }
        assignment[slot] = None;
        false
    }
    let found = search(
        &arena,
        d,
        &mem,
        kind,
        &pair_index,
        &p1_vertices,
        &required,
        &mut assignment,
        0,
    );
    if !found {
        return Ok(SufficiencyCheck::NoOptimalStrategyBasedOnM);
    }
    let moves = (0..arena.n_vertices() * nm)
        .map(|i| {
            let (v, m) = (i / nm, i % nm);
            pair_index[v].map(|pi| arena.out_edges(v)[assignment[pi * nm + m].unwrap()])
        })
        .collect();
    Ok(SufficiencyCheck::Sufficient(NextMoveTable { n_mem: nm, moves }))
}

/// Verify a fixed next-move table: with player 1 bound by the table, every
/// required start must win the objective.
pub fn verify_next_move_table(
    arena: &Arena,
    d: &Dfa,
    mem: &MemoryStructure,
    kind: ObjectiveKind,
    table: &NextMoveTable,
) -> Result<bool, Error> {
    let arena = arena.aligned_to(d.alphabet())?;
    let mem = mem.aligned_to(d.alphabet())?;
    let sol = solve_game(&arena, d, kind)?;
    let required: Vec<usize> = (0..arena.n_vertices())
        .filter(|&v| sol.is_winning(v, d.initial()))
        .collect();
    let nm = mem.n_states();
    let mut pair_index = vec![None; arena.n_vertices()];
    let mut p1_vertices = Vec::new();
    for v in 0..arena.n_vertices() {
        if arena.owner(v) == Player::P1 {
            pair_index[v] = Some(p1_vertices.len());
            p1_vertices.push(v);
        }
    }
    let mut assignment = vec![None; p1_vertices.len() * nm];
    for (pi, &v) in p1_vertices.iter().enumerate() {
        for m in 0..nm {
            let ei = table
                .edge_for(v, m)
                .ok_or_else(|| Error::InvalidWitness("table misses a player-1 vertex".into()))?;
            let slot = arena
                .out_edges(v)
                .iter()
                .position(|&e| e == ei)
                .ok_or_else(|| Error::InvalidWitness("table edge leaves another vertex".into()))?;
            assignment[pi * nm + m] = Some(slot);
        }
    }
    Ok(partial_assignment_wins(
        &arena,
        d,
        &mem,
        kind,
        &pair_index,
        &assignment,
        &required,
    ))
}

struct ArenaBuilder {
    names: Vec<String>,
    owners: Vec<Player>,
    edges: Vec<ArenaEdge>,
    fresh: usize,
}

impl ArenaBuilder {
    fn new() -> ArenaBuilder {
        ArenaBuilder {
            names: Vec::new(),
            owners: Vec::new(),
            edges: Vec::new(),
            fresh: 0,
        }
    }

    fn vertex(&mut self, name: &str, owner: Player) -> usize {
        self.names.push(name.to_string());
        self.owners.push(owner);
        self.names.len() - 1
    }

    fn fresh_vertex(&mut self) -> usize {
        self.fresh += 1;
        self.vertex(&format!("n{}", self.fresh), Player::P1)
    }

    /// Spell a nonempty word from `from` to `to` through fresh
    /// player-1-owned intermediates.
    fn chain(&mut self, from: usize, word: &Word, to: usize) {
        debug_assert!(!word.is_empty());
        let mut cur = from;
        for (i, &c) in word.iter().enumerate() {
            let next = if i + 1 == word.len() {
                to
            } else {
                self.fresh_vertex()
            };
            self.edges.push(ArenaEdge {
                src: cur,
                color: c,
                dst: next,
            });
            cur = next;
        }
    }

    fn build(self, alphabet: &[String]) -> Result<Arena, Error> {
        Arena::new(self.names, self.owners, alphabet.to_vec(), self.edges)
    }
}

/// Arena on which any strategy based on the witnessed memory must fail: the
/// two access words funnel into a shared choice vertex whose branches only
/// win after one of the two incomparable states.
///
/// When both access words are nonempty a player-2 vertex picks between
/// them; an empty access word makes the choice vertex itself an entry
/// point instead.
pub fn gen_incomparability_arena(
    w: &SmWitness,
    p: &PrefixPreorder,
    d: &Dfa,
) -> Result<Arena, Error> {
    if w.q1 == w.q2 || p.comparable(w.q1, w.q2) {
        return Err(Error::InvalidWitness(
            "states are comparable; no incomparability arena exists".into(),
        ));
    }
    if d.run(d.initial(), &w.w1) != w.q1 || d.run(d.initial(), &w.w2) != w.q2 {
        return Err(Error::InvalidWitness("access words do not replay".into()));
    }
    let sep1 = p
        .separation(w.q1, w.q2)
        .ok_or_else(|| Error::InvalidWitness("missing separation witness".into()))?;
    let sep2 = p
        .separation(w.q2, w.q1)
        .ok_or_else(|| Error::InvalidWitness("missing separation witness".into()))?;
    let mut b = ArenaBuilder::new();
    let v = b.vertex("v", Player::P1);
    if !w.w1.is_empty() && !w.w2.is_empty() {
        let s = b.vertex("branch", Player::P2);
        b.chain(s, &w.w1, v);
        b.chain(s, &w.w2, v);
    } else {
        for word in [&w.w1, &w.w2] {
            if !word.is_empty() {
                let s = b.vertex("start", Player::P1);
                b.chain(s, word, v);
            }
        }
    }
    for (tag, sep) in [("1", sep1), ("2", sep2)] {
        let t = b.vertex(&format!("loop{tag}"), Player::P1);
        b.chain(v, &sep.stem, t);
        b.chain(t, &sep.pump, t);
    }
    b.build(d.alphabet())
}

/// Arena on which the witnessed memory fails for the reachability objective:
/// after the access word, the memory cannot distinguish "before the progress
/// cycle" from "after it", yet only the run that takes the cycle exactly
/// once before exiting wins.
pub fn gen_progress_arena(w: &PcWitness, p: &PrefixPreorder, d: &Dfa) -> Result<Arena, Error> {
    let p = p.reach_oriented();
    let fin = d
        .final_state()
        .ok_or_else(|| Error::InvalidWitness("no final state; no progress exists".into()))?;
    let valid = d.run(d.initial(), &w.w1) == w.q1
        && d.run(w.q1, &w.w2) == w.q2
        && d.run(w.q2, &w.w2) == w.q2
        && w.q1 != w.q2
        && w.q2 != fin
        && p.strictly_less(w.q1, w.q2);
    if !valid {
        return Err(Error::InvalidWitness("progress witness does not replay".into()));
    }
    let sep = p
        .separation(w.q2, w.q1)
        .ok_or_else(|| Error::InvalidWitness("missing separation witness".into()))?;
    let mut b = ArenaBuilder::new();
    let v = b.vertex("v", Player::P1);
    if !w.w1.is_empty() {
        let s = b.vertex("start", Player::P1);
        b.chain(s, &w.w1, v);
    }
    b.chain(v, &w.w2, v);
    let t = b.vertex("loop", Player::P1);
    b.chain(v, &sep.stem, t);
    b.chain(t, &sep.pump, t);
    b.build(d.alphabet())
}

/// Deterministic pseudo-random arena: ownership by fair coin, `branching`
/// outgoing edges per vertex with uniform targets and colors. The same seed
/// always yields the same arena.
pub fn random_arena(
    n_vertices: usize,
    branching: usize,
    alphabet: &[String],
    seed: u64,
) -> Arena {
    assert!(n_vertices >= 1 && branching >= 1 && !alphabet.is_empty());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = (0..n_vertices).map(|i| format!("v{i}")).collect();
    let owners = (0..n_vertices)
        .map(|_| {
            if rng.random_bool(0.5) {
                Player::P1
            } else {
                Player::P2
            }
        })
        .collect();
    let mut edges = Vec::new();
    for v in 0..n_vertices {
        for _ in 0..branching {
            edges.push(ArenaEdge {
                src: v,
                color: rng.random_range(0..alphabet.len()),
                dst: rng.random_range(0..n_vertices),
            });
        }
    }
    Arena::new(names, owners, alphabet.to_vec(), edges).expect("every vertex has edges")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::memory::{check_progress_consistency, check_strong_monotony, PcCheck, SmCheck};
    use crate::preorder::compute_preorder;

    fn ab() -> (Dfa, Arena) {
        (
            Dfa::from_json(include_str!("../fixtures/ab.json")).unwrap(),
            Arena::from_json(include_str!("../fixtures/ab_arena.json")).unwrap(),
        )
    }

    #[test]
    fn solves_ab_arena_for_reach() {
        let (d, a) = ab();
        let sol = solve_game(&a, &d, ObjectiveKind::Reach).unwrap();
        let v = a.vertex_index("v").unwrap();
        assert!(sol.is_winning(v, d.initial()));
        // The automaton-as-memory strategy plays a at q_init and b at q_a.
        let qa = d.state_index("q_a").unwrap();
        let ea = sol.strategy.edge_for(v, d.initial()).unwrap();
        let eb = sol.strategy.edge_for(v, qa).unwrap();
        assert_eq!(d.alphabet()[a.edges()[ea].color], "a");
        assert_eq!(d.alphabet()[a.edges()[eb].color], "b");
    }

    #[test]
    fn empty_language_reach_is_hopeless_and_safe_is_free() {
        let d = Dfa::from_json(
            r#"{"states":["s"],"alphabet":["a","b"],"initial":"s","finals":[],
                "transitions":[["s","a","s"],["s","b","s"]]}"#,
        )
        .unwrap();
        let a = random_arena(4, 2, d.alphabet(), 7);
        let reach = solve_game(&a, &d, ObjectiveKind::Reach).unwrap();
        assert!(reach.winning_positions().is_empty());
        let safe = solve_game(&a, &d, ObjectiveKind::Safe).unwrap();
        assert_eq!(safe.winning_positions().len(), 4);
    }

    #[test]
    fn trivial_memory_insufficient_on_ab_arena() {
        let (d, a) = ab();
        let triv = MemoryStructure::trivial(&d.alphabet().to_vec());
        let r = check_memory_sufficient_on_arena(&a, &d, &triv, ObjectiveKind::Reach).unwrap();
        assert_eq!(r, SufficiencyCheck::NoOptimalStrategyBasedOnM);
    }

    #[test]
    fn two_state_memory_sufficient_on_ab_arena() {
        let (d, a) = ab();
        let mem =
            MemoryStructure::from_json(include_str!("../fixtures/ab_mem2.json")).unwrap();
        let r = check_memory_sufficient_on_arena(&a, &d, &mem, ObjectiveKind::Reach).unwrap();
        let SufficiencyCheck::Sufficient(table) = r else {
            panic!("the two-state memory suffices");
        };
        assert!(verify_next_move_table(&a, &d, &mem, ObjectiveKind::Reach, &table).unwrap());
    }

    #[test]
    fn vacuous_sufficiency_when_nothing_is_winning() {
        let d = Dfa::from_json(
            r#"{"states":["s"],"alphabet":["a","b"],"initial":"s","finals":[],
                "transitions":[["s","a","s"],["s","b","s"]]}"#,
        )
        .unwrap();
        let a = random_arena(3, 2, d.alphabet(), 3);
        let triv = MemoryStructure::trivial(&d.alphabet().to_vec());
        assert!(check_memory_sufficient_on_arena(&a, &d, &triv, ObjectiveKind::Reach)
            .unwrap()
            .is_ok());
    }

    #[test]
    fn progress_arena_refutes_trivial_memory_on_ab() {
        let d = Dfa::from_json(include_str!("../fixtures/ab.json")).unwrap();
        let p = compute_preorder(&d).unwrap();
        let triv = MemoryStructure::trivial(&d.alphabet().to_vec());
        let PcCheck::Violation(w) = check_progress_consistency(&d, &triv, &p).unwrap() else {
            panic!();
        };
        let arena = gen_progress_arena(&w, &p, &d).unwrap();
        let r = check_memory_sufficient_on_arena(&arena, &d, &triv, ObjectiveKind::Reach).unwrap();
        assert_eq!(r, SufficiencyCheck::NoOptimalStrategyBasedOnM);
        // Full memory wins from the entry (the choice vertex itself when the
        // access word is empty).
        let sol = solve_game(&arena, &d, ObjectiveKind::Reach).unwrap();
        let entry = arena
            .vertex_index("start")
            .unwrap_or_else(|| arena.vertex_index("v").unwrap());
        assert!(sol.is_winning(entry, d.initial()));
    }

    #[test]
    fn incomparability_arena_refutes_two_state_memories_on_abcd() {
        let d = Dfa::from_json(include_str!("../fixtures/abcd.json")).unwrap();
        let p = compute_preorder(&d).unwrap();
        let triv = MemoryStructure::trivial(&d.alphabet().to_vec());
        let SmCheck::Violation(w) = check_strong_monotony(&d, &triv, &p).unwrap() else {
            panic!();
        };
        let arena = gen_incomparability_arena(&w, &p, &d).unwrap();
        for kind in [ObjectiveKind::Safe, ObjectiveKind::Reach] {
            let r = check_memory_sufficient_on_arena(&arena, &d, &triv, kind).unwrap();
            assert_eq!(r, SufficiencyCheck::NoOptimalStrategyBasedOnM, "{kind}");
        }
        // Player 1 with full memory wins from both entries of the branch.
        let sol = solve_game(&arena, &d, ObjectiveKind::Reach).unwrap();
        let branch = arena.vertex_index("branch").unwrap();
        assert!(sol.is_winning(branch, d.initial()));
    }

    #[test]
    fn degenerate_incomparability_request_rejected() {
        let d = Dfa::from_json(include_str!("../fixtures/abcd.json")).unwrap();
        let p = compute_preorder(&d).unwrap();
        let w = SmWitness {
            memory_state: 0,
            q1: d.state_index("q_init").unwrap(),
            q2: d.state_index("q_a").unwrap(),
            w1: vec![],
            w2: vec![0],
        };
        assert!(matches!(
            gen_incomparability_arena(&w, &p, &d),
            Err(Error::InvalidWitness(_))
        ));
    }

    #[test]
    fn invalid_progress_witness_rejected() {
        let d = Dfa::from_json(include_str!("../fixtures/ab.json")).unwrap();
        let p = compute_preorder(&d).unwrap();
        let w = PcWitness {
            memory_state: 0,
            q1: 0,
            q2: 1,
            w1: vec![],
            w2: vec![1], // b does not map q_init to q_a
        };
        assert!(matches!(
            gen_progress_arena(&w, &p, &d),
            Err(Error::InvalidWitness(_))
        ));
    }

    #[test]
    fn random_arena_is_deterministic_and_total() {
        let alphabet: Vec<String> = vec!["a".into(), "b".into()];
        let a1 = random_arena(1, 2, &alphabet, 0);
        assert_eq!(a1.n_vertices(), 1);
        assert_eq!(a1.edges().len(), 2);
        assert!(a1.edges().iter().all(|e| e.src == 0 && e.dst == 0));
        for seed in 0..100 {
            let n = 1 + (seed as usize % 5);
            let a = random_arena(n, 1 + (seed as usize % 3), &alphabet, seed);
            let b = random_arena(n, 1 + (seed as usize % 3), &alphabet, seed);
            assert_eq!(a, b);
            assert!((0..a.n_vertices()).all(|v| !a.out_edges(v).is_empty()));
        }
    }

    #[test]
    fn dangling_vertex_rejected() {
        let err = Arena::from_json(
            r#"{"vertices":[{"id":"u","owner":1},{"id":"w","owner":2}],
                "edges":[["u","a","w"]]}"#,
        )
        .unwrap_err();
        assert_eq!(err, Error::DanglingVertex("w".into()));
    }

    #[test]
    fn foreign_color_rejected() {
        let d = Dfa::from_json(include_str!("../fixtures/ab.json")).unwrap();
        let a = Arena::from_json(
            r#"{"vertices":[{"id":"u","owner":1}],"edges":[["u","z","u"]]}"#,
        )
        .unwrap();
        assert!(matches!(
            solve_game(&a, &d, ObjectiveKind::Reach),
            Err(Error::ColorNotInAlphabet(_))
        ));
    }
}
