//! Minimal-memory synthesis.
//!
//! Safety minimization searches for a smallest monotone decomposition with a
//! direct SAT encoding; reachability minimization runs a
//! counterexample-guided loop over memory transition functions, blocking the
//! transition pattern of each progress-consistency counterexample. Both
//! re-verify every decoded certificate with the checks from the [`memory`]
//! module rather than trusting the solver. An exhaustive enumerator over
//! canonical transition tables serves as the independent oracle.

mod dimacs;
mod sat;

use std::collections::{BTreeSet, HashSet};

use crate::automaton::{ColorTransitions, Dfa, ObjectiveKind};
use crate::memory::{
    check_progress_consistency, check_strong_monotony, coreachable_sets, memory_from_decomposition,
    MemoryStructure, PcWitness,
};
use crate::preorder::PrefixPreorder;
use crate::Error;

pub use dimacs::parse_dimacs_solution;
pub use sat::{SolveResult, Solver};

/// A family of chain subsets of automaton states covering all states and
/// closed under letter images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneDecomposition {
    pub sets: Vec<BTreeSet<usize>>,
}

impl MonotoneDecomposition {
    /// One singleton set per state; always a monotone decomposition.
    pub fn singletons(d: &Dfa) -> MonotoneDecomposition {
        MonotoneDecomposition {
            sets: (0..d.n_states()).map(|q| BTreeSet::from([q])).collect(),
        }
    }

    /// Check the three defining conditions: cover, closure under letter
    /// images, and each set being a chain.
    pub fn validate(&self, d: &Dfa, p: &PrefixPreorder) -> Result<(), Error> {
        let covered: BTreeSet<usize> = self.sets.iter().flatten().copied().collect();
        if let Some(q) = (0..d.n_states()).find(|q| !covered.contains(q)) {
            return Err(Error::InvalidDecomposition(format!(
                "state `{}` not covered",
                d.state_name(q)
            )));
        }
        for (i, set) in self.sets.iter().enumerate() {
            for c in 0..d.n_colors() {
                let image: BTreeSet<usize> = set.iter().map(|&q| d.step(q, c)).collect();
                if !self.sets.iter().any(|s| image.is_subset(s)) {
                    return Err(Error::InvalidDecomposition(format!(
                        "image of set {} under `{}` fits in no set",
                        i + 1,
                        &d.alphabet()[c]
                    )));
                }
            }
            let states: Vec<usize> = set.iter().copied().collect();
            for a in 0..states.len() {
                for b in a + 1..states.len() {
                    if !p.comparable(states[a], states[b]) {
                        return Err(Error::InvalidDecomposition(format!(
                            "set {} contains incomparable `{}`, `{}`",
                            i + 1,
                            d.state_name(states[a]),
                            d.state_name(states[b])
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A propositional formula in conjunctive normal form with a semantic tag
/// per named variable.
#[derive(Debug, Clone, Default)]
pub struct CnfInstance {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
    pub annotations: Vec<(i32, String)>,
}

impl CnfInstance {
    pub fn add(&mut self, clause: Vec<i32>) {
        debug_assert!(clause.iter().all(|&l| l != 0));
        debug_assert!(clause
            .iter()
            .all(|&l| l.unsigned_abs() as usize <= self.num_vars));
        self.clauses.push(clause);
    }

    /// Run the built-in solver on this instance.
    pub fn solve(&self) -> SolveResult {
        let mut solver = Solver::new(self.num_vars);
        for c in &self.clauses {
            solver.add_clause(c);
        }
        solver.solve()
    }

    pub fn to_dimacs(&self) -> String {
        dimacs::to_dimacs(self)
    }
}

/// Variable layout of the decomposition encoding.
struct DecompVars {
    n: usize,
    k: usize,
    nc: usize,
}

impl DecompVars {
    /// State `q` belongs to set `i`.
    fn x(&self, q: usize, i: usize) -> i32 {
        (1 + q * self.k + i) as i32
    }
    /// The image of set `i` under color `c` is contained in set `j`.
    fn z(&self, i: usize, c: usize, j: usize) -> i32 {
        (1 + self.n * self.k + (i * self.nc + c) * self.k + j) as i32
    }
    /// Equal-prefix marker of the column ordering, for adjacent column pair
    /// `pi` after row `r`.
    fn lex(&self, pi: usize, r: usize) -> i32 {
        (1 + self.n * self.k + self.k * self.nc * self.k + pi * self.n + r) as i32
    }
    fn total(&self) -> usize {
        self.n * self.k + self.k * self.nc * self.k + self.k.saturating_sub(2) * self.n
    }
}

/// Encode "the automaton admits a monotone decomposition with `k` sets".
///
/// Symmetry breaking pins the initial state to the first set and orders the
/// remaining set columns lexicographically.
pub fn encode_decomposition(d: &Dfa, p: &PrefixPreorder, k: usize) -> CnfInstance {
    assert!(k >= 1);
    assert_eq!(d.n_states(), p.n_states());
    let v = DecompVars {
        n: d.n_states(),
        k,
        nc: d.n_colors(),
    };
    let mut cnf = CnfInstance {
        num_vars: v.total(),
        ..Default::default()
    };
    for q in 0..v.n {
        for i in 0..k {
            cnf.annotations
                .push((v.x(q, i), format!("x[{},{}]", d.state_name(q), i + 1)));
        }
    }
    for i in 0..k {
        for c in 0..v.nc {
            for j in 0..k {
                cnf.annotations.push((
                    v.z(i, c, j),
                    format!("z[{},{},{}]", i + 1, &d.alphabet()[c], j + 1),
                ));
            }
        }
    }
    // Cover.
    for q in 0..v.n {
        cnf.add((0..k).map(|i| v.x(q, i)).collect());
    }
    // Chains.
    for (q1, q2) in p.incomparable_pairs() {
        for i in 0..k {
            cnf.add(vec![-v.x(q1, i), -v.x(q2, i)]);
        }
    }
    // Closure under letter images.
    for i in 0..k {
        for c in 0..v.nc {
            cnf.add((0..k).map(|j| v.z(i, c, j)).collect());
            for j in 0..k {
                for q in 0..v.n {
                    cnf.add(vec![-v.z(i, c, j), -v.x(q, i), v.x(d.step(q, c), j)]);
                }
            }
        }
    }
    // Symmetry breaking: the initial state sits in the first set, and the
    // remaining columns are sorted in descending lexicographic order.
    cnf.add(vec![v.x(d.initial(), 0)]);
    for pi in 0..k.saturating_sub(2) {
        let (a, b) = (1 + pi, 2 + pi);
        cnf.add(vec![v.x(0, a), -v.x(0, b)]);
        cnf.add(vec![-v.x(0, a), -v.x(0, b), v.lex(pi, 0)]);
        cnf.add(vec![v.x(0, a), v.x(0, b), v.lex(pi, 0)]);
        for r in 1..v.n {
            let e_prev = v.lex(pi, r - 1);
            cnf.add(vec![-e_prev, v.x(r, a), -v.x(r, b)]);
            if r + 1 < v.n {
                cnf.add(vec![-e_prev, -v.x(r, a), -v.x(r, b), v.lex(pi, r)]);
                cnf.add(vec![-e_prev, v.x(r, a), v.x(r, b), v.lex(pi, r)]);
            }
        }
    }
    cnf
}

fn decode_decomposition(d: &Dfa, k: usize, model: &[bool]) -> MonotoneDecomposition {
    let v = DecompVars {
        n: d.n_states(),
        k,
        nc: d.n_colors(),
    };
    MonotoneDecomposition {
        sets: (0..k)
            .map(|i| {
                (0..v.n)
                    .filter(|&q| model[v.x(q, i) as usize - 1])
                    .collect()
            })
            .collect(),
    }
}

/// Variable layout of the transition-function encoding.
struct MemVars {
    n: usize,
    k: usize,
    nc: usize,
}

impl MemVars {
    /// The memory update maps `(m, c)` to `m2`.
    fn t(&self, m: usize, c: usize, m2: usize) -> i32 {
        (1 + (m * self.nc + c) * self.k + m2) as i32
    }
    /// Over-approximated product reachability of `(m, q)`.
    fn r(&self, m: usize, q: usize) -> i32 {
        (1 + self.k * self.nc * self.k + m * self.n + q) as i32
    }
    fn total(&self) -> usize {
        self.k * self.nc * self.k + self.k * self.n
    }
}

/// Encode "some memory structure with `k` states makes every co-reachable
/// set a chain", quantifying directly over deterministic update functions.
///
/// The reachability predicate is an over-approximation: any closed superset
/// satisfying the chain constraints witnesses the property, and the exact
/// co-reachable sets always form a model, so satisfiability is unaffected.
pub fn encode_memory_sm(d: &Dfa, p: &PrefixPreorder, k: usize) -> CnfInstance {
    assert!(k >= 1);
    assert_eq!(d.n_states(), p.n_states());
    let v = MemVars {
        n: d.n_states(),
        k,
        nc: d.n_colors(),
    };
    let mut cnf = CnfInstance {
        num_vars: v.total(),
        ..Default::default()
    };
    for m in 0..k {
        for c in 0..v.nc {
            for m2 in 0..k {
                cnf.annotations.push((
                    v.t(m, c, m2),
                    format!("t[{},{},{}]", m + 1, &d.alphabet()[c], m2 + 1),
                ));
            }
        }
    }
    for m in 0..k {
        for q in 0..v.n {
            cnf.annotations
                .push((v.r(m, q), format!("r[{},{}]", m + 1, d.state_name(q))));
        }
    }
    // Deterministic complete update: exactly one target per (m, c).
    for m in 0..k {
        for c in 0..v.nc {
            cnf.add((0..k).map(|m2| v.t(m, c, m2)).collect());
            for m2 in 0..k {
                for m3 in m2 + 1..k {
                    cnf.add(vec![-v.t(m, c, m2), -v.t(m, c, m3)]);
                }
            }
        }
    }
    // The initial configuration is reachable; reachability propagates along
    // chosen transitions.
    cnf.add(vec![v.r(0, d.initial())]);
    for m in 0..k {
        for q in 0..v.n {
            for c in 0..v.nc {
                for m2 in 0..k {
                    cnf.add(vec![-v.r(m, q), -v.t(m, c, m2), v.r(m2, d.step(q, c))]);
                }
            }
        }
    }
    // Chain constraints on co-reachable states.
    for (q1, q2) in p.incomparable_pairs() {
        for m in 0..k {
            cnf.add(vec![-v.r(m, q1), -v.r(m, q2)]);
        }
    }
    cnf
}

fn decode_memory(d: &Dfa, k: usize, model: &[bool]) -> Result<MemoryStructure, Error> {
    let v = MemVars {
        n: d.n_states(),
        k,
        nc: d.n_colors(),
    };
    let mut update = Vec::with_capacity(k);
    for m in 0..k {
        let mut row = Vec::with_capacity(v.nc);
        for c in 0..v.nc {
            let m2 = (0..k)
                .find(|&m2| model[v.t(m, c, m2) as usize - 1])
                .ok_or_else(|| Error::Internal("model violates exactly-one".into()))?;
            row.push(m2);
        }
        update.push(row);
    }
    MemoryStructure::new(
        (1..=k).map(|i| format!("m{i}")).collect(),
        d.alphabet().to_vec(),
        0,
        update,
    )
}

/// Per-`k` solver outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KAttempt {
    pub k: usize,
    pub satisfiable: bool,
    pub cegar_iterations: usize,
}

#[derive(Debug, Clone, Default)]
pub struct SynthStats {
    pub per_k: Vec<KAttempt>,
    pub cegar_iterations: usize,
}

/// The certificate backing a synthesis result, re-verified before return.
#[derive(Debug, Clone)]
pub enum Certificate {
    Safe {
        decomposition: MonotoneDecomposition,
    },
    Reach {
        decomposition: MonotoneDecomposition,
        /// Counterexamples eliminated along the way.
        blocked: Vec<PcWitness>,
    },
}

#[derive(Debug, Clone)]
pub struct SynthesisResult {
    pub k: usize,
    pub memory: MemoryStructure,
    pub certificate: Certificate,
    pub stats: SynthStats,
}

/// Knobs for the synthesis entry points. `dimacs_dir` dumps every instance
/// as a DIMACS file and, when a matching `.sol` file is present, uses the
/// external solver's verdict instead of the built-in core (models are still
/// re-verified). `max_k` truncates the search.
#[derive(Debug, Clone, Default)]
pub struct SynthOptions {
    pub dimacs_dir: Option<std::path::PathBuf>,
    pub max_k: Option<usize>,
}

fn solve_instance(
    cnf: &CnfInstance,
    label: &str,
    opts: &SynthOptions,
) -> Result<SolveResult, Error> {
    if let Some(dir) = &opts.dimacs_dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io(e.to_string()))?;
        let path = dir.join(format!("{label}.cnf"));
        std::fs::write(&path, cnf.to_dimacs()).map_err(|e| Error::Io(e.to_string()))?;
        let sol = dir.join(format!("{label}.sol"));
        if sol.exists() {
            let text = std::fs::read_to_string(&sol).map_err(|e| Error::Io(e.to_string()))?;
            return parse_dimacs_solution(&text, cnf.num_vars);
        }
    }
    Ok(cnf.solve())
}

/// Smallest `k` such that a monotone decomposition with `k` sets exists,
/// with the decomposition and the induced memory structure.
///
/// The search walks `k` upward from the maximum-antichain lower bound; the
/// first satisfiable size is minimal. `k = |Q|` always succeeds via
/// singleton sets, so the plain entry point cannot fail to find one.
pub fn synth_safe_min(d: &Dfa, p: &PrefixPreorder) -> Result<SynthesisResult, Error> {
    synth_safe_min_with(d, p, &SynthOptions::default())?
        .ok_or_else(|| Error::Internal("unbounded safety search found nothing".into()))
}

pub fn synth_safe_min_with(
    d: &Dfa,
    p: &PrefixPreorder,
    opts: &SynthOptions,
) -> Result<Option<SynthesisResult>, Error> {
    if !d.is_normalized() {
        return Err(Error::NotNormalized("synthesis needs a normalized automaton".into()));
    }
    let lower = p.max_antichain().len().max(1);
    let upper = opts.max_k.unwrap_or(d.n_states()).min(d.n_states());
    let mut stats = SynthStats::default();
    for k in lower..=upper {
        let cnf = encode_decomposition(d, p, k);
        match solve_instance(&cnf, &format!("safe_k{k}"), opts)? {
            SolveResult::Unsat => stats.per_k.push(KAttempt {
                k,
                satisfiable: false,
                cegar_iterations: 0,
            }),
            SolveResult::Sat(model) => {
                let decomposition = decode_decomposition(d, k, &model);
                decomposition.validate(d, p)?;
                let memory = memory_from_decomposition(&decomposition, d, p)?;
                if !check_strong_monotony(d, &memory, p)?.is_ok() {
                    return Err(Error::Internal(
                        "decomposition-induced memory failed the chain check".into(),
                    ));
                }
                stats.per_k.push(KAttempt {
                    k,
                    satisfiable: true,
                    cegar_iterations: 0,
                });
                return Ok(Some(SynthesisResult {
                    k,
                    memory,
                    certificate: Certificate::Safe { decomposition },
                    stats,
                }));
            }
        }
    }
    Ok(None)
}

/// Smallest `k` admitting a memory structure that is both strongly monotone
/// and progress-consistent for the reachability objective.
///
/// Per size `k`, a counterexample-guided loop solves the transition-function
/// encoding, re-checks the decoded structure, and blocks the transition
/// pattern of any progress-consistency counterexample: the clause forbids
/// the conjunction of update choices traversed by the witness cycle, which
/// is sound because any model repeating those transitions reproduces the
/// violation. The automaton itself (finals unmarked) is a valid memory, so
/// the search ends by `|Q \ F|` at the latest.
pub fn synth_reach_min(d: &Dfa, p: &PrefixPreorder) -> Result<SynthesisResult, Error> {
    synth_reach_min_with(d, p, &SynthOptions::default())?
        .ok_or_else(|| Error::Internal("unbounded reachability search found nothing".into()))
}

pub fn synth_reach_min_with(
    d: &Dfa,
    p: &PrefixPreorder,
    opts: &SynthOptions,
) -> Result<Option<SynthesisResult>, Error> {
    let p = p.reach_oriented();
    let Some(safe) = synth_safe_min_with(d, &p, opts)? else {
        return Ok(None);
    };
    let mut stats = SynthStats {
        per_k: safe.stats.per_k[..safe.stats.per_k.len() - 1].to_vec(),
        cegar_iterations: 0,
    };
    let upper = (d.n_states() - d.finals().len()).max(1);
    let upper = opts.max_k.unwrap_or(upper).min(upper);
    let mut blocked = Vec::new();
    for k in safe.k..=upper {
        let mut cnf = encode_memory_sm(d, &p, k);
        let vars = MemVars {
            n: d.n_states(),
            k,
            nc: d.n_colors(),
        };
        let mut seen_patterns: HashSet<Vec<i32>> = HashSet::new();
        let mut iterations = 0;
        loop {
            let label = format!("reach_k{k}_i{iterations}");
            match solve_instance(&cnf, &label, opts)? {
                SolveResult::Unsat => {
                    stats.per_k.push(KAttempt {
                        k,
                        satisfiable: false,
                        cegar_iterations: iterations,
                    });
                    break;
                }
                SolveResult::Sat(model) => {
                    let memory = decode_memory(d, k, &model)?;
                    if !check_strong_monotony(d, &memory, &p)?.is_ok() {
                        return Err(Error::Internal(
                            "decoded memory failed the chain check".into(),
                        ));
                    }
                    match check_progress_consistency(d, &memory, &p)? {
                        crate::memory::PcCheck::ProgressConsistent => {
                            let decomposition = coreachable_sets(d, &memory)?.to_decomposition();
                            decomposition.validate(d, &p)?;
                            stats.per_k.push(KAttempt {
                                k,
                                satisfiable: true,
                                cegar_iterations: iterations,
                            });
                            return Ok(Some(SynthesisResult {
                                k,
                                memory,
                                certificate: Certificate::Reach {
                                    decomposition,
                                    blocked,
                                },
                                stats,
                            }));
                        }
                        crate::memory::PcCheck::Violation(w) => {
                            iterations += 1;
                            stats.cegar_iterations += 1;
                            // Forbid repeating the witness: the cycle's
                            // transition pattern together with the
                            // reachability of its entry configuration. The
                            // reachability literal matters: a valid update
                            // function may contain the same cycle with the
                            // entry unreachable, and its exact-reachability
                            // model then satisfies the clause.
                            let mut clause: Vec<i32> = {
                                let mut lits = BTreeSet::new();
                                lits.insert(-vars.r(w.memory_state, w.q1));
                                let mut m = w.memory_state;
                                for &c in &w.w2 {
                                    let m2 = memory.step(m, c);
                                    lits.insert(-vars.t(m, c, m2));
                                    m = m2;
                                }
                                lits.into_iter().collect()
                            };
                            // The same cycle pattern cannot recur once
                            // blocked; if it somehow does, fall back to
                            // blocking the entire assignment.
                            if !seen_patterns.insert(clause.clone()) {
                                clause = (0..k)
                                    .flat_map(|m| (0..d.n_colors()).map(move |c| (m, c)))
                                    .map(|(m, c)| -vars.t(m, c, memory.step(m, c)))
                                    .collect();
                            }
                            debug_assert!(clause
                                .iter()
                                .all(|&l| model[(-l) as usize - 1]));
                            blocked.push(w);
                            cnf.add(clause);
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Exhaustively search for a `k`-state memory structure passing the checks,
/// enumerating update tables in canonical (first-discovery) order so that
/// isomorphic candidates are generated once. Independent of the SAT path;
/// used as the oracle in tests.
pub fn enumerate_memories_bruteforce(
    d: &Dfa,
    p: &PrefixPreorder,
    k: usize,
    kind: ObjectiveKind,
) -> Result<Option<MemoryStructure>, Error> {
    assert!(k >= 1);
    let nc = d.n_colors();
    let candidates = (k as f64).ln() * (k * nc) as f64;
    if candidates > (1e7f64).ln() {
        return Err(Error::SearchSpaceTooLarge(format!(
            "{k}^{} update functions exceed the 10^7 guard",
            k * nc
        )));
    }
    let p = p.reach_oriented();
    let mut table = vec![vec![usize::MAX; nc]; k];

    fn rec(
        d: &Dfa,
        p: &PrefixPreorder,
        kind: ObjectiveKind,
        k: usize,
        nc: usize,
        table: &mut Vec<Vec<usize>>,
        cell: usize,
        used: usize,
    ) -> Result<Option<MemoryStructure>, Error> {
        if cell == used * nc {
            if used < k {
                return Ok(None); // ran out of cells to discover new states
            }
            let mem = MemoryStructure::new(
                (1..=k).map(|i| format!("m{i}")).collect(),
                d.alphabet().to_vec(),
                0,
                table.clone(),
            )?;
            if !check_strong_monotony(d, &mem, p)?.is_ok() {
                return Ok(None);
            }
            if kind == ObjectiveKind::Reach && !check_progress_consistency(d, &mem, p)?.is_ok() {
                return Ok(None);
            }
            return Ok(Some(mem));
        }
        let (m, c) = (cell / nc, cell % nc);
        let limit = if used < k { used } else { k - 1 };
        for target in 0..=limit {
            let next_used = if target == used { used + 1 } else { used };
            // Every remaining cell can introduce at most one new state.
            if k - next_used > next_used * nc - (cell + 1) {
                continue;
            }
            table[m][c] = target;
            if let Some(found) = rec(d, p, kind, k, nc, table, cell + 1, next_used)? {
                return Ok(Some(found));
            }
        }
        table[m][c] = usize::MAX;
        Ok(None)
    }

    rec(d, &p, kind, k, nc, &mut table, 0, 1)
}

/// Smallest size found by the exhaustive search; the oracle counterpart of
/// the SAT-based minima.
pub fn bruteforce_min(d: &Dfa, p: &PrefixPreorder, kind: ObjectiveKind) -> Result<usize, Error> {
    for k in 1..=d.n_states() {
        if enumerate_memories_bruteforce(d, p, k, kind)?.is_some() {
            return Ok(k);
        }
    }
    Err(Error::Internal("no memory up to |Q| states".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preorder::compute_preorder;

    fn fixture(name: &str) -> (Dfa, PrefixPreorder) {
        let text = match name {
            "abcd" => include_str!("../../fixtures/abcd.json"),
            "ab" => include_str!("../../fixtures/ab.json"),
            "ababa" => include_str!("../../fixtures/ababa.json"),
            _ => unreachable!(),
        };
        let d = Dfa::from_json(text).unwrap();
        let p = compute_preorder(&d).unwrap();
        (d, p)
    }

    #[test]
    fn abcd_decomposition_sat_at_3_unsat_at_2() {
        let (d, p) = fixture("abcd");
        assert!(!encode_decomposition(&d, &p, 2).solve().is_sat());
        let SolveResult::Sat(model) = encode_decomposition(&d, &p, 3).solve() else {
            panic!("k = 3 must be satisfiable");
        };
        let dec = decode_decomposition(&d, 3, &model);
        dec.validate(&d, &p).unwrap();
    }

    #[test]
    fn singletons_always_satisfiable() {
        let (d, p) = fixture("abcd");
        let k = d.n_states();
        assert!(encode_decomposition(&d, &p, k).solve().is_sat());
        MonotoneDecomposition::singletons(&d).validate(&d, &p).unwrap();
    }

    #[test]
    fn memory_encoding_agrees_with_decomposition_encoding() {
        for name in ["ab", "abcd", "ababa"] {
            let (d, p) = fixture(name);
            for k in 1..=d.n_states() {
                let a = encode_decomposition(&d, &p, k).solve().is_sat();
                let b = encode_memory_sm(&d, &p, k).solve().is_sat();
                assert_eq!(a, b, "{name} at k={k}");
            }
        }
    }

    #[test]
    fn decoded_memory_passes_chain_check() {
        let (d, p) = fixture("abcd");
        let SolveResult::Sat(model) = encode_memory_sm(&d, &p, 3).solve() else {
            panic!("k = 3 must be satisfiable");
        };
        let mem = decode_memory(&d, 3, &model).unwrap();
        assert!(check_strong_monotony(&d, &mem, &p).unwrap().is_ok());
    }

    #[test]
    fn safe_minima_on_fixtures() {
        let (d, p) = fixture("abcd");
        assert_eq!(synth_safe_min(&d, &p).unwrap().k, 3);
        let (d, p) = fixture("ab");
        assert_eq!(synth_safe_min(&d, &p).unwrap().k, 1);
    }

    #[test]
    fn reach_minima_on_fixtures() {
        let (d, p) = fixture("ab");
        let r = synth_reach_min(&d, &p).unwrap();
        assert_eq!(r.k, 2);
        assert!(check_progress_consistency(&d, &r.memory, &p).unwrap().is_ok());
        let (d, p) = fixture("ababa");
        let r = synth_reach_min(&d, &p).unwrap();
        assert_eq!(r.k, 2);
        assert!(r.stats.cegar_iterations >= 1, "k = 1 needs at least one blocked cycle");
    }

    #[test]
    fn monotone_in_k() {
        let (d, p) = fixture("abcd");
        let mut prev = false;
        for k in 1..=d.n_states() {
            let sat = encode_decomposition(&d, &p, k).solve().is_sat();
            assert!(!prev || sat, "satisfiability must be monotone in k");
            prev = sat;
        }
    }

    #[test]
    fn bruteforce_agrees_on_fixtures() {
        let (d, p) = fixture("abcd");
        assert!(enumerate_memories_bruteforce(&d, &p, 2, ObjectiveKind::Safe)
            .unwrap()
            .is_none());
        let found = enumerate_memories_bruteforce(&d, &p, 3, ObjectiveKind::Safe)
            .unwrap()
            .unwrap();
        assert!(check_strong_monotony(&d, &found, &p).unwrap().is_ok());
        assert_eq!(bruteforce_min(&d, &p, ObjectiveKind::Safe).unwrap(), 3);
        let (d, p) = fixture("ababa");
        assert_eq!(bruteforce_min(&d, &p, ObjectiveKind::Reach).unwrap(), 2);
    }

    #[test]
    fn guard_rejects_oversized_enumeration() {
        let (d, p) = fixture("abcd");
        assert!(matches!(
            enumerate_memories_bruteforce(&d, &p, 7, ObjectiveKind::Safe),
            Err(Error::SearchSpaceTooLarge(_))
        ));
    }

    #[test]
    fn max_k_truncates_search() {
        let (d, p) = fixture("abcd");
        let opts = SynthOptions {
            max_k: Some(2),
            ..Default::default()
        };
        assert!(synth_safe_min_with(&d, &p, &opts).unwrap().is_none());
    }
}
