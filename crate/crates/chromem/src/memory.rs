//! Chromatic memory structures and the two checks that characterize when a
//! structure suffices to play optimally.
//!
//! A memory structure is a complete deterministic transition system over the
//! automaton's colors, with no accepting states. Strong monotony asks that
//! every set of automaton states co-reachable with one memory state is a
//! chain of the prefix preorder; progress consistency asks that any word
//! cycling on a memory state while strictly improving the residual wins when
//! repeated forever. Both checks produce replayable witnesses when they
//! fail.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::automaton::{path_witness, ColorTransitions, Dfa, ObjectiveKind, Word};
use crate::preorder::PrefixPreorder;
use crate::synth::MonotoneDecomposition;
use crate::Error;

/// A deterministic complete color-driven transition system with an initial
/// state and no accepting states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemoryStructure {
    state_names: Vec<String>,
    alphabet: Vec<String>,
    initial: usize,
    /// `update[state][color]`.
    update: Vec<Vec<usize>>,
}

impl ColorTransitions for MemoryStructure {
    fn state_count(&self) -> usize {
        self.state_names.len()
    }
    fn color_count(&self) -> usize {
        self.alphabet.len()
    }
    fn step(&self, state: usize, color: usize) -> usize {
        self.update[state][color]
    }
}

#[derive(Serialize, Deserialize)]
struct MemoryDoc {
    states: Vec<String>,
    alphabet: Vec<String>,
    initial: String,
    transitions: Vec<(String, String, String)>,
}

impl MemoryStructure {
    pub fn new(
        state_names: Vec<String>,
        alphabet: Vec<String>,
        initial: usize,
        update: Vec<Vec<usize>>,
    ) -> Result<MemoryStructure, Error> {
        // Reuse the automaton validation by round-tripping through a Dfa
        // with no finals.
        let d = Dfa::new(
            state_names.clone(),
            alphabet.clone(),
            initial,
            BTreeSet::new(),
            update.clone(),
        )?;
        let _ = d;
        Ok(MemoryStructure {
            state_names,
            alphabet,
            initial,
            update,
        })
    }

    /// The unique one-state memory structure over `alphabet`.
    pub fn trivial(alphabet: &[String]) -> MemoryStructure {
        MemoryStructure {
            state_names: vec!["m1".into()],
            alphabet: alphabet.to_vec(),
            initial: 0,
            update: vec![vec![0; alphabet.len()]],
        }
    }

    pub fn from_json(text: &str) -> Result<MemoryStructure, Error> {
        // Same schema as the automaton minus `finals`.
        let doc: MemoryDoc =
            serde_json::from_str(text).map_err(|e| Error::MalformedDocument(e.to_string()))?;
        let with_finals = serde_json::json!({
            "states": doc.states,
            "alphabet": doc.alphabet,
            "initial": doc.initial,
            "finals": [],
            "transitions": doc.transitions,
        });
        let d = Dfa::from_json(&with_finals.to_string())?;
        Ok(MemoryStructure {
            state_names: d.state_names().to_vec(),
            alphabet: d.alphabet().to_vec(),
            initial: d.initial(),
            update: (0..d.n_states())
                .map(|s| (0..d.n_colors()).map(|c| d.step(s, c)).collect())
                .collect(),
        })
    }

    pub fn to_json(&self) -> String {
        let doc = MemoryDoc {
            states: self.state_names.clone(),
            alphabet: self.alphabet.clone(),
            initial: self.state_names[self.initial].clone(),
            transitions: self
                .update
                .iter()
                .enumerate()
                .flat_map(|(s, row)| row.iter().enumerate().map(move |(c, &t)| (s, c, t)))
                .map(|(s, c, t)| {
                    (
                        self.state_names[s].clone(),
                        self.alphabet[c].clone(),
                        self.state_names[t].clone(),
                    )
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("memory serializes")
    }

    pub fn n_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn state_name(&self, m: usize) -> &str {
        &self.state_names[m]
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.state_names.iter().position(|n| n == name)
    }

    /// Reorder colors to match `alphabet`, which must be the same set.
    pub fn aligned_to(&self, alphabet: &[String]) -> Result<MemoryStructure, Error> {
        if self.alphabet == alphabet {
            return Ok(self.clone());
        }
        if self.alphabet.len() != alphabet.len() {
            return Err(Error::AlphabetMismatch(format!(
                "memory alphabet has {} colors, automaton has {}",
                self.alphabet.len(),
                alphabet.len()
            )));
        }
        let perm: Vec<usize> = alphabet
            .iter()
            .map(|c| {
                self.alphabet
                    .iter()
                    .position(|mc| mc == c)
                    .ok_or_else(|| Error::AlphabetMismatch(format!("color `{c}` missing from memory")))
            })
            .collect::<Result<_, _>>()?;
        Ok(MemoryStructure {
            state_names: self.state_names.clone(),
            alphabet: alphabet.to_vec(),
            initial: self.initial,
            update: self
                .update
                .iter()
                .map(|row| perm.iter().map(|&c| row[c]).collect())
                .collect(),
        })
    }
}

/// Per memory state `m`, the set `Γ_m` of automaton states reachable by some
/// word whose memory image is `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoReachableSets {
    sets: Vec<BTreeSet<usize>>,
}

impl CoReachableSets {
    pub fn set(&self, m: usize) -> &BTreeSet<usize> {
        &self.sets[m]
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BTreeSet<usize>)> {
        self.sets.iter().enumerate()
    }

    /// Memory states never reached by any word; their `Γ` is empty and they
    /// take no part in chain checks.
    pub fn unreachable_memory_states(&self) -> Vec<usize> {
        self.sets
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_empty())
            .map(|(m, _)| m)
            .collect()
    }

    /// The nonempty sets as a decomposition candidate.
    pub fn to_decomposition(&self) -> MonotoneDecomposition {
        MonotoneDecomposition {
            sets: self.sets.iter().filter(|s| !s.is_empty()).cloned().collect(),
        }
    }
}

/// Witness that some memory state can be reached together with two
/// incomparable automaton states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmWitness {
    pub memory_state: usize,
    pub q1: usize,
    pub q2: usize,
    /// Access word to `(memory_state, q1)`.
    pub w1: Word,
    /// Access word to `(memory_state, q2)`.
    pub w2: Word,
}

/// Witness against progress consistency: from a reachable configuration
/// `(memory_state, q1)`, the word `w2` cycles on the memory state, strictly
/// improves the automaton state to `q2`, and loops on `q2`, so repeating it
/// forever never wins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcWitness {
    pub memory_state: usize,
    pub q1: usize,
    pub q2: usize,
    /// Access word to `(memory_state, q1)`.
    pub w1: Word,
    /// The progress cycle.
    pub w2: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SmCheck {
    StronglyMonotone,
    Violation(SmWitness),
}

impl SmCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, SmCheck::StronglyMonotone)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PcCheck {
    ProgressConsistent,
    Violation(PcWitness),
}

impl PcCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, PcCheck::ProgressConsistent)
    }
}

/// Compute `Γ_m` for every memory state by breadth-first search over the
/// memory × automaton pair product.
pub fn coreachable_sets(d: &Dfa, mem: &MemoryStructure) -> Result<CoReachableSets, Error> {
    let mem = mem.aligned_to(d.alphabet())?;
    let mut sets = vec![BTreeSet::new(); mem.n_states()];
    let mut seen = vec![false; mem.n_states() * d.n_states()];
    let start = (mem.initial(), d.initial());
    let mut queue = VecDeque::from([start]);
    seen[start.0 * d.n_states() + start.1] = true;
    while let Some((m, q)) = queue.pop_front() {
        sets[m].insert(q);
        for c in 0..d.n_colors() {
            let next = (mem.step(m, c), d.step(q, c));
            if !seen[next.0 * d.n_states() + next.1] {
                seen[next.0 * d.n_states() + next.1] = true;
                queue.push_back(next);
            }
        }
    }
    Ok(CoReachableSets { sets })
}

/// Check that every nonempty `Γ_m` is a chain of the preorder.
///
/// The scan is deterministic: memory states by index, then state pairs in
/// index order; the first incomparable pair found is returned with shortest
/// lexicographically-least access words.
pub fn check_strong_monotony(
    d: &Dfa,
    mem: &MemoryStructure,
    p: &PrefixPreorder,
) -> Result<SmCheck, Error> {
    let mem = mem.aligned_to(d.alphabet())?;
    let gamma = coreachable_sets(d, &mem)?;
    for m in 0..mem.n_states() {
        let set: Vec<usize> = gamma.set(m).iter().copied().collect();
        for i in 0..set.len() {
            for j in i + 1..set.len() {
                let (q1, q2) = (set[i], set[j]);
                if !p.comparable(q1, q2) {
                    let access = |q: usize| -> Result<Word, Error> {
                        path_witness(&[(&mem, mem.initial(), m), (d, d.initial(), q)], false)?
                            .ok_or_else(|| {
                                Error::Internal("co-reachable pair without access word".into())
                            })
                    };
                    return Ok(SmCheck::Violation(SmWitness {
                        memory_state: m,
                        q1,
                        q2,
                        w1: access(q1)?,
                        w2: access(q2)?,
                    }));
                }
            }
        }
    }
    Ok(SmCheck::StronglyMonotone)
}

/// Check progress consistency for the objective whose preorder `p` is.
///
/// A violation is a word `w2` cycling on a reachable memory state that
/// strictly improves the automaton state from `q1` to a fixpoint `q2` whose
/// repetition loses. For the reachability orientation, losing fixpoints are
/// exactly the non-final states, so the scan ranges over `q2 ≠ q_fin` with
/// `q1 ≺ q2` and tests emptiness of the triple product
/// `Λ_{m→m} ∩ Λ_{q1→q2} ∩ Λ_{q2→q2}`. For the safety orientation a repeated
/// cycle loses only by sitting on the final state, which no state lies
/// strictly below, so the scan is provably empty and the check always
/// succeeds — every safety objective is progress-consistent for every
/// memory structure.
pub fn check_progress_consistency(
    d: &Dfa,
    mem: &MemoryStructure,
    p: &PrefixPreorder,
) -> Result<PcCheck, Error> {
    if !d.is_normalized() {
        return Err(Error::NotNormalized(
            "progress consistency needs a normalized automaton".into(),
        ));
    }
    let mem = mem.aligned_to(d.alphabet())?;
    let Some(fin) = d.final_state() else {
        // Empty language: no strict progress exists.
        return Ok(PcCheck::ProgressConsistent);
    };
    let gamma = coreachable_sets(d, &mem)?;
    for m in 0..mem.n_states() {
        for &q1 in gamma.set(m) {
            let candidates: Vec<usize> = match p.kind() {
                ObjectiveKind::Reach => (0..d.n_states())
                    .filter(|&q2| q2 != fin && p.strictly_less(q1, q2))
                    .collect(),
                // Safety: the only losing fixpoint is the final state
                // itself; nothing is strictly below it.
                ObjectiveKind::Safe => [fin]
                    .into_iter()
                    .filter(|&q2| p.strictly_less(q1, q2))
                    .collect(),
            };
            for q2 in candidates {
                // Strictness makes q1 ≠ q2, so the empty word can never
                // witness the triple and no nonempty flag is needed.
                let w2 = path_witness(&[(&mem, m, m), (d, q1, q2), (d, q2, q2)], false)?;
                if let Some(w2) = w2 {
                    let w1 = path_witness(
                        &[(&mem, mem.initial(), m), (d, d.initial(), q1)],
                        false,
                    )?
                    .ok_or_else(|| {
                        Error::Internal("co-reachable pair without access word".into())
                    })?;
                    return Ok(PcCheck::Violation(PcWitness {
                        memory_state: m,
                        q1,
                        q2,
                        w1,
                        w2,
                    }));
                }
            }
        }
    }
    Ok(PcCheck::ProgressConsistent)
}

/// Build the memory structure induced by a monotone decomposition: one state
/// per set, initial at the lowest-index set containing the initial automaton
/// state, updates to the lowest-index superset of the letter image. The
/// result always passes [`check_strong_monotony`].
pub fn memory_from_decomposition(
    dec: &MonotoneDecomposition,
    d: &Dfa,
    p: &PrefixPreorder,
) -> Result<MemoryStructure, Error> {
    dec.validate(d, p)?;
    let k = dec.sets.len();
    let image = |set: &BTreeSet<usize>, c: usize| -> BTreeSet<usize> {
        set.iter().map(|&q| d.step(q, c)).collect()
    };
    let initial = dec
        .sets
        .iter()
        .position(|s| s.contains(&d.initial()))
        .expect("validated decompositions cover the initial state");
    let mut update = Vec::with_capacity(k);
    for i in 0..k {
        let mut row = Vec::with_capacity(d.n_colors());
        for c in 0..d.n_colors() {
            let img = image(&dec.sets[i], c);
            let j = dec
                .sets
                .iter()
                .position(|s| img.is_subset(s))
                .expect("validated decompositions are closed under letter images");
            row.push(j);
        }
        update.push(row);
    }
    MemoryStructure::new(
        (1..=k).map(|i| format!("m{i}")).collect(),
        d.alphabet().to_vec(),
        initial,
        update,
    )
}

/// Internal helper shared by tests: a map from memory state names to `Γ`
/// state-name sets.
pub fn gamma_by_name(d: &Dfa, mem: &MemoryStructure) -> Result<HashMap<String, Vec<String>>, Error> {
    let gamma = coreachable_sets(d, mem)?;
    Ok(gamma
        .iter()
        .map(|(m, set)| {
            (
                mem.state_name(m).to_string(),
                set.iter().map(|&q| d.state_name(q).to_string()).collect(),
            )
        })
        .collect())
}
