//! Chromatic memory structures for regular reachability and safety games.
//!
//! Given a deterministic finite automaton `D` over an alphabet of colors,
//! the language `L(D)` induces two objectives for infinite-duration games
//! played on colored graphs: `Reach(L(D))` (some finite prefix of the play
//! belongs to `L(D)`) and `Safe(L(D))` (no prefix does). A *chromatic memory
//! structure* is a deterministic transition system driven by colors alone;
//! it suffices for an objective if one next-move table per (vertex, memory
//! state) pair realizes an optimal strategy in every arena.
//!
//! This crate decides whether a candidate memory structure suffices,
//! synthesizes minimal sufficient structures with a built-in SAT core, and
//! cross-validates the results against exact game solving on finite arenas:
//!
//! * [`automaton`] — DFAs, their JSON format, normalization, and shortest
//!   synchronized path witnesses.
//! * [`preorder`] — the prefix preorder on automaton states, separation
//!   witnesses, maximum antichains, and minimum chain covers.
//! * [`memory`] — memory structures, co-reachable sets, and the
//!   strong-monotony and progress-consistency checks.
//! * [`synth`] — SAT encodings of monotone decompositions, minimal-memory
//!   synthesis for both objectives, and an exhaustive oracle.
//! * [`games`] — arenas, exact game solving, sufficiency checks against a
//!   fixed memory, and counterexample arena generation.
//! * [`hardness`] — the Hamiltonian-cycle reduction emitting automata whose
//!   minimal decompositions encode Hamiltonicity.
//!
//! All types are immutable after construction and safe to share across
//! threads; every operation is a pure function of its inputs.
//!
//! The accompanying guide under `book/` walks through the concepts with
//! runnable examples; its code blocks are compiled as doc-tests via the
//! [`guide`] module.

pub mod automaton;
pub mod dot;
pub mod games;
pub mod guide;
pub mod hardness;
pub mod memory;
pub mod preorder;
pub mod synth;

mod error;

pub use automaton::{parse_dfa, path_witness, ColorTransitions, Dfa, ObjectiveKind, Word};
pub use error::Error;
pub use games::{
    check_memory_sufficient_on_arena, gen_incomparability_arena, gen_progress_arena, random_arena,
    solve_game, Arena, Player,
};
pub use hardness::{graph_to_dfa, hamiltonian_bruteforce, DirectedGraph};
pub use memory::{
    check_progress_consistency, check_strong_monotony, coreachable_sets, memory_from_decomposition,
    CoReachableSets, MemoryStructure, PcCheck, PcWitness, SmCheck, SmWitness,
};
pub use preorder::{compute_preorder, PrefixPreorder, SeparationWitness};
pub use synth::{
    encode_decomposition, encode_memory_sm, enumerate_memories_bruteforce, synth_safe_min,
    synth_reach_min, CnfInstance, MonotoneDecomposition, SynthesisResult,
};
