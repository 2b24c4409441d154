//! The prefix preorder on automaton states.
//!
//! For the reachability objective derived from a normalized automaton,
//! `q1 ⪯ q2` holds when every infinite continuation winning from `q1` also
//! wins from `q2` (residual containment). The preorder for the safety
//! objective is the reverse, so it is computed once for reachability and
//! transposed on demand. Non-containment is certified by an ultimately
//! periodic word `stem·pump^ω` that reaches the final state on one side and
//! cycles away from it on the other.

use std::collections::{HashMap, VecDeque};

use crate::automaton::{path_witness, ColorTransitions, Dfa, ObjectiveKind, Word};
use crate::Error;

/// Certificate that one residual is not contained in another.
///
/// Stored in reachability orientation: replaying `stem` from the winning
/// state ends on the final state, replaying it from the losing state ends on
/// a state that `pump` cycles on without ever meeting the final state, so
/// `stem·pump^ω` wins exactly on one side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationWitness {
    pub stem: Word,
    pub pump: Word,
}

/// Containment matrix of residual languages over automaton states, with a
/// separation witness for every failing pair.
#[derive(Debug, Clone)]
pub struct PrefixPreorder {
    kind: ObjectiveKind,
    n: usize,
    /// `reach_leq[q1 * n + q2]`: residual containment for the reachability
    /// objective, regardless of `kind`.
    reach_leq: Vec<bool>,
    /// Keyed in reachability orientation by pairs `(winner, loser)` with
    /// `¬(winner ⪯ loser)`.
    witnesses: HashMap<(usize, usize), SeparationWitness>,
}

/// Compute the prefix preorder of `Reach(L(d))` over the states of a
/// normalized automaton.
///
/// `q1 ⪯ q2` fails exactly when the synchronized pair product started at
/// `(q1, q2)` reaches a pair `(q_fin, p)` where `p` still admits an infinite
/// word avoiding `q_fin`. States from which the final state is unavoidable
/// have residual `C^ω` and therefore land in the final state's equivalence
/// class.
pub fn compute_preorder(d: &Dfa) -> Result<PrefixPreorder, Error> {
    if !d.is_normalized() {
        return Err(Error::NotNormalized(
            "compute_preorder requires a normalized automaton".into(),
        ));
    }
    let n = d.n_states();
    let nc = d.n_colors();
    let Some(fin) = d.final_state() else {
        // Empty language: every residual is empty, all states equivalent.
        return Ok(PrefixPreorder {
            kind: ObjectiveKind::Reach,
            n,
            reach_leq: vec![true; n * n],
            witnesses: HashMap::new(),
        });
    };

    // A nonempty cycle through q ≠ fin can never visit the absorbing final
    // state, so "q lies on a fin-free cycle" is plain self-reachability.
    let mut on_cycle = vec![false; n];
    for q in 0..n {
        if q == fin {
            continue;
        }
        let mut seen = vec![false; n];
        let mut queue: VecDeque<usize> = (0..nc).map(|c| d.step(q, c)).collect();
        while let Some(s) = queue.pop_front() {
            if s == q {
                on_cycle[q] = true;
                break;
            }
            if !seen[s] {
                seen[s] = true;
                queue.extend((0..nc).map(|c| d.step(s, c)));
            }
        }
    }

    // Backward reachability to the separating configurations over the pair
    // product. dist doubles as the visited marker for witness extraction.
    let pair = |a: usize, b: usize| a * n + b;
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n * n];
    for a in 0..n {
        for b in 0..n {
            for c in 0..nc {
                rev[pair(d.step(a, c), d.step(b, c))].push(pair(a, b));
            }
        }
    }
    let mut dist = vec![usize::MAX; n * n];
    let mut queue = VecDeque::new();
    for r in 0..n {
        if r != fin && on_cycle[r] {
            dist[pair(fin, r)] = 0;
            queue.push_back(pair(fin, r));
        }
    }
    while let Some(p) = queue.pop_front() {
        for &q in &rev[p] {
            if dist[q] == usize::MAX {
                dist[q] = dist[p] + 1;
                queue.push_back(q);
            }
        }
    }

    let reach_leq: Vec<bool> = (0..n * n).map(|p| dist[p] == usize::MAX).collect();

    // Lexicographically least shortest pumps, one per cycle state.
    let mut pumps: HashMap<usize, Word> = HashMap::new();
    for r in 0..n {
        if r != fin && on_cycle[r] {
            let pump = path_witness(&[(d, r, r)], true)?
                .ok_or_else(|| Error::Internal("cycle state without cycle word".into()))?;
            pumps.insert(r, pump);
        }
    }

    // Witnesses: walk the distance field greedily in color order, which
    // yields the lexicographically least shortest stem.
    let mut witnesses = HashMap::new();
    for q1 in 0..n {
        for q2 in 0..n {
            if reach_leq[pair(q1, q2)] {
                continue;
            }
            let mut stem = Word::new();
            let (mut a, mut b) = (q1, q2);
            while !(a == fin && b != fin && on_cycle[b]) {
                let need = dist[pair(a, b)] - 1;
                let c = (0..nc)
                    .find(|&c| dist[pair(d.step(a, c), d.step(b, c))] == need)
                    .expect("distance field is consistent");
                stem.push(c);
                (a, b) = (d.step(a, c), d.step(b, c));
            }
            let pump = pumps[&b].clone();
            witnesses.insert((q1, q2), SeparationWitness { stem, pump });
        }
    }

    Ok(PrefixPreorder {
        kind: ObjectiveKind::Reach,
        n,
        reach_leq,
        witnesses,
    })
}

impl PrefixPreorder {
    /// Orientation of `leq`: the objective whose prefix preorder this is.
    pub fn kind(&self) -> ObjectiveKind {
        self.kind
    }

    pub fn n_states(&self) -> usize {
        self.n
    }

    /// `q1 ⪯ q2` in this preorder's orientation.
    pub fn leq(&self, q1: usize, q2: usize) -> bool {
        match self.kind {
            ObjectiveKind::Reach => self.reach_leq[q1 * self.n + q2],
            ObjectiveKind::Safe => self.reach_leq[q2 * self.n + q1],
        }
    }

    pub fn strictly_less(&self, q1: usize, q2: usize) -> bool {
        self.leq(q1, q2) && !self.leq(q2, q1)
    }

    pub fn comparable(&self, q1: usize, q2: usize) -> bool {
        self.leq(q1, q2) || self.leq(q2, q1)
    }

    pub fn equivalent(&self, q1: usize, q2: usize) -> bool {
        self.leq(q1, q2) && self.leq(q2, q1)
    }

    /// The same containment data oriented for the complement objective.
    /// Comparability is direction-independent, so chains and antichains are
    /// unaffected.
    pub fn transposed(&self) -> PrefixPreorder {
        let mut p = self.clone();
        p.kind = self.kind.complement();
        p
    }

    /// Reorient to the reachability preorder (identity if already oriented so).
    pub fn reach_oriented(&self) -> PrefixPreorder {
        match self.kind {
            ObjectiveKind::Reach => self.clone(),
            ObjectiveKind::Safe => self.transposed(),
        }
    }

    /// Witness that `winner ⋠ loser` fails in the other direction — that is,
    /// an ultimately periodic word `stem·pump^ω` in the residual of `winner`
    /// but not of `loser`, for this preorder's objective.
    pub fn separation(&self, winner: usize, loser: usize) -> Option<&SeparationWitness> {
        match self.kind {
            ObjectiveKind::Reach => self.witnesses.get(&(winner, loser)),
            ObjectiveKind::Safe => self.witnesses.get(&(loser, winner)),
        }
    }

    /// All separation witnesses in this orientation, keyed by
    /// `(winner, loser)`.
    pub fn separations(&self) -> impl Iterator<Item = ((usize, usize), &SeparationWitness)> {
        self.witnesses.iter().map(move |(&(a, b), w)| match self.kind {
            ObjectiveKind::Reach => ((a, b), w),
            ObjectiveKind::Safe => ((b, a), w),
        })
    }

    /// Pairs `(q1, q2)` with `q1 < q2` that are incomparable.
    pub fn incomparable_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for q1 in 0..self.n {
            for q2 in q1 + 1..self.n {
                if !self.comparable(q1, q2) {
                    out.push((q1, q2));
                }
            }
        }
        out
    }

    /// Equivalence classes of mutual containment, each sorted, ordered by
    /// smallest member.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for q in 0..self.n {
            let found = (0..q).find(|&r| self.equivalent(q, r));
            match found {
                Some(r) => {
                    let c = class_of[r];
                    class_of[q] = c;
                    classes[c].push(q);
                }
                None => {
                    class_of[q] = classes.len();
                    classes.push(vec![q]);
                }
            }
        }
        classes
    }

    /// The oriented containment matrix, row-major.
    pub fn matrix(&self) -> Vec<Vec<bool>> {
        (0..self.n)
            .map(|q1| (0..self.n).map(|q2| self.leq(q1, q2)).collect())
            .collect()
    }

    /// A maximum antichain, as state indices (one representative per
    /// equivalence class). Among all maximum antichains the one with the
    /// lexicographically smallest index set is returned.
    pub fn max_antichain(&self) -> Vec<usize> {
        let classes = self.classes();
        let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
        let all: Vec<usize> = (0..classes.len()).collect();
        let target = self.antichain_bound(&reps, &all);
        let mut chosen: Vec<usize> = Vec::new();
        for ci in 0..classes.len() {
            if chosen.len() == target {
                break;
            }
            if chosen.iter().any(|&cj| self.comparable(reps[cj], reps[ci])) {
                continue;
            }
            let rest: Vec<usize> = (ci + 1..classes.len())
                .filter(|&cj| {
                    !self.comparable(reps[cj], reps[ci])
                        && chosen.iter().all(|&ck| !self.comparable(reps[cj], reps[ck]))
                })
                .collect();
            if chosen.len() + 1 + self.antichain_bound(&reps, &rest) >= target {
                chosen.push(ci);
            }
        }
        chosen.into_iter().map(|ci| reps[ci]).collect()
    }

    /// A cover of all states by chains whose count equals the maximum
    /// antichain size (Dilworth duality via bipartite matching). Closure
    /// under letter images is deliberately not required here.
    pub fn min_chain_cover(&self) -> Vec<Vec<usize>> {
        let classes = self.classes();
        let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
        let k = classes.len();
        let adj: Vec<Vec<usize>> = (0..k)
            .map(|i| {
                (0..k)
                    .filter(|&j| i != j && self.strictly_less(reps[i], reps[j]))
                    .collect()
            })
            .collect();
        let (_, match_l, match_r) = hopcroft_karp(&adj, k);
        let mut chains = Vec::new();
        for head in 0..k {
            if match_r[head].is_some() {
                continue;
            }
            let mut chain = Vec::new();
            let mut cur = Some(head);
            while let Some(c) = cur {
                chain.extend(classes[c].iter().copied());
                cur = match_l[c];
            }
            chains.push(chain);
        }
        chains.sort_by_key(|ch| ch[0]);
        chains
    }

    /// Maximum antichain size within the classes listed in `subset`.
    fn antichain_bound(&self, reps: &[usize], subset: &[usize]) -> usize {
        let index: HashMap<usize, usize> = subset.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let adj: Vec<Vec<usize>> = subset
            .iter()
            .map(|&ci| {
                subset
                    .iter()
                    .filter(|&&cj| ci != cj && self.strictly_less(reps[ci], reps[cj]))
                    .map(|cj| index[cj])
                    .collect()
            })
            .collect();
        let (matching, _, _) = hopcroft_karp(&adj, subset.len());
        subset.len() - matching
    }
}

/// Maximum bipartite matching, Hopcroft–Karp. `adj[u]` lists right
/// neighbors of left vertex `u` in ascending order, which keeps the result
/// deterministic.
fn hopcroft_karp(
    adj: &[Vec<usize>],
    n_right: usize,
) -> (usize, Vec<Option<usize>>, Vec<Option<usize>>) {
    let n_left = adj.len();
    let mut match_l: Vec<Option<usize>> = vec![None; n_left];
    let mut match_r: Vec<Option<usize>> = vec![None; n_right];
    let mut matching = 0;
    loop {
        // BFS layers from free left vertices.
        let mut layer = vec![usize::MAX; n_left];
        let mut queue = VecDeque::new();
        for u in 0..n_left {
            if match_l[u].is_none() {
                layer[u] = 0;
                queue.push_back(u);
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                match match_r[v] {
                    None => found = true,
                    Some(u2) if layer[u2] == usize::MAX => {
                        layer[u2] = layer[u] + 1;
                        queue.push_back(u2);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            return (matching, match_l, match_r);
        }
        fn augment(
            u: usize,
            adj: &[Vec<usize>],
            layer: &mut [usize],
            match_l: &mut [Option<usize>],
            match_r: &mut [Option<usize>],
        ) -> bool {
            for i in 0..adj[u].len() {
                let v = adj[u][i];
                let ok = match match_r[v] {
                    None => true,
                    Some(u2) => {
                        layer[u2] == layer[u] + 1
                            && augment(u2, adj, layer, match_l, match_r)
                    }
                };
                if ok {
                    match_l[u] = Some(v);
                    match_r[v] = Some(u);
                    return true;
                }
            }
            layer[u] = usize::MAX;
            false
        }
        for u in 0..n_left {
            if match_l[u].is_none() && layer[u] == 0 {
                if augment(u, adj, &mut layer, &mut match_l, &mut match_r) {
                    matching += 1;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::Dfa;

    fn abcd() -> Dfa {
        Dfa::from_json(include_str!("../fixtures/abcd.json")).unwrap()
    }

    fn ab() -> Dfa {
        Dfa::from_json(include_str!("../fixtures/ab.json")).unwrap()
    }

    fn idx(d: &Dfa, n: &str) -> usize {
        d.state_index(n).unwrap()
    }

    #[test]
    fn abcd_incomparable_pairs_match_example() {
        let d = abcd();
        let p = compute_preorder(&d).unwrap();
        let pairs: Vec<(String, String)> = p
            .incomparable_pairs()
            .into_iter()
            .map(|(a, b)| (d.state_name(a).into(), d.state_name(b).into()))
            .collect();
        assert_eq!(
            pairs,
            vec![
                ("q_a".to_string(), "q_b".to_string()),
                ("q_c".to_string(), "q_d".to_string())
            ]
        );
        // All other distinct pairs strictly ordered with q_cd on top.
        let fin = idx(&d, "q_cd");
        for q in 0..d.n_states() {
            assert!(p.leq(q, fin));
        }
        assert!(p.strictly_less(idx(&d, "q_init"), idx(&d, "q_a")));
        assert!(p.strictly_less(idx(&d, "q_ab"), idx(&d, "q_c")));
    }

    #[test]
    fn final_state_is_maximum() {
        let d = ab();
        let p = compute_preorder(&d).unwrap();
        let fin = d.final_state().unwrap();
        for q in 0..d.n_states() {
            assert!(p.leq(q, fin));
        }
    }

    #[test]
    fn rejects_unnormalized_input() {
        let d = Dfa::from_json(
            r#"{"states":["s","f","t"],"alphabet":["a"],"initial":"s","finals":["f"],
                "transitions":[["s","a","f"],["f","a","t"],["t","a","s"]]}"#,
        )
        .unwrap();
        assert!(matches!(
            compute_preorder(&d),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn abcd_antichain_and_cover() {
        let d = abcd();
        let p = compute_preorder(&d).unwrap();
        let ac = p.max_antichain();
        assert_eq!(
            ac.iter().map(|&q| d.state_name(q)).collect::<Vec<_>>(),
            vec!["q_a", "q_b"]
        );
        let cover = p.min_chain_cover();
        assert_eq!(cover.len(), 2);
        let mut covered: Vec<usize> = cover.iter().flatten().copied().collect();
        covered.sort();
        covered.dedup();
        assert_eq!(covered.len(), d.n_states());
        for chain in &cover {
            for i in 0..chain.len() {
                for j in i + 1..chain.len() {
                    assert!(p.comparable(chain[i], chain[j]));
                }
            }
        }
    }

    #[test]
    fn total_order_has_singleton_antichain() {
        let d = ab();
        let p = compute_preorder(&d).unwrap();
        assert_eq!(p.max_antichain().len(), 1);
        assert_eq!(p.min_chain_cover().len(), 1);
        assert_eq!(p.min_chain_cover()[0].len(), d.n_states());
    }

    #[test]
    fn empty_language_collapses_everything() {
        let d = Dfa::from_json(
            r#"{"states":["s","t"],"alphabet":["a"],"initial":"s","finals":[],
                "transitions":[["s","a","t"],["t","a","s"]]}"#,
        )
        .unwrap();
        let p = compute_preorder(&d).unwrap();
        assert!(p.equivalent(0, 1));
        assert_eq!(p.max_antichain().len(), 1);
    }

    #[test]
    fn unavoidable_final_merges_into_top_class() {
        // From `t` every infinite word hits the final state, so t ~ fin.
        let d = Dfa::from_json(
            r#"{"states":["s","t","f"],"alphabet":["a","b"],"initial":"s","finals":["f"],
                "transitions":[["s","a","t"],["s","b","s"],
                               ["t","a","f"],["t","b","f"],
                               ["f","a","f"],["f","b","f"]]}"#,
        )
        .unwrap();
        let p = compute_preorder(&d).unwrap();
        let (t, f) = (1, 2);
        assert!(p.equivalent(t, f));
        assert!(p.strictly_less(0, t));
    }

    #[test]
    fn witnesses_replay() {
        let d = abcd();
        let p = compute_preorder(&d).unwrap();
        let fin = d.final_state().unwrap();
        for ((q1, q2), w) in p.separations() {
            assert_eq!(d.run(q1, &w.stem), fin);
            let pth = d.run(q2, &w.stem);
            assert_ne!(pth, fin);
            assert!(!w.pump.is_empty());
            assert_eq!(d.run(pth, &w.pump), pth);
            assert!(w.pump.iter().scan(pth, |q, &c| {
                *q = d.step(*q, c);
                Some(*q)
            }).all(|q| q != fin));
        }
        assert!(p.separation(idx(&d, "q_a"), idx(&d, "q_b")).is_some());
        assert!(p.separation(idx(&d, "q_init"), idx(&d, "q_a")).is_none());
    }

    #[test]
    fn transposition_flips_orientation_and_witnesses() {
        let d = abcd();
        let p = compute_preorder(&d).unwrap();
        let t = p.transposed();
        assert_eq!(t.kind(), ObjectiveKind::Safe);
        for a in 0..d.n_states() {
            for b in 0..d.n_states() {
                assert_eq!(p.leq(a, b), t.leq(b, a));
                assert_eq!(p.comparable(a, b), t.comparable(a, b));
            }
        }
        // Safe-oriented separation: a word avoiding the final state from the
        // winner forever while the loser cannot avoid it on that word.
        let (qa, qb) = (idx(&d, "q_a"), idx(&d, "q_b"));
        let w = t.separation(qa, qb).unwrap();
        let fin = d.final_state().unwrap();
        assert_eq!(d.run(qb, &w.stem), fin);
        assert_ne!(d.run(qa, &w.stem), fin);
    }

    #[test]
    fn monotone_under_transitions() {
        let d = abcd();
        let p = compute_preorder(&d).unwrap();
        for q1 in 0..d.n_states() {
            for q2 in 0..d.n_states() {
                if p.leq(q1, q2) {
                    for c in 0..d.n_colors() {
                        assert!(p.leq(d.step(q1, c), d.step(q2, c)));
                    }
                }
            }
        }
    }
}
