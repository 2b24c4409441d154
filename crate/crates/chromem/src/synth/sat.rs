//! Built-in SAT core: conflict-driven clause learning over two-watched-literal
//! unit propagation, with first-UIP learning, VSIDS branching, phase saving,
//! and Luby restarts. One-shot per instance and fully deterministic.

/// Internal literal encoding: `var << 1 | sign`, sign 1 = negated.
type Lit = u32;

fn lit(var: usize, neg: bool) -> Lit {
    ((var as u32) << 1) | neg as u32
}

fn lit_from_dimacs(l: i32) -> Lit {
    debug_assert!(l != 0);
    lit(l.unsigned_abs() as usize - 1, l < 0)
}

fn var(l: Lit) -> usize {
    (l >> 1) as usize
}

fn negate(l: Lit) -> Lit {
    l ^ 1
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveResult {
    /// Model indexed by variable (0-based).
    Sat(Vec<bool>),
    Unsat,
}

impl SolveResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolveResult::Sat(_))
    }
}

#[derive(Default)]
struct VarOrder {
    heap: Vec<usize>,
    pos: Vec<usize>,
}

impl VarOrder {
    fn new(n: usize) -> VarOrder {
        VarOrder {
            heap: (0..n).collect(),
            pos: (0..n).collect(),
        }
    }

    fn better(a: usize, b: usize, act: &[f64]) -> bool {
        act[a] > act[b] || (act[a] == act[b] && a < b)
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        while i > 0 {
            let parent = (i - 1) / 2;
            if Self::better(self.heap[i], self.heap[parent], act) {
                self.heap.swap(i, parent);
                self.pos[self.heap[i]] = i;
                self.pos[self.heap[parent]] = parent;
                i = parent;
            } else {
                break;
            }
        }
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        loop {
            let (l, r) = (2 * i + 1, 2 * i + 2);
            let mut best = i;
            if l < self.heap.len() && Self::better(self.heap[l], self.heap[best], act) {
                best = l;
            }
            if r < self.heap.len() && Self::better(self.heap[r], self.heap[best], act) {
                best = r;
            }
            if best == i {
                break;
            }
            self.heap.swap(i, best);
            self.pos[self.heap[i]] = i;
            self.pos[self.heap[best]] = best;
            i = best;
        }
    }

    fn contains(&self, v: usize) -> bool {
        self.pos[v] != usize::MAX
    }

    fn insert(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.pos[v] = self.heap.len();
        self.heap.push(v);
        self.sift_up(self.pos[v], act);
    }

    fn pop(&mut self, act: &[f64]) -> Option<usize> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().unwrap();
        self.pos[top] = usize::MAX;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last] = 0;
            self.sift_down(0, act);
        }
        Some(top)
    }

    fn bumped(&mut self, v: usize, act: &[f64]) {
        if self.contains(v) {
            self.sift_up(self.pos[v], act);
        }
    }
}

pub struct Solver {
    n_vars: usize,
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    value: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<Option<usize>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    order: VarOrder,
    phase: Vec<bool>,
    seen: Vec<bool>,
    ok: bool,
    pub conflicts: u64,
    pub decisions: u64,
}

impl Solver {
    pub fn new(n_vars: usize) -> Solver {
        Solver {
            n_vars,
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * n_vars],
            value: vec![0; n_vars],
            level: vec![0; n_vars],
            reason: vec![None; n_vars],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            activity: vec![0.0; n_vars],
            var_inc: 1.0,
            order: VarOrder::new(n_vars),
            phase: vec![false; n_vars],
            seen: vec![false; n_vars],
            ok: true,
            conflicts: 0,
            decisions: 0,
        }
    }

    fn lit_value(&self, l: Lit) -> i8 {
        let v = self.value[var(l)];
        if l & 1 == 1 {
            -v
        } else {
            v
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// Add a clause in DIMACS polarity (1-based signed literals).
    pub fn add_clause(&mut self, dimacs: &[i32]) {
        if !self.ok {
            return;
        }
        debug_assert_eq!(self.decision_level(), 0);
        let mut lits: Vec<Lit> = dimacs.iter().map(|&l| lit_from_dimacs(l)).collect();
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] == negate(w[1]) || w[1] == negate(w[0])) {
            return; // tautology
        }
        lits.retain(|&l| self.lit_value(l) != -1 || self.level[var(l)] > 0);
        if lits.iter().any(|&l| self.lit_value(l) == 1 && self.level[var(l)] == 0) {
            return; // satisfied at top level
        }
        match lits.len() {
            0 => self.ok = false,
            1 => {
                if !self.enqueue(lits[0], None) {
                    self.ok = false;
                } else if self.propagate().is_some() {
                    self.ok = false;
                }
            }
            _ => {
                let idx = self.clauses.len();
                self.watches[lits[0] as usize].push(idx);
                self.watches[lits[1] as usize].push(idx);
                self.clauses.push(lits);
            }
        }
    }

    fn enqueue(&mut self, l: Lit, reason: Option<usize>) -> bool {
        match self.lit_value(l) {
            1 => true,
            -1 => false,
            _ => {
                let v = var(l);
                self.value[v] = if l & 1 == 1 { -1 } else { 1 };
                self.level[v] = self.decision_level();
                self.reason[v] = reason;
                self.trail.push(l);
                true
            }
        }
    }

    fn propagate(&mut self) -> Option<usize> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = negate(p);
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let mut i = 0;
            'clauses: while i < ws.len() {
                let ci = ws[i];
                if self.clauses[ci][0] == false_lit {
                    self.clauses[ci].swap(0, 1);
                }
                let first = self.clauses[ci][0];
                if self.lit_value(first) == 1 {
                    i += 1;
                    continue;
                }
                for j in 2..self.clauses[ci].len() {
                    if self.lit_value(self.clauses[ci][j]) != -1 {
                        self.clauses[ci].swap(1, j);
                        let w = self.clauses[ci][1];
                        self.watches[w as usize].push(ci);
                        ws.swap_remove(i);
                        continue 'clauses;
                    }
                }
                // Unit or conflicting.
                if !self.enqueue(first, Some(ci)) {
                    self.watches[false_lit as usize] = ws;
                    return Some(ci);
                }
                i += 1;
            }
            self.watches[false_lit as usize] = ws;
        }
        None
    }

    fn bump(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.order.bumped(v, &self.activity);
    }

    fn analyze(&mut self, mut confl: usize) -> (Vec<Lit>, u32) {
        let mut learnt: Vec<Lit> = vec![0];
        let mut path = 0usize;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        loop {
            let start = if p.is_none() { 0 } else { 1 };
            for j in start..self.clauses[confl].len() {
                let q = self.clauses[confl][j];
                let v = var(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump(v);
                    if self.level[v] == self.decision_level() {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[var(self.trail[index])] {
                    break;
                }
            }
            let pl = self.trail[index];
            let v = var(pl);
            self.seen[v] = false;
            path -= 1;
            if path == 0 {
                learnt[0] = negate(pl);
                break;
            }
            p = Some(pl);
            confl = self.reason[v].expect("interior node on conflict path has a reason");
        }
        // Cheap self-subsumption: drop literals whose whole reason is seen.
        let keep: Vec<Lit> = learnt[1..]
            .iter()
            .copied()
            .filter(|&l| {
                let v = var(l);
                match self.reason[v] {
                    None => true,
                    Some(r) => !self.clauses[r][1..]
                        .iter()
                        .all(|&q| self.seen[var(q)] || self.level[var(q)] == 0),
                }
            })
            .collect();
        for &l in &learnt[1..] {
            self.seen[var(l)] = false;
        }
        let mut out = vec![learnt[0]];
        out.extend(keep);
        let bt = if out.len() == 1 {
            0
        } else {
            // Move a literal of the highest remaining level to position 1.
            let mut max_i = 1;
            for i in 2..out.len() {
                if self.level[var(out[i])] > self.level[var(out[max_i])] {
                    max_i = i;
                }
            }
            out.swap(1, max_i);
            self.level[var(out[1])]
        };
        (out, bt)
    }

    fn backtrack(&mut self, target: u32) {
        while self.decision_level() > target {
            let lim = self.trail_lim.pop().unwrap();
            for &l in &self.trail[lim..] {
                let v = var(l);
                self.value[v] = 0;
                self.reason[v] = None;
                self.phase[v] = l & 1 == 0;
                self.order.insert(v, &self.activity);
            }
            self.trail.truncate(lim);
        }
        self.qhead = self.trail.len();
    }

    fn learn(&mut self, learnt: Vec<Lit>) {
        let l0 = learnt[0];
        if learnt.len() == 1 {
            self.enqueue(l0, None);
        } else {
            let idx = self.clauses.len();
            self.watches[learnt[0] as usize].push(idx);
            self.watches[learnt[1] as usize].push(idx);
            self.clauses.push(learnt);
            self.enqueue(l0, Some(idx));
        }
    }

    pub fn solve(&mut self) -> SolveResult {
        if !self.ok {
            return SolveResult::Unsat;
        }
        if self.propagate().is_some() {
            self.ok = false;
            return SolveResult::Unsat;
        }
        let mut restart_round = 1u64;
        let mut conflicts_until_restart = luby(restart_round) * 128;
        loop {
            if let Some(confl) = self.propagate() {
                self.conflicts += 1;
                if self.decision_level() == 0 {
                    self.ok = false;
                    return SolveResult::Unsat;
                }
                let (learnt, bt) = self.analyze(confl);
                self.backtrack(bt);
                self.learn(learnt);
                self.var_inc /= 0.95;
                if conflicts_until_restart > 0 {
                    conflicts_until_restart -= 1;
                }
            } else {
                if conflicts_until_restart == 0 {
                    restart_round += 1;
                    conflicts_until_restart = luby(restart_round) * 128;
                    self.backtrack(0);
                }
                // Pick the next decision variable.
                let next = loop {
                    match self.order.pop(&self.activity) {
                        Some(v) if self.value[v] == 0 => break Some(v),
                        Some(_) => continue,
                        None => break None,
                    }
                };
                match next {
                    None => {
                        let model = self.value.iter().map(|&v| v == 1).collect();
                        return SolveResult::Sat(model);
                    }
                    Some(v) => {
                        self.decisions += 1;
                        self.trail_lim.push(self.trail.len());
                        let ok = self.enqueue(lit(v, !self.phase[v]), None);
                        debug_assert!(ok);
                    }
                }
            }
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }
}

/// Reluctant-doubling sequence driving restart intervals.
fn luby(i: u64) -> u64 {
    let mut i = i;
    loop {
        if (i + 1).is_power_of_two() {
            return (i + 1) / 2;
        }
        let k = 63 - (i + 1).leading_zeros() as u64;
        i -= (1u64 << k) - 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve(n: usize, clauses: &[&[i32]]) -> SolveResult {
        let mut s = Solver::new(n);
        for c in clauses {
            s.add_clause(c);
        }
        s.solve()
    }

    fn check_model(clauses: &[&[i32]], model: &[bool]) {
        for c in clauses {
            assert!(
                c.iter()
                    .any(|&l| model[l.unsigned_abs() as usize - 1] == (l > 0)),
                "clause {c:?} unsatisfied"
            );
        }
    }

    #[test]
    fn trivial_cases() {
        assert!(solve(1, &[&[1]]).is_sat());
        assert_eq!(solve(1, &[&[1], &[-1]]), SolveResult::Unsat);
        assert_eq!(solve(2, &[&[1, 2], &[-1], &[-2]]), SolveResult::Unsat);
        let r = solve(3, &[&[1, 2, 3], &[-1, -2], &[-3]]);
        let SolveResult::Sat(m) = r else { panic!() };
        check_model(&[&[1, 2, 3], &[-1, -2], &[-3]], &m);
    }

    fn pigeonhole(holes: usize) -> (usize, Vec<Vec<i32>>) {
        let pigeons = holes + 1;
        let v = |p: usize, h: usize| (p * holes + h + 1) as i32;
        let mut clauses = Vec::new();
        for p in 0..pigeons {
            clauses.push((0..holes).map(|h| v(p, h)).collect::<Vec<_>>());
        }
        for h in 0..holes {
            for p1 in 0..pigeons {
                for p2 in p1 + 1..pigeons {
                    clauses.push(vec![-v(p1, h), -v(p2, h)]);
                }
            }
        }
        (pigeons * holes, clauses)
    }

    #[test]
    fn pigeonhole_unsat() {
        for holes in 2..=5 {
            let (n, clauses) = pigeonhole(holes);
            let refs: Vec<&[i32]> = clauses.iter().map(|c| c.as_slice()).collect();
            assert_eq!(solve(n, &refs), SolveResult::Unsat, "php {holes}");
        }
    }

    #[test]
    fn agrees_with_brute_force_on_random_3sat() {
        // Deterministic LCG; no need for a real RNG here.
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for round in 0..60 {
            let n = 4 + (next() % 9) as usize; // 4..=12 vars
            let m = n * 4 + (next() % 8) as usize;
            let clauses: Vec<Vec<i32>> = (0..m)
                .map(|_| {
                    (0..3)
                        .map(|_| {
                            let v = (next() % n as u64) as i32 + 1;
                            if next() % 2 == 0 {
                                v
                            } else {
                                -v
                            }
                        })
                        .collect()
                })
                .collect();
            let brute = (0..(1u32 << n)).any(|bits| {
                clauses.iter().all(|c| {
                    c.iter()
                        .any(|&l| ((bits >> (l.unsigned_abs() - 1)) & 1 == 1) == (l > 0))
                })
            });
            let refs: Vec<&[i32]> = clauses.iter().map(|c| c.as_slice()).collect();
            let got = solve(n, &refs);
            assert_eq!(got.is_sat(), brute, "round {round}");
            if let SolveResult::Sat(m) = got {
                check_model(&refs, &m);
            }
        }
    }
}
