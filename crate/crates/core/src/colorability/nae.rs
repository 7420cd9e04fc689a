//! Not-all-equal 3-SAT by conflict-driven clause learning.
//!
//! `NAE(a, b, c)` is encoded as the clause pair `(a | b | c)` and
//! `(!a | !b | !c)`. Decisions follow a static order (most constrained
//! variable first) with phase saving. Learnt clauses use the first unique
//! implication point and the solver backjumps non-chronologically.

use crate::budget::{Budget, Outcome};
use crate::error::{Error, Result};

type Lit = u32;

#[inline]
fn lit(var: usize, negated: bool) -> Lit {
    (var as u32) << 1 | negated as u32
}

#[inline]
fn var(l: Lit) -> usize {
    (l >> 1) as usize
}

#[inline]
fn neg(l: Lit) -> Lit {
    l ^ 1
}

const UNASSIGNED: u8 = 2;

struct Solver {
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    /// 0 false, 1 true, 2 unassigned.
    assign: Vec<u8>,
    level: Vec<usize>,
    reason: Vec<Option<usize>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    phase: Vec<bool>,
    order: Vec<usize>,
    seen: Vec<bool>,
}

impl Solver {
    fn new(vars: usize, order: Vec<usize>) -> Self {
        Solver {
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * vars],
            assign: vec![UNASSIGNED; vars],
            level: vec![0; vars],
            reason: vec![None; vars],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            phase: vec![false; vars],
            order,
            seen: vec![false; vars],
        }
    }

    #[inline]
    fn value(&self, l: Lit) -> u8 {
        match self.assign[var(l)] {
            UNASSIGNED => UNASSIGNED,
            a => a ^ (l & 1) as u8,
        }
    }

    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    fn enqueue(&mut self, l: Lit, reason: Option<usize>) {
        let v = var(l);
        self.assign[v] = (l & 1 == 0) as u8;
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Adds a clause at level 0. Returns `false` if the formula became
    /// trivially unsatisfiable.
    fn add_clause(&mut self, mut lits: Vec<Lit>) -> bool {
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] == neg(w[1])) {
            return true;
        }
        match lits.len() {
            0 => false,
            1 => match self.value(lits[0]) {
                0 => false,
                1 => true,
                _ => {
                    self.enqueue(lits[0], None);
                    true
                }
            },
            _ => {
                let idx = self.clauses.len();
                self.watches[neg(lits[0]) as usize].push(idx);
                self.watches[neg(lits[1]) as usize].push(idx);
                self.clauses.push(lits);
                true
            }
        }
    }

    /// Unit propagation. Returns the index of a conflicting clause.
    fn propagate(&mut self) -> Option<usize> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = neg(p);
            let mut ws = std::mem::take(&mut self.watches[p as usize]);
            let mut i = 0;
            let mut conflict = None;
            while i < ws.len() {
                let ci = ws[i];
                if self.clauses[ci][0] == false_lit {
                    self.clauses[ci].swap(0, 1);
                }
                let first = self.clauses[ci][0];
                if self.value(first) == 1 {
                    i += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..self.clauses[ci].len() {
                    let l = self.clauses[ci][k];
                    if self.value(l) != 0 {
                        self.clauses[ci].swap(1, k);
                        self.watches[neg(l) as usize].push(ci);
                        ws.swap_remove(i);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                if self.value(first) == 0 {
                    conflict = Some(ci);
                    break;
                }
                self.enqueue(first, Some(ci));
                i += 1;
            }
            let rest = std::mem::replace(&mut self.watches[p as usize], ws);
            self.watches[p as usize].extend(rest);
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    /// First-UIP conflict analysis. Returns the learnt clause (asserting
    /// literal first) and the backjump level.
    fn analyze(&mut self, mut confl: usize) -> (Vec<Lit>, usize) {
        let current = self.decision_level();
        let mut learnt: Vec<Lit> = vec![0];
        let mut pending = 0usize;
        let mut idx = self.trail.len();
        let mut p: Option<Lit> = None;
        loop {
            let start = if p.is_some() { 1 } else { 0 };
            for j in start..self.clauses[confl].len() {
                let q = self.clauses[confl][j];
                let v = var(q);
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    if self.level[v] >= current {
                        pending += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[var(self.trail[idx])] {
                    break;
                }
            }
            let lit_p = self.trail[idx];
            self.seen[var(lit_p)] = false;
            pending -= 1;
            p = Some(lit_p);
            if pending == 0 {
                break;
            }
            confl = self.reason[var(lit_p)].expect("implied literal has a reason");
        }
        learnt[0] = neg(p.unwrap());
        for l in &learnt[1..] {
            self.seen[var(*l)] = false;
        }
        let mut back = 0;
        if learnt.len() > 1 {
            let mut best = 1;
            for i in 1..learnt.len() {
                if self.level[var(learnt[i])] > self.level[var(learnt[best])] {
                    best = i;
                }
            }
            learnt.swap(1, best);
            back = self.level[var(learnt[1])];
        }
        (learnt, back)
    }

    fn cancel_until(&mut self, level: usize) {
        if self.decision_level() <= level {
            return;
        }
        let keep = self.trail_lim[level];
        for i in keep..self.trail.len() {
            let l = self.trail[i];
            let v = var(l);
            self.phase[v] = l & 1 == 0;
            self.assign[v] = UNASSIGNED;
            self.reason[v] = None;
        }
        self.trail.truncate(keep);
        self.trail_lim.truncate(level);
        self.qhead = keep;
    }

    fn solve(&mut self, budget: &mut Budget) -> Outcome<Vec<bool>> {
        loop {
            if let Some(confl) = self.propagate() {
                if self.decision_level() == 0 {
                    return Outcome::Infeasible;
                }
                if !budget.tick() {
                    return Outcome::Exhausted {
                        nodes: budget.used(),
                    };
                }
                let (learnt, back) = self.analyze(confl);
                self.cancel_until(back);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let idx = self.clauses.len();
                    self.watches[neg(learnt[0]) as usize].push(idx);
                    self.watches[neg(learnt[1]) as usize].push(idx);
                    let first = learnt[0];
                    self.clauses.push(learnt);
                    self.enqueue(first, Some(idx));
                }
                continue;
            }
            let next = self
                .order
                .iter()
                .copied()
                .find(|&v| self.assign[v] == UNASSIGNED);
            let Some(v) = next else {
                return Outcome::Found(self.assign.iter().map(|&a| a == 1).collect());
            };
            if !budget.tick() {
                return Outcome::Exhausted {
                    nodes: budget.used(),
                };
            }
            self.trail_lim.push(self.trail.len());
            self.enqueue(lit(v, !self.phase[v]), None);
        }
    }
}

/// Finds `x: [bool; vars]` such that no triple is constant.
///
/// Variables not occurring in any triple come back `false`. `budget` bounds
/// decisions plus conflicts.
pub fn solve_nae(vars: usize, triples: &[[usize; 3]], budget: &mut Budget) -> Result<Outcome<Vec<bool>>> {
    let mut degree = vec![0usize; vars];
    for t in triples {
        for &v in t {
            if v >= vars {
                return Err(Error::arg(format!("variable {} out of range", v + 1)));
            }
            degree[v] += 1;
        }
    }
    let mut order: Vec<usize> = (0..vars).collect();
    order.sort_by(|&a, &b| degree[b].cmp(&degree[a]).then(a.cmp(&b)));
    let mut solver = Solver::new(vars, order.clone());
    // complementing a solution gives a solution, so one variable may be fixed
    if let Some(&pin) = order.first().filter(|&&v| degree[v] > 0) {
        solver.add_clause(vec![lit(pin, true)]);
    }
    for t in triples {
        let pos = t.iter().map(|&v| lit(v, false)).collect();
        let negs = t.iter().map(|&v| lit(v, true)).collect();
        if !solver.add_clause(pos) || !solver.add_clause(negs) {
            return Ok(Outcome::Infeasible);
        }
    }
    Ok(solver.solve(budget))
}

/// Whether `x` leaves every triple non-constant.
pub fn satisfies(x: &[bool], triples: &[[usize; 3]]) -> bool {
    triples
        .iter()
        .all(|t| !(x[t[0]] == x[t[1]] && x[t[1]] == x[t[2]]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute(vars: usize, triples: &[[usize; 3]]) -> bool {
        (0u32..1 << vars).any(|mask| {
            let x: Vec<bool> = (0..vars).map(|i| mask >> i & 1 == 1).collect();
            satisfies(&x, triples)
        })
    }

    #[test]
    fn single_triple() {
        let mut b = Budget::unlimited();
        let x = solve_nae(3, &[[0, 1, 2]], &mut b).unwrap().found().unwrap();
        assert!(satisfies(&x, &[[0, 1, 2]]));
    }

    #[test]
    fn fano_plane_is_not_two_colorable() {
        let fano = [
            [0, 1, 2],
            [0, 3, 4],
            [0, 5, 6],
            [1, 3, 5],
            [1, 4, 6],
            [2, 3, 6],
            [2, 4, 5],
        ];
        let mut b = Budget::unlimited();
        assert!(solve_nae(7, &fano, &mut b).unwrap().is_infeasible());
    }

    #[test]
    fn agrees_with_brute_force_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for round in 0..400 {
            let vars = rng.gen_range(3..=12);
            let m = rng.gen_range(1..=4 * vars);
            let triples: Vec<[usize; 3]> = (0..m)
                .map(|_| {
                    let mut t = [0; 3];
                    loop {
                        for x in t.iter_mut() {
                            *x = rng.gen_range(0..vars);
                        }
                        if t[0] != t[1] && t[1] != t[2] && t[0] != t[2] {
                            break t;
                        }
                    }
                })
                .collect();
            let mut b = Budget::unlimited();
            let out = solve_nae(vars, &triples, &mut b).unwrap();
            assert_eq!(out.is_found(), brute(vars, &triples), "round {round}");
            if let Outcome::Found(x) = out {
                assert!(satisfies(&x, &triples));
            }
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let fano = [
            [0, 1, 2],
            [0, 3, 4],
            [0, 5, 6],
            [1, 3, 5],
            [1, 4, 6],
            [2, 3, 6],
            [2, 4, 5],
        ];
        let mut b = Budget::new(0);
        assert!(solve_nae(7, &fano, &mut b).unwrap().is_exhausted());
    }
}
