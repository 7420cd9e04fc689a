//! Hard instances for non-2-colorable patterns: Behrend sets, graphs built
//! from edge-disjoint transversal cliques, the blow-up tournament and its
//! audits.

mod blowup;

use std::collections::{HashMap, HashSet};

use crate::digraph::Rational;
use crate::error::{Error, Result};

pub use blowup::{
    assemble_blowup, audit_blowup, audit_copy_localization, blowup_tournament, farness_certificate,
    hard_pattern, BlowupAudit, BlowupTournament, FarnessCertificate, HardPattern, LocalizationReport,
};

/// Subset of `1..=n_max` without three-term arithmetic progressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BehrendSet {
    pub n_max: usize,
    pub members: Vec<usize>,
    /// Digits range over `0..digits` in base `2 digits - 1`.
    pub digits: usize,
    pub dimension: usize,
    /// Common squared norm of the digit vectors; `None` when every norm is
    /// kept (only safe for binary digits).
    pub radius: Option<usize>,
}

/// No `a < b < c` in `set` with `a + c = 2b`.
pub fn is_ap_free(set: &[usize]) -> bool {
    let members: HashSet<usize> = set.iter().copied().collect();
    for (i, &a) in set.iter().enumerate() {
        for &c in &set[i + 1..] {
            if a != c && (a + c) % 2 == 0 && members.contains(&((a + c) / 2)) {
                return false;
            }
        }
    }
    true
}

/// Digit vectors of values `< limit` in base `2d - 1` with digits `< d`,
/// as `(value, squared norm)`.
fn digit_vectors(d: usize, dim: usize, limit: usize) -> Vec<(usize, usize)> {
    let base = 2 * d - 1;
    let mut out = Vec::new();
    fn go(d: usize, base: usize, pos: usize, value: usize, norm: usize, place: usize, limit: usize, out: &mut Vec<(usize, usize)>) {
        if value >= limit {
            return;
        }
        if pos == 0 {
            out.push((value, norm));
            return;
        }
        let place_lo = place / base;
        for digit in 0..d {
            let v = value + digit * place_lo;
            if v >= limit {
                break;
            }
            go(d, base, pos - 1, v, norm + digit * digit, place_lo, limit, out);
        }
    }
    let top = base.checked_pow(dim as u32).unwrap_or(usize::MAX);
    go(d, base, dim, 0, 0, top, limit, &mut out);
    out
}

/// Sphere construction: integers whose base-`(2d-1)` digits are below `d`
/// and whose digit vectors share one squared norm, shifted into
/// `1..=n_max`. Binary digits need no norm condition. The parameter triple
/// with the largest output wins (ties: smaller `d`, dimension, radius).
pub fn behrend(n_max: usize) -> Result<BehrendSet> {
    if n_max == 0 {
        return Err(Error::arg("n_max must be at least 1"));
    }
    let mut best = BehrendSet {
        n_max,
        members: vec![1],
        digits: 2,
        dimension: 1,
        radius: Some(0),
    };
    for d in 2..=n_max.max(2) {
        let base = 2 * d - 1;
        let mut dim = 1;
        loop {
            let vectors = digit_vectors(d, dim, n_max);
            let candidate = if d == 2 {
                Some((vectors.len(), None))
            } else {
                let mut by_norm: HashMap<usize, usize> = HashMap::new();
                for &(_, r) in &vectors {
                    *by_norm.entry(r).or_default() += 1;
                }
                by_norm
                    .into_iter()
                    .max_by_key(|&(r, c)| (c, std::cmp::Reverse(r)))
                    .map(|(r, c)| (c, Some(r)))
            };
            if let Some((size, radius)) = candidate {
                if size > best.members.len() {
                    let mut members: Vec<usize> = vectors
                        .iter()
                        .filter(|&&(_, r)| radius.is_none_or(|x| x == r))
                        .map(|&(v, _)| v + 1)
                        .collect();
                    members.sort_unstable();
                    best = BehrendSet {
                        n_max,
                        members,
                        digits: d,
                        dimension: dim,
                        radius,
                    };
                }
            }
            match base.checked_pow(dim as u32) {
                Some(p) if p < n_max => dim += 1,
                _ => break,
            }
        }
    }
    if !is_ap_free(&best.members) {
        return Err(Error::Invariant("sphere construction produced a 3-term progression".into()));
    }
    Ok(best)
}

/// Graph on parts `X_1..X_k` whose edges are the union of edge-disjoint
/// transversal `k`-cliques `{a + (i-1) d : i}` for every start `a` and every
/// difference `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsGraph {
    k: usize,
    part_len: usize,
    n_max: usize,
    differences: Vec<usize>,
    cliques: Vec<Vec<usize>>,
    adj: Vec<HashSet<usize>>,
    /// Part indices of the cycle pattern, 0-based.
    cycle: Vec<usize>,
}

fn check_pattern(k: usize, cycle: &[usize]) -> Result<()> {
    if k < 3 {
        return Err(Error::arg(format!("need k >= 3, got {k}")));
    }
    let l = cycle.len();
    if l < 3 || l > k {
        return Err(Error::arg(format!("cycle pattern length {l} must lie in 3..={k}")));
    }
    let mut seen = vec![false; k];
    for &i in cycle {
        if i >= k || seen[i] {
            return Err(Error::arg("cycle pattern needs distinct part indices in range"));
        }
        seen[i] = true;
    }
    Ok(())
}

/// [`RsGraph`] with Behrend differences in `1..=n_max` and starts `0..n_max`.
pub fn rs_graph(k: usize, cycle: &[usize], n_max: usize) -> Result<RsGraph> {
    let set = behrend(n_max)?;
    rs_graph_from_differences(k, cycle, n_max, &set.members)
}

/// [`RsGraph`] with the given differences; an empty list gives an edgeless
/// graph on parts of length `n_max`.
pub fn rs_graph_from_differences(k: usize, cycle: &[usize], n_max: usize, differences: &[usize]) -> Result<RsGraph> {
    check_pattern(k, cycle)?;
    if n_max == 0 {
        return Err(Error::arg("n_max must be at least 1"));
    }
    if differences.contains(&0) {
        return Err(Error::arg("differences must be positive"));
    }
    let max_d = differences.iter().copied().max().unwrap_or(0);
    let part_len = n_max + (k - 1) * max_d;
    let mut cliques = Vec::new();
    let mut adj = vec![HashSet::new(); k * part_len];
    for a in 0..n_max {
        for &d in differences {
            let clique: Vec<usize> = (0..k).map(|i| i * part_len + a + i * d).collect();
            for (x, &u) in clique.iter().enumerate() {
                for &v in &clique[x + 1..] {
                    adj[u].insert(v);
                    adj[v].insert(u);
                }
            }
            cliques.push(clique);
        }
    }
    Ok(RsGraph {
        k,
        part_len,
        n_max,
        differences: differences.to_vec(),
        cliques,
        adj,
        cycle: cycle.to_vec(),
    })
}

impl RsGraph {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> usize {
        self.k * self.part_len
    }

    pub fn part_len(&self) -> usize {
        self.part_len
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn differences(&self) -> &[usize] {
        &self.differences
    }

    pub fn part_of(&self, x: usize) -> usize {
        x / self.part_len
    }

    pub fn part(&self, i: usize) -> std::ops::Range<usize> {
        i * self.part_len..(i + 1) * self.part_len
    }

    pub fn cliques(&self) -> &[Vec<usize>] {
        &self.cliques
    }

    pub fn cycle(&self) -> &[usize] {
        &self.cycle
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.adj[x].contains(&y)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(HashSet::len).sum::<usize>() / 2
    }

    /// `|cliques| / |V|^2`.
    pub fn delta(&self) -> Rational {
        Rational::new(self.cliques.len() as i64, (self.order() * self.order()) as i64)
    }

    /// Sequences `x_{i_1} .. x_{i_l}` with `x_{i_j} ∈ X_{i_j}` forming a
    /// closed walk through the pattern, counted by exhaustive search.
    pub fn patterned_cycles(&self) -> u64 {
        let l = self.cycle.len();
        let mut count = 0u64;
        let mut path = Vec::with_capacity(l);
        fn go(g: &RsGraph, path: &mut Vec<usize>, count: &mut u64) {
            let l = g.cycle.len();
            let last = *path.last().unwrap();
            if path.len() == l {
                if g.has_edge(last, path[0]) {
                    *count += 1;
                }
                return;
            }
            let want = g.cycle[path.len()];
            let mut next: Vec<usize> = g.adj[last].iter().copied().filter(|&y| g.part_of(y) == want).collect();
            next.sort_unstable();
            for y in next {
                path.push(y);
                go(g, path, count);
                path.pop();
            }
        }
        for x in self.part(self.cycle[0]) {
            if l > 0 {
                path.clear();
                path.push(x);
                go(self, &mut path, &mut count);
            }
        }
        count
    }
}

/// Exact structural audit of an [`RsGraph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsAudit {
    pub order: usize,
    pub cliques: usize,
    pub edges: usize,
    pub independent_parts: bool,
    pub transversal: bool,
    pub edge_disjoint: bool,
    pub union_matches: bool,
    pub delta: Rational,
    pub patterned_cycles: u64,
    /// `|V|^2`.
    pub cycle_bound: u64,
}

impl RsAudit {
    pub fn structure_ok(&self) -> bool {
        self.independent_parts && self.transversal && self.edge_disjoint && self.union_matches
    }

    pub fn cycles_ok(&self) -> bool {
        self.patterned_cycles <= self.cycle_bound
    }
}

pub fn audit_rs(g: &RsGraph) -> RsAudit {
    let n = g.order();
    let independent_parts = (0..n).all(|x| g.adj[x].iter().all(|&y| g.part_of(y) != g.part_of(x)));
    let transversal = g
        .cliques
        .iter()
        .all(|c| c.len() == g.k && c.iter().enumerate().all(|(i, &x)| g.part_of(x) == i));
    let mut edge_disjoint = true;
    for (a, c) in g.cliques.iter().enumerate() {
        for d in &g.cliques[a + 1..] {
            if c.iter().filter(|x| d.contains(x)).count() >= 2 {
                edge_disjoint = false;
            }
        }
    }
    let mut union = HashSet::new();
    for c in &g.cliques {
        for (i, &u) in c.iter().enumerate() {
            for &v in &c[i + 1..] {
                union.insert((u.min(v), u.max(v)));
            }
        }
    }
    let actual: HashSet<(usize, usize)> = (0..n)
        .flat_map(|x| g.adj[x].iter().filter(move |&&y| y > x).map(move |&y| (x, y)))
        .collect();
    RsAudit {
        order: n,
        cliques: g.cliques.len(),
        edges: actual.len(),
        independent_parts,
        transversal,
        edge_disjoint,
        union_matches: union == actual,
        delta: g.delta(),
        patterned_cycles: g.patterned_cycles(),
        cycle_bound: (n * n) as u64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Largest AP-free subset of `1..=n` by branch and bound.
    fn max_ap_free(n: usize) -> usize {
        fn go(x: usize, n: usize, chosen: &mut Vec<usize>, best: &mut usize) {
            if chosen.len() + (n + 1 - x) <= *best {
                return;
            }
            if x > n {
                *best = chosen.len();
                return;
            }
            let ok = chosen.iter().all(|&b| 2 * b < x || !chosen.contains(&(2 * b - x)));
            if ok {
                chosen.push(x);
                go(x + 1, n, chosen, best);
                chosen.pop();
            }
            go(x + 1, n, chosen, best);
        }
        let mut best = 0;
        go(1, n, &mut Vec::new(), &mut best);
        best
    }

    /// Oracle: every triple checked directly.
    fn ap_free_cubic(s: &[usize]) -> bool {
        for &a in s {
            for &b in s {
                for &c in s {
                    if a < b && b < c && a + c == 2 * b {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn small_behrend_sets() {
        assert_eq!(behrend(1).unwrap().members, vec![1]);
        let s = behrend(5).unwrap();
        assert!(ap_free_cubic(&s.members));
        assert_eq!(s.members, vec![1, 2, 4, 5]);
        assert!(is_ap_free(&[1, 2, 4, 5]));
        assert!(!is_ap_free(&[1, 3, 5]));
    }

    #[test]
    fn behrend_is_within_factor_two_up_to_thirty() {
        for n in 1..=30 {
            let s = behrend(n).unwrap();
            assert!(ap_free_cubic(&s.members));
            assert!(s.members.iter().all(|&x| (1..=n).contains(&x)));
            assert!(2 * s.members.len() >= max_ap_free(n), "n = {n}");
        }
    }

    #[test]
    fn larger_behrend_sets_stay_ap_free() {
        for n in [100, 500, 2000] {
            let s = behrend(n).unwrap();
            assert!(ap_free_cubic(&s.members) || is_ap_free(&s.members));
            assert!(s.members.len() >= 10);
        }
    }

    #[test]
    fn triangle_family_is_edge_disjoint() {
        let g = rs_graph(3, &[0, 1, 2], 6).unwrap();
        let a = audit_rs(&g);
        assert!(a.structure_ok());
        assert_eq!(a.edges, 3 * a.cliques);
        assert!(a.cycles_ok());
    }

    #[test]
    fn patterned_cycles_match_brute_force() {
        let g = rs_graph(4, &[0, 2, 1], 5).unwrap();
        let parts: Vec<Vec<usize>> = g.cycle().iter().map(|&i| g.part(i).collect()).collect();
        let mut brute = 0;
        for &x in &parts[0] {
            for &y in &parts[1] {
                for &z in &parts[2] {
                    if g.has_edge(x, y) && g.has_edge(y, z) && g.has_edge(z, x) {
                        brute += 1;
                    }
                }
            }
        }
        assert_eq!(g.patterned_cycles(), brute);
        assert!(brute >= g.cliques().len() as u64);
    }

    #[test]
    fn rs_audits_across_parameters() {
        for k in 3..=5 {
            for n_max in [1, 4, 9, 20] {
                let cycle: Vec<usize> = (0..k).collect();
                let a = audit_rs(&rs_graph(k, &cycle, n_max).unwrap());
                assert!(a.structure_ok() && a.cycles_ok(), "k {k} n_max {n_max}: {a:?}");
            }
        }
    }

    #[test]
    fn bad_patterns_are_rejected() {
        assert!(rs_graph(3, &[0, 1], 4).is_err());
        assert!(rs_graph(3, &[0, 1, 1], 4).is_err());
        assert!(rs_graph(2, &[0, 1], 4).is_err());
        assert!(rs_graph(3, &[0, 1, 3], 4).is_err());
    }

    #[test]
    fn empty_difference_list_gives_edgeless_graph() {
        let g = rs_graph_from_differences(3, &[0, 1, 2], 4, &[]).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.patterned_cycles(), 0);
    }
}
