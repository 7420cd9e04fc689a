//! k-partite forcing tournaments: the seeded random construction, the
//! per-completion copy extractor, tuple collections with pairwise agreement
//! at most one, and exhaustive forcing checks.

use std::fmt;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::budget::{Budget, Outcome};
use crate::colorability::{acyclic_k_coloring, Coloring};
use crate::digraph::{
    find_embedding, transitive_subtournament_in, Digraph, Embedding, OrientedGraph, Tournament,
};
use crate::error::{Error, Result};

/// Completions are enumerated only up to this many inner pairs.
pub const MAX_INNER_PAIRS: usize = 20;

/// Orientation of a complete k-partite graph with `k` parts of size `m`.
/// Vertex `a` of part `i` (both 0-based) has index `i * m + a`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KPartiteTournament {
    m: usize,
    k: usize,
    g: OrientedGraph,
}

impl KPartiteTournament {
    /// Builds from a predicate: `forward(i, a, j, b)` for `i < j` says whether
    /// vertex `a` of part `i` beats vertex `b` of part `j`.
    pub fn from_fn(m: usize, k: usize, mut forward: impl FnMut(usize, usize, usize, usize) -> bool) -> Self {
        let mut g = OrientedGraph::new(m * k);
        for i in 0..k {
            for j in (i + 1)..k {
                for a in 0..m {
                    for b in 0..m {
                        let (x, y) = (i * m + a, j * m + b);
                        let e = if forward(i, a, j, b) { (x, y) } else { (y, x) };
                        g.add_edge(e.0, e.1).expect("fresh pair");
                    }
                }
            }
        }
        KPartiteTournament { m, k, g }
    }

    /// Validates that `g` orients exactly the cross pairs.
    pub fn from_oriented(m: usize, k: usize, g: OrientedGraph) -> Result<Self> {
        if g.order() != m * k {
            return Err(Error::arg(format!(
                "expected {} vertices, found {}",
                m * k,
                g.order()
            )));
        }
        for x in 0..m * k {
            for y in (x + 1)..m * k {
                let same = x / m.max(1) == y / m.max(1);
                if same && g.adjacent(x, y) {
                    return Err(Error::arg(format!(
                        "inner edge inside part {}",
                        x / m + 1
                    )));
                }
                if !same && !g.adjacent(x, y) {
                    return Err(Error::arg(format!(
                        "cross pair {}.{} {}.{} is not oriented",
                        x / m + 1,
                        x % m + 1,
                        y / m + 1,
                        y % m + 1
                    )));
                }
            }
        }
        Ok(KPartiteTournament { m, k, g })
    }

    pub fn part_size(&self) -> usize {
        self.m
    }

    pub fn parts(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> usize {
        self.m * self.k
    }

    pub fn vertex(&self, part: usize, a: usize) -> usize {
        part * self.m + a
    }

    pub fn part_of(&self, v: usize) -> usize {
        v / self.m
    }

    pub fn part(&self, i: usize) -> Vec<usize> {
        (i * self.m..(i + 1) * self.m).collect()
    }

    pub fn beats(&self, x: usize, y: usize) -> bool {
        self.g.has_edge(x, y)
    }

    pub fn as_oriented(&self) -> &OrientedGraph {
        &self.g
    }

    /// Whether `x -> y` for all `x` in part `i` and `y` in part `j`.
    pub fn part_dominates(&self, i: usize, j: usize) -> bool {
        self.part(i)
            .iter()
            .all(|&x| self.part(j).iter().all(|&y| self.beats(x, y)))
    }

    /// Unordered pairs inside parts, in lexicographic order.
    pub fn inner_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.k {
            for a in 0..self.m {
                for b in (a + 1)..self.m {
                    out.push((self.vertex(i, a), self.vertex(i, b)));
                }
            }
        }
        out
    }

    /// Whether `t` agrees with every cross edge.
    pub fn is_completed_by(&self, t: &Tournament) -> bool {
        t.order() == self.order()
            && self
                .g
                .edges()
                .into_iter()
                .all(|(x, y)| t.beats(x, y))
    }

    /// The completion whose inner pair number `p` (in [`inner_pairs`] order)
    /// points forward iff bit `p` of `code` is set. Pairs past the 64th point
    /// backward.
    ///
    /// [`inner_pairs`]: KPartiteTournament::inner_pairs
    pub fn completion(&self, code: u64) -> Tournament {
        let pairs = self.inner_pairs();
        self.complete_with(|x, y| {
            let p = pairs.binary_search(&(x, y)).expect("inner pair");
            code.checked_shr(p as u32).unwrap_or(0) & 1 == 1
        })
    }

    /// The completion in which an inner pair `x < y` points `x -> y` iff
    /// `forward(x, y)`.
    pub fn complete_with(&self, mut forward: impl FnMut(usize, usize) -> bool) -> Tournament {
        Tournament::from_fn(self.order(), |x, y| {
            if self.part_of(x) == self.part_of(y) {
                forward(x, y)
            } else {
                self.beats(x, y)
            }
        })
    }
}

impl fmt::Debug for KPartiteTournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KPartite(m={}, k={}, {:?})", self.m, self.k, self.g)
    }
}

/// `gamma(h) = 2^(-h^2) / (8 h^4)` as an exact rational, with a configured
/// minimum part size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForcingParameters {
    pub h: usize,
    pub gamma: BigRational,
    pub m0: usize,
}

impl ForcingParameters {
    pub fn new(h: usize, m0: usize) -> Self {
        ForcingParameters {
            h,
            gamma: gamma(h),
            m0,
        }
    }
}

pub fn gamma(h: usize) -> BigRational {
    let h_big = BigInt::from(h);
    let den = (BigInt::from(1) << (h * h)) * 8 * h_big.pow(4);
    BigRational::new(BigInt::from(1), den)
}

/// Greedy tuple collection in `[t]^k`: scan tuples in lexicographic order
/// and keep each one agreeing with every kept tuple in at most one
/// coordinate. Tuples are 0-based.
pub fn disjoint_tuples(t: usize, k: usize) -> Result<Vec<Vec<usize>>> {
    disjoint_tuples_in(&vec![t; k])
}

/// [`disjoint_tuples`] over the product `[t_1] x .. x [t_k]`.
pub fn disjoint_tuples_in(ranges: &[usize]) -> Result<Vec<Vec<usize>>> {
    let k = ranges.len();
    if k < 2 {
        return Err(Error::arg(
            "tuple collections need k >= 2 (for k = 1 the size bound t^2/k^2 fails)",
        ));
    }
    if ranges.contains(&0) {
        return Ok(Vec::new());
    }
    // used[i][j] holds the value pairs already taken on coordinates (i, j)
    let mut used: Vec<Vec<Vec<bool>>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| vec![false; if i < j { ranges[i] * ranges[j] } else { 0 }])
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = vec![0usize; k];
    tuple_dfs(ranges, 0, &mut cur, &mut used, &mut out);
    Ok(out)
}

/// Returns `true` when a tuple was added below this node, in which case
/// every prefix of length at least 2 on the path is now blocked.
fn tuple_dfs(
    ranges: &[usize],
    d: usize,
    cur: &mut [usize],
    used: &mut [Vec<Vec<bool>>],
    out: &mut Vec<Vec<usize>>,
) -> bool {
    let k = ranges.len();
    if d == k {
        for i in 0..k {
            for j in (i + 1)..k {
                used[i][j][cur[i] * ranges[j] + cur[j]] = true;
            }
        }
        out.push(cur.to_vec());
        return true;
    }
    for x in 0..ranges[d] {
        let free = (0..d).all(|i| !used[i][d][cur[i] * ranges[d] + x]);
        if !free {
            continue;
        }
        cur[d] = x;
        if tuple_dfs(ranges, d + 1, cur, used, out) && d >= 2 {
            // the prefix cur[..d] now contains a taken pair
            return true;
        }
    }
    false
}

/// Whether every two tuples agree in at most one coordinate.
pub fn pairwise_agreement_ok(tuples: &[Vec<usize>]) -> bool {
    tuples.iter().enumerate().all(|(a, s)| {
        tuples[a + 1..]
            .iter()
            .all(|u| s.iter().zip(u).filter(|(x, y)| x == y).count() <= 1)
    })
}

/// Result of [`build_forcing`].
#[derive(Debug, Clone)]
pub struct ForcingBuild {
    pub f: KPartiteTournament,
    /// Part pairs oriented by coin flips.
    pub random_part_pairs: usize,
    /// Coins drawn.
    pub coins: u64,
}

/// Checks a k-coloring of `h` and its compatibility with `d`: classes are
/// nonempty and acyclic and `H_i -> H_j` for every edge `(i, j)` of `d`.
pub fn check_forcing_input(h: &OrientedGraph, coloring: &Coloring, d: &OrientedGraph) -> Result<()> {
    let k = coloring.num_colors();
    if coloring.len() != h.order() {
        return Err(Error::arg("coloring does not cover the pattern"));
    }
    if k < 2 || k > h.order() {
        return Err(Error::arg(format!(
            "need 2 <= k <= h, got k = {k}, h = {}",
            h.order()
        )));
    }
    if d.order() != k {
        return Err(Error::arg(format!(
            "D has {} vertices but the coloring has {k} classes",
            d.order()
        )));
    }
    let classes = coloring.classes();
    for (i, c) in classes.iter().enumerate() {
        if c.is_empty() {
            return Err(Error::arg(format!("class {} is empty", i + 1)));
        }
        if !h.is_acyclic_on(c) {
            return Err(Error::arg(format!("class {} is not acyclic", i + 1)));
        }
    }
    for (i, j) in d.edges() {
        for &x in &classes[i] {
            for &y in &classes[j] {
                if h.has_edge(y, x) {
                    return Err(Error::arg(format!(
                        "D edge {} -> {} violated by pattern edge {} -> {}",
                        i + 1,
                        j + 1,
                        y + 1,
                        x + 1
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Coin stream for the part pair `(i, j)`: independent of every other pair
/// so the result does not depend on evaluation order.
fn pair_rng(seed: u64, i: usize, j: usize, k: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((i * k + j) as u64);
    rng
}

/// The seeded construction: `V_i -> V_j` for every edge of `d`, a fair coin
/// per cross pair elsewhere.
pub fn build_forcing(
    h: &OrientedGraph,
    coloring: &Coloring,
    d: &OrientedGraph,
    m: usize,
    seed: u64,
) -> Result<ForcingBuild> {
    check_forcing_input(h, coloring, d)?;
    if m == 0 {
        return Err(Error::arg("part size must be positive"));
    }
    let k = d.order();
    let mut coins = 0u64;
    let mut random_part_pairs = 0;
    let mut table = vec![Vec::new(); k * k];
    for i in 0..k {
        for j in (i + 1)..k {
            let bits: Vec<bool> = if d.has_edge(i, j) {
                vec![true; m * m]
            } else if d.has_edge(j, i) {
                vec![false; m * m]
            } else {
                random_part_pairs += 1;
                let mut rng = pair_rng(seed, i, j, k);
                coins += (m * m) as u64;
                (0..m * m).map(|_| rng.next_u32() & 1 == 1).collect()
            };
            table[i * k + j] = bits;
        }
    }
    let f = KPartiteTournament::from_fn(m, k, |i, a, j, b| table[i * k + j][a * m + b]);
    Ok(ForcingBuild {
        f,
        random_part_pairs,
        coins,
    })
}

/// Output of [`certify_completion`].
#[derive(Debug, Clone)]
pub struct Certificate {
    /// Transitive blocks per part, each ordered so earlier vertices beat later.
    pub blocks: Vec<Vec<Vec<usize>>>,
    pub tuples: usize,
    pub copies: Vec<Embedding>,
    /// `gamma(h) m^2`, reported for comparison only.
    pub target: BigRational,
}

impl Certificate {
    pub fn meets_target(&self) -> bool {
        BigRational::from_integer(BigInt::from(self.copies.len())) >= self.target
    }
}

/// Forward order of every class: topological, smallest vertex first.
pub fn class_orders(h: &OrientedGraph, coloring: &Coloring) -> Result<Vec<Vec<usize>>> {
    coloring
        .classes()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            h.topological_order(c)
                .ok_or_else(|| Error::arg(format!("class {} is not acyclic", i + 1)))
        })
        .collect()
}

/// Copies of `h` in a completion `t` of `f`, pairwise disjoint on cross
/// edges. Each part is cut into disjoint transitive blocks of the size of
/// its class until no further block can be extracted; a greedy tuple
/// collection picks one block per part, and a tuple yields a copy when the
/// order-preserving placement of each class into its block respects every
/// cross edge.
pub fn certify_completion(
    f: &KPartiteTournament,
    t: &Tournament,
    h: &OrientedGraph,
    coloring: &Coloring,
) -> Result<Certificate> {
    if !f.is_completed_by(t) {
        return Err(Error::arg("tournament is not a completion of F"));
    }
    let k = f.parts();
    if coloring.num_colors() != k {
        return Err(Error::arg(format!(
            "coloring has {} classes but F has {k} parts",
            coloring.num_colors()
        )));
    }
    let orders = class_orders(h, coloring)?;
    let mut blocks = Vec::with_capacity(k);
    for (i, order) in orders.iter().enumerate() {
        let size = order.len();
        let mut remaining = f.part(i);
        let mut part_blocks = Vec::new();
        while remaining.len() >= size {
            let Some(block) = transitive_subtournament_in(t, &remaining, size) else {
                break;
            };
            remaining.retain(|v| !block.contains(v));
            part_blocks.push(block);
        }
        blocks.push(part_blocks);
    }
    let ranges: Vec<usize> = blocks.iter().map(Vec::len).collect();
    let tuples = disjoint_tuples_in(&ranges)?;
    let mut copies = Vec::new();
    let mut map = vec![0usize; h.order()];
    for s in &tuples {
        for (i, order) in orders.iter().enumerate() {
            for (p, &v) in order.iter().enumerate() {
                map[v] = blocks[i][s[i]][p];
            }
        }
        let e = Embedding { map: map.clone() };
        if e.is_valid(t, h) {
            copies.push(e);
        }
    }
    let m = f.part_size();
    let target = gamma(h.order()) * BigRational::from_integer(BigInt::from(m * m));
    Ok(Certificate {
        blocks,
        tuples: tuples.len(),
        copies,
        target,
    })
}

/// Whether two copies share an edge between different parts of `f`.
pub fn share_cross_edge(f: &KPartiteTournament, h: &OrientedGraph, a: &Embedding, b: &Embedding) -> bool {
    let cross = |e: &Embedding| -> Vec<(usize, usize)> {
        e.image_edges(h)
            .into_iter()
            .filter(|&(x, y)| f.part_of(x) != f.part_of(y))
            .collect()
    };
    let ea = cross(a);
    cross(b).iter().any(|p| ea.contains(p))
}

/// A completion of `f` with no copy of `h`, first in completion-code order.
/// Refuses when `f` has more than [`MAX_INNER_PAIRS`] inner pairs.
pub fn forcing_counterexample(f: &KPartiteTournament, h: &OrientedGraph) -> Result<Option<Tournament>> {
    let inner = f.inner_pairs().len();
    if inner > MAX_INNER_PAIRS {
        return Err(Error::arg(format!(
            "{inner} inner pairs exceed the enumeration limit of {MAX_INNER_PAIRS}"
        )));
    }
    let hit = (0u64..1 << inner)
        .into_par_iter()
        .find_first(|&code| find_embedding(&f.completion(code), h).is_none());
    Ok(hit.map(|code| f.completion(code)))
}

/// True iff every completion of `f` contains `h`.
pub fn forces_exhaustive(f: &KPartiteTournament, h: &OrientedGraph) -> Result<bool> {
    Ok(forcing_counterexample(f, h)?.is_none())
}

/// Smallest-part-size bipartite tournament forcing a 2-colorable `h`. For
/// each `m` the `2^(m^2)` cross orientations are tried in code order (bit
/// `a * m + b` set means `a -> b` across). The budget counts completions
/// checked.
pub fn search_min_forcing(h: &OrientedGraph, m_max: usize, budget: &mut Budget) -> Result<Outcome<KPartiteTournament>> {
    if acyclic_k_coloring(h, 2).is_none() {
        return Err(Error::arg("pattern is not 2-colorable; no bipartite tournament forces it"));
    }
    for m in 1..=m_max {
        if 2 * m < h.order() {
            continue;
        }
        let inner = 2 * (m * (m - 1) / 2);
        if inner > MAX_INNER_PAIRS || m * m > 63 {
            return Err(Error::arg(format!(
                "part size {m} exceeds the enumeration limit"
            )));
        }
        for code in 0u64..1 << (m * m) {
            let f = KPartiteTournament::from_fn(m, 2, |_, a, _, b| code >> (a * m + b) & 1 == 1);
            let mut forced = true;
            let mut out_of_budget = false;
            let _ = (0u64..1 << inner).try_for_each(|c| {
                if !budget.tick() {
                    out_of_budget = true;
                    return ControlFlow::Break(());
                }
                if find_embedding(&f.completion(c), h).is_none() {
                    forced = false;
                    return ControlFlow::Break(());
                }
                ControlFlow::Continue(())
            });
            if out_of_budget {
                return Ok(Outcome::Exhausted {
                    nodes: budget.used(),
                });
            }
            if forced {
                return Ok(Outcome::Found(f));
            }
        }
    }
    Ok(Outcome::Infeasible)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn c3_coloring() -> Coloring {
        Coloring::new(vec![0, 0, 1])
    }

    #[test]
    fn gamma_closed_form() {
        assert_eq!(gamma(2), BigRational::new(1.into(), (16 * 8 * 16).into()));
        let g7 = gamma(7);
        assert_eq!(g7.numer(), &BigInt::from(1));
        assert_eq!(g7.denom(), &((BigInt::from(1) << 49) * 8 * 2401));
    }

    #[test]
    fn tuples_small_cases() {
        let s = disjoint_tuples(2, 2).unwrap();
        assert_eq!(s.len(), 4);
        let s = disjoint_tuples(4, 3).unwrap();
        assert!(s.len() >= 2);
        assert!(pairwise_agreement_ok(&s));
        let s = disjoint_tuples(8, 4).unwrap();
        assert!(s.len() >= 4);
        assert!(pairwise_agreement_ok(&s));
        assert!(disjoint_tuples(5, 1).is_err());
    }

    /// Oracle: the plain lexicographic greedy over the full product.
    fn greedy_oracle(ranges: &[usize]) -> Vec<Vec<usize>> {
        let total: usize = ranges.iter().product();
        let mut out: Vec<Vec<usize>> = Vec::new();
        for code in 0..total {
            let mut x = code;
            let mut t = vec![0; ranges.len()];
            for i in (0..ranges.len()).rev() {
                t[i] = x % ranges[i];
                x /= ranges[i];
            }
            if out
                .iter()
                .all(|s| s.iter().zip(&t).filter(|(a, b)| a == b).count() <= 1)
            {
                out.push(t);
            }
        }
        out
    }

    #[test]
    fn pruned_greedy_equals_plain_greedy() {
        for ranges in [vec![3, 3], vec![4, 3, 5], vec![5, 5, 5, 5], vec![2, 6, 3, 4], vec![6, 6, 6]] {
            assert_eq!(disjoint_tuples_in(&ranges).unwrap(), greedy_oracle(&ranges));
        }
    }

    #[test]
    fn build_respects_d_and_consumes_no_coins_when_d_is_complete() {
        let c3 = OrientedGraph::cyclic_triangle();
        // classes {1}, {2}, {3} admit no complete D, so use a path pattern
        let p = OrientedGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let col = Coloring::new(vec![0, 1, 2]);
        let d = crate::digraph::Tournament::transitive(3).into_oriented();
        let b = build_forcing(&p, &col, &d, 3, 1).unwrap();
        assert_eq!(b.coins, 0);
        assert!(b.f.part_dominates(0, 1) && b.f.part_dominates(1, 2) && b.f.part_dominates(0, 2));
        // a violated D edge is reported
        let bad = OrientedGraph::from_edges(2, [(1, 0)]).unwrap();
        assert!(build_forcing(&c3, &c3_coloring(), &bad, 2, 0).is_err());
        // an improper coloring is refused
        assert!(build_forcing(&c3, &Coloring::new(vec![0, 0, 0]), &OrientedGraph::new(1), 2, 0).is_err());
    }

    #[test]
    fn build_is_reproducible_and_seed_sensitive() {
        let c3 = OrientedGraph::cyclic_triangle();
        let d = OrientedGraph::new(2);
        let a = build_forcing(&c3, &c3_coloring(), &d, 4, 9).unwrap();
        let b = build_forcing(&c3, &c3_coloring(), &d, 4, 9).unwrap();
        assert_eq!(a.f, b.f);
        assert_eq!(a.coins, 16);
        let differing = (0..100u64)
            .filter(|&s| build_forcing(&c3, &c3_coloring(), &d, 4, s).unwrap().f != a.f)
            .count();
        assert!(differing >= 99);
    }

    fn four_cycle() -> KPartiteTournament {
        // a1 -> b1 -> a2 -> b2 -> a1
        KPartiteTournament::from_fn(2, 2, |_, a, _, b| a == b)
    }

    #[test]
    fn four_cycle_forces_cyclic_triangle() {
        let f = four_cycle();
        let c3 = OrientedGraph::cyclic_triangle();
        assert!(forces_exhaustive(&f, &c3).unwrap());
        let one_way = KPartiteTournament::from_fn(2, 2, |_, _, _, _| true);
        assert!(!forces_exhaustive(&one_way, &c3).unwrap());
    }

    #[test]
    fn certify_every_completion_of_the_four_cycle() {
        let f = four_cycle();
        let c3 = OrientedGraph::cyclic_triangle();
        for code in 0..4 {
            let t = f.completion(code);
            let cert = certify_completion(&f, &t, &c3, &c3_coloring()).unwrap();
            assert!(!cert.copies.is_empty(), "completion {code}");
            for e in &cert.copies {
                assert!(e.is_valid(&t, &c3));
            }
        }
    }

    #[test]
    fn certify_rejects_non_completion() {
        let f = four_cycle();
        let mut t = f.completion(0);
        t.flip(0, 2);
        let c3 = OrientedGraph::cyclic_triangle();
        assert!(certify_completion(&f, &t, &c3, &c3_coloring()).is_err());
    }

    #[test]
    fn certified_copies_are_cross_edge_disjoint() {
        let c3 = OrientedGraph::cyclic_triangle();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let build = build_forcing(&c3, &c3_coloring(), &OrientedGraph::new(2), 24, 77).unwrap();
        for _ in 0..5 {
            let t = build.f.complete_with(|_, _| rng.gen());
            let cert = certify_completion(&build.f, &t, &c3, &c3_coloring()).unwrap();
            assert!(!cert.copies.is_empty());
            for (i, a) in cert.copies.iter().enumerate() {
                assert!(a.is_valid(&t, &c3));
                for b in &cert.copies[i + 1..] {
                    assert!(!share_cross_edge(&build.f, &c3, a, b));
                }
            }
        }
    }

    /// Independent oracle: brute-force every completion via a fresh
    /// tournament built pair by pair.
    fn forces_oracle(f: &KPartiteTournament, h: &OrientedGraph) -> bool {
        let n = f.order();
        let inner: Vec<(usize, usize)> = (0..n)
            .flat_map(|x| ((x + 1)..n).map(move |y| (x, y)))
            .filter(|&(x, y)| f.part_of(x) == f.part_of(y))
            .collect();
        (0u64..1 << inner.len()).all(|code| {
            let t = Tournament::from_fn(n, |x, y| {
                if f.part_of(x) != f.part_of(y) {
                    f.beats(x, y)
                } else {
                    let p = inner.iter().position(|&q| q == (x, y)).unwrap();
                    code >> p & 1 == 1
                }
            });
            crate::digraph::count_embeddings(&t, h) > 0
        })
    }

    #[test]
    fn forcing_check_matches_oracle_on_random_bipartite_tournaments() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let patterns = [
            OrientedGraph::cyclic_triangle(),
            Tournament::transitive(3).into_oriented(),
            OrientedGraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap(),
        ];
        for _ in 0..30 {
            let m = rng.gen_range(2..=3);
            let f = KPartiteTournament::from_fn(m, 2, |_, _, _, _| rng.gen());
            for p in &patterns {
                assert_eq!(forces_exhaustive(&f, p).unwrap(), forces_oracle(&f, p));
            }
        }
    }

    #[test]
    fn minimum_forcing_sizes() {
        let c3 = OrientedGraph::cyclic_triangle();
        let f = search_min_forcing(&c3, 3, &mut Budget::unlimited())
            .unwrap()
            .found()
            .unwrap();
        assert_eq!(f.part_size(), 2);
        assert!(forces_exhaustive(&f, &c3).unwrap());
        let edge = OrientedGraph::from_edges(2, [(0, 1)]).unwrap();
        let f = search_min_forcing(&edge, 3, &mut Budget::unlimited())
            .unwrap()
            .found()
            .unwrap();
        assert_eq!(f.part_size(), 1);
        let tt3 = Tournament::transitive(3).into_oriented();
        let f = search_min_forcing(&tt3, 3, &mut Budget::unlimited())
            .unwrap()
            .found()
            .unwrap();
        assert!(forces_exhaustive(&f, &tt3).unwrap());
        assert_eq!(f.part_size(), 2);
    }

    #[test]
    fn refuses_large_enumerations_and_hard_patterns() {
        let f = KPartiteTournament::from_fn(4, 4, |_, _, _, _| true);
        assert!(forces_exhaustive(&f, &OrientedGraph::cyclic_triangle()).is_err());
        let hard = crate::colorability::smallest_non_two_colorable().as_oriented().clone();
        assert!(search_min_forcing(&hard, 2, &mut Budget::unlimited()).is_err());
    }
}
