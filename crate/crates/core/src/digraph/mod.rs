//! Oriented graphs, tournaments and the kernels shared by every other module:
//! pair densities, embedding enumeration, reversal distance and transitive
//! subtournament extraction.
//!
//! Vertices are `0..n` internally. Text formats and reports use `1..=n`.

mod distance;
mod embed;

pub use distance::{distance_to_h_free, Distance};
pub use embed::{
    automorphism_count, copy_count, count_embeddings, find_embedding, for_each_embedding,
    CopyCount, Embedding,
};

use std::fmt;
use std::ops::ControlFlow;

use num_rational::Ratio;
use rand::Rng;

use crate::bits::{self, BitMatrix};
use crate::error::{Error, Result};

/// Exact rational used for every density, weight and threshold.
pub type Rational = Ratio<i64>;

/// Read-only adjacency interface shared by oriented graphs and tournaments.
pub trait Digraph {
    fn order(&self) -> usize;
    fn has_edge(&self, u: usize, v: usize) -> bool;
    /// Bit row of out-neighbours of `u`.
    fn out_row(&self, u: usize) -> &[u64];
    /// Bit row of in-neighbours of `u`.
    fn in_row(&self, u: usize) -> &[u64];
}

/// A digraph with at most one edge per vertex pair and no loops.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrientedGraph {
    n: usize,
    out: BitMatrix,
    inn: BitMatrix,
    edge_count: usize,
}

impl OrientedGraph {
    pub fn new(n: usize) -> Self {
        OrientedGraph {
            n,
            out: BitMatrix::new(n),
            inn: BitMatrix::new(n),
            edge_count: 0,
        }
    }

    /// Builds a graph from 0-based ordered pairs `(u, v)` meaning `u -> v`.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = OrientedGraph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::arg(format!(
                "edge ({}, {}) out of range for {} vertices",
                u + 1,
                v + 1,
                self.n
            )));
        }
        if u == v {
            return Err(Error::arg(format!("self-loop at vertex {}", u + 1)));
        }
        if self.out.get(v, u) {
            return Err(Error::arg(format!(
                "both ({}, {}) and ({}, {}) present",
                u + 1,
                v + 1,
                v + 1,
                u + 1
            )));
        }
        if !self.out.get(u, v) {
            self.out.put(u, v, true);
            self.inn.put(v, u, true);
            self.edge_count += 1;
        }
        Ok(())
    }

    /// Flips `u -> v` into `v -> u`. Panics if `u -> v` is absent.
    pub fn reverse_edge(&mut self, u: usize, v: usize) {
        assert!(self.out.get(u, v), "no edge {} -> {}", u + 1, v + 1);
        self.out.put(u, v, false);
        self.inn.put(v, u, false);
        self.out.put(v, u, true);
        self.inn.put(u, v, true);
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.out.get(u, v) || self.out.get(v, u)
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e = Vec::with_capacity(self.edge_count);
        for u in 0..self.n {
            e.extend(bits::ones(self.out.row(u)).map(|v| (u, v)));
        }
        e
    }

    pub fn out_degree(&self, u: usize) -> usize {
        bits::count(self.out.row(u))
    }

    /// Induced subgraph on `vertices`; vertex `vertices[i]` becomes `i`.
    pub fn induced(&self, vertices: &[usize]) -> OrientedGraph {
        let mut g = OrientedGraph::new(vertices.len());
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate() {
                if self.out.get(a, b) {
                    g.out.put(i, j, true);
                    g.inn.put(j, i, true);
                    g.edge_count += 1;
                }
            }
        }
        g
    }

    /// Relabels by `perm`: vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> OrientedGraph {
        let mut g = OrientedGraph::new(self.n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]).expect("permutation preserves validity");
        }
        g
    }

    /// Topological order of the subgraph induced by `vertices`, taking the
    /// smallest available vertex first. `None` when that subgraph has a cycle.
    pub fn topological_order(&self, vertices: &[usize]) -> Option<Vec<usize>> {
        let mut sorted: Vec<usize> = vertices.to_vec();
        sorted.sort_unstable();
        let member = bits::row_from(self.n, sorted.iter().copied());
        let mut indeg: Vec<usize> = sorted
            .iter()
            .map(|&v| bits::count_and(self.inn.row(v), &member))
            .collect();
        let mut done = vec![false; sorted.len()];
        let mut order = Vec::with_capacity(sorted.len());
        for _ in 0..sorted.len() {
            let next = (0..sorted.len()).find(|&i| !done[i] && indeg[i] == 0)?;
            done[next] = true;
            let v = sorted[next];
            order.push(v);
            for (i, &w) in sorted.iter().enumerate() {
                if !done[i] && self.out.get(v, w) {
                    indeg[i] -= 1;
                }
            }
        }
        Some(order)
    }

    pub fn is_acyclic_on(&self, vertices: &[usize]) -> bool {
        self.topological_order(vertices).is_some()
    }

    pub fn is_acyclic(&self) -> bool {
        let all: Vec<usize> = (0..self.n).collect();
        self.is_acyclic_on(&all)
    }

    /// The directed 3-cycle `1 -> 2 -> 3 -> 1`.
    pub fn cyclic_triangle() -> OrientedGraph {
        OrientedGraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }
}

impl Digraph for OrientedGraph {
    fn order(&self) -> usize {
        self.n
    }
    #[inline]
    fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out.get(u, v)
    }
    #[inline]
    fn out_row(&self, u: usize) -> &[u64] {
        self.out.row(u)
    }
    #[inline]
    fn in_row(&self, u: usize) -> &[u64] {
        self.inn.row(u)
    }
}

impl fmt::Debug for OrientedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges()
            .iter()
            .map(|(u, v)| format!("{}->{}", u + 1, v + 1))
            .collect();
        write!(f, "OrientedGraph({}; {})", self.n, edges.join(" "))
    }
}

/// A complete orientation: exactly one direction per vertex pair.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tournament {
    g: OrientedGraph,
}

impl Tournament {
    /// Builds a tournament from a predicate on pairs `i < j`; `true` means `i -> j`.
    pub fn from_fn(n: usize, mut forward: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = OrientedGraph::new(n);
        for i in 0..n {
            for j in (i + 1)..n {
                let (u, v) = if forward(i, j) { (i, j) } else { (j, i) };
                g.out.put(u, v, true);
                g.inn.put(v, u, true);
            }
        }
        g.edge_count = n * n.saturating_sub(1) / 2;
        Tournament { g }
    }

    /// The transitive tournament with `i -> j` for all `i < j`.
    pub fn transitive(n: usize) -> Self {
        Tournament::from_fn(n, |_, _| true)
    }

    pub fn cyclic_triangle() -> Self {
        Tournament::from_fn(3, |i, j| !(i == 0 && j == 2))
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Tournament::from_fn(n, |_, _| rng.gen::<bool>())
    }

    /// The labeled tournament on `n` vertices encoded by the bits of `code`,
    /// one bit per pair `i < j` in lexicographic order. Pairs past bit 63
    /// read as zero.
    pub fn from_code(n: usize, code: u64) -> Self {
        let mut bit = 0u32;
        Tournament::from_fn(n, |_, _| {
            let b = code.checked_shr(bit).unwrap_or(0) & 1 == 1;
            bit += 1;
            b
        })
    }

    pub fn from_oriented(g: OrientedGraph) -> Result<Self> {
        let n = g.n;
        for i in 0..n {
            for j in (i + 1)..n {
                if !g.adjacent(i, j) {
                    return Err(Error::arg(format!(
                        "not a tournament: pair {{{}, {}}} has no edge",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Tournament { g })
    }

    pub fn as_oriented(&self) -> &OrientedGraph {
        &self.g
    }

    pub fn into_oriented(self) -> OrientedGraph {
        self.g
    }

    #[inline]
    pub fn beats(&self, u: usize, v: usize) -> bool {
        self.g.out.get(u, v)
    }

    /// Sets the direction of the pair `{u, v}` to `u -> v`.
    pub fn orient(&mut self, u: usize, v: usize) {
        if !self.g.out.get(u, v) {
            self.g.reverse_edge(v, u);
        }
    }

    /// Reverses the pair `{u, v}` whatever its current direction.
    pub fn flip(&mut self, u: usize, v: usize) {
        if self.g.out.get(u, v) {
            self.g.reverse_edge(u, v);
        } else {
            self.g.reverse_edge(v, u);
        }
    }

    pub fn subtournament(&self, vertices: &[usize]) -> Tournament {
        Tournament {
            g: self.g.induced(vertices),
        }
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.g.out_degree(u)
    }

    /// Zero-diagonal adjacency matrix, `a[i][j] = 1` iff `i -> j`.
    pub fn adjacency(&self) -> Vec<Vec<u8>> {
        (0..self.g.n)
            .map(|i| (0..self.g.n).map(|j| self.beats(i, j) as u8).collect())
            .collect()
    }

    /// A tournament is transitive iff its score sequence is `0, 1, .., n-1`.
    pub fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.g.n];
        for u in 0..self.g.n {
            let d = self.out_degree(u);
            if seen[d] {
                return false;
            }
            seen[d] = true;
        }
        true
    }

    /// Whether `vertices` induces a transitive subtournament, in any order.
    pub fn is_transitive_on(&self, vertices: &[usize]) -> bool {
        let member = bits::row_from(self.g.n, vertices.iter().copied());
        let mut seen = vec![false; vertices.len()];
        for &u in vertices {
            let d = bits::count_and(self.g.out_row(u), &member);
            if seen[d] {
                return false;
            }
            seen[d] = true;
        }
        true
    }

    /// Whether every earlier vertex of `seq` beats every later one.
    pub fn is_transitive_sequence(&self, seq: &[usize]) -> bool {
        seq.iter()
            .enumerate()
            .all(|(i, &a)| seq[i + 1..].iter().all(|&b| self.beats(a, b)))
    }

    /// Cyclic triangles `(a, b, c)` with `a -> b -> c -> a` and `a` the
    /// smallest vertex, in lexicographic order.
    pub fn cyclic_triangles(&self) -> Vec<[usize; 3]> {
        let n = self.g.n;
        let mut out = Vec::new();
        let mut scratch = vec![0u64; bits::words_for(n)];
        for a in 0..n {
            for b in bits::ones(self.g.out_row(a)) {
                if b < a {
                    continue;
                }
                for (s, (x, y)) in scratch
                    .iter_mut()
                    .zip(self.g.out_row(b).iter().zip(self.g.in_row(a)))
                {
                    *s = x & y;
                }
                for c in bits::ones(&scratch) {
                    if c > a {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}

impl Digraph for Tournament {
    fn order(&self) -> usize {
        self.g.n
    }
    #[inline]
    fn has_edge(&self, u: usize, v: usize) -> bool {
        self.g.out.get(u, v)
    }
    #[inline]
    fn out_row(&self, u: usize) -> &[u64] {
        self.g.out.row(u)
    }
    #[inline]
    fn in_row(&self, u: usize) -> &[u64] {
        self.g.inn.row(u)
    }
}

impl fmt::Debug for Tournament {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tournament({:?})", self.g)
    }
}

/// Dominant direction of an ordered pair of vertex sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `X -> Y` dominates: `d(X, Y) >= 1/2`.
    Forward,
    /// `Y -> X` dominates: `d(X, Y) < 1/2`.
    Backward,
}

/// Exact statistics of the ordered pair `(X, Y)` in a tournament.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairStats {
    /// Number of edges from `X` to `Y`.
    pub e_xy: u64,
    /// `|X| * |Y|`.
    pub size: u64,
    pub density: Rational,
    pub dominant: Direction,
    /// `|X| |Y| / n^2`.
    pub weight: Rational,
}

impl PairStats {
    /// `d(X, Y) >= 1 - delta` or `d(X, Y) <= delta`.
    pub fn is_homogeneous(&self, delta: Rational) -> bool {
        self.density >= Rational::from_integer(1) - delta || self.density <= delta
    }
}

/// Density statistics `d(X, Y) = e(X, Y) / (|X| |Y|)`.
pub fn density(t: &Tournament, x: &[usize], y: &[usize]) -> Result<PairStats> {
    let n = t.order();
    if x.is_empty() || y.is_empty() {
        return Err(Error::arg("density needs nonempty vertex sets"));
    }
    let xs = checked_set(n, x)?;
    let ys = checked_set(n, y)?;
    if bits::count_and(&xs, &ys) > 0 {
        return Err(Error::arg("density needs disjoint vertex sets"));
    }
    let e_xy: u64 = x
        .iter()
        .map(|&u| bits::count_and(t.out_row(u), &ys) as u64)
        .sum();
    let size = (x.len() * y.len()) as u64;
    let density = Rational::new(e_xy as i64, size as i64);
    let dominant = if density >= Rational::new(1, 2) {
        Direction::Forward
    } else {
        Direction::Backward
    };
    Ok(PairStats {
        e_xy,
        size,
        density,
        dominant,
        weight: Rational::new(size as i64, (n * n) as i64),
    })
}

fn checked_set(n: usize, set: &[usize]) -> Result<Vec<u64>> {
    let mut row = vec![0u64; bits::words_for(n)];
    for &v in set {
        if v >= n {
            return Err(Error::arg(format!("vertex {} out of range", v + 1)));
        }
        if bits::test(&row, v) {
            return Err(Error::arg(format!("vertex {} repeated", v + 1)));
        }
        bits::set(&mut row, v);
    }
    Ok(row)
}

/// Finds `k` vertices inducing a transitive subtournament, returned so that
/// each vertex beats all later ones.
///
/// The first branch explored is the greedy chain: take a vertex of maximum
/// out-degree inside the candidate set and recurse into its out-neighbourhood.
/// That chain alone succeeds whenever the candidate set has at least
/// `2^(k-1)` vertices; the remaining branches make the search exact on
/// smaller tournaments.
pub fn transitive_subtournament(t: &Tournament, k: usize) -> Option<Vec<usize>> {
    let all: Vec<usize> = (0..t.order()).collect();
    transitive_subtournament_in(t, &all, k)
}

/// [`transitive_subtournament`] restricted to the vertex set `within`.
pub fn transitive_subtournament_in(t: &Tournament, within: &[usize], k: usize) -> Option<Vec<usize>> {
    if k == 0 {
        return Some(Vec::new());
    }
    let cand = bits::row_from(t.order(), within.iter().copied());
    let mut chain = Vec::with_capacity(k);
    match chain_search(t, &cand, k, &mut chain) {
        ControlFlow::Break(()) => Some(chain),
        ControlFlow::Continue(()) => None,
    }
}

fn chain_search(t: &Tournament, cand: &[u64], k: usize, chain: &mut Vec<usize>) -> ControlFlow<()> {
    if chain.len() == k {
        return ControlFlow::Break(());
    }
    let size = bits::count(cand);
    if chain.len() + size < k {
        return ControlFlow::Continue(());
    }
    let mut order: Vec<(usize, usize)> = bits::ones(cand)
        .map(|v| (bits::count_and(t.out_row(v), cand), v))
        .collect();
    order.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut next = vec![0u64; cand.len()];
    for (deg, v) in order {
        if chain.len() + 1 + deg < k {
            break;
        }
        for (w, (c, o)) in next.iter_mut().zip(cand.iter().zip(t.out_row(v))) {
            *w = c & o;
        }
        chain.push(v);
        chain_search(t, &next, k, chain)?;
        chain.pop();
    }
    ControlFlow::Continue(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tournament_adjacency_is_complementary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = Tournament::random(9, &mut rng);
        let a = t.adjacency();
        for i in 0..9 {
            assert_eq!(a[i][i], 0);
            for j in 0..9 {
                if i != j {
                    assert_eq!(a[i][j] + a[j][i], 1);
                }
            }
        }
        assert_eq!(t.as_oriented().edge_count(), 36);
    }

    #[test]
    fn oriented_rejects_invalid_edges() {
        let mut g = OrientedGraph::new(3);
        assert!(g.add_edge(0, 0).is_err());
        assert!(g.add_edge(0, 3).is_err());
        g.add_edge(0, 1).unwrap();
        assert!(g.add_edge(1, 0).is_err());
        assert!(Tournament::from_oriented(g).is_err());
    }

    #[test]
    fn density_single_edge() {
        let t = Tournament::transitive(2);
        let s = density(&t, &[0], &[1]).unwrap();
        assert_eq!(s.density, Rational::from_integer(1));
        assert_eq!(s.dominant, Direction::Forward);
        let r = density(&t, &[1], &[0]).unwrap();
        assert_eq!(r.density, Rational::from_integer(0));
        assert_eq!(r.dominant, Direction::Backward);
    }

    #[test]
    fn density_full_forward_block() {
        let t = Tournament::transitive(6);
        let s = density(&t, &[0, 1, 2], &[3, 4, 5]).unwrap();
        assert_eq!(s.e_xy, 9);
        assert_eq!(s.density, Rational::from_integer(1));
        assert_eq!(s.weight, Rational::new(9, 36));
        assert!(s.is_homogeneous(Rational::new(1, 10)));
    }

    #[test]
    fn density_matches_pair_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let t = Tournament::random(10, &mut rng);
        let x = [0, 4, 7];
        let y = [1, 2, 9];
        let brute = x
            .iter()
            .flat_map(|&a| y.iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| t.beats(a, b))
            .count() as u64;
        let s = density(&t, &x, &y).unwrap();
        let r = density(&t, &y, &x).unwrap();
        assert_eq!(s.e_xy, brute);
        assert_eq!(s.density + r.density, Rational::from_integer(1));
    }

    #[test]
    fn density_rejects_bad_sets() {
        let t = Tournament::transitive(4);
        assert!(density(&t, &[], &[1]).is_err());
        assert!(density(&t, &[0, 1], &[1, 2]).is_err());
        assert!(density(&t, &[0], &[4]).is_err());
    }

    #[test]
    fn transitive_extraction_small_cases() {
        let tt = Tournament::transitive(5);
        assert_eq!(transitive_subtournament(&tt, 5), Some(vec![0, 1, 2, 3, 4]));
        let c3 = Tournament::cyclic_triangle();
        assert_eq!(transitive_subtournament(&c3, 3), None);
        let pair = transitive_subtournament(&c3, 2).unwrap();
        assert!(c3.is_transitive_sequence(&pair));
        assert_eq!(transitive_subtournament(&c3, 0), Some(vec![]));
    }

    #[test]
    fn transitive_extraction_all_four_vertex_tournaments() {
        for code in 0..64u64 {
            let t = Tournament::from_code(4, code);
            let s = transitive_subtournament(&t, 3).expect("4 = 2^(3-1) vertices suffice");
            assert_eq!(s.len(), 3);
            assert!(t.is_transitive_sequence(&s));
        }
    }

    #[test]
    fn transitive_check_agrees_with_score_sequence() {
        for code in 0..64u64 {
            let t = Tournament::from_code(4, code);
            let by_triangles = t.cyclic_triangles().is_empty();
            assert_eq!(t.is_transitive(), by_triangles);
        }
    }

    #[test]
    fn topological_order_prefers_small_labels() {
        let g = OrientedGraph::from_edges(4, [(3, 1), (2, 0)]).unwrap();
        assert_eq!(g.topological_order(&[0, 1, 2, 3]), Some(vec![2, 0, 3, 1]));
        assert!(OrientedGraph::cyclic_triangle().topological_order(&[0, 1, 2]).is_none());
    }
}
