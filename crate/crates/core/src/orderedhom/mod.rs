//! Order-preserving homomorphisms between graphs on labeled vertex sets,
//! backedge graphs of oriented graphs, ordered cores and the maximal core
//! `K(H)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::ControlFlow;

use rayon::prelude::*;

use crate::budget::{Budget, Outcome};
use crate::digraph::{Digraph, OrientedGraph};
use crate::error::{Error, Result};

/// Simple undirected graph whose vertices are distinct natural numbers; the
/// natural order of the labels is part of the structure. At most 64 vertices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LabeledGraph {
    labels: Vec<usize>,
    /// Adjacency by position in `labels`.
    adj: Vec<u64>,
}

pub const MAX_LABELED_VERTICES: usize = 64;

impl LabeledGraph {
    pub fn edgeless(mut labels: Vec<usize>) -> Result<Self> {
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::arg("vertex labels must be distinct"));
        }
        if labels.len() > MAX_LABELED_VERTICES {
            return Err(Error::arg(format!(
                "at most {MAX_LABELED_VERTICES} vertices are supported"
            )));
        }
        let adj = vec![0; labels.len()];
        Ok(LabeledGraph { labels, adj })
    }

    /// Builds a graph from labels and edges given as label pairs.
    pub fn new(labels: Vec<usize>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = LabeledGraph::edgeless(labels)?;
        for (a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        if a == b {
            return Err(Error::arg(format!("self-loop at {a}")));
        }
        let i = self
            .index_of(a)
            .ok_or_else(|| Error::arg(format!("unknown vertex {a}")))?;
        let j = self
            .index_of(b)
            .ok_or_else(|| Error::arg(format!("unknown vertex {b}")))?;
        self.adj[i] |= 1 << j;
        self.adj[j] |= 1 << i;
        Ok(())
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, label: usize) -> Option<usize> {
        self.labels.binary_search(&label).ok()
    }

    /// Adjacency by position.
    #[inline]
    pub fn adjacent_at(&self, i: usize, j: usize) -> bool {
        self.adj[i] >> j & 1 == 1
    }

    /// Adjacency by label; unknown labels are never adjacent.
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.adjacent_at(i, j),
            _ => false,
        }
    }

    pub fn neighbours_mask(&self, i: usize) -> u64 {
        self.adj[i]
    }

    /// Edges as label pairs `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.order() {
            for j in (i + 1)..self.order() {
                if self.adjacent_at(i, j) {
                    out.push((self.labels[i], self.labels[j]));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    /// Induced subgraph on the given positions (labels inherited).
    pub fn induced_at(&self, positions: &[usize]) -> LabeledGraph {
        let mut pos = positions.to_vec();
        pos.sort_unstable();
        pos.dedup();
        let labels = pos.iter().map(|&i| self.labels[i]).collect();
        let adj = pos
            .iter()
            .map(|&i| {
                pos.iter()
                    .enumerate()
                    .filter(|&(_, &j)| self.adjacent_at(i, j))
                    .fold(0u64, |m, (b, _)| m | 1 << b)
            })
            .collect();
        LabeledGraph { labels, adj }
    }

    /// Induced subgraph on the given labels.
    pub fn induced(&self, labels: &[usize]) -> Result<LabeledGraph> {
        let pos = labels
            .iter()
            .map(|&l| {
                self.index_of(l)
                    .ok_or_else(|| Error::arg(format!("unknown vertex {l}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.induced_at(&pos))
    }

    /// Edge list after relabeling vertices by rank (`1..=order`). Two graphs
    /// are order-isomorphic iff they have the same order and canonical edges.
    pub fn canonical_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.order() {
            for j in (i + 1)..self.order() {
                if self.adjacent_at(i, j) {
                    out.push((i + 1, j + 1));
                }
            }
        }
        out
    }

    pub fn canonical_key(&self) -> (usize, Vec<(usize, usize)>) {
        (self.order(), self.canonical_edges())
    }

    /// Order-preserving isomorphism test: the monotone bijection between the
    /// label sets is unique, so compare edges after rank relabeling.
    pub fn order_isomorphic(&self, other: &LabeledGraph) -> bool {
        self.order() == other.order() && self.adj == other.adj
    }

    /// Proper graph 2-coloring by BFS, if one exists.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let n = self.order();
        let mut side: Vec<Option<bool>> = vec![None; n];
        for s in 0..n {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let su = side[u].unwrap();
                for v in ones64(self.adj[u]) {
                    match side[v] {
                        None => {
                            side[v] = Some(!su);
                            queue.push_back(v);
                        }
                        Some(sv) if sv == su => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(|s| s.unwrap()).collect())
    }

    /// Least number of colors in a proper (graph) coloring.
    pub fn chromatic_number(&self) -> usize {
        let n = self.order();
        if n == 0 {
            return 0;
        }
        (1..=n)
            .find(|&k| {
                let mut colors = vec![usize::MAX; n];
                self.color_with(k, 0, 0, &mut colors)
            })
            .unwrap()
    }

    fn color_with(&self, k: usize, i: usize, used: usize, colors: &mut [usize]) -> bool {
        if i == self.order() {
            return true;
        }
        for c in 0..(used + 1).min(k) {
            if ones64(self.adj[i]).any(|j| j < i && colors[j] == c) {
                continue;
            }
            colors[i] = c;
            if self.color_with(k, i + 1, used.max(c + 1), colors) {
                return true;
            }
        }
        colors[i] = usize::MAX;
        false
    }
}

impl fmt::Debug for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabeledGraph({:?}; {:?})", self.labels, self.edges())
    }
}

pub(crate) fn ones64(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// Order-preserving homomorphism, stored as the image label of each source
/// label (source labels in increasing order).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OphMap {
    pub source: Vec<usize>,
    pub image: Vec<usize>,
}

impl OphMap {
    pub fn apply(&self, label: usize) -> Option<usize> {
        self.source
            .binary_search(&label)
            .ok()
            .map(|i| self.image[i])
    }

    /// Checks monotonicity and edge preservation from scratch.
    pub fn is_valid(&self, g: &LabeledGraph, g2: &LabeledGraph) -> bool {
        if self.source != g.labels() || self.image.len() != self.source.len() {
            return false;
        }
        if self.image.iter().any(|&l| g2.index_of(l).is_none()) {
            return false;
        }
        if self.image.windows(2).any(|w| w[0] > w[1]) {
            return false;
        }
        g.edges()
            .into_iter()
            .all(|(a, b)| g2.adjacent(self.apply(a).unwrap(), self.apply(b).unwrap()))
    }

    pub fn is_bijective_onto(&self, g2: &LabeledGraph) -> bool {
        let mut img = self.image.clone();
        img.dedup();
        img.len() == self.image.len() && img == g2.labels()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &OphMap) -> Option<OphMap> {
        let image = self
            .image
            .iter()
            .map(|&l| other.apply(l))
            .collect::<Option<Vec<_>>>()?;
        Some(OphMap {
            source: self.source.clone(),
            image,
        })
    }
}

/// Calls `visit` with every order-preserving homomorphism `g -> g2`, given as
/// target positions indexed by source position, in lexicographic order.
pub fn for_each_oph<F>(g: &LabeledGraph, g2: &LabeledGraph, mut visit: F) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let mut image = vec![0usize; g.order()];
    oph_step(g, g2, 0, &mut image, &mut visit)
}

fn oph_step<F>(
    g: &LabeledGraph,
    g2: &LabeledGraph,
    i: usize,
    image: &mut [usize],
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    if i == g.order() {
        return visit(image);
    }
    let n2 = g2.order();
    if n2 == 0 {
        return ControlFlow::Continue(());
    }
    let low = if i == 0 { 0 } else { image[i - 1] };
    let mut allowed: u64 = if n2 == 64 { u64::MAX } else { (1u64 << n2) - 1 };
    allowed &= !((1u64 << low) - 1);
    let earlier = g.neighbours_mask(i) & ((1u64 << i) - 1);
    for j in ones64(earlier) {
        allowed &= g2.neighbours_mask(image[j]);
    }
    for c in ones64(allowed) {
        image[i] = c;
        oph_step(g, g2, i + 1, image, visit)?;
    }
    ControlFlow::Continue(())
}

fn to_map(g: &LabeledGraph, g2: &LabeledGraph, image: &[usize]) -> OphMap {
    OphMap {
        source: g.labels().to_vec(),
        image: image.iter().map(|&p| g2.labels()[p]).collect(),
    }
}

/// An order-preserving homomorphism `g -> g2`, the lexicographically least
/// by image positions.
pub fn find_oph(g: &LabeledGraph, g2: &LabeledGraph) -> Option<OphMap> {
    let mut found = None;
    let _ = for_each_oph(g, g2, |img| {
        found = Some(to_map(g, g2, img));
        ControlFlow::Break(())
    });
    found
}

pub fn all_ophs(g: &LabeledGraph, g2: &LabeledGraph) -> Vec<OphMap> {
    let mut out = Vec::new();
    let _ = for_each_oph(g, g2, |img| {
        out.push(to_map(g, g2, img));
        ControlFlow::Continue(())
    });
    out
}

/// Backedge graph of `h` under `labeling` (`labeling[v]` is the label of
/// vertex `v`, a bijection onto `1..=h`): `{i, j}` with `i < j` is an edge iff
/// the vertex labeled `j` points to the vertex labeled `i`.
pub fn backedge_graph(h: &OrientedGraph, labeling: &[usize]) -> Result<LabeledGraph> {
    let n = h.order();
    if labeling.len() != n {
        return Err(Error::arg(format!(
            "labeling has {} entries for {} vertices",
            labeling.len(),
            n
        )));
    }
    let mut seen = vec![false; n];
    for &l in labeling {
        if l == 0 || l > n || seen[l - 1] {
            return Err(Error::arg("labeling is not a bijection onto 1..=h"));
        }
        seen[l - 1] = true;
    }
    let mut g = LabeledGraph::edgeless((1..=n).collect())?;
    for (u, v) in h.edges() {
        if labeling[u] > labeling[v] {
            g.add_edge(labeling[v], labeling[u])?;
        }
    }
    Ok(g)
}

fn combinations(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if visit(&idx) {
            return;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return;
        };
        idx[i] += 1;
        for j in (i + 1)..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Ordered core: the induced subgraph with fewest vertices that receives an
/// order-preserving homomorphism from `g`; ties go to the lexicographically
/// least label set.
pub fn ordered_core(g: &LabeledGraph) -> LabeledGraph {
    ordered_core_with(g, &mut Budget::unlimited())
        .found()
        .expect("unbudgeted search terminates")
}

/// [`ordered_core`] with a budget counting candidate subsets tried.
pub fn ordered_core_with(g: &LabeledGraph, budget: &mut Budget) -> Outcome<LabeledGraph> {
    let n = g.order();
    if n == 0 {
        return Outcome::Found(g.clone());
    }
    for size in 1..n {
        let mut hit = None;
        let mut out_of_budget = false;
        combinations(n, size, |pos| {
            if !budget.tick() {
                out_of_budget = true;
                return true;
            }
            let cand = g.induced_at(pos);
            if find_oph(g, &cand).is_some() {
                hit = Some(cand);
                return true;
            }
            false
        });
        if out_of_budget {
            return Outcome::Exhausted {
                nodes: budget.used(),
            };
        }
        if let Some(c) = hit {
            return Outcome::Found(c);
        }
    }
    Outcome::Found(g.clone())
}

/// A graph is an ordered core iff it has no order-preserving homomorphism to
/// a proper induced subgraph of itself.
pub fn is_ordered_core(g: &LabeledGraph) -> bool {
    ordered_core(g).order() == g.order()
}

/// One member of the core family: an ordered core and the labeling of `H`
/// whose backedge graph has it as ordered core.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreMember {
    pub core: LabeledGraph,
    /// `witness[v]` is the label of vertex `v` of `H`.
    pub witness: Vec<usize>,
}

/// Ordered cores of the backedge graphs of `H` over all labelings, one per
/// order-isomorphism class, sorted by canonical key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreFamily {
    pub members: Vec<CoreMember>,
    pub labelings: u64,
}

fn permutations(h: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (1..=h).collect();
    loop {
        out.push(p.clone());
        // next lexicographic permutation
        let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
            break;
        };
        let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
    out
}

fn factorial(h: usize) -> u64 {
    (1..=h as u64).product()
}

/// The family of ordered cores over all `h!` labelings. The budget counts
/// labelings; a budget below `h!` is reported as exhausted up front.
pub fn core_family_with(h: &OrientedGraph, budget: &mut Budget) -> Outcome<CoreFamily> {
    let n = h.order();
    let total = factorial(n);
    if let Some(limit) = budget.limit() {
        if limit.saturating_sub(budget.used()) < total {
            return Outcome::Exhausted { nodes: total };
        }
    }
    for _ in 0..total {
        budget.tick();
    }
    let perms = permutations(n);
    let backedges: Vec<LabeledGraph> = perms
        .par_iter()
        .map(|p| backedge_graph(h, p).expect("permutation is a valid labeling"))
        .collect();
    // many labelings share a backedge graph; compute each core once
    let mut distinct: Vec<&LabeledGraph> = backedges.iter().collect();
    distinct.sort_by_key(|g| g.edges());
    distinct.dedup_by(|a, b| a == b);
    let cores: HashMap<&LabeledGraph, LabeledGraph> = distinct
        .par_iter()
        .map(|&g| (g, ordered_core(g)))
        .collect();
    let mut best: BTreeMap<(usize, Vec<(usize, usize)>), usize> = BTreeMap::new();
    for (i, g) in backedges.iter().enumerate() {
        let key = cores[g].canonical_key();
        // permutations are generated in lexicographic order
        best.entry(key).or_insert(i);
    }
    let members = best
        .into_values()
        .map(|i| CoreMember {
            core: cores[&backedges[i]].clone(),
            witness: perms[i].clone(),
        })
        .collect();
    Outcome::Found(CoreFamily {
        members,
        labelings: total,
    })
}

pub fn core_family(h: &OrientedGraph) -> CoreFamily {
    core_family_with(h, &mut Budget::unlimited())
        .found()
        .expect("unbudgeted sweep terminates")
}

impl CoreFamily {
    /// Whether no other member maps order-preservingly into member `i`
    /// unless order-isomorphic to it.
    pub fn is_maximal(&self, i: usize) -> bool {
        let k = &self.members[i].core;
        self.members.iter().all(|m| {
            m.core.order_isomorphic(k) || find_oph(&m.core, k).is_none()
        })
    }

    /// Pairs of distinct members with homomorphisms both ways. Empty when
    /// antisymmetry holds.
    pub fn antisymmetry_violations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.members.len() {
            for j in (i + 1)..self.members.len() {
                let (a, b) = (&self.members[i].core, &self.members[j].core);
                if find_oph(a, b).is_some() && find_oph(b, a).is_some() {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Index of `K(H)`: among maximal members, the least canonical key.
    pub fn select_k_index(&self) -> usize {
        // members are sorted by canonical key already
        (0..self.members.len())
            .find(|&i| self.is_maximal(i))
            .expect("a finite poset has a maximal element")
    }
}

/// `K(H)` with its witness labeling.
pub fn select_k(h: &OrientedGraph) -> CoreMember {
    let fam = core_family(h);
    let i = fam.select_k_index();
    fam.members[i].clone()
}

/// An odd cycle of a graph that is not bipartite, as a label sequence
/// `c_1 .. c_l` (edges between consecutive entries and from `c_l` to `c_1`).
/// The cycle returned is a shortest odd cycle.
pub fn odd_cycle_certificate(k: &LabeledGraph) -> Result<Vec<usize>> {
    let n = k.order();
    let mut best: Option<(usize, usize, usize, usize)> = None;
    for r in 0..n {
        let (dist, _) = bfs(k, r);
        for u in 0..n {
            for w in ones64(k.neighbours_mask(u)) {
                if u < w && dist[u] != usize::MAX && dist[u] == dist[w] {
                    let len = 2 * dist[u] + 1;
                    if best.is_none_or(|b| len < b.0) {
                        best = Some((len, r, u, w));
                    }
                }
            }
        }
    }
    let Some((len, r, u, w)) = best else {
        return Err(Error::arg("graph is 2-colorable; no odd cycle exists"));
    };
    let (_, parent) = bfs(k, r);
    let path = |mut x: usize| {
        let mut p = vec![x];
        while x != r {
            x = parent[x];
            p.push(x);
        }
        p.reverse();
        p
    };
    // r .. u then w .. back to r (excluding r)
    let mut cycle = path(u);
    let mut back = path(w);
    back.remove(0);
    back.reverse();
    cycle.extend(back);
    debug_assert_eq!(cycle.len(), len);
    let labels: Vec<usize> = cycle.iter().map(|&i| k.labels()[i]).collect();
    if !is_cycle(k, &labels) {
        return Err(Error::Invariant("odd cycle reconstruction failed".into()));
    }
    Ok(labels)
}

fn bfs(k: &LabeledGraph, r: usize) -> (Vec<usize>, Vec<usize>) {
    let n = k.order();
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    dist[r] = 0;
    let mut queue = std::collections::VecDeque::from([r]);
    while let Some(u) = queue.pop_front() {
        for v in ones64(k.neighbours_mask(u)) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    (dist, parent)
}

/// Whether the label sequence is a simple cycle of length at least 3.
pub fn is_cycle(g: &LabeledGraph, cycle: &[usize]) -> bool {
    let l = cycle.len();
    let mut sorted = cycle.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    l >= 3
        && sorted.len() == l
        && (0..l).all(|i| g.adjacent(cycle[i], cycle[(i + 1) % l]))
}

/// A set `X` of source labels on which `f: g -> k` restricts to a graph
/// isomorphism onto `k`, if any.
pub fn isomorphic_restriction(g: &LabeledGraph, k: &LabeledGraph, f: &OphMap) -> Option<Vec<usize>> {
    let fibers: Vec<Vec<usize>> = k
        .labels()
        .iter()
        .map(|&c| {
            f.source
                .iter()
                .zip(&f.image)
                .filter(|&(_, &i)| i == c)
                .map(|(&s, _)| s)
                .collect()
        })
        .collect();
    let mut pick = Vec::with_capacity(k.order());
    fn go(g: &LabeledGraph, k: &LabeledGraph, fibers: &[Vec<usize>], pick: &mut Vec<usize>) -> bool {
        let i = pick.len();
        if i == fibers.len() {
            return true;
        }
        for &x in &fibers[i] {
            let ok = (0..i).all(|j| g.adjacent(pick[j], x) == k.adjacent_at(j, i));
            if ok {
                pick.push(x);
                if go(g, k, fibers, pick) {
                    return true;
                }
                pick.pop();
            }
        }
        false
    }
    if go(g, k, &fibers, &mut pick) {
        Some(pick)
    } else {
        None
    }
}

/// Vertices `u_i` in the fibers `f^-1(c_i)` forming the cycle `u_1 .. u_l` in
/// `g`, if any.
pub fn lift_cycle(g: &LabeledGraph, f: &OphMap, cycle: &[usize]) -> Option<Vec<usize>> {
    let fiber = |c: usize| -> Vec<usize> {
        f.source
            .iter()
            .zip(&f.image)
            .filter(|&(_, &i)| i == c)
            .map(|(&s, _)| s)
            .collect()
    };
    let fibers: Vec<Vec<usize>> = cycle.iter().map(|&c| fiber(c)).collect();
    fn go(g: &LabeledGraph, fibers: &[Vec<usize>], pick: &mut Vec<usize>) -> bool {
        let i = pick.len();
        if i == fibers.len() {
            return g.adjacent(pick[i - 1], pick[0]);
        }
        for &x in &fibers[i] {
            if pick.contains(&x) {
                continue;
            }
            if i > 0 && !g.adjacent(pick[i - 1], x) {
                continue;
            }
            pick.push(x);
            if go(g, fibers, pick) {
                return true;
            }
            pick.pop();
        }
        false
    }
    let mut pick = Vec::new();
    if !fibers.is_empty() && go(g, &fibers, &mut pick) {
        Some(pick)
    } else {
        None
    }
}
