//! Edge-preserving injections of a pattern into a host digraph.

use std::ops::ControlFlow;

use super::{Digraph, OrientedGraph};
use crate::bits;

/// An injective map from pattern vertices to host vertices such that every
/// pattern edge `u -> v` lands on a host edge `map[u] -> map[v]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Embedding {
    pub map: Vec<usize>,
}

impl Embedding {
    /// Checks injectivity and edge preservation from scratch.
    pub fn is_valid<D: Digraph>(&self, host: &D, pattern: &OrientedGraph) -> bool {
        if self.map.len() != pattern.order() {
            return false;
        }
        let mut seen = vec![false; host.order()];
        for &v in &self.map {
            if v >= host.order() || seen[v] {
                return false;
            }
            seen[v] = true;
        }
        pattern
            .edges()
            .into_iter()
            .all(|(u, v)| host.has_edge(self.map[u], self.map[v]))
    }

    /// Host edges used by the copy, one per pattern edge.
    pub fn image_edges(&self, pattern: &OrientedGraph) -> Vec<(usize, usize)> {
        pattern
            .edges()
            .into_iter()
            .map(|(u, v)| (self.map[u], self.map[v]))
            .collect()
    }
}

/// Labeled and unlabeled copy counts of a pattern in a host.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CopyCount {
    /// Number of embeddings (labeled copies).
    pub labeled: u64,
    /// `|Aut(pattern)|`.
    pub automorphisms: u64,
    /// `labeled / automorphisms`.
    pub unlabeled: u64,
}

struct Plan {
    order: Vec<usize>,
    /// For step `i`: earlier steps `j` with `order[j] -> order[i]`.
    preds: Vec<Vec<usize>>,
    /// For step `i`: earlier steps `j` with `order[i] -> order[j]`.
    succs: Vec<Vec<usize>>,
}

/// Visits pattern vertices so that each one is as constrained as possible by
/// the already placed ones.
fn plan(pattern: &OrientedGraph) -> Plan {
    let h = pattern.order();
    let mut placed = vec![false; h];
    let mut order = Vec::with_capacity(h);
    let degree = |v: usize| bits::count(pattern.out_row(v)) + bits::count(pattern.in_row(v));
    for _ in 0..h {
        let best = (0..h)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let links = order.iter().filter(|&&u| pattern.adjacent(u, v)).count();
                (links, degree(v), std::cmp::Reverse(v))
            })
            .unwrap();
        placed[best] = true;
        order.push(best);
    }
    let mut preds = vec![Vec::new(); h];
    let mut succs = vec![Vec::new(); h];
    for i in 0..h {
        for j in 0..i {
            if pattern.has_edge(order[j], order[i]) {
                preds[i].push(j);
            }
            if pattern.has_edge(order[i], order[j]) {
                succs[i].push(j);
            }
        }
    }
    Plan { order, preds, succs }
}

/// Calls `visit` with every embedding of `pattern` into `host` (as a map
/// indexed by pattern vertex). Enumeration order is deterministic. Returns
/// `Break` if the visitor stopped early.
pub fn for_each_embedding<D, F>(host: &D, pattern: &OrientedGraph, mut visit: F) -> ControlFlow<()>
where
    D: Digraph + ?Sized,
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let h = pattern.order();
    let n = host.order();
    if h > n {
        return ControlFlow::Continue(());
    }
    let plan = plan(pattern);
    let words = bits::words_for(n);
    let mut image = vec![0usize; h];
    let mut map = vec![0usize; h];
    let mut used = vec![0u64; words];
    let mut scratch = vec![vec![0u64; words]; h];
    let full = bits::full_row(n);
    recurse(
        host, &plan, 0, &mut image, &mut map, &mut used, &mut scratch, &full, &mut visit,
    )
}

#[allow(clippy::too_many_arguments)]
fn recurse<D, F>(
    host: &D,
    plan: &Plan,
    step: usize,
    image: &mut [usize],
    map: &mut [usize],
    used: &mut [u64],
    scratch: &mut [Vec<u64>],
    full: &[u64],
    visit: &mut F,
) -> ControlFlow<()>
where
    D: Digraph + ?Sized,
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    if step == plan.order.len() {
        return visit(map);
    }
    let (cand, rest) = scratch.split_first_mut().expect("one buffer per step");
    for (c, (f, u)) in cand.iter_mut().zip(full.iter().zip(used.iter())) {
        *c = f & !u;
    }
    for &j in &plan.preds[step] {
        for (c, r) in cand.iter_mut().zip(host.out_row(image[j])) {
            *c &= r;
        }
    }
    for &j in &plan.succs[step] {
        for (c, r) in cand.iter_mut().zip(host.in_row(image[j])) {
            *c &= r;
        }
    }
    let pv = plan.order[step];
    for v in bits::ones(cand) {
        image[step] = v;
        map[pv] = v;
        bits::set(used, v);
        let flow = recurse(host, plan, step + 1, image, map, used, rest, full, visit);
        bits::clear(used, v);
        flow?;
    }
    ControlFlow::Continue(())
}

/// Exact number of edge-preserving injections. The empty pattern has one.
pub fn count_embeddings<D: Digraph + ?Sized>(host: &D, pattern: &OrientedGraph) -> u64 {
    let mut count = 0u64;
    let _ = for_each_embedding(host, pattern, |_| {
        count += 1;
        ControlFlow::Continue(())
    });
    count
}

pub fn find_embedding<D: Digraph + ?Sized>(host: &D, pattern: &OrientedGraph) -> Option<Embedding> {
    let mut found = None;
    let _ = for_each_embedding(host, pattern, |m| {
        found = Some(Embedding { map: m.to_vec() });
        ControlFlow::Break(())
    });
    found
}

/// `|Aut(pattern)|`: an edge-preserving injection of a finite oriented graph
/// into itself is automatically an automorphism.
pub fn automorphism_count(pattern: &OrientedGraph) -> u64 {
    count_embeddings(pattern, pattern)
}

pub fn copy_count<D: Digraph + ?Sized>(host: &D, pattern: &OrientedGraph) -> CopyCount {
    let labeled = count_embeddings(host, pattern);
    let automorphisms = automorphism_count(pattern);
    CopyCount {
        labeled,
        automorphisms,
        unlabeled: labeled / automorphisms,
    }
}
