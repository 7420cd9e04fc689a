//! Small simple undirected graphs.

use std::collections::BTreeSet;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Simple undirected graph on at most 64 vertices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<u64>,
}

impl Graph {
    pub fn new(n: usize) -> Result<Self> {
        if n > 64 {
            return Err(Error::arg(format!("graphs are limited to 64 vertices, got {n}")));
        }
        Ok(Graph { adj: vec![0; n] })
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Graph::new(n)?;
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n).expect("complete graph too large");
        for u in 0..n {
            for v in u + 1..n {
                g.adj[u] |= 1 << v;
                g.adj[v] |= 1 << u;
            }
        }
        g
    }

    /// Each pair is an edge independently with probability `p`.
    pub fn random<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Self {
        let mut g = Graph::new(n).expect("random graph too large");
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    g.adj[u] |= 1 << v;
                    g.adj[v] |= 1 << u;
                }
            }
        }
        g
    }

    /// Graph whose edge `{u, v}` (u < v) is present iff the bit at the
    /// lexicographic rank of the pair is set.
    pub fn from_code(n: usize, code: u64) -> Self {
        let mut g = Graph::new(n).expect("graph too large");
        let mut bit = 0;
        for u in 0..n {
            for v in u + 1..n {
                if code >> bit & 1 == 1 {
                    g.adj[u] |= 1 << v;
                    g.adj[v] |= 1 << u;
                }
                bit += 1;
            }
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.order();
        if u >= n || v >= n {
            return Err(Error::arg(format!("edge {} {} out of range", u + 1, v + 1)));
        }
        if u == v {
            return Err(Error::arg(format!("loop at vertex {}", u + 1)));
        }
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.order();
        (0..n)
            .flat_map(|u| (u + 1..n).filter(move |&v| self.has_edge(u, v)).map(move |v| (u, v)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Triangles as sorted triples, in lexicographic order.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let n = self.order();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if !self.has_edge(i, j) {
                    continue;
                }
                for k in j + 1..n {
                    if self.has_edge(i, k) && self.has_edge(j, k) {
                        out.push([i, j, k]);
                    }
                }
            }
        }
        out
    }

    fn permuted_code(&self, perm: &[usize]) -> u64 {
        let n = self.order();
        let mut code = 0u64;
        let mut bit = 0;
        for u in 0..n {
            for v in u + 1..n {
                if self.has_edge(perm[u], perm[v]) {
                    code |= 1 << bit;
                }
                bit += 1;
            }
        }
        code
    }

    /// Smallest edge code over all relabelings; equal exactly for
    /// isomorphic graphs. Exponential in the order.
    pub fn canonical_code(&self) -> u64 {
        let n = self.order();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best = u64::MAX;
        loop {
            best = best.min(self.permuted_code(&perm));
            // next permutation in lexicographic order
            let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
                return if n == 0 { 0 } else { best };
            };
            let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
            perm.swap(i - 1, j);
            perm[i..].reverse();
        }
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph({}; {:?})", self.order(), self.edges())
    }
}

/// One representative per isomorphism class of graphs on `n <= 7`
/// vertices, ordered by canonical code.
pub fn graphs_up_to_isomorphism(n: usize) -> Result<Vec<Graph>> {
    if n > 7 {
        return Err(Error::arg("isomorphism classes are enumerated only up to 7 vertices"));
    }
    let pairs = n * n.saturating_sub(1) / 2;
    let codes: BTreeSet<u64> = (0..1u64 << pairs)
        .into_par_iter()
        .map(|c| Graph::from_code(n, c).canonical_code())
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Ok(codes.into_iter().map(|c| Graph::from_code(n, c)).collect())
}
