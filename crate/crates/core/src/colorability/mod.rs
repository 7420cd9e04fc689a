//! Acyclic colorings of oriented graphs and tournaments.
//!
//! A k-coloring partitions the vertices into k classes each inducing an
//! acyclic subgraph; for a tournament every class is transitive. A pattern is
//! classified easy exactly when it is 2-colorable.

pub mod nae;

use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::bits;
use crate::budget::{Budget, Outcome};
use crate::digraph::{Digraph, OrientedGraph, Tournament};
use crate::error::{Error, Result};

/// Color of every vertex, `0..k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    colors: Vec<usize>,
}

impl Coloring {
    pub fn new(colors: Vec<usize>) -> Self {
        Coloring { colors }
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn color(&self, v: usize) -> usize {
        self.colors[v]
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Number of colors in use (largest color plus one).
    pub fn num_colors(&self) -> usize {
        self.colors.iter().map(|&c| c + 1).max().unwrap_or(0)
    }

    /// Vertex lists per color, each sorted.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_colors()];
        for (v, &c) in self.colors.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    /// Checks from scratch that every class induces an acyclic subgraph.
    pub fn is_proper(&self, g: &OrientedGraph) -> bool {
        self.colors.len() == g.order() && self.classes().iter().all(|c| g.is_acyclic_on(c))
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let classes = self.classes();
        for (i, class) in classes.iter().enumerate() {
            if i > 0 {
                f.write_str(" / ")?;
            }
            let labels: Vec<String> = class.iter().map(|v| (v + 1).to_string()).collect();
            write!(f, "{{{}}}", labels.join(","))?;
        }
        Ok(())
    }
}

/// Whether adding `v` to the acyclic class `class` closes a directed cycle:
/// some out-neighbour of `v` inside the class reaches an in-neighbour.
fn closes_cycle(g: &OrientedGraph, class: &[u64], v: usize) -> bool {
    let target: Vec<u64> = g.in_row(v).iter().zip(class).map(|(a, b)| a & b).collect();
    if target.iter().all(|&w| w == 0) {
        return false;
    }
    let mut visited: Vec<u64> = g.out_row(v).iter().zip(class).map(|(a, b)| a & b).collect();
    let mut frontier = visited.clone();
    let mut next = vec![0u64; class.len()];
    loop {
        if bits::count_and(&frontier, &target) > 0 {
            return true;
        }
        next.iter_mut().for_each(|w| *w = 0);
        for u in bits::ones(&frontier) {
            for ((n, o), (c, s)) in next
                .iter_mut()
                .zip(g.out_row(u))
                .zip(class.iter().zip(&visited))
            {
                *n |= o & c & !s;
            }
        }
        if next.iter().all(|&w| w == 0) {
            return false;
        }
        for (s, n) in visited.iter_mut().zip(&next) {
            *s |= n;
        }
        std::mem::swap(&mut frontier, &mut next);
    }
}

struct ColorSearch<'a> {
    g: &'a OrientedGraph,
    k: usize,
    classes: Vec<Vec<u64>>,
    colors: Vec<usize>,
    budget: &'a mut Budget,
}

impl ColorSearch<'_> {
    /// `Some(true)` found, `Some(false)` subtree refuted, `None` out of budget.
    fn go(&mut self, v: usize, used: usize) -> Option<bool> {
        if v == self.g.order() {
            return Some(true);
        }
        if !self.budget.tick() {
            return None;
        }
        // colors beyond the first unused one are symmetric to it
        let limit = (used + 1).min(self.k);
        for c in 0..limit {
            if closes_cycle(self.g, &self.classes[c], v) {
                continue;
            }
            bits::set(&mut self.classes[c], v);
            self.colors[v] = c;
            let r = self.go(v + 1, used.max(c + 1));
            bits::clear(&mut self.classes[c], v);
            match r {
                Some(false) => {}
                other => return other,
            }
        }
        Some(false)
    }
}

/// Backtracking search for an acyclic `k`-coloring, vertices in index order.
/// Vertex 1 always receives color 1.
pub fn acyclic_k_coloring_with(g: &OrientedGraph, k: usize, budget: &mut Budget) -> Outcome<Coloring> {
    let n = g.order();
    if n == 0 {
        return Outcome::Found(Coloring::new(Vec::new()));
    }
    if k == 0 {
        return Outcome::Infeasible;
    }
    let mut search = ColorSearch {
        g,
        k,
        classes: vec![vec![0u64; bits::words_for(n)]; k],
        colors: vec![0; n],
        budget,
    };
    match search.go(0, 0) {
        Some(true) => Outcome::Found(Coloring::new(search.colors)),
        Some(false) => Outcome::Infeasible,
        None => Outcome::Exhausted {
            nodes: search.budget.used(),
        },
    }
}

/// Unbudgeted [`acyclic_k_coloring_with`].
pub fn acyclic_k_coloring(g: &OrientedGraph, k: usize) -> Option<Coloring> {
    acyclic_k_coloring_with(g, k, &mut Budget::unlimited()).found()
}

/// 2-coloring of a tournament with no monochromatic cyclic triangle, found by
/// the NAE solver over the cyclic triangles. Only valid for tournaments, where
/// a class is transitive iff it spans no cyclic triangle.
pub fn nae_two_coloring_with(t: &Tournament, budget: &mut Budget) -> Outcome<Coloring> {
    let triangles = t.cyclic_triangles();
    let out = nae::solve_nae(t.order(), &triangles, budget).expect("triangle vertices are in range");
    out.map(|x| Coloring::new(x.into_iter().map(usize::from).collect()))
        .map(normalize)
}

/// [`nae_two_coloring_with`] for an oriented graph that must be a tournament.
pub fn nae_two_coloring(g: &OrientedGraph, budget: &mut Budget) -> Result<Outcome<Coloring>> {
    let t = Tournament::from_oriented(g.clone())?;
    Ok(nae_two_coloring_with(&t, budget))
}

/// Renames colors so that they appear in order of first use.
fn normalize(c: Coloring) -> Coloring {
    let mut map: Vec<Option<usize>> = Vec::new();
    let mut next = 0;
    let colors = c
        .colors
        .iter()
        .map(|&x| {
            if map.len() <= x {
                map.resize(x + 1, None);
            }
            *map[x].get_or_insert_with(|| {
                next += 1;
                next - 1
            })
        })
        .collect();
    Coloring::new(colors)
}

/// Least `k` admitting an acyclic `k`-coloring, with a witness.
pub fn chromatic_number_with(g: &OrientedGraph, budget: &mut Budget) -> Outcome<(usize, Coloring)> {
    if g.order() == 0 {
        return Outcome::Found((0, Coloring::new(Vec::new())));
    }
    for k in 1..=g.order() {
        match acyclic_k_coloring_with(g, k, budget) {
            Outcome::Found(c) => return Outcome::Found((k, c)),
            Outcome::Infeasible => {}
            Outcome::Exhausted { nodes } => return Outcome::Exhausted { nodes },
        }
    }
    unreachable!("singleton classes are always acyclic")
}

pub fn chromatic_number(t: &Tournament) -> usize {
    chromatic_number_with(t.as_oriented(), &mut Budget::unlimited())
        .found()
        .expect("unbudgeted search terminates")
        .0
}

/// Removal-lemma class of a pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    /// 2-colorable.
    Easy,
    Hard,
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Class::Easy => "easy",
            Class::Hard => "hard",
        })
    }
}

pub fn classify(h: &OrientedGraph) -> Class {
    if acyclic_k_coloring(h, 2).is_some() {
        Class::Easy
    } else {
        Class::Hard
    }
}

/// Out-neighbourhood masks of the tournament with code `code` on `n <= 8`
/// vertices (same code layout as [`Tournament::from_code`]).
fn small_out_masks(n: usize, code: u64) -> [u8; 8] {
    let mut out = [0u8; 8];
    let mut bit = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if code >> bit & 1 == 1 {
                out[i] |= 1 << j;
            } else {
                out[j] |= 1 << i;
            }
            bit += 1;
        }
    }
    out
}

fn small_transitive(out: &[u8; 8], mask: u8) -> bool {
    let mut seen = 0u16;
    let mut m = mask;
    while m != 0 {
        let v = m.trailing_zeros() as usize;
        m &= m - 1;
        let d = (out[v] & mask).count_ones();
        if seen >> d & 1 == 1 {
            return false;
        }
        seen |= 1 << d;
    }
    true
}

fn small_two_colorable(n: usize, out: &[u8; 8]) -> bool {
    let full: u8 = if n == 8 { u8::MAX } else { (1u8 << n) - 1 };
    // vertex 1 stays in the first class
    (0u8..1 << (n.max(1) - 1)).any(|rest| {
        let a = (rest << 1) | 1;
        let a = a & full;
        small_transitive(out, a) && small_transitive(out, full & !a)
    })
}

/// The first tournament, in order of vertex count and then code, that has no
/// acyclic 2-coloring. Found by exhaustive search and cached.
pub fn smallest_non_two_colorable() -> &'static Tournament {
    static CELL: OnceLock<Tournament> = OnceLock::new();
    CELL.get_or_init(|| {
        for n in 1..=8usize {
            let pairs = n * (n - 1) / 2;
            let hit = (0u64..1 << pairs)
                .into_par_iter()
                .find_first(|&code| !small_two_colorable(n, &small_out_masks(n, code)));
            if let Some(code) = hit {
                return Tournament::from_code(n, code);
            }
        }
        panic!("every tournament on at most 8 vertices is 2-colorable")
    })
}

/// Acyclic coloring check for callers holding only an argument list.
pub fn verify_coloring(g: &OrientedGraph, colors: &[usize]) -> Result<()> {
    if colors.len() != g.order() {
        return Err(Error::arg(format!(
            "coloring has {} entries for {} vertices",
            colors.len(),
            g.order()
        )));
    }
    let c = Coloring::new(colors.to_vec());
    for (i, class) in c.classes().iter().enumerate() {
        if !g.is_acyclic_on(class) {
            return Err(Error::Invariant(format!("color class {} has a cycle", i + 1)));
        }
    }
    Ok(())
}
