//! Minimum number of edge reversals that make a tournament H-free.
//!
//! Exact hitting-set branch and bound: every surviving copy of `H` must lose
//! at least one of its edges, so the search picks the copy with the fewest
//! reversible edges and branches on which of them is reversed first. A greedy
//! packing of copies that are pairwise disjoint on reversible edges gives the
//! lower bound used for pruning, and iterative deepening on the reversal
//! count makes the first solution found optimal.

use std::collections::HashSet;
use std::ops::ControlFlow;

use super::{for_each_embedding, Digraph, OrientedGraph, Tournament};
use crate::budget::Budget;

/// Result of [`distance_to_h_free`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distance {
    /// Exact minimum number of reversals.
    Exact(u64),
    /// Budget ran out; every value below `lower_bound` was refuted.
    Exhausted { lower_bound: u64 },
    /// Every tournament of this order contains the pattern.
    Unavoidable,
}

impl Distance {
    pub fn exact(self) -> Option<u64> {
        match self {
            Distance::Exact(d) => Some(d),
            Distance::Exhausted { .. } | Distance::Unavoidable => None,
        }
    }
}

type Pair = (usize, usize);

fn key(u: usize, v: usize) -> Pair {
    (u.min(v), u.max(v))
}

struct Search<'a> {
    pattern: &'a OrientedGraph,
    pattern_edges: Vec<(usize, usize)>,
    host: Tournament,
    frozen: HashSet<Pair>,
    budget: Budget,
}

impl Search<'_> {
    /// Each surviving copy as its list of reversible host pairs. Returns
    /// `None` when some copy has no reversible pair left (dead branch).
    fn free_copies(&self) -> Option<Vec<Vec<Pair>>> {
        let mut copies = Vec::new();
        let mut dead = false;
        let _ = for_each_embedding(&self.host, self.pattern, |m| {
            let mut free: Vec<Pair> = self
                .pattern_edges
                .iter()
                .map(|&(a, b)| key(m[a], m[b]))
                .filter(|p| !self.frozen.contains(p))
                .collect();
            if free.is_empty() {
                dead = true;
                return ControlFlow::Break(());
            }
            free.sort_unstable();
            copies.push(free);
            ControlFlow::Continue(())
        });
        if dead {
            None
        } else {
            Some(copies)
        }
    }

    /// Returns `Break(true)` on success, `Break(false)` when out of budget.
    fn dfs(&mut self, allowance: u64) -> ControlFlow<bool> {
        if !self.budget.tick() {
            return ControlFlow::Break(false);
        }
        let Some(mut copies) = self.free_copies() else {
            return ControlFlow::Continue(());
        };
        if copies.is_empty() {
            return ControlFlow::Break(true);
        }
        if packing_bound(&mut copies) > allowance {
            return ControlFlow::Continue(());
        }
        let branch = copies[0].clone();
        let mut kept = Vec::new();
        for &(u, v) in &branch {
            self.host.flip(u, v);
            self.frozen.insert((u, v));
            let r = self.dfs(allowance - 1);
            self.host.flip(u, v);
            if r.is_break() {
                // undo before unwinding so the caller sees a clean state
                self.frozen.remove(&(u, v));
                for p in &kept {
                    self.frozen.remove(p);
                }
                return r;
            }
            // later branches keep this pair in its original direction
            kept.push((u, v));
        }
        for p in &kept {
            self.frozen.remove(p);
        }
        ControlFlow::Continue(())
    }
}

/// Greedy packing of copies pairwise disjoint on reversible pairs. Sorts
/// `copies` by size first, so `copies[0]` is a smallest copy afterwards.
fn packing_bound(copies: &mut [Vec<Pair>]) -> u64 {
    copies.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut used: HashSet<Pair> = HashSet::new();
    let mut packed = 0;
    for c in copies.iter() {
        if c.iter().all(|p| !used.contains(p)) {
            used.extend(c.iter().copied());
            packed += 1;
        }
    }
    packed
}

/// Minimum number of edge reversals turning `t` into an `h`-free tournament.
///
/// Zero exactly when `t` has no copy of `h`. `budget` bounds the number of
/// search nodes; `None` means unlimited.
pub fn distance_to_h_free(t: &Tournament, h: &OrientedGraph, budget: Option<u64>) -> Distance {
    let mut search = Search {
        pattern: h,
        pattern_edges: h.edges(),
        host: t.clone(),
        frozen: HashSet::new(),
        budget: Budget::from_option(budget),
    };
    let mut start = match search.free_copies() {
        Some(mut copies) if !copies.is_empty() => packing_bound(&mut copies),
        Some(_) => return Distance::Exact(0),
        // an edgeless pattern that embeds at all cannot be destroyed
        None => return Distance::Unavoidable,
    };
    start = start.max(1);
    let n = t.order() as u64;
    let max = n * n.saturating_sub(1) / 2;
    for allowance in start..=max {
        match search.dfs(allowance) {
            ControlFlow::Break(true) => return Distance::Exact(allowance),
            ControlFlow::Break(false) => {
                return Distance::Exhausted {
                    lower_bound: allowance,
                }
            }
            ControlFlow::Continue(()) => {}
        }
    }
    // every orientation of the host pairs was refuted
    Distance::Unavoidable
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::count_embeddings;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Oracle: try every reversal subset of size <= `max` in increasing size.
    fn subset_oracle(t: &Tournament, h: &OrientedGraph, max: usize) -> Option<u64> {
        let n = t.order();
        let pairs: Vec<Pair> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .collect();
        fn go(
            t: &mut Tournament,
            h: &OrientedGraph,
            pairs: &[Pair],
            from: usize,
            left: usize,
        ) -> bool {
            if count_embeddings(t, h) == 0 {
                return true;
            }
            if left == 0 {
                return false;
            }
            for i in from..pairs.len() {
                let (u, v) = pairs[i];
                t.flip(u, v);
                let ok = go(t, h, pairs, i + 1, left - 1);
                t.flip(u, v);
                if ok {
                    return true;
                }
            }
            false
        }
        let mut work = t.clone();
        (0..=max).find(|&k| go(&mut work, h, &pairs, 0, k)).map(|k| k as u64)
    }

    #[test]
    fn cyclic_triangle_needs_one_reversal() {
        let c3 = OrientedGraph::cyclic_triangle();
        assert_eq!(
            distance_to_h_free(&Tournament::cyclic_triangle(), &c3, None),
            Distance::Exact(1)
        );
        assert_eq!(
            distance_to_h_free(&Tournament::transitive(7), &c3, None),
            Distance::Exact(0)
        );
    }

    #[test]
    fn unavoidable_patterns() {
        let edge = Tournament::transitive(2).into_oriented();
        let t = Tournament::cyclic_triangle();
        assert_eq!(distance_to_h_free(&t, &edge, None), Distance::Unavoidable);
        // TT3 sits in every tournament on four vertices
        let tt3 = Tournament::transitive(3).into_oriented();
        assert_eq!(distance_to_h_free(&Tournament::transitive(4), &tt3, None), Distance::Unavoidable);
        assert_eq!(distance_to_h_free(&t, &OrientedGraph::new(2), None), Distance::Unavoidable);
        assert_eq!(distance_to_h_free(&t, &OrientedGraph::new(4), None), Distance::Exact(0));
    }

    #[test]
    fn matches_subset_oracle_on_random_six_vertex_tournaments() {
        let c3 = OrientedGraph::cyclic_triangle();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut checked = 0;
        for _ in 0..40 {
            let t = Tournament::random(6, &mut rng);
            if let Some(expect) = subset_oracle(&t, &c3, 3) {
                assert_eq!(distance_to_h_free(&t, &c3, None), Distance::Exact(expect));
                checked += 1;
            }
        }
        assert!(checked > 20);
    }

    #[test]
    fn four_vertex_pattern_matches_oracle() {
        let h = OrientedGraph::from_edges(4, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 1)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..10 {
            let t = Tournament::random(6, &mut rng);
            if let Some(expect) = subset_oracle(&t, &h, 3) {
                assert_eq!(distance_to_h_free(&t, &h, None), Distance::Exact(expect));
            }
        }
    }

    #[test]
    fn tiny_budget_reports_lower_bound() {
        let c3 = OrientedGraph::cyclic_triangle();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let t = Tournament::random(9, &mut rng);
        let exact = distance_to_h_free(&t, &c3, None).exact().unwrap();
        match distance_to_h_free(&t, &c3, Some(1)) {
            Distance::Exhausted { lower_bound } => assert!(lower_bound <= exact),
            Distance::Exact(d) => assert_eq!(d, exact),
            Distance::Unavoidable => panic!("a triangle-free tournament exists"),
        }
    }
}
