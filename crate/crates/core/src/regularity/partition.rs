//! Refinement-loop partitioner and equipartition refinement.

use rayon::prelude::*;

use super::{
    audit_bipartition, check_delta, check_partition, count_matrix_copies, find_matrix_copy, within,
    BinaryMatrix, BipartitionPair,
};
use crate::digraph::{Digraph, Rational, Tournament};
use crate::error::{Error, Result};
use crate::bits;

/// Result of [`afn_partition`].
#[derive(Debug, Clone)]
pub enum AfnOutcome {
    /// A partition pair whose audit certifies homogeneity.
    Partition(BipartitionPair),
    /// The class limit was reached; `b` occurs in `a`.
    Copies {
        count: u128,
        rows: Vec<usize>,
        cols: Vec<usize>,
        best: BipartitionPair,
    },
    /// The class limit was reached and `b` does not occur.
    Inconclusive { best: BipartitionPair },
}

impl AfnOutcome {
    pub fn partition(&self) -> Option<&BipartitionPair> {
        match self {
            AfnOutcome::Partition(p) => Some(p),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Rows,
    Cols,
}

/// Splits row and column classes until the audit at `delta` passes.
///
/// Each round splits the class carrying the most non-homogeneous block
/// weight, at the median of its members' distances to the member farthest
/// from the class's first element. Distances compare per-class one counts
/// and fall back to whole rows when those tie. When a side would exceed
/// `max_classes` classes, the copy branch counts `b` in `a`.
pub fn afn_partition(a: &BinaryMatrix, b: &BinaryMatrix, delta: Rational, max_classes: usize) -> Result<AfnOutcome> {
    check_delta(delta)?;
    let n = a.dim();
    if n == 0 {
        return Err(Error::arg("empty matrix"));
    }
    if b.dim() > n {
        return Err(Error::arg("pattern larger than matrix"));
    }
    let mut rows = vec![(0..n).collect::<Vec<_>>()];
    let mut cols = rows.clone();
    loop {
        let audit = audit_bipartition(a, &rows, &cols, delta)?;
        if audit.is_homogeneous() {
            return Ok(AfnOutcome::Partition(audit));
        }
        let mut row_bad = vec![0u64; rows.len()];
        let mut col_bad = vec![0u64; cols.len()];
        for blk in audit.blocks.iter().filter(|b| !b.homogeneous) {
            row_bad[blk.row] += blk.size;
            col_bad[blk.col] += blk.size;
        }
        let mut pick: Option<(u64, Side, usize)> = None;
        for (side, bad, classes) in [(Side::Rows, &row_bad, &rows), (Side::Cols, &col_bad, &cols)] {
            if classes.len() >= max_classes {
                continue;
            }
            for (i, &w) in bad.iter().enumerate() {
                if w > 0 && classes[i].len() > 1 && pick.is_none_or(|(best, _, _)| w > best) {
                    pick = Some((w, side, i));
                }
            }
        }
        let Some((_, side, i)) = pick else {
            return Ok(match find_matrix_copy(a, b, false) {
                Some((r, c)) => AfnOutcome::Copies {
                    count: count_matrix_copies(a, b),
                    rows: r,
                    cols: c,
                    best: audit,
                },
                None => AfnOutcome::Inconclusive { best: audit },
            });
        };
        match side {
            Side::Rows => {
                let (lo, hi) = split_class(&rows[i], &cols, |r, c| a.get(r, c));
                rows[i] = lo;
                rows.push(hi);
            }
            Side::Cols => {
                let (lo, hi) = split_class(&cols[i], &rows, |c, r| a.get(r, c));
                cols[i] = lo;
                cols.push(hi);
            }
        }
    }
}

/// `entry(member, other)` reads the matrix along the class's side.
fn split_class(class: &[usize], others: &[Vec<usize>], entry: impl Fn(usize, usize) -> u8) -> (Vec<usize>, Vec<usize>) {
    let profile = |x: usize| -> Vec<i64> {
        others
            .iter()
            .map(|o| o.iter().map(|&y| entry(x, y) as i64).sum())
            .collect()
    };
    let profiles: Vec<Vec<i64>> = class.iter().map(|&x| profile(x)).collect();
    let l1 = |p: &[i64], q: &[i64]| -> i64 { p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum() };
    let mut dist: Vec<i64> = farthest_distances(class.len(), |i, j| l1(&profiles[i], &profiles[j]));
    if dist.iter().all(|&d| d == dist[0]) {
        let width = others.iter().map(|o| o.len()).sum::<usize>();
        let full: Vec<Vec<u8>> = class
            .iter()
            .map(|&x| {
                let mut all: Vec<(usize, u8)> = others.iter().flatten().map(|&y| (y, entry(x, y))).collect();
                all.sort_unstable();
                all.into_iter().map(|(_, v)| v).collect()
            })
            .collect();
        debug_assert!(full.iter().all(|r| r.len() == width));
        dist = farthest_distances(class.len(), |i, j| {
            full[i].iter().zip(&full[j]).filter(|(a, b)| a != b).count() as i64
        });
    }
    let mut order: Vec<usize> = (0..class.len()).collect();
    order.sort_by_key(|&i| (dist[i], class[i]));
    let half = class.len().div_ceil(2);
    let mut lo: Vec<usize> = order[..half].iter().map(|&i| class[i]).collect();
    let mut hi: Vec<usize> = order[half..].iter().map(|&i| class[i]).collect();
    lo.sort_unstable();
    hi.sort_unstable();
    (lo, hi)
}

/// Distances of every member to the member farthest from member 0.
fn farthest_distances(len: usize, d: impl Fn(usize, usize) -> i64) -> Vec<i64> {
    let far = (0..len).max_by_key(|&i| (d(0, i), std::cmp::Reverse(i))).unwrap_or(0);
    (0..len).map(|i| d(far, i)).collect()
}

/// Partition of a vertex set into parts whose sizes differ by at most one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equipartition {
    parts: Vec<Vec<usize>>,
}

impl Equipartition {
    /// Validates nonempty, pairwise disjoint parts of near-equal size.
    /// Parts are sorted internally.
    pub fn new(mut parts: Vec<Vec<usize>>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::arg("equipartition needs at least one part"));
        }
        let mut seen = std::collections::HashSet::new();
        for p in parts.iter_mut() {
            if p.is_empty() {
                return Err(Error::arg("equipartition part is empty"));
            }
            p.sort_unstable();
            for &v in p.iter() {
                if !seen.insert(v) {
                    return Err(Error::arg(format!("vertex {} in two parts", v + 1)));
                }
            }
        }
        let min = parts.iter().map(Vec::len).min().unwrap();
        let max = parts.iter().map(Vec::len).max().unwrap();
        if max - min > 1 {
            return Err(Error::arg(format!("part sizes range from {min} to {max}")));
        }
        Ok(Equipartition { parts })
    }

    /// The single part `{0, .., n-1}`.
    pub fn trivial(n: usize) -> Self {
        Equipartition {
            parts: vec![(0..n).collect()],
        }
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Number of vertices covered.
    pub fn support(&self) -> usize {
        self.parts.iter().map(Vec::len).sum()
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.parts.iter().flatten().copied().collect();
        v.sort_unstable();
        v
    }

    /// Index of the part of `coarse` containing each part, if every part
    /// lies inside a single coarse part.
    pub fn refines(&self, coarse: &Equipartition) -> Option<Vec<usize>> {
        let mut owner = std::collections::HashMap::new();
        for (i, p) in coarse.parts.iter().enumerate() {
            for &v in p {
                owner.insert(v, i);
            }
        }
        self.parts
            .iter()
            .map(|p| {
                let first = *owner.get(&p[0])?;
                p.iter().all(|v| owner.get(v) == Some(&first)).then_some(first)
            })
            .collect()
    }
}

/// Ordered pair `(V_i, V_j)` of an equipartition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairAudit {
    pub i: usize,
    pub j: usize,
    /// Edges from `V_i` to `V_j`.
    pub edges: u64,
    pub size: u64,
    pub homogeneous: bool,
    /// Dominant direction is `V_i -> V_j`.
    pub forward: bool,
}

/// Homogeneity audit of all ordered pairs of distinct parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquipartitionAudit {
    pub delta: Rational,
    pub pairs: Vec<PairAudit>,
    /// Weight `|V_i||V_j| / m^2` of non-homogeneous ordered pairs, where
    /// `m` is the number of covered vertices.
    pub bad_weight: Rational,
}

impl EquipartitionAudit {
    pub fn is_homogeneous(&self) -> bool {
        self.bad_weight <= self.delta
    }

    pub fn pair(&self, i: usize, j: usize) -> &PairAudit {
        let q = (1 + 4 * self.pairs.len()).isqrt().div_ceil(2);
        debug_assert_eq!(q * (q - 1), self.pairs.len());
        &self.pairs[i * (q - 1) + if j < i { j } else { j - 1 }]
    }
}

/// Audits every ordered pair of distinct parts of `p` in `t`.
pub fn audit_equipartition(t: &Tournament, p: &Equipartition, delta: Rational) -> Result<EquipartitionAudit> {
    check_delta(delta)?;
    let n = t.order();
    if let Some(&v) = p.parts.iter().flatten().find(|&&v| v >= n) {
        return Err(Error::arg(format!("vertex {} out of range", v + 1)));
    }
    let q = p.len();
    let masks: Vec<Vec<u64>> = p.parts.iter().map(|part| bits::row_from(n, part.iter().copied())).collect();
    let ordered: Vec<(usize, usize)> = (0..q)
        .flat_map(|i| (0..q).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let pairs: Vec<PairAudit> = ordered
        .par_iter()
        .map(|&(i, j)| {
            let edges: u64 = p.parts[i]
                .iter()
                .map(|&u| bits::count_and(t.out_row(u), &masks[j]) as u64)
                .sum();
            let size = (p.parts[i].len() * p.parts[j].len()) as u64;
            PairAudit {
                i,
                j,
                edges,
                size,
                homogeneous: within(edges.min(size - edges), size, delta),
                forward: 2 * edges >= size,
            }
        })
        .collect();
    let m = p.support() as i64;
    let bad: u64 = pairs.iter().filter(|x| !x.homogeneous).map(|x| x.size).sum();
    Ok(EquipartitionAudit {
        delta,
        pairs,
        bad_weight: Rational::new(bad as i64, (m * m).max(1)),
    })
}

/// Output of [`refine_to_equipartition`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refinement {
    pub partition: Equipartition,
    /// Size of every output part.
    pub part_size: usize,
    /// Leftover pool size `|Z_i|` for each input part.
    pub leftovers: Vec<usize>,
    /// Vertices dropped so the part count comes out exactly `q`.
    pub truncated: Vec<usize>,
}

/// Refines `p` along the rows `r` and columns `c` into exactly `q` parts
/// of size `floor(m / q)`, `m` being the number of vertices `p` covers.
///
/// Each cell `P_i ∩ R ∩ C` is chopped into parts of the target size; the
/// remainders of all cells of `P_i` are pooled and chopped the same way.
/// Parts beyond `q / |p|` per input part are dropped, last pool parts
/// first, and reported as truncated.
pub fn refine_to_equipartition(
    t: &Tournament,
    p: &Equipartition,
    r: &[Vec<usize>],
    c: &[Vec<usize>],
    q: usize,
) -> Result<Refinement> {
    let n = t.order();
    check_partition(n, r)?;
    check_partition(n, c)?;
    if let Some(&v) = p.parts.iter().flatten().find(|&&v| v >= n) {
        return Err(Error::arg(format!("vertex {} out of range", v + 1)));
    }
    let m = p.support();
    if q == 0 || q > m {
        return Err(Error::arg(format!("part count {q} must lie in 1..={m}")));
    }
    if !q.is_multiple_of(p.len()) {
        return Err(Error::arg(format!(
            "part count {q} is not a multiple of the {} input parts",
            p.len()
        )));
    }
    let size = m / q;
    let quota = q / p.len();
    let mut row_of = vec![0; n];
    let mut col_of = vec![0; n];
    for (i, part) in r.iter().enumerate() {
        part.iter().for_each(|&v| row_of[v] = i);
    }
    for (i, part) in c.iter().enumerate() {
        part.iter().for_each(|&v| col_of[v] = i);
    }
    let mut parts = Vec::with_capacity(q);
    let mut leftovers = Vec::new();
    let mut truncated = Vec::new();
    for part in &p.parts {
        let mut cells = vec![Vec::new(); r.len() * c.len()];
        for &v in part {
            cells[row_of[v] * c.len() + col_of[v]].push(v);
        }
        let mut chunks = Vec::new();
        let mut pool = Vec::new();
        for cell in &cells {
            let full = cell.len() / size * size;
            chunks.extend(cell[..full].chunks(size).map(<[usize]>::to_vec));
            pool.extend_from_slice(&cell[full..]);
        }
        leftovers.push(pool.len());
        let full = pool.len() / size * size;
        chunks.extend(pool[..full].chunks(size).map(<[usize]>::to_vec));
        truncated.extend_from_slice(&pool[full..]);
        if chunks.len() < quota {
            return Err(Error::arg(format!(
                "input part of size {} cannot hold {quota} parts of size {size}",
                part.len()
            )));
        }
        for extra in chunks.drain(quota..) {
            truncated.extend(extra);
        }
        parts.extend(chunks);
    }
    truncated.sort_unstable();
    Ok(Refinement {
        partition: Equipartition::new(parts)?,
        part_size: size,
        leftovers,
        truncated,
    })
}
