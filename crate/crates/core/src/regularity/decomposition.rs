//! Two-pass strong decomposition with sampled representative parts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::partition::{afn_partition, audit_equipartition, refine_to_equipartition, AfnOutcome, Equipartition, Refinement};
use super::{
    at_most, check_delta, count_matrix_copies_off_diagonal, find_matrix_copy, within, BinaryMatrix,
};
use crate::bits;
use crate::digraph::{Digraph, Rational, Tournament};
use crate::error::{Error, Result};

/// Search limits for [`strong_decomposition`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecompositionLimits {
    /// Class limit per side handed to the partitioner.
    pub afn_classes: usize,
    /// Number of representative samples tried.
    pub retries: usize,
}

impl Default for DecompositionLimits {
    fn default() -> Self {
        DecompositionLimits {
            afn_classes: 64,
            retries: 64,
        }
    }
}

/// Audit of a decomposition `Q_1..Q_q` with `W_i ⊆ Q_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionAudit {
    pub q: usize,
    /// Pairs `i < j` where `(Q_i, Q_j)` is not homogeneous or `(W_i, W_j)`
    /// points the other way.
    pub item1_failures: usize,
    /// `item1_failures <= delta q^2`.
    pub item1_ok: bool,
    /// Pairs `i < j` where `(W_i, W_j)` is not homogeneous.
    pub item2_failures: usize,
    pub min_w: usize,
    /// `min |W_i| / n`.
    pub min_w_fraction: Rational,
    /// Every `W_i` is a nonempty subset of `Q_i`.
    pub nested: bool,
}

impl DecompositionAudit {
    pub fn passes(&self) -> bool {
        self.nested && self.item1_ok && self.item2_failures == 0
    }
}

/// A decomposition that passed its audit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongDecomposition {
    pub delta: Rational,
    pub q_parts: Equipartition,
    /// The finer equipartition the representatives are drawn from.
    pub fine_parts: Equipartition,
    pub w: Vec<Vec<usize>>,
    /// Sampled vertex `w_i` for each `Q_i`.
    pub samples: Vec<usize>,
    /// `2 q^4`.
    pub gamma_inverse: u128,
    /// Vertices dropped by the two refinements.
    pub truncated: Vec<usize>,
    /// Class counts of the two partitioner passes.
    pub classes: [(usize, usize); 2],
    pub attempts: usize,
    pub audit: DecompositionAudit,
}

/// Result of [`strong_decomposition`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompositionOutcome {
    Decomposed(StrongDecomposition),
    /// The partitioner hit its class limit in pass `stage` and the bipartite
    /// pattern occurs off the diagonal.
    Copies {
        stage: usize,
        count: u128,
        rows: Vec<usize>,
        cols: Vec<usize>,
    },
    Inconclusive {
        stage: usize,
        reason: String,
    },
}

pub fn gamma_inverse(q: usize) -> u128 {
    2 * (q as u128).pow(4)
}

/// `num / den` as a rational; values below `1 / n^2` act exactly like
/// zero on an `n`-vertex instance and are replaced by `1 / (n^2 + 1)`.
fn effective(num: u128, den: u128, n: usize) -> Rational {
    let n2 = (n * n) as u128;
    if num * n2 < den {
        return Rational::new(1, n2 as i64 + 1);
    }
    Rational::new(num as i64, den as i64)
}

/// `(delta^2 / 3)` as `(num, den)`.
fn afn_parameter(num: u128, den: u128) -> (u128, u128) {
    (num * num, 3 * den * den)
}

fn pass(
    t: &Tournament,
    a: &BinaryMatrix,
    f: &BinaryMatrix,
    coarse: &Equipartition,
    (num, den): (u128, u128),
    min_q: usize,
    limits: DecompositionLimits,
    stage: usize,
) -> Result<std::result::Result<(Refinement, (usize, usize)), DecompositionOutcome>> {
    let n = t.order();
    let (an, ad) = afn_parameter(num, den);
    let split = match afn_partition(a, f, effective(an, ad, n), limits.afn_classes)? {
        AfnOutcome::Partition(p) => p,
        AfnOutcome::Copies { .. } | AfnOutcome::Inconclusive { .. } => {
            let count = count_matrix_copies_off_diagonal(a, f);
            return Ok(Err(match find_matrix_copy(a, f, true) {
                Some((rows, cols)) => DecompositionOutcome::Copies {
                    stage,
                    count,
                    rows,
                    cols,
                },
                None => DecompositionOutcome::Inconclusive {
                    stage,
                    reason: format!("class limit {} reached without a copy of the pattern", limits.afn_classes),
                },
            }));
        }
    };
    let delta = effective(num, den, n);
    let p = coarse.len();
    let m = coarse.support();
    // the prescribed count 6 p |R| |C| / delta first, then every admissible
    // multiple of p upward; singletons always pass
    let prescribed = 6 * p as u128 * (split.rows.len() * split.cols.len()) as u128 * den / num.max(1);
    let lowest = min_q.max(p).div_ceil(p) * p;
    let mut candidates: Vec<usize> = Vec::new();
    if prescribed <= m as u128 {
        candidates.push((prescribed as usize).div_ceil(p) * p);
    }
    candidates.extend((lowest..=m).step_by(p));
    for q in candidates {
        if q > m || q < lowest {
            continue;
        }
        let refined = refine_to_equipartition(t, coarse, &split.rows, &split.cols, q)?;
        if audit_equipartition(t, &refined.partition, delta)?.is_homogeneous() {
            return Ok(Ok((refined, (split.rows.len(), split.cols.len()))));
        }
    }
    Ok(Err(DecompositionOutcome::Inconclusive {
        stage,
        reason: format!("no homogeneous refinement with at least {lowest} parts"),
    }))
}

/// Edge count from `x` to `y`.
fn edges(t: &Tournament, x: &[usize], ymask: &[u64]) -> u64 {
    x.iter().map(|&u| bits::count_and(t.out_row(u), ymask) as u64).sum()
}

/// Audits items 1 and 2 and reports the representative sizes, all
/// recomputed from the tournament.
pub fn audit_decomposition(t: &Tournament, q_parts: &Equipartition, w: &[Vec<usize>], delta: Rational) -> Result<DecompositionAudit> {
    check_delta(delta)?;
    let n = t.order();
    let q = q_parts.len();
    if w.len() != q {
        return Err(Error::arg(format!("{} representatives for {q} parts", w.len())));
    }
    let nested = w
        .iter()
        .zip(q_parts.parts())
        .all(|(wi, qi)| !wi.is_empty() && wi.iter().all(|v| qi.contains(v)));
    let qmask: Vec<Vec<u64>> = q_parts.parts().iter().map(|p| bits::row_from(n, p.iter().copied())).collect();
    let wmask: Vec<Vec<u64>> = w.iter().map(|p| bits::row_from(n, p.iter().copied())).collect();
    let mut item1 = 0;
    let mut item2 = 0;
    for i in 0..q {
        for j in i + 1..q {
            let qs = (q_parts.parts()[i].len() * q_parts.parts()[j].len()) as u64;
            let qe = edges(t, &q_parts.parts()[i], &qmask[j]);
            let ws = (w[i].len() * w[j].len()) as u64;
            let we = edges(t, &w[i], &wmask[j]);
            let w_hom = ws > 0 && within(we.min(ws - we), ws, delta);
            if !w_hom {
                item2 += 1;
            }
            let q_hom = within(qe.min(qs - qe), qs, delta);
            if !q_hom || (2 * qe >= qs) != (2 * we >= ws) {
                item1 += 1;
            }
        }
    }
    let min_w = w.iter().map(Vec::len).min().unwrap_or(0);
    Ok(DecompositionAudit {
        q,
        item1_failures: item1,
        item1_ok: at_most(item1 as u64, (q * q) as u64, delta),
        item2_failures: item2,
        min_w,
        min_w_fraction: Rational::new(min_w as i64, n.max(1) as i64),
        nested,
    })
}

/// Strong decomposition of `t` with respect to the bipartite pattern whose
/// bipartite adjacency matrix is `f`.
///
/// First pass: partitioner at `(delta/5)^2 / 3`, refinement to a
/// `delta/5`-homogeneous equipartition `Q` with at least `1/delta` parts.
/// Second pass: the same at `gamma = 1 / (2 q^4)`, refining `Q`. Then one
/// vertex `w_i` is drawn from each `Q_i` and `W_i` is its part in the finer
/// partition, redrawn until every `(W_i, W_j)` is homogeneous and at most
/// `4 delta q^2 / 5` pairs flip direction.
pub fn strong_decomposition(
    t: &Tournament,
    f: &BinaryMatrix,
    delta: Rational,
    seed: u64,
    limits: DecompositionLimits,
) -> Result<DecompositionOutcome> {
    check_delta(delta)?;
    let n = t.order();
    let min_q = (*delta.denom() as usize).div_ceil(*delta.numer() as usize);
    if n < min_q {
        return Err(Error::arg(format!("{n} vertices cannot hold {min_q} parts")));
    }
    let a = BinaryMatrix::of_tournament(t);
    let (dn, dd) = (*delta.numer() as u128, 5 * *delta.denom() as u128);
    let (first, c1) = match pass(t, &a, f, &Equipartition::trivial(n), (dn, dd), min_q, limits, 1)? {
        Ok(x) => x,
        Err(out) => return Ok(out),
    };
    let q_parts = first.partition;
    let q = q_parts.len();
    let ginv = gamma_inverse(q);
    let (second, c2) = match pass(t, &a, f, &q_parts, (1, ginv), q, limits, 2)? {
        Ok(x) => x,
        Err(out) => return Ok(out),
    };
    let fine = second.partition;
    let owner = fine.refines(&q_parts).ok_or_else(|| Error::Invariant("second pass does not refine the first".into()))?;
    let pools: Vec<Vec<usize>> = (0..q)
        .map(|i| {
            owner
                .iter()
                .enumerate()
                .filter(|&(_, &o)| o == i)
                .flat_map(|(k, _)| fine.parts()[k].iter().copied())
                .collect()
        })
        .collect();
    let part_of = |v: usize| fine.parts().iter().position(|p| p.contains(&v)).unwrap();
    let qmask: Vec<Vec<u64>> = q_parts.parts().iter().map(|p| bits::row_from(n, p.iter().copied())).collect();
    let q_edges: Vec<Vec<u64>> = (0..q)
        .map(|i| (0..q).map(|j| if i == j { 0 } else { edges(t, &q_parts.parts()[i], &qmask[j]) }).collect())
        .collect();
    let d5 = Rational::new(*delta.numer(), 5 * *delta.denom());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut truncated = first.truncated;
    truncated.extend(second.truncated);
    truncated.sort_unstable();
    for attempt in 1..=limits.retries {
        let samples: Vec<usize> = pools.iter().map(|p| p[rng.gen_range(0..p.len())]).collect();
        let w: Vec<Vec<usize>> = samples.iter().map(|&v| fine.parts()[part_of(v)].clone()).collect();
        let wmask: Vec<Vec<u64>> = w.iter().map(|p| bits::row_from(n, p.iter().copied())).collect();
        let mut a1 = true;
        let mut bad = 0u64;
        for i in 0..q {
            for j in i + 1..q {
                let ws = (w[i].len() * w[j].len()) as u64;
                let we = edges(t, &w[i], &wmask[j]);
                a1 &= within(we.min(ws - we), ws, delta);
                let qs = (q_parts.parts()[i].len() * q_parts.parts()[j].len()) as u64;
                let qe = q_edges[i][j];
                let forward = within(qs - qe, qs, d5);
                let backward = within(qe, qs, d5);
                if (forward && within(we, ws, delta)) || (backward && within(ws - we, ws, delta)) {
                    bad += 1;
                }
            }
        }
        // A2: bad <= 4 delta q^2 / 5
        let a2 = (bad as i128) * 5 * (*delta.denom() as i128) <= 4 * (*delta.numer() as i128) * (q * q) as i128;
        if a1 && a2 {
            let audit = audit_decomposition(t, &q_parts, &w, delta)?;
            return Ok(DecompositionOutcome::Decomposed(StrongDecomposition {
                delta,
                q_parts,
                fine_parts: fine,
                w,
                samples,
                gamma_inverse: ginv,
                truncated,
                classes: [c1, c2],
                attempts: attempt,
                audit,
            }));
        }
    }
    Ok(DecompositionOutcome::Inconclusive {
        stage: 3,
        reason: format!("{} representative samples all failed", limits.retries),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f22() -> BinaryMatrix {
        BinaryMatrix::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap()
    }

    #[test]
    fn transitive_tournament_decomposes_trivially() {
        let t = Tournament::transitive(40);
        let delta = Rational::new(1, 4);
        let out = strong_decomposition(&t, &f22(), delta, 1, DecompositionLimits::default()).unwrap();
        let DecompositionOutcome::Decomposed(d) = out else {
            panic!("expected a decomposition, got {out:?}");
        };
        assert!(d.q_parts.len() >= 4);
        assert!(d.audit.passes());
        assert_eq!(d.audit.item1_failures, 0);
        let again = audit_decomposition(&t, &d.q_parts, &d.w, delta).unwrap();
        assert_eq!(again, d.audit);
        assert!(audit_equipartition(&t, &d.q_parts, Rational::new(1, 20)).unwrap().is_homogeneous());
    }

    #[test]
    fn random_tournament_passes_audit_or_takes_copy_branch() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let t = Tournament::random(60, &mut rng);
        let delta = Rational::new(1, 4);
        for classes in [8, 120] {
            let limits = DecompositionLimits { afn_classes: classes, retries: 32 };
            match strong_decomposition(&t, &f22(), delta, 5, limits).unwrap() {
                DecompositionOutcome::Decomposed(d) => {
                    let audit = audit_decomposition(&t, &d.q_parts, &d.w, delta).unwrap();
                    assert!(audit.passes());
                }
                DecompositionOutcome::Copies { count, rows, cols, .. } => {
                    let a = BinaryMatrix::of_tournament(&t);
                    assert_eq!(count, count_matrix_copies_off_diagonal(&a, &f22()));
                    assert!(rows.iter().all(|r| !cols.contains(r)));
                }
                DecompositionOutcome::Inconclusive { reason, .. } => panic!("{reason}"),
            }
        }
    }

    #[test]
    fn same_seed_same_representatives() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let t = Tournament::random(30, &mut rng);
        let delta = Rational::new(1, 3);
        let limits = DecompositionLimits { afn_classes: 64, retries: 16 };
        let a = strong_decomposition(&t, &f22(), delta, 9, limits).unwrap();
        let b = strong_decomposition(&t, &f22(), delta, 9, limits).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tiny_parameters_are_clamped_exactly() {
        assert_eq!(effective(1, 2 * 10u128.pow(8), 10), Rational::new(1, 101));
        assert_eq!(effective(1, 50, 10), Rational::new(1, 50));
    }
}
