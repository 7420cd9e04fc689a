//! Matrix regularity: block homogeneity audits, ordered submatrix counting,
//! a refinement-loop partitioner, equipartition refinement and the strong
//! decomposition pipeline.
//!
//! Thresholds are exact rationals. Comparisons go through `i128` so tiny
//! parameters such as `1 / (2 q^4)` never overflow.

mod decomposition;
mod partition;

use rayon::prelude::*;

use crate::digraph::{Digraph, Rational, Tournament};
use crate::error::{Error, Result};

pub use decomposition::{
    audit_decomposition, gamma_inverse, strong_decomposition, DecompositionAudit, DecompositionLimits,
    DecompositionOutcome, StrongDecomposition,
};
pub use partition::{
    afn_partition, audit_equipartition, refine_to_equipartition, AfnOutcome, Equipartition,
    EquipartitionAudit, PairAudit, Refinement,
};

/// Square 0/1 matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    n: usize,
    entries: Vec<u8>,
}

impl BinaryMatrix {
    pub fn zeros(n: usize) -> Self {
        BinaryMatrix {
            n,
            entries: vec![0; n * n],
        }
    }

    pub fn ones(n: usize) -> Self {
        BinaryMatrix {
            n,
            entries: vec![1; n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = BinaryMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.entries[i * n + j] = f(i, j) as u8;
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        let mut m = BinaryMatrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::arg(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    n
                )));
            }
            for (j, &x) in row.iter().enumerate() {
                if x > 1 {
                    return Err(Error::arg(format!("entry ({}, {}) is not 0/1", i + 1, j + 1)));
                }
                m.entries[i * n + j] = x;
            }
        }
        Ok(m)
    }

    /// `A[i][j] = 1` iff `i -> j`; zero diagonal.
    pub fn of_tournament(t: &Tournament) -> Self {
        BinaryMatrix::from_fn(t.order(), |i, j| t.has_edge(i, j))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.entries[i * self.n + j] = value as u8;
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        self.entries.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn count_ones(&self) -> u64 {
        self.entries.iter().map(|&x| x as u64).sum()
    }
}

impl std::fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "BinaryMatrix({})", self.n)?;
        for i in 0..self.n {
            for j in 0..self.n {
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// `minority <= delta * size`, i.e. the dominant value fills at least a
/// `1 - delta` fraction.
pub(crate) fn within(minority: u64, size: u64, delta: Rational) -> bool {
    (minority as i128) * (*delta.denom() as i128) <= (*delta.numer() as i128) * (size as i128)
}

/// `x <= delta` for `x = num / den`.
pub(crate) fn at_most(num: u64, den: u64, delta: Rational) -> bool {
    (num as i128) * (*delta.denom() as i128) <= (*delta.numer() as i128) * (den as i128)
}

pub(crate) fn check_delta(delta: Rational) -> Result<()> {
    if delta <= Rational::from_integer(0) || delta >= Rational::new(1, 2) {
        return Err(Error::arg(format!("delta must lie in (0, 1/2), got {delta}")));
    }
    Ok(())
}

/// Checks that `parts` are nonempty and partition `0..n`.
pub fn check_partition(n: usize, parts: &[Vec<usize>]) -> Result<()> {
    let mut seen = vec![false; n];
    for (i, p) in parts.iter().enumerate() {
        if p.is_empty() {
            return Err(Error::arg(format!("part {} is empty", i + 1)));
        }
        for &v in p {
            if v >= n {
                return Err(Error::arg(format!("index {} out of range", v + 1)));
            }
            if seen[v] {
                return Err(Error::arg(format!("index {} appears twice", v + 1)));
            }
            seen[v] = true;
        }
    }
    if let Some(v) = seen.iter().position(|&s| !s) {
        return Err(Error::arg(format!("index {} is not covered", v + 1)));
    }
    Ok(())
}

/// Statistics of one block `R_i x C_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockAudit {
    pub row: usize,
    pub col: usize,
    pub ones: u64,
    pub size: u64,
    /// 1 when ones fill at least half the block.
    pub dominant: u8,
    pub homogeneous: bool,
    /// `|R_i| |C_j| / n^2`.
    pub weight: Rational,
}

/// A row partition, a column partition and the audit of every block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartitionPair {
    pub rows: Vec<Vec<usize>>,
    pub cols: Vec<Vec<usize>>,
    pub delta: Rational,
    pub blocks: Vec<BlockAudit>,
    /// Total weight of non-homogeneous blocks.
    pub bad_weight: Rational,
}

impl BipartitionPair {
    pub fn is_homogeneous(&self) -> bool {
        self.bad_weight <= self.delta
    }

    pub fn block(&self, i: usize, j: usize) -> &BlockAudit {
        &self.blocks[i * self.cols.len() + j]
    }
}

/// Audits the blocks `R_i x C_j` of `a` at homogeneity level `delta`.
pub fn audit_bipartition(
    a: &BinaryMatrix,
    rows: &[Vec<usize>],
    cols: &[Vec<usize>],
    delta: Rational,
) -> Result<BipartitionPair> {
    check_delta(delta)?;
    let n = a.dim();
    check_partition(n, rows)?;
    check_partition(n, cols)?;
    let cells: Vec<(usize, usize)> = (0..rows.len())
        .flat_map(|i| (0..cols.len()).map(move |j| (i, j)))
        .collect();
    let n2 = (n * n) as i64;
    let blocks: Vec<BlockAudit> = cells
        .par_iter()
        .map(|&(i, j)| {
            let mut ones = 0u64;
            for &r in &rows[i] {
                for &c in &cols[j] {
                    ones += a.get(r, c) as u64;
                }
            }
            let size = (rows[i].len() * cols[j].len()) as u64;
            let dominant = (2 * ones >= size) as u8;
            let minority = ones.min(size - ones);
            BlockAudit {
                row: i,
                col: j,
                ones,
                size,
                dominant,
                homogeneous: within(minority, size, delta),
                weight: Rational::new(size as i64, n2),
            }
        })
        .collect();
    let bad: u64 = blocks.iter().filter(|b| !b.homogeneous).map(|b| b.size).sum();
    Ok(BipartitionPair {
        rows: rows.to_vec(),
        cols: cols.to_vec(),
        delta,
        blocks,
        bad_weight: Rational::new(bad as i64, n2),
    })
}

/// Number of row sequences `r_1 < .. < r_k` and column sequences
/// `c_1 < .. < c_k` with `A[r_i][c_j] = B[i][j]`.
pub fn count_matrix_copies(a: &BinaryMatrix, b: &BinaryMatrix) -> u128 {
    count_copies(a, b, false)
}

/// [`count_matrix_copies`] restricted to copies whose row and column index
/// sets are disjoint, i.e. copies avoiding the main diagonal.
pub fn count_matrix_copies_off_diagonal(a: &BinaryMatrix, b: &BinaryMatrix) -> u128 {
    count_copies(a, b, true)
}

/// Row and column index sequences of one copy of `b` in `a`.
pub fn find_matrix_copy(a: &BinaryMatrix, b: &BinaryMatrix, off_diagonal: bool) -> Option<(Vec<usize>, Vec<usize>)> {
    let (n, k) = (a.dim(), b.dim());
    if k > n {
        return None;
    }
    let targets = column_targets(b);
    let mut found = None;
    for_each_combination(n, k, &mut |rows| {
        match first_column_match(a, rows, &targets, off_diagonal) {
            Some(cols) => {
                found = Some((rows.to_vec(), cols));
                None
            }
            None => Some(()),
        }
    });
    found
}

fn column_targets(b: &BinaryMatrix) -> Vec<u64> {
    (0..b.dim())
        .map(|j| (0..b.dim()).fold(0u64, |m, i| m | (b.get(i, j) as u64) << i))
        .collect()
}

fn column_pattern(a: &BinaryMatrix, rows: &[usize], c: usize) -> u64 {
    rows.iter()
        .enumerate()
        .fold(0u64, |m, (i, &r)| m | (a.get(r, c) as u64) << i)
}

fn first_column_match(a: &BinaryMatrix, rows: &[usize], targets: &[u64], off_diagonal: bool) -> Option<Vec<usize>> {
    let mut cols = Vec::with_capacity(targets.len());
    for c in 0..a.dim() {
        if cols.len() == targets.len() {
            break;
        }
        if off_diagonal && rows.contains(&c) {
            continue;
        }
        if column_pattern(a, rows, c) == targets[cols.len()] {
            cols.push(c);
        }
    }
    // greedy leftmost matching is complete for subsequence search
    (cols.len() == targets.len()).then_some(cols)
}

fn count_copies(a: &BinaryMatrix, b: &BinaryMatrix, off_diagonal: bool) -> u128 {
    let (n, k) = (a.dim(), b.dim());
    assert!(k <= 64, "pattern too large");
    if k > n {
        return 0;
    }
    if k == 0 {
        return 1;
    }
    let targets = column_targets(b);
    let mut total = 0u128;
    let mut dp = vec![0u128; k + 1];
    for_each_combination(n, k, &mut |rows| {
        dp.iter_mut().for_each(|x| *x = 0);
        dp[0] = 1;
        for c in 0..n {
            if off_diagonal && rows.contains(&c) {
                continue;
            }
            let pat = column_pattern(a, rows, c);
            for j in (0..k).rev() {
                if targets[j] == pat {
                    dp[j + 1] += dp[j];
                }
            }
        }
        total += dp[k];
        Some(())
    });
    total
}

/// Calls `f` on every increasing `k`-sequence from `0..n` until it returns
/// `None`.
fn for_each_combination(n: usize, k: usize, f: &mut impl FnMut(&[usize]) -> Option<()>) {
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        if f(&c).is_none() {
            return;
        }
        let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else {
            return;
        };
        c[i] += 1;
        for j in i + 1..k {
            c[j] = c[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> BinaryMatrix {
        BinaryMatrix::from_fn(n, |_, _| rng.gen())
    }

    fn random_partition(n: usize, parts: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); parts];
        for v in 0..n {
            out[if v < parts { v } else { rng.gen_range(0..parts) }].push(v);
        }
        out
    }

    #[test]
    fn singleton_partition_is_homogeneous() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = random_matrix(9, &mut rng);
        let singles: Vec<Vec<usize>> = (0..9).map(|v| vec![v]).collect();
        let audit = audit_bipartition(&a, &singles, &singles, Rational::new(1, 10)).unwrap();
        assert!(audit.blocks.iter().all(|b| b.homogeneous));
        assert_eq!(audit.bad_weight, Rational::from_integer(0));
    }

    #[test]
    fn all_ones_is_homogeneous_for_any_partition() {
        let a = BinaryMatrix::ones(10);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let r = random_partition(10, 3, &mut rng);
        let c = random_partition(10, 4, &mut rng);
        let audit = audit_bipartition(&a, &r, &c, Rational::new(1, 100)).unwrap();
        assert!(audit.is_homogeneous());
        assert!(audit.blocks.iter().all(|b| b.dominant == 1));
    }

    #[test]
    fn audit_matches_entrywise_recount() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let delta = Rational::new(1, 5);
        for _ in 0..10 {
            let a = random_matrix(20, &mut rng);
            let r = random_partition(20, 4, &mut rng);
            let c = random_partition(20, 4, &mut rng);
            let audit = audit_bipartition(&a, &r, &c, delta).unwrap();
            let mut bad = Rational::from_integer(0);
            for (i, ri) in r.iter().enumerate() {
                for (j, cj) in c.iter().enumerate() {
                    let cells: Vec<u8> = ri.iter().flat_map(|&x| cj.iter().map(move |&y| (x, y))).map(|(x, y)| a.get(x, y)).collect();
                    let ones = cells.iter().filter(|&&x| x == 1).count();
                    let frac = Rational::new(ones as i64, cells.len() as i64);
                    let dom = if frac >= Rational::new(1, 2) { frac } else { Rational::from_integer(1) - frac };
                    let hom = dom >= Rational::from_integer(1) - delta;
                    let b = audit.block(i, j);
                    assert_eq!(b.ones as usize, ones);
                    assert_eq!(b.homogeneous, hom);
                    if !hom {
                        bad += Rational::new(cells.len() as i64, 400);
                    }
                }
            }
            assert_eq!(audit.bad_weight, bad);
            let total: Rational = audit.blocks.iter().map(|b| b.weight).sum();
            assert_eq!(total, Rational::from_integer(1));
        }
    }

    #[test]
    fn invalid_partitions_are_rejected() {
        let a = BinaryMatrix::zeros(4);
        let ok = vec![vec![0, 1, 2, 3]];
        let d = Rational::new(1, 4);
        assert!(audit_bipartition(&a, &[vec![0, 1], vec![1, 2, 3]], &ok, d).is_err());
        assert!(audit_bipartition(&a, &[vec![0, 1]], &ok, d).is_err());
        assert!(audit_bipartition(&a, &ok, &ok, Rational::new(1, 2)).is_err());
    }

    #[test]
    fn one_by_one_pattern_counts_ones() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_matrix(7, &mut rng);
        let b = BinaryMatrix::ones(1);
        assert_eq!(count_matrix_copies(&a, &b), a.count_ones() as u128);
    }

    #[test]
    fn matrix_contains_itself() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_matrix(5, &mut rng);
        assert!(count_matrix_copies(&a, &a) >= 1);
    }

    fn brute_count(a: &BinaryMatrix, b: &BinaryMatrix) -> u128 {
        let n = a.dim();
        let mut pairs = Vec::new();
        for x in 0..n {
            for y in x + 1..n {
                pairs.push([x, y]);
            }
        }
        let mut count = 0;
        for r in &pairs {
            for c in &pairs {
                if (0..2).all(|i| (0..2).all(|j| a.get(r[i], c[j]) == b.get(i, j))) {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn two_by_two_counts_match_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let a = random_matrix(6, &mut rng);
            for code in 0..16u32 {
                let b = BinaryMatrix::from_fn(2, |i, j| code >> (2 * i + j) & 1 == 1);
                assert_eq!(count_matrix_copies(&a, &b), brute_count(&a, &b));
            }
        }
    }

    /// Injections of `M ∪ N` increasing on each side with `x -> y` exactly
    /// where `B[x][y] = 1`.
    fn bipartite_copies(t: &Tournament, b: &BinaryMatrix) -> u128 {
        let mut count = 0;
        let mut img = vec![0usize; 2 * b.dim()];
        fn go(t: &Tournament, b: &BinaryMatrix, img: &mut Vec<usize>, at: usize, count: &mut u128) {
            let (n, k) = (t.order(), b.dim());
            if at == 2 * k {
                if (0..k).all(|x| (0..k).all(|y| t.beats(img[x], img[k + y]) == (b.get(x, y) == 1))) {
                    *count += 1;
                }
                return;
            }
            let start = if at.is_multiple_of(k) { 0 } else { img[at - 1] + 1 };
            for v in start..n {
                if img[..at].contains(&v) {
                    continue;
                }
                img[at] = v;
                go(t, b, img, at + 1, count);
            }
        }
        go(t, b, &mut img, 0, &mut count);
        count
    }

    #[test]
    fn off_diagonal_copies_are_bipartite_copies() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in 4..=8 {
            for k in 1..=3 {
                if 2 * k > n {
                    continue;
                }
                let t = Tournament::random(n, &mut rng);
                let b = random_matrix(k, &mut rng);
                let a = BinaryMatrix::of_tournament(&t);
                assert_eq!(count_matrix_copies_off_diagonal(&a, &b), bipartite_copies(&t, &b));
            }
        }
    }

    #[test]
    fn found_copy_realizes_pattern() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_matrix(12, &mut rng);
        let b = random_matrix(3, &mut rng);
        let count = count_matrix_copies(&a, &b);
        match find_matrix_copy(&a, &b, false) {
            Some((r, c)) => {
                assert!(count > 0);
                for i in 0..3 {
                    for j in 0..3 {
                        assert_eq!(a.get(r[i], c[j]), b.get(i, j));
                    }
                }
            }
            None => assert_eq!(count, 0),
        }
    }
}
