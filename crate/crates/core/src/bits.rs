//! Dense bit rows and square bit matrices.

/// Number of `u64` words needed to hold `n` bits.
#[inline]
pub fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

#[inline]
pub fn test(row: &[u64], i: usize) -> bool {
    (row[i >> 6] >> (i & 63)) & 1 == 1
}

#[inline]
pub fn set(row: &mut [u64], i: usize) {
    row[i >> 6] |= 1u64 << (i & 63);
}

#[inline]
pub fn clear(row: &mut [u64], i: usize) {
    row[i >> 6] &= !(1u64 << (i & 63));
}

pub fn count(row: &[u64]) -> usize {
    row.iter().map(|w| w.count_ones() as usize).sum()
}

/// Row with the lowest `n` bits set.
pub fn full_row(n: usize) -> Vec<u64> {
    let mut row = vec![0u64; words_for(n)];
    for (i, w) in row.iter_mut().enumerate() {
        let lo = i * 64;
        let hi = (lo + 64).min(n);
        if hi >= lo + 64 {
            *w = u64::MAX;
        } else if hi > lo {
            *w = (1u64 << (hi - lo)) - 1;
        }
    }
    row
}

pub fn row_from(n: usize, members: impl IntoIterator<Item = usize>) -> Vec<u64> {
    let mut row = vec![0u64; words_for(n)];
    for v in members {
        set(&mut row, v);
    }
    row
}

/// Popcount of `a & b`.
pub fn count_and(a: &[u64], b: &[u64]) -> usize {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x & y).count_ones() as usize)
        .sum()
}

/// Iterator over the set bits of a row, in increasing order.
pub struct Ones<'a> {
    row: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let tz = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + tz);
            }
            self.idx += 1;
            if self.idx >= self.row.len() {
                return None;
            }
            self.cur = self.row[self.idx];
        }
    }
}

pub fn ones(row: &[u64]) -> Ones<'_> {
    Ones {
        row,
        idx: 0,
        cur: row.first().copied().unwrap_or(0),
    }
}

/// Square bit matrix stored row-major with a fixed word stride.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let stride = words_for(n);
        BitMatrix {
            n,
            stride,
            words: vec![0; stride * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        test(self.row(i), j)
    }

    #[inline]
    pub fn put(&mut self, i: usize, j: usize, value: bool) {
        let s = self.stride;
        let row = &mut self.words[i * s..(i + 1) * s];
        if value {
            set(row, j);
        } else {
            clear(row, j);
        }
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.words[i * self.stride..(i + 1) * self.stride]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_row_has_exact_popcount() {
        for n in [0, 1, 63, 64, 65, 130] {
            assert_eq!(count(&full_row(n)), n);
        }
    }

    #[test]
    fn ones_iterates_in_order() {
        let row = row_from(200, [3, 64, 65, 199, 0]);
        assert_eq!(ones(&row).collect::<Vec<_>>(), vec![0, 3, 64, 65, 199]);
        assert_eq!(ones(&[]).count(), 0);
    }

    #[test]
    fn matrix_put_get() {
        let mut m = BitMatrix::new(70);
        m.put(69, 68, true);
        assert!(m.get(69, 68));
        assert!(!m.get(68, 69));
        m.put(69, 68, false);
        assert!(!m.get(69, 68));
    }
}
