//! Bit-packed 0/1 incidence matrices.

use alloc::vec;
use alloc::vec::Vec;

/// Default cap on `t * n` for materialized matrices.
pub const DEFAULT_MAX_CELLS: u64 = 1 << 30;

/// Where a matrix came from. Drives which operations are allowed on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    External,
    /// `C_{q,k}` restricted to its first `blocks` blocks of `q` rows, in
    /// canonical row and column order.
    Polynomial {
        q: u64,
        k: u32,
        blocks: u32,
        level: u32,
    },
    /// One-hot expansion of a hash family with `functions` rows over a range
    /// of size `range`.
    HashFamily {
        functions: u32,
        range: u32,
        w: u32,
    },
    /// A reordered level of an embedding sequence.
    Embedding {
        level: u32,
        q: u64,
        k: u32,
        blocks: u32,
    },
}

/// A `t × n` 0/1 matrix stored column by column; column `j` is the set
/// `B_j` of rows holding a 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    t: usize,
    n: usize,
    words: usize,
    bits: Vec<u64>,
    /// Claimed cover-free parameter; 0 means no claim.
    pub d_claimed: u32,
    /// `(x_i, x_j)` field-element indices per row, when the rows have them.
    pub row_labels: Option<Vec<(u32, u32)>>,
    /// Canonical polynomial index per column, when the columns have them.
    pub col_labels: Option<Vec<u64>>,
    pub provenance: Provenance,
}

impl IncidenceMatrix {
    pub fn zeros(t: usize, n: usize) -> Self {
        let words = t.div_ceil(64).max(1);
        Self {
            t,
            n,
            words,
            bits: vec![0; words * n],
            d_claimed: 0,
            row_labels: None,
            col_labels: None,
            provenance: Provenance::External,
        }
    }

    /// Builds from row-major booleans. All rows must have the same length.
    pub fn from_rows<R: AsRef<[bool]>>(rows: &[R]) -> Self {
        let t = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(t, n);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), n, "ragged rows");
            for (c, &v) in row.iter().enumerate() {
                if v {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.t
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.n
    }

    /// `u64` words per column.
    #[inline]
    pub fn words(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.t && c < self.n);
        self.bits[c * self.words + r / 64] >> (r % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.t && c < self.n);
        let w = &mut self.bits[c * self.words + r / 64];
        if v {
            *w |= 1 << (r % 64);
        } else {
            *w &= !(1 << (r % 64));
        }
    }

    /// Packed rows of column `c`; bits at positions `>= t` are zero.
    #[inline]
    pub fn column(&self, c: usize) -> &[u64] {
        &self.bits[c * self.words..(c + 1) * self.words]
    }

    pub fn column_weight(&self, c: usize) -> u32 {
        self.column(c).iter().map(|w| w.count_ones()).sum()
    }

    pub fn column_rows(&self, c: usize) -> Vec<usize> {
        (0..self.t).filter(|&r| self.get(r, c)).collect()
    }

    /// `|B_a ∩ B_b|`.
    pub fn intersection(&self, a: usize, b: usize) -> u32 {
        self.column(a)
            .iter()
            .zip(self.column(b))
            .map(|(x, y)| (x & y).count_ones())
            .sum()
    }

    pub fn row(&self, r: usize) -> Vec<bool> {
        (0..self.n).map(|c| self.get(r, c)).collect()
    }

    /// The first `rows × cols` corner, with labels trimmed to match.
    pub fn top_left(&self, rows: usize, cols: usize) -> Self {
        assert!(rows <= self.t && cols <= self.n);
        let mut out = Self::zeros(rows, cols);
        for c in 0..cols {
            let src = self.column(c);
            let dst = &mut out.bits[c * out.words..(c + 1) * out.words];
            dst.copy_from_slice(&src[..out.words]);
            if !rows.is_multiple_of(64) {
                let last = out.words - 1;
                dst[last] &= (1u64 << (rows % 64)) - 1;
            }
            if rows == 0 {
                dst[0] = 0;
            }
        }
        out.row_labels = self.row_labels.as_ref().map(|l| l[..rows].to_vec());
        out.col_labels = self.col_labels.as_ref().map(|l| l[..cols].to_vec());
        out
    }

    /// Bitwise equality of the `rows × cols` corners of `self` and `other`.
    pub fn corner_eq(&self, other: &Self, rows: usize, cols: usize) -> bool {
        self.first_corner_mismatch(other, rows, cols).is_none()
    }

    pub fn first_corner_mismatch(&self, other: &Self, rows: usize, cols: usize) -> Option<(usize, usize)> {
        (0..rows).find_map(|r| (0..cols).find(|&c| self.get(r, c) != other.get(r, c)).map(|c| (r, c)))
    }

    /// Same bits, ignoring labels, claims and provenance.
    pub fn same_bits(&self, other: &Self) -> bool {
        self.t == other.t && self.n == other.n && self.bits == other.bits
    }

    pub fn swap_columns(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.words {
            self.bits.swap(a * self.words + w, b * self.words + w);
        }
        if let Some(l) = self.col_labels.as_mut() {
            l.swap(a, b);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_and_corner() {
        let mut m = IncidenceMatrix::zeros(70, 3);
        m.set(0, 0, true);
        m.set(69, 2, true);
        m.set(65, 1, true);
        assert!(m.get(69, 2));
        assert_eq!(m.column_weight(2), 1);
        let c = m.top_left(66, 2);
        assert_eq!((c.rows(), c.cols()), (66, 2));
        assert!(c.get(65, 1));
        let c = m.top_left(65, 2);
        assert_eq!(c.column_weight(1), 0);
        assert!(m.corner_eq(&m.clone(), 70, 3));
    }

    #[test]
    fn from_rows_roundtrip() {
        let rows = [[true, false], [false, true], [true, true]];
        let m = IncidenceMatrix::from_rows(&rows);
        assert_eq!(m.row(2), [true, true]);
        assert_eq!(m.column_rows(0), [0, 2]);
        assert_eq!(m.intersection(0, 1), 1);
    }
}
