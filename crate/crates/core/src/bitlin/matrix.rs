use std::fmt;

use super::vector::{parity_of_and, tail_mask, words_for, WORD_BITS};
use super::{check_budget, dense_bytes, BitVector};
use crate::error::{Error, Result};

/// Dense GF(2) matrix, row-major, each row padded to whole words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    pub(super) words: Vec<u64>,
}

impl BitMatrix {
    /// Zero matrix. Not checked against the memory budget; use
    /// [`BitMatrix::try_zeros`] for sizes that come from user input.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            words: vec![0; rows * stride],
        }
    }

    pub fn try_zeros(rows: usize, cols: usize) -> Result<Self> {
        check_budget("matrix", dense_bytes(rows as u128, cols as u128))?;
        Ok(Self::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        let mask = tail_mask(cols);
        for i in 0..rows {
            let row = m.row_words_mut(i);
            row.fill(u64::MAX);
            if let Some(last) = row.last_mut() {
                *last &= mask;
            }
        }
        m
    }

    /// Builds a matrix from equal-length rows. An empty slice gives `0 x 0`.
    pub fn from_rows(rows: &[BitVector]) -> Result<Self> {
        let cols = rows.first().map_or(0, BitVector::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::mismatch(
                    "from_rows",
                    format!("row {i} has length {}, expected {cols}", r.len()),
                ));
            }
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        Ok(m)
    }

    /// Convenience constructor from `0`/`1` strings, one per row.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.parse())
            .collect::<Result<Vec<BitVector>>>()?;
        Self::from_rows(&parsed)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub(crate) fn stride(&self) -> usize {
        self.stride
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        (self.words[i * self.stride + j / WORD_BITS] >> (j % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        let w = &mut self.words[i * self.stride + j / WORD_BITS];
        let mask = 1u64 << (j % WORD_BITS);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize, j: usize) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        self.words[i * self.stride + j / WORD_BITS] ^= 1u64 << (j % WORD_BITS);
    }

    #[inline]
    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.words[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    pub fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.words[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row(&self, i: usize) -> BitVector {
        BitVector::from_words(self.cols, self.row_words(i).to_vec())
    }

    pub fn row_weight(&self, i: usize) -> usize {
        self.row_words(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    pub fn column(&self, j: usize) -> BitVector {
        let mut v = BitVector::zeros(self.rows);
        for i in 0..self.rows {
            if self.get(i, j) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for (wi, &w) in self.row_words(i).iter().enumerate() {
                let mut word = w;
                while word != 0 {
                    let j = wi * WORD_BITS + word.trailing_zeros() as usize;
                    word &= word - 1;
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    /// Entrywise sum mod 2.
    pub fn add(&self, other: &BitMatrix) -> Result<BitMatrix> {
        self.same_shape(other, "add")?;
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &BitMatrix) -> Result<()> {
        self.same_shape(other, "add")?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    /// `M x` over GF(2).
    pub fn mul_vec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.cols {
            return Err(Error::mismatch(
                "mul_vec",
                format!("{} columns vs vector of length {}", self.cols, x.len()),
            ));
        }
        let mut out = BitVector::zeros(self.rows);
        for i in 0..self.rows {
            if parity_of_and(self.row_words(i), x.words()) {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// Whether `M x = 0`, stopping at the first violated row.
    pub fn annihilates(&self, x: &BitVector) -> Result<bool> {
        if x.len() != self.cols {
            return Err(Error::mismatch(
                "annihilates",
                format!("{} columns vs vector of length {}", self.cols, x.len()),
            ));
        }
        Ok((0..self.rows).all(|i| !parity_of_and(self.row_words(i), x.words())))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let s = self.stride;
        let (head, tail) = self.words.split_at_mut(hi * s);
        head[lo * s..(lo + 1) * s].swap_with_slice(&mut tail[..s]);
    }

    /// `row[dst] ^= row[src]` on words `from..stride`.
    #[inline]
    pub(crate) fn xor_row_into(&mut self, src: usize, dst: usize, from: usize) {
        debug_assert_ne!(src, dst);
        let s = self.stride;
        let (src_row, dst_row) = if src < dst {
            let (head, tail) = self.words.split_at_mut(dst * s);
            (&head[src * s..(src + 1) * s], &mut tail[..s])
        } else {
            let (head, tail) = self.words.split_at_mut(src * s);
            (&tail[..s], &mut head[dst * s..(dst + 1) * s])
        };
        for (d, v) in dst_row[from..].iter_mut().zip(&src_row[from..]) {
            *d ^= v;
        }
    }

    /// Horizontal concatenation `[B_0 | B_1 | ...]`.
    pub fn hstack(blocks: &[BitMatrix]) -> Result<BitMatrix> {
        let Some(first) = blocks.first() else {
            return Ok(BitMatrix::zeros(0, 0));
        };
        let rows = first.rows;
        if let Some(bad) = blocks.iter().find(|b| b.rows != rows) {
            return Err(Error::mismatch(
                "hstack",
                format!("block with {} rows among blocks with {rows}", bad.rows),
            ));
        }
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = BitMatrix::try_zeros(rows, cols)?;
        let mut offset = 0;
        for b in blocks {
            out.paste(b, 0, offset);
            offset += b.cols;
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vstack(blocks: &[BitMatrix]) -> Result<BitMatrix> {
        let Some(first) = blocks.first() else {
            return Ok(BitMatrix::zeros(0, 0));
        };
        let cols = first.cols;
        if let Some(bad) = blocks.iter().find(|b| b.cols != cols) {
            return Err(Error::mismatch(
                "vstack",
                format!("block with {} columns among blocks with {cols}", bad.cols),
            ));
        }
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = BitMatrix::try_zeros(rows, cols)?;
        let mut at = 0;
        for b in blocks {
            let n = b.words.len();
            out.words[at..at + n].copy_from_slice(&b.words);
            at += n;
        }
        Ok(out)
    }

    /// Places `grid[i][j]` at block position `(i, j)`. Every block in a grid
    /// row must share a height and every block in a grid column a width.
    pub fn block_assemble(grid: &[Vec<BitMatrix>]) -> Result<BitMatrix> {
        let Some(first_row) = grid.first() else {
            return Ok(BitMatrix::zeros(0, 0));
        };
        let widths: Vec<usize> = first_row.iter().map(|b| b.cols).collect();
        let mut heights = Vec::with_capacity(grid.len());
        for (bi, row) in grid.iter().enumerate() {
            if row.len() != widths.len() {
                return Err(Error::mismatch(
                    "block_assemble",
                    format!("grid row {bi} has {} blocks, expected {}", row.len(), widths.len()),
                ));
            }
            let h = row.first().map_or(0, |b| b.rows);
            for (bj, b) in row.iter().enumerate() {
                if b.rows != h || b.cols != widths[bj] {
                    return Err(Error::mismatch(
                        "block_assemble",
                        format!(
                            "block ({bi},{bj}) is {}x{}, expected {h}x{}",
                            b.rows, b.cols, widths[bj]
                        ),
                    ));
                }
            }
            heights.push(h);
        }
        let mut out = BitMatrix::try_zeros(heights.iter().sum(), widths.iter().sum())?;
        let mut r0 = 0;
        for (row, h) in grid.iter().zip(&heights) {
            let mut c0 = 0;
            for b in row {
                out.paste(b, r0, c0);
                c0 += b.cols;
            }
            r0 += h;
        }
        Ok(out)
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub(crate) fn paste(&mut self, block: &BitMatrix, r0: usize, c0: usize) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        let shift = c0 % WORD_BITS;
        let w0 = c0 / WORD_BITS;
        for i in 0..block.rows {
            let src = block.row_words(i);
            let dst_start = (r0 + i) * self.stride + w0;
            for (k, &w) in src.iter().enumerate() {
                if w == 0 {
                    continue;
                }
                self.words[dst_start + k] |= w << shift;
                if shift != 0 {
                    let spill = w >> (WORD_BITS - shift);
                    if spill != 0 {
                        self.words[dst_start + k + 1] |= spill;
                    }
                }
            }
        }
    }

    fn same_shape(&self, other: &BitMatrix, op: &'static str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::mismatch(
                op,
                format!(
                    "{}x{} vs {}x{}",
                    self.rows, self.cols, other.rows, other.cols
                ),
            ));
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows.min(32) {
            writeln!(f, "  {}", self.row(i))?;
        }
        if self.rows > 32 {
            writeln!(f, "  ...")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hstack_of_identities() {
        let m = BitMatrix::hstack(&[BitMatrix::identity(2), BitMatrix::identity(2)]).unwrap();
        assert_eq!(m, BitMatrix::from_strs(&["1010", "0101"]).unwrap());
    }

    #[test]
    fn vstack_of_zero_blocks_is_zero() {
        let m = BitMatrix::vstack(&[BitMatrix::zeros(3, 70), BitMatrix::zeros(2, 70)]).unwrap();
        assert_eq!((m.rows(), m.cols()), (5, 70));
        assert!(m.is_zero());
    }

    #[test]
    fn stacking_rejects_ragged_blocks() {
        assert!(BitMatrix::hstack(&[BitMatrix::zeros(2, 2), BitMatrix::zeros(3, 2)]).is_err());
        assert!(BitMatrix::vstack(&[BitMatrix::zeros(2, 2), BitMatrix::zeros(2, 3)]).is_err());
        let grid = vec![
            vec![BitMatrix::zeros(2, 2), BitMatrix::zeros(2, 3)],
            vec![BitMatrix::zeros(1, 3), BitMatrix::zeros(1, 3)],
        ];
        assert!(BitMatrix::block_assemble(&grid).is_err());
    }

    #[test]
    fn block_assemble_places_blocks_at_unaligned_offsets() {
        let a = BitMatrix::ones(3, 37);
        let b = BitMatrix::identity(3);
        let c = BitMatrix::zeros(2, 37);
        let d = BitMatrix::ones(2, 3);
        let m = BitMatrix::block_assemble(&[vec![a, b], vec![c, d]]).unwrap();
        assert_eq!((m.rows(), m.cols()), (5, 40));
        for i in 0..5 {
            for j in 0..40 {
                let expected = match (i < 3, j < 37) {
                    (true, true) => true,
                    (true, false) => j - 37 == i,
                    (false, true) => false,
                    (false, false) => true,
                };
                assert_eq!(m.get(i, j), expected, "({i},{j})");
            }
        }
    }

    #[test]
    fn transpose_and_symmetry() {
        let m = BitMatrix::from_strs(&["110", "001"]).unwrap();
        let t = m.transpose();
        assert_eq!(t, BitMatrix::from_strs(&["10", "10", "01"]).unwrap());
        assert_eq!(t.transpose(), m);
        assert!(BitMatrix::identity(5).is_symmetric());
        assert!(!m.is_symmetric());
    }

    #[test]
    fn sum_with_itself_vanishes() {
        let m = BitMatrix::from_strs(&["1101", "0111"]).unwrap();
        assert!(m.add(&m).unwrap().is_zero());
        assert!(m.add(&BitMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn swap_and_xor_rows() {
        let mut m = BitMatrix::from_strs(&["100", "011", "111"]).unwrap();
        m.swap_rows(0, 2);
        assert_eq!(m.row(0).to_string(), "111");
        m.xor_row_into(0, 1, 0);
        assert_eq!(m.row(1).to_string(), "100");
        m.xor_row_into(2, 0, 0);
        assert_eq!(m.row(0).to_string(), "011");
    }

    #[test]
    fn matrix_vector_product() {
        let m = BitMatrix::from_strs(&["110", "011"]).unwrap();
        let x: BitVector = "111".parse().unwrap();
        assert!(m.mul_vec(&x).unwrap().is_zero());
        assert!(m.annihilates(&x).unwrap());
        assert!(!m.annihilates(&"100".parse().unwrap()).unwrap());
    }
}
