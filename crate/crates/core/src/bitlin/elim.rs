//! Gaussian elimination: rank, kernel and row-space comparison.

use rayon::prelude::*;

use super::vector::WORD_BITS;
use super::{check_budget, dense_bytes, BitMatrix, BitVector};
use crate::error::{Error, Result};

/// Column count from which [`BitMatrix::into_rank`] uses the four-Russians
/// elimination.
pub const FOUR_RUSSIANS_MIN_COLS: usize = 4096;

/// Strip width of the four-Russians elimination. Must divide 64 so a strip
/// never straddles two words.
const STRIP: usize = 8;

/// Below this many words of row updates per strip the table step stays on
/// the calling thread.
const PAR_MIN_WORDS: usize = 1 << 16;

impl BitMatrix {
    /// GF(2) rank. Works on a copy, which is charged to the memory budget.
    pub fn rank(&self) -> Result<usize> {
        check_budget(
            "rank scratch copy",
            dense_bytes(self.rows() as u128, self.cols() as u128),
        )?;
        Ok(self.clone().into_rank())
    }

    /// Rank, consuming the matrix as elimination scratch.
    pub fn into_rank(mut self) -> usize {
        if self.cols() >= FOUR_RUSSIANS_MIN_COLS {
            eliminate_four_russians(&mut self)
        } else {
            eliminate_gauss(&mut self)
        }
    }

    /// Rank by plain row reduction regardless of size.
    pub fn rank_gauss(&self) -> usize {
        eliminate_gauss(&mut self.clone())
    }

    /// Rank by the four-Russians reduction regardless of size.
    pub fn rank_four_russians(&self) -> usize {
        eliminate_four_russians(&mut self.clone())
    }

    /// Basis of `{x : M x = 0}`: `cols - rank` vectors, one per free column.
    pub fn kernel_basis(&self) -> Result<Vec<BitVector>> {
        check_budget(
            "kernel scratch copy",
            dense_bytes(self.rows() as u128, self.cols() as u128),
        )?;
        let mut m = self.clone();
        let pivots = reduced_echelon(&mut m);
        let mut is_pivot = vec![false; m.cols()];
        for &(_, c) in &pivots {
            is_pivot[c] = true;
        }
        let basis = (0..m.cols())
            .filter(|&f| !is_pivot[f])
            .map(|free| {
                let mut x = BitVector::unit(m.cols(), free);
                for &(row, col) in &pivots {
                    if m.get(row, free) {
                        x.set(col, true);
                    }
                }
                x
            })
            .collect();
        Ok(basis)
    }

    /// Whether the two matrices have the same row space, decided by
    /// `rank(A) = rank(B) = rank([A; B])`.
    pub fn row_space_equal(&self, other: &BitMatrix) -> Result<bool> {
        if self.cols() != other.cols() {
            return Err(Error::mismatch(
                "row_space_equal",
                format!("{} vs {} columns", self.cols(), other.cols()),
            ));
        }
        let ra = self.rank()?;
        let rb = other.rank()?;
        if ra != rb {
            return Ok(false);
        }
        let stacked = BitMatrix::vstack(&[self.clone(), other.clone()])?;
        Ok(stacked.into_rank() == ra)
    }
}

/// Row echelon form in place; returns the rank.
fn eliminate_gauss(m: &mut BitMatrix) -> usize {
    let (rows, cols, stride) = (m.rows(), m.cols(), m.stride());
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let w = col / WORD_BITS;
        let bit = 1u64 << (col % WORD_BITS);
        let Some(pivot) = (rank..rows).find(|&i| m.words[i * stride + w] & bit != 0) else {
            continue;
        };
        m.swap_rows(pivot, rank);
        for i in rank + 1..rows {
            if m.words[i * stride + w] & bit != 0 {
                m.xor_row_into(rank, i, w);
            }
        }
        rank += 1;
    }
    rank
}

/// Four-Russians row echelon form in place; returns the rank.
///
/// Columns are processed in strips of [`STRIP`]. Within a strip, rows are
/// scanned in order and their strip bits reduced against the pivots found so
/// far; a row with bits left becomes a new pivot. Pivots are kept mutually
/// reduced on their pivot columns, so a lookup table of all `2^STRIP` pivot
/// combinations clears the strip from every other row with a single XOR.
fn eliminate_four_russians(m: &mut BitMatrix) -> usize {
    let (rows, cols, stride) = (m.rows(), m.cols(), m.stride());
    let mut rank = 0;
    let mut col = 0;
    let mut table: Vec<u64> = Vec::new();

    while col < cols && rank < rows {
        let width = STRIP.min(cols - col);
        let w0 = col / WORD_BITS;
        let shift = col % WORD_BITS;
        let mask = (1u64 << width) - 1;
        let window = |words: &[u64], row: usize| ((words[row * stride + w0] >> shift) & mask) as u32;

        let mut piv_bit = [0u32; STRIP];
        let mut piv_win = [0u32; STRIP];
        let mut found = 0;
        let mut i = rank;
        while i < rows && found < width {
            let orig = window(&m.words, i);
            let mut win = orig;
            for p in 0..found {
                if orig >> piv_bit[p] & 1 == 1 {
                    win ^= piv_win[p];
                }
            }
            if win != 0 {
                for p in 0..found {
                    if orig >> piv_bit[p] & 1 == 1 {
                        m.xor_row_into(rank + p, i, w0);
                    }
                }
                let b = win.trailing_zeros();
                for q in 0..found {
                    if piv_win[q] >> b & 1 == 1 {
                        m.xor_row_into(i, rank + q, w0);
                        piv_win[q] ^= win;
                    }
                }
                m.swap_rows(i, rank + found);
                piv_bit[found] = b;
                piv_win[found] = win;
                found += 1;
            }
            i += 1;
        }

        if found > 0 {
            // Rows rank+found.. either were scanned (their strip reduces to
            // zero against the pivots) or every strip column is a pivot.
            let tw = stride - w0;
            let entries = 1usize << width;
            table.clear();
            table.resize(entries * tw, 0);
            let mut by_bit = [usize::MAX; STRIP];
            for p in 0..found {
                by_bit[piv_bit[p] as usize] = rank + p;
            }
            for idx in 1..entries {
                let low = idx.trailing_zeros() as usize;
                let prev = idx & (idx - 1);
                let (done, rest) = table.split_at_mut(idx * tw);
                let dst = &mut rest[..tw];
                dst.copy_from_slice(&done[prev * tw..(prev + 1) * tw]);
                if by_bit[low] != usize::MAX {
                    let src = &m.words[by_bit[low] * stride + w0..(by_bit[low] + 1) * stride];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d ^= s;
                    }
                }
            }

            let start = (rank + found) * stride;
            let table = &table;
            let apply = |row: &mut [u64]| {
                let win = ((row[w0] >> shift) & mask) as usize;
                if win != 0 {
                    let t = &table[win * tw..(win + 1) * tw];
                    for (d, s) in row[w0..].iter_mut().zip(t) {
                        *d ^= s;
                    }
                }
            };
            let tail = &mut m.words[start..];
            if tail.len() >= PAR_MIN_WORDS && rayon::current_num_threads() > 1 {
                tail.par_chunks_mut(stride).for_each(apply);
            } else {
                tail.chunks_mut(stride).for_each(apply);
            }
        }

        rank += found;
        col += width;
    }
    rank
}

/// Reduced row echelon form in place; returns `(row, column)` of each pivot.
fn reduced_echelon(m: &mut BitMatrix) -> Vec<(usize, usize)> {
    let (rows, cols, stride) = (m.rows(), m.cols(), m.stride());
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let w = col / WORD_BITS;
        let bit = 1u64 << (col % WORD_BITS);
        let Some(pivot) = (rank..rows).find(|&i| m.words[i * stride + w] & bit != 0) else {
            continue;
        };
        m.swap_rows(pivot, rank);
        for i in 0..rows {
            if i != rank && m.words[i * stride + w] & bit != 0 {
                m.xor_row_into(rank, i, w);
            }
        }
        pivots.push((rank, col));
        rank += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, density: f64) -> BitMatrix {
        let mut m = BitMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if rng.random_bool(density) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    #[test]
    fn identity_has_full_rank() {
        assert_eq!(BitMatrix::identity(8).rank().unwrap(), 8);
    }

    #[test]
    fn all_ones_has_rank_one() {
        assert_eq!(BitMatrix::ones(16, 16).rank().unwrap(), 1);
    }

    #[test]
    fn rank_does_not_touch_input() {
        let m = BitMatrix::from_strs(&["110", "011", "101"]).unwrap();
        let copy = m.clone();
        assert_eq!(m.rank().unwrap(), 2);
        assert_eq!(m, copy);
    }

    #[test]
    fn kernel_of_identity_and_zero() {
        assert!(BitMatrix::identity(4).kernel_basis().unwrap().is_empty());
        let basis = BitMatrix::zeros(3, 3).kernel_basis().unwrap();
        assert_eq!(basis.len(), 3);
    }

    #[test]
    fn four_russians_matches_gauss_on_assorted_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &(rows, cols, density) in &[
            (1, 1, 0.5),
            (7, 13, 0.5),
            (64, 64, 0.5),
            (100, 70, 0.05),
            (70, 200, 0.3),
            (200, 130, 0.02),
            (129, 129, 0.5),
        ] {
            for _ in 0..5 {
                let m = random_matrix(&mut rng, rows, cols, density);
                assert_eq!(m.rank_gauss(), m.rank_four_russians(), "{rows}x{cols} d={density}");
            }
        }
    }

    #[test]
    fn four_russians_on_low_rank_products() {
        // Rank-deficient by construction: (n x k)(k x n) has rank <= k.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for k in [1, 3, 9, 17, 40] {
            let a = random_matrix(&mut rng, 150, k, 0.5);
            let b = random_matrix(&mut rng, k, 150, 0.5);
            let m = a.mat_mul(&b).unwrap();
            let r = m.rank_gauss();
            assert!(r <= k);
            assert_eq!(m.rank_four_russians(), r);
        }
    }

    #[test]
    fn row_space_of_permuted_rows() {
        let m = BitMatrix::from_strs(&["1100", "0110", "0011"]).unwrap();
        let p = BitMatrix::from_strs(&["0011", "1100", "0110"]).unwrap();
        assert!(m.row_space_equal(&m).unwrap());
        assert!(m.row_space_equal(&p).unwrap());
        let q = BitMatrix::from_strs(&["1100", "0110", "0001"]).unwrap();
        assert!(!m.row_space_equal(&q).unwrap());
        assert!(m.row_space_equal(&BitMatrix::zeros(1, 3)).is_err());
    }
}
