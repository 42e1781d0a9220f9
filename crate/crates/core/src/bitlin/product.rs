//! Matrix products over GF(2).

use rayon::prelude::*;

use super::vector::WORD_BITS;
use super::{check_budget, dense_bytes, BitMatrix};
use crate::error::{Error, Result};

/// Inner dimension from which [`BitMatrix::mat_mul`] uses lookup tables.
const TABLE_MIN_INNER: usize = 256;
const GROUP: usize = 8;

impl BitMatrix {
    /// `A B` over GF(2).
    pub fn mat_mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols() >= TABLE_MIN_INNER {
            self.mat_mul_four_russians(other)
        } else {
            self.mat_mul_naive(other)
        }
    }

    /// Row-by-row product: each set bit `k` of row `i` of `A` adds row `k`
    /// of `B`.
    pub fn mat_mul_naive(&self, other: &BitMatrix) -> Result<BitMatrix> {
        let mut out = self.product_target(other)?;
        let stride = out.stride();
        if stride == 0 {
            return Ok(out);
        }
        out.words
            .par_chunks_mut(stride)
            .enumerate()
            .for_each(|(i, dst)| {
                for (wi, &w) in self.row_words(i).iter().enumerate() {
                    let mut word = w;
                    while word != 0 {
                        let k = wi * WORD_BITS + word.trailing_zeros() as usize;
                        word &= word - 1;
                        for (d, s) in dst.iter_mut().zip(other.row_words(k)) {
                            *d ^= s;
                        }
                    }
                }
            });
        Ok(out)
    }

    /// Four-Russians product: rows of `B` are taken in groups of eight, all
    /// 256 combinations of each group are tabulated once, and every row of
    /// `A` picks one table entry per group.
    pub fn mat_mul_four_russians(&self, other: &BitMatrix) -> Result<BitMatrix> {
        let mut out = self.product_target(other)?;
        let stride = out.stride();
        if stride == 0 {
            return Ok(out);
        }
        let inner = self.cols();
        let mut table = vec![0u64; (1 << GROUP) * stride];
        for g in (0..inner).step_by(GROUP) {
            let width = GROUP.min(inner - g);
            for idx in 1..1usize << width {
                let low = idx.trailing_zeros() as usize;
                let prev = idx & (idx - 1);
                let (done, rest) = table.split_at_mut(idx * stride);
                let dst = &mut rest[..stride];
                dst.copy_from_slice(&done[prev * stride..(prev + 1) * stride]);
                for (d, s) in dst.iter_mut().zip(other.row_words(g + low)) {
                    *d ^= s;
                }
            }
            let (w, shift) = (g / WORD_BITS, g % WORD_BITS);
            let mask = (1u64 << width) - 1;
            let table = &table;
            out.words
                .par_chunks_mut(stride)
                .enumerate()
                .for_each(|(i, dst)| {
                    let idx = ((self.row_words(i)[w] >> shift) & mask) as usize;
                    if idx != 0 {
                        for (d, s) in dst.iter_mut().zip(&table[idx * stride..(idx + 1) * stride]) {
                            *d ^= s;
                        }
                    }
                });
        }
        Ok(out)
    }

    fn product_target(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols() != other.rows() {
            return Err(Error::mismatch(
                "mat_mul",
                format!(
                    "{}x{} times {}x{}",
                    self.rows(),
                    self.cols(),
                    other.rows(),
                    other.cols()
                ),
            ));
        }
        check_budget(
            "product",
            dense_bytes(self.rows() as u128, other.cols() as u128),
        )?;
        Ok(BitMatrix::zeros(self.rows(), other.cols()))
    }
}
