//! Dense linear algebra over GF(2) with word-packed rows.
//!
//! Matrices are row-major, 64 columns per `u64`. Rank and kernel computations
//! use Gaussian elimination with a deterministic pivot order (lowest row index
//! carrying the current column). Wide matrices switch to a four-Russians
//! variant of the same elimination; both paths return identical ranks.
//!
//! Every large allocation is checked against a process-wide memory budget
//! (default 1 GiB), see [`set_memory_budget`].

mod elim;
mod matrix;
mod product;
mod text;
mod vector;

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

pub use elim::FOUR_RUSSIANS_MIN_COLS;
pub use matrix::BitMatrix;
pub use vector::BitVector;

pub const DEFAULT_MEMORY_BUDGET: u64 = 1 << 30;

static MEMORY_BUDGET: AtomicU64 = AtomicU64::new(DEFAULT_MEMORY_BUDGET);

/// Sets the byte budget for dense matrix allocations. Zero is rejected.
pub fn set_memory_budget(bytes: u64) -> Result<()> {
    if bytes == 0 {
        return Err(Error::InvalidParameter("memory budget must be positive".into()));
    }
    MEMORY_BUDGET.store(bytes, Ordering::Relaxed);
    Ok(())
}

pub fn memory_budget() -> u64 {
    MEMORY_BUDGET.load(Ordering::Relaxed)
}

/// Bytes a packed `rows x cols` matrix occupies.
pub fn dense_bytes(rows: u128, cols: u128) -> u128 {
    rows * cols.div_ceil(64) * 8
}

pub(crate) fn check_budget(what: &'static str, requested: u128) -> Result<()> {
    let budget = memory_budget();
    if requested > budget as u128 {
        return Err(Error::Capacity {
            what,
            requested,
            budget,
        });
    }
    Ok(())
}
