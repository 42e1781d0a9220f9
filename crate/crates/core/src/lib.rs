//! Binary storage codes on coset graphs.
//!
//! A coset (Cayley) graph `Cay(F_2^r, S)` joins `v` and `v + h` for every
//! generator `h` in `S`. Its storage code is the kernel of the matrix
//! `I + sum_{h in S, h != 0} Gamma_h`, so everything interesting about the
//! code reduces to one GF(2) rank.
//!
//! The crate is split into:
//!
//! - [`bitlin`]: bit-packed GF(2) vectors and matrices (rank, kernel, products).
//! - [`permring`]: sparse sums of translation permutations `Gamma_v`.
//! - [`codefam`]: parity-check matrix families (Hamming, zero code, repetition,
//!   `H_2`, `H_3`, recursive `H_s`).
//! - [`cosetgraph`]: graph construction, triangle/connectivity checks, prefix
//!   block decomposition and the block-reduced rank.
//! - [`storage`]: rate reports, repair checks, guessing-game simulation and
//!   the rate sweep.

pub mod bitlin;
pub mod codefam;
pub mod cosetgraph;
mod error;
pub mod permring;
pub mod storage;

pub use bitlin::{memory_budget, set_memory_budget, BitMatrix, BitVector, DEFAULT_MEMORY_BUDGET};
pub use codefam::{FamilyKind, FamilySpec, GeneratorSet};
pub use cosetgraph::{BlockDecomposition, CosetGraph};
pub use error::{Error, Result};
pub use permring::{GroupElement, Parity, PermSum};
pub use storage::{GuessOutcome, RankMethod, StorageReport};
