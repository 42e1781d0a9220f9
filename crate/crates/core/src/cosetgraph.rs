//! Coset graphs `Cay(F_2^r, S)` and their parity matrices.
//!
//! Vertices are the `2^r` vectors of `F_2^r` in lexicographic order; `v` and
//! `v + h` are adjacent for every nonzero generator `h`. The parity matrix is
//! `sum_{h in S ∪ {0}} Gamma_h`: the augmented adjacency `A + I` when `0` is
//! not a generator, and the adjacency with loops when it is. Both conventions
//! give the same matrix.

use std::collections::HashSet;

use crate::bitlin::{check_budget, dense_bytes, BitMatrix};
use crate::codefam::GeneratorSet;
use crate::error::{Error, Result};
use crate::permring::{low_mask, PermSum};

/// Which name the diagonal goes by for a given generator set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convention {
    /// `0 ∉ S`: the parity matrix is `A + I`.
    Augmented,
    /// `0 ∈ S`: loops are part of the adjacency matrix.
    Loops,
}

#[derive(Clone, Debug)]
pub struct CosetGraph {
    gens: GeneratorSet,
    nonzero: Vec<u64>,
}

impl CosetGraph {
    pub fn new(gens: GeneratorSet) -> Self {
        let nonzero = gens.nonzero().collect();
        Self { gens, nonzero }
    }

    /// Builds the graph from raw columns; duplicates are rejected.
    pub fn from_columns(dim: u32, columns: Vec<u64>) -> Result<Self> {
        Ok(Self::new(GeneratorSet::new(dim, columns)?))
    }

    pub fn dim(&self) -> u32 {
        self.gens.dim()
    }

    /// `N = 2^r`.
    pub fn vertex_count(&self) -> u64 {
        1u64 << self.gens.dim()
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    pub fn has_zero(&self) -> bool {
        self.gens.contains_zero()
    }

    pub fn convention(&self) -> Convention {
        if self.has_zero() {
            Convention::Loops
        } else {
            Convention::Augmented
        }
    }

    /// Every vertex has this many neighbours (loops not counted).
    pub fn degree(&self) -> usize {
        self.nonzero.len()
    }

    pub fn nonzero_generators(&self) -> &[u64] {
        &self.nonzero
    }

    pub fn neighbors(&self, v: u64) -> impl Iterator<Item = u64> + '_ {
        self.nonzero.iter().map(move |&h| v ^ h)
    }

    pub fn is_adjacent(&self, v: u64, w: u64) -> bool {
        v != w && self.nonzero.contains(&(v ^ w))
    }

    /// `sum_{h in S ∪ {0}} Gamma_h`, sparse.
    pub fn parity_sum(&self) -> PermSum {
        let mut values = self.nonzero.clone();
        values.push(0);
        PermSum::from_values(self.dim(), values).expect("generators fit the dimension")
    }

    /// Dense parity matrix; row `v` is the repair equation of vertex `v`.
    pub fn parity_matrix(&self) -> Result<BitMatrix> {
        self.parity_sum().materialize()
    }

    pub fn is_triangle_free(&self) -> bool {
        is_triangle_free(&self.gens)
    }

    pub fn is_connected(&self) -> bool {
        is_connected(&self.gens)
    }
}

/// No two distinct nonzero generators sum to a third one. For a Cayley graph
/// this is exactly the absence of 3-cliques; the zero generator only adds
/// loops.
pub fn is_triangle_free(gens: &GeneratorSet) -> bool {
    let nonzero: Vec<u64> = gens.nonzero().collect();
    let set: HashSet<u64> = nonzero.iter().copied().collect();
    for (i, &a) in nonzero.iter().enumerate() {
        for &b in &nonzero[i + 1..] {
            if set.contains(&(a ^ b)) {
                return false;
            }
        }
    }
    true
}

/// The nonzero generators span `F_2^r`.
pub fn is_connected(gens: &GeneratorSet) -> bool {
    span_dim(gens.nonzero()) == gens.dim() as usize
}

/// Dimension of the span of packed vectors, via an XOR basis keyed by the
/// leading bit.
fn span_dim(vectors: impl Iterator<Item = u64>) -> usize {
    let mut basis = [0u64; 64];
    let mut dim = 0;
    for mut v in vectors {
        while v != 0 {
            let lead = 63 - v.leading_zeros() as usize;
            if basis[lead] == 0 {
                basis[lead] = v;
                dim += 1;
                break;
            }
            v ^= basis[lead];
        }
    }
    dim
}

/// The adjacency sum split by the first `prefix_len` coordinates.
///
/// Block `(i, j)` of `sum_{h in S} Gamma_h`, with stripes indexed by
/// prefixes in lexicographic order, is `D_{v_i + v_j}` where `D_u` sums
/// `Gamma` over the suffixes of the generators with prefix `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    dim: u32,
    prefix_len: u32,
    blocks: Vec<PermSum>,
}

impl BlockDecomposition {
    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn prefix_len(&self) -> u32 {
        self.prefix_len
    }

    pub fn suffix_len(&self) -> u32 {
        self.dim - self.prefix_len
    }

    /// `D_u`, indexed by the prefix value.
    pub fn block(&self, prefix: u64) -> &PermSum {
        &self.blocks[prefix as usize]
    }

    pub fn blocks(&self) -> &[PermSum] {
        &self.blocks
    }

    /// The block matrix `(D_{v_i + v_j})_{i,j}`.
    pub fn reassemble(&self) -> Result<BitMatrix> {
        let n = 1u128 << self.dim;
        check_budget("reassemble", dense_bytes(n, n))?;
        let dense = self
            .blocks
            .iter()
            .map(PermSum::materialize)
            .collect::<Result<Vec<_>>>()?;
        let stripes = self.blocks.len();
        let grid: Vec<Vec<BitMatrix>> = (0..stripes)
            .map(|i| (0..stripes).map(|j| dense[i ^ j].clone()).collect())
            .collect();
        BitMatrix::block_assemble(&grid)
    }
}

/// Splits `S` by `prefix_len`-prefix.
pub fn block_decompose(gens: &GeneratorSet, prefix_len: u32) -> Result<BlockDecomposition> {
    let dim = gens.dim();
    if prefix_len > dim {
        return Err(Error::InvalidParameter(format!(
            "prefix length {prefix_len} exceeds dimension {dim}"
        )));
    }
    if prefix_len > 24 {
        return Err(Error::InvalidParameter(format!(
            "prefix length {prefix_len} gives too many stripes"
        )));
    }
    let suffix_len = dim - prefix_len;
    let mut suffixes: Vec<Vec<u64>> = vec![Vec::new(); 1 << prefix_len];
    for &h in gens.columns() {
        let prefix = if prefix_len == 0 { 0 } else { h >> suffix_len };
        suffixes[prefix as usize].push(h & low_mask(suffix_len));
    }
    let blocks = suffixes
        .into_iter()
        .map(|s| PermSum::from_values(suffix_len, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(BlockDecomposition {
        dim,
        prefix_len,
        blocks,
    })
}

/// One prefix class of a Hamming-block layout: `D_u = c I + sum_{j in B}
/// (I + E_j)`, where `E_j` is the all-ones translation sum over block `j`.
struct BlockClass {
    identity: bool,
    full_blocks: u32,
}

/// Rank of the parity matrix from its prefix block decomposition, without
/// forming the `2^r x 2^r` matrix.
///
/// The suffix coordinates must split into `block_width`-wide blocks such that
/// every prefix class of `S ∪ {0}` contains, for each block, either none or
/// all of the nonzero vectors supported on that block (plus possibly `0`).
/// This is the shape of `H_2`, `H_3` and `H_s` with `prefix_len = s` and
/// `block_width = r`.
///
/// Each block contributes the all-ones operator `E_j` with `E_j^2 = 0` and
/// rank 1, so its `2^w`-dimensional factor splits into one 2-dimensional
/// Jordan block and `2^w - 2` one-dimensional pieces on which `E_j = 0`.
/// Tensoring these splittings gives a direct sum of invariant subspaces, one
/// per subset `T` of blocks, of multiplicity `(2^w - 2)^{b - |T|}`, on which
/// the parity matrix acts as a `2^{prefix_len + |T|}`-dimensional matrix.
/// The rank is the multiplicity-weighted sum of those small ranks.
pub fn block_reduced_rank(gens: &GeneratorSet, prefix_len: u32, block_width: u32) -> Result<u64> {
    let dim = gens.dim();
    if block_width == 0 || prefix_len > dim || (dim - prefix_len) % block_width != 0 {
        return Err(Error::NotBlockStructured(format!(
            "suffix of length {} does not split into blocks of width {block_width}",
            dim.saturating_sub(prefix_len)
        )));
    }
    if prefix_len > 12 {
        return Err(Error::InvalidParameter(format!(
            "prefix length {prefix_len} is too large for the block reduction"
        )));
    }
    let suffix_len = dim - prefix_len;
    let nblocks = suffix_len / block_width;
    if nblocks > 8 {
        return Err(Error::InvalidParameter(format!(
            "{nblocks} blocks is too many for the block reduction"
        )));
    }
    let block_mask = |j: u32| low_mask(block_width) << (suffix_len - (j + 1) * block_width);

    let mut with_zero: Vec<u64> = gens.nonzero().collect();
    with_zero.push(0);
    let parity_gens = GeneratorSet::new(dim, with_zero)?;
    let decomposition = block_decompose(&parity_gens, prefix_len)?;

    let full = (1u64 << block_width) - 1;
    let mut classes = Vec::with_capacity(decomposition.blocks.len());
    for (u, d) in decomposition.blocks.iter().enumerate() {
        let mut counts = vec![0u64; nblocks as usize];
        let mut identity = false;
        for &x in d.support() {
            if x == 0 {
                identity = true;
                continue;
            }
            let j = (0..nblocks)
                .find(|&j| x & !block_mask(j) == 0)
                .ok_or_else(|| {
                    Error::NotBlockStructured(format!(
                        "suffix {x:#b} of prefix {u} spans several blocks"
                    ))
                })?;
            counts[j as usize] += 1;
        }
        let mut full_blocks = 0u32;
        for (j, &c) in counts.iter().enumerate() {
            if c == full {
                full_blocks |= 1 << j;
            } else if c != 0 {
                return Err(Error::NotBlockStructured(format!(
                    "prefix {u} covers {c} of the {full} nonzero vectors of block {j}"
                )));
            }
        }
        // D_u = c I + sum_{j in B} (I + E_j)
        classes.push(BlockClass {
            identity: identity ^ (full_blocks.count_ones() % 2 == 1),
            full_blocks,
        });
    }

    let free_pieces = (1u64 << block_width) - 2;
    let stripes = 1usize << prefix_len;
    let mut total: u64 = 0;
    for subset in 0u32..1 << nblocks {
        let t = subset.count_ones();
        let multiplicity = free_pieces.pow(nblocks - t);
        if multiplicity == 0 {
            continue;
        }
        let local = 1usize << t;
        let position: Vec<u32> = (0..nblocks)
            .map(|j| (subset & ((1 << j) - 1)).count_ones())
            .collect();
        let mut m = BitMatrix::zeros(stripes * local, stripes * local);
        for p in 0..stripes {
            for q in 0..stripes {
                let class = &classes[p ^ q];
                for x in 0..local {
                    if class.identity {
                        m.flip(p * local + x, q * local + x);
                    }
                    for j in 0..nblocks {
                        if class.full_blocks & subset & (1 << j) == 0 {
                            continue;
                        }
                        let bit = 1usize << position[j as usize];
                        if x & bit != 0 {
                            m.flip(p * local + (x ^ bit), q * local + x);
                        }
                    }
                }
            }
        }
        total += multiplicity * m.into_rank() as u64;
    }
    Ok(total)
}
