//! The ring of GF(2) sums of translation permutations on `F_2^r`.
//!
//! `Gamma_v` is the `2^r x 2^r` permutation matrix with `(Gamma_v)[u][w] = 1`
//! iff `u + w = v`. Sums `A_V = sum_{v in V} Gamma_v` are determined by the
//! set `V`, so a [`PermSum`] stores just the sorted support. Addition is the
//! symmetric difference of supports and multiplication is the XOR
//! convolution `{v + w}` with pairs cancelling mod 2. Dense matrices appear
//! only through [`PermSum::materialize`].

use std::fmt;

use crate::bitlin::{check_budget, dense_bytes, BitMatrix};
use crate::error::{Error, Result};

/// Largest supported dimension; values are packed into a `u64`.
pub const MAX_DIM: u32 = 63;

/// A vector of `F_2^r` encoded as an integer.
///
/// Coordinate 1 is the most significant bit, so lexicographic order on
/// vectors is integer order on values.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    dim: u32,
    value: u64,
}

impl GroupElement {
    pub fn new(dim: u32, value: u64) -> Result<Self> {
        check_dim(dim)?;
        if value >> dim != 0 {
            return Err(Error::InvalidParameter(format!(
                "value {value:#b} does not fit in F_2^{dim}"
            )));
        }
        Ok(Self { dim, value })
    }

    pub fn zero(dim: u32) -> Self {
        Self { dim, value: 0 }
    }

    /// Standard basis vector `e_i`, `i` counted from 1.
    pub fn basis(dim: u32, i: u32) -> Result<Self> {
        if i == 0 || i > dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {i} outside 1..={dim}"
            )));
        }
        Self::new(dim, 1 << (dim - i))
    }

    pub fn all_ones(dim: u32) -> Self {
        Self {
            dim,
            value: low_mask(dim),
        }
    }

    /// Parses a bitstring such as `"0110"`; its length is the dimension.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let bits = bits.trim();
        let dim = u32::try_from(bits.len()).unwrap_or(u32::MAX);
        check_dim(dim)?;
        let value = u64::from_str_radix(bits, 2).map_err(|e| Error::Parse {
            line: 1,
            msg: format!("{bits:?}: {e}"),
        })?;
        Ok(Self { dim, value })
    }

    #[inline]
    pub fn dim(self) -> u32 {
        self.dim
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn add(self, other: GroupElement) -> Result<GroupElement> {
        same_dim(self.dim, other.dim, "add")?;
        Ok(Self {
            dim: self.dim,
            value: self.value ^ other.value,
        })
    }

    /// Coordinate `i` (1-based).
    pub fn coord(self, i: u32) -> bool {
        assert!(i >= 1 && i <= self.dim);
        self.value >> (self.dim - i) & 1 == 1
    }

    /// The first `len` coordinates.
    pub fn prefix(self, len: u32) -> GroupElement {
        assert!(len <= self.dim);
        Self {
            dim: len,
            value: if len == 0 { 0 } else { self.value >> (self.dim - len) },
        }
    }

    /// The last `len` coordinates.
    pub fn suffix(self, len: u32) -> GroupElement {
        assert!(len <= self.dim);
        Self {
            dim: len,
            value: self.value & low_mask(len),
        }
    }

    pub fn concat(self, tail: GroupElement) -> Result<GroupElement> {
        let dim = self.dim + tail.dim;
        check_dim(dim)?;
        Ok(Self {
            dim,
            value: (self.value << tail.dim) | tail.value,
        })
    }

    pub fn weight(self) -> u32 {
        self.value.count_ones()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim == 0 {
            return Ok(());
        }
        write!(f, "{:0width$b}", self.value, width = self.dim as usize)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupElement({self})")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// `sum_{v in V} Gamma_v`, stored as the sorted, duplicate-free support `V`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PermSum {
    dim: u32,
    support: Vec<u64>,
}

impl PermSum {
    pub fn zero(dim: u32) -> Self {
        Self {
            dim,
            support: Vec::new(),
        }
    }

    /// `Gamma_0 = I`.
    pub fn identity(dim: u32) -> Self {
        Self {
            dim,
            support: vec![0],
        }
    }

    pub fn gamma(v: GroupElement) -> Self {
        Self {
            dim: v.dim,
            support: vec![v.value],
        }
    }

    /// Sum of `Gamma_v` over the given values; repeated values cancel in pairs.
    pub fn from_values<I: IntoIterator<Item = u64>>(dim: u32, values: I) -> Result<Self> {
        check_dim(dim)?;
        let mut support: Vec<u64> = values.into_iter().collect();
        if let Some(&bad) = support.iter().find(|&&v| v >> dim != 0) {
            return Err(Error::InvalidParameter(format!(
                "value {bad:#b} does not fit in F_2^{dim}"
            )));
        }
        support.sort_unstable();
        Ok(Self {
            dim,
            support: cancel_pairs(support),
        })
    }

    pub fn from_elements<I: IntoIterator<Item = GroupElement>>(dim: u32, elems: I) -> Result<Self> {
        let mut values = Vec::new();
        for e in elems {
            same_dim(dim, e.dim, "from_elements")?;
            values.push(e.value);
        }
        Self::from_values(dim, values)
    }

    /// The whole group: `sum_v Gamma_v`, the all-ones matrix.
    pub fn everything(dim: u32) -> Result<Self> {
        check_dim(dim)?;
        if dim > 32 {
            return Err(Error::InvalidParameter(format!(
                "support of size 2^{dim} is too large"
            )));
        }
        Ok(Self {
            dim,
            support: (0..1u64 << dim).collect(),
        })
    }

    #[inline]
    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Sorted support values.
    #[inline]
    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        self.support.iter().map(|&value| GroupElement {
            dim: self.dim,
            value,
        })
    }

    /// `s(A) = |V|`.
    #[inline]
    pub fn weight(&self) -> usize {
        self.support.len()
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn contains(&self, v: u64) -> bool {
        self.support.binary_search(&v).is_ok()
    }

    pub fn parity(&self) -> Parity {
        if self.support.len() % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn add(&self, other: &PermSum) -> Result<PermSum> {
        same_dim(self.dim, other.dim, "add")?;
        let (a, b) = (&self.support, &other.support);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(PermSum {
            dim: self.dim,
            support: out,
        })
    }

    /// Product via `Gamma_v Gamma_w = Gamma_{v+w}`.
    pub fn mul(&self, other: &PermSum) -> Result<PermSum> {
        same_dim(self.dim, other.dim, "mul")?;
        let mut terms = Vec::with_capacity(self.support.len() * other.support.len());
        for &v in &self.support {
            terms.extend(other.support.iter().map(|&w| v ^ w));
        }
        terms.sort_unstable();
        Ok(PermSum {
            dim: self.dim,
            support: cancel_pairs(terms),
        })
    }

    /// Right multiplication by `Gamma_u`: translates the support by `u`.
    pub fn shift(&self, u: GroupElement) -> Result<PermSum> {
        same_dim(self.dim, u.dim, "shift")?;
        let mut support: Vec<u64> = self.support.iter().map(|&v| v ^ u.value).collect();
        support.sort_unstable();
        Ok(PermSum {
            dim: self.dim,
            support,
        })
    }

    /// For odd `s(A)`, checks `A^2 = I`. Errors on even parity.
    pub fn self_inverse_check(&self) -> Result<bool> {
        self.require_odd("self_inverse_check")?;
        Ok(self.mul(self)? == PermSum::identity(self.dim))
    }

    /// For odd `s(A)`, returns `C = A B`, which satisfies `A C = C A = B`.
    pub fn divide(&self, b: &PermSum) -> Result<PermSum> {
        self.require_odd("divide")?;
        let c = self.mul(b)?;
        debug_assert_eq!(&self.mul(&c)?, b);
        Ok(c)
    }

    /// Dense `2^r x 2^r` matrix with entry `(u, w) = 1` iff `u + w` is in the
    /// support.
    pub fn materialize(&self) -> Result<BitMatrix> {
        let n = self.order()?;
        check_budget("materialize", dense_bytes(n as u128, n as u128))?;
        let mut m = BitMatrix::zeros(n, n);
        for u in 0..n as u64 {
            for &v in &self.support {
                m.set(u as usize, (u ^ v) as usize, true);
            }
        }
        Ok(m)
    }

    /// Matrix order `2^r`, if addressable.
    pub fn order(&self) -> Result<usize> {
        if self.dim >= usize::BITS - 1 {
            return Err(Error::Capacity {
                what: "materialize",
                requested: u128::MAX,
                budget: crate::bitlin::memory_budget(),
            });
        }
        Ok(1usize << self.dim)
    }

    fn require_odd(&self, op: &str) -> Result<()> {
        if self.parity() == Parity::Even {
            return Err(Error::Precondition(format!(
                "{op} needs an odd number of summands, got {}",
                self.weight()
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for PermSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermSum(r={}, {{", self.dim)?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("})")
    }
}

/// Multiplies every block by the odd-weight `b`. The row space of the
/// horizontal concatenation is unchanged.
pub fn stripe_scale(blocks: &[PermSum], b: &PermSum) -> Result<Vec<PermSum>> {
    b.require_odd("stripe_scale")?;
    blocks.iter().map(|a| a.mul(b)).collect()
}

/// Rank of `[A Gamma_{u_1} | A Gamma_{u_2} | ...]`, which equals `rank(A)`.
pub fn class_concat_rank(a: &PermSum, shifts: &[GroupElement]) -> Result<usize> {
    if shifts.is_empty() {
        return Err(Error::Precondition("class_concat_rank needs at least one shift".into()));
    }
    let blocks = shifts
        .iter()
        .map(|&u| a.shift(u).and_then(|s| s.materialize()))
        .collect::<Result<Vec<_>>>()?;
    BitMatrix::hstack(&blocks)?.rank()
}

fn cancel_pairs(sorted: Vec<u64>) -> Vec<u64> {
    let mut out = Vec::with_capacity(sorted.len());
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            out.push(sorted[i]);
        }
        i = j;
    }
    out
}

#[inline]
pub(crate) fn low_mask(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

fn check_dim(dim: u32) -> Result<()> {
    if dim > MAX_DIM {
        return Err(Error::InvalidParameter(format!(
            "dimension {dim} exceeds the supported maximum {MAX_DIM}"
        )));
    }
    Ok(())
}

fn same_dim(a: u32, b: u32, op: &'static str) -> Result<()> {
    if a != b {
        return Err(Error::mismatch(op, format!("F_2^{a} vs F_2^{b}")));
    }
    Ok(())
}
