//! Parity-check matrix families.
//!
//! A family is described by its column set in `F_2^n`, where `n` is the
//! number of rows of the parity-check matrix. Columns use the
//! [`GroupElement`] encoding: row 1 is the most significant bit.
//!
//! `H_s` is built recursively from `H_2`. With `c` ranging over the columns of
//! `H_{s-1}`:
//!
//! ```text
//! cols(H_s) = { 0 . c . 0^r }                       first copy, in order
//!           ∪ { 1 . 0 . h : h a Hamming column }    new Hamming block
//!           ∪ { 1 . c . 0^r : c != 0 }              second copy
//! ```
//!
//! so `H_s` has `(s-1)r + s` rows and `(2^{s-1}-1)(2^r-1) + 2^{s-1} + 1`
//! columns.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitlin::BitMatrix;
use crate::error::{Error, Result};
use crate::permring::{GroupElement, PermSum, MAX_DIM};

/// Ordered, duplicate-free set of columns in `F_2^dim`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GeneratorSet {
    dim: u32,
    columns: Vec<u64>,
}

impl GeneratorSet {
    pub fn new(dim: u32, columns: Vec<u64>) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(Error::InvalidParameter(format!(
                "dimension {dim} exceeds {MAX_DIM}"
            )));
        }
        let mut seen = HashSet::with_capacity(columns.len());
        for &c in &columns {
            if c >> dim != 0 {
                return Err(Error::InvalidParameter(format!(
                    "column {c:#b} does not fit in F_2^{dim}"
                )));
            }
            if !seen.insert(c) {
                return Err(Error::DuplicateGenerator(
                    GroupElement::new(dim, c)?.to_string(),
                ));
            }
        }
        Ok(Self { dim, columns })
    }

    pub fn from_elements<I: IntoIterator<Item = GroupElement>>(dim: u32, elems: I) -> Result<Self> {
        let mut cols = Vec::new();
        for e in elems {
            if e.dim() != dim {
                return Err(Error::mismatch(
                    "GeneratorSet",
                    format!("element of F_2^{} in a set over F_2^{dim}", e.dim()),
                ));
            }
            cols.push(e.value());
        }
        Self::new(dim, cols)
    }

    /// Columns of a parity-check matrix; rows become coordinates.
    pub fn from_matrix(h: &BitMatrix) -> Result<Self> {
        let dim = u32::try_from(h.rows()).unwrap_or(u32::MAX);
        let cols = (0..h.cols())
            .map(|j| {
                (0..h.rows()).fold(0u64, |acc, i| (acc << 1) | u64::from(h.get(i, j)))
            })
            .collect();
        Self::new(dim, cols)
    }

    /// The `dim x len` matrix with these columns.
    pub fn to_matrix(&self) -> BitMatrix {
        let rows = self.dim as usize;
        let mut h = BitMatrix::zeros(rows, self.columns.len());
        for (j, &c) in self.columns.iter().enumerate() {
            for i in 0..rows {
                if c >> (rows - 1 - i) & 1 == 1 {
                    h.set(i, j, true);
                }
            }
        }
        h
    }

    #[inline]
    pub fn dim(&self) -> u32 {
        self.dim
    }

    #[inline]
    pub fn columns(&self) -> &[u64] {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn contains_zero(&self) -> bool {
        self.columns.contains(&0)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = u64> + '_ {
        self.columns.iter().copied().filter(|&c| c != 0)
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        let dim = self.dim;
        self.columns
            .iter()
            .map(move |&c| GroupElement::new(dim, c).expect("validated on construction"))
    }

    /// `sum_{h in S} Gamma_h`.
    pub fn perm_sum(&self) -> PermSum {
        PermSum::from_values(self.dim, self.columns.iter().copied())
            .expect("validated on construction")
    }

    /// One bitstring per line, in column order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in self.elements() {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut dim = None;
        let mut cols = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let e = GroupElement::from_bits(line).map_err(|e| Error::Parse {
                line: i + 1,
                msg: e.to_string(),
            })?;
            match dim {
                None => dim = Some(e.dim()),
                Some(d) if d != e.dim() => {
                    return Err(Error::Parse {
                        line: i + 1,
                        msg: format!("length {} differs from {d}", e.dim()),
                    })
                }
                _ => {}
            }
            cols.push(e.value());
        }
        Self::new(dim.unwrap_or(0), cols)
    }
}

impl fmt::Debug for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneratorSet")
            .field("dim", &self.dim)
            .field("len", &self.columns.len())
            .finish()
    }
}

/// Columns of the Hamming parity-check matrix: `1 ..= 2^r - 1`, lexicographic.
fn hamming_columns(r: u32) -> impl Iterator<Item = u64> {
    1..1u64 << r
}

fn check_hamming_order(r: u32) -> Result<()> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!(
            "Hamming order must be at least 2, got {r}"
        )));
    }
    if r > 24 {
        return Err(Error::InvalidParameter(format!(
            "Hamming order {r} is too large to enumerate"
        )));
    }
    Ok(())
}

/// `r x (2^r - 1)` matrix of all nonzero columns in lexicographic order.
pub fn hamming_matrix(r: u32) -> Result<BitMatrix> {
    Ok(hamming_generators(r)?.to_matrix())
}

pub fn hamming_generators(r: u32) -> Result<GeneratorSet> {
    check_hamming_order(r)?;
    GeneratorSet::new(r, hamming_columns(r).collect())
}

/// Hamming columns padded with `m` zero rows below, in `F_2^{r+m}`.
pub fn padded_hamming_generators(r: u32, m: u32) -> Result<GeneratorSet> {
    check_hamming_order(r)?;
    if m < 1 {
        return Err(Error::InvalidParameter("padding must be at least 1".into()));
    }
    GeneratorSet::new(r + m, hamming_columns(r).map(|h| h << m).collect())
}

/// Standard basis `e_1, ..., e_r`.
pub fn zero_code_generators(r: u32) -> Result<GeneratorSet> {
    if r < 1 {
        return Err(Error::InvalidParameter("zero code needs r >= 1".into()));
    }
    GeneratorSet::new(r, (1..=r).map(|i| 1u64 << (r - i)).collect())
}

/// `e_1, ..., e_r, 1_r, 0_r`.
pub fn repetition_generators(r: u32) -> Result<GeneratorSet> {
    if r < 2 {
        return Err(Error::InvalidParameter(format!(
            "repetition family needs r >= 2, got {r}"
        )));
    }
    let mut cols: Vec<u64> = (1..=r).map(|i| 1u64 << (r - i)).collect();
    cols.push((1u64 << r) - 1);
    cols.push(0);
    GeneratorSet::new(r, cols)
}

/// Smallest Hamming order for which `H_2`/`H_s` are used unchecked.
pub const MIN_FAMILY_ORDER: u32 = 4;

fn check_family_order(r: u32, allow_small_r: bool) -> Result<()> {
    check_hamming_order(r)?;
    if r < MIN_FAMILY_ORDER && !allow_small_r {
        return Err(Error::InvalidParameter(format!(
            "r = {r} is below {MIN_FAMILY_ORDER}; pass the small-r override to build it anyway"
        )));
    }
    Ok(())
}

/// Column set of `H_2` in `F_2^{r+2}`: the zero column, `01|h` for each
/// Hamming column `h`, then `10|0` and `11|0`.
pub fn h2_generators(r: u32) -> Result<GeneratorSet> {
    check_family_order(r, false)?;
    Ok(build_h2(r))
}

pub fn h2_matrix(r: u32) -> Result<BitMatrix> {
    Ok(h2_generators(r)?.to_matrix())
}

fn build_h2(r: u32) -> GeneratorSet {
    let mut cols = Vec::with_capacity((1 << r) + 2);
    cols.push(0);
    cols.extend(hamming_columns(r).map(|h| (0b01 << r) | h));
    cols.push(0b10 << r);
    cols.push(0b11 << r);
    GeneratorSet::new(r + 2, cols).expect("H_2 columns are distinct")
}

/// Rows of `H_s`: `(s-1)r + s`.
pub fn hs_rows(s: u32, r: u32) -> u64 {
    (s as u64 - 1) * r as u64 + s as u64
}

/// Columns of `H_s`: `(2^{s-1}-1)(2^r-1) + 2^{s-1} + 1`.
pub fn hs_cols(s: u32, r: u32) -> u64 {
    let half = 1u64 << (s - 1);
    (half - 1) * ((1u64 << r) - 1) + half + 1
}

pub fn hs_generators(s: u32, r: u32) -> Result<GeneratorSet> {
    check_hs(s, r, false)?;
    Ok(build_hs(s, r))
}

pub fn hs_matrix(s: u32, r: u32) -> Result<BitMatrix> {
    Ok(hs_generators(s, r)?.to_matrix())
}

fn check_hs(s: u32, r: u32, allow_small_r: bool) -> Result<()> {
    if s < 2 {
        return Err(Error::InvalidParameter(format!("H_s needs s >= 2, got {s}")));
    }
    check_family_order(r, allow_small_r)?;
    if hs_rows(s, r) > MAX_DIM as u64 || s > 20 {
        return Err(Error::InvalidParameter(format!(
            "H_{s} with r = {r} has more than {MAX_DIM} rows"
        )));
    }
    Ok(())
}

fn build_hs(s: u32, r: u32) -> GeneratorSet {
    let mut gens = build_h2(r);
    for _ in 3..=s {
        let prev = gens;
        let dim = prev.dim() + r + 1;
        let top = 1u64 << (dim - 1);
        let mut cols = Vec::with_capacity(2 * prev.len() + (1 << r));
        cols.extend(prev.columns().iter().map(|&c| c << r));
        cols.extend(hamming_columns(r).map(|h| top | h));
        cols.extend(prev.nonzero().map(|c| top | (c << r)));
        gens = GeneratorSet::new(dim, cols).expect("H_s columns are distinct");
    }
    assert_eq!(gens.dim() as u64, hs_rows(s, r), "H_{s} row count");
    assert_eq!(gens.len() as u64, hs_cols(s, r), "H_{s} column count");
    gens
}

/// Outcome of a bounded minimum-distance search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distance {
    Exactly(usize),
    AtLeast(usize),
}

/// Smallest number of nonzero columns of `h` summing to zero, searched up to
/// `limit - 1`. The zero column is ignored. Supports `limit <= 4`.
pub fn min_distance(h: &BitMatrix, limit: usize) -> Result<Distance> {
    if !(1..=4).contains(&limit) {
        return Err(Error::InvalidParameter(format!(
            "distance search supports limits 1..=4, got {limit}"
        )));
    }
    let gens = GeneratorSet::from_matrix(h);
    // Duplicated columns are a dependency of size 2, so tolerate them here.
    let cols: Vec<u64> = match gens {
        Ok(g) => g.nonzero().collect(),
        Err(Error::DuplicateGenerator(_)) => {
            if limit > 2 {
                return Ok(Distance::Exactly(2));
            }
            return Ok(Distance::AtLeast(limit));
        }
        Err(e) => return Err(e),
    };
    if cols.len() > 1 << 16 {
        return Err(Error::Capacity {
            what: "triple scan",
            requested: (cols.len() as u128).pow(2),
            budget: crate::bitlin::memory_budget(),
        });
    }
    if limit > 3 {
        let set: HashSet<u64> = cols.iter().copied().collect();
        for (i, &a) in cols.iter().enumerate() {
            for &b in &cols[i + 1..] {
                let c = a ^ b;
                if c != a && c != b && set.contains(&c) {
                    return Ok(Distance::Exactly(3));
                }
            }
        }
    }
    Ok(Distance::AtLeast(limit))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Hamming,
    PaddedHamming,
    ZeroCode,
    Repetition,
    H2,
    H3,
    Hs,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 7] = [
        FamilyKind::Hamming,
        FamilyKind::PaddedHamming,
        FamilyKind::ZeroCode,
        FamilyKind::Repetition,
        FamilyKind::H2,
        FamilyKind::H3,
        FamilyKind::Hs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Hamming => "hamming",
            FamilyKind::PaddedHamming => "padded_hamming",
            FamilyKind::ZeroCode => "zero_code",
            FamilyKind::Repetition => "repetition",
            FamilyKind::H2 => "h2",
            FamilyKind::H3 => "h3",
            FamilyKind::Hs => "hs",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown family {s:?}")))
    }
}

/// One member of a family: the kind plus its parameters.
///
/// `s` is used by `hs` only (`h2`/`h3` fix it at 2/3) and `m` by
/// `padded_hamming` only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub r: u32,
    pub s: u32,
    pub m: u32,
    /// Permit `r < 4` for `h2`/`h3`/`hs`.
    pub allow_small_r: bool,
}

impl FamilySpec {
    fn base(kind: FamilyKind, r: u32) -> Self {
        Self {
            kind,
            r,
            s: 0,
            m: 0,
            allow_small_r: false,
        }
    }

    pub fn hamming(r: u32) -> Self {
        Self::base(FamilyKind::Hamming, r)
    }

    pub fn padded_hamming(r: u32, m: u32) -> Self {
        Self {
            m,
            ..Self::base(FamilyKind::PaddedHamming, r)
        }
    }

    pub fn zero_code(r: u32) -> Self {
        Self::base(FamilyKind::ZeroCode, r)
    }

    pub fn repetition(r: u32) -> Self {
        Self::base(FamilyKind::Repetition, r)
    }

    pub fn h2(r: u32) -> Self {
        Self {
            s: 2,
            ..Self::base(FamilyKind::H2, r)
        }
    }

    pub fn h3(r: u32) -> Self {
        Self {
            s: 3,
            ..Self::base(FamilyKind::H3, r)
        }
    }

    pub fn hs(s: u32, r: u32) -> Self {
        Self {
            s,
            ..Self::base(FamilyKind::Hs, r)
        }
    }

    pub fn with_small_r(mut self, allow: bool) -> Self {
        self.allow_small_r = allow;
        self
    }

    /// Recursion depth for the `H_s` kinds.
    pub fn depth(&self) -> Option<u32> {
        match self.kind {
            FamilyKind::H2 => Some(2),
            FamilyKind::H3 => Some(3),
            FamilyKind::Hs => Some(self.s),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            FamilyKind::Hamming => check_hamming_order(self.r),
            FamilyKind::PaddedHamming => {
                check_hamming_order(self.r)?;
                if self.m < 1 || self.r + self.m > MAX_DIM {
                    return Err(Error::InvalidParameter(format!(
                        "padding m = {} out of range",
                        self.m
                    )));
                }
                Ok(())
            }
            FamilyKind::ZeroCode => {
                if self.r < 1 || self.r > MAX_DIM {
                    return Err(Error::InvalidParameter(format!(
                        "zero code order {} out of range",
                        self.r
                    )));
                }
                Ok(())
            }
            FamilyKind::Repetition => {
                if self.r < 2 || self.r > MAX_DIM {
                    return Err(Error::InvalidParameter(format!(
                        "repetition order {} out of range",
                        self.r
                    )));
                }
                Ok(())
            }
            FamilyKind::H2 | FamilyKind::H3 | FamilyKind::Hs => {
                check_hs(self.depth().unwrap_or(0), self.r, self.allow_small_r)
            }
        }
    }

    /// Dimension of the ambient space `F_2^n`.
    pub fn dim(&self) -> Result<u32> {
        self.validate()?;
        Ok(match self.kind {
            FamilyKind::Hamming | FamilyKind::ZeroCode | FamilyKind::Repetition => self.r,
            FamilyKind::PaddedHamming => self.r + self.m,
            _ => hs_rows(self.depth().unwrap_or(0), self.r) as u32,
        })
    }

    pub fn generators(&self) -> Result<GeneratorSet> {
        self.validate()?;
        match self.kind {
            FamilyKind::Hamming => hamming_generators(self.r),
            FamilyKind::PaddedHamming => padded_hamming_generators(self.r, self.m),
            FamilyKind::ZeroCode => zero_code_generators(self.r),
            FamilyKind::Repetition => repetition_generators(self.r),
            FamilyKind::H2 | FamilyKind::H3 | FamilyKind::Hs => {
                Ok(build_hs(self.depth().unwrap_or(0), self.r))
            }
        }
    }

    /// The parity-check matrix whose columns are [`FamilySpec::generators`].
    pub fn matrix(&self) -> Result<BitMatrix> {
        Ok(self.generators()?.to_matrix())
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FamilyKind::Hs => write!(f, "hs(s={}, r={})", self.s, self.r),
            FamilyKind::PaddedHamming => write!(f, "padded_hamming(r={}, m={})", self.r, self.m),
            k => write!(f, "{k}(r={})", self.r),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(dim: u32, v: u64) -> String {
        GroupElement::new(dim, v).unwrap().to_string()
    }

    #[test]
    fn hamming_column_order() {
        let h = hamming_matrix(2).unwrap();
        assert_eq!(h, BitMatrix::from_strs(&["011", "101"]).unwrap());
        let h3 = hamming_matrix(3).unwrap();
        assert_eq!((h3.rows(), h3.cols()), (3, 7));
        assert_eq!(h3.column(0).to_string(), "001");
        assert_eq!(h3.column(6).to_string(), "111");
        assert!(hamming_matrix(1).is_err());
    }

    #[test]
    fn hamming_distance_is_three() {
        for r in 2..=6 {
            assert_eq!(
                min_distance(&hamming_matrix(r).unwrap(), 4).unwrap(),
                Distance::Exactly(3)
            );
        }
    }

    #[test]
    fn h2_layout() {
        let h = h2_matrix(4).unwrap();
        assert_eq!((h.rows(), h.cols()), (6, 18));
        let g = h2_generators(4).unwrap();
        assert_eq!(bits(6, g.columns()[0]), "000000");
        assert_eq!(bits(6, g.columns()[1]), "010001");
        assert_eq!(bits(6, g.columns()[15]), "011111");
        assert_eq!(bits(6, g.columns()[16]), "100000");
        assert_eq!(bits(6, g.columns()[17]), "110000");
        assert_eq!(min_distance(&h, 4).unwrap(), Distance::AtLeast(4));
    }

    #[test]
    fn small_r_needs_override() {
        assert!(h2_generators(3).is_err());
        assert!(FamilySpec::h2(3).generators().is_err());
        let g = FamilySpec::h2(3).with_small_r(true).generators().unwrap();
        assert_eq!(g.len(), 10);
        assert!(FamilySpec::hs(3, 2).with_small_r(true).generators().is_ok());
    }

    #[test]
    fn hs_base_case_is_h2() {
        assert_eq!(hs_matrix(2, 5).unwrap(), h2_matrix(5).unwrap());
    }

    #[test]
    fn h3_dimensions_and_blocks() {
        let h = hs_matrix(3, 4).unwrap();
        assert_eq!((h.rows(), h.cols()), (11, 50));
        let g = hs_generators(3, 4).unwrap();
        // Column 1|0...0 was replaced by the new Hamming block.
        assert!(!g.columns().contains(&(1 << 10)));
        let new_block: Vec<u64> = g.columns()[18..33].to_vec();
        assert_eq!(new_block, (1..16).map(|h| (1 << 10) | h).collect::<Vec<_>>());
        assert_eq!(g.columns()[0], 0);
        assert_eq!(min_distance(&h, 4).unwrap(), Distance::AtLeast(4));
    }

    #[test]
    fn hs_column_formula() {
        for s in 2..=5 {
            for r in 4..=8 {
                let g = hs_generators(s, r).unwrap();
                assert_eq!(g.dim() as u64, (s as u64 - 1) * r as u64 + s as u64);
                assert_eq!(
                    g.len() as u64,
                    ((1u64 << (s - 1)) - 1) * ((1u64 << r) - 1) + (1u64 << (s - 1)) + 1
                );
            }
        }
    }

    #[test]
    fn zero_and_repetition_sets() {
        let z = zero_code_generators(3).unwrap();
        assert_eq!(z.columns(), &[4, 2, 1]);
        let rep = repetition_generators(2).unwrap();
        assert_eq!(rep.columns(), &[2, 1, 3, 0]);
        assert!(repetition_generators(1).is_err());
    }

    #[test]
    fn padded_hamming_sits_on_top_rows() {
        let g = padded_hamming_generators(2, 1).unwrap();
        assert_eq!(g.dim(), 3);
        assert_eq!(g.columns(), &[0b010, 0b100, 0b110]);
        assert!(!g.contains_zero());
    }

    #[test]
    fn generator_set_rejects_duplicates() {
        assert!(matches!(
            GeneratorSet::new(3, vec![1, 2, 1]),
            Err(Error::DuplicateGenerator(_))
        ));
        assert!(GeneratorSet::new(2, vec![4]).is_err());
    }

    #[test]
    fn generator_text_round_trip() {
        let g = h2_generators(4).unwrap();
        let text = g.to_text();
        assert_eq!(text.lines().next(), Some("000000"));
        assert_eq!(GeneratorSet::from_text(&text).unwrap(), g);
        assert_eq!(GeneratorSet::from_matrix(&g.to_matrix()).unwrap(), g);
        assert!(GeneratorSet::from_text("01\n011\n").is_err());
    }

    #[test]
    fn family_names() {
        for k in FamilyKind::ALL {
            assert_eq!(k.name().parse::<FamilyKind>().unwrap(), k);
        }
        assert_eq!("zero-code".parse::<FamilyKind>().unwrap(), FamilyKind::ZeroCode);
        assert!("kneser".parse::<FamilyKind>().is_err());
    }

    #[test]
    fn distance_with_duplicate_columns() {
        let h = BitMatrix::from_strs(&["110", "110"]).unwrap();
        assert_eq!(min_distance(&h, 4).unwrap(), Distance::Exactly(2));
    }
}
