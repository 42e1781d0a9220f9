//! Storage codes on coset graphs: rate reports, repair checks and the
//! hat-guessing game.
//!
//! The storage code of `G` is the kernel of its parity matrix, so its
//! dimension is `N - rank` and its rate `1 - rank / N`. Rates and bounds are
//! exact rationals throughout.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitlin::{dense_bytes, memory_budget, BitVector};
use crate::codefam::{FamilyKind, FamilySpec, GeneratorSet};
use crate::cosetgraph::{block_reduced_rank, CosetGraph};
use crate::error::{Error, Result};

pub type Rate = Ratio<i128>;

/// How the parity-matrix rank is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RankMethod {
    /// Eliminate the full `N x N` matrix.
    Dense,
    /// Block-reduced rank over the `H_s` prefix layout; never forms the
    /// full matrix.
    Structured,
    /// Dense when the matrix fits the memory budget, structured otherwise.
    Auto,
}

impl RankMethod {
    pub fn name(self) -> &'static str {
        match self {
            RankMethod::Dense => "dense",
            RankMethod::Structured => "structured",
            RankMethod::Auto => "auto",
        }
    }
}

impl fmt::Display for RankMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RankMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(RankMethod::Dense),
            "structured" => Ok(RankMethod::Structured),
            "auto" => Ok(RankMethod::Auto),
            other => Err(Error::InvalidParameter(format!("unknown rank method {other:?}"))),
        }
    }
}

/// Whether a family's rank is known exactly or only bounded above.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundRelation {
    Exact,
    AtMost,
}

/// The rank formula that applies to a family, restated as a rate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaperBound {
    pub relation: BoundRelation,
    pub rank: u128,
    /// `1 - rank / N`: the exact rate, or the lower bound on it.
    pub rate: Rate,
    pub met: bool,
}

impl PaperBound {
    fn new(relation: BoundRelation, rank_bound: u128, n: u64, rank: u64) -> Self {
        let met = match relation {
            BoundRelation::Exact => rank as u128 == rank_bound,
            BoundRelation::AtMost => rank as u128 <= rank_bound,
        };
        Self {
            relation,
            rank: rank_bound,
            rate: Rate::from_integer(1) - Rate::new(rank_bound as i128, n as i128),
            met,
        }
    }
}

/// Rank of the zero code's augmented matrix.
pub fn zero_code_rank(r: u32) -> u128 {
    if r % 2 == 0 {
        1 << r
    } else {
        1 << (r - 1)
    }
}

/// Rank of the repetition code's adjacency matrix (loops included).
pub fn repetition_rank(r: u32) -> u128 {
    if r % 2 == 1 {
        1 << r
    } else {
        ((1u128 << r) - (1u128 << (r / 2))) / 2
    }
}

/// `2^{(s-1)r} + (2^{s-1} - 1) 2^{(s-2)r+2}`, the rank bound for `G_s`.
pub fn hs_rank_bound(s: u32, r: u32) -> u128 {
    (1u128 << ((s - 1) * r)) + ((1u128 << (s - 1)) - 1) * (1u128 << ((s - 2) * r + 2))
}

/// `1 - 2^{-s} - 2^{-r+1}`.
pub fn theorem_rate_bound(s: u32, r: u32) -> Rate {
    Rate::from_integer(1) - Rate::new(1, 1i128 << s) - Rate::new(2, 1i128 << r)
}

fn paper_bound(spec: &FamilySpec, n: u64, rank: u64) -> PaperBound {
    use BoundRelation::*;
    let (relation, bound) = match spec.kind {
        FamilyKind::Hamming => (Exact, 1),
        FamilyKind::PaddedHamming => (Exact, 1u128 << spec.m),
        FamilyKind::ZeroCode => (Exact, zero_code_rank(spec.r)),
        FamilyKind::Repetition => (Exact, repetition_rank(spec.r)),
        FamilyKind::H2 => (Exact, (1u128 << spec.r) + 4),
        FamilyKind::H3 | FamilyKind::Hs => {
            (AtMost, hs_rank_bound(spec.depth().unwrap_or(2), spec.r))
        }
    };
    PaperBound::new(relation, bound, n, rank)
}

/// Rank of the parity matrix of `gens`, together with the method used.
///
/// `layout` is `(prefix_len, block_width)` for the structured method.
pub fn parity_rank(
    gens: &GeneratorSet,
    layout: Option<(u32, u32)>,
    method: RankMethod,
) -> Result<(u64, RankMethod)> {
    let n = 1u128 << gens.dim();
    let method = match method {
        RankMethod::Auto if dense_bytes(n, n) <= memory_budget() as u128 || layout.is_none() => {
            RankMethod::Dense
        }
        RankMethod::Auto => RankMethod::Structured,
        m => m,
    };
    let rank = match method {
        RankMethod::Structured => {
            let (prefix, width) = layout.ok_or_else(|| {
                Error::NotBlockStructured("no block layout for this generator set".into())
            })?;
            block_reduced_rank(gens, prefix, width)?
        }
        _ => CosetGraph::new(gens.clone()).parity_matrix()?.into_rank() as u64,
    };
    Ok((rank, method))
}

fn block_layout(spec: &FamilySpec) -> Option<(u32, u32)> {
    spec.depth().map(|s| (s, spec.r))
}

/// The derived statistics of one family member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StorageReport {
    pub family: FamilySpec,
    pub n: u64,
    pub rank: u64,
    pub dim: u64,
    pub rate: Rate,
    /// Guessing number, `N + log2 P_s = N - rank`.
    pub gn: u64,
    pub triangle_free: bool,
    pub connected: bool,
    pub bound: PaperBound,
    pub method: RankMethod,
}

impl StorageReport {
    /// `log2` of the success probability of the kernel strategy, `dim - N`.
    pub fn log2_success(&self) -> i64 {
        self.dim as i64 - self.n as i64
    }

    pub fn record(&self) -> ReportRecord {
        ReportRecord::new(self, &self.bound.rate, self.bound.met)
    }
}

/// Builds the family, its graph and parity matrix, and evaluates the
/// applicable rank formula.
pub fn storage_report(spec: &FamilySpec) -> Result<StorageReport> {
    storage_report_with(spec, RankMethod::Auto)
}

pub fn storage_report_with(spec: &FamilySpec, method: RankMethod) -> Result<StorageReport> {
    let gens = spec.generators()?;
    let n = 1u64 << gens.dim();
    let triangle_free = crate::cosetgraph::is_triangle_free(&gens);
    let connected = crate::cosetgraph::is_connected(&gens);
    let (rank, method) = parity_rank(&gens, block_layout(spec), method)?;
    let dim = n - rank;
    Ok(StorageReport {
        family: *spec,
        n,
        rank,
        dim,
        rate: Rate::new(dim as i128, n as i128),
        gn: dim,
        triangle_free,
        connected,
        bound: paper_bound(spec, n, rank),
        method,
    })
}

/// Flat serialized form of a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub family: String,
    pub s: Option<u32>,
    pub r: u32,
    #[serde(rename = "N")]
    pub n: u64,
    pub rank: u64,
    pub dim: u64,
    pub rate_num: i64,
    pub rate_den: i64,
    pub gn: u64,
    pub triangle_free: bool,
    pub connected: bool,
    pub bound_rhs_num: i64,
    pub bound_rhs_den: i64,
    pub bound_met: bool,
}

impl ReportRecord {
    fn new(report: &StorageReport, rhs: &Rate, met: bool) -> Self {
        Self {
            family: report.family.kind.name().to_string(),
            s: report.family.depth(),
            r: report.family.r,
            n: report.n,
            rank: report.rank,
            dim: report.dim,
            rate_num: *report.rate.numer() as i64,
            rate_den: *report.rate.denom() as i64,
            gn: report.gn,
            triangle_free: report.triangle_free,
            connected: report.connected,
            bound_rhs_num: *rhs.numer() as i64,
            bound_rhs_den: *rhs.denom() as i64,
            bound_met: met,
        }
    }
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(mut w: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

/// CSV with a header row; the header is written even when `records` is empty.
pub fn write_csv<W: Write>(w: W, records: &[ReportRecord]) -> Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    out.write_record([
        "family",
        "s",
        "r",
        "N",
        "rank",
        "dim",
        "rate_num",
        "rate_den",
        "gn",
        "triangle_free",
        "connected",
        "bound_rhs_num",
        "bound_rhs_den",
        "bound_met",
    ])?;
    for rec in records {
        out.serialize(rec)?;
    }
    out.flush()?;
    Ok(())
}

/// Full-parity repair: every vertex equals the sum of its neighbours.
pub fn verify_repair(g: &CosetGraph, c: &BitVector) -> Result<bool> {
    let n = g.vertex_count();
    if c.len() as u64 != n {
        return Err(Error::mismatch(
            "verify_repair",
            format!("word of length {} on {n} vertices", c.len()),
        ));
    }
    Ok((0..n).all(|v| {
        let sum = g.neighbors(v).fold(false, |acc, w| acc ^ c.get(w as usize));
        sum == c.get(v as usize)
    }))
}

/// Result of the hat-guessing simulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuessOutcome {
    pub trials: u64,
    /// Trials where "everyone guessed right" agreed with kernel membership.
    pub matches: u64,
    pub mismatches: u64,
    /// Trials in which every vertex guessed right.
    pub successes: u64,
    pub n: u64,
    pub rank: u64,
}

impl GuessOutcome {
    /// `log2 P_s = dim - N = -rank`.
    pub fn log2_success(&self) -> i64 {
        -(self.rank as i64)
    }

    /// `P_s = 2^{dim - N}` when it fits an `i128` denominator.
    pub fn success_probability(&self) -> Option<Rate> {
        (self.rank < 127).then(|| Rate::new(1, 1i128 << self.rank))
    }
}

/// Every vertex guesses the sum of its neighbours' colours. Success of the
/// whole team must coincide with the colouring lying in the kernel of the
/// parity matrix.
///
/// Colourings are drawn from ChaCha8 seeded with `seed`, `N` bits per trial
/// filled word by word, so outcomes are identical across platforms.
pub fn guessing_equivalence(g: &CosetGraph, trials: u64, seed: u64) -> Result<GuessOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.vertex_count() as usize;
    let colorings = (0..trials).map(|_| BitVector::random(n, &mut rng));
    guess_over(g, colorings)
}

/// [`guessing_equivalence`] over caller-supplied colourings.
pub fn guess_over<I: IntoIterator<Item = BitVector>>(g: &CosetGraph, colorings: I) -> Result<GuessOutcome> {
    let h = g.parity_matrix()?;
    let rank = h.rank()? as u64;
    let n = g.vertex_count();
    let mut out = GuessOutcome {
        trials: 0,
        matches: 0,
        mismatches: 0,
        successes: 0,
        n,
        rank,
    };
    for x in colorings {
        if x.len() as u64 != n {
            return Err(Error::mismatch(
                "guess",
                format!("colouring of length {} on {n} vertices", x.len()),
            ));
        }
        let success = (0..n).all(|v| {
            let guess = g.neighbors(v).fold(false, |acc, w| acc ^ x.get(w as usize));
            guess == x.get(v as usize)
        });
        let member = h.annihilates(&x)?;
        out.trials += 1;
        out.successes += u64::from(success);
        if success == member {
            out.matches += 1;
        } else {
            out.mismatches += 1;
        }
    }
    Ok(out)
}

/// All `2^dim` codewords of the storage code, in Gray-code order from zero.
pub fn kernel_enumerate(g: &CosetGraph, cap: u64) -> Result<Vec<BitVector>> {
    let basis = g.parity_matrix()?.kernel_basis()?;
    let k = basis.len() as u32;
    if k >= 64 || (1u64 << k) > cap {
        return Err(Error::Capacity {
            what: "kernel enumeration",
            requested: 1u128 << k.min(127),
            budget: cap,
        });
    }
    let n = g.vertex_count() as usize;
    let mut word = BitVector::zeros(n);
    let mut out = Vec::with_capacity(1 << k);
    out.push(word.clone());
    for i in 1u64..1 << k {
        word.xor_assign(&basis[i.trailing_zeros() as usize])?;
        out.push(word.clone());
    }
    Ok(out)
}

/// One `(s, r)` row of the rate sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub s: u32,
    pub r: u32,
    pub report: StorageReport,
    /// `1 - 2^{-s} - 2^{-r+1}`.
    pub rate_bound: Rate,
    pub bound_met: bool,
}

impl SweepRow {
    pub fn record(&self) -> ReportRecord {
        ReportRecord::new(&self.report, &self.rate_bound, self.bound_met)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sweep {
    pub rows: Vec<SweepRow>,
    /// `(s, r)` pairs whose rate falls below the bound.
    pub violations: Vec<(u32, u32)>,
    /// For each `s`, rates do not decrease as `r` grows.
    pub monotone: bool,
}

impl Sweep {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn records(&self) -> Vec<ReportRecord> {
        self.rows.iter().map(SweepRow::record).collect()
    }
}

/// Reports for `H_s(r)` over the given pairs, evaluated in parallel and
/// ordered by `(s, r)`.
pub fn theorem_sweep(pairs: &[(u32, u32)]) -> Result<Sweep> {
    let mut pairs = pairs.to_vec();
    pairs.sort_unstable();
    pairs.dedup();
    let rows = pairs
        .par_iter()
        .map(|&(s, r)| {
            let report = storage_report(&FamilySpec::hs(s, r))?;
            let rate_bound = theorem_rate_bound(s, r);
            Ok(SweepRow {
                s,
                r,
                bound_met: report.rate >= rate_bound,
                rate_bound,
                report,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let violations = rows
        .iter()
        .filter(|row| !row.bound_met)
        .map(|row| (row.s, row.r))
        .collect();
    let monotone = rows
        .windows(2)
        .all(|w| w[0].s != w[1].s || w[0].report.rate <= w[1].report.rate);
    Ok(Sweep {
        rows,
        violations,
        monotone,
    })
}
