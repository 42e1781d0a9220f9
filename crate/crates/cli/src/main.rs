use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cosetcodes::storage::{self, ReportRecord};
use cosetcodes::{CosetGraph, FamilyKind, FamilySpec, RankMethod};
use serde::Serialize;

mod verify;

#[derive(Parser)]
#[command(name = "cosetcodes", version, about = "Storage codes on binary coset graphs")]
struct Cli {
    /// Largest dense matrix allowed, in bytes (suffixes K, M, G are binary).
    #[arg(long, global = true, env = "COSETCODES_MEMORY_CAP", value_parser = parse_bytes)]
    memory_cap: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a family's parity-check matrix and generator set.
    Family {
        #[command(flatten)]
        family: FamilyArgs,
        /// Output prefix; writes PREFIX.matrix.txt and PREFIX.gens.txt.
        /// Without it the matrix goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank, rate and bound check for one family member.
    Report {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, default_value = "auto")]
        method: RankMethod,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rate of H_s over an (s, r) grid against 1 - 2^-s - 2^-r+1.
    Sweep {
        #[arg(long, num_args = 0.., value_delimiter = ',', default_values_t = [2, 3])]
        s: Vec<u32>,
        #[arg(long, num_args = 0.., value_delimiter = ',', default_values_t = [4, 5, 6, 7, 8])]
        r: Vec<u32>,
        /// Add (s, r) = (4, 4), N = 65536.
        #[arg(long)]
        stress: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the property suites; exits nonzero if any case fails.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 4)]
        r: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Random cases per randomized check.
        #[arg(long, default_value_t = 200)]
        cases: u64,
        /// Flip one bit of every reassembled matrix (the reassembly suite
        /// must then fail).
        #[arg(long, hide = true)]
        mutant: bool,
    },
    /// Hat-guessing simulation against kernel membership.
    Guess {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long)]
    kind: FamilyKind,
    #[arg(long)]
    r: u32,
    /// Recursion depth (hs only).
    #[arg(long)]
    s: Option<u32>,
    /// Zero-row padding (padded-hamming only).
    #[arg(long)]
    m: Option<u32>,
    /// Accept r < 4 for h2/h3/hs.
    #[arg(long)]
    allow_small_r: bool,
}

impl FamilyArgs {
    fn spec(&self) -> Result<FamilySpec> {
        let spec = match self.kind {
            FamilyKind::Hamming => FamilySpec::hamming(self.r),
            FamilyKind::PaddedHamming => {
                let m = self.m.context("--m is required for padded-hamming")?;
                FamilySpec::padded_hamming(self.r, m)
            }
            FamilyKind::ZeroCode => FamilySpec::zero_code(self.r),
            FamilyKind::Repetition => FamilySpec::repetition(self.r),
            FamilyKind::H2 => FamilySpec::h2(self.r),
            FamilyKind::H3 => FamilySpec::h3(self.r),
            FamilyKind::Hs => FamilySpec::hs(self.s.context("--s is required for hs")?, self.r),
        };
        if let (Some(s), Some(depth)) = (self.s, spec.depth()) {
            if s != depth {
                bail!("--s {s} contradicts --kind {}", self.kind);
            }
        }
        let spec = spec.with_small_r(self.allow_small_r);
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Permring,
    Reassembly,
    Graph,
    Storage,
}

fn parse_bytes(text: &str) -> std::result::Result<u64, String> {
    let text = text.trim();
    let split = text.find(|c: char| !c.is_ascii_digit()).unwrap_or(text.len());
    let (digits, unit) = text.split_at(split);
    let value: u64 = digits.parse().map_err(|e| format!("bad byte count {text:?}: {e}"))?;
    let shift = match unit.trim().to_ascii_uppercase().as_str() {
        "" | "B" => 0,
        "K" | "KB" | "KIB" => 10,
        "M" | "MB" | "MIB" => 20,
        "G" | "GB" | "GIB" => 30,
        other => return Err(format!("unknown unit {other:?}")),
    };
    let bytes = value
        .checked_mul(1 << shift)
        .ok_or_else(|| format!("{text:?} overflows"))?;
    if bytes == 0 {
        return Err("memory cap must be positive".into());
    }
    Ok(bytes)
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_records(w: impl Write, format: Format, records: &[ReportRecord], single: bool) -> Result<()> {
    match format {
        Format::Csv => storage::write_csv(w, records)?,
        Format::Json if single => storage::write_json(w, &records[0])?,
        Format::Json => storage::write_json(w, records)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct GuessRecord {
    family: String,
    s: Option<u32>,
    r: u32,
    #[serde(rename = "N")]
    n: u64,
    rank: u64,
    trials: u64,
    seed: u64,
    matches: u64,
    mismatches: u64,
    successes: u64,
    log2_success: i64,
    p_s_num: Option<i64>,
    p_s_den: Option<i64>,
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(cap) = cli.memory_cap {
        cosetcodes::set_memory_budget(cap)?;
    }
    match cli.command {
        Command::Family { family, out } => {
            let spec = family.spec()?;
            let gens = spec.generators()?;
            let h = gens.to_matrix();
            match out {
                Some(prefix) => {
                    let stem = prefix.to_string_lossy();
                    let matrix_path = PathBuf::from(format!("{stem}.matrix.txt"));
                    let gens_path = PathBuf::from(format!("{stem}.gens.txt"));
                    let mut w = output(Some(&matrix_path))?;
                    h.write_text(&mut w)?;
                    w.flush()?;
                    std::fs::write(&gens_path, gens.to_text())
                        .with_context(|| format!("writing {}", gens_path.display()))?;
                }
                None => {
                    let mut w = output(None)?;
                    h.write_text(&mut w)?;
                    w.flush()?;
                }
            }
            Ok(true)
        }
        Command::Report {
            family,
            format,
            method,
            out,
        } => {
            let report = storage::storage_report_with(&family.spec()?, method)?;
            let mut w = output(out.as_deref())?;
            write_records(&mut w, format, &[report.record()], true)?;
            w.flush()?;
            Ok(true)
        }
        Command::Sweep {
            s,
            r,
            stress,
            format,
            out,
        } => {
            let mut pairs: Vec<(u32, u32)> = s
                .iter()
                .flat_map(|&s| r.iter().map(move |&r| (s, r)))
                .collect();
            if stress {
                pairs.push((4, 4));
            }
            let sweep = storage::theorem_sweep(&pairs)?;
            let mut w = output(out.as_deref())?;
            write_records(&mut w, format, &sweep.records(), false)?;
            w.flush()?;
            eprintln!(
                "sweep: {} rows, {} below bound, rates {}",
                sweep.rows.len(),
                sweep.violations.len(),
                if sweep.monotone { "non-decreasing in r" } else { "NOT monotone in r" }
            );
            Ok(sweep.passed())
        }
        Command::Verify {
            suite,
            r,
            seed,
            cases,
            mutant,
        } => {
            let opts = verify::Options {
                r,
                seed,
                cases,
                mutant,
            };
            let results = verify::run(suite, &opts)?;
            let mut all = true;
            for res in &results {
                println!(
                    "{}: {}/{} passed{}",
                    res.name,
                    res.passed,
                    res.total,
                    if res.ok() { "" } else { "  FAIL" }
                );
                all &= res.ok();
            }
            Ok(all)
        }
        Command::Guess {
            family,
            trials,
            seed,
            out,
        } => {
            let spec = family.spec()?;
            let g = CosetGraph::new(spec.generators()?);
            let outcome = storage::guessing_equivalence(&g, trials, seed)?;
            let p = outcome.success_probability();
            let record = GuessRecord {
                family: spec.kind.name().to_string(),
                s: spec.depth(),
                r: spec.r,
                n: outcome.n,
                rank: outcome.rank,
                trials: outcome.trials,
                seed,
                matches: outcome.matches,
                mismatches: outcome.mismatches,
                successes: outcome.successes,
                log2_success: outcome.log2_success(),
                p_s_num: p.and_then(|p| i64::try_from(*p.numer()).ok()),
                p_s_den: p.and_then(|p| i64::try_from(*p.denom()).ok()),
            };
            let mut w = output(out.as_deref())?;
            storage::write_json(&mut w, &record)?;
            w.flush()?;
            Ok(outcome.mismatches == 0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
