//! Property suites behind `cosetcodes verify`.

use anyhow::Result;
use cosetcodes::codefam::{h2_generators, hs_generators, repetition_generators};
use cosetcodes::cosetgraph::{block_decompose, is_connected, is_triangle_free};
use cosetcodes::permring::{class_concat_rank, stripe_scale};
use cosetcodes::storage::{guessing_equivalence, verify_repair};
use cosetcodes::{BitMatrix, BitVector, CosetGraph, GeneratorSet, GroupElement, Parity, PermSum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::Suite;

pub struct Options {
    pub r: u32,
    pub seed: u64,
    pub cases: u64,
    pub mutant: bool,
}

pub struct SuiteResult {
    pub name: &'static str,
    pub passed: u64,
    pub total: u64,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            passed: 0,
            total: 0,
        }
    }

    fn check(&mut self, ok: bool) {
        self.total += 1;
        self.passed += u64::from(ok);
    }

    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

pub fn run(suite: Suite, opts: &Options) -> Result<Vec<SuiteResult>> {
    let mut out = Vec::new();
    if matches!(suite, Suite::All | Suite::Permring) {
        out.push(permring(opts)?);
    }
    if matches!(suite, Suite::All | Suite::Reassembly) {
        out.push(reassembly(opts)?);
    }
    if matches!(suite, Suite::All | Suite::Graph) {
        out.push(graph(opts)?);
    }
    if matches!(suite, Suite::All | Suite::Storage) {
        out.push(storage(opts)?);
    }
    Ok(out)
}

fn random_sum(rng: &mut ChaCha8Rng, dim: u32, parity: Option<Parity>) -> PermSum {
    let n = 1u64 << dim;
    let mut values: Vec<u64> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
    let want_odd = match parity {
        Some(Parity::Odd) => Some(true),
        Some(Parity::Even) => Some(false),
        None => None,
    };
    if let Some(odd) = want_odd {
        if (values.len() % 2 == 1) != odd {
            let v = rng.random_range(0..n);
            match values.iter().position(|&x| x == v) {
                Some(i) => {
                    values.remove(i);
                }
                None => values.push(v),
            }
        }
    }
    PermSum::from_values(dim, values).expect("values below 2^dim")
}

fn random_set(rng: &mut ChaCha8Rng, dim: u32, density: f64) -> GeneratorSet {
    let cols = (0..1u64 << dim).filter(|_| rng.random_bool(density)).collect();
    GeneratorSet::new(dim, cols).expect("distinct values below 2^dim")
}

fn random_element(rng: &mut ChaCha8Rng, dim: u32) -> GroupElement {
    GroupElement::new(dim, rng.random_range(0..1u64 << dim)).expect("in range")
}

/// Translation products, odd-weight inverses and division, stripe scaling,
/// shifted concatenation.
fn permring(opts: &Options) -> Result<SuiteResult> {
    let mut res = SuiteResult::new("permring");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let r = opts.r;
    let gammas: Vec<BitMatrix> = (0..1u64 << r)
        .map(|v| PermSum::gamma(GroupElement::new(r, v).unwrap()).materialize())
        .collect::<Result<_, _>>()?;
    let exhaustive = r <= 5;
    let pairs: Vec<(u64, u64)> = if exhaustive {
        (0..1u64 << r)
            .flat_map(|v| (0..1u64 << r).map(move |w| (v, w)))
            .collect()
    } else {
        (0..opts.cases)
            .map(|_| (rng.random_range(0..1u64 << r), rng.random_range(0..1u64 << r)))
            .collect()
    };
    for (v, w) in pairs {
        let product = gammas[v as usize].mat_mul(&gammas[w as usize])?;
        res.check(product == gammas[(v ^ w) as usize]);
    }
    let n = 1usize << r;
    for _ in 0..opts.cases {
        let a = random_sum(&mut rng, r, Some(Parity::Odd));
        let b = random_sum(&mut rng, r, Some(Parity::Odd));
        res.check(a.self_inverse_check()? && a.materialize()?.rank()? == n);
        res.check(a.mul(&b)?.parity() == Parity::Odd);
        let c = random_sum(&mut rng, r, None);
        res.check(b.mul(&b.divide(&c)?)? == c);
        let blocks: Vec<PermSum> = (0..3).map(|_| random_sum(&mut rng, r, None)).collect();
        let scaled = stripe_scale(&blocks, &b)?;
        let lhs = BitMatrix::hstack(&materialize_all(&blocks)?)?;
        let rhs = BitMatrix::hstack(&materialize_all(&scaled)?)?;
        res.check(lhs.row_space_equal(&rhs)?);
        let shifts: Vec<GroupElement> = (0..3).map(|_| random_element(&mut rng, r)).collect();
        res.check(class_concat_rank(&c, &shifts)? == c.materialize()?.rank()?);
    }
    Ok(res)
}

fn materialize_all(sums: &[PermSum]) -> Result<Vec<BitMatrix>> {
    Ok(sums.iter().map(PermSum::materialize).collect::<Result<_, _>>()?)
}

/// Block grids reassemble to the adjacency sum for every prefix length.
fn reassembly(opts: &Options) -> Result<SuiteResult> {
    let mut res = SuiteResult::new("reassembly");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed);
    let r = opts.r;
    for _ in 0..opts.cases {
        let s = random_set(&mut rng, r, 0.3);
        let direct = s.perm_sum().materialize()?;
        for l in 0..=r {
            let mut grid = block_decompose(&s, l)?.reassemble()?;
            if opts.mutant {
                grid.flip(0, 0);
            }
            res.check(grid == direct);
        }
    }
    if r >= 4 {
        let d = block_decompose(&repetition_generators(r)?, 2)?;
        let inner = repetition_generators(r - 2)?.perm_sum();
        let j = PermSum::gamma(GroupElement::all_ones(r - 2));
        let id = PermSum::identity(r - 2);
        res.check(d.block(0b00) == &inner.add(&j)?);
        res.check(d.block(0b01) == &id && d.block(0b10) == &id);
        res.check(d.block(0b11) == &j);
    }
    Ok(res)
}

fn has_triangle_explicit(g: &CosetGraph) -> bool {
    let n = g.vertex_count();
    (0..n).any(|u| {
        g.neighbors(u)
            .filter(|&v| v > u)
            .any(|v| g.neighbors(v).filter(|&w| w > v).any(|w| g.is_adjacent(u, w)))
    })
}

fn connected_explicit(g: &CosetGraph) -> bool {
    let n = g.vertex_count() as usize;
    let mut seen = vec![false; n];
    let mut stack = vec![0u64];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for w in g.neighbors(v) {
            if !seen[w as usize] {
                seen[w as usize] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}

/// Triangle-freeness and connectivity against explicit graph searches.
fn graph(opts: &Options) -> Result<SuiteResult> {
    let mut res = SuiteResult::new("graph");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9a9);
    let r = opts.r.min(8);
    for _ in 0..opts.cases {
        let s = random_set(&mut rng, r, 4.0 / (1u64 << r) as f64);
        let g = CosetGraph::new(s.clone());
        res.check(is_triangle_free(&s) != has_triangle_explicit(&g));
        res.check(is_connected(&s) == connected_explicit(&g));
    }
    let families = [h2_generators(4)?, h2_generators(5)?, hs_generators(3, 4)?];
    for s in families {
        let g = CosetGraph::new(s.clone());
        res.check(is_triangle_free(&s) && !has_triangle_explicit(&g));
        res.check(is_connected(&s) && connected_explicit(&g));
    }
    Ok(res)
}

/// Repair equations, kernel membership and the guessing game agree.
fn storage(opts: &Options) -> Result<SuiteResult> {
    let mut res = SuiteResult::new("storage");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x57);
    let r = opts.r.min(7);
    let n = 1usize << r;
    for _ in 0..opts.cases.div_ceil(10) {
        let s = random_set(&mut rng, r, 0.2);
        let g = CosetGraph::new(s);
        let h = g.parity_matrix()?;
        let kernel = h.kernel_basis()?;
        res.check(kernel.len() + h.rank()? == n);
        for k in &kernel {
            res.check(verify_repair(&g, k)?);
        }
        for _ in 0..10 {
            let x = BitVector::random(n, &mut rng);
            res.check(verify_repair(&g, &x)? == h.annihilates(&x)?);
        }
        let outcome = guessing_equivalence(&g, 100, rng.random())?;
        res.check(outcome.mismatches == 0);
    }
    Ok(res)
}
