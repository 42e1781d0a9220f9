//! Reference implementations used only by the tests. They work on plain
//! `Vec<Vec<bool>>` and explicit vertex lists and share no code with the
//! library's packed routines.

#![allow(dead_code)]

use std::collections::HashSet;

use cosetcodes::{BitMatrix, BitVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Dense = Vec<Vec<bool>>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn to_dense(m: &BitMatrix) -> Dense {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect())
        .collect()
}

pub fn from_dense(d: &Dense, cols: usize) -> BitMatrix {
    let mut m = BitMatrix::zeros(d.len(), cols);
    for (i, row) in d.iter().enumerate() {
        for (j, &b) in row.iter().enumerate() {
            m.set(i, j, b);
        }
    }
    m
}

pub fn random_dense(rng: &mut ChaCha8Rng, rows: usize, cols: usize, density: f64) -> Dense {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.random_bool(density)).collect())
        .collect()
}

/// Textbook elimination on booleans.
pub fn naive_rank(m: &Dense) -> usize {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| a[i][c]) else {
            continue;
        };
        a.swap(rank, p);
        for i in 0..rows {
            if i != rank && a[i][c] {
                for j in 0..cols {
                    let bit = a[rank][j];
                    a[i][j] ^= bit;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn naive_mul_vec(m: &Dense, x: &[bool]) -> Vec<bool> {
    m.iter()
        .map(|row| row.iter().zip(x).fold(false, |acc, (&a, &b)| acc ^ (a & b)))
        .collect()
}

/// `sum_{h in gens} Gamma_h` written out entry by entry: row `v` has a one in
/// column `v XOR h` for each generator.
pub fn translation_sum(dim: u32, gens: &[u64]) -> Dense {
    let n = 1usize << dim;
    let mut m = vec![vec![false; n]; n];
    for (v, row) in m.iter_mut().enumerate() {
        for &h in gens {
            row[v ^ h as usize] ^= true;
        }
    }
    m
}

/// Parity matrix of `Cay(F^dim, gens)`: adjacency plus the identity, built
/// from the explicit edge list.
pub fn parity_oracle(dim: u32, gens: &[u64]) -> Dense {
    let n = 1usize << dim;
    let mut m = vec![vec![false; n]; n];
    let nonzero: HashSet<u64> = gens.iter().copied().filter(|&h| h != 0).collect();
    for v in 0..n {
        m[v][v] = true;
        for w in 0..n {
            if nonzero.contains(&((v ^ w) as u64)) {
                m[v][w] = true;
            }
        }
    }
    m
}

/// Adjacency lists of the explicit graph (loops dropped).
pub fn explicit_graph(dim: u32, gens: &[u64]) -> Vec<Vec<usize>> {
    let n = 1usize << dim;
    let nonzero: Vec<usize> = gens.iter().filter(|&&h| h != 0).map(|&h| h as usize).collect();
    (0..n)
        .map(|v| nonzero.iter().map(|&h| v ^ h).collect())
        .collect()
}

/// Searches every vertex triple reachable along edges.
pub fn has_three_clique(adj: &[Vec<usize>]) -> bool {
    let sets: Vec<HashSet<usize>> = adj.iter().map(|a| a.iter().copied().collect()).collect();
    for u in 0..adj.len() {
        for &v in &adj[u] {
            if v <= u {
                continue;
            }
            for &w in &adj[v] {
                if w > v && sets[u].contains(&w) {
                    return true;
                }
            }
        }
    }
    false
}

/// Breadth-first search from vertex 0.
pub fn explicitly_connected(adj: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut queue = std::collections::VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Every linear combination of `vectors`, as a set.
pub fn span(vectors: &[u64]) -> HashSet<u64> {
    let mut out = HashSet::from([0u64]);
    for &v in vectors {
        let shifted: Vec<u64> = out.iter().map(|&x| x ^ v).collect();
        out.extend(shifted);
    }
    out
}

/// Row span of a small matrix by enumerating all row combinations.
pub fn row_span(m: &BitMatrix) -> HashSet<Vec<u64>> {
    let mut out = HashSet::from([vec![0u64; m.row_words(0).len().max(1)]]);
    for i in 0..m.rows() {
        let row = m.row_words(i).to_vec();
        let shifted: Vec<Vec<u64>> = out
            .iter()
            .map(|x| x.iter().zip(&row).map(|(a, b)| a ^ b).collect())
            .collect();
        out.extend(shifted);
    }
    out
}

pub fn random_subset(rng: &mut ChaCha8Rng, dim: u32, density: f64) -> Vec<u64> {
    (0..1u64 << dim).filter(|_| rng.random_bool(density)).collect()
}

pub fn random_bitvector(rng: &mut ChaCha8Rng, len: usize) -> BitVector {
    let bits: Vec<bool> = (0..len).map(|_| rng.random_bool(0.5)).collect();
    BitVector::from_bools(&bits)
}
