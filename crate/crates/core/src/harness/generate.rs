//! Deterministic instance generators. The same `(kind, seed)` always gives
//! the same instance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::oracle::oracle_max_matching;
use crate::edmonds::MatrixPencil;
use crate::error::{invalid, Result};
use crate::ffield::PrimeField;
use crate::matrix::DenseMatrix;
use crate::mixedrank::{LinearMatroidPair, MixedMatrix};
use crate::tutte::Graph;

/// What to generate.
#[derive(Clone, Debug, PartialEq)]
pub enum GenKind {
    RandomGraph { n: usize, p: f64 },
    /// Random graph conditioned on having a perfect matching.
    PmGraph { n: usize, p: f64 },
    Mixed { rows: usize, cols: usize, density: f64 },
    MatroidPair { r1: usize, r2: usize, n: usize },
    /// `m` summands of order `n`, each of rank `summand_rank`.
    Pencil { m: usize, n: usize, summand_rank: usize },
}

#[derive(Clone, Debug)]
pub enum Instance {
    Graph(Graph),
    Mixed(MixedMatrix),
    MatroidPair(LinearMatroidPair),
    Pencil(MatrixPencil),
}

impl Instance {
    pub fn to_text(&self) -> String {
        match self {
            Instance::Graph(g) => g.to_text(),
            Instance::Mixed(m) => m.to_text(),
            Instance::MatroidPair(pair) => pair.to_text(),
            Instance::Pencil(p) => p.to_text(),
        }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("probability {p} outside [0, 1]"));
    }
    Ok(())
}

pub fn random_graph(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_probability(p)?;
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if r.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges)
}

/// Rejection sampling against the matching oracle; `n` even, at most 16.
pub fn pm_graph(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n % 2 == 1 {
        return invalid(format!("{n} vertices admit no perfect matching"));
    }
    for attempt in 0..10_000u64 {
        let g = random_graph(n, p, seed.wrapping_mul(10_007).wrapping_add(attempt))?;
        if 2 * oracle_max_matching(&g)? == n {
            return Ok(g);
        }
    }
    invalid(format!("no perfect-matching graph found for n = {n}, p = {p}"))
}

/// Each entry is an indeterminate with probability `density`, otherwise a
/// constant that is zero half the time and small otherwise.
pub fn random_mixed(rows: usize, cols: usize, density: f64, field: PrimeField, seed: u64) -> Result<MixedMatrix> {
    check_probability(density)?;
    let mut r = rng(seed);
    let mut m = DenseMatrix::zeros(field, rows, cols);
    let mut vars = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            if r.gen_bool(density) {
                vars.push((i, j));
            } else if r.gen_bool(0.5) {
                m.set(i, j, field.from_i64(r.gen_range(-3..=3)));
            }
        }
    }
    MixedMatrix::new(m, &vars)
}

fn small_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize, field: PrimeField) -> DenseMatrix {
    let data: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| r.gen_range(-1..=2)).collect()).collect();
    DenseMatrix::from_rows(field, &data).expect("rectangular")
}

pub fn matroid_pair(r1: usize, r2: usize, n: usize, field: PrimeField, seed: u64) -> Result<LinearMatroidPair> {
    let mut r = rng(seed);
    let a = small_matrix(&mut r, r1, n, field);
    let b = small_matrix(&mut r, r2, n, field);
    LinearMatroidPair::new(a, b)
}

/// Sum of `summand_rank` random rank-one products per matrix.
pub fn random_pencil(m: usize, n: usize, summand_rank: usize, field: PrimeField, seed: u64) -> Result<MatrixPencil> {
    if summand_rank > n {
        return invalid(format!("summand rank {summand_rank} exceeds the order {n}"));
    }
    let mut r = rng(seed);
    let mats = (0..m)
        .map(|_| {
            let u = small_matrix(&mut r, n, summand_rank, field);
            let v = small_matrix(&mut r, summand_rank, n, field);
            u.mul(&v).expect("shapes agree")
        })
        .collect();
    MatrixPencil::new(field, n, mats)
}

pub fn generate(kind: &GenKind, field: PrimeField, seed: u64) -> Result<Instance> {
    Ok(match *kind {
        GenKind::RandomGraph { n, p } => Instance::Graph(random_graph(n, p, seed)?),
        GenKind::PmGraph { n, p } => Instance::Graph(pm_graph(n, p, seed)?),
        GenKind::Mixed { rows, cols, density } => Instance::Mixed(random_mixed(rows, cols, density, field, seed)?),
        GenKind::MatroidPair { r1, r2, n } => Instance::MatroidPair(matroid_pair(r1, r2, n, field, seed)?),
        GenKind::Pencil { m, n, summand_rank } => Instance::Pencil(random_pencil(m, n, summand_rank, field, seed)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::DEFAULT_PRIME;

    #[test]
    fn generation_is_deterministic() {
        let f = PrimeField::new(DEFAULT_PRIME).unwrap();
        let kinds = [
            GenKind::RandomGraph { n: 6, p: 0.5 },
            GenKind::PmGraph { n: 8, p: 0.4 },
            GenKind::Mixed { rows: 3, cols: 4, density: 0.3 },
            GenKind::MatroidPair { r1: 2, r2: 3, n: 5 },
            GenKind::Pencil { m: 2, n: 4, summand_rank: 1 },
        ];
        for kind in &kinds {
            let a = generate(kind, f, 1).unwrap().to_text();
            assert_eq!(a, generate(kind, f, 1).unwrap().to_text());
        }
        let Instance::Graph(g) = generate(&kinds[1], f, 1).unwrap() else { unreachable!() };
        assert_eq!(oracle_max_matching(&g).unwrap(), 4);
        assert!(pm_graph(5, 0.5, 1).is_err());
        assert!(random_graph(4, 1.5, 1).is_err());
    }
}
