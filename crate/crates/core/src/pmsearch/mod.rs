//! Perfect-matching search through weighted Pfaffian polynomials, and the
//! assembly of a maximum matching from the Gallai-Edmonds decomposition.
//!
//! With a full-rank Tutte evaluation `T'` and edge weights `W`, the matrix
//! `A = T' o W` has entries `T'_uv z^W(uv)`, so `Pf(A)` is a polynomial in
//! `z` whose monomials come from perfect matchings. Marking one edge `e`
//! with a factor `y` (and weight zero) splits it as `P0 + y P1`: `P0` sums
//! the matchings avoiding `e`, `P1` those through it. Either some edge
//! satisfies `W(e) = mindeg P0 - mindeg P1` (so `W(e)` can be forgotten and
//! recomputed), or the edges whose `P0` lacks the least surviving monomial
//! of `Pf(A)` form a perfect matching.

mod assemble;
mod catalytic;

pub use assemble::{bipartite_max_matching, maximum_matching, BipartiteMatching, MaximumMatching};
pub use catalytic::{perfect_matching, perfect_matching_with, pm_header_bits, PerfectMatching};

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::ffield::{interpolate, min_degree_term, FieldElement, PrimeField, UniPoly};
use crate::matrix::{pfaffian, pfaffian_poly, SkewMatrix, SkewPolyEntries};
use crate::tutte::{tutte_matrix, Graph};

/// Natural edge weights, each at most `w_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightAssignment {
    weights: Vec<u64>,
    w_max: u64,
}

impl WeightAssignment {
    pub fn new(weights: Vec<u64>, w_max: u64) -> Result<Self> {
        if let Some(w) = weights.iter().find(|&&w| w > w_max) {
            return invalid(format!("weight {w} exceeds the bound {w_max}"));
        }
        Ok(WeightAssignment { weights, w_max })
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn w_max(&self) -> u64 {
        self.w_max
    }

    pub fn get(&self, e: usize) -> u64 {
        self.weights[e]
    }

    /// A copy with edge `e` set to weight zero.
    pub fn zeroed(&self, e: usize) -> Self {
        let mut w = self.clone();
        w.weights[e] = 0;
        w
    }

    /// Upper bound on the weight of any perfect matching of an `n`-vertex
    /// graph: the sum of the `n/2` largest weights.
    pub fn degree_bound(&self, n: usize) -> usize {
        let mut w = self.weights.clone();
        w.sort_unstable_by(|a, b| b.cmp(a));
        w.iter().take(n / 2).sum::<u64>() as usize
    }
}

/// `T' o W`, optionally with one edge carrying the factor `y` and weight 0.
#[derive(Clone, Debug)]
pub struct WeightedSkewPoly<'a> {
    graph: &'a Graph,
    tprime: &'a [FieldElement],
    weights: &'a WeightAssignment,
    field: PrimeField,
    marked: Option<(usize, FieldElement)>,
}

impl<'a> WeightedSkewPoly<'a> {
    pub fn new(graph: &'a Graph, tprime: &'a [FieldElement], weights: &'a WeightAssignment, field: PrimeField) -> Result<Self> {
        if tprime.len() != graph.m() || weights.weights.len() != graph.m() {
            return invalid("one Tutte value and one weight per edge are required");
        }
        Ok(WeightedSkewPoly { graph, tprime, weights, field, marked: None })
    }

    /// `A_e` with `y` fixed to `y`.
    pub fn marked(&self, e: usize, y: FieldElement) -> Self {
        WeightedSkewPoly { marked: Some((e, y)), ..self.clone() }
    }
}

impl SkewPolyEntries for WeightedSkewPoly<'_> {
    fn field(&self) -> PrimeField {
        self.field
    }

    fn order(&self) -> usize {
        self.graph.n()
    }

    fn eval_at(&self, z: FieldElement) -> SkewMatrix {
        let f = self.field;
        let mut m = SkewMatrix::zeros(f, self.graph.n());
        for (e, &(u, v)) in self.graph.edges().iter().enumerate() {
            let x = match self.marked {
                Some((me, y)) if me == e => f.mul(self.tprime[e], y),
                _ => f.mul(self.tprime[e], f.pow(z, self.weights.weights[e])),
            };
            m.set_pair(u, v, x);
        }
        m
    }
}

fn require_full_rank(g: &Graph, tprime: &[FieldElement], field: PrimeField) -> Result<()> {
    let rank = tutte_matrix(g, tprime, field)?.rank();
    if rank != g.n() {
        return Err(Error::PreconditionViolation(format!("Tutte evaluation has rank {rank}, not {}", g.n())));
    }
    Ok(())
}

/// `P0` and `P1` for edge `e`, from the Pfaffians of `A_e` at `y = 0` and
/// `y = 1`.
pub fn split_p0_p1(
    g: &Graph,
    tprime: &[FieldElement],
    weights: &WeightAssignment,
    e: usize,
    field: PrimeField,
) -> Result<(UniPoly, UniPoly)> {
    require_full_rank(g, tprime, field)?;
    let zeroed = weights.zeroed(e);
    let a = WeightedSkewPoly::new(g, tprime, &zeroed, field)?;
    let d = zeroed.degree_bound(g.n());
    let p0 = pfaffian_poly(&a.marked(e, FieldElement::ZERO), d)?;
    let at_one = pfaffian_poly(&a.marked(e, FieldElement::ONE), d)?;
    Ok((p0.clone(), at_one.sub(&p0)))
}

/// An edge whose weight is determined by the two least degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdEdge {
    pub edge: usize,
    /// Least degree in `P0`.
    pub without: usize,
    /// Least degree in `P1`.
    pub through: usize,
}

/// `Pf(A)` and the split for every edge, sharing one evaluation of `A` per
/// point.
#[derive(Clone, Debug)]
pub struct PfaffianSplits {
    pub total: UniPoly,
    pub splits: Vec<(UniPoly, UniPoly)>,
}

impl PfaffianSplits {
    pub fn compute(g: &Graph, tprime: &[FieldElement], weights: &WeightAssignment, field: PrimeField) -> Result<Self> {
        require_full_rank(g, tprime, field)?;
        let a = WeightedSkewPoly::new(g, tprime, weights, field)?;
        let d = weights.degree_bound(g.n());
        crate::matrix::check_points(field, d)?;
        let m = g.m();
        let mut total = Vec::with_capacity(d + 1);
        let mut zero = vec![Vec::with_capacity(d + 1); m];
        let mut one = vec![Vec::with_capacity(d + 1); m];
        for z in 0..=d as u64 {
            let z = field.elem(z);
            let mut at = a.eval_at(z);
            total.push((z, pfaffian(&at)));
            for (e, &(u, v)) in g.edges().iter().enumerate() {
                let keep = at.get(u, v);
                at.set_pair(u, v, FieldElement::ZERO);
                zero[e].push((z, pfaffian(&at)));
                at.set_pair(u, v, tprime[e]);
                one[e].push((z, pfaffian(&at)));
                at.set_pair(u, v, keep);
            }
        }
        let total = interpolate(field, &total, d)?;
        if total.is_zero() {
            return Err(Error::LemmaViolation("Pf(A) vanishes although T' has full rank".into()));
        }
        let mut splits = Vec::with_capacity(m);
        for (z, o) in zero.iter().zip(&one) {
            let p0 = interpolate(field, z, d)?;
            let p1 = interpolate(field, o, d)?.sub(&p0);
            splits.push((p0, p1));
        }
        Ok(PfaffianSplits { total, splits })
    }

    /// Least degree of `Pf(A)`.
    pub fn w0(&self) -> usize {
        min_degree_term(&self.total).expect("Pf(A) is nonzero").0
    }

    /// The first edge with nonzero `P0`, `P1` and `W(e) = w_bar - w_e`.
    pub fn threshold_edge(&self, weights: &WeightAssignment) -> Option<ThresholdEdge> {
        self.splits.iter().enumerate().find_map(|(e, (p0, p1))| {
            let (without, _) = min_degree_term(p0)?;
            let (through, _) = min_degree_term(p1)?;
            (through as u64 + weights.get(e) == without as u64).then_some(ThresholdEdge { edge: e, without, through })
        })
    }

    /// Edges whose `P0` lacks `z^w0`.
    pub fn extract(&self) -> Vec<usize> {
        let w0 = self.w0();
        (0..self.splits.len()).filter(|&e| self.splits[e].0.coeff(w0).is_zero()).collect()
    }
}

/// See [`PfaffianSplits::threshold_edge`].
pub fn find_threshold_edge(
    g: &Graph,
    tprime: &[FieldElement],
    weights: &WeightAssignment,
    field: PrimeField,
) -> Result<Option<ThresholdEdge>> {
    Ok(PfaffianSplits::compute(g, tprime, weights, field)?.threshold_edge(weights))
}

/// The perfect matching of least surviving weight `w0`, validated.
pub fn extract_matching(
    g: &Graph,
    tprime: &[FieldElement],
    weights: &WeightAssignment,
    field: PrimeField,
) -> Result<(Vec<usize>, usize)> {
    let splits = PfaffianSplits::compute(g, tprime, weights, field)?;
    validated_extract(g, &splits, weights)
}

pub(crate) fn validated_extract(g: &Graph, splits: &PfaffianSplits, weights: &WeightAssignment) -> Result<(Vec<usize>, usize)> {
    let m = splits.extract();
    let w0 = splits.w0();
    if !g.is_perfect_matching(&m) {
        return Err(Error::LemmaViolation(format!("extracted edge set {m:?} is not a perfect matching")));
    }
    let weight: u64 = m.iter().map(|&e| weights.get(e)).sum();
    if weight != w0 as u64 {
        return Err(Error::LemmaViolation(format!("extracted matching weighs {weight}, expected {w0}")));
    }
    Ok((m, w0))
}
