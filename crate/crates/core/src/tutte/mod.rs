//! Tutte matrices and the compress-or-compute computation of the maximum
//! matching size.
//!
//! An assignment gives one field value per edge; substituting it into the
//! symbolic Tutte matrix `T` yields a skew matrix `T'` whose rank is at most
//! `2 nu(G)`. An assignment is *max-rank* when no single-edge change
//! `x_i <- a`, `a` in `S`, either raises the rank (case 2A) or keeps it while
//! strictly enlarging the deficiency set (case 2B). [`case_split`] finds the
//! lexicographically first such `(i, a)`; the restore functions invert it.

mod catalytic;
mod gallai;
mod graph;

pub use catalytic::{matching_size, max_rank_assignment, tutte_header_bits, MatchingSize};
pub use gallai::{gallai_edmonds, GallaiEdmonds};
pub use graph::Graph;

use crate::error::{invalid, Error, Result};
use crate::ffield::{FieldElement, FieldSpec};
use crate::matrix::sweep::{value_classes, LinearFamily, RankProfile, Restriction};
use crate::matrix::{deficiency_skew, DeficiencySet, SkewMatrix};
use crate::params::ScanStrategy;

/// `T'` for the assignment `values` (one per edge, canonical edge order).
pub fn tutte_matrix(g: &Graph, values: &[FieldElement], field: crate::ffield::PrimeField) -> Result<SkewMatrix> {
    if values.len() != g.m() {
        return invalid(format!("assignment has {} values for {} edges", values.len(), g.m()));
    }
    let mut t = SkewMatrix::zeros(field, g.n());
    for (&(u, v), &a) in g.edges().iter().zip(values) {
        t.set_pair(u, v, a);
    }
    Ok(t)
}

/// Result of the single-variable case analysis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TutteCase {
    MaxRank,
    /// `rank T'_{x_edge <- value} = rank + 2`.
    TwoA { edge: usize, value: FieldElement, rank: usize },
    /// Same rank, deficiency grows; `vertex` is the smallest new member.
    TwoB { edge: usize, value: FieldElement, vertex: usize },
}

/// How many values of `S` satisfy a restoring predicate, and the first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Candidates {
    pub first: Option<FieldElement>,
    pub count: u64,
}

impl Candidates {
    pub(crate) fn none() -> Self {
        Candidates { first: None, count: 0 }
    }

    pub(crate) fn add(&mut self, value: FieldElement, count: u64) {
        if count > 0 && self.first.map_or(true, |f| value < f) {
            self.first = Some(value);
        }
        self.count += count;
    }

    /// The unique candidate, or a uniqueness error naming `block`.
    pub fn unique(self, block: usize) -> Result<FieldElement> {
        match (self.count, self.first) {
            (1, Some(v)) => Ok(v),
            (c, _) => Err(Error::UniquenessViolation { block, candidates: c }),
        }
    }
}

// T' with edge i's two entries replaced by y and -y
fn edge_family(g: &Graph, t: &SkewMatrix, edge: usize) -> LinearFamily {
    let f = t.field();
    let (u, v) = g.edge(edge);
    let mut base = t.as_dense().clone();
    base.set(u, v, FieldElement::ZERO);
    base.set(v, u, FieldElement::ZERO);
    LinearFamily::new(base, vec![(u, v, FieldElement::ONE), (v, u, f.neg(FieldElement::ONE))])
        .expect("two entries inside the matrix")
}

fn with_value(values: &[FieldElement], edge: usize, a: FieldElement) -> Vec<FieldElement> {
    let mut v = values.to_vec();
    v[edge] = a;
    v
}

/// Finds the first `(i, a)` witnessing case 2A, else the first witnessing
/// case 2B, else reports max rank.
pub fn case_split(g: &Graph, values: &[FieldElement], spec: &FieldSpec, scan: ScanStrategy) -> Result<TutteCase> {
    let field = spec.field;
    let t = tutte_matrix(g, values, field)?;
    let k = t.rank();
    let d = deficiency_skew(&t);
    match scan {
        ScanStrategy::Sweep => {
            let families: Vec<LinearFamily> = (0..g.m()).map(|i| edge_family(g, &t, i)).collect();
            let full: Vec<RankProfile> = families.iter().map(|fam| fam.profile(Restriction::Full)).collect();
            for (i, prof) in full.iter().enumerate() {
                if prof.generic() != k + 2 {
                    continue;
                }
                let hit = value_classes(&[prof], spec.value_set_size()).into_iter().find(|c| c.ranks[0] == k + 2);
                if let Some(class) = hit {
                    return Ok(TutteCase::TwoA { edge: i, value: class.rep, rank: k });
                }
            }
            for (i, fam) in families.iter().enumerate() {
                let drops: Vec<RankProfile> = (0..g.n()).map(|w| fam.profile(Restriction::DropIndex(w))).collect();
                let mut refs = vec![&full[i]];
                refs.extend(drops.iter());
                for class in value_classes(&refs, spec.value_set_size()) {
                    if class.ranks[0] != k {
                        continue;
                    }
                    let members: Vec<usize> = (0..g.n()).filter(|&w| class.ranks[1 + w] == k).collect();
                    let grown = DeficiencySet::from_indices(members);
                    if d.is_strict_subset(&grown) {
                        let vertex = grown.difference(&d)[0];
                        return Ok(TutteCase::TwoB { edge: i, value: class.rep, vertex });
                    }
                }
            }
        }
        ScanStrategy::Exhaustive => {
            for i in 0..g.m() {
                for a in spec.values() {
                    if tutte_matrix(g, &with_value(values, i, a), field)?.rank() == k + 2 {
                        return Ok(TutteCase::TwoA { edge: i, value: a, rank: k });
                    }
                }
            }
            for i in 0..g.m() {
                for a in spec.values() {
                    let t2 = tutte_matrix(g, &with_value(values, i, a), field)?;
                    if t2.rank() != k {
                        continue;
                    }
                    let grown = deficiency_skew(&t2);
                    if d.is_strict_subset(&grown) {
                        let vertex = grown.difference(&d)[0];
                        return Ok(TutteCase::TwoB { edge: i, value: a, vertex });
                    }
                }
            }
        }
    }
    Ok(TutteCase::MaxRank)
}

/// True iff no single-edge substitution from `S` raises the rank or
/// strictly enlarges the deficiency set at equal rank.
pub fn is_max_rank(g: &Graph, values: &[FieldElement], spec: &FieldSpec, scan: ScanStrategy) -> Result<bool> {
    Ok(case_split(g, values, spec, scan)? == TutteCase::MaxRank)
}

/// Values `a` in `S` with `rank T'_{x_edge <- a} = rank`. The entry of
/// `values` at `edge` is ignored.
pub fn restore_value_2a(
    g: &Graph,
    values: &[FieldElement],
    edge: usize,
    rank: usize,
    spec: &FieldSpec,
    scan: ScanStrategy,
) -> Result<Candidates> {
    let field = spec.field;
    let mut out = Candidates::none();
    match scan {
        ScanStrategy::Sweep => {
            let t = tutte_matrix(g, values, field)?;
            let prof = edge_family(g, &t, edge).profile(Restriction::Full);
            for class in value_classes(&[&prof], spec.value_set_size()) {
                if class.ranks[0] == rank {
                    out.add(class.rep, class.count);
                }
            }
        }
        ScanStrategy::Exhaustive => {
            for a in spec.values() {
                if tutte_matrix(g, &with_value(values, edge, a), field)?.rank() == rank {
                    out.add(a, 1);
                }
            }
        }
    }
    Ok(out)
}

/// Values `a` in `S` for which `vertex` is not in `D(T'_{x_edge <- a})`.
pub fn restore_value_2b(
    g: &Graph,
    values: &[FieldElement],
    edge: usize,
    vertex: usize,
    spec: &FieldSpec,
    scan: ScanStrategy,
) -> Result<Candidates> {
    let field = spec.field;
    if vertex >= g.n() {
        return Err(Error::ContractViolation(format!("vertex {vertex} outside the graph")));
    }
    let mut out = Candidates::none();
    match scan {
        ScanStrategy::Sweep => {
            let t = tutte_matrix(g, values, field)?;
            let fam = edge_family(g, &t, edge);
            let full = fam.profile(Restriction::Full);
            let drop = fam.profile(Restriction::DropIndex(vertex));
            for class in value_classes(&[&full, &drop], spec.value_set_size()) {
                if class.ranks[1] < class.ranks[0] {
                    out.add(class.rep, class.count);
                }
            }
        }
        ScanStrategy::Exhaustive => {
            for a in spec.values() {
                let t2 = tutte_matrix(g, &with_value(values, edge, a), field)?;
                if t2.without(vertex).rank() < t2.rank() {
                    out.add(a, 1);
                }
            }
        }
    }
    Ok(out)
}

/// Greedy max-rank assignment: start from all zeros and apply case
/// witnesses until none is left.
pub fn geelen_greedy(g: &Graph, spec: &FieldSpec, scan: ScanStrategy) -> Result<Vec<FieldElement>> {
    let mut values = vec![FieldElement::ZERO; g.m()];
    // each step raises the rank or grows the deficiency set at equal rank
    let cap = (g.n() / 2 + 1) * (g.n() + 1) + 1;
    for _ in 0..cap {
        match case_split(g, &values, spec, scan)? {
            TutteCase::MaxRank => return Ok(values),
            TutteCase::TwoA { edge, value, .. } | TutteCase::TwoB { edge, value, .. } => values[edge] = value,
        }
    }
    Err(Error::LemmaViolation("greedy assignment did not stabilise".into()))
}

#[cfg(test)]
mod tests;
