//! Maximum-rank completion of mixed matrices and linear matroid
//! intersection.
//!
//! A mixed matrix has constant entries plus independent indeterminates at
//! some positions. The compress-or-compute loop mirrors the Tutte case with
//! one change: a single substitution can raise the rank by at most one,
//! and the deficiency set ranges over rows and columns (see [`Line`](crate::matrix::Line)).

mod catalytic;
mod matroid;

pub use catalytic::{mixed_header_bits, mixed_max_rank, MixedRank};
pub use matroid::{matroid_intersection_size, LinearMatroidPair};

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::ffield::{FieldElement, FieldSpec, PrimeField};
use crate::matrix::io::{next_number, tokens};
use crate::matrix::sweep::{value_classes, LinearFamily, RankProfile, Restriction};
use crate::matrix::{deficiency_dense, rank_of, DeficiencySet, DenseMatrix};
use crate::params::ScanStrategy;
use crate::tutte::Candidates;

/// Constant part plus the positions of the indeterminates, in row-major
/// order. Variable positions hold zero in the constant part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedMatrix {
    constant: DenseMatrix,
    vars: Vec<(usize, usize)>,
}

impl MixedMatrix {
    pub fn new(constant: DenseMatrix, vars: &[(usize, usize)]) -> Result<Self> {
        let mut vars = vars.to_vec();
        vars.sort_unstable();
        if vars.windows(2).any(|w| w[0] == w[1]) {
            return invalid("an indeterminate position is listed twice");
        }
        for &(i, j) in &vars {
            if i >= constant.rows() || j >= constant.cols() {
                return invalid(format!("indeterminate position ({i}, {j}) outside the matrix"));
            }
            if !constant.get(i, j).is_zero() {
                return invalid(format!("position ({i}, {j}) is both constant and variable"));
            }
        }
        Ok(MixedMatrix { constant, vars })
    }

    /// Matrix with an indeterminate in every nonzero position of `pattern`.
    pub fn generic(pattern: &DenseMatrix) -> Self {
        let mut vars = Vec::new();
        for i in 0..pattern.rows() {
            for j in 0..pattern.cols() {
                if !pattern.get(i, j).is_zero() {
                    vars.push((i, j));
                }
            }
        }
        let zeros = DenseMatrix::zeros(pattern.field(), pattern.rows(), pattern.cols());
        MixedMatrix { constant: zeros, vars }
    }

    pub fn field(&self) -> PrimeField {
        self.constant.field()
    }

    pub fn rows(&self) -> usize {
        self.constant.rows()
    }

    pub fn cols(&self) -> usize {
        self.constant.cols()
    }

    pub fn constant(&self) -> &DenseMatrix {
        &self.constant
    }

    pub fn vars(&self) -> &[(usize, usize)] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    /// `A'` for one value per indeterminate.
    pub fn evaluate(&self, values: &[FieldElement]) -> Result<DenseMatrix> {
        if values.len() != self.vars.len() {
            return invalid(format!("{} values for {} indeterminates", values.len(), self.vars.len()));
        }
        let mut m = self.constant.clone();
        for (&(i, j), &a) in self.vars.iter().zip(values) {
            m.set(i, j, a);
        }
        Ok(m)
    }

    /// Parses a header `r c p` and `r` rows of integers or `?`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut it = tokens(text);
        let rows: usize = next_number(&mut it, "row count")?;
        let cols: usize = next_number(&mut it, "column count")?;
        let p: u64 = next_number(&mut it, "prime")?;
        let field = PrimeField::new(p)?;
        let mut constant = DenseMatrix::zeros(field, rows, cols);
        let mut vars = Vec::new();
        for i in 0..rows {
            for j in 0..cols {
                match it.next() {
                    None => return invalid("unexpected end of input while reading matrix entry"),
                    Some("?") => vars.push((i, j)),
                    Some(tok) => {
                        let x: i64 = tok.parse().or_else(|_| invalid(format!("cannot parse entry {tok:?}")))?;
                        constant.set(i, j, field.from_i64(x));
                    }
                }
            }
        }
        if it.next().is_some() {
            return invalid("trailing data after matrix entries");
        }
        Self::new(constant, &vars)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.rows(), self.cols(), self.field().modulus());
        for i in 0..self.rows() {
            let row: Vec<String> = (0..self.cols())
                .map(|j| if self.vars.binary_search(&(i, j)).is_ok() { "?".into() } else { self.constant.get(i, j).to_string() })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Result of the single-variable case analysis for mixed matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum MixedCase {
    MaxRank,
    /// `rank A'_{x_var <- value} = rank + 1`.
    TwoA { var: usize, value: FieldElement, rank: usize },
    /// Same rank, deficiency grows; `line` is the smallest new label.
    TwoB { var: usize, value: FieldElement, line: usize },
}

fn var_family(a: &MixedMatrix, m: &DenseMatrix, var: usize) -> LinearFamily {
    let (i, j) = a.vars[var];
    let mut base = m.clone();
    base.set(i, j, FieldElement::ZERO);
    LinearFamily::new(base, vec![(i, j, FieldElement::ONE)]).expect("position inside the matrix")
}

fn drop_line(a: &MixedMatrix, label: usize) -> Restriction {
    if label < a.rows() {
        Restriction::DropRow(label)
    } else {
        Restriction::DropCol(label - a.rows())
    }
}

fn without_line(a: &MixedMatrix, m: &DenseMatrix, label: usize) -> DenseMatrix {
    if label < a.rows() {
        m.without_row(label)
    } else {
        m.without_col(label - a.rows())
    }
}

fn with_value(values: &[FieldElement], var: usize, x: FieldElement) -> Vec<FieldElement> {
    let mut v = values.to_vec();
    v[var] = x;
    v
}

/// First `(i, a)` raising the rank, else first `(i, a)` enlarging the
/// deficiency set at equal rank, else max rank.
pub fn mixed_case_split(a: &MixedMatrix, values: &[FieldElement], spec: &FieldSpec, scan: ScanStrategy) -> Result<MixedCase> {
    let m = a.evaluate(values)?;
    let k = rank_of(&m);
    let d = deficiency_dense(&m);
    let lines = a.rows() + a.cols();
    match scan {
        ScanStrategy::Sweep => {
            let families: Vec<LinearFamily> = (0..a.num_vars()).map(|i| var_family(a, &m, i)).collect();
            let full: Vec<RankProfile> = families.iter().map(|f| f.profile(Restriction::Full)).collect();
            for (i, prof) in full.iter().enumerate() {
                if prof.generic() <= k {
                    continue;
                }
                if let Some(c) = value_classes(&[prof], spec.value_set_size()).into_iter().find(|c| c.ranks[0] > k) {
                    return Ok(MixedCase::TwoA { var: i, value: c.rep, rank: k });
                }
            }
            for (i, fam) in families.iter().enumerate() {
                let drops: Vec<RankProfile> = (0..lines).map(|l| fam.profile(drop_line(a, l))).collect();
                let mut refs = vec![&full[i]];
                refs.extend(drops.iter());
                for class in value_classes(&refs, spec.value_set_size()) {
                    if class.ranks[0] != k {
                        continue;
                    }
                    let grown = DeficiencySet::from_indices((0..lines).filter(|&l| class.ranks[1 + l] == k).collect());
                    if d.is_strict_subset(&grown) {
                        return Ok(MixedCase::TwoB { var: i, value: class.rep, line: grown.difference(&d)[0] });
                    }
                }
            }
        }
        ScanStrategy::Exhaustive => {
            for i in 0..a.num_vars() {
                for x in spec.values() {
                    let r = rank_of(&a.evaluate(&with_value(values, i, x))?);
                    if r > k + 1 {
                        return Err(Error::LemmaViolation(format!("one substitution raised the rank from {k} to {r}")));
                    }
                    if r == k + 1 {
                        return Ok(MixedCase::TwoA { var: i, value: x, rank: k });
                    }
                }
            }
            for i in 0..a.num_vars() {
                for x in spec.values() {
                    let m2 = a.evaluate(&with_value(values, i, x))?;
                    if rank_of(&m2) != k {
                        continue;
                    }
                    let grown = deficiency_dense(&m2);
                    if d.is_strict_subset(&grown) {
                        return Ok(MixedCase::TwoB { var: i, value: x, line: grown.difference(&d)[0] });
                    }
                }
            }
        }
    }
    Ok(MixedCase::MaxRank)
}

/// Values `a` in `S` with `rank A'_{x_var <- a} = rank`.
pub fn restore_value_2a(
    a: &MixedMatrix,
    values: &[FieldElement],
    var: usize,
    rank: usize,
    spec: &FieldSpec,
    scan: ScanStrategy,
) -> Result<Candidates> {
    let mut out = Candidates::none();
    match scan {
        ScanStrategy::Sweep => {
            let prof = var_family(a, &a.evaluate(values)?, var).profile(Restriction::Full);
            for c in value_classes(&[&prof], spec.value_set_size()) {
                if c.ranks[0] == rank {
                    out.add(c.rep, c.count);
                }
            }
        }
        ScanStrategy::Exhaustive => {
            for x in spec.values() {
                if rank_of(&a.evaluate(&with_value(values, var, x))?) == rank {
                    out.add(x, 1);
                }
            }
        }
    }
    Ok(out)
}

/// Values `a` in `S` for which line `line` is not in `D(A'_{x_var <- a})`.
pub fn restore_value_2b(
    a: &MixedMatrix,
    values: &[FieldElement],
    var: usize,
    line: usize,
    spec: &FieldSpec,
    scan: ScanStrategy,
) -> Result<Candidates> {
    if line >= a.rows() + a.cols() {
        return Err(Error::ContractViolation(format!("line label {line} outside the matrix")));
    }
    let mut out = Candidates::none();
    match scan {
        ScanStrategy::Sweep => {
            let fam = var_family(a, &a.evaluate(values)?, var);
            let full = fam.profile(Restriction::Full);
            let drop = fam.profile(drop_line(a, line));
            for c in value_classes(&[&full, &drop], spec.value_set_size()) {
                if c.ranks[1] < c.ranks[0] {
                    out.add(c.rep, c.count);
                }
            }
        }
        ScanStrategy::Exhaustive => {
            for x in spec.values() {
                let m = a.evaluate(&with_value(values, var, x))?;
                if rank_of(&without_line(a, &m, line)) < rank_of(&m) {
                    out.add(x, 1);
                }
            }
        }
    }
    Ok(out)
}

/// Greedy max-rank completion from the all-zero assignment.
pub fn geelen99_greedy(a: &MixedMatrix, spec: &FieldSpec, scan: ScanStrategy) -> Result<Vec<FieldElement>> {
    let mut values = vec![FieldElement::ZERO; a.num_vars()];
    let lines = a.rows() + a.cols();
    let cap = (a.rows().min(a.cols()) + 1) * (lines + 1) + 1;
    for _ in 0..cap {
        match mixed_case_split(a, &values, spec, scan)? {
            MixedCase::MaxRank => return Ok(values),
            MixedCase::TwoA { var, value, .. } | MixedCase::TwoB { var, value, .. } => values[var] = value,
        }
    }
    Err(Error::LemmaViolation("greedy completion did not stabilise".into()))
}
