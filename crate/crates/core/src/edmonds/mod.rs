//! Approximate maximum rank of a matrix pencil `A(x) = sum_i A_i x_i`.
//!
//! An evaluation either already has rank at least `(1 - eps)` times the
//! symbolic rank, or changing some `l = ceil(1/eps - 1)` coordinates to
//! values in `S` raises its rank. In the second case the old values of
//! those coordinates are one of few tuples in `S^l` that keep the rank, so
//! they can be stored as an ordinal among those tuples.

mod catalytic;

pub use catalytic::{ed_header_bits, matroid_matching_approx, matroid_matching_pencil, pencil_approx_rank, PencilRank};

use itertools::Itertools;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::ffield::{FieldElement, FieldSpec, PrimeField};
use crate::harness::SymbolicMatrix;
use crate::matrix::io::{next_number, read_entries, tokens};
use crate::matrix::{rank_of, DenseMatrix};

/// The span of `m` square matrices of order `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixPencil {
    field: PrimeField,
    n: usize,
    mats: Vec<DenseMatrix>,
}

impl MatrixPencil {
    pub fn new(field: PrimeField, n: usize, mats: Vec<DenseMatrix>) -> Result<Self> {
        for (i, a) in mats.iter().enumerate() {
            if a.rows() != n || a.cols() != n {
                return invalid(format!("matrix {} is {}x{}, expected {n}x{n}", i + 1, a.rows(), a.cols()));
            }
            if a.field() != field {
                return invalid(format!("matrix {} uses a different field", i + 1));
            }
        }
        Ok(MatrixPencil { field, n, mats })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn matrices(&self) -> &[DenseMatrix] {
        &self.mats
    }

    /// `sum_i A_i a_i`.
    pub fn evaluate(&self, values: &[FieldElement]) -> Result<DenseMatrix> {
        if values.len() != self.mats.len() {
            return invalid(format!("{} values for {} matrices", values.len(), self.mats.len()));
        }
        let f = self.field;
        let mut out = DenseMatrix::zeros(f, self.n, self.n);
        for (a, &x) in self.mats.iter().zip(values) {
            if !x.is_zero() {
                add_scaled(&mut out, a, x);
            }
        }
        Ok(out)
    }

    /// Parses `m n p` then `m` stacked `n x n` blocks.
    pub fn parse(text: &str) -> Result<Self> {
        let mut it = tokens(text);
        let m: usize = next_number(&mut it, "matrix count")?;
        let n: usize = next_number(&mut it, "matrix order")?;
        let p: u64 = next_number(&mut it, "prime")?;
        let field = PrimeField::new(p)?;
        let mats = (0..m).map(|_| read_entries(&mut it, field, n, n)).collect::<Result<Vec<_>>>()?;
        if it.next().is_some() {
            return invalid("trailing data after the pencil");
        }
        Self::new(field, n, mats)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.len(), self.n, self.field.modulus());
        for a in &self.mats {
            for i in 0..self.n {
                out.push_str(&a.row(i).iter().map(|x| x.to_string()).join(" "));
                out.push('\n');
            }
        }
        out
    }
}

impl SymbolicMatrix for MatrixPencil {
    fn num_vars(&self) -> usize {
        self.len()
    }

    fn evaluate_at(&self, values: &[FieldElement]) -> Result<DenseMatrix> {
        self.evaluate(values)
    }
}

fn add_scaled(out: &mut DenseMatrix, a: &DenseMatrix, x: FieldElement) {
    let f = out.field();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let v = a.get(i, j);
            if !v.is_zero() {
                out.set(i, j, f.add(out.get(i, j), f.mul(v, x)));
            }
        }
    }
}

/// The approximation factor `eps = num/den` and the tuple size derived
/// from it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ApproxParams {
    pub num: u64,
    pub den: u64,
    ell: usize,
    overridden: bool,
}

impl ApproxParams {
    /// `0 < num/den < 1`; `l = ceil(1/eps - 1)`.
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || num >= den {
            return invalid(format!("epsilon {num}/{den} must lie strictly between 0 and 1"));
        }
        let ell = (den - num).div_ceil(num) as usize;
        Ok(ApproxParams { num, den, ell, overridden: false })
    }

    /// Accepts `a/b` or a decimal such as `0.25`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some((a, b)) = text.split_once('/') {
            let a = a.trim().parse().or_else(|_| invalid(format!("bad epsilon {text:?}")))?;
            let b = b.trim().parse().or_else(|_| invalid(format!("bad epsilon {text:?}")))?;
            return Self::new(a, b);
        }
        let Some((whole, frac)) = text.split_once('.') else {
            return invalid(format!("epsilon {text:?} must be a fraction or a decimal below 1"));
        };
        if !whole.is_empty() && whole != "0" || frac.is_empty() || frac.len() > 9 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return invalid(format!("bad epsilon {text:?}"));
        }
        Self::new(frac.parse().expect("digits"), 10u64.pow(frac.len() as u32))
    }

    /// Replaces the derived tuple size. The bound on the result then no
    /// longer follows from the derivation.
    pub fn with_ell_override(self, ell: usize) -> Result<Self> {
        if ell == 0 {
            return invalid("tuple size must be at least 1");
        }
        Ok(ApproxParams { ell, overridden: true, ..self })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn is_overridden(&self) -> bool {
        self.overridden
    }

    /// Exponent of the value-set size under `--paper-params`, `2l + 3`.
    pub fn c(&self) -> u32 {
        2 * self.ell as u32 + 3
    }

    pub fn epsilon(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `ceil((1 - eps) r)`.
    pub fn bound(&self, r: usize) -> usize {
        ((self.den - self.num) * r as u64).div_ceil(self.den) as usize
    }
}

/// Outcome of the tuple case analysis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum TupleCase {
    /// No `l`-tuple change raises the rank.
    Approx { rank: usize },
    /// The first subset (lexicographic) and values raising the rank.
    Witness { subset: Vec<usize>, values: Vec<FieldElement>, rank: usize },
}

// sum over coordinates outside `subset`
fn outside(p: &MatrixPencil, values: &[FieldElement], subset: &[usize]) -> DenseMatrix {
    let mut masked = values.to_vec();
    subset.iter().for_each(|&i| masked[i] = FieldElement::ZERO);
    p.evaluate(&masked).expect("lengths checked by the caller")
}

// ranks of base + sum_k lambda_k A_{subset_k} over S^l in lexicographic order
fn for_each_tuple<F>(p: &MatrixPencil, base: &DenseMatrix, subset: &[usize], spec: &FieldSpec, mut visit: F) -> Result<()>
where
    F: FnMut(&[FieldElement], usize) -> Result<bool>,
{
    let s = spec.value_set_size();
    let mut tuple = vec![0u64; subset.len()];
    loop {
        let lambda: Vec<FieldElement> = tuple.iter().map(|&t| spec.field.elem(t)).collect();
        let mut m = base.clone();
        for (&i, &x) in subset.iter().zip(&lambda) {
            if !x.is_zero() {
                add_scaled(&mut m, &p.mats[i], x);
            }
        }
        if !visit(&lambda, rank_of(&m))? {
            return Ok(());
        }
        // odometer, last coordinate fastest
        let mut k = subset.len();
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            tuple[k] += 1;
            if tuple[k] < s {
                break;
            }
            tuple[k] = 0;
        }
    }
}

/// Effective tuple size: `l`, capped at the number of matrices.
pub fn effective_ell(p: &MatrixPencil, params: &ApproxParams) -> usize {
    params.ell().min(p.len())
}

/// First `(I, lambda)` in lexicographic order raising the rank, if any.
pub fn tuple_case_split(p: &MatrixPencil, values: &[FieldElement], spec: &FieldSpec, params: &ApproxParams) -> Result<TupleCase> {
    let k = rank_of(&p.evaluate(values)?);
    let ell = effective_ell(p, params);
    if ell == 0 || k == p.order() {
        return Ok(TupleCase::Approx { rank: k });
    }
    for subset in (0..p.len()).combinations(ell) {
        let base = outside(p, values, &subset);
        let mut hit = None;
        for_each_tuple(p, &base, &subset, spec, |lambda, r| {
            if r > k {
                hit = Some(lambda.to_vec());
                return Ok(false);
            }
            Ok(true)
        })?;
        if let Some(lambda) = hit {
            return Ok(TupleCase::Witness { subset, values: lambda, rank: k });
        }
    }
    Ok(TupleCase::Approx { rank: k })
}

/// 1-based position of the current values on `subset` among the tuples of
/// `S^l` that keep rank `k`, and the number of such tuples.
pub fn tuple_ordinal(p: &MatrixPencil, values: &[FieldElement], subset: &[usize], k: usize, spec: &FieldSpec) -> Result<(u64, u64)> {
    let base = outside(p, values, subset);
    let own: Vec<FieldElement> = subset.iter().map(|&i| values[i]).collect();
    let (mut count, mut ordinal) = (0u64, None);
    for_each_tuple(p, &base, subset, spec, |lambda, r| {
        if r == k {
            count += 1;
            if lambda == own.as_slice() {
                ordinal = Some(count);
            }
        }
        Ok(true)
    })?;
    match ordinal {
        Some(j) => Ok((j, count)),
        None => Err(Error::ContractViolation("the stored tuple does not keep the recorded rank".into())),
    }
}

/// The `j`-th (1-based) tuple on `subset` keeping rank `k`. Coordinates of
/// `values` on `subset` are ignored.
pub fn tuple_at_ordinal(
    p: &MatrixPencil,
    values: &[FieldElement],
    subset: &[usize],
    k: usize,
    j: u64,
    spec: &FieldSpec,
) -> Result<Option<Vec<FieldElement>>> {
    let base = outside(p, values, subset);
    let mut seen = 0;
    let mut found = None;
    for_each_tuple(p, &base, subset, spec, |lambda, r| {
        if r == k {
            seen += 1;
            if seen == j {
                found = Some(lambda.to_vec());
                return Ok(false);
            }
        }
        Ok(true)
    })?;
    Ok(found)
}

/// Greedy improvement by `l`-tuples from the all-zero evaluation.
pub fn bjp_greedy(p: &MatrixPencil, spec: &FieldSpec, params: &ApproxParams) -> Result<Vec<FieldElement>> {
    let mut values = vec![FieldElement::ZERO; p.len()];
    for _ in 0..=p.order() {
        match tuple_case_split(p, &values, spec, params)? {
            TupleCase::Approx { .. } => return Ok(values),
            TupleCase::Witness { subset, values: lambda, .. } => {
                for (i, x) in subset.into_iter().zip(lambda) {
                    values[i] = x;
                }
            }
        }
    }
    Err(Error::LemmaViolation("rank rose more than n times".into()))
}

#[cfg(test)]
mod tests;
