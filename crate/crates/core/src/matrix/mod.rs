//! Exact dense linear algebra over `GF(p)`.
//!
//! Rank and determinant come from one elimination routine ([`echelon`]) that
//! also reports which rows and columns carried pivots; the pivot sets give a
//! nonsingular maximal minor, which [`sweep`] uses to follow ranks along a
//! one-variable family of matrices. Pfaffians live on [`SkewMatrix`] only.

mod deficiency;
pub mod io;
mod pfaffian;
pub mod sweep;

use std::fmt;

pub use deficiency::{deficiency_dense, deficiency_skew, DeficiencySet, Line};
pub use pfaffian::{pfaffian, pfaffian_poly, PolySkewMatrix, SkewPolyEntries};
pub(crate) use pfaffian::check_points;

use crate::error::{invalid, Result};
use crate::ffield::{FieldElement, PrimeField};

/// Row-major matrix over a prime field.
#[derive(Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl DenseMatrix {
    pub fn new(field: PrimeField, rows: usize, cols: usize, data: Vec<FieldElement>) -> Result<Self> {
        if data.len() != rows * cols {
            return invalid(format!("{rows}x{cols} matrix needs {} entries, got {}", rows * cols, data.len()));
        }
        Ok(DenseMatrix { field, rows, cols, data })
    }

    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        DenseMatrix { field, rows, cols, data: vec![FieldElement::ZERO; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    /// Builds a matrix from signed integer rows, reducing each entry mod `p`.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return invalid("rows have different lengths");
        }
        let data = rows.iter().flatten().map(|&x| field.from_i64(x)).collect();
        Self::new(field, rows.len(), cols, data)
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: FieldElement) {
        self.data[i * self.cols + j] = x;
    }

    pub fn data(&self) -> &[FieldElement] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> DenseMatrix {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.get(i, j));
            }
        }
        DenseMatrix { field: self.field, rows: rows.len(), cols: cols.len(), data }
    }

    pub fn without_row(&self, r: usize) -> DenseMatrix {
        let rows: Vec<usize> = (0..self.rows).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..self.cols).collect();
        self.submatrix(&rows, &cols)
    }

    pub fn without_col(&self, c: usize) -> DenseMatrix {
        let rows: Vec<usize> = (0..self.rows).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&j| j != c).collect();
        self.submatrix(&rows, &cols)
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        let f = self.field;
        let mut out = DenseMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return invalid("matrix shapes differ");
        }
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(DenseMatrix { field: f, rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, c: FieldElement) -> DenseMatrix {
        let f = self.field;
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        DenseMatrix { field: f, rows: self.rows, cols: self.cols, data }
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} over GF({})", self.rows, self.cols, self.field.modulus())?;
        for i in 0..self.rows {
            let row: Vec<u64> = self.row(i).iter().map(|x| x.value()).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

/// Outcome of Gaussian elimination: the rank plus the original indices of
/// the pivot rows and pivot columns. `M[pivot_rows, pivot_cols]` is
/// nonsingular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    pub rank: usize,
    pub pivot_rows: Vec<usize>,
    pub pivot_cols: Vec<usize>,
}

/// Column-by-column elimination; in each column the first remaining row
/// (in original order) with a nonzero entry becomes the pivot.
pub fn echelon(m: &DenseMatrix) -> Echelon {
    let f = m.field;
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.data.clone();
    let mut order: Vec<usize> = (0..rows).collect();
    let mut pivot_rows = Vec::new();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i * cols + c].is_zero()) else {
            continue;
        };
        // keep the untouched rows in original order so the choice stays canonical
        if p != r {
            let moved: Vec<FieldElement> = a[p * cols..(p + 1) * cols].to_vec();
            a.copy_within(r * cols..p * cols, (r + 1) * cols);
            a[r * cols..(r + 1) * cols].copy_from_slice(&moved);
            order[r..=p].rotate_right(1);
        }
        let inv = f.inv(a[r * cols + c]).expect("pivot is nonzero");
        for j in c..cols {
            a[r * cols + j] = f.mul(a[r * cols + j], inv);
        }
        for i in r + 1..rows {
            let factor = a[i * cols + c];
            if factor.is_zero() {
                continue;
            }
            for j in c..cols {
                let v = f.sub_mul(a[i * cols + j], factor, a[r * cols + j]);
                a[i * cols + j] = v;
            }
        }
        pivot_rows.push(order[r]);
        pivot_cols.push(c);
        r += 1;
    }
    Echelon { rank: r, pivot_rows, pivot_cols }
}

pub fn rank_of(m: &DenseMatrix) -> usize {
    rank_in_place(m.field, &mut m.data.clone(), m.rows, m.cols)
}

/// Rank of a row-major buffer, destroying it.
pub(crate) fn rank_in_place(f: PrimeField, a: &mut [FieldElement], rows: usize, cols: usize) -> usize {
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i * cols + c].is_zero()) else {
            continue;
        };
        if p != r {
            for j in c..cols {
                a.swap(r * cols + j, p * cols + j);
            }
        }
        let inv = f.inv(a[r * cols + c]).expect("pivot is nonzero");
        for i in r + 1..rows {
            let factor = f.mul(a[i * cols + c], inv);
            if factor.is_zero() {
                continue;
            }
            for j in c..cols {
                let v = f.sub_mul(a[i * cols + j], factor, a[r * cols + j]);
                a[i * cols + j] = v;
            }
        }
        r += 1;
    }
    r
}

pub fn det_of(m: &DenseMatrix) -> Result<FieldElement> {
    if !m.is_square() {
        return invalid(format!("determinant of a non-square {}x{} matrix", m.rows, m.cols));
    }
    let f = m.field;
    let n = m.rows;
    let mut a = m.data.clone();
    let mut det = FieldElement::ONE;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i * n + c].is_zero()) else {
            return Ok(FieldElement::ZERO);
        };
        if p != c {
            for j in c..n {
                a.swap(c * n + j, p * n + j);
            }
            det = f.neg(det);
        }
        let pivot = a[c * n + c];
        det = f.mul(det, pivot);
        let inv = f.inv(pivot)?;
        for i in c + 1..n {
            let factor = f.mul(a[i * n + c], inv);
            if factor.is_zero() {
                continue;
            }
            for j in c..n {
                let v = f.sub_mul(a[i * n + j], factor, a[c * n + j]);
                a[i * n + j] = v;
            }
        }
    }
    Ok(det)
}

/// Square matrix with `A^T = -A` and zero diagonal.
#[derive(Clone, PartialEq, Eq)]
pub struct SkewMatrix {
    inner: DenseMatrix,
}

impl SkewMatrix {
    /// Wraps a dense matrix after checking skew-symmetry.
    pub fn new(m: DenseMatrix) -> Result<Self> {
        if !m.is_square() {
            return invalid("skew-symmetric matrix must be square");
        }
        let f = m.field;
        for i in 0..m.rows {
            if !m.get(i, i).is_zero() {
                return invalid(format!("nonzero diagonal entry at {i}"));
            }
            for j in i + 1..m.cols {
                if m.get(i, j) != f.neg(m.get(j, i)) {
                    return invalid(format!("entries ({i},{j}) and ({j},{i}) are not negatives"));
                }
            }
        }
        Ok(SkewMatrix { inner: m })
    }

    pub fn zeros(field: PrimeField, n: usize) -> Self {
        SkewMatrix { inner: DenseMatrix::zeros(field, n, n) }
    }

    /// Builds the matrix from its strict upper triangle, listed row by row.
    pub fn from_upper(field: PrimeField, n: usize, upper: &[FieldElement]) -> Result<Self> {
        if upper.len() != n * n.saturating_sub(1) / 2 {
            return invalid("wrong number of upper-triangle entries");
        }
        let mut m = SkewMatrix::zeros(field, n);
        let mut it = upper.iter();
        for i in 0..n {
            for j in i + 1..n {
                m.set_pair(i, j, *it.next().unwrap());
            }
        }
        Ok(m)
    }

    /// Sets `A[i][j] = x` and `A[j][i] = -x`.
    pub fn set_pair(&mut self, i: usize, j: usize, x: FieldElement) {
        assert_ne!(i, j, "diagonal of a skew matrix is fixed at zero");
        let f = self.inner.field;
        self.inner.set(i, j, x);
        self.inner.set(j, i, f.neg(x));
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.inner.rows
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.inner.field
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.inner.get(i, j)
    }

    pub fn as_dense(&self) -> &DenseMatrix {
        &self.inner
    }

    pub fn into_dense(self) -> DenseMatrix {
        self.inner
    }

    /// Principal submatrix on `keep` (in the given order).
    pub fn principal(&self, keep: &[usize]) -> SkewMatrix {
        SkewMatrix { inner: self.inner.submatrix(keep, keep) }
    }

    /// Deletes row and column `v`.
    pub fn without(&self, v: usize) -> SkewMatrix {
        let keep: Vec<usize> = (0..self.order()).filter(|&i| i != v).collect();
        self.principal(&keep)
    }

    pub fn rank(&self) -> usize {
        rank_of(&self.inner)
    }
}

impl fmt::Debug for SkewMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Skew{:?}", self.inner)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    // determinant straight from the permutation sum
    fn leibniz(m: &DenseMatrix) -> FieldElement {
        let f = m.field();
        let n = m.rows();
        let mut total = FieldElement::ZERO;
        let mut perm: Vec<usize> = (0..n).collect();
        fn rec(
            k: usize,
            perm: &mut Vec<usize>,
            sign: bool,
            m: &DenseMatrix,
            f: PrimeField,
            total: &mut FieldElement,
        ) {
            let n = perm.len();
            if k == n {
                let mut prod = FieldElement::ONE;
                for (i, &j) in perm.iter().enumerate() {
                    prod = f.mul(prod, m.get(i, j));
                }
                *total = if sign { f.sub(*total, prod) } else { f.add(*total, prod) };
                return;
            }
            for i in k..n {
                perm.swap(k, i);
                rec(k + 1, perm, sign ^ (i != k), m, f, total);
                perm.swap(k, i);
            }
        }
        rec(0, &mut perm, false, m, f, &mut total);
        total
    }

    #[test]
    fn rank_basics() {
        let f = gf(101);
        assert_eq!(rank_of(&DenseMatrix::zeros(f, 3, 3)), 0);
        assert_eq!(rank_of(&DenseMatrix::identity(f, 4)), 4);
        // Tutte matrix of the path 1-2-3 with both edge values 1
        let p3 = DenseMatrix::from_rows(f, &[vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]]).unwrap();
        assert_eq!(rank_of(&p3), 2);
        assert_eq!(rank_of(&DenseMatrix::zeros(f, 0, 5)), 0);
    }

    #[test]
    fn det_examples() {
        let f = gf(101);
        let m = DenseMatrix::from_rows(f, &[vec![0, 5], vec![-5, 0]]).unwrap();
        assert_eq!(det_of(&m).unwrap(), f.elem(25));
        assert_eq!(det_of(&DenseMatrix::identity(f, 6)).unwrap(), FieldElement::ONE);
        assert!(det_of(&DenseMatrix::zeros(f, 2, 3)).is_err());
        assert_eq!(det_of(&DenseMatrix::zeros(f, 0, 0)).unwrap(), FieldElement::ONE);
    }

    #[test]
    fn det_matches_permutation_sum() {
        let f = gf(1_000_003);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let data = (0..25).map(|_| f.elem(rng.gen_range(0..7))).collect();
            let m = DenseMatrix::new(f, 5, 5, data).unwrap();
            assert_eq!(det_of(&m).unwrap(), leibniz(&m));
            assert_eq!(rank_of(&m) == 5, !leibniz(&m).is_zero());
        }
    }

    #[test]
    fn echelon_pivots_form_nonsingular_minor() {
        let f = gf(101);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let (r, c) = (rng.gen_range(1..7), rng.gen_range(1..7));
            let data = (0..r * c).map(|_| f.elem(rng.gen_range(0..3))).collect();
            let m = DenseMatrix::new(f, r, c, data).unwrap();
            let e = echelon(&m);
            assert_eq!(e.rank, rank_of(&m));
            let minor = m.submatrix(&e.pivot_rows, &e.pivot_cols);
            assert!(!det_of(&minor).unwrap().is_zero());
        }
    }

    #[test]
    fn skew_validation() {
        let f = gf(101);
        assert!(SkewMatrix::new(DenseMatrix::from_rows(f, &[vec![0, 1], vec![1, 0]]).unwrap()).is_err());
        assert!(SkewMatrix::new(DenseMatrix::from_rows(f, &[vec![1, 0], vec![0, 0]]).unwrap()).is_err());
        let s = SkewMatrix::from_upper(f, 3, &[f.elem(1), f.elem(2), f.elem(3)]).unwrap();
        assert_eq!(s.get(2, 1), f.elem(98));
        assert_eq!(s.rank(), 2);
    }
}
