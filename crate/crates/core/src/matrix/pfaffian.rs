use super::SkewMatrix;
use crate::error::{Error, Result};
use crate::ffield::{interpolate, FieldElement, PrimeField, UniPoly};

/// Pfaffian by skew-symmetric elimination. Odd orders give zero.
///
/// Step `k` brings a nonzero entry into position `(k, k+1)` by a symmetric
/// swap (which negates the Pfaffian), multiplies the running product by it
/// and folds rows `k`, `k+1` into the trailing block through the Schur
/// complement `B - (u v^T - v u^T) / a`.
pub fn pfaffian(m: &SkewMatrix) -> FieldElement {
    let n = m.order();
    if n % 2 == 1 {
        return FieldElement::ZERO;
    }
    let f = m.field();
    let mut b: Vec<FieldElement> = m.as_dense().data().to_vec();
    let mut pf = FieldElement::ONE;
    let mut k = 0;
    while k < n {
        let Some(j) = (k + 1..n).find(|&j| !b[k * n + j].is_zero()) else {
            return FieldElement::ZERO;
        };
        if j != k + 1 {
            swap_symmetric(&mut b, n, k + 1, j);
            pf = f.neg(pf);
        }
        let a = b[k * n + k + 1];
        pf = f.mul(pf, a);
        let inv = f.inv(a).expect("pivot is nonzero");
        for i in k + 2..n {
            let ui = f.mul(b[k * n + i], inv);
            let vi = f.mul(b[(k + 1) * n + i], inv);
            if ui.is_zero() && vi.is_zero() {
                continue;
            }
            for j in i + 1..n {
                let uj = b[k * n + j];
                let vj = b[(k + 1) * n + j];
                let delta = f.sub(f.mul(ui, vj), f.mul(vi, uj));
                let v = f.sub(b[i * n + j], delta);
                b[i * n + j] = v;
                b[j * n + i] = f.neg(v);
            }
        }
        k += 2;
    }
    pf
}

fn swap_symmetric(b: &mut [FieldElement], n: usize, x: usize, y: usize) {
    for c in 0..n {
        b.swap(x * n + c, y * n + c);
    }
    for r in 0..n {
        b.swap(r * n + x, r * n + y);
    }
}

/// A skew matrix whose entries are polynomials in one variable `z`,
/// accessed only through evaluation.
pub trait SkewPolyEntries {
    fn field(&self) -> PrimeField;
    fn order(&self) -> usize;
    /// The scalar skew matrix obtained by substituting `z`.
    fn eval_at(&self, z: FieldElement) -> SkewMatrix;
}

/// Explicit polynomial skew matrix, stored by its strict upper triangle.
#[derive(Clone, Debug)]
pub struct PolySkewMatrix {
    field: PrimeField,
    order: usize,
    upper: Vec<UniPoly>,
}

impl PolySkewMatrix {
    pub fn zeros(field: PrimeField, order: usize) -> Self {
        let len = order * order.saturating_sub(1) / 2;
        PolySkewMatrix { field, order, upper: vec![UniPoly::zero(field); len] }
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j);
        i * (2 * self.order - i - 1) / 2 + (j - i - 1)
    }

    /// Sets entry `(i, j)` to `p` and `(j, i)` to `-p`.
    pub fn set_pair(&mut self, i: usize, j: usize, p: UniPoly) {
        let (slot, p) = if i < j {
            (self.slot(i, j), p)
        } else {
            let neg = UniPoly::zero(self.field).sub(&p);
            (self.slot(j, i), neg)
        };
        self.upper[slot] = p;
    }

    pub fn get(&self, i: usize, j: usize) -> UniPoly {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => UniPoly::zero(self.field),
            std::cmp::Ordering::Less => self.upper[self.slot(i, j)].clone(),
            std::cmp::Ordering::Greater => UniPoly::zero(self.field).sub(&self.upper[self.slot(j, i)]),
        }
    }
}

impl SkewPolyEntries for PolySkewMatrix {
    fn field(&self) -> PrimeField {
        self.field
    }

    fn order(&self) -> usize {
        self.order
    }

    fn eval_at(&self, z: FieldElement) -> SkewMatrix {
        let values: Vec<FieldElement> = self.upper.iter().map(|p| p.eval(z)).collect();
        SkewMatrix::from_upper(self.field, self.order, &values).expect("triangle has the right length")
    }
}

/// Pfaffian of a polynomial skew matrix, by evaluating at `z = 0, ..., d_max`
/// and interpolating.
pub fn pfaffian_poly<M: SkewPolyEntries + ?Sized>(m: &M, d_max: usize) -> Result<UniPoly> {
    let field = m.field();
    check_points(field, d_max)?;
    let points: Vec<(FieldElement, FieldElement)> = (0..=d_max as u64)
        .map(|z| {
            let z = field.elem(z);
            (z, pfaffian(&m.eval_at(z)))
        })
        .collect();
    interpolate(field, &points, d_max)
}

/// Errors unless the field has more than `d_max` elements.
pub(crate) fn check_points(field: PrimeField, d_max: usize) -> Result<()> {
    if (d_max as u64) >= field.modulus() {
        return Err(Error::FieldTooSmall { p: field.modulus(), needed: d_max as u64 + 1 });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{det_of, DenseMatrix};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    // sum over perfect matchings with crossing signs
    fn pf_by_matchings(m: &SkewMatrix) -> FieldElement {
        fn rec(m: &SkewMatrix, free: &[usize]) -> FieldElement {
            let f = m.field();
            if free.is_empty() {
                return FieldElement::ONE;
            }
            let first = free[0];
            let mut total = FieldElement::ZERO;
            for (idx, &partner) in free.iter().enumerate().skip(1) {
                let rest: Vec<usize> = free.iter().copied().filter(|&v| v != first && v != partner).collect();
                let term = f.mul(m.get(first, partner), rec(m, &rest));
                total = if idx % 2 == 1 { f.add(total, term) } else { f.sub(total, term) };
            }
            total
        }
        if m.order() % 2 == 1 {
            return FieldElement::ZERO;
        }
        let all: Vec<usize> = (0..m.order()).collect();
        rec(m, &all)
    }

    fn random_skew(f: PrimeField, n: usize, rng: &mut ChaCha8Rng, range: u64) -> SkewMatrix {
        let upper: Vec<_> = (0..n * n.saturating_sub(1) / 2).map(|_| f.elem(rng.gen_range(0..range))).collect();
        SkewMatrix::from_upper(f, n, &upper).unwrap()
    }

    #[test]
    fn two_by_two() {
        let f = gf(101);
        let m = SkewMatrix::from_upper(f, 2, &[f.elem(7)]).unwrap();
        assert_eq!(pfaffian(&m), f.elem(7));
    }

    #[test]
    fn four_by_four_formula() {
        let f = gf(1_000_003);
        let vals: Vec<_> = [3u64, 5, 7, 11, 13, 17].iter().map(|&x| f.elem(x)).collect();
        let m = SkewMatrix::from_upper(f, 4, &vals).unwrap();
        // a12 a34 - a13 a24 + a14 a23
        let expect = 3 * 17 - 5 * 13 + 7 * 11;
        assert_eq!(pfaffian(&m), f.from_i64(expect));
    }

    #[test]
    fn odd_order_is_zero() {
        let f = gf(101);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [1, 3, 5, 7] {
            assert_eq!(pfaffian(&random_skew(f, n, &mut rng, 101)), FieldElement::ZERO);
        }
    }

    #[test]
    fn agrees_with_matching_expansion() {
        let f = gf(1_000_003);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in [0usize, 2, 4, 6] {
            for _ in 0..20 {
                let m = random_skew(f, n, &mut rng, 4);
                assert_eq!(pfaffian(&m), pf_by_matchings(&m));
            }
        }
    }

    #[test]
    fn square_is_determinant() {
        let f = gf(2_147_483_647);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [2usize, 4, 6, 8, 10] {
            for range in [2u64, 1 << 30] {
                let m = random_skew(f, n, &mut rng, range);
                let pf = pfaffian(&m);
                assert_eq!(f.mul(pf, pf), det_of(m.as_dense()).unwrap());
            }
        }
    }

    #[test]
    fn poly_on_k2_and_c4() {
        let f = gf(1_000_003);
        let mut k2 = PolySkewMatrix::zeros(f, 2);
        k2.set_pair(0, 1, UniPoly::monomial(f, f.elem(7), 4));
        assert_eq!(pfaffian_poly(&k2, 4).unwrap(), UniPoly::monomial(f, f.elem(7), 4));

        // 4-cycle 1-2-3-4-1 with weights 1, 2, 1, 3 and unit values
        let mut c4 = PolySkewMatrix::zeros(f, 4);
        c4.set_pair(0, 1, UniPoly::monomial(f, FieldElement::ONE, 1));
        c4.set_pair(1, 2, UniPoly::monomial(f, FieldElement::ONE, 2));
        c4.set_pair(2, 3, UniPoly::monomial(f, FieldElement::ONE, 1));
        c4.set_pair(0, 3, UniPoly::monomial(f, FieldElement::ONE, 3));
        let pf = pfaffian_poly(&c4, 8).unwrap();
        // matchings {12, 34} (weight 2, sign +) and {14, 23} (weight 5, sign +)
        let expect = UniPoly::monomial(f, FieldElement::ONE, 2).add(&UniPoly::monomial(f, FieldElement::ONE, 5));
        assert_eq!(pf, expect);
        assert_eq!(pf.eval(FieldElement::ONE), pfaffian(&c4.eval_at(FieldElement::ONE)));
    }

    #[test]
    fn field_too_small() {
        let f = gf(5);
        let m = PolySkewMatrix::zeros(f, 2);
        assert_eq!(pfaffian_poly(&m, 5), Err(Error::FieldTooSmall { p: 5, needed: 6 }));
        assert!(pfaffian_poly(&m, 4).unwrap().is_zero());
    }

    #[test]
    fn dense_wrapper_roundtrip() {
        let f = gf(101);
        let d = DenseMatrix::from_rows(f, &[vec![0, 3], vec![-3, 0]]).unwrap();
        let s = SkewMatrix::new(d).unwrap();
        assert_eq!(pfaffian(&s), f.elem(3));
    }
}
