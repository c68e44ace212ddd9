use std::fmt;

use super::{FieldElement, PrimeField};
use crate::error::{invalid, Result};

/// Dense univariate polynomial over `GF(p)`, lowest degree first.
///
/// The coefficient vector never ends in a zero, so the zero polynomial has
/// no coefficients at all and `degree` is `None` for it.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: PrimeField,
    coeffs: Vec<FieldElement>,
}

impl UniPoly {
    pub fn zero(field: PrimeField) -> Self {
        UniPoly { field, coeffs: Vec::new() }
    }

    pub fn constant(field: PrimeField, c: FieldElement) -> Self {
        Self::from_coeffs(field, vec![c])
    }

    /// `c * z^k`
    pub fn monomial(field: PrimeField, c: FieldElement, k: usize) -> Self {
        let mut coeffs = vec![FieldElement::ZERO; k + 1];
        coeffs[k] = c;
        Self::from_coeffs(field, coeffs)
    }

    pub fn from_coeffs(field: PrimeField, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    /// Convenience constructor reducing raw integers into the field.
    pub fn from_u64s(field: PrimeField, coeffs: &[u64]) -> Self {
        Self::from_coeffs(field, coeffs.iter().map(|&c| field.elem(c)).collect())
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> FieldElement {
        self.coeffs.get(k).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, z: FieldElement) -> FieldElement {
        let f = &self.field;
        self.coeffs.iter().rev().fold(FieldElement::ZERO, |acc, &c| f.add(f.mul(acc, z), c))
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let f = self.field;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| f.add(self.coeff(k), other.coeff(k))).collect();
        UniPoly::from_coeffs(f, coeffs)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let f = self.field;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| f.sub(self.coeff(k), other.coeff(k))).collect();
        UniPoly::from_coeffs(f, coeffs)
    }

    pub fn scale(&self, c: FieldElement) -> UniPoly {
        let f = self.field;
        UniPoly::from_coeffs(f, self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        let f = self.field;
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(f);
        }
        let mut out = vec![FieldElement::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        UniPoly::from_coeffs(f, out)
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: usize) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![FieldElement::ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        UniPoly { field: self.field, coeffs }
    }

    /// All roots in `GF(p)`, sorted, for polynomials of degree at most two.
    /// Returns `None` for the zero polynomial (every point is a root) and
    /// for higher degrees.
    pub fn small_roots(&self) -> Option<Vec<FieldElement>> {
        let f = &self.field;
        let mut roots = match self.degree()? {
            0 => Vec::new(),
            1 => {
                let r = f.neg(f.div(self.coeff(0), self.coeff(1)).ok()?);
                vec![r]
            }
            2 => {
                let (c, b, a) = (self.coeff(0), self.coeff(1), self.coeff(2));
                let disc = f.sub(f.mul(b, b), f.mul(f.elem(4), f.mul(a, c)));
                let two_a_inv = f.inv(f.add(a, a)).ok()?;
                match f.sqrt(disc) {
                    None => Vec::new(),
                    Some(r) => {
                        let nb = f.neg(b);
                        let mut v = vec![f.mul(f.add(nb, r), two_a_inv), f.mul(f.sub(nb, r), two_a_inv)];
                        v.dedup();
                        v
                    }
                }
            }
            _ => return None,
        };
        roots.sort();
        roots.dedup();
        Some(roots)
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly(p={}, ", self.field.modulus())?;
        f.debug_list().entries(self.coeffs.iter().map(|c| c.value())).finish()?;
        write!(f, ")")
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}z")?,
                _ => write!(f, "{c}z^{k}")?,
            }
        }
        Ok(())
    }
}

/// Least degree with a nonzero coefficient, together with that coefficient.
pub fn min_degree_term(poly: &UniPoly) -> Option<(usize, FieldElement)> {
    poly.coeffs.iter().enumerate().find(|(_, c)| !c.is_zero()).map(|(k, &c)| (k, c))
}

/// The unique polynomial of degree at most `d_max` through `points`.
///
/// The first `d_max + 1` points determine the polynomial (Newton divided
/// differences); any further points must lie on it.
pub fn interpolate(field: PrimeField, points: &[(FieldElement, FieldElement)], d_max: usize) -> Result<UniPoly> {
    let need = d_max + 1;
    if points.len() < need {
        return invalid(format!("interpolation to degree {d_max} needs {need} points, got {}", points.len()));
    }
    let mut xs: Vec<FieldElement> = points.iter().map(|p| p.0).collect();
    xs.sort();
    if xs.windows(2).any(|w| w[0] == w[1]) {
        return invalid("interpolation points must have distinct abscissae");
    }
    let f = &field;
    let xs: Vec<FieldElement> = points[..need].iter().map(|p| p.0).collect();
    let mut dd: Vec<FieldElement> = points[..need].iter().map(|p| p.1).collect();
    let mut denom = vec![FieldElement::ZERO; need];
    for level in 1..need {
        let span = need - level;
        for i in 0..span {
            denom[i] = f.sub(xs[i + level], xs[i]);
        }
        f.batch_inv(&mut denom[..span])?;
        // in place: dd[j] for j >= level becomes the level-th divided difference ending at j
        for j in (level..need).rev() {
            let d = denom[j - level];
            dd[j] = f.mul(f.sub(dd[j], dd[j - 1]), d);
        }
    }
    // Horner over the Newton basis
    let mut coeffs = vec![dd[need - 1]];
    for k in (0..need - 1).rev() {
        let mut next = vec![FieldElement::ZERO; coeffs.len() + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i + 1] = f.add(next[i + 1], c);
            next[i] = f.sub(next[i], f.mul(c, xs[k]));
        }
        next[0] = f.add(next[0], dd[k]);
        coeffs = next;
    }
    let poly = UniPoly::from_coeffs(field, coeffs);
    for &(x, y) in &points[need..] {
        if poly.eval(x) != y {
            return invalid(format!("points do not lie on a polynomial of degree at most {d_max}"));
        }
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn pts(f: PrimeField, raw: &[(u64, u64)]) -> Vec<(FieldElement, FieldElement)> {
        raw.iter().map(|&(x, y)| (f.elem(x), f.elem(y))).collect()
    }

    #[test]
    fn constant_fit() {
        let f = gf(101);
        let p = interpolate(f, &pts(f, &[(0, 3), (1, 3), (2, 3)]), 2).unwrap();
        assert_eq!(p, UniPoly::from_u64s(f, &[3]));
    }

    #[test]
    fn round_trip_z_squared_plus_one() {
        let f = gf(101);
        let target = UniPoly::from_u64s(f, &[1, 0, 1]);
        let points: Vec<_> = [3u64, 8, 20, 77].iter().map(|&x| (f.elem(x), target.eval(f.elem(x)))).collect();
        let p = interpolate(f, &points, 3).unwrap();
        assert_eq!(p, target);
        assert_eq!(p.degree(), Some(2));
    }

    #[test]
    fn interpolation_errors() {
        let f = gf(101);
        assert!(interpolate(f, &pts(f, &[(0, 1), (0, 2)]), 1).is_err());
        assert!(interpolate(f, &pts(f, &[(0, 1)]), 1).is_err());
        // extra point off the line
        assert!(interpolate(f, &pts(f, &[(0, 0), (1, 1), (2, 5)]), 1).is_err());
        assert!(interpolate(f, &pts(f, &[(0, 0), (1, 1), (2, 2)]), 1).is_ok());
    }

    #[test]
    fn min_degree_examples() {
        let f = gf(101);
        assert_eq!(min_degree_term(&UniPoly::zero(f)), None);
        let p = UniPoly::monomial(f, f.elem(5), 3).add(&UniPoly::monomial(f, f.elem(2), 7));
        assert_eq!(min_degree_term(&p), Some((3, f.elem(5))));
    }

    #[test]
    fn small_roots_cover_degrees() {
        let f = gf(101);
        // (z - 3)(z - 10)
        let q = UniPoly::from_u64s(f, &[30, 101 - 13, 1]);
        assert_eq!(q.small_roots().unwrap(), vec![f.elem(3), f.elem(10)]);
        // (z - 4)^2
        let q = UniPoly::from_u64s(f, &[16, 101 - 8, 1]);
        assert_eq!(q.small_roots().unwrap(), vec![f.elem(4)]);
        // z^2 - 2 has no roots mod 101
        assert!(UniPoly::from_u64s(f, &[99, 0, 1]).small_roots().unwrap().is_empty());
        assert_eq!(UniPoly::from_u64s(f, &[7, 1]).small_roots().unwrap(), vec![f.elem(94)]);
        assert!(UniPoly::from_u64s(f, &[7]).small_roots().unwrap().is_empty());
        assert!(UniPoly::zero(f).small_roots().is_none());
    }

    fn poly_strategy() -> impl Strategy<Value = (Vec<u64>, usize)> {
        (0usize..40).prop_flat_map(|d_max| (prop::collection::vec(0u64..1_000_003, 0..=d_max + 1), Just(d_max)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn interpolate_inverts_evaluate((raw, d_max) in poly_strategy(), offset in 0u64..1000) {
            let f = gf(1_000_003);
            let target = UniPoly::from_u64s(f, &raw);
            let points: Vec<_> = (0..=d_max as u64 + 2)
                .map(|k| { let x = f.elem(offset + 3 * k); (x, target.eval(x)) })
                .collect();
            prop_assert_eq!(interpolate(f, &points, d_max + 1).unwrap(), target);
        }

        #[test]
        fn min_degree_shifts(raw in prop::collection::vec(0u64..101, 0..12), k in 0usize..9) {
            let f = gf(101);
            let p = UniPoly::from_u64s(f, &raw);
            match min_degree_term(&p) {
                None => prop_assert_eq!(min_degree_term(&p.shift(k)), None),
                Some((w, c)) => prop_assert_eq!(min_degree_term(&p.shift(k)), Some((w + k, c))),
            }
        }
    }
}
