//! Prime-field arithmetic.
//!
//! Every rank, determinant, Pfaffian and interpolation in the crate runs over
//! `GF(p)` for a run-time prime `p`. Elements are plain residues
//! ([`FieldElement`]); the [`PrimeField`] handle carries the modulus and does
//! the arithmetic. Primes below `2^32` use Barrett reduction on `u64`
//! products, larger primes (up to `2^63`) fall back to `u128` remainders.

mod poly;

pub use poly::{interpolate, min_degree_term, UniPoly};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Default modulus: the Mersenne prime `2^31 - 1`.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// A residue in `[0, p)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Wraps an integer already known to lie in `[0, p)`.
    #[inline]
    pub(crate) const fn raw(x: u64) -> FieldElement {
        FieldElement(x)
    }

    /// The residue as an integer in `[0, p)`.
    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The prime field `GF(p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
    // floor(2^64 / p), only meaningful when p < 2^32
    barrett: u64,
}

impl PrimeField {
    /// Builds `GF(p)`; `p` must be an odd prime below `2^63`.
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p % 2 == 0 || !is_prime(p) {
            return invalid(format!("{p} is not an odd prime"));
        }
        if p >= 1 << 63 {
            return invalid(format!("prime {p} exceeds 2^63"));
        }
        let barrett = if p < 1 << 32 { (u128::from(u64::MAX) + 1).div_euclid(u128::from(p)) as u64 } else { 0 };
        Ok(PrimeField { p, barrett })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Reduces an arbitrary integer into the field.
    #[inline]
    pub fn elem(&self, x: u64) -> FieldElement {
        FieldElement(x % self.p)
    }

    pub fn from_i64(&self, x: i64) -> FieldElement {
        let r = x.rem_euclid(self.p as i64);
        FieldElement(r as u64)
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let s = a.0 + b.0;
        FieldElement(if s >= self.p { s - self.p } else { s })
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.p - b.0 })
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(if a.0 == 0 { 0 } else { self.p - a.0 })
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.barrett != 0 {
            let x = a.0 * b.0;
            let q = ((u128::from(x) * u128::from(self.barrett)) >> 64) as u64;
            let r = x - q * self.p;
            FieldElement(if r >= self.p { r - self.p } else { r })
        } else {
            FieldElement((u128::from(a.0) * u128::from(b.0) % u128::from(self.p)) as u64)
        }
    }

    /// `a - b * c`, the elimination update.
    #[inline]
    pub fn sub_mul(&self, a: FieldElement, b: FieldElement, c: FieldElement) -> FieldElement {
        self.sub(a, self.mul(b, c))
    }

    pub fn pow(&self, mut base: FieldElement, mut exp: u64) -> FieldElement {
        let mut acc = FieldElement::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (i128::from(self.p), i128::from(a.0));
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(FieldElement(t0.rem_euclid(i128::from(self.p)) as u64))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Inverts every element of `xs` in place with a single field inversion.
    pub fn batch_inv(&self, xs: &mut [FieldElement]) -> Result<()> {
        let mut prefix = Vec::with_capacity(xs.len());
        let mut acc = FieldElement::ONE;
        for &x in xs.iter() {
            if x.is_zero() {
                return Err(Error::DivisionByZero);
            }
            prefix.push(acc);
            acc = self.mul(acc, x);
        }
        let mut inv = self.inv(acc)?;
        for (x, before) in xs.iter_mut().zip(prefix).rev() {
            let xi = self.mul(inv, before);
            inv = self.mul(inv, *x);
            *x = xi;
        }
        Ok(())
    }

    /// Square root, if `a` is a quadratic residue (Tonelli-Shanks).
    pub fn sqrt(&self, a: FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            return Some(a);
        }
        let p = self.p;
        if self.pow(a, (p - 1) / 2) != FieldElement::ONE {
            return None;
        }
        let (mut q, mut s) = (p - 1, 0u32);
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let mut z = FieldElement(2);
        while self.pow(z, (p - 1) / 2) == FieldElement::ONE {
            z = FieldElement(z.0 + 1);
        }
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, q.div_ceil(2));
        while t != FieldElement::ONE {
            let mut i = 0;
            let mut t2 = t;
            while t2 != FieldElement::ONE {
                t2 = self.mul(t2, t2);
                i += 1;
            }
            let mut b = c;
            for _ in 0..m - i - 1 {
                b = self.mul(b, b);
            }
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r)
    }
}

/// Field together with the canonical value set `S = {0, ..., s-1}` and the
/// serialized width `b = ceil(log2 s)` of one value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub field: PrimeField,
    s: u64,
    bits: u32,
}

impl FieldSpec {
    pub fn new(field: PrimeField, s: u64) -> Result<Self> {
        if s == 0 {
            return invalid("value set must not be empty");
        }
        if s > field.modulus() {
            return invalid(format!("value set size {s} exceeds the prime {}", field.modulus()));
        }
        Ok(FieldSpec { field, s, bits: bits_for(s) })
    }

    /// Size of the value set.
    #[inline]
    pub fn value_set_size(&self) -> u64 {
        self.s
    }

    /// Bits per serialized value.
    #[inline]
    pub fn value_bits(&self) -> u32 {
        self.bits
    }

    /// The values of `S` in canonical order.
    pub fn values(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.s).map(FieldElement)
    }

    pub fn contains(&self, x: FieldElement) -> bool {
        x.0 < self.s
    }
}

/// Bits needed to write any of `count` distinct values, `ceil(log2 count)`.
pub fn bits_for(count: u64) -> u32 {
    if count <= 1 {
        0
    } else {
        64 - (count - 1).leading_zeros()
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mulmod = |a: u64, b: u64| (u128::from(a) * u128::from(b) % u128::from(n)) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let (mut d, mut r) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &BASES {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn small_field_examples() {
        let f = gf(101);
        assert_eq!(f.add(f.elem(50), f.elem(60)), f.elem(9));
        assert_eq!(f.inv(f.elem(2)).unwrap(), f.elem(51));
        assert_eq!(f.inv(f.elem(0)), Err(Error::DivisionByZero));
        assert_eq!(f.sub(f.elem(3), f.elem(5)), f.elem(99));
        assert_eq!(f.from_i64(-5), f.elem(96));
    }

    #[test]
    fn rejects_composites_and_two() {
        assert!(PrimeField::new(2).is_err());
        assert!(PrimeField::new(91).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(DEFAULT_PRIME).is_ok());
        assert!(PrimeField::new((1 << 61) - 1).is_ok());
    }

    #[test]
    fn bit_widths() {
        assert_eq!(bits_for(1), 0);
        assert_eq!(bits_for(2), 1);
        assert_eq!(bits_for(3), 2);
        assert_eq!(bits_for(1024), 10);
        assert_eq!(bits_for(1025), 11);
        let spec = FieldSpec::new(gf(101), 64).unwrap();
        assert_eq!(spec.value_bits(), 6);
        assert!(FieldSpec::new(gf(101), 102).is_err());
    }

    #[test]
    fn sqrt_finds_roots() {
        for p in [101u64, 1_000_003, DEFAULT_PRIME, (1 << 61) - 1] {
            let f = gf(p);
            for x in [0u64, 1, 2, 17, 12345] {
                let sq = f.mul(f.elem(x), f.elem(x));
                let r = f.sqrt(sq).unwrap();
                assert_eq!(f.mul(r, r), sq);
            }
        }
        // 2 is a non-residue mod 101 (101 = 5 mod 8)
        assert_eq!(gf(101).sqrt(FieldElement(2)), None);
    }

    #[test]
    fn batch_inverse_matches_single() {
        let f = gf(1_000_003);
        let mut xs: Vec<_> = (1..50).map(|x| f.elem(x * 7919)).collect();
        let orig = xs.clone();
        f.batch_inv(&mut xs).unwrap();
        for (x, xi) in orig.iter().zip(&xs) {
            assert_eq!(f.mul(*x, *xi), FieldElement::ONE);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn field_axioms(a in 0u64..DEFAULT_PRIME, b in 0u64..DEFAULT_PRIME, c in 0u64..DEFAULT_PRIME) {
            let f = gf(DEFAULT_PRIME);
            let (a, b, c) = (f.elem(a), f.elem(b), f.elem(c));
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            if !a.is_zero() {
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
            }
        }

        #[test]
        fn wide_prime_matches_u128(a in any::<u64>(), b in any::<u64>()) {
            let p = (1u64 << 61) - 1;
            let f = gf(p);
            let expect = (u128::from(a % p) * u128::from(b % p) % u128::from(p)) as u64;
            prop_assert_eq!(f.mul(f.elem(a), f.elem(b)).value(), expect);
        }
    }
}
