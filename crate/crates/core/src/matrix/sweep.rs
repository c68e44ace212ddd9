//! Rank of a matrix along a one-variable family `M(y) = B + y C`.
//!
//! `C` has at most two nonzero entries (a Tutte edge touches two cells, a
//! mixed-matrix variable one), so every minor of `M(y)` is a polynomial in
//! `y` of degree at most two. Evaluating at three points finds the generic
//! rank `r` together with an `r x r` minor that is nonzero somewhere; that
//! minor, interpolated, vanishes at two points at most, and only those points
//! can have lower rank. A [`RankProfile`] records the generic rank and the
//! exceptional points, which answers "rank at `y`" for every `y` in the field
//! at the cost of a handful of eliminations.

use super::{det_of, echelon, rank_of, DenseMatrix};
use crate::error::{invalid, Result};
use crate::ffield::{interpolate, FieldElement};

/// Which lines are deleted before taking ranks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Restriction {
    Full,
    /// Delete row `v` and column `v` (skew matrices).
    DropIndex(usize),
    DropRow(usize),
    DropCol(usize),
}

/// Rank as a function of `y`: `generic` everywhere except the listed points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankProfile {
    generic: usize,
    special: Vec<(FieldElement, usize)>,
}

impl RankProfile {
    pub fn generic(&self) -> usize {
        self.generic
    }

    /// Points of strictly lower rank, ascending.
    pub fn special(&self) -> &[(FieldElement, usize)] {
        &self.special
    }

    pub fn rank_at(&self, y: FieldElement) -> usize {
        match self.special.binary_search_by(|(x, _)| x.cmp(&y)) {
            Ok(i) => self.special[i].1,
            Err(_) => self.generic,
        }
    }
}

/// `B + y C` with `C` given by its nonzero entries.
#[derive(Clone, Debug)]
pub struct LinearFamily {
    base: DenseMatrix,
    direction: Vec<(usize, usize, FieldElement)>,
}

impl LinearFamily {
    pub fn new(base: DenseMatrix, direction: Vec<(usize, usize, FieldElement)>) -> Result<Self> {
        if direction.len() > 2 {
            return invalid("sweeps support at most two varying entries");
        }
        if direction.iter().any(|&(i, j, _)| i >= base.rows() || j >= base.cols()) {
            return invalid("varying entry outside the matrix");
        }
        Ok(LinearFamily { base, direction })
    }

    pub fn base(&self) -> &DenseMatrix {
        &self.base
    }

    /// `M(y)`.
    pub fn at(&self, y: FieldElement) -> DenseMatrix {
        let f = self.base.field();
        let mut m = self.base.clone();
        for &(i, j, c) in &self.direction {
            m.set(i, j, f.add(m.get(i, j), f.mul(y, c)));
        }
        m
    }

    fn restrict(&self, r: Restriction) -> LinearFamily {
        let (rows, cols) = (self.base.rows(), self.base.cols());
        let (drop_row, drop_col) = match r {
            Restriction::Full => (None, None),
            Restriction::DropIndex(v) => (Some(v), Some(v)),
            Restriction::DropRow(i) => (Some(i), None),
            Restriction::DropCol(j) => (None, Some(j)),
        };
        let keep_rows: Vec<usize> = (0..rows).filter(|&i| Some(i) != drop_row).collect();
        let keep_cols: Vec<usize> = (0..cols).filter(|&j| Some(j) != drop_col).collect();
        let shift = |x: usize, drop: Option<usize>| match drop {
            Some(d) if x > d => x - 1,
            _ => x,
        };
        let direction = self
            .direction
            .iter()
            .filter(|&&(i, j, _)| Some(i) != drop_row && Some(j) != drop_col)
            .map(|&(i, j, c)| (shift(i, drop_row), shift(j, drop_col), c))
            .collect();
        LinearFamily { base: self.base.submatrix(&keep_rows, &keep_cols), direction }
    }

    pub fn profile(&self, restriction: Restriction) -> RankProfile {
        self.restrict(restriction).profile_full()
    }

    fn profile_full(&self) -> RankProfile {
        let f = self.base.field();
        let degree = self.direction.len();
        if degree == 0 {
            return RankProfile { generic: rank_of(&self.base), special: Vec::new() };
        }
        let points: Vec<FieldElement> = (0..=degree as u64).map(|y| f.elem(y)).collect();
        let mats: Vec<DenseMatrix> = points.iter().map(|&y| self.at(y)).collect();
        let echelons: Vec<_> = mats.iter().map(echelon).collect();
        let best = (0..echelons.len()).max_by_key(|&t| (echelons[t].rank, std::cmp::Reverse(t))).unwrap();
        let generic = echelons[best].rank;
        if generic == 0 {
            return RankProfile { generic, special: Vec::new() };
        }
        let (rows, cols) = (&echelons[best].pivot_rows, &echelons[best].pivot_cols);
        let samples: Vec<(FieldElement, FieldElement)> = points
            .iter()
            .zip(&mats)
            .map(|(&y, m)| (y, det_of(&m.submatrix(rows, cols)).expect("minor is square")))
            .collect();
        let minor = interpolate(f, &samples, degree).expect("distinct sample points");
        let roots = minor.small_roots().expect("minor is nonzero at the best point and of degree at most two");
        let special = roots
            .into_iter()
            .filter_map(|y| {
                let r = rank_of(&self.at(y));
                (r < generic).then_some((y, r))
            })
            .collect();
        RankProfile { generic, special }
    }
}

/// Values of `S = {0, ..., s-1}` grouped by their rank pattern across
/// several profiles: each exceptional point is its own class and all
/// remaining values form one generic class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueClass {
    /// Smallest member of the class.
    pub rep: FieldElement,
    /// Number of members in `S`.
    pub count: u64,
    /// Rank under each profile, in input order.
    pub ranks: Vec<usize>,
}

pub fn value_classes(profiles: &[&RankProfile], s: u64) -> Vec<ValueClass> {
    let mut special: Vec<FieldElement> = profiles
        .iter()
        .flat_map(|p| p.special.iter().map(|&(y, _)| y))
        .filter(|y| y.value() < s)
        .collect();
    special.sort();
    special.dedup();
    let ranks = |y: FieldElement| profiles.iter().map(|p| p.rank_at(y)).collect::<Vec<_>>();
    let mut classes: Vec<ValueClass> =
        special.iter().map(|&y| ValueClass { rep: y, count: 1, ranks: ranks(y) }).collect();
    let generic_count = s - special.len() as u64;
    if generic_count > 0 {
        classes.push(ValueClass {
            rep: first_gap(&special),
            count: generic_count,
            ranks: profiles.iter().map(|p| p.generic).collect(),
        });
    }
    classes.sort_by_key(|c| c.rep);
    classes
}

// smallest value missing from a sorted list of residues
fn first_gap(sorted: &[FieldElement]) -> FieldElement {
    let mut next = 0u64;
    for y in sorted {
        if y.value() != next {
            break;
        }
        next += 1;
    }
    FieldElement::raw(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::PrimeField;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn profile_matches_direct_ranks() {
        let f = PrimeField::new(31).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..300 {
            let (r, c) = (rng.gen_range(1..6), rng.gen_range(1..6));
            let data = (0..r * c).map(|_| f.elem(if rng.gen_bool(0.4) { 0 } else { rng.gen_range(0..31) })).collect();
            let base = DenseMatrix::new(f, r, c, data).unwrap();
            let mut dir = vec![(rng.gen_range(0..r), rng.gen_range(0..c), f.elem(rng.gen_range(1..31)))];
            if trial % 2 == 0 {
                let (i, j) = (rng.gen_range(0..r), rng.gen_range(0..c));
                if (i, j) != (dir[0].0, dir[0].1) {
                    dir.push((i, j, f.elem(rng.gen_range(1..31))));
                }
            }
            let fam = LinearFamily::new(base, dir).unwrap();
            let mut restrictions = vec![Restriction::Full, Restriction::DropRow(0), Restriction::DropCol(c - 1)];
            if r == c {
                restrictions.push(Restriction::DropIndex(r / 2));
            }
            for res in restrictions {
                let prof = fam.profile(res);
                let sub = fam.restrict(res);
                for y in 0..31 {
                    let y = f.elem(y);
                    assert_eq!(prof.rank_at(y), rank_of(&sub.at(y)), "trial {trial} {res:?} y={y}");
                }
            }
        }
    }

    #[test]
    fn classes_partition_the_value_set() {
        let f = PrimeField::new(101).unwrap();
        let a = RankProfile { generic: 4, special: vec![(f.elem(0), 2), (f.elem(7), 2)] };
        let b = RankProfile { generic: 3, special: vec![(f.elem(1), 1), (f.elem(200 % 101), 2)] };
        let classes = value_classes(&[&a, &b], 10);
        let reps: Vec<u64> = classes.iter().map(|c| c.rep.value()).collect();
        assert_eq!(reps, vec![0, 1, 2, 7]);
        assert_eq!(classes.iter().map(|c| c.count).sum::<u64>(), 10);
        assert_eq!(classes[2].count, 7);
        assert_eq!(classes[2].ranks, vec![4, 3]);
        assert_eq!(classes[0].ranks, vec![2, 3]);
    }
}
