use std::fmt;

use serde::{Deserialize, Serialize};

use super::{rank_of, DenseMatrix, SkewMatrix};

/// One line of a rectangular matrix. Rows and columns share a single label
/// space: in an `r x c` matrix rows are labels `0..r` and columns `r..r+c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Line {
    Row(usize),
    Col(usize),
}

impl Line {
    pub fn label(self, rows: usize) -> usize {
        match self {
            Line::Row(i) => i,
            Line::Col(j) => rows + j,
        }
    }

    pub fn from_label(label: usize, rows: usize) -> Line {
        if label < rows {
            Line::Row(label)
        } else {
            Line::Col(label - rows)
        }
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::Row(i) => write!(f, "R{}", i + 1),
            Line::Col(j) => write!(f, "C{}", j + 1),
        }
    }
}

/// Sorted set of indices whose removal keeps the rank.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DeficiencySet(Vec<usize>);

impl DeficiencySet {
    pub fn from_indices(mut v: Vec<usize>) -> Self {
        v.sort_unstable();
        v.dedup();
        DeficiencySet(v)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_subset(&self, other: &DeficiencySet) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    pub fn is_strict_subset(&self, other: &DeficiencySet) -> bool {
        self.len() < other.len() && self.is_subset(other)
    }

    /// Members of `self` missing from `other`, ascending.
    pub fn difference(&self, other: &DeficiencySet) -> Vec<usize> {
        self.0.iter().copied().filter(|&i| !other.contains(i)).collect()
    }
}

/// Vertices `v` with `rank(M - v) = rank(M)`, deleting row and column `v`.
pub fn deficiency_skew(m: &SkewMatrix) -> DeficiencySet {
    let k = m.rank();
    let members = (0..m.order()).filter(|&v| m.without(v).rank() == k).collect();
    DeficiencySet(members)
}

/// Labels over rows and columns (see [`Line`]) whose single-line deletion
/// keeps the rank.
pub fn deficiency_dense(m: &DenseMatrix) -> DeficiencySet {
    let k = rank_of(m);
    let rows = m.rows();
    let mut members: Vec<usize> = (0..rows).filter(|&i| rank_of(&m.without_row(i)) == k).collect();
    members.extend((0..m.cols()).filter(|&j| rank_of(&m.without_col(j)) == k).map(|j| rows + j));
    DeficiencySet(members)
}
