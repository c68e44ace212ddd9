use super::{mixed_max_rank, MixedMatrix};
use crate::error::{invalid, Result};
use crate::ffield::PrimeField;
use crate::matrix::io::{next_number, read_entries, tokens, write_matrix};
use crate::matrix::DenseMatrix;
use crate::params::RunConfig;
use crate::tape::{CatalyticTape, RunOutcome};

/// Two linear matroids on the ground set `0..n`, each given by a matrix
/// whose columns represent the elements.
#[derive(Clone, Debug)]
pub struct LinearMatroidPair {
    first: DenseMatrix,
    second: DenseMatrix,
}

impl LinearMatroidPair {
    pub fn new(first: DenseMatrix, second: DenseMatrix) -> Result<Self> {
        if first.cols() != second.cols() {
            return invalid(format!("ground sets differ: {} vs {} columns", first.cols(), second.cols()));
        }
        if first.field() != second.field() {
            return invalid("the two representations use different fields");
        }
        Ok(LinearMatroidPair { first, second })
    }

    /// Two matrix files back to back (see [`crate::matrix::io`]).
    pub fn parse(text: &str) -> Result<Self> {
        let mut it = tokens(text);
        let mut next = || -> Result<DenseMatrix> {
            let rows: usize = next_number(&mut it, "row count")?;
            let cols: usize = next_number(&mut it, "column count")?;
            let field = PrimeField::new(next_number(&mut it, "prime")?)?;
            read_entries(&mut it, field, rows, cols)
        };
        let (first, second) = (next()?, next()?);
        if it.next().is_some() {
            return invalid("trailing data after the second matrix");
        }
        LinearMatroidPair::new(first, second)
    }

    pub fn to_text(&self) -> String {
        format!("{}{}", write_matrix(&self.first), write_matrix(&self.second))
    }

    pub fn ground_size(&self) -> usize {
        self.first.cols()
    }

    pub fn first(&self) -> &DenseMatrix {
        &self.first
    }

    pub fn second(&self) -> &DenseMatrix {
        &self.second
    }

    /// `[[0, A1], [A2^T, diag(x_1..x_n)]]`, of size `(r1 + n) x (r2 + n)`.
    /// Its symbolic rank is `n` plus the largest common independent set.
    pub fn block_matrix(&self) -> MixedMatrix {
        let (r1, r2, n) = (self.first.rows(), self.second.rows(), self.ground_size());
        let mut m = DenseMatrix::zeros(self.first.field(), r1 + n, r2 + n);
        for i in 0..r1 {
            for j in 0..n {
                m.set(i, r2 + j, self.first.get(i, j));
            }
        }
        for j in 0..n {
            for i in 0..r2 {
                m.set(r1 + j, i, self.second.get(i, j));
            }
        }
        let diag: Vec<(usize, usize)> = (0..n).map(|j| (r1 + j, r2 + j)).collect();
        MixedMatrix::new(m, &diag).expect("diagonal block starts at zero")
    }
}

/// Size of a largest set independent in both matroids.
pub fn matroid_intersection_size(
    pair: &LinearMatroidPair,
    tape: &mut CatalyticTape,
    cfg: &RunConfig,
) -> Result<RunOutcome<usize>> {
    let n = pair.ground_size();
    Ok(mixed_max_rank(&pair.block_matrix(), tape, cfg)?.map(|r| r.rank - n))
}
