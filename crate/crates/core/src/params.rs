//! Run parameters shared by every catalytic algorithm.

use crate::error::{invalid, Error, Result};
use crate::ffield::{bits_for, FieldSpec, PrimeField, DEFAULT_PRIME};
use crate::tape::{CatalyticTape, RunOutcome, TapeSource};

/// How single-variable substitutions `x_i <- a` are searched.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ScanStrategy {
    /// Rank profiles along `B + yC` (a few eliminations per variable).
    #[default]
    Sweep,
    /// One elimination per value of `S`.
    Exhaustive,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub prime: u64,
    /// Overrides the size of the value set `S`.
    pub value_set_size: Option<u64>,
    /// Overrides the number of tape blocks.
    pub blocks: Option<usize>,
    pub tape: TapeSource,
    /// Use `N = n^3`, `s = n^10` (and `c = 2l + 3` for pencils).
    pub paper_params: bool,
    /// Largest edge weight for perfect-matching search.
    pub w_max: Option<u64>,
    /// Turn a failed restoration check into an error.
    pub check_restore: bool,
    /// Recount every uniqueness claim by brute force over `S` when it is made.
    pub audit: bool,
    pub scan: ScanStrategy,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            prime: DEFAULT_PRIME,
            value_set_size: None,
            blocks: None,
            tape: TapeSource::Seed(0),
            paper_params: false,
            w_max: None,
            check_restore: true,
            audit: false,
            scan: ScanStrategy::Sweep,
        }
    }
}

impl RunConfig {
    pub fn with_seed(seed: u64) -> Self {
        RunConfig { tape: TapeSource::Seed(seed), ..Default::default() }
    }

    pub fn field(&self) -> Result<PrimeField> {
        PrimeField::new(self.prime)
    }

    /// Value set and block count for an algorithm on `n` vertices (or
    /// lines) whose largest record header is `header_bits` wide. Desk
    /// defaults: `N = n` and `s = 2^b` with `b` the larger of
    /// `ceil(log2 n^3)` and `header_bits + 1`.
    pub fn plan(&self, n: usize, header_bits: u32) -> Result<(FieldSpec, usize)> {
        let field = self.field()?;
        let n = n.max(2) as u64;
        let s = match self.value_set_size {
            Some(s) => s,
            None if self.paper_params => checked_pow(n, 10, field)?,
            None => {
                let b = bits_for(n.pow(3)).max(header_bits + 1);
                if b >= 63 || 1u64 << b > field.modulus() {
                    return Err(Error::FieldTooSmall { p: field.modulus(), needed: 1 << b.min(62) });
                }
                1u64 << b
            }
        };
        let blocks = match self.blocks {
            Some(blocks) => blocks,
            None if self.paper_params => (n * n * n) as usize,
            None => n as usize,
        };
        Ok((FieldSpec::new(field, s)?, blocks))
    }

    /// A fresh tape for sub-run number `run`. Seeded tapes derive a
    /// separate stream per sub-run; file tapes are reread from the start.
    pub fn tape(&self, spec: FieldSpec, blocks: usize, block_len: usize, run: u64) -> Result<CatalyticTape> {
        let source = match &self.tape {
            TapeSource::Seed(seed) => TapeSource::Seed(if run == 0 { *seed } else { splitmix(*seed ^ splitmix(run)) }),
            bytes => bytes.clone(),
        };
        CatalyticTape::new(&source, blocks, block_len, spec)
    }

    /// Applies the restoration policy to a finished run.
    pub fn finish<A>(&self, outcome: RunOutcome<A>) -> Result<RunOutcome<A>> {
        if self.check_restore && !outcome.restored {
            return Err(Error::ContractViolation("catalytic tape was not restored".into()));
        }
        Ok(outcome)
    }
}

/// `n^e`, which must fit in the field.
pub(crate) fn checked_pow(n: u64, e: u32, field: PrimeField) -> Result<u64> {
    match n.checked_pow(e) {
        Some(v) if v <= field.modulus() => Ok(v),
        _ => invalid(format!(
            "--paper-params needs a value set of size {n}^{e}, which exceeds the prime {}; pass a larger prime",
            field.modulus()
        )),
    }
}

pub(crate) fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desk_and_paper_plans() {
        let cfg = RunConfig::default();
        let (spec, blocks) = cfg.plan(10, 12).unwrap();
        assert_eq!(spec.value_set_size(), 1 << 13);
        assert_eq!(blocks, 10);
        let (spec, _) = cfg.plan(10, 3).unwrap();
        assert_eq!(spec.value_bits(), 10);

        let paper = RunConfig { paper_params: true, ..Default::default() };
        let (spec, blocks) = paper.plan(3, 4).unwrap();
        assert_eq!(spec.value_set_size(), 59049);
        assert_eq!(blocks, 27);
        assert!(paper.plan(9, 4).is_err());
    }

    #[test]
    fn sub_run_tapes_differ() {
        let cfg = RunConfig::with_seed(5);
        let (spec, _) = cfg.plan(4, 2).unwrap();
        let a = cfg.tape(spec, 2, 3, 0).unwrap();
        let b = cfg.tape(spec, 2, 3, 1).unwrap();
        assert_ne!(a.snapshot_hash(), b.snapshot_hash());
    }
}
