use serde::Serialize;

use super::{bjp_greedy, effective_ell, tuple_at_ordinal, tuple_case_split, tuple_ordinal, ApproxParams, MatrixPencil, TupleCase};
use crate::error::{invalid, Error, Result};
use crate::ffield::{bits_for, FieldElement, FieldSpec};
use crate::matrix::{rank_of, DenseMatrix};
use crate::params::{checked_pow, RunConfig};
use crate::tape::{
    run_catalytic, Arena, AuditEvent, AuditStage, BlockOutcome, CaseTag, CatalyticProblem, CatalyticTape, EncodedRecord,
    HeaderField, RecordReader, Restoration, RunOutcome,
};
use crate::tutte::Graph;

/// An evaluation of a pencil and its rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PencilRank {
    pub rank: usize,
    pub assignment: Vec<FieldElement>,
    /// Tuple size actually used.
    pub ell: usize,
}

// work budget for one full scan of ([m] choose l) x S^l
const SCAN_BUDGET: u128 = 1 << 18;

#[derive(Clone, Copy, Debug)]
struct Widths {
    index: u32,
    ordinal: u32,
    rank: u32,
}

impl Widths {
    fn of(n: usize, m: usize, ell: usize, s: u64) -> Self {
        Widths { index: bits_for(m as u64), ordinal: bits_of(ordinal_bound(n, ell, s)), rank: bits_for(n as u64 + 1) }
    }

    fn header(&self, ell: usize) -> u32 {
        ell as u32 * self.index + self.ordinal + self.rank
    }
}

// bits to write any of 0..=x
fn bits_of(x: u128) -> u32 {
    128 - x.leading_zeros()
}

/// Largest possible number of rank-keeping tuples when some tuple raises
/// the rank: `n s^(l-1)`.
fn ordinal_bound(n: usize, ell: usize, s: u64) -> u128 {
    (0..ell.saturating_sub(1)).fold(n as u128, |acc, _| acc.saturating_mul(s as u128))
}

fn binomial(m: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (m - i) as u128 / (i as u128 + 1))
}

/// Desk value-set size: the smallest power of two at least `2(n + 1)`
/// whose records save space, unless a full scan would exceed the budget;
/// then the largest power of two within it.
pub(crate) fn desk_value_set_size(n: usize, m: usize, ell: usize, p: u64) -> u64 {
    let floor = (2 * (n as u64 + 1)).next_power_of_two();
    let mut best = floor;
    let mut s = floor;
    while s <= p {
        let cost = (s as u128).saturating_pow(ell as u32).saturating_mul(binomial(m, ell));
        if cost > SCAN_BUDGET && s > floor {
            break;
        }
        best = s;
        if ell as i64 * bits_for(s) as i64 > Widths::of(n, m, ell, s).header(ell) as i64 {
            break;
        }
        s <<= 1;
    }
    best.min(p)
}

struct PencilProblem<'a> {
    pencil: &'a MatrixPencil,
    spec: FieldSpec,
    params: ApproxParams,
    ell: usize,
    widths: Widths,
    cfg: &'a RunConfig,
    audit: Vec<AuditEvent>,
}

impl CatalyticProblem for PencilProblem<'_> {
    type Answer = PencilRank;

    fn block_len(&self) -> usize {
        self.pencil.len()
    }

    fn process(&mut self, block: usize, values: &[FieldElement]) -> Result<BlockOutcome<PencilRank>> {
        let p = self.pencil;
        let (subset, k) = match tuple_case_split(p, values, &self.spec, &self.params)? {
            TupleCase::Approx { rank } => {
                return Ok(BlockOutcome::Success(PencilRank { rank, assignment: values.to_vec(), ell: self.ell }))
            }
            TupleCase::Witness { subset, rank, .. } => (subset, rank),
        };
        let (j, count) = tuple_ordinal(p, values, &subset, k, &self.spec)?;
        let bound = ordinal_bound(p.order(), self.ell, self.spec.value_set_size());
        if count as u128 > bound {
            return Err(Error::LemmaViolation(format!(
                "block {block}: {count} tuples keep rank {k} on {subset:?}, more than the bound {bound}"
            )));
        }
        if self.cfg.audit {
            let back = tuple_at_ordinal(p, values, &subset, k, j, &self.spec)?;
            let own: Vec<FieldElement> = subset.iter().map(|&i| values[i]).collect();
            let ok = back.as_deref() == Some(own.as_slice());
            self.audit.push(AuditEvent { block, case: CaseTag::EdTuple, stage: AuditStage::Compress, candidates: u64::from(ok) });
            if !ok {
                return Err(Error::LemmaViolation(format!("block {block}: ordinal {j} does not give back the tuple")));
            }
        }
        let w = self.widths;
        let mut fields: Vec<HeaderField> = subset.iter().map(|&i| HeaderField::new("index", i as u64, w.index)).collect();
        fields.push(HeaderField::new("ordinal", j, w.ordinal));
        fields.push(HeaderField::new("rank", k as u64, w.rank));
        Ok(BlockOutcome::Compress(EncodedRecord { case: CaseTag::EdTuple, fields, dropped: subset }))
    }

    fn compute(&mut self, arena: &mut Arena<'_>) -> Result<PencilRank> {
        let assignment = bjp_greedy(self.pencil, &self.spec, &self.params)?;
        let rank = rank_of(&self.pencil.evaluate(&assignment)?);
        arena.push(rank as u64, self.widths.rank);
        Ok(PencilRank { rank, assignment, ell: self.ell })
    }

    fn restore(&mut self, block: usize, reader: &mut RecordReader<'_>) -> Result<Restoration> {
        let p = self.pencil;
        let w = self.widths;
        let subset = (0..self.ell).map(|_| reader.read(w.index).map(|i| i as usize)).collect::<Result<Vec<_>>>()?;
        if subset.windows(2).any(|x| x[0] >= x[1]) || subset.last().is_some_and(|&i| i >= p.len()) {
            return Err(Error::ContractViolation(format!("block {block}: bad index set {subset:?}")));
        }
        let j = reader.read(w.ordinal)?;
        let k = reader.read(w.rank)? as usize;
        let mut values = reader.values(p.len() - self.ell)?;
        for &i in &subset {
            values.insert(i, FieldElement::ZERO);
        }
        let found = tuple_at_ordinal(p, &values, &subset, k, j, &self.spec)?;
        let candidates = u64::from(found.is_some());
        self.audit.push(AuditEvent { block, case: CaseTag::EdTuple, stage: AuditStage::Restore, candidates });
        for (&i, x) in subset.iter().zip(found.unwrap_or_default()) {
            values[i] = x;
        }
        Ok(Restoration { values, candidates })
    }

    fn take_audit(&mut self) -> Vec<AuditEvent> {
        std::mem::take(&mut self.audit)
    }
}

/// An evaluation of `pencil` of rank at least `(1 - eps)` times its
/// symbolic rank (whenever the tuple size is the derived one).
pub fn pencil_approx_rank(
    pencil: &MatrixPencil,
    tape: &mut CatalyticTape,
    cfg: &RunConfig,
    params: &ApproxParams,
) -> Result<RunOutcome<PencilRank>> {
    let ell = effective_ell(pencil, params);
    if pencil.is_empty() {
        return Ok(RunOutcome::untouched(PencilRank { rank: 0, assignment: vec![], ell }, tape));
    }
    let spec = tape.spec();
    if spec.field != pencil.field() {
        return invalid("tape field differs from the pencil field");
    }
    let widths = Widths::of(pencil.order(), pencil.len(), ell, spec.value_set_size());
    let mut problem = PencilProblem { pencil, spec, params: *params, ell, widths, cfg, audit: Vec::new() };
    let out = run_catalytic(&mut problem, tape)?;
    cfg.finish(out)
}

/// Header bits of an ED-TUPLE record for `pencil` over a value set of size `s`.
pub fn ed_header_bits(pencil: &MatrixPencil, params: &ApproxParams, s: u64) -> u32 {
    let ell = effective_ell(pencil, params);
    Widths::of(pencil.order(), pencil.len(), ell, s).header(ell)
}

impl RunConfig {
    /// Tape for a pencil run. `--paper-params` uses `s = n^(2l+3)`.
    pub fn pencil_tape(&self, pencil: &MatrixPencil, params: &ApproxParams, run: u64) -> Result<CatalyticTape> {
        let cfg = RunConfig { prime: pencil.field().modulus(), ..self.clone() };
        let field = cfg.field()?;
        let n = pencil.order().max(2);
        let ell = effective_ell(pencil, params).max(1);
        let s = match cfg.value_set_size {
            Some(s) => s,
            None if cfg.paper_params => checked_pow(n as u64, params.c(), field)?,
            None => desk_value_set_size(n, pencil.len(), ell, field.modulus()),
        };
        let blocks = match cfg.blocks {
            Some(b) => b,
            None if cfg.paper_params => n * n * n,
            None => n,
        };
        cfg.tape(FieldSpec::new(field, s)?, blocks, pencil.len().max(1), run)
    }
}

/// The pencil of `R T(x) R^T` for representation `repr` (columns indexed
/// by the vertices of `g`): one matrix `r_u r_v^T - r_v r_u^T` per edge.
pub fn matroid_matching_pencil(repr: &DenseMatrix, g: &Graph) -> Result<MatrixPencil> {
    if repr.cols() != g.n() {
        return invalid(format!("representation has {} columns for {} vertices", repr.cols(), g.n()));
    }
    let f = repr.field();
    let r = repr.rows();
    let mats = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            let mut a = DenseMatrix::zeros(f, r, r);
            for i in 0..r {
                for j in 0..r {
                    let x = f.sub(f.mul(repr.get(i, u), repr.get(j, v)), f.mul(repr.get(i, v), repr.get(j, u)));
                    a.set(i, j, x);
                }
            }
            a
        })
        .collect();
    MatrixPencil::new(f, r, mats)
}

/// Approximate size of a largest matching whose covered vertices are
/// independent: half the rank found for [`matroid_matching_pencil`].
pub fn matroid_matching_approx(
    repr: &DenseMatrix,
    g: &Graph,
    tape: &mut CatalyticTape,
    cfg: &RunConfig,
    params: &ApproxParams,
) -> Result<RunOutcome<usize>> {
    let pencil = matroid_matching_pencil(repr, g)?;
    Ok(pencil_approx_rank(&pencil, tape, cfg, params)?.map(|r| r.rank / 2))
}
