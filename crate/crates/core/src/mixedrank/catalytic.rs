use serde::Serialize;

use super::{geelen99_greedy, mixed_case_split, restore_value_2a, restore_value_2b, MixedCase, MixedMatrix};
use crate::error::{Error, Result};
use crate::ffield::{bits_for, FieldElement, FieldSpec};
use crate::matrix::{deficiency_dense, rank_of, DeficiencySet};
use crate::params::{RunConfig, ScanStrategy};
use crate::tape::{
    run_catalytic, Arena, AuditEvent, AuditStage, BlockOutcome, CaseTag, CatalyticProblem, CatalyticTape, EncodedRecord,
    HeaderField, RecordReader, Restoration, RunOutcome,
};

/// Rank of a mixed matrix with a completion attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixedRank {
    pub rank: usize,
    pub assignment: Vec<FieldElement>,
    /// Row labels `0..r`, then column labels `r..r+c`.
    pub deficiency: DeficiencySet,
}

struct Widths {
    var: u32,
    rank: u32,
    line: u32,
}

impl Widths {
    fn of(a: &MixedMatrix) -> Self {
        Widths {
            var: bits_for(a.num_vars() as u64),
            rank: bits_for(a.rows().min(a.cols()) as u64 + 1),
            line: bits_for((a.rows() + a.cols()) as u64),
        }
    }
}

pub fn mixed_header_bits(a: &MixedMatrix) -> u32 {
    let w = Widths::of(a);
    1 + w.var + w.rank.max(w.line)
}

struct MixedProblem<'a> {
    matrix: &'a MixedMatrix,
    spec: FieldSpec,
    cfg: &'a RunConfig,
    widths: Widths,
    audit: Vec<AuditEvent>,
}

impl MixedProblem<'_> {
    fn answer_from(&self, values: Vec<FieldElement>) -> Result<MixedRank> {
        let m = self.matrix.evaluate(&values)?;
        Ok(MixedRank { rank: rank_of(&m), deficiency: deficiency_dense(&m), assignment: values })
    }
}

impl CatalyticProblem for MixedProblem<'_> {
    type Answer = MixedRank;

    fn block_len(&self) -> usize {
        self.matrix.num_vars()
    }

    fn process(&mut self, block: usize, values: &[FieldElement]) -> Result<BlockOutcome<MixedRank>> {
        let a = self.matrix;
        let w = &self.widths;
        let case = mixed_case_split(a, values, &self.spec, self.cfg.scan)?;
        let (record, recount) = match case {
            MixedCase::MaxRank => return Ok(BlockOutcome::Success(self.answer_from(values.to_vec())?)),
            MixedCase::TwoA { var, rank, .. } => (
                EncodedRecord {
                    case: CaseTag::TwoAPrime,
                    fields: vec![
                        HeaderField::new("case", 0, 1),
                        HeaderField::new("var", var as u64, w.var),
                        HeaderField::new("rank", rank as u64, w.rank),
                    ],
                    dropped: vec![var],
                },
                self.cfg.audit.then(|| restore_value_2a(a, values, var, rank, &self.spec, ScanStrategy::Exhaustive)),
            ),
            MixedCase::TwoB { var, line, .. } => (
                EncodedRecord {
                    case: CaseTag::TwoBPrime,
                    fields: vec![
                        HeaderField::new("case", 1, 1),
                        HeaderField::new("var", var as u64, w.var),
                        HeaderField::new("line", line as u64, w.line),
                    ],
                    dropped: vec![var],
                },
                self.cfg.audit.then(|| restore_value_2b(a, values, var, line, &self.spec, ScanStrategy::Exhaustive)),
            ),
        };
        if let Some(found) = recount {
            let count = found?.count;
            self.audit.push(AuditEvent { block, case: record.case, stage: AuditStage::Compress, candidates: count });
            if count != 1 {
                return Err(Error::LemmaViolation(format!("block {block}: {case:?} has {count} preserving values")));
            }
        }
        Ok(BlockOutcome::Compress(record))
    }

    fn compute(&mut self, arena: &mut Arena<'_>) -> Result<MixedRank> {
        let values = geelen99_greedy(self.matrix, &self.spec, self.cfg.scan)?;
        let answer = self.answer_from(values)?;
        arena.push(answer.rank as u64, self.widths.rank);
        Ok(answer)
    }

    fn restore(&mut self, block: usize, reader: &mut RecordReader<'_>) -> Result<Restoration> {
        let a = self.matrix;
        let w = &self.widths;
        let case = reader.read(1)?;
        let var = reader.read(w.var)? as usize;
        if var >= a.num_vars() {
            return Err(Error::ContractViolation(format!("block {block}: variable index {var} out of range")));
        }
        let beta = reader.read(if case == 0 { w.rank } else { w.line })? as usize;
        let mut values = reader.values(a.num_vars() - 1)?;
        values.insert(var, FieldElement::ZERO);
        let (tag, found) = if case == 0 {
            (CaseTag::TwoAPrime, restore_value_2a(a, &values, var, beta, &self.spec, self.cfg.scan)?)
        } else {
            (CaseTag::TwoBPrime, restore_value_2b(a, &values, var, beta, &self.spec, self.cfg.scan)?)
        };
        self.audit.push(AuditEvent { block, case: tag, stage: AuditStage::Restore, candidates: found.count });
        values[var] = found.first.unwrap_or(FieldElement::ZERO);
        Ok(Restoration { values, candidates: found.count })
    }

    fn take_audit(&mut self) -> Vec<AuditEvent> {
        std::mem::take(&mut self.audit)
    }
}

/// Symbolic rank of `a` and a completion attaining it. Matrices without
/// indeterminates are answered directly.
pub fn mixed_max_rank(a: &MixedMatrix, tape: &mut CatalyticTape, cfg: &RunConfig) -> Result<RunOutcome<MixedRank>> {
    if a.num_vars() == 0 {
        let m = a.constant();
        let answer = MixedRank { rank: rank_of(m), assignment: vec![], deficiency: deficiency_dense(m) };
        return Ok(RunOutcome::untouched(answer, tape));
    }
    if tape.spec().field != a.field() {
        return Err(Error::InvalidInput("tape field differs from the matrix field".into()));
    }
    let mut problem = MixedProblem { matrix: a, spec: tape.spec(), cfg, widths: Widths::of(a), audit: Vec::new() };
    let out = run_catalytic(&mut problem, tape)?;
    cfg.finish(out)
}

impl RunConfig {
    /// Tape sized for a mixed-rank run on `a`, over the matrix's own field.
    pub fn mixed_tape(&self, a: &MixedMatrix, run: u64) -> Result<CatalyticTape> {
        let cfg = RunConfig { prime: a.field().modulus(), ..self.clone() };
        let (spec, blocks) = cfg.plan(a.rows() + a.cols(), mixed_header_bits(a))?;
        cfg.tape(spec, blocks, a.num_vars().max(1), run)
    }
}
