use serde::Serialize;

use super::{Accounting, Arena, AuditEvent, CatalyticTape, CompressionRecord, EncodedRecord, JournalSummary, RecordReader, Restoration};
use crate::error::{invalid, Result};
use crate::ffield::FieldElement;

/// What processing one block produced.
#[derive(Clone, Debug)]
pub enum BlockOutcome<A> {
    /// The block's values certify the answer.
    Success(A),
    /// The block can be replaced by this shorter record.
    Compress(EncodedRecord),
}

/// One compress-or-compute algorithm, seen from the tape's side.
pub trait CatalyticProblem {
    type Answer;

    /// Values per block.
    fn block_len(&self) -> usize;

    fn process(&mut self, block: usize, values: &[FieldElement]) -> Result<BlockOutcome<Self::Answer>>;

    /// The fallback run once every block has been compressed (or a block
    /// could not be compressed profitably).
    fn compute(&mut self, arena: &mut Arena<'_>) -> Result<Self::Answer>;

    /// Decodes a record and recomputes the forgotten values.
    fn restore(&mut self, block: usize, reader: &mut RecordReader<'_>) -> Result<Restoration>;

    /// Uniqueness counts gathered during the run.
    fn take_audit(&mut self) -> Vec<AuditEvent> {
        Vec::new()
    }
}

/// How a run obtained its answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// Block `block` (0-based) certified the answer.
    Success { block: usize },
    /// The fallback ran in freed space. `early` means a block produced a
    /// record that would not have saved space, so the loop stopped there.
    Compute { early: bool },
}

#[derive(Clone, Debug, Serialize)]
pub struct RunOutcome<A> {
    pub answer: A,
    pub branch: Branch,
    pub journal: Vec<CompressionRecord>,
    pub summary: JournalSummary,
    pub freed_bits: u64,
    pub restored: bool,
    pub snapshot_hash: String,
    pub accounting: Accounting,
    pub audit: Vec<AuditEvent>,
}

impl<A> RunOutcome<A> {
    /// Outcome for an instance answered without touching the tape.
    pub fn untouched(answer: A, tape: &CatalyticTape) -> Self {
        RunOutcome {
            answer,
            branch: Branch::Success { block: 0 },
            journal: Vec::new(),
            summary: JournalSummary::default(),
            freed_bits: 0,
            restored: tape.verify_restored(),
            snapshot_hash: tape.snapshot_hash(),
            accounting: tape.accounting().clone(),
            audit: Vec::new(),
        }
    }

    /// The tape-side facts of this run, without the answer.
    pub fn sub_run(&self, label: impl Into<String>) -> SubRun {
        SubRun {
            label: label.into(),
            branch: self.branch,
            summary: self.summary.clone(),
            freed_bits: self.freed_bits,
            restored: self.restored,
            audit: self.audit.clone(),
        }
    }

    pub fn map<B>(self, f: impl FnOnce(A) -> B) -> RunOutcome<B> {
        RunOutcome {
            answer: f(self.answer),
            branch: self.branch,
            journal: self.journal,
            summary: self.summary,
            freed_bits: self.freed_bits,
            restored: self.restored,
            snapshot_hash: self.snapshot_hash,
            accounting: self.accounting,
            audit: self.audit,
        }
    }
}

/// One catalytic run inside a larger computation.
#[derive(Clone, Debug, Serialize)]
pub struct SubRun {
    pub label: String,
    pub branch: Branch,
    pub summary: JournalSummary,
    pub freed_bits: u64,
    pub restored: bool,
    pub audit: Vec<AuditEvent>,
}

/// Runs the block loop: process blocks in order until one certifies the
/// answer or all are compressed, fall back in the freed arena if needed,
/// then restore every compressed block and verify the tape.
pub fn run_catalytic<P: CatalyticProblem>(problem: &mut P, tape: &mut CatalyticTape) -> Result<RunOutcome<P::Answer>> {
    if tape.block_len() != problem.block_len() {
        return invalid(format!(
            "tape blocks hold {} values, the problem needs {}",
            tape.block_len(),
            problem.block_len()
        ));
    }
    let value_bits = tape.spec().value_bits();
    let mut found = None;
    let mut early = false;
    for t in 0..tape.blocks() {
        let values = tape.read_block(t)?;
        match problem.process(t, &values)? {
            BlockOutcome::Success(answer) => {
                found = Some((answer, Branch::Success { block: t }));
                break;
            }
            BlockOutcome::Compress(record) => {
                if record.margin(value_bits) <= 0 {
                    early = true;
                    break;
                }
                tape.compress_block(t, &record)?;
            }
        }
    }
    let freed_bits = tape.freed_bits();
    let (answer, branch) = match found {
        Some(hit) => hit,
        None => {
            let answer = {
                let mut arena = tape.pack()?;
                problem.compute(&mut arena)?
            };
            tape.unpack()?;
            (answer, Branch::Compute { early })
        }
    };
    for t in 0..tape.blocks() {
        if tape.is_compressed(t) {
            tape.restore_block(t, |reader| problem.restore(t, reader))?;
        }
    }
    tape.release_scratch();
    Ok(RunOutcome {
        answer,
        branch,
        journal: tape.journal().to_vec(),
        summary: tape.summary(),
        freed_bits,
        restored: tape.verify_restored(),
        snapshot_hash: tape.snapshot_hash(),
        accounting: tape.accounting().clone(),
        audit: problem.take_audit(),
    })
}
