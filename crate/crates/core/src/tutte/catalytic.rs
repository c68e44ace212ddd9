use serde::Serialize;

use super::{case_split, geelen_greedy, restore_value_2a, restore_value_2b, tutte_matrix, Graph, TutteCase};
use crate::error::{Error, Result};
use crate::ffield::{bits_for, FieldElement, FieldSpec};
use crate::matrix::{deficiency_skew, DeficiencySet};
use crate::params::RunConfig;
use crate::tape::{
    run_catalytic, Arena, AuditEvent, AuditStage, BlockOutcome, CaseTag, CatalyticProblem, CatalyticTape, EncodedRecord,
    HeaderField, RecordReader, Restoration, RunOutcome,
};

/// Maximum matching size together with the certificate it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MatchingSize {
    pub nu: usize,
    /// Vertices missed by some maximum matching.
    pub deficiency: DeficiencySet,
    /// A max-rank assignment (one value per edge).
    pub assignment: Vec<FieldElement>,
}

struct Widths {
    edge: u32,
    rank: u32,
    vertex: u32,
}

impl Widths {
    fn of(g: &Graph) -> Self {
        Widths { edge: bits_for(g.m() as u64), rank: bits_for(g.n() as u64 + 1), vertex: bits_for(g.n() as u64) }
    }
}

/// Widest record header used for `g`: case bit, edge index, then a rank or
/// a vertex.
pub fn tutte_header_bits(g: &Graph) -> u32 {
    let w = Widths::of(g);
    1 + w.edge + w.rank.max(w.vertex)
}

struct TutteProblem<'a> {
    graph: &'a Graph,
    spec: FieldSpec,
    cfg: &'a RunConfig,
    widths: Widths,
    audit: Vec<AuditEvent>,
}

impl TutteProblem<'_> {
    fn answer_from(&self, values: Vec<FieldElement>) -> Result<MatchingSize> {
        let t = tutte_matrix(self.graph, &values, self.spec.field)?;
        Ok(MatchingSize { nu: t.rank() / 2, deficiency: deficiency_skew(&t), assignment: values })
    }

    // brute-force count behind the audit flag
    fn recount(&self, values: &[FieldElement], case: &TutteCase) -> Result<u64> {
        let exhaustive = crate::params::ScanStrategy::Exhaustive;
        let c = match *case {
            TutteCase::TwoA { edge, rank, .. } => {
                restore_value_2a(self.graph, values, edge, rank, &self.spec, exhaustive)?
            }
            TutteCase::TwoB { edge, vertex, .. } => {
                restore_value_2b(self.graph, values, edge, vertex, &self.spec, exhaustive)?
            }
            TutteCase::MaxRank => return Ok(0),
        };
        Ok(c.count)
    }
}

impl CatalyticProblem for TutteProblem<'_> {
    type Answer = MatchingSize;

    fn block_len(&self) -> usize {
        self.graph.m()
    }

    fn process(&mut self, block: usize, values: &[FieldElement]) -> Result<BlockOutcome<MatchingSize>> {
        let case = case_split(self.graph, values, &self.spec, self.cfg.scan)?;
        let w = &self.widths;
        let record = match case {
            TutteCase::MaxRank => return Ok(BlockOutcome::Success(self.answer_from(values.to_vec())?)),
            TutteCase::TwoA { edge, rank, .. } => EncodedRecord {
                case: CaseTag::TwoA,
                fields: vec![
                    HeaderField::new("case", 0, 1),
                    HeaderField::new("edge", edge as u64, w.edge),
                    HeaderField::new("rank", rank as u64, w.rank),
                ],
                dropped: vec![edge],
            },
            TutteCase::TwoB { edge, vertex, .. } => EncodedRecord {
                case: CaseTag::TwoB,
                fields: vec![
                    HeaderField::new("case", 1, 1),
                    HeaderField::new("edge", edge as u64, w.edge),
                    HeaderField::new("vertex", vertex as u64, w.vertex),
                ],
                dropped: vec![edge],
            },
        };
        if self.cfg.audit {
            let count = self.recount(values, &case)?;
            self.audit.push(AuditEvent { block, case: record.case, stage: AuditStage::Compress, candidates: count });
            if count != 1 {
                return Err(Error::LemmaViolation(format!(
                    "block {block}: {} event {case:?} has {count} preserving values",
                    record.case
                )));
            }
        }
        Ok(BlockOutcome::Compress(record))
    }

    fn compute(&mut self, arena: &mut Arena<'_>) -> Result<MatchingSize> {
        let values = geelen_greedy(self.graph, &self.spec, self.cfg.scan)?;
        let answer = self.answer_from(values)?;
        arena.push(answer.nu as u64, self.widths.rank);
        for v in 0..self.graph.n() {
            arena.push(u64::from(answer.deficiency.contains(v)), 1);
        }
        Ok(answer)
    }

    fn restore(&mut self, block: usize, reader: &mut RecordReader<'_>) -> Result<Restoration> {
        let w = &self.widths;
        let case = reader.read(1)?;
        let edge = reader.read(w.edge)? as usize;
        if edge >= self.graph.m() {
            return Err(Error::ContractViolation(format!("block {block}: edge index {edge} out of range")));
        }
        let beta = reader.read(if case == 0 { w.rank } else { w.vertex })? as usize;
        let mut values = reader.values(self.graph.m() - 1)?;
        values.insert(edge, FieldElement::ZERO);
        let (tag, found) = if case == 0 {
            (CaseTag::TwoA, restore_value_2a(self.graph, &values, edge, beta, &self.spec, self.cfg.scan)?)
        } else {
            (CaseTag::TwoB, restore_value_2b(self.graph, &values, edge, beta, &self.spec, self.cfg.scan)?)
        };
        self.audit.push(AuditEvent { block, case: tag, stage: AuditStage::Restore, candidates: found.count });
        values[edge] = found.first.unwrap_or(FieldElement::ZERO);
        Ok(Restoration { values, candidates: found.count })
    }

    fn take_audit(&mut self) -> Vec<AuditEvent> {
        std::mem::take(&mut self.audit)
    }
}

/// Maximum matching size and deficiency set of `g`, computed on `tape`.
///
/// Edgeless graphs are answered without touching the tape.
pub fn matching_size(g: &Graph, tape: &mut CatalyticTape, cfg: &RunConfig) -> Result<RunOutcome<MatchingSize>> {
    if g.m() == 0 {
        return Ok(RunOutcome::untouched(
            MatchingSize { nu: 0, deficiency: DeficiencySet::from_indices((0..g.n()).collect()), assignment: vec![] },
            tape,
        ));
    }
    let mut problem =
        TutteProblem { graph: g, spec: tape.spec(), cfg, widths: Widths::of(g), audit: Vec::new() };
    let out = run_catalytic(&mut problem, tape)?;
    cfg.finish(out)
}

/// A max-rank Tutte assignment, i.e. one with `rank T' = 2 nu(G)`.
pub fn max_rank_assignment(g: &Graph, tape: &mut CatalyticTape, cfg: &RunConfig) -> Result<RunOutcome<Vec<FieldElement>>> {
    Ok(matching_size(g, tape, cfg)?.map(|a| a.assignment))
}

impl RunConfig {
    /// Tape sized for a Tutte run on `g`.
    pub fn tutte_tape(&self, g: &Graph, run: u64) -> Result<CatalyticTape> {
        let (spec, blocks) = self.plan(g.n(), tutte_header_bits(g))?;
        self.tape(spec, blocks, g.m().max(1), run)
    }
}
