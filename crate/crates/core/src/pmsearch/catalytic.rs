use serde::Serialize;

use super::{split_p0_p1, validated_extract, PfaffianSplits, WeightAssignment};
use crate::error::{Error, Result};
use crate::ffield::{bits_for, FieldElement, FieldSpec, PrimeField};
use crate::params::{checked_pow, RunConfig};
use crate::tape::{
    run_catalytic, Arena, AuditEvent, AuditStage, BlockOutcome, CaseTag, CatalyticProblem, CatalyticTape, EncodedRecord,
    HeaderField, RecordReader, Restoration, RunOutcome, SubRun,
};
use crate::tutte::{geelen_greedy, matching_size, tutte_matrix, Graph};

/// A perfect matching (edge indices) and how it was found.
#[derive(Clone, Debug, Serialize)]
pub struct PerfectMatching {
    pub edges: Vec<usize>,
    /// Least surviving degree `w0`, when the matching came from extraction.
    pub weight: Option<usize>,
    /// The run that produced the full-rank Tutte evaluation.
    pub tutte: Option<SubRun>,
}

/// Header of a PM-EDGE record: just the edge index.
pub fn pm_header_bits(g: &Graph) -> u32 {
    bits_for(g.m() as u64)
}

struct PmProblem<'a> {
    graph: &'a Graph,
    tprime: &'a [FieldElement],
    field: PrimeField,
    w_max: u64,
    tutte_spec: FieldSpec,
    cfg: &'a RunConfig,
    audit: Vec<AuditEvent>,
}

impl PmProblem<'_> {
    fn weights(&self, values: &[FieldElement]) -> Result<WeightAssignment> {
        WeightAssignment::new(values.iter().map(|v| v.value()).collect(), self.w_max)
    }

    // w_bar - w_e for edge `e`, with W(e) itself ignored
    fn recover(&self, weights: &WeightAssignment, e: usize) -> Result<Option<u64>> {
        let (p0, p1) = split_p0_p1(self.graph, self.tprime, weights, e, self.field)?;
        let (Some((without, _)), Some((through, _))) = (crate::ffield::min_degree_term(&p0), crate::ffield::min_degree_term(&p1))
        else {
            return Ok(None);
        };
        Ok((without >= through).then(|| (without - through) as u64).filter(|&w| w <= self.w_max))
    }

    // deletes edges one by one while a perfect matching survives
    fn self_reduce(&self) -> Result<Vec<usize>> {
        let g = self.graph;
        let mut keep: Vec<usize> = (0..g.m()).collect();
        for e in 0..g.m() {
            let trial: Vec<usize> = keep.iter().copied().filter(|&k| k != e).collect();
            let (sub, _) = g.edge_subgraph(&trial);
            let values = geelen_greedy(&sub, &self.tutte_spec, self.cfg.scan)?;
            if tutte_matrix(&sub, &values, self.tutte_spec.field)?.rank() == g.n() {
                keep = trial;
            }
        }
        if !g.is_perfect_matching(&keep) {
            return Err(Error::LemmaViolation("self-reduction did not end at a perfect matching".into()));
        }
        Ok(keep)
    }
}

impl CatalyticProblem for PmProblem<'_> {
    type Answer = PerfectMatching;

    fn block_len(&self) -> usize {
        self.graph.m()
    }

    fn process(&mut self, block: usize, values: &[FieldElement]) -> Result<BlockOutcome<PerfectMatching>> {
        let weights = self.weights(values)?;
        let splits = PfaffianSplits::compute(self.graph, self.tprime, &weights, self.field)?;
        if let Some(t) = splits.threshold_edge(&weights) {
            if self.cfg.audit {
                let back = self.recover(&weights.zeroed(t.edge), t.edge)?;
                let count = u64::from(back == Some(weights.get(t.edge)));
                self.audit.push(AuditEvent { block, case: CaseTag::PmEdge, stage: AuditStage::Compress, candidates: count });
                if count != 1 {
                    return Err(Error::LemmaViolation(format!(
                        "block {block}: edge {} weight {} recomputes as {back:?}",
                        t.edge,
                        weights.get(t.edge)
                    )));
                }
            }
            return Ok(BlockOutcome::Compress(EncodedRecord {
                case: CaseTag::PmEdge,
                fields: vec![HeaderField::new("edge", t.edge as u64, pm_header_bits(self.graph))],
                dropped: vec![t.edge],
            }));
        }
        let (edges, w0) = validated_extract(self.graph, &splits, &weights)?;
        Ok(BlockOutcome::Success(PerfectMatching { edges, weight: Some(w0), tutte: None }))
    }

    fn compute(&mut self, arena: &mut Arena<'_>) -> Result<PerfectMatching> {
        let edges = self.self_reduce()?;
        for e in 0..self.graph.m() {
            arena.push(u64::from(edges.contains(&e)), 1);
        }
        Ok(PerfectMatching { edges, weight: None, tutte: None })
    }

    fn restore(&mut self, block: usize, reader: &mut RecordReader<'_>) -> Result<Restoration> {
        let m = self.graph.m();
        let e = reader.read(pm_header_bits(self.graph))? as usize;
        if e >= m {
            return Err(Error::ContractViolation(format!("block {block}: edge index {e} out of range")));
        }
        let mut values = reader.values(m - 1)?;
        values.insert(e, FieldElement::ZERO);
        let back = self.recover(&self.weights(&values)?, e)?;
        let candidates = u64::from(back.is_some());
        self.audit.push(AuditEvent { block, case: CaseTag::PmEdge, stage: AuditStage::Restore, candidates });
        values[e] = FieldElement::raw(back.unwrap_or(0));
        Ok(Restoration { values, candidates })
    }

    fn take_audit(&mut self) -> Vec<AuditEvent> {
        std::mem::take(&mut self.audit)
    }
}

/// Perfect matching of `g` given a full-rank Tutte evaluation `tprime`
/// over `tutte_spec`. `tape` holds the edge weights.
pub fn perfect_matching_with(
    g: &Graph,
    tprime: &[FieldElement],
    tutte_spec: FieldSpec,
    tape: &mut CatalyticTape,
    cfg: &RunConfig,
) -> Result<RunOutcome<PerfectMatching>> {
    let field = tutte_spec.field;
    let rank = tutte_matrix(g, tprime, field)?.rank();
    if rank != g.n() {
        return Err(Error::PreconditionViolation(format!("graph has no perfect matching (Tutte rank {rank} < {})", g.n())));
    }
    if g.m() == 0 {
        return Ok(RunOutcome::untouched(PerfectMatching { edges: vec![], weight: Some(0), tutte: None }, tape));
    }
    let w_max = tape.spec().value_set_size() - 1;
    let mut problem = PmProblem { graph: g, tprime, field, w_max, tutte_spec, cfg, audit: Vec::new() };
    let out = run_catalytic(&mut problem, tape)?;
    cfg.finish(out)
}

/// Perfect matching of `g`. The Tutte evaluation comes from a separate
/// max-rank run; `tape` holds the edge weights.
pub fn perfect_matching(g: &Graph, tape: &mut CatalyticTape, cfg: &RunConfig) -> Result<RunOutcome<PerfectMatching>> {
    if g.n() % 2 == 1 {
        return Err(Error::PreconditionViolation(format!("odd vertex count {} admits no perfect matching", g.n())));
    }
    let mut ttape = cfg.tutte_tape(g, 1)?;
    let trank = matching_size(g, &mut ttape, cfg)?;
    let sub = trank.sub_run("trank");
    let mut out = perfect_matching_with(g, &trank.answer.assignment, ttape.spec(), tape, cfg)?;
    out.answer.tutte = Some(sub);
    Ok(out)
}

impl RunConfig {
    /// Largest edge weight: explicit, `n^10` under `--paper-params`, else
    /// `2^(ceil(log2 m) + 1) - 1` (one bit more than an edge index).
    pub fn pm_w_max(&self, g: &Graph) -> Result<u64> {
        match self.w_max {
            Some(w) => Ok(w),
            None if self.paper_params => checked_pow(g.n().max(2) as u64, 10, self.field()?),
            None => Ok((1u64 << (bits_for(g.m() as u64) + 1)) - 1),
        }
    }

    /// Weight tape for a perfect-matching run on `g`.
    pub fn pm_tape(&self, g: &Graph, run: u64) -> Result<CatalyticTape> {
        let field = self.field()?;
        let spec = FieldSpec::new(field, self.pm_w_max(g)? + 1)?;
        let n = g.n().max(2);
        let blocks = match self.blocks {
            Some(b) => b,
            None if self.paper_params => n * n * n,
            None => n,
        };
        self.tape(spec, blocks, g.m().max(1), run)
    }
}
