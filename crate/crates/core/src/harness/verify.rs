//! Oracle agreement over a whole corpus.

use std::time::Instant;

use super::corpus::Corpus;
use super::oracle::{oracle_gallai_edmonds, oracle_matroid_intersection, oracle_max_matching, oracle_symbolic_rank};
use super::report::RunReport;
use crate::edmonds::{pencil_approx_rank, ApproxParams};
use crate::error::{Error, Result};
use crate::ffield::FieldSpec;
use crate::matrix::rank_of;
use crate::mixedrank::{geelen99_greedy, matroid_intersection_size, mixed_max_rank};
use crate::params::{splitmix, RunConfig};
use crate::pmsearch::{maximum_matching, perfect_matching};
use crate::tape::TapeSource;
use crate::tutte::{gallai_edmonds, matching_size};

/// Substitutions used for the symbolic-rank oracle.
pub const SYMBOLIC_TRIALS: usize = 30;

/// The tape seed moves with the instance index; a tape file is reused.
pub fn instance_config(cfg: &RunConfig, index: u64) -> RunConfig {
    match cfg.tape {
        TapeSource::Seed(seed) => RunConfig { tape: TapeSource::Seed(splitmix(seed ^ splitmix(index + 1))), ..cfg.clone() },
        TapeSource::Bytes(_) => cfg.clone(),
    }
}

/// Wraps one algorithm run. Lemma violations abort the whole sweep; any
/// other error becomes a failed report.
fn record(
    out: &mut Vec<RunReport>,
    instance: &str,
    algorithm: &str,
    run: impl FnOnce() -> Result<RunReport>,
) -> Result<()> {
    let start = Instant::now();
    match run() {
        Ok(mut r) => {
            r.wall_ms = start.elapsed().as_secs_f64() * 1e3;
            out.push(r);
        }
        Err(e @ Error::LemmaViolation(_)) => return Err(e),
        Err(e) => out.push(RunReport::failed(instance, algorithm, e, start.elapsed())),
    }
    Ok(())
}

/// Runs every algorithm on every instance it applies to and compares with
/// the oracles. Reports come back in corpus order.
pub fn verify_all(corpus: &Corpus, cfg: &RunConfig) -> Result<Vec<RunReport>> {
    let mut out = Vec::new();
    let mut index = 0u64;
    for (id, g) in &corpus.graphs {
        index += 1;
        let c = instance_config(cfg, index);
        let nu = oracle_max_matching(g)?;
        record(&mut out, id, "matching-size", || {
            let run = matching_size(g, &mut c.tutte_tape(g, 0)?, &c)?;
            let r = RunReport::new(id, "matching-size", format!("nu={}", run.answer.nu), vec![run.sub_run("trank")], Default::default());
            Ok(r.with_oracle(nu.to_string(), run.answer.nu == nu))
        })?;
        if g.n() <= 12 {
            let truth = oracle_gallai_edmonds(g)?;
            record(&mut out, id, "gallai-edmonds", || {
                let run = gallai_edmonds(g, &mut c.tutte_tape(g, 0)?, &c)?;
                let ge = &run.answer;
                let text = format!("D={:?} A={:?} C={:?}", ge.d, ge.a, ge.c);
                let agrees = (&ge.d, &ge.a, &ge.c) == (&truth.d, &truth.a, &truth.c);
                let r = RunReport::new(id, "gallai-edmonds", text, vec![run.sub_run("trank")], Default::default());
                Ok(r.with_oracle(format!("D={:?} A={:?} C={:?}", truth.d, truth.a, truth.c), agrees))
            })?;
        }
        record(&mut out, id, "matching", || {
            let run = maximum_matching(g, &mut c.tutte_tape(g, 0)?, &c)?;
            let mm = &run.answer;
            let mut runs = vec![run.sub_run("trank")];
            runs.extend(mm.subruns.iter().cloned());
            let valid = g.is_matching(&mm.edges) && mm.edges.len() == nu;
            let r = RunReport::new(id, "matching", format!("{} edges {:?}", mm.edges.len(), mm.edges), runs, Default::default());
            Ok(r.with_oracle(format!("nu={nu}"), valid))
        })?;
    }
    for (id, g) in &corpus.pm_graphs {
        index += 1;
        let c = instance_config(cfg, index);
        record(&mut out, id, "pm", || {
            let run = perfect_matching(g, &mut c.pm_tape(g, 0)?, &c)?;
            let pm = &run.answer;
            let mut runs: Vec<_> = pm.tutte.iter().cloned().collect();
            runs.push(run.sub_run("pm"));
            let r = RunReport::new(id, "pm", format!("{:?}", pm.edges), runs, Default::default());
            Ok(r.with_oracle("perfect", g.is_perfect_matching(&pm.edges)))
        })?;
    }
    for (id, a) in &corpus.mixed {
        index += 1;
        let c = instance_config(cfg, index);
        record(&mut out, id, "mixed-rank", || {
            let mut tape = c.mixed_tape(a, 0)?;
            let spec = tape.spec();
            let run = mixed_max_rank(a, &mut tape, &c)?;
            let greedy = rank_of(&a.evaluate(&geelen99_greedy(a, &spec, c.scan)?)?);
            let achieved = rank_of(&a.evaluate(&run.answer.assignment)?);
            let r = RunReport::new(id, "mixed-rank", format!("rank={}", run.answer.rank), vec![run.sub_run("mrank")], Default::default());
            Ok(r.with_oracle(format!("greedy={greedy}"), run.answer.rank == greedy && achieved == greedy))
        })?;
    }
    for (id, pair) in &corpus.pairs {
        index += 1;
        let c = instance_config(cfg, index);
        let truth = oracle_matroid_intersection(pair)?;
        record(&mut out, id, "matroid-intersect", || {
            let block = pair.block_matrix();
            let run = matroid_intersection_size(pair, &mut c.mixed_tape(&block, 0)?, &c)?;
            let r = RunReport::new(id, "matroid-intersect", format!("size={}", run.answer), vec![run.sub_run("mrank")], Default::default());
            Ok(r.with_oracle(truth.to_string(), run.answer == truth))
        })?;
    }
    for (id, p) in &corpus.pencils {
        index += 1;
        let c = instance_config(cfg, index);
        let big = FieldSpec::new(p.field(), p.field().modulus().min(1 << 30))?;
        let r_star = oracle_symbolic_rank(p, &big, SYMBOLIC_TRIALS, index)?;
        for (num, den) in [(1, 2), (1, 3)] {
            let params = ApproxParams::new(num, den)?;
            let algorithm = format!("edmonds-approx[{num}/{den}]");
            record(&mut out, id, &algorithm, || {
                let run = pencil_approx_rank(p, &mut c.pencil_tape(p, &params, 0)?, &c, &params)?;
                let rank = run.answer.rank;
                let achieved = rank_of(&p.evaluate(&run.answer.assignment)?);
                let r = RunReport::new(id, &algorithm, format!("rank={rank} l={}", run.answer.ell), vec![run.sub_run("ed")], Default::default());
                Ok(r.with_oracle(format!("r*={r_star} needs>={}", params.bound(r_star)), rank >= params.bound(r_star) && achieved == rank))
            })?;
        }
    }
    Ok(out)
}
