use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use catamatch::edmonds::{matroid_matching_pencil, pencil_approx_rank, ApproxParams, MatrixPencil};
use catamatch::ffield::FieldElement;
use catamatch::harness::{
    generate, instance_config, oracle_gallai_edmonds, oracle_matroid_intersection, oracle_max_matching, reports_to_json,
    verify_all, Corpus, CorpusSize, GenKind, RunReport,
};
use catamatch::matrix::io::parse_matrix;
use catamatch::mixedrank::{matroid_intersection_size, mixed_max_rank, LinearMatroidPair, MixedMatrix};
use catamatch::pmsearch::{maximum_matching, perfect_matching};
use catamatch::tape::TapeSource;
use catamatch::tutte::{gallai_edmonds, matching_size, Graph};
use catamatch::{RunConfig, ScanStrategy};

#[derive(Parser)]
#[command(name = "catamatch", version, about = "Compress-or-compute matching and rank algorithms on a simulated catalytic tape")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Field modulus.
    #[arg(long, global = true, default_value_t = catamatch::ffield::DEFAULT_PRIME)]
    prime: u64,
    /// Size of the value set S = {0, ..., s-1}.
    #[arg(long, global = true)]
    value_set_size: Option<u64>,
    /// Number of tape blocks.
    #[arg(long, global = true)]
    blocks: Option<usize>,
    /// Seed for random tape content.
    #[arg(long, global = true, default_value_t = 0, conflicts_with = "tape_file")]
    tape_seed: u64,
    /// Read the initial tape content from this file.
    #[arg(long, global = true)]
    tape_file: Option<PathBuf>,
    /// Use N = n^3 blocks and s = n^10 (n^(2l+3) for pencils).
    #[arg(long, global = true)]
    paper_params: bool,
    /// Write the JSON report sidecar here.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Seed for instance generation and the symbolic-rank oracle.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Largest edge weight for perfect-matching search.
    #[arg(long, global = true)]
    w_max: Option<u64>,
    /// Recount every uniqueness claim by brute force.
    #[arg(long, global = true)]
    audit: bool,
    /// Search one value at a time instead of sweeping rank profiles.
    #[arg(long, global = true)]
    exhaustive_scan: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Maximum matching size and deficiency set.
    MatchingSize { graph: PathBuf },
    /// A maximum matching.
    Matching { graph: PathBuf },
    /// A perfect matching.
    Pm { graph: PathBuf },
    /// Gallai-Edmonds decomposition (D, A, C).
    GallaiEdmonds { graph: PathBuf },
    /// A max-rank Tutte assignment.
    Trank { graph: PathBuf },
    /// Maximum-rank completion of a mixed matrix ('?' marks an indeterminate).
    MixedRank { matrix: PathBuf },
    /// Largest common independent set of two linear matroids. With one
    /// file, it holds both matrices back to back.
    MatroidIntersect { first: PathBuf, second: Option<PathBuf> },
    /// (1 - eps)-approximate rank of a matrix pencil.
    EdmondsApprox {
        pencil: PathBuf,
        #[command(flatten)]
        approx: Approx,
    },
    /// Approximate matroid matching via the pencil of R T(x) R^T.
    MatroidMatching {
        repr: PathBuf,
        graph: PathBuf,
        #[command(flatten)]
        approx: Approx,
    },
    /// Run every algorithm over the corpus and compare with the oracles.
    VerifyAll {
        /// A small corpus instead of the full one.
        #[arg(long)]
        quick: bool,
    },
    /// Print a generated instance.
    Gen {
        #[command(subcommand)]
        kind: GenCommand,
    },
}

#[derive(Args)]
struct Approx {
    /// Approximation parameter, as a fraction "1/3" or a decimal.
    #[arg(long, default_value = "1/2")]
    epsilon: String,
    /// Force the tuple size (the approximation guarantee no longer holds).
    #[arg(long)]
    unsafe_ell: Option<usize>,
}

impl Approx {
    fn params(&self) -> anyhow::Result<ApproxParams> {
        let p = ApproxParams::parse(&self.epsilon)?;
        Ok(match self.unsafe_ell {
            Some(ell) => p.with_ell_override(ell)?,
            None => p,
        })
    }
}

#[derive(Subcommand)]
enum GenCommand {
    RandomGraph {
        n: usize,
        #[arg(default_value_t = 0.5)]
        p: f64,
    },
    PmGraph {
        n: usize,
        #[arg(default_value_t = 0.4)]
        p: f64,
    },
    Mixed {
        rows: usize,
        cols: usize,
        #[arg(default_value_t = 0.3)]
        density: f64,
    },
    MatroidPair { r1: usize, r2: usize, n: usize },
    Pencil {
        m: usize,
        n: usize,
        #[arg(default_value_t = 1)]
        summand_rank: usize,
    },
}

impl GenCommand {
    fn kind(&self) -> GenKind {
        match *self {
            GenCommand::RandomGraph { n, p } => GenKind::RandomGraph { n, p },
            GenCommand::PmGraph { n, p } => GenKind::PmGraph { n, p },
            GenCommand::Mixed { rows, cols, density } => GenKind::Mixed { rows, cols, density },
            GenCommand::MatroidPair { r1, r2, n } => GenKind::MatroidPair { r1, r2, n },
            GenCommand::Pencil { m, n, summand_rank } => GenKind::Pencil { m, n, summand_rank },
        }
    }
}

impl Global {
    fn config(&self) -> anyhow::Result<RunConfig> {
        let tape = match &self.tape_file {
            Some(path) => TapeSource::Bytes(std::fs::read(path).with_context(|| format!("reading {}", path.display()))?),
            None => TapeSource::Seed(self.tape_seed),
        };
        Ok(RunConfig {
            prime: self.prime,
            value_set_size: self.value_set_size,
            blocks: self.blocks,
            tape,
            paper_params: self.paper_params,
            w_max: self.w_max,
            check_restore: true,
            audit: self.audit,
            scan: if self.exhaustive_scan { ScanStrategy::Exhaustive } else { ScanStrategy::Sweep },
        })
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_graph(path: &Path) -> anyhow::Result<Graph> {
    Ok(Graph::parse(&read(path)?).with_context(|| format!("parsing graph {}", path.display()))?)
}

fn id_of(path: &Path) -> String {
    path.display().to_string()
}

fn one_based(vs: &[usize]) -> Vec<usize> {
    vs.iter().map(|v| v + 1).collect()
}

fn edge_list(g: &Graph, edges: &[usize]) -> String {
    let pairs: Vec<String> = edges.iter().map(|&e| { let (u, v) = g.edges()[e]; format!("{} {}", u + 1, v + 1) }).collect();
    pairs.join("\n")
}

fn values_line(values: &[FieldElement]) -> String {
    values.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Small graphs get an oracle answer alongside.
fn graph_oracle(g: &Graph) -> Option<usize> {
    (g.n() <= 16).then(|| oracle_max_matching(g).ok()).flatten()
}

fn run(cli: &Cli) -> anyhow::Result<Vec<RunReport>> {
    let cfg = cli.global.config()?;
    let start = Instant::now();
    let mut reports = Vec::new();
    match &cli.command {
        Command::MatchingSize { graph } | Command::Trank { graph } => {
            let g = read_graph(graph)?;
            let out = matching_size(&g, &mut cfg.tutte_tape(&g, 0)?, &cfg)?;
            let ms = &out.answer;
            let name = if matches!(cli.command, Command::Trank { .. }) { "trank" } else { "matching-size" };
            if name == "trank" {
                println!("assignment: {}", values_line(&ms.assignment));
                println!("rank: {}", 2 * ms.nu);
            } else {
                println!("nu: {}", ms.nu);
                println!("deficiency: {:?}", one_based(ms.deficiency.as_slice()));
            }
            let mut r = RunReport::new(id_of(graph), name, format!("nu={}", ms.nu), vec![out.sub_run("trank")], start.elapsed());
            if let Some(nu) = graph_oracle(&g) {
                r = r.with_oracle(nu.to_string(), nu == ms.nu);
            }
            reports.push(r);
        }
        Command::Matching { graph } => {
            let g = read_graph(graph)?;
            let out = maximum_matching(&g, &mut cfg.tutte_tape(&g, 0)?, &cfg)?;
            let mm = &out.answer;
            println!("size: {}", mm.nu);
            println!("{}", edge_list(&g, &mm.edges));
            let mut runs = vec![out.sub_run("trank")];
            runs.extend(mm.subruns.iter().cloned());
            let mut r = RunReport::new(id_of(graph), "matching", format!("size={}", mm.nu), runs, start.elapsed());
            if let Some(nu) = graph_oracle(&g) {
                r = r.with_oracle(nu.to_string(), g.is_matching(&mm.edges) && mm.edges.len() == nu);
            }
            reports.push(r);
        }
        Command::Pm { graph } => {
            let g = read_graph(graph)?;
            let out = perfect_matching(&g, &mut cfg.pm_tape(&g, 0)?, &cfg)?;
            let pm = &out.answer;
            match pm.weight {
                Some(w) => println!("w0: {w}"),
                None => println!("w0: none (compute branch)"),
            }
            println!("{}", edge_list(&g, &pm.edges));
            let mut runs: Vec<_> = pm.tutte.iter().cloned().collect();
            runs.push(out.sub_run("pm"));
            let r = RunReport::new(id_of(graph), "pm", format!("{} edges", pm.edges.len()), runs, start.elapsed())
                .with_oracle("perfect", g.is_perfect_matching(&pm.edges));
            reports.push(r);
        }
        Command::GallaiEdmonds { graph } => {
            let g = read_graph(graph)?;
            let out = gallai_edmonds(&g, &mut cfg.tutte_tape(&g, 0)?, &cfg)?;
            let ge = &out.answer;
            println!("D: {:?}", one_based(&ge.d));
            println!("A: {:?}", one_based(&ge.a));
            println!("C: {:?}", one_based(&ge.c));
            let text = format!("|D|={} |A|={} |C|={}", ge.d.len(), ge.a.len(), ge.c.len());
            let mut r = RunReport::new(id_of(graph), "gallai-edmonds", text, vec![out.sub_run("trank")], start.elapsed());
            if g.n() <= 12 {
                let t = oracle_gallai_edmonds(&g)?;
                r = r.with_oracle("enumeration", (&t.d, &t.a, &t.c) == (&ge.d, &ge.a, &ge.c));
            }
            reports.push(r);
        }
        Command::MixedRank { matrix } => {
            let a = MixedMatrix::parse(&read(matrix)?)?;
            let out = mixed_max_rank(&a, &mut cfg.mixed_tape(&a, 0)?, &cfg)?;
            println!("rank: {}", out.answer.rank);
            println!("assignment: {}", values_line(&out.answer.assignment));
            let r = RunReport::new(id_of(matrix), "mixed-rank", format!("rank={}", out.answer.rank), vec![out.sub_run("mrank")], start.elapsed());
            reports.push(r);
        }
        Command::MatroidIntersect { first, second } => {
            let pair = match second {
                Some(second) => LinearMatroidPair::new(parse_matrix(&read(first)?)?, parse_matrix(&read(second)?)?)?,
                None => LinearMatroidPair::parse(&read(first)?)?,
            };
            let block = pair.block_matrix();
            let out = matroid_intersection_size(&pair, &mut cfg.mixed_tape(&block, 0)?, &cfg)?;
            println!("size: {}", out.answer);
            let id = match second {
                Some(second) => format!("{}+{}", id_of(first), id_of(second)),
                None => id_of(first),
            };
            let mut r = RunReport::new(id, "matroid-intersect", format!("size={}", out.answer), vec![out.sub_run("mrank")], start.elapsed());
            if pair.ground_size() <= 20 {
                let truth = oracle_matroid_intersection(&pair)?;
                r = r.with_oracle(truth.to_string(), truth == out.answer);
            }
            reports.push(r);
        }
        Command::EdmondsApprox { pencil, approx } => {
            let p = MatrixPencil::parse(&read(pencil)?)?;
            reports.push(pencil_report(&p, approx, &cfg, id_of(pencil), "edmonds-approx", 1, start)?);
        }
        Command::MatroidMatching { repr, graph, approx } => {
            let g = read_graph(graph)?;
            let p = matroid_matching_pencil(&parse_matrix(&read(repr)?)?, &g)?;
            reports.push(pencil_report(&p, approx, &cfg, id_of(graph), "matroid-matching", 2, start)?);
        }
        Command::VerifyAll { quick } => {
            let size = if *quick { CorpusSize::QUICK } else { CorpusSize::FULL };
            let corpus = Corpus::build(size, cfg.field()?)?;
            println!("corpus {}", corpus.fingerprint());
            reports = verify_all(&corpus, &instance_config(&cfg, cli.global.seed))?;
            for r in &reports {
                println!("{}", r.line());
            }
            let failed = reports.iter().filter(|r| !r.passed()).count();
            println!("{} runs, {} failed", reports.len(), failed);
            return Ok(reports);
        }
        Command::Gen { kind } => {
            let inst = generate(&kind.kind(), cfg.field()?, cli.global.seed)?;
            print!("{}", inst.to_text());
            // the instance itself is the output; no report line
            return Ok(vec![RunReport::new(format!("seed {}", cli.global.seed), "gen", format!("{:?}", kind.kind()), vec![], start.elapsed())]);
        }
    }
    for r in &reports {
        println!("{}", r.line());
    }
    Ok(reports)
}

/// `per_unit` divides the rank (2 for matroid matching).
fn pencil_report(
    p: &MatrixPencil,
    approx: &Approx,
    cfg: &RunConfig,
    id: String,
    name: &str,
    per_unit: usize,
    start: Instant,
) -> anyhow::Result<RunReport> {
    let params = approx.params()?;
    if params.is_overridden() {
        eprintln!("warning: tuple size forced to {}; the (1 - eps) guarantee does not apply", params.ell());
    }
    let out = pencil_approx_rank(p, &mut cfg.pencil_tape(p, &params, 0)?, cfg, &params)?;
    let value = out.answer.rank / per_unit;
    println!("{}: {value}", if per_unit == 1 { "rank" } else { "size" });
    println!("l: {} c: {}", out.answer.ell, params.c());
    println!("assignment: {}", values_line(&out.answer.assignment));
    Ok(RunReport::new(id, name, format!("{value} (eps={})", approx.epsilon), vec![out.sub_run("ed")], start.elapsed()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let reports = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    if let Some(path) = &cli.global.report {
        if let Err(e) = std::fs::write(path, reports_to_json(&reports)) {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if reports.iter().all(RunReport::passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_is_well_formed() {
        Cli::command().debug_assert();
    }

    #[test]
    fn approx_flags() {
        let a = Approx { epsilon: "1/3".into(), unsafe_ell: None };
        assert_eq!(a.params().unwrap().ell(), 2);
        let a = Approx { epsilon: "0.5".into(), unsafe_ell: Some(3) };
        assert!(a.params().unwrap().is_overridden());
    }
}
