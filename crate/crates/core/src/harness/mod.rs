//! Oracles, instance generators, the named corpus and run reports.

pub mod corpus;
pub mod generate;
pub mod oracle;
pub mod report;
pub mod verify;

pub use corpus::{named_graphs, Corpus, CorpusSize};
pub use generate::{generate, matroid_pair, pm_graph, random_graph, random_mixed, random_pencil, GenKind, Instance};
pub use oracle::{
    oracle_bipartite_matching, oracle_gallai_edmonds, oracle_matroid_intersection, oracle_max_matching,
    oracle_symbolic_rank, SymbolicMatrix,
};
pub use report::{reports_to_json, RunReport};
pub use verify::{instance_config, verify_all, SYMBOLIC_TRIALS};
