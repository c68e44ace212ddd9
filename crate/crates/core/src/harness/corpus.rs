//! The named instances and the seeded random sets used by `verify-all` and
//! the acceptance suite.

use sha2::{Digest, Sha256};

use super::generate::{matroid_pair, pm_graph, random_graph, random_mixed, random_pencil};
use crate::edmonds::MatrixPencil;
use crate::error::Result;
use crate::ffield::PrimeField;
use crate::mixedrank::{LinearMatroidPair, MixedMatrix};
use crate::tutte::Graph;

/// P3, C3 to C7, K4, K5 and the Petersen graph.
pub fn named_graphs() -> Vec<(String, Graph)> {
    let mut out = vec![("P3".to_string(), Graph::path(3))];
    out.extend((3..=7).map(|k| (format!("C{k}"), Graph::cycle(k))));
    out.push(("K4".into(), Graph::complete(4)));
    out.push(("K5".into(), Graph::complete(5)));
    out.push(("Petersen".into(), Graph::petersen()));
    out
}

/// How many instances of each family to draw.
#[derive(Clone, Copy, Debug)]
pub struct CorpusSize {
    pub graphs: u64,
    pub pm_graphs: u64,
    pub mixed: u64,
    pub pairs: u64,
    pub pencils: u64,
}

impl CorpusSize {
    pub const FULL: CorpusSize = CorpusSize { graphs: 200, pm_graphs: 100, mixed: 100, pairs: 50, pencils: 50 };
    pub const QUICK: CorpusSize = CorpusSize { graphs: 20, pm_graphs: 10, mixed: 10, pairs: 5, pencils: 5 };
}

#[derive(Clone, Debug)]
pub struct Corpus {
    pub graphs: Vec<(String, Graph)>,
    pub pm_graphs: Vec<(String, Graph)>,
    pub mixed: Vec<(String, MixedMatrix)>,
    pub pairs: Vec<(String, LinearMatroidPair)>,
    pub pencils: Vec<(String, MatrixPencil)>,
}

impl Corpus {
    /// Seeds run from 1. Random graphs have `n <= 10`, PM graphs `n <= 12`,
    /// mixed matrices at most 8x8, matroid pairs at most 10 elements and
    /// pencils `n <= 8`, `m <= 5`.
    pub fn build(size: CorpusSize, field: PrimeField) -> Result<Self> {
        let mut graphs = named_graphs();
        for seed in 1..=size.graphs {
            let n = 2 + (seed % 9) as usize;
            let p = 0.2 + 0.1 * (seed % 6) as f64;
            graphs.push((format!("random-graph#{seed}"), random_graph(n, p, seed)?));
        }
        let pm_graphs = (1..=size.pm_graphs)
            .map(|seed| {
                let n = 2 * (1 + (seed % 6) as usize);
                Ok((format!("pm-graph#{seed}"), pm_graph(n, 0.4, seed)?))
            })
            .collect::<Result<_>>()?;
        let mixed = (1..=size.mixed)
            .map(|seed| {
                let (r, c) = (1 + (seed % 8) as usize, 1 + (seed * 3 % 8) as usize);
                Ok((format!("mixed#{seed}"), random_mixed(r, c, 0.35, field, seed)?))
            })
            .collect::<Result<_>>()?;
        let pairs = (1..=size.pairs)
            .map(|seed| {
                let n = 2 + (seed % 9) as usize;
                let (r1, r2) = (1 + (seed % 4) as usize, 1 + (seed * 7 % 5) as usize);
                Ok((format!("matroid-pair#{seed}"), matroid_pair(r1, r2, n, field, seed)?))
            })
            .collect::<Result<_>>()?;
        let pencils = (1..=size.pencils)
            .map(|seed| {
                let n = 2 + (seed % 7) as usize;
                let m = 1 + (seed % 5) as usize;
                let rank = 1 + (seed % 2) as usize;
                Ok((format!("pencil#{seed}"), random_pencil(m, n, rank.min(n), field, seed)?))
            })
            .collect::<Result<_>>()?;
        Ok(Corpus { graphs, pm_graphs, mixed, pairs, pencils })
    }

    /// SHA-256 over every instance's text form, in order.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        let texts = self
            .graphs
            .iter()
            .chain(&self.pm_graphs)
            .map(|(id, g)| (id, g.to_text()))
            .chain(self.mixed.iter().map(|(id, m)| (id, m.to_text())))
            .chain(self.pencils.iter().map(|(id, p)| (id, p.to_text())));
        for (id, text) in texts {
            h.update(id.as_bytes());
            h.update(text.as_bytes());
        }
        for (id, pair) in &self.pairs {
            h.update(id.as_bytes());
            h.update(pair.to_text().as_bytes());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::DEFAULT_PRIME;

    #[test]
    fn corpus_is_reproducible() {
        let f = PrimeField::new(DEFAULT_PRIME).unwrap();
        let a = Corpus::build(CorpusSize::QUICK, f).unwrap();
        let b = Corpus::build(CorpusSize::QUICK, f).unwrap();
        assert_eq!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.graphs.len(), 9 + 20);
        assert!(a.graphs.iter().all(|(_, g)| g.n() <= 10));
    }
}
