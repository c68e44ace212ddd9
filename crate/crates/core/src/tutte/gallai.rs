use serde::Serialize;

use super::{matching_size, Graph};
use crate::error::Result;
use crate::matrix::DeficiencySet;
use crate::params::RunConfig;
use crate::tape::{CatalyticTape, RunOutcome};

/// The Gallai-Edmonds partition `V = D + A + C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GallaiEdmonds {
    /// Vertices missed by some maximum matching.
    pub d: Vec<usize>,
    /// Neighbours of `D` outside `D`.
    pub a: Vec<usize>,
    pub c: Vec<usize>,
    /// Connected components of `G[D]`.
    pub d_components: Vec<Vec<usize>>,
    pub nu: usize,
}

impl GallaiEdmonds {
    /// Builds the partition from a deficiency set.
    pub fn from_deficiency(g: &Graph, d: &DeficiencySet, nu: usize) -> Self {
        let mut near = vec![false; g.n()];
        for v in d.iter() {
            g.neighbors(v).iter().for_each(|&w| near[w] = true);
        }
        let (mut a, mut c) = (Vec::new(), Vec::new());
        for v in (0..g.n()).filter(|&v| !d.contains(v)) {
            if near[v] {
                a.push(v);
            } else {
                c.push(v);
            }
        }
        let d = d.as_slice().to_vec();
        GallaiEdmonds { d_components: g.components_within(&d), d, a, c, nu }
    }
}

/// Gallai-Edmonds decomposition read off a max-rank Tutte assignment.
pub fn gallai_edmonds(g: &Graph, tape: &mut CatalyticTape, cfg: &RunConfig) -> Result<RunOutcome<GallaiEdmonds>> {
    let out = matching_size(g, tape, cfg)?;
    Ok(out.map(|ms| GallaiEdmonds::from_deficiency(g, &ms.deficiency, ms.nu)))
}
