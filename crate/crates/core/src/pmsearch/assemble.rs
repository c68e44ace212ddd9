use serde::Serialize;

use super::perfect_matching;
use crate::error::{Error, Result};
use crate::matrix::{rank_of, DenseMatrix};
use crate::mixedrank::{mixed_max_rank, MixedMatrix};
use crate::params::RunConfig;
use crate::tape::{CatalyticTape, RunOutcome, SubRun};
use crate::tutte::{gallai_edmonds, Graph};

/// Maximum bipartite matching as indices into the input edge list.
#[derive(Clone, Debug, Serialize)]
pub struct BipartiteMatching {
    pub pairs: Vec<usize>,
    pub subruns: Vec<SubRun>,
}

// indices i where the first i+1 lines have larger rank than the first i
fn prefix_jumps(m: &DenseMatrix, by_cols: bool) -> Vec<usize> {
    let (len, all_rows, all_cols): (usize, Vec<usize>, Vec<usize>) =
        (if by_cols { m.cols() } else { m.rows() }, (0..m.rows()).collect(), (0..m.cols()).collect());
    let mut out = Vec::new();
    let mut prev = 0;
    for i in 0..len {
        let prefix: Vec<usize> = (0..=i).collect();
        let r = if by_cols { rank_of(&m.submatrix(&all_rows, &prefix)) } else { rank_of(&m.submatrix(&prefix, &all_cols)) };
        if r > prev {
            out.push(i);
            prev = r;
        }
    }
    out
}

/// Maximum matching between left `0..left` and right `0..right`.
///
/// A max-rank evaluation `B'` of the symbolic biadjacency matrix fixes a
/// nonsingular square submatrix (columns by prefix rank, then rows by
/// prefix rank within them); its support has a perfect matching, which is
/// found by the perfect-matching search.
pub fn bipartite_max_matching(left: usize, right: usize, edges: &[(usize, usize)], cfg: &RunConfig) -> Result<BipartiteMatching> {
    let field = cfg.field()?;
    if edges.is_empty() {
        return Ok(BipartiteMatching { pairs: vec![], subruns: vec![] });
    }
    let mut pattern = DenseMatrix::zeros(field, left, right);
    for &(a, b) in edges {
        pattern.set(a, b, field.one());
    }
    let symbolic = MixedMatrix::generic(&pattern);
    let mut tape = cfg.mixed_tape(&symbolic, 2)?;
    let completion = mixed_max_rank(&symbolic, &mut tape, cfg)?;
    let mut subruns = vec![completion.sub_run("bipartite completion")];
    let b = symbolic.evaluate(&completion.answer.assignment)?;
    let cols = prefix_jumps(&b, true);
    let all_rows: Vec<usize> = (0..left).collect();
    let rows: Vec<usize> = prefix_jumps(&b.submatrix(&all_rows, &cols), false);
    let r = rows.len();
    let mut local = Vec::new();
    let mut origin = Vec::new();
    for (k, &(a, c)) in edges.iter().enumerate() {
        if let (Ok(i), Ok(j)) = (rows.binary_search(&a), cols.binary_search(&c)) {
            local.push((i, r + j));
            origin.push(((i, r + j), k));
        }
    }
    let sub = Graph::new(2 * r, &local)?;
    let mut pm_tape = cfg.pm_tape(&sub, 3)?;
    let pm = perfect_matching(&sub, &mut pm_tape, cfg)?;
    if let Some(t) = &pm.answer.tutte {
        subruns.push(t.clone());
    }
    subruns.push(pm.sub_run("bipartite pm"));
    origin.sort_unstable();
    let pairs = pm
        .answer
        .edges
        .iter()
        .map(|&e| {
            let key = sub.edge(e);
            origin[origin.binary_search_by(|p| p.0.cmp(&key)).expect("edge came from the input")].1
        })
        .collect();
    Ok(BipartiteMatching { pairs, subruns })
}

/// A maximum matching and every catalytic run behind it.
#[derive(Clone, Debug, Serialize)]
pub struct MaximumMatching {
    pub edges: Vec<usize>,
    pub nu: usize,
    pub subruns: Vec<SubRun>,
}

/// Maximum matching of `g`: a perfect matching of `G[C]`, a matching of `A`
/// into distinct components of `G[D]`, and near-perfect matchings of each
/// component avoiding its chosen vertex. `tape` serves the decomposition.
pub fn maximum_matching(g: &Graph, tape: &mut CatalyticTape, cfg: &RunConfig) -> Result<RunOutcome<MaximumMatching>> {
    let ge = gallai_edmonds(g, tape, cfg)?;
    let part = ge.answer.clone();
    let mut subruns = vec![ge.sub_run("gallai-edmonds")];
    let mut edges = Vec::new();
    let pm_of = |vertices: &[usize], label: &str, subruns: &mut Vec<SubRun>, edges: &mut Vec<usize>| -> Result<()> {
        if vertices.is_empty() {
            return Ok(());
        }
        let (sub, map) = g.induced(vertices);
        let mut t = cfg.pm_tape(&sub, 0)?;
        let pm = perfect_matching(&sub, &mut t, cfg)?;
        if let Some(tr) = &pm.answer.tutte {
            subruns.push(SubRun { label: format!("{label} trank"), ..tr.clone() });
        }
        subruns.push(pm.sub_run(label));
        edges.extend(pm.answer.edges.iter().map(|&e| map[e]));
        Ok(())
    };
    pm_of(&part.c, "C pm", &mut subruns, &mut edges)?;

    let mut comp_of = vec![usize::MAX; g.n()];
    for (i, comp) in part.d_components.iter().enumerate() {
        comp.iter().for_each(|&v| comp_of[v] = i);
    }
    let mut links: Vec<(usize, usize)> = Vec::new();
    for (ai, &a) in part.a.iter().enumerate() {
        for &w in g.neighbors(a) {
            if comp_of[w] != usize::MAX {
                links.push((ai, comp_of[w]));
            }
        }
    }
    links.sort_unstable();
    links.dedup();
    let bip = bipartite_max_matching(part.a.len(), part.d_components.len(), &links, cfg)?;
    subruns.extend(bip.subruns);
    let mut chosen: Vec<Option<usize>> = vec![None; part.d_components.len()];
    for &k in &bip.pairs {
        let (ai, ci) = links[k];
        let a = part.a[ai];
        let d = *part.d_components[ci].iter().find(|&&d| g.has_edge(a, d)).expect("link has an edge");
        edges.push(g.edge_index(a, d).expect("edge exists"));
        chosen[ci] = Some(d);
    }
    for (ci, comp) in part.d_components.iter().enumerate() {
        let skip = chosen[ci].unwrap_or(comp[0]);
        let rest: Vec<usize> = comp.iter().copied().filter(|&v| v != skip).collect();
        pm_of(&rest, "D pm", &mut subruns, &mut edges)?;
    }
    edges.sort_unstable();
    if !g.is_matching(&edges) || edges.len() != part.nu {
        return Err(Error::LemmaViolation(format!(
            "assembled {} edges (matching: {}) for nu = {}",
            edges.len(),
            g.is_matching(&edges),
            part.nu
        )));
    }
    Ok(ge.map(|_| MaximumMatching { edges, nu: part.nu, subruns }))
}
