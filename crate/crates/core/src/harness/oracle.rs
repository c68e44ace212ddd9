//! Enumeration oracles. None of them shares code with the algorithms they
//! check, apart from `rank_of` in the symbolic-rank estimate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::ffield::{FieldElement, FieldSpec};
use crate::matrix::{rank_of, DenseMatrix};
use crate::mixedrank::{LinearMatroidPair, MixedMatrix};
use crate::tutte::{GallaiEdmonds, Graph};

fn adjacency_masks(g: &Graph) -> Vec<u32> {
    let mut adj = vec![0u32; g.n()];
    for &(u, v) in g.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    adj
}

// largest matching inside the vertex set `free`
fn best(adj: &[u32], free: u32, memo: &mut std::collections::HashMap<u32, usize>) -> usize {
    if free.count_ones() < 2 {
        return 0;
    }
    if let Some(&v) = memo.get(&free) {
        return v;
    }
    let v = free.trailing_zeros() as usize;
    let rest = free & !(1 << v);
    let mut out = best(adj, rest, memo);
    let mut nbrs = adj[v] & rest;
    while nbrs != 0 {
        let w = nbrs.trailing_zeros();
        nbrs &= nbrs - 1;
        out = out.max(1 + best(adj, rest & !(1 << w), memo));
    }
    memo.insert(free, out);
    out
}

/// `nu(G)` by exhaustive search; `n <= 16`.
pub fn oracle_max_matching(g: &Graph) -> Result<usize> {
    if g.n() > 16 {
        return invalid(format!("matching oracle handles at most 16 vertices, got {}", g.n()));
    }
    let all = if g.n() == 0 { 0 } else { u32::MAX >> (32 - g.n()) };
    Ok(best(&adjacency_masks(g), all, &mut Default::default()))
}

// covered-vertex masks of every matching of size `target` in `free`
fn covers(adj: &[u32], free: u32, target: usize, covered: u32, out: &mut Vec<u32>) {
    if target == 0 {
        out.push(covered);
        return;
    }
    if (free.count_ones() as usize) < 2 * target {
        return;
    }
    let v = free.trailing_zeros() as usize;
    let rest = free & !(1 << v);
    covers(adj, rest, target, covered, out);
    let mut nbrs = adj[v] & rest;
    while nbrs != 0 {
        let w = nbrs.trailing_zeros();
        nbrs &= nbrs - 1;
        covers(adj, rest & !(1 << w), target - 1, covered | 1 << v | 1 << w, out);
    }
}

/// Gallai-Edmonds partition by listing every maximum matching; `n <= 12`.
pub fn oracle_gallai_edmonds(g: &Graph) -> Result<GallaiEdmonds> {
    if g.n() > 12 {
        return invalid(format!("Gallai-Edmonds oracle handles at most 12 vertices, got {}", g.n()));
    }
    let adj = adjacency_masks(g);
    let nu = oracle_max_matching(g)?;
    let all = if g.n() == 0 { 0 } else { u32::MAX >> (32 - g.n()) };
    let mut masks = Vec::new();
    covers(&adj, all, nu, 0, &mut masks);
    let missed = masks.iter().fold(0u32, |acc, &m| acc | (all & !m));
    let d: Vec<usize> = (0..g.n()).filter(|v| missed >> v & 1 == 1).collect();
    let a: Vec<usize> = (0..g.n()).filter(|&v| missed >> v & 1 == 0 && adj[v] & missed != 0).collect();
    let c: Vec<usize> = (0..g.n()).filter(|&v| missed >> v & 1 == 0 && adj[v] & missed == 0).collect();
    Ok(GallaiEdmonds { d_components: g.components_within(&d), d, a, c, nu })
}

/// Maximum bipartite matching by augmenting paths; `edges` join left
/// `0..left` to right `0..right`.
pub fn oracle_bipartite_matching(left: usize, right: usize, edges: &[(usize, usize)]) -> usize {
    let mut adj = vec![Vec::new(); left];
    for &(a, b) in edges {
        adj[a].push(b);
    }
    let mut owner = vec![usize::MAX; right];
    fn augment(a: usize, adj: &[Vec<usize>], owner: &mut [usize], seen: &mut [bool]) -> bool {
        for &b in &adj[a] {
            if !seen[b] {
                seen[b] = true;
                if owner[b] == usize::MAX || augment(owner[b], adj, owner, seen) {
                    owner[b] = a;
                    return true;
                }
            }
        }
        false
    }
    (0..left).filter(|&a| augment(a, &adj, &mut owner, &mut vec![false; right])).count()
}

/// Largest common independent set by trying every subset; ground set
/// at most 20.
pub fn oracle_matroid_intersection(pair: &LinearMatroidPair) -> Result<usize> {
    let n = pair.ground_size();
    if n > 20 {
        return invalid(format!("intersection oracle handles at most 20 elements, got {n}"));
    }
    let independent = |m: &DenseMatrix, cols: &[usize]| {
        let rows: Vec<usize> = (0..m.rows()).collect();
        rank_of(&m.submatrix(&rows, cols)) == cols.len()
    };
    let mut out = 0;
    for mask in 0u32..1 << n {
        let size = mask.count_ones() as usize;
        if size <= out {
            continue;
        }
        let cols: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
        if independent(pair.first(), &cols) && independent(pair.second(), &cols) {
            out = size;
        }
    }
    Ok(out)
}

/// Anything whose rank can be sampled at a point.
pub trait SymbolicMatrix {
    fn num_vars(&self) -> usize;
    fn evaluate_at(&self, values: &[FieldElement]) -> Result<DenseMatrix>;
}

impl SymbolicMatrix for MixedMatrix {
    fn num_vars(&self) -> usize {
        MixedMatrix::num_vars(self)
    }

    fn evaluate_at(&self, values: &[FieldElement]) -> Result<DenseMatrix> {
        self.evaluate(values)
    }
}

/// Largest rank over `trials` uniform draws from `S`. A lower bound on the
/// symbolic rank; a single draw misses it with probability at most
/// `deg / |S|`.
pub fn oracle_symbolic_rank<M: SymbolicMatrix + ?Sized>(obj: &M, spec: &FieldSpec, trials: usize, seed: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    for _ in 0..trials {
        let values: Vec<FieldElement> =
            (0..obj.num_vars()).map(|_| spec.field.elem(rng.gen_range(0..spec.value_set_size()))).collect();
        best = best.max(rank_of(&obj.evaluate_at(&values)?));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::{PrimeField, DEFAULT_PRIME};

    #[test]
    fn matching_oracle_examples() {
        assert_eq!(oracle_max_matching(&Graph::path(3)).unwrap(), 1);
        assert_eq!(oracle_max_matching(&Graph::complete(4)).unwrap(), 2);
        assert_eq!(oracle_max_matching(&Graph::petersen()).unwrap(), 5);
        assert_eq!(oracle_max_matching(&Graph::cycle(7)).unwrap(), 3);
        assert_eq!(oracle_max_matching(&Graph::empty(0)).unwrap(), 0);
        assert!(oracle_max_matching(&Graph::empty(17)).is_err());
    }

    #[test]
    fn gallai_edmonds_oracle_examples() {
        let p3 = oracle_gallai_edmonds(&Graph::path(3)).unwrap();
        assert_eq!((p3.d, p3.a, p3.c), (vec![0, 2], vec![1], vec![]));
        let k4 = oracle_gallai_edmonds(&Graph::complete(4)).unwrap();
        assert_eq!((k4.d.len(), k4.c.len()), (0, 4));
        assert_eq!(oracle_gallai_edmonds(&Graph::cycle(5)).unwrap().d.len(), 5);
    }

    #[test]
    fn bipartite_and_rank_oracles() {
        assert_eq!(oracle_bipartite_matching(1, 3, &[(0, 0), (0, 1), (0, 2)]), 1);
        assert_eq!(oracle_bipartite_matching(2, 2, &[(0, 0), (0, 1), (1, 0), (1, 1)]), 2);
        assert_eq!(oracle_bipartite_matching(3, 2, &[(0, 0), (1, 0), (2, 0), (2, 1)]), 2);
        let f = PrimeField::new(DEFAULT_PRIME).unwrap();
        let spec = FieldSpec::new(f, 1 << 20).unwrap();
        let m = MixedMatrix::parse("2 2 2147483647\n? 1\n1 1\n").unwrap();
        assert_eq!(oracle_symbolic_rank(&m, &spec, 30, 1).unwrap(), 2);
    }
}
