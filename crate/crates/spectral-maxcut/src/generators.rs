//! Graph constructors for experiments and for the test corpora: named
//! small graphs, seeded random families, planted near-bipartite instances,
//! and an exhaustive enumerator of connected graphs on up to 8 vertices
//! (one representative per isomorphism class).

use rand::{rngs::StdRng, Rng, SeedableRng};
use std::collections::HashSet;

use crate::graph::{WeightMode, WeightedGraph};
use crate::{Error, Result};

pub fn cycle(n: usize) -> WeightedGraph {
    assert!(n >= 3);
    let edges = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
    WeightedGraph::new(n, edges, WeightMode::MaxCut).unwrap()
}

pub fn path(n: usize) -> WeightedGraph {
    assert!(n >= 2);
    let edges = (0..n - 1).map(|i| (i, i + 1, 1.0)).collect();
    WeightedGraph::new(n, edges, WeightMode::MaxCut).unwrap()
}

pub fn complete(n: usize) -> WeightedGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            edges.push((u, v, 1.0));
        }
    }
    WeightedGraph::new(n, edges, WeightMode::MaxCut).unwrap()
}

/// Star `K_{1,k}`: vertex 0 is the center.
pub fn star(k: usize) -> WeightedGraph {
    let edges = (1..=k).map(|i| (0, i, 1.0)).collect();
    WeightedGraph::new(k + 1, edges, WeightMode::MaxCut).unwrap()
}

pub fn petersen() -> WeightedGraph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5, 1.0)); // outer cycle
        edges.push((5 + i, 5 + (i + 2) % 5, 1.0)); // inner pentagram
        edges.push((i, 5 + i, 1.0)); // spokes
    }
    WeightedGraph::new(10, edges, WeightMode::MaxCut).unwrap()
}

/// Erdős–Rényi graph with unit weights.
pub fn gnp(n: usize, p: f64, seed: u64) -> WeightedGraph {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                edges.push((u, v, 1.0));
            }
        }
    }
    WeightedGraph::new(n, edges, WeightMode::MaxCut).unwrap()
}

/// Erdős–Rényi graph with weights uniform in `(0, max_w]`.
pub fn gnp_weighted(n: usize, p: f64, max_w: f64, seed: u64) -> WeightedGraph {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                let w: f64 = rng.gen_range(0.0..max_w);
                edges.push((u, v, max_w - w));
            }
        }
    }
    WeightedGraph::new(n, edges, WeightMode::MaxCut).unwrap()
}

/// Erdős–Rényi graph with signed weights uniform in `[-1, 1]`.
pub fn gnp_signed(n: usize, p: f64, seed: u64) -> WeightedGraph {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                edges.push((u, v, rng.gen_range(-1.0..=1.0)));
            }
        }
    }
    WeightedGraph::new(n, edges, WeightMode::Gain).unwrap()
}

/// Random bipartite graph with planted noise: `crossing` distinct edges
/// between the two sides plus `noise` distinct edges inside the sides.
///
/// Returns the graph together with the planted upper bound on `ε`
/// (the optimum cuts at least a `1 - ε` fraction of edges, witnessed by
/// the planted bipartition).
pub fn planted_bipartite(
    n_left: usize,
    n_right: usize,
    crossing: usize,
    noise: usize,
    seed: u64,
) -> (WeightedGraph, f64) {
    assert!(crossing <= n_left * n_right, "too many crossing edges");
    let mut rng = StdRng::seed_from_u64(seed);
    let n = n_left + n_right;
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    while edges.len() < crossing {
        let u = rng.gen_range(0..n_left);
        let v = n_left + rng.gen_range(0..n_right);
        if seen.insert((u, v)) {
            edges.push((u, v, 1.0));
        }
    }
    let mut placed = 0;
    while placed < noise {
        let inside_left = rng.gen_bool(0.5);
        let (lo, hi) = if inside_left { (0, n_left) } else { (n_left, n) };
        if hi - lo < 2 {
            continue;
        }
        let a = rng.gen_range(lo..hi);
        let b = rng.gen_range(lo..hi);
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        if seen.insert(key) {
            edges.push((key.0, key.1, 1.0));
            placed += 1;
        }
    }
    let eps = noise as f64 / (crossing + noise) as f64;
    (
        WeightedGraph::new(n, edges, WeightMode::MaxCut).unwrap(),
        eps,
    )
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration of small graphs up to isomorphism.
//
// Graphs on n <= 8 vertices are bitmasks over vertex pairs. Each level is
// produced by attaching a new vertex to every representative of the
// previous level with every possible neighborhood, then deduplicating by
// canonical form. The canonical form is the minimum adjacency bitmask over
// all permutations consistent with an equitable vertex coloring, which is
// exact (never merges non-isomorphic graphs, never splits a class).
// ---------------------------------------------------------------------------

const MAX_ENUM_N: usize = 8;

#[inline]
fn pair_index(i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    j * (j - 1) / 2 + i
}

fn mask_edges(mask: u32, n: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for j in 1..n {
        for i in 0..j {
            if mask >> pair_index(i, j) & 1 == 1 {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// Equitable refinement: start from a uniform coloring and repeatedly
/// rank vertices by (own color, sorted neighbor colors) until stable.
/// The resulting ranks are isomorphism-invariant.
fn refine_colors(mask: u32, n: usize) -> Vec<usize> {
    let mut nbr: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, j) in mask_edges(mask, n) {
        nbr[i].push(j);
        nbr[j].push(i);
    }
    let mut color = vec![0usize; n];
    let mut classes = 1usize;
    loop {
        let mut keys: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut around: Vec<usize> = nbr[v].iter().map(|&u| color[u]).collect();
                around.sort_unstable();
                (color[v], around)
            })
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        sorted.dedup();
        let new_classes = sorted.len();
        for v in 0..n {
            color[v] = sorted.binary_search(&keys[v]).unwrap();
        }
        keys.clear();
        if new_classes == classes {
            return color;
        }
        classes = new_classes;
    }
}

/// Minimum adjacency bitmask over all colour-respecting relabelings.
fn canonical_form(mask: u32, n: usize) -> u32 {
    if n <= 1 {
        return 0;
    }
    let color = refine_colors(mask, n);
    // Cells ordered by color rank; relabeling assigns consecutive new ids
    // cell by cell.
    let mut cells: Vec<Vec<usize>> = Vec::new();
    let max_color = *color.iter().max().unwrap();
    for c in 0..=max_color {
        let cell: Vec<usize> = (0..n).filter(|&v| color[v] == c).collect();
        if !cell.is_empty() {
            cells.push(cell);
        }
    }
    let edges = mask_edges(mask, n);
    let mut best = u32::MAX;
    let mut perm = vec![0usize; n];
    permute_cells(&cells, 0, &mut perm, &mut |perm| {
        let mut remapped = 0u32;
        for &(i, j) in &edges {
            let (a, b) = (perm[i], perm[j]);
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            remapped |= 1 << pair_index(a, b);
        }
        if remapped < best {
            best = remapped;
        }
    });
    best
}

/// Enumerate all relabelings that keep each cell's vertices in that
/// cell's block of new ids, invoking `f` with `perm[old] = new`.
fn permute_cells(
    cells: &[Vec<usize>],
    cell_idx: usize,
    perm: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if cell_idx == cells.len() {
        f(perm);
        return;
    }
    let base: usize = cells[..cell_idx].iter().map(|c| c.len()).sum();
    let cell = &cells[cell_idx];
    let mut order: Vec<usize> = (0..cell.len()).collect();
    loop {
        for (offset, &pos) in order.iter().enumerate() {
            perm[cell[pos]] = base + offset;
        }
        permute_cells(cells, cell_idx + 1, perm, f);
        if !next_permutation(&mut order) {
            break;
        }
    }
}

fn next_permutation(arr: &mut [usize]) -> bool {
    if arr.len() < 2 {
        return false;
    }
    let mut i = arr.len() - 1;
    while i > 0 && arr[i - 1] >= arr[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = arr.len() - 1;
    while arr[j] <= arr[i - 1] {
        j -= 1;
    }
    arr.swap(i - 1, j);
    arr[i..].reverse();
    true
}

fn is_connected_mask(mask: u32, n: usize) -> bool {
    if n <= 1 {
        return true;
    }
    let mut adj = vec![0u8; n * n];
    for (i, j) in mask_edges(mask, n) {
        adj[i * n + j] = 1;
        adj[j * n + i] = 1;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for u in 0..n {
            if adj[v * n + u] == 1 && !seen[u] {
                seen[u] = true;
                count += 1;
                stack.push(u);
            }
        }
    }
    count == n
}

/// Canonical bitmasks of all graphs on exactly `n` vertices.
fn all_graph_masks(n: usize) -> Vec<u32> {
    let mut level: Vec<u32> = vec![0]; // the 1-vertex graph
    for k in 1..n {
        // Attach vertex k to every representative with every neighborhood.
        let mut next: HashSet<u32> = HashSet::new();
        for &mask in &level {
            for nbhd in 0u32..(1 << k) {
                let mut ext = mask;
                for i in 0..k {
                    if nbhd >> i & 1 == 1 {
                        ext |= 1 << pair_index(i, k);
                    }
                }
                next.insert(canonical_form(ext, k + 1));
            }
        }
        let mut v: Vec<u32> = next.into_iter().collect();
        v.sort_unstable();
        level = v;
    }
    level
}

/// All connected graphs on exactly `n` vertices, one per isomorphism
/// class, with unit edge weights. Supported for `n <= 8`.
pub fn connected_graphs(n: usize) -> Result<Vec<WeightedGraph>> {
    if n == 0 || n > MAX_ENUM_N {
        return Err(Error::TooLarge {
            n,
            limit: MAX_ENUM_N,
        });
    }
    let graphs = all_graph_masks(n)
        .into_iter()
        .filter(|&m| is_connected_mask(m, n))
        .map(|m| {
            let edges = mask_edges(m, n)
                .into_iter()
                .map(|(i, j)| (i, j, 1.0))
                .collect();
            WeightedGraph::new(n, edges, WeightMode::MaxCut).unwrap()
        })
        .collect();
    Ok(graphs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_graphs() {
        assert_eq!(cycle(5).m(), 5);
        assert_eq!(path(4).m(), 3);
        assert_eq!(complete(5).m(), 10);
        assert_eq!(star(4).n(), 5);
        let p = petersen();
        assert_eq!((p.n(), p.m()), (10, 15));
        assert!(p.deg().iter().all(|&d| d == 3.0));
    }

    #[test]
    fn planted_instance_eps() {
        let (g, eps) = planted_bipartite(20, 20, 100, 10, 3);
        assert_eq!(g.m(), 110);
        assert!((eps - 10.0 / 110.0).abs() < 1e-12);
        // The planted bipartition cuts all crossing edges.
        let side: Vec<u8> = (0..40).map(|v| if v < 20 { 0 } else { 1 }).collect();
        let (w, _) = crate::graph::evaluate_cut(&g, &side);
        assert!(w >= 100.0);
    }

    #[test]
    fn canonical_form_invariant_under_relabeling() {
        // P3 as 0-1-2 versus 1-0-2 (relabeled): same canonical form.
        let a = (1 << pair_index(0, 1)) | (1 << pair_index(1, 2));
        let b = (1 << pair_index(0, 1)) | (1 << pair_index(0, 2));
        assert_eq!(canonical_form(a, 3), canonical_form(b, 3));
        // P3 versus K2 + isolated vertex: different.
        let c = 1 << pair_index(0, 1);
        assert_ne!(canonical_form(a, 3), canonical_form(c, 3));
    }

    #[test]
    fn enumeration_matches_known_counts() {
        // Graphs on n vertices up to isomorphism, then connected ones.
        let all: Vec<usize> = (1..=6).map(|n| all_graph_masks(n).len()).collect();
        assert_eq!(all, vec![1, 2, 4, 11, 34, 156]);
        let connected: Vec<usize> = (1..=6)
            .map(|n| connected_graphs(n).unwrap().len())
            .collect();
        assert_eq!(connected, vec![1, 1, 2, 6, 21, 112]);
    }

    #[test]
    fn enumeration_n7() {
        assert_eq!(connected_graphs(7).unwrap().len(), 853);
    }
}
