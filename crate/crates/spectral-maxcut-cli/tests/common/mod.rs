//! Brute-force oracles shared by the acceptance criteria. Everything here
//! is deliberately independent of the library's algorithmic paths: cuts
//! are enumerated bit by bit over a collapsed weight matrix.
#![allow(dead_code)] // each test target uses its own subset

use spectral_maxcut::WeightedGraph;

/// Collapse parallel edges into a dense symmetric weight matrix.
pub fn collapse(g: &WeightedGraph) -> Vec<Vec<f64>> {
    let n = g.n();
    let mut w = vec![vec![0.0f64; n]; n];
    for e in g.edges() {
        w[e.u][e.v] += e.w;
        w[e.v][e.u] += e.w;
    }
    w
}

/// Exact maximum cut weight by Gray-code enumeration of all 2^n sides.
pub fn max_cut_weight(g: &WeightedGraph) -> f64 {
    let n = g.n();
    assert!(n <= 24, "brute force capped at n = 24");
    let w = collapse(g);
    let nbrs: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|v| {
            (0..n)
                .filter(|&u| u != v && w[v][u] != 0.0)
                .map(|u| (u, w[v][u]))
                .collect()
        })
        .collect();
    let mut side = vec![0u8; n];
    let mut cut = 0.0f64;
    let mut best = 0.0f64;
    for k in 1u64..1 << n {
        let v = k.trailing_zeros() as usize;
        let mut delta = 0.0;
        for &(u, wt) in &nbrs[v] {
            if side[u] == side[v] {
                delta += wt;
            } else {
                delta -= wt;
            }
        }
        side[v] ^= 1;
        cut += delta;
        if cut > best {
            best = cut;
        }
    }
    best
}

/// Exact maximum cut fraction.
pub fn max_cut_fraction(g: &WeightedGraph) -> f64 {
    if g.total_weight() == 0.0 {
        return 0.0;
    }
    max_cut_weight(g) / g.total_weight()
}

/// Largest |fraction(a) − fraction(b)| over all 2^n cuts of two graphs on
/// the same vertex set.
pub fn max_cut_discrepancy(a: &WeightedGraph, b: &WeightedGraph) -> f64 {
    let n = a.n();
    assert_eq!(n, b.n());
    assert!(n <= 24);
    let (wa, wb) = (collapse(a), collapse(b));
    let (ta, tb) = (a.total_weight(), b.total_weight());
    let mut side = vec![0u8; n];
    let (mut ca, mut cb) = (0.0f64, 0.0f64);
    let mut worst = 0.0f64;
    for k in 1u64..1 << n {
        let v = k.trailing_zeros() as usize;
        let (mut da, mut db) = (0.0, 0.0);
        for u in 0..n {
            if u == v {
                continue;
            }
            let sign = if side[u] == side[v] { 1.0 } else { -1.0 };
            da += sign * wa[v][u];
            db += sign * wb[v][u];
        }
        side[v] ^= 1;
        ca += da;
        cb += db;
        let diff = (ca / ta - cb / tb).abs();
        if diff > worst {
            worst = diff;
        }
    }
    worst
}

/// All connected graphs with 2 ≤ n ≤ max_n, one per isomorphism class.
pub fn connected_corpus(max_n: usize) -> Vec<WeightedGraph> {
    (2..=max_n)
        .flat_map(|n| spectral_maxcut::generators::connected_graphs(n).unwrap())
        .collect()
}
