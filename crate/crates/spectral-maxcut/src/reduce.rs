//! Bounded-degree reduction and its inverse rounding.
//!
//! The intermediate graph `Ĝ` places `d_v` copies of each vertex `v` and
//! splits every edge `(u, v)` into `d_u·d_v` copy-pairs of weight
//! `1/(d_u·d_v)`; it preserves Max Cut exactly and is never materialized.
//! The reduced graph is built by sampling edges of `Ĝ` with probability
//! proportional to weight — draw an edge of `G` weight-proportionally,
//! then uniform copies of both endpoints — in constant time per draw.
//! Cuts of the reduced graph map back to `G` by rounding copy-membership
//! frequencies with the method of conditional expectations.

use rand::{rngs::StdRng, Rng, SeedableRng};

use crate::graph::{Cut, WeightedGraph};
use crate::{Error, Result};

/// Vose alias table: constant time per draw after an O(m) build, so the
/// whole reduction runs in time proportional to the sample count.
pub(crate) struct AliasTable {
    prob: Vec<f64>,
    alias: Vec<usize>,
}

impl AliasTable {
    pub fn new(weights: &[f64]) -> Option<Self> {
        let n = weights.len();
        let total: f64 = weights.iter().sum();
        if n == 0 || total <= 0.0 {
            return None;
        }
        let mut prob = vec![0.0f64; n];
        let mut alias = vec![0usize; n];
        let scaled: Vec<f64> = weights.iter().map(|w| w * n as f64 / total).collect();
        let mut small: Vec<usize> = Vec::new();
        let mut large: Vec<usize> = Vec::new();
        for (i, &s) in scaled.iter().enumerate() {
            if s < 1.0 {
                small.push(i);
            } else {
                large.push(i);
            }
        }
        let mut scaled = scaled;
        while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
            small.pop();
            large.pop();
            prob[s] = scaled[s];
            alias[s] = l;
            scaled[l] = (scaled[l] + scaled[s]) - 1.0;
            if scaled[l] < 1.0 {
                small.push(l);
            } else {
                large.push(l);
            }
        }
        for &i in small.iter().chain(large.iter()) {
            prob[i] = 1.0;
            alias[i] = i;
        }
        Some(Self { prob, alias })
    }

    pub fn draw(&self, rng: &mut StdRng) -> usize {
        let i = rng.gen_range(0..self.prob.len());
        if rng.gen::<f64>() < self.prob[i] {
            i
        } else {
            self.alias[i]
        }
    }
}

/// Output of [`reduce`]: the sampled multigraph together with the copy
/// ranges needed to map cuts back.
#[derive(Clone, Debug)]
pub struct ReductionArtifact {
    /// Unweighted multigraph on `Σ_v deg_count(v)` vertices.
    pub gprime: WeightedGraph,
    /// For each vertex of the source graph, `(start, count)` of its
    /// contiguous block of copies. Isolated vertices get empty blocks.
    pub copy_map: Vec<(usize, usize)>,
    pub sample_count: usize,
    pub seed: u64,
}

/// Sample count `ceil(16·n̂·ln(n̂+1)/delta²)` for `n̂` copy-vertices.
pub fn sample_count_for(n_hat: usize, delta: f64) -> usize {
    (16.0 * n_hat as f64 * ((n_hat + 1) as f64).ln() / (delta * delta)).ceil() as usize
}

/// Build the bounded-degree multigraph. Copy counts are the unweighted
/// incidence counts; weighted graphs are supported by drawing edges
/// proportionally to weight.
pub fn reduce(g: &WeightedGraph, delta: f64, seed: u64) -> Result<ReductionArtifact> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "delta must be in (0, 1], got {delta}"
        )));
    }
    let weights: Vec<f64> = g.edges().iter().map(|e| e.w.abs()).collect();
    let sampler = AliasTable::new(&weights).ok_or(Error::NoEdges)?;
    let n = g.n();
    let counts: Vec<usize> = (0..n).map(|v| g.neighbors(v).len()).collect();
    let mut copy_map = Vec::with_capacity(n);
    let mut start = 0usize;
    for &c in &counts {
        copy_map.push((start, c));
        start += c;
    }
    let n_hat = start; // = 2m

    let sample_count = sample_count_for(n_hat, delta);
    let mut rng = StdRng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(sample_count);
    for _ in 0..sample_count {
        let e = &g.edges()[sampler.draw(&mut rng)];
        let cu = copy_map[e.u];
        let cv = copy_map[e.v];
        let u_hat = cu.0 + rng.gen_range(0..cu.1);
        let v_hat = cv.0 + rng.gen_range(0..cv.1);
        edges.push((u_hat, v_hat, 1.0));
    }
    let gprime = WeightedGraph::new(n_hat, edges, crate::graph::WeightMode::MaxCut)?;
    Ok(ReductionArtifact {
        gprime,
        copy_map,
        sample_count,
        seed,
    })
}

/// Fraction of copies of each source vertex on side 1 of `cut_prime`.
fn membership_probabilities(artifact: &ReductionArtifact, cut_prime: &Cut) -> Vec<f64> {
    artifact
        .copy_map
        .iter()
        .map(|&(start, count)| {
            if count == 0 {
                0.0
            } else {
                let ones = cut_prime.side[start..start + count]
                    .iter()
                    .filter(|&&s| s == 1)
                    .count();
                ones as f64 / count as f64
            }
        })
        .collect()
}

/// Expected cut weight of `g` under independent side choices with the
/// copy-membership probabilities of `cut_prime`. This equals the
/// `Ĝ`-weighted value of the fractional assignment.
pub fn lift_expectation(artifact: &ReductionArtifact, g: &WeightedGraph, cut_prime: &Cut) -> f64 {
    let p = membership_probabilities(artifact, cut_prime);
    g.edges()
        .iter()
        .map(|e| e.w * (p[e.u] * (1.0 - p[e.v]) + p[e.v] * (1.0 - p[e.u])))
        .sum()
}

/// Round the copy-membership probabilities to a cut of `g` by conditional
/// expectations: vertices are fixed in decreasing-degree order to the
/// side with the larger conditional cut expectation, so the final cut
/// weight never drops below [`lift_expectation`]. Deterministic, linear
/// in `|E(g)|`.
pub fn lift_cut(artifact: &ReductionArtifact, g: &WeightedGraph, cut_prime: &Cut) -> Cut {
    assert_eq!(
        cut_prime.side.len(),
        artifact.gprime.n(),
        "cut must cover the reduced graph"
    );
    let p = membership_probabilities(artifact, cut_prime);
    let n = g.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        g.deg()[b]
            .partial_cmp(&g.deg()[a])
            .unwrap()
            .then(a.cmp(&b))
    });

    let mut side = vec![0u8; n];
    let mut decided = vec![false; n];
    for &v in &order {
        let mut expect = [0.0f64; 2]; // conditional cut mass if v -> side s
        for &(u, w) in g.neighbors(v) {
            if decided[u] {
                expect[1 - side[u] as usize] += w;
            } else {
                expect[0] += w * p[u];
                expect[1] += w * (1.0 - p[u]);
            }
        }
        // Ties go to side 0.
        let s = if expect[1] > expect[0] { 1 } else { 0 };
        side[v] = s as u8;
        decided[v] = true;
    }
    Cut::from_sides(g, side)
}
