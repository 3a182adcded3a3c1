//! Threshold rounding for the smallest eigenvalue: the two-thresholds
//! sweep, its composition with the eigensolver, and the exact
//! bipartiteness-ratio oracle with its Cheeger-type bounds.
//!
//! The sweep takes a vector `x` with `xᵀ(D+A)x = ε·xᵀDx` and produces a
//! sign vector `y ∈ {-1,0,1}^V` whose failure ratio
//! `Σ A_ij |y_i + y_j| / Σ d_i |y_i|` is at most `√(8ε)`: most of the
//! weight incident on the support of `y` crosses between its negative and
//! positive parts.

use crate::dense;
use crate::eigen::{smallest_eigvec, EmbeddingVector};
use crate::enumerate::{ternary_extremum, Objective};
use crate::graph::{partition_stats, PartitionStats, SignedVector, WeightedGraph};
use crate::{Error, Result};

/// Output of the two-thresholds sweep.
#[derive(Clone, Debug)]
pub struct SweepResult {
    pub y: SignedVector,
    pub stats: PartitionStats,
    /// Position in the |x|-ascending order whose value was the threshold:
    /// the support consists of the vertices at this position and above.
    pub threshold_index: usize,
    /// Certified ceiling `√(8·eps_x)`; `stats.ratio` never exceeds it.
    pub bound: f64,
}

/// Exact bipartiteness ratio with the spectral sandwich bounds.
#[derive(Clone, Copy, Debug)]
pub struct BetaReport {
    pub beta: f64,
    /// `(1 - |λ_n|) / 2`.
    pub lower: f64,
    /// `√(2·(1 - |λ_n|))`.
    pub upper: f64,
    /// Smallest eigenvalue of `D^{-1/2} A D^{-1/2}` (dense eigensolve).
    pub lambda_n: f64,
}

/// Sweep over the symmetric thresholds `±|x_k|`.
///
/// Candidate `k` keeps the sign of the `n - k` largest entries by absolute
/// value and zeroes the rest; the candidate minimizing the failure ratio
/// wins, ties going to the largest support. Runs in O(|E| + |V| log |V|)
/// via incremental ratio updates.
pub fn two_threshold_sweep(g: &WeightedGraph, emb: &EmbeddingVector) -> Result<SweepResult> {
    let x = emb.x();
    assert_eq!(x.len(), g.n());
    let n = g.n();
    let deg = g.deg();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| x[a].abs().partial_cmp(&x[b].abs()).unwrap().then(a.cmp(&b)));

    let mut y: Vec<i8> = x.iter().map(|&v| sign_of(v)).collect();
    let mut num = 0.0f64; // Σ_{ordered} A_ij |y_i + y_j|
    let mut den = 0.0f64; // Σ_i d_i |y_i|
    for e in g.edges() {
        num += 2.0 * e.w * (y[e.u] + y[e.v]).abs() as f64;
    }
    for v in 0..n {
        if y[v] != 0 {
            den += deg[v];
        }
    }

    // Exact rational comparison for integral weights avoids float ties.
    let integral = g.is_integral();
    let mut best: Option<(f64, f64, usize)> = None;
    let consider = |num: f64, den: f64, k: usize, best: &mut Option<(f64, f64, usize)>| {
        if den <= 0.0 {
            return;
        }
        match best {
            None => *best = Some((num, den, k)),
            Some((bn, bd, _)) => {
                let strictly_less = if integral {
                    (num as i128) * (*bd as i128) < (*bn as i128) * (den as i128)
                } else {
                    num / den < *bn / *bd
                };
                if strictly_less {
                    *best = Some((num, den, k));
                }
            }
        }
    };

    consider(num, den, 0, &mut best);
    for k in 1..n {
        let u = order[k - 1];
        if y[u] != 0 {
            den -= deg[u];
            for &(v, w) in g.neighbors(u) {
                num += 2.0 * w * ((y[v].abs() as f64) - ((y[u] + y[v]).abs() as f64));
            }
            y[u] = 0;
        }
        consider(num, den, k, &mut best);
    }

    let (_, _, k_best) = best.ok_or(Error::ZeroVector)?;
    let mut y_best = vec![0i8; n];
    for &v in &order[k_best..] {
        y_best[v] = sign_of(x[v]);
    }
    let y = SignedVector::new(y_best).expect("signs are valid");
    let stats = partition_stats(g, &y);
    Ok(SweepResult {
        y,
        stats,
        threshold_index: k_best,
        bound: (8.0 * emb.eps_x()).sqrt(),
    })
}

#[inline]
fn sign_of(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Eigensolver + sweep. If the Max Cut optimum of `g` is `1 - ε`, the
/// returned ratio is at most `4√ε + delta`: the eigensolver runs at
/// accuracy `delta²/8` so that `√(8(2ε + delta²/8)) ≤ 4√ε + delta`.
pub fn spectral_partition(g: &WeightedGraph, delta: f64, seed: u64) -> Result<SweepResult> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "delta must be in (0, 1), got {delta}"
        )));
    }
    let emb = smallest_eigvec(g, delta * delta / 8.0, seed)?;
    two_threshold_sweep(g, &emb)
}

const EXACT_LIMIT: usize = 20;

/// Exact bipartiteness ratio by enumeration of all 3^n sign vectors,
/// with the spectral sandwich `(1-|λ_n|)/2 ≤ β ≤ √(2(1-|λ_n|))`.
/// Exponential: supported for n ≤ 20.
pub fn beta_exact(g: &WeightedGraph) -> Result<BetaReport> {
    if g.n() > EXACT_LIMIT {
        return Err(Error::TooLarge {
            n: g.n(),
            limit: EXACT_LIMIT,
        });
    }
    if g.m() == 0 {
        return Err(Error::NoEdges);
    }
    let (ratio, _y) = ternary_extremum(g, Objective::AbsSumMin).ok_or(Error::ZeroVector)?;
    let beta = ratio / 2.0;
    let lambda_n = dense::lambda_min(g);
    // |λ_n| ≤ 1 exactly; shave the eigensolver's last-ulp overshoot so the
    // bounds stay real.
    let gap = (1.0 - lambda_n.abs()).max(0.0);
    Ok(BetaReport {
        beta,
        lower: 0.5 * gap,
        upper: (2.0 * gap).sqrt(),
        lambda_n,
    })
}

/// Exact edge expansion `min_S edges(S, V−S) / vol(S)` over subsets with
/// `|S| ≤ ⌈n/2⌉`, by subset enumeration (n ≤ 20).
pub fn edge_expansion_exact(g: &WeightedGraph) -> Result<f64> {
    let n = g.n();
    if n > EXACT_LIMIT {
        return Err(Error::TooLarge { n, limit: EXACT_LIMIT });
    }
    if g.m() == 0 {
        return Err(Error::NoEdges);
    }
    let deg = g.deg();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << n) - 1 {
        if 2 * mask.count_ones() as usize > n + 1 {
            continue;
        }
        let vol: f64 = (0..n).filter(|&v| mask >> v & 1 == 1).map(|v| deg[v]).sum();
        if vol <= 0.0 {
            continue;
        }
        let mut cross = 0.0;
        for e in g.edges() {
            if (mask >> e.u & 1) != (mask >> e.v & 1) {
                cross += e.w;
            }
        }
        best = best.min(cross / vol);
    }
    Ok(best)
}
