//! Cut-preserving sparsification: sample edges with replacement, each
//! with probability proportional to its weight. The output is an
//! unweighted multigraph in which, with high probability, every cut has
//! the same fraction as in the input up to an additive `delta`.

use rand::{rngs::StdRng, Rng, SeedableRng};

use crate::graph::{Edge, WeightedGraph};
use crate::{Error, Result};

/// Parameters for [`sparsify`]. The sample count is
/// `ceil(oversample · n / delta²)`.
#[derive(Clone, Copy, Debug)]
pub struct SparsifyParams {
    /// Additive cut-accuracy target, in (0, 1].
    pub delta: f64,
    /// Constant multiplier in the sample count.
    pub oversample: f64,
    pub seed: u64,
}

impl SparsifyParams {
    pub fn new(delta: f64, seed: u64) -> Self {
        Self {
            delta,
            oversample: 16.0,
            seed,
        }
    }

    pub fn sample_count(&self, n: usize) -> usize {
        (self.oversample * n as f64 / (self.delta * self.delta)).ceil() as usize
    }

    fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "sparsify delta must be in (0, 1], got {}",
                self.delta
            )));
        }
        if self.oversample < 1.0 {
            return Err(Error::InvalidParameter(
                "oversample must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Weight-proportional sampling with replacement via a cumulative table
/// and binary search; O(log m) per draw, deterministic given the seed.
pub(crate) struct EdgeSampler<'a> {
    graph: &'a WeightedGraph,
    cumulative: Vec<f64>,
}

impl<'a> EdgeSampler<'a> {
    pub fn new(graph: &'a WeightedGraph) -> Result<Self> {
        if graph.m() == 0 {
            return Err(Error::NoEdges);
        }
        let mut cumulative = Vec::with_capacity(graph.m());
        let mut acc = 0.0;
        for e in graph.edges() {
            acc += e.w.abs();
            cumulative.push(acc);
        }
        if acc <= 0.0 {
            return Err(Error::NoEdges);
        }
        Ok(Self { graph, cumulative })
    }

    pub fn draw(&self, rng: &mut StdRng) -> &'a Edge {
        let total = *self.cumulative.last().unwrap();
        let t: f64 = rng.gen_range(0.0..total);
        let idx = self.cumulative.partition_point(|&c| c <= t);
        &self.graph.edges()[idx.min(self.graph.m() - 1)]
    }
}

/// Sample `ceil(oversample·n/delta²)` edges i.i.d. proportionally to
/// weight, producing an unweighted multigraph on the same vertex set.
pub fn sparsify(g: &WeightedGraph, p: &SparsifyParams) -> Result<WeightedGraph> {
    p.validate()?;
    let sampler = EdgeSampler::new(g)?;
    let mut rng = StdRng::seed_from_u64(p.seed);
    let s = p.sample_count(g.n());
    let mut edges = Vec::with_capacity(s);
    for _ in 0..s {
        let e = sampler.draw(&mut rng);
        edges.push((e.u, e.v, 1.0));
    }
    WeightedGraph::new(g.n(), edges, crate::graph::WeightMode::MaxCut)
}
