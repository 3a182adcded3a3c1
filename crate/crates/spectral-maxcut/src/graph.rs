//! Sparse weighted-graph representation, cut/gain evaluation, partition
//! accounting, and graph file I/O shared by the other modules.
//!
//! Graphs are undirected, store each edge once, and allow parallel edges
//! (the sparsifier emits unweighted multigraphs). Weighted degrees use
//! absolute values, `d_i = Σ_j |A_ij|`, so the same type serves both the
//! non-negative Max Cut setting and the signed CutGain setting.

use std::io::BufRead;

use crate::{Error, Result};

/// Neumaier compensated summation; keeps degree and cut accumulations
/// exact enough for the 1e-9 identity checks on large inputs.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub(crate) fn kahan_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = Kahan::default();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Input format for [`load_graph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    /// DIMACS-like: `p edge n m` header, `e i j [w]` edge lines, `c` comments.
    Dimacs,
    /// Bare `i j [w]` lines; vertex count inferred from the largest id.
    EdgeList,
}

/// Whether negative edge weights are accepted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightMode {
    /// Max Cut proper: weights must be non-negative.
    MaxCut,
    /// CutGain / quadratic programs: signed weights allowed.
    Gain,
}

/// One undirected edge, stored once; `u < v` is not required.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// Sparse undirected graph with real edge weights.
///
/// Immutable after construction and safe to share across threads; all
/// evaluation operations are pure.
#[derive(Clone, Debug)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    deg: Vec<f64>,
    total_weight: f64,
    integral: bool,
    // CSR adjacency over edge indices: each undirected edge appears in the
    // rows of both endpoints.
    adj_off: Vec<usize>,
    adj: Vec<(usize, f64)>,
}

impl WeightedGraph {
    /// Build a graph from an edge list. Rejects self-loops; rejects
    /// negative weights in [`WeightMode::MaxCut`].
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>, mode: WeightMode) -> Result<Self> {
        let mut list = Vec::with_capacity(edges.len());
        for (line, &(u, v, w)) in edges.iter().enumerate() {
            if u == v {
                return Err(Error::SelfLoop { line: line + 1 });
            }
            if u >= n || v >= n {
                return Err(Error::Parse {
                    line: line + 1,
                    msg: format!("vertex id out of range (n = {n})"),
                });
            }
            if w < 0.0 && mode == WeightMode::MaxCut {
                return Err(Error::NegativeWeight { line: line + 1 });
            }
            if !w.is_finite() {
                return Err(Error::Parse {
                    line: line + 1,
                    msg: "non-finite edge weight".into(),
                });
            }
            list.push(Edge { u, v, w });
        }
        Ok(Self::from_edges(n, list))
    }

    fn from_edges(n: usize, edges: Vec<Edge>) -> Self {
        let mut deg_acc = vec![Kahan::default(); n];
        let mut counts = vec![0usize; n];
        for e in &edges {
            deg_acc[e.u].add(e.w.abs());
            deg_acc[e.v].add(e.w.abs());
            counts[e.u] += 1;
            counts[e.v] += 1;
        }
        let deg: Vec<f64> = deg_acc.iter().map(|k| k.value()).collect();
        let total_weight = kahan_sum(deg.iter().copied()) / 2.0;
        // Exact integer weights allow exact rational ratio comparisons in
        // the sweep; cap the magnitude so i128 cross-products cannot lose
        // precision.
        let integral = edges
            .iter()
            .all(|e| e.w.fract() == 0.0 && e.w.abs() <= (1u64 << 40) as f64);

        let mut adj_off = vec![0usize; n + 1];
        for v in 0..n {
            adj_off[v + 1] = adj_off[v] + counts[v];
        }
        let mut adj = vec![(0usize, 0.0f64); adj_off[n]];
        let mut cursor = adj_off.clone();
        for e in &edges {
            adj[cursor[e.u]] = (e.v, e.w);
            cursor[e.u] += 1;
            adj[cursor[e.v]] = (e.u, e.w);
            cursor[e.v] += 1;
        }

        Self {
            n,
            edges,
            deg,
            total_weight,
            integral,
            adj_off,
            adj,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Weighted degree `d_i = Σ_j |A_ij|`.
    pub fn deg(&self) -> &[f64] {
        &self.deg
    }

    /// `Σ_i d_i / 2`; equals `|E|` for unweighted simple graphs.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    /// True when every weight is a (small) integer, enabling exact
    /// rational comparisons downstream.
    pub fn is_integral(&self) -> bool {
        self.integral
    }

    pub fn has_negative_weight(&self) -> bool {
        self.edges.iter().any(|e| e.w < 0.0)
    }

    /// Neighbors of `v` as `(other endpoint, weight)`, with multiplicity.
    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adj[self.adj_off[v]..self.adj_off[v + 1]]
    }
}

/// Parse a graph from a byte stream.
///
/// DIMACS-like format: header `p edge n m`, edge lines `e i j [w]` with the
/// weight defaulting to 1, comment lines `c ...`. Vertex ids are 1-based.
/// Duplicate edge lines are preserved as parallel edges.
pub fn load_graph(
    source: impl BufRead,
    format: GraphFormat,
    mode: WeightMode,
) -> Result<WeightedGraph> {
    let mut declared_n: Option<usize> = None;
    let mut max_id = 0usize;
    let mut edges: Vec<(usize, usize, f64, usize)> = Vec::new();

    for (idx, line) in source.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            line: lineno,
            msg: e.to_string(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let head = tokens.next().unwrap();
        match format {
            GraphFormat::Dimacs => match head {
                "c" => continue,
                "p" => {
                    let kind = tokens.next().unwrap_or("");
                    if kind != "edge" && kind != "col" {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: format!("expected 'p edge n m', got '{trimmed}'"),
                        });
                    }
                    let n = parse_token(tokens.next(), lineno, "vertex count")?;
                    let _m: usize = parse_token(tokens.next(), lineno, "edge count")?;
                    declared_n = Some(n);
                }
                "e" => {
                    let (u, v, w) = parse_edge_tokens(&mut tokens, lineno)?;
                    edges.push((u, v, w, lineno));
                }
                _ => {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("unrecognized line '{trimmed}'"),
                    });
                }
            },
            GraphFormat::EdgeList => {
                if head == "#" || head.starts_with('#') {
                    continue;
                }
                let mut with_head =
                    std::iter::once(head).chain(tokens.by_ref());
                let (u, v, w) = parse_edge_tokens(&mut with_head, lineno)?;
                edges.push((u, v, w, lineno));
            }
        }
        if let Some((u, v, _, _)) = edges.last() {
            max_id = max_id.max(*u).max(*v);
        }
    }

    let n = match declared_n {
        Some(n) => {
            if max_id > n {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("edge references vertex {max_id} but header declares n = {n}"),
                });
            }
            n
        }
        None => {
            if format == GraphFormat::Dimacs {
                return Err(Error::Parse {
                    line: 0,
                    msg: "missing 'p edge n m' header".into(),
                });
            }
            max_id
        }
    };

    // Validate per-line so errors carry the offending line number.
    let mut list = Vec::with_capacity(edges.len());
    for (u, v, w, lineno) in edges {
        if u == v {
            return Err(Error::SelfLoop { line: lineno });
        }
        if w < 0.0 && mode == WeightMode::MaxCut {
            return Err(Error::NegativeWeight { line: lineno });
        }
        list.push(Edge {
            u: u - 1,
            v: v - 1,
            w,
        });
    }
    Ok(WeightedGraph::from_edges(n, list))
}

fn parse_token<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    tok.ok_or_else(|| Error::Parse {
        line,
        msg: format!("missing {what}"),
    })?
    .parse()
    .map_err(|_| Error::Parse {
        line,
        msg: format!("invalid {what}"),
    })
}

fn parse_edge_tokens<'a>(
    tokens: &mut impl Iterator<Item = &'a str>,
    lineno: usize,
) -> Result<(usize, usize, f64)> {
    let u: usize = parse_token(tokens.next(), lineno, "endpoint")?;
    let v: usize = parse_token(tokens.next(), lineno, "endpoint")?;
    let w: f64 = match tokens.next() {
        Some(t) => t.parse().map_err(|_| Error::Parse {
            line: lineno,
            msg: "invalid edge weight".into(),
        })?,
        None => 1.0,
    };
    if u == 0 || v == 0 {
        return Err(Error::Parse {
            line: lineno,
            msg: "vertex ids are 1-based".into(),
        });
    }
    if !w.is_finite() {
        return Err(Error::Parse {
            line: lineno,
            msg: "non-finite edge weight".into(),
        });
    }
    Ok((u, v, w))
}

/// A vector `y ∈ {-1, 0, +1}^V`. The support `S` is the set of non-zero
/// coordinates, `L` the negative ones and `R` the positive ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedVector {
    y: Vec<i8>,
}

impl SignedVector {
    pub fn new(y: Vec<i8>) -> Result<Self> {
        if y.iter().any(|&v| !(-1..=1).contains(&v)) {
            return Err(Error::InvalidParameter(
                "sign vector entries must be -1, 0 or 1".into(),
            ));
        }
        Ok(Self { y })
    }

    pub fn values(&self) -> &[i8] {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.y
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, _)| i)
    }

    pub fn support_size(&self) -> usize {
        self.y.iter().filter(|&&v| v != 0).count()
    }

    pub fn negatives(&self) -> Vec<usize> {
        self.y
            .iter()
            .enumerate()
            .filter(|(_, &v)| v < 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn positives(&self) -> Vec<usize> {
        self.y
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Accounting quantities of a sign vector against a graph.
///
/// `m` is the weight incident on the support, split into `u` (uncut within
/// the support), `c` (cut within) and `x` (crossing the support boundary).
/// `ratio` is `Σ_{i,j} A_ij |y_i + y_j| / Σ_i d_i |y_i|` over ordered
/// pairs, i.e. `(4u + 2x) / (2(u + c) + x)`.
#[derive(Clone, Copy, Debug)]
pub struct PartitionStats {
    pub m: f64,
    pub u: f64,
    pub c: f64,
    pub x: f64,
    pub ratio: f64,
}

/// Compute [`PartitionStats`] for `y` against `g`. The ratio is reported
/// as `+inf` when the support carries no weight (e.g. all-zero `y`).
pub fn partition_stats(g: &WeightedGraph, y: &SignedVector) -> PartitionStats {
    let s = y.values();
    let (mut m, mut u, mut c, mut x) = (
        Kahan::default(),
        Kahan::default(),
        Kahan::default(),
        Kahan::default(),
    );
    for e in g.edges() {
        let (a, b) = (s[e.u], s[e.v]);
        if a == 0 && b == 0 {
            continue;
        }
        m.add(e.w);
        if a != 0 && b != 0 {
            if a == b {
                u.add(e.w);
            } else {
                c.add(e.w);
            }
        } else {
            x.add(e.w);
        }
    }
    let (m, u, c, x) = (m.value(), u.value(), c.value(), x.value());
    let num = 4.0 * u + 2.0 * x;
    let den = 2.0 * (u + c) + x;
    let ratio = if den == 0.0 { f64::INFINITY } else { num / den };
    PartitionStats { m, u, c, x, ratio }
}

/// A two-sided vertex partition with its cut value.
#[derive(Clone, Debug)]
pub struct Cut {
    /// Side assignment per vertex, 0 or 1.
    pub side: Vec<u8>,
    /// Total weight of edges with endpoints on different sides.
    pub cut_weight: f64,
    /// `cut_weight / total_weight` (0 when the graph has no weight).
    pub cut_fraction: f64,
}

impl Cut {
    pub fn from_sides(g: &WeightedGraph, side: Vec<u8>) -> Self {
        assert_eq!(side.len(), g.n(), "side assignment must cover all vertices");
        let (cut_weight, cut_fraction) = evaluate_cut(g, &side);
        Self {
            side,
            cut_weight,
            cut_fraction,
        }
    }
}

/// Total weight of cut edges and the cut fraction for a side assignment.
pub fn evaluate_cut(g: &WeightedGraph, side: &[u8]) -> (f64, f64) {
    let mut w = Kahan::default();
    for e in g.edges() {
        if side[e.u] != side[e.v] {
            w.add(e.w);
        }
    }
    let cut_weight = w.value();
    let fraction = if g.total_weight() > 0.0 {
        cut_weight / g.total_weight()
    } else {
        0.0
    };
    (cut_weight, fraction)
}

/// CutGain objective of a sign vector: `-Σ_{i,j} A_ij y_i y_j / Σ_i d_i |y_i|`
/// over ordered pairs. For full-support `y` this is the Max-CutGain value
/// `-yᵀAy / yᵀDy`.
pub fn evaluate_gain(g: &WeightedGraph, y: &SignedVector) -> Result<f64> {
    let s = y.values();
    let mut num = Kahan::default();
    for e in g.edges() {
        let p = (s[e.u] as f64) * (s[e.v] as f64);
        if p != 0.0 {
            num.add(-2.0 * e.w * p);
        }
    }
    let den = kahan_sum(
        s.iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(i, _)| g.deg()[i]),
    );
    if den == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    Ok(num.value() / den)
}

/// Greedy cut with single-vertex local improvement.
///
/// Each vertex is placed on the side that cuts more already-placed weight,
/// then vertices are flipped while a flip strictly improves the cut. For
/// non-negative weights the result cuts at least half of the total weight.
pub fn greedy_cut(g: &WeightedGraph) -> Cut {
    let n = g.n();
    let mut side = vec![0u8; n];
    let mut placed = vec![false; n];
    for v in 0..n {
        // Weight toward each side among already-placed neighbors.
        let mut to = [0.0f64; 2];
        for &(u, w) in g.neighbors(v) {
            if placed[u] {
                to[side[u] as usize] += w;
            }
        }
        // Placing v opposite to the heavier side cuts more.
        side[v] = if to[0] >= to[1] { 1 } else { 0 };
        placed[v] = true;
    }

    // Local search: flip while strictly profitable.
    let mut improved = true;
    let mut passes = 0usize;
    while improved && passes < 4 * n + 16 {
        improved = false;
        passes += 1;
        for v in 0..n {
            let mut delta = 0.0f64;
            for &(u, w) in g.neighbors(v) {
                if side[u] == side[v] {
                    delta += w;
                } else {
                    delta -= w;
                }
            }
            if delta > 0.0 {
                side[v] ^= 1;
                improved = true;
            }
        }
    }
    Cut::from_sides(g, side)
}
