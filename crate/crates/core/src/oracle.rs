//! Brute-force reference implementations and a seeded instance generator.
//!
//! Everything here recomputes the fast answers from first principles by
//! exhaustive enumeration, so it runs in exponential time and refuses graphs
//! beyond a small vertex bound unless forced. The fast modules are checked
//! against these oracles at desk scale.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{CycleWitness, DistanceMatrix, GraphError, WeightedGraph};

/// Largest vertex count the oracles accept without `force`.
pub const DEFAULT_SAFETY_BOUND: usize = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("{vertices} vertices exceed the oracle bound of {bound}; pass force to override")]
    SafetyBound { vertices: usize, bound: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("vertices '{0}' and '{1}' are adjacent")]
    AdjacentVertices(String, String),
    #[error("vertices '{0}' and '{0}' coincide")]
    IdenticalVertices(String),
}

fn ensure_small(g: &WeightedGraph, force: bool) -> Result<(), OracleError> {
    let vertices = g.vertex_count();
    if !force && vertices > DEFAULT_SAFETY_BOUND {
        return Err(OracleError::SafetyBound {
            vertices,
            bound: DEFAULT_SAFETY_BOUND,
        });
    }
    Ok(())
}

/// A simple cycle in canonical form: the vertex sequence starts at the
/// lexicographically smallest vertex and continues toward its smaller-labeled
/// cycle neighbor; the closing edge back to the start is implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub vertices: Vec<String>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Lazily enumerates every simple cycle of at most `max_len` edges, each
/// exactly once, in canonical form.
///
/// Depth-first search rooted at each vertex in label order; a branch only
/// visits vertices ranked above the root, and a found cycle is emitted only
/// in the orientation whose second vertex ranks below its last, so the two
/// traversal directions collapse to one. The stream is deterministic.
pub fn enumerate_cycles(
    g: &WeightedGraph,
    max_len: usize,
    force: bool,
) -> Result<CycleStream<'_>, OracleError> {
    ensure_small(g, force)?;
    let n = g.vertex_count();
    let mut by_rank: Vec<usize> = (0..n).collect();
    by_rank.sort_by(|&a, &b| g.label(a).cmp(g.label(b)));
    let mut rank_of = vec![0; n];
    for (rank, &v) in by_rank.iter().enumerate() {
        rank_of[v] = rank;
    }
    let neighbors: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let mut ns: Vec<usize> = g.neighbors(v).iter().map(|&(to, _)| to).collect();
            ns.sort_by_key(|&to| rank_of[to]);
            ns
        })
        .collect();
    Ok(CycleStream {
        g,
        rank_of,
        by_rank,
        neighbors,
        max_len,
        next_root: 0,
        path: Vec::new(),
        next_child: Vec::new(),
        on_path: vec![false; n],
    })
}

pub struct CycleStream<'g> {
    g: &'g WeightedGraph,
    rank_of: Vec<usize>,
    by_rank: Vec<usize>,
    neighbors: Vec<Vec<usize>>,
    max_len: usize,
    next_root: usize,
    path: Vec<usize>,
    next_child: Vec<usize>,
    on_path: Vec<bool>,
}

impl Iterator for CycleStream<'_> {
    type Item = Cycle;

    fn next(&mut self) -> Option<Cycle> {
        if self.max_len < 3 {
            return None;
        }
        loop {
            if self.path.is_empty() {
                if self.next_root >= self.by_rank.len() {
                    return None;
                }
                let root = self.by_rank[self.next_root];
                self.path.push(root);
                self.next_child.push(0);
                self.on_path[root] = true;
                continue;
            }
            let depth = self.path.len() - 1;
            let v = self.path[depth];
            let pos = self.next_child[depth];
            if pos >= self.neighbors[v].len() {
                self.path.pop();
                self.next_child.pop();
                self.on_path[v] = false;
                if self.path.is_empty() {
                    self.next_root += 1;
                }
                continue;
            }
            self.next_child[depth] += 1;
            let to = self.neighbors[v][pos];
            let root = self.path[0];
            if self.rank_of[to] < self.rank_of[root] {
                continue;
            }
            if to == root {
                let len = self.path.len();
                if len >= 3 && self.rank_of[self.path[1]] < self.rank_of[self.path[len - 1]] {
                    let vertices = self
                        .path
                        .iter()
                        .map(|&i| self.g.label(i).to_string())
                        .collect();
                    return Some(Cycle { vertices });
                }
                continue;
            }
            if !self.on_path[to] && self.path.len() < self.max_len {
                self.path.push(to);
                self.next_child.push(0);
                self.on_path[to] = true;
            }
        }
    }
}

/// Edge weights around a cycle, in order, closing edge last.
fn cycle_edge_weights(g: &WeightedGraph, cycle: &Cycle) -> Vec<f64> {
    let k = cycle.vertices.len();
    (0..k)
        .map(|i| {
            let u = &cycle.vertices[i];
            let v = &cycle.vertices[(i + 1) % k];
            g.edge_weight(u, v).expect("cycle edges exist in the graph")
        })
        .collect()
}

/// Checks `2 * max_edge <= total + eps` on every simple cycle by direct
/// enumeration. This holds exactly when the weight is metrizable. Returns the
/// first violating cycle, as a witness in the same shape the fast check uses.
pub fn cycle_condition_holds(
    g: &WeightedGraph,
    eps: f64,
    force: bool,
) -> Result<(bool, Option<CycleWitness>), OracleError> {
    let n = g.vertex_count();
    for cycle in enumerate_cycles(g, n.max(3), force)? {
        let weights = cycle_edge_weights(g, &cycle);
        let total: f64 = weights.iter().sum();
        let (max_at, &max_w) = weights
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("cycles have edges");
        if 2.0 * max_w > total + eps {
            let k = cycle.vertices.len();
            let (u, v) = (
                cycle.vertices[max_at].clone(),
                cycle.vertices[(max_at + 1) % k].clone(),
            );
            let max_edge = if u < v { (u, v) } else { (v, u) };
            let mut vertices = cycle.vertices;
            vertices.push(vertices[0].clone());
            return Ok((
                false,
                Some(CycleWitness {
                    cycle: vertices,
                    max_edge,
                    lhs: 2.0 * max_w,
                    rhs: total,
                }),
            ));
        }
    }
    Ok((true, None))
}

/// The least-extension value for a nonadjacent pair, from its defining
/// formula: the supremum over simple `u`-`v` paths `P` of
/// `max(0, 2 * max_edge(P) - w(P))`, zero when no path exists.
pub fn rho0_path_sup(g: &WeightedGraph, u: &str, v: &str, force: bool) -> Result<f64, OracleError> {
    ensure_small(g, force)?;
    let start = g
        .index_of(u)
        .ok_or_else(|| GraphError::UnknownVertex(u.to_string()))?;
    let goal = g
        .index_of(v)
        .ok_or_else(|| GraphError::UnknownVertex(v.to_string()))?;
    if start == goal {
        return Err(OracleError::IdenticalVertices(u.to_string()));
    }
    if g.edge_weight_indexed(start, goal).is_some() {
        return Err(OracleError::AdjacentVertices(u.to_string(), v.to_string()));
    }
    let mut visited = vec![false; g.vertex_count()];
    visited[start] = true;
    let mut sup = 0.0f64;
    fn search(
        g: &WeightedGraph,
        at: usize,
        goal: usize,
        total: f64,
        heaviest: f64,
        visited: &mut [bool],
        sup: &mut f64,
    ) {
        if at == goal {
            *sup = sup.max(2.0 * heaviest - total);
            return;
        }
        for &(to, w) in g.neighbors(at) {
            if !visited[to] {
                visited[to] = true;
                search(g, to, goal, total + w, heaviest.max(w), visited, sup);
                visited[to] = false;
            }
        }
    }
    search(g, start, goal, 0.0, 0.0, &mut visited, &mut sup);
    Ok(sup.max(0.0))
}

/// All-pairs distances by enumerating every simple path from every source.
pub fn exhaustive_all_pairs(g: &WeightedGraph, force: bool) -> Result<DistanceMatrix, OracleError> {
    ensure_small(g, force)?;
    let n = g.vertex_count();
    fn walk(g: &WeightedGraph, at: usize, total: f64, visited: &mut [bool], best: &mut [f64]) {
        if total < best[at] {
            best[at] = total;
        }
        for &(to, w) in g.neighbors(at) {
            if !visited[to] {
                visited[to] = true;
                walk(g, to, total + w, visited, best);
                visited[to] = false;
            }
        }
    }
    let mut rows = Vec::with_capacity(n);
    for source in 0..n {
        let mut best = vec![f64::INFINITY; n];
        let mut visited = vec![false; n];
        visited[source] = true;
        walk(g, source, 0.0, &mut visited, &mut best);
        rows.push(best);
    }
    Ok(DistanceMatrix::build(g.vertices().to_vec(), |i, j| {
        if i <= j {
            rows[i][j]
        } else {
            rows[j][i]
        }
    })
    .expect("path weights are nonnegative"))
}

/// How edge weights are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightDistribution {
    /// Independent uniform weights on `[0, max]`, with an extra point mass at
    /// exactly zero.
    Uniform { max: f64, zero_mass: f64 },
    /// Vertices are placed uniformly on a segment `[0, length]` and each edge
    /// weighs the distance between its endpoints. Such weights are metrizable
    /// by construction.
    LinePlacement { length: f64 },
}

/// Which graph family to draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphClass {
    /// Uniform edge probability drawn per instance.
    Arbitrary,
    /// A random spanning tree plus extra random edges.
    Connected,
    /// Every vertex attaches to an earlier one, or starts a new tree.
    Forest,
    /// Complete multipartite with bounded part count and part size.
    CompleteMultipartite {
        max_parts: usize,
        max_part_size: usize,
    },
}

/// Deterministic, seeded random instances for the checks and benchmarks.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceGenerator {
    pub seed: u64,
    pub max_vertices: usize,
    pub weights: WeightDistribution,
    pub class: GraphClass,
}

/// Labels `a..z` when they suffice, zero-padded `v000...` otherwise, so label
/// order always matches index order.
fn vertex_labels(n: usize) -> Vec<String> {
    if n <= 26 {
        (0..n)
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect()
    } else {
        (0..n).map(|i| format!("v{i:04}")).collect()
    }
}

impl InstanceGenerator {
    /// Draws the instance for this generator's seed. The same generator
    /// always produces the same graph.
    pub fn generate(&self) -> WeightedGraph {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let max_n = self.max_vertices.max(1);
        let (n, pairs) = match self.class {
            GraphClass::Arbitrary => {
                let n = rng.random_range(1..=max_n);
                let p = rng.random_range(0.2..0.9);
                let mut pairs = Vec::new();
                for i in 0..n {
                    for j in (i + 1)..n {
                        if rng.random::<f64>() < p {
                            pairs.push((i, j));
                        }
                    }
                }
                (n, pairs)
            }
            GraphClass::Connected => {
                let n = rng.random_range(1..=max_n);
                let mut pairs = Vec::new();
                for v in 1..n {
                    pairs.push((rng.random_range(0..v), v));
                }
                let extra = rng.random_range(0.0..0.5);
                for i in 0..n {
                    for j in (i + 1)..n {
                        if !pairs.contains(&(i, j)) && rng.random::<f64>() < extra {
                            pairs.push((i, j));
                        }
                    }
                }
                (n, pairs)
            }
            GraphClass::Forest => {
                let n = rng.random_range(1..=max_n);
                let mut pairs = Vec::new();
                for v in 1..n {
                    if rng.random_bool(0.7) {
                        pairs.push((rng.random_range(0..v), v));
                    }
                }
                (n, pairs)
            }
            GraphClass::CompleteMultipartite {
                max_parts,
                max_part_size,
            } => {
                let parts = rng.random_range(2..=max_parts.max(2));
                let cap = max_part_size.max(1);
                let sizes: Vec<usize> = (0..parts).map(|_| rng.random_range(1..=cap)).collect();
                let n: usize = sizes.iter().sum();
                let mut part_of = Vec::with_capacity(n);
                for (p, &s) in sizes.iter().enumerate() {
                    part_of.extend(std::iter::repeat(p).take(s));
                }
                let mut pairs = Vec::new();
                for i in 0..n {
                    for j in (i + 1)..n {
                        if part_of[i] != part_of[j] {
                            pairs.push((i, j));
                        }
                    }
                }
                (n, pairs)
            }
        };
        let labels = vertex_labels(n);
        let weights: Vec<f64> = match self.weights {
            WeightDistribution::Uniform { max, zero_mass } => pairs
                .iter()
                .map(|_| {
                    if rng.random::<f64>() < zero_mass {
                        0.0
                    } else {
                        rng.random_range(0.0..max)
                    }
                })
                .collect(),
            WeightDistribution::LinePlacement { length } => {
                let xs: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..length)).collect();
                pairs.iter().map(|&(i, j)| (xs[i] - xs[j]).abs()).collect()
            }
        };
        let edges = pairs
            .iter()
            .zip(weights)
            .map(|(&(i, j), w)| (labels[i].clone(), labels[j].clone(), w))
            .collect();
        WeightedGraph::from_parts(labels, edges).expect("generated instances are valid")
    }
}
