//! The shortest-path pseudometric induced by an edge weight.
//!
//! `d_w(u, v)` is the infimum of total weights over paths from `u` to `v`,
//! `+inf` when no path exists. It is the greatest pseudometric that is bounded
//! above by `w` on every edge.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::graph::{DistanceMatrix, GraphError, WeightedGraph};

/// Strategy for the all-pairs computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    /// Priority-queue relaxation from every source, sources in parallel.
    PerSourceQueue,
    /// Cubic triple-loop relaxation over the full matrix.
    DenseRelaxation,
}

/// All pairwise shortest-path distances, using the per-source queue strategy.
pub fn all_pairs_distance(g: &WeightedGraph) -> DistanceMatrix {
    all_pairs_distance_with(g, Algorithm::PerSourceQueue)
}

/// All pairwise shortest-path distances with an explicit strategy.
///
/// The result is exactly symmetric with an exactly zero diagonal: the entry
/// for `{i, j}` is computed once and mirrored.
pub fn all_pairs_distance_with(g: &WeightedGraph, algorithm: Algorithm) -> DistanceMatrix {
    let n = g.vertex_count();
    let rows: Vec<Vec<f64>> = match algorithm {
        Algorithm::PerSourceQueue => (0..n)
            .into_par_iter()
            .map(|s| single_source(g, s, None))
            .collect(),
        Algorithm::DenseRelaxation => dense_relaxation(g),
    };
    DistanceMatrix::build(g.vertices().to_vec(), |i, j| {
        if i <= j {
            rows[i][j]
        } else {
            rows[j][i]
        }
    })
    .expect("shortest-path distances lie in [0, +inf]")
}

/// Heap key ordered by `f64::total_cmp`; distances are never NaN.
#[derive(PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source distances; vertices marked in `blocked` are impassable.
pub(crate) fn single_source(
    g: &WeightedGraph,
    source: usize,
    blocked: Option<&[bool]>,
) -> Vec<f64> {
    let n = g.vertex_count();
    let passable = |v: usize| blocked.map_or(true, |b| !b[v]);
    let mut dist = vec![f64::INFINITY; n];
    if !passable(source) {
        return dist;
    }
    dist[source] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((Key(0.0), source)));
    while let Some(Reverse((Key(d), v))) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        for &(to, w) in g.neighbors(v) {
            if !passable(to) {
                continue;
            }
            let alt = d + w;
            if alt < dist[to] {
                dist[to] = alt;
                heap.push(Reverse((Key(alt), to)));
            }
        }
    }
    dist
}

fn dense_relaxation(g: &WeightedGraph) -> Vec<Vec<f64>> {
    let n = g.vertex_count();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for (u, v, w) in g.edge_indices() {
        if w < d[u][v] {
            d[u][v] = w;
            d[v][u] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i][k];
            if dik.is_infinite() {
                continue;
            }
            for j in 0..n {
                let alt = dik + d[k][j];
                if alt < d[i][j] {
                    d[i][j] = alt;
                }
            }
        }
    }
    d
}

/// A concrete path realizing a shortest-path distance.
#[derive(Debug, Clone, PartialEq)]
pub struct PathRecord {
    pub vertices: Vec<String>,
    pub total_weight: f64,
}

/// Relative tolerance for treating near-equal path weights as ties.
const TIE_EPS: f64 = 1e-12;

/// A minimum-weight simple path from `u` to `v`, `None` when disconnected.
///
/// Among minimum-weight paths the lexicographically smallest vertex sequence
/// is returned, so the witness is deterministic. Built greedily: from the
/// current endpoint, every neighbor is scored by prefix weight plus its
/// remaining distance to `v` in the graph without the vertices already used,
/// and the smallest-labeled neighbor achieving the minimum score is taken.
pub fn shortest_path_witness(
    g: &WeightedGraph,
    u: &str,
    v: &str,
) -> Result<Option<PathRecord>, GraphError> {
    let start = g
        .index_of(u)
        .ok_or_else(|| GraphError::UnknownVertex(u.to_string()))?;
    let goal = g
        .index_of(v)
        .ok_or_else(|| GraphError::UnknownVertex(v.to_string()))?;
    if start == goal {
        return Ok(Some(PathRecord {
            vertices: vec![u.to_string()],
            total_weight: 0.0,
        }));
    }
    if single_source(g, goal, None)[start].is_infinite() {
        return Ok(None);
    }
    let mut blocked = vec![false; g.vertex_count()];
    let mut path = vec![start];
    let mut total = 0.0;
    let mut current = start;
    while current != goal {
        blocked[current] = true;
        let to_goal = single_source(g, goal, Some(&blocked));
        let mut best_score = f64::INFINITY;
        for &(to, w) in g.neighbors(current) {
            if !blocked[to] && to_goal[to].is_finite() {
                best_score = best_score.min(total + w + to_goal[to]);
            }
        }
        let tolerance = TIE_EPS * best_score.abs().max(1.0);
        let mut chosen: Option<(usize, f64)> = None;
        for &(to, w) in g.neighbors(current) {
            if blocked[to] || to_goal[to].is_infinite() {
                continue;
            }
            if total + w + to_goal[to] <= best_score + tolerance {
                let better = match chosen {
                    None => true,
                    Some((prev, _)) => g.label(to) < g.label(prev),
                };
                if better {
                    chosen = Some((to, w));
                }
            }
        }
        // The goal stays reachable from some neighbor: it was reachable when
        // `current` was chosen, and `current` is the only vertex blocked since.
        let (next, w) = chosen.expect("goal remains reachable from the current endpoint");
        total += w;
        path.push(next);
        current = next;
    }
    Ok(Some(PathRecord {
        vertices: path.into_iter().map(|i| g.label(i).to_string()).collect(),
        total_weight: total,
    }))
}
