//! Deciding whether a weight extends to a pseudometric.
//!
//! A weight `w` is metrizable exactly when it agrees with its own
//! shortest-path pseudometric on every edge, equivalently when every cycle
//! satisfies `2 * max_edge <= total`. The check compares each edge against
//! the all-pairs distances; a failing edge yields a violating cycle built
//! from the edge plus a shortest detour between its endpoints.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::graph::{CycleWitness, DistanceMatrix, GraphError, WeightedGraph};
use crate::shortest_path::{all_pairs_distance, shortest_path_witness};

/// Outcome of the metrizability decision.
#[derive(Debug, Clone, PartialEq)]
pub struct MetrizabilityReport {
    pub metrizable: bool,
    /// A violating cycle for the edge with the largest slack, if any.
    pub witness: Option<CycleWitness>,
    /// Largest value of `w(e) - d_w(u, v)` over edges `e = {u, v}`; zero for
    /// edgeless graphs. The weight is metrizable when this is within `eps`.
    pub worst_slack: f64,
    pub checked_edges: usize,
}

impl MetrizabilityReport {
    pub fn to_json_value(&self) -> serde_json::Value {
        json!({
            "metrizable": self.metrizable,
            "witness": self.witness.as_ref().map(CycleWitness::to_json_value),
            "worst_slack": self.worst_slack,
        })
    }
}

/// Compares every edge weight against the shortest-path distance of its
/// endpoints. Slack is never negative: the edge itself is a candidate path.
pub fn check_metrizable(g: &WeightedGraph, eps: f64) -> MetrizabilityReport {
    let d = all_pairs_distance(g);
    let mut worst_slack = 0.0;
    let mut worst: Option<(usize, usize, f64)> = None;
    for (u, v, w) in g.edge_indices() {
        let slack = w - d.get_at(u, v);
        if slack > worst_slack {
            worst_slack = slack;
            worst = Some((u, v, w));
        }
    }
    let metrizable = worst_slack <= eps;
    let witness = if metrizable {
        None
    } else {
        worst.map(|edge| violating_cycle(g, edge))
    };
    MetrizabilityReport {
        metrizable,
        witness,
        worst_slack,
        checked_edges: g.edge_count(),
    }
}

/// Closes a shortest detour around the violating edge into a cycle. The edge
/// is strictly heavier than the detour, so it is the cycle's maximal edge.
fn violating_cycle(g: &WeightedGraph, (u, v, w): (usize, usize, f64)) -> CycleWitness {
    let (lu, lv) = (g.label(u).to_string(), g.label(v).to_string());
    let detour = g.without_edge(&lu, &lv).expect("edge comes from the graph");
    let path = shortest_path_witness(&detour, &lu, &lv)
        .expect("labels come from the graph")
        .expect("an edge with positive slack lies on a cycle");
    let mut cycle = path.vertices;
    cycle.push(lu.clone());
    CycleWitness {
        cycle,
        max_edge: (lu, lv),
        lhs: 2.0 * w,
        rhs: w + path.total_weight,
    }
}

/// Bridge edges (their removal disconnects their endpoints), as canonical
/// label pairs. Computed with one depth-first low-link pass per component.
pub fn bridges(g: &WeightedGraph) -> BTreeSet<(String, String)> {
    let n = g.vertex_count();
    let mut tin = vec![usize::MAX; n];
    let mut low = vec![usize::MAX; n];
    let mut timer = 0;
    let mut found: Vec<(usize, usize)> = Vec::new();
    fn dfs(
        g: &WeightedGraph,
        v: usize,
        parent: usize,
        timer: &mut usize,
        tin: &mut [usize],
        low: &mut [usize],
        found: &mut Vec<(usize, usize)>,
    ) {
        tin[v] = *timer;
        low[v] = *timer;
        *timer += 1;
        for &(to, _) in g.neighbors(v) {
            if to == parent {
                continue;
            }
            if tin[to] != usize::MAX {
                low[v] = low[v].min(tin[to]);
            } else {
                dfs(g, to, v, timer, tin, low, found);
                low[v] = low[v].min(low[to]);
                if low[to] > tin[v] {
                    found.push((v, to));
                }
            }
        }
    }
    for v in 0..n {
        if tin[v] == usize::MAX {
            dfs(g, v, usize::MAX, &mut timer, &mut tin, &mut low, &mut found);
        }
    }
    found
        .into_iter()
        .map(|(u, v)| {
            let (a, b) = (g.label(u), g.label(v));
            if a < b {
                (a.to_string(), b.to_string())
            } else {
                (b.to_string(), a.to_string())
            }
        })
        .collect()
}

/// A graph is a forest exactly when every edge is a bridge.
pub fn is_forest(g: &WeightedGraph) -> bool {
    bridges(g).len() == g.edge_count()
}

/// True when every listed edge can be reassigned an arbitrary nonnegative
/// weight without ever breaking metrizability, which holds exactly when all
/// of them are bridges.
pub fn free_reweight_set(
    g: &WeightedGraph,
    edges: &[(String, String)],
) -> Result<bool, GraphError> {
    let b = bridges(g);
    for (u, v) in edges {
        if g.edge_weight(u, v).is_none() {
            return Err(GraphError::UnknownEdge(u.clone(), v.clone()));
        }
        let key = if u < v {
            (u.clone(), v.clone())
        } else {
            (v.clone(), u.clone())
        };
        if !b.contains(&key) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether some metric (not merely a pseudometric) extends the weight.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricExistence {
    pub exists: bool,
    pub explanation: String,
}

/// A metric extension exists iff the weight is metrizable and no two distinct
/// vertices are at shortest-path distance zero; cross-component distances can
/// always be chosen positive.
pub fn metric_exists(g: &WeightedGraph, eps: f64) -> MetricExistence {
    let report = check_metrizable(g, eps);
    if !report.metrizable {
        return MetricExistence {
            exists: false,
            explanation: format!(
                "the weight is not metrizable (worst slack {})",
                report.worst_slack
            ),
        };
    }
    let d = all_pairs_distance(g);
    let n = g.vertex_count();
    for i in 0..n {
        for j in (i + 1)..n {
            let dij = d.get_at(i, j);
            if dij.is_finite() && dij <= eps {
                return MetricExistence {
                    exists: false,
                    explanation: format!(
                        "distinct vertices '{}' and '{}' are at shortest-path distance {}, \
                         so every extension stays a pseudometric only",
                        g.label(i),
                        g.label(j),
                        dij
                    ),
                };
            }
        }
    }
    MetricExistence {
        exists: true,
        explanation: "the shortest-path distance separates distinct vertices within each \
                      component, and cross-component values can be chosen positive"
            .to_string(),
    }
}

/// Why a candidate matrix fails to be an extension of the weight.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MembershipError {
    #[error("matrix labels do not match the graph's vertex set")]
    DimensionMismatch,
    #[error("entry ({u}, {v}) is not finite")]
    NonFiniteEntry { u: String, v: String },
    #[error(transparent)]
    Violation(#[from] MembershipViolation),
}

/// A concrete pseudometric-extension axiom broken by the candidate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MembershipViolation {
    #[error("asymmetric at ({u}, {v}): {forward} vs {backward}")]
    Asymmetric {
        u: String,
        v: String,
        forward: f64,
        backward: f64,
    },
    #[error("nonzero diagonal at {v}: {value}")]
    NonzeroDiagonal { v: String, value: f64 },
    #[error("edge {{{u}, {v}}}: entry {entry} differs from weight {weight} beyond eps = {eps}")]
    EdgeMismatch {
        u: String,
        v: String,
        entry: f64,
        weight: f64,
        eps: f64,
    },
    #[error("triangle ({u}, {via}, {v}): {lhs} > {rhs} + {eps}")]
    TriangleViolation {
        u: String,
        via: String,
        v: String,
        lhs: f64,
        rhs: f64,
        eps: f64,
    },
}

/// Checks that `m` is a finite pseudometric on the graph's vertices agreeing
/// with the weight on every edge, within `eps`. Checks run in this order:
/// label alignment, finiteness, shape, edge agreement, triangle inequality;
/// the first failure is reported.
pub fn validate_membership(
    g: &WeightedGraph,
    m: &DistanceMatrix,
    eps: f64,
) -> Result<(), MembershipError> {
    let n = g.vertex_count();
    if m.len() != n {
        return Err(MembershipError::DimensionMismatch);
    }
    // Graph vertex i lives at matrix position pos[i]; order may differ.
    let mut pos = Vec::with_capacity(n);
    for label in g.vertices() {
        pos.push(
            m.index_of(label)
                .ok_or(MembershipError::DimensionMismatch)?,
        );
    }
    let at = |i: usize, j: usize| m.get_at(pos[i], pos[j]);
    for i in 0..n {
        for j in 0..n {
            if !at(i, j).is_finite() {
                return Err(MembershipError::NonFiniteEntry {
                    u: g.label(i).to_string(),
                    v: g.label(j).to_string(),
                });
            }
        }
    }
    for i in 0..n {
        if at(i, i) != 0.0 {
            return Err(MembershipViolation::NonzeroDiagonal {
                v: g.label(i).to_string(),
                value: at(i, i),
            }
            .into());
        }
        for j in (i + 1)..n {
            if at(i, j) != at(j, i) {
                return Err(MembershipViolation::Asymmetric {
                    u: g.label(i).to_string(),
                    v: g.label(j).to_string(),
                    forward: at(i, j),
                    backward: at(j, i),
                }
                .into());
            }
        }
    }
    for (u, v, w) in g.edge_indices() {
        let entry = at(u, v);
        if (entry - w).abs() > eps {
            return Err(MembershipViolation::EdgeMismatch {
                u: g.label(u).to_string(),
                v: g.label(v).to_string(),
                entry,
                weight: w,
                eps,
            }
            .into());
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for via in 0..n {
                if via == i || via == j {
                    continue;
                }
                let lhs = at(i, j);
                let rhs = at(i, via) + at(via, j);
                if lhs > rhs + eps {
                    return Err(MembershipViolation::TriangleViolation {
                        u: g.label(i).to_string(),
                        via: g.label(via).to_string(),
                        v: g.label(j).to_string(),
                        lhs,
                        rhs,
                        eps,
                    }
                    .into());
                }
            }
        }
    }
    Ok(())
}
