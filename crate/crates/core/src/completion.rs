//! Extending a metrizable weight across a disconnected graph.
//!
//! The shortest-path pseudometric leaves cross-component distances infinite.
//! A finite completion picks an anchor vertex per component and a nonnegative
//! constant per component (zero for a chosen base component), then joins
//!
//! ```text
//! rho(u, v) = a_i + a_j + d_w(u, anchor_i) + d_w(v, anchor_j)
//! ```
//!
//! for `u, v` in distinct components `i, j`. The same values are realized by
//! shortest paths in a star supergraph that links every anchor to the base
//! anchor by an edge of weight `a_i`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{connected_components, DistanceMatrix, GraphError, WeightedGraph};
use crate::metrization::check_metrizable;
use crate::shortest_path::all_pairs_distance;

/// Per-component data for a completion. Components are keyed by their
/// representative, the lexicographically smallest member label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionSpec {
    /// Anchor vertex of each component.
    pub anchors: BTreeMap<String, String>,
    /// Representative of the base component, whose constant is zero.
    pub base: String,
    /// Join constant `a_i >= 0` per component; the base entry, if present,
    /// must be zero.
    pub constants: BTreeMap<String, f64>,
}

/// Invalid completion spec or a weight with no completion.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompletionError {
    #[error("the weight is not metrizable")]
    NotMetrizable,
    #[error("'{0}' does not represent a component")]
    UnknownComponent(String),
    #[error("missing anchor for component '{0}'")]
    MissingAnchor(String),
    #[error("anchor '{anchor}' lies outside component '{rep}'")]
    AnchorOutsideComponent { anchor: String, rep: String },
    #[error("missing constant for component '{0}'")]
    MissingConstant(String),
    #[error("constant {value} for component '{rep}' must be finite and nonnegative")]
    InvalidConstant { rep: String, value: f64 },
    #[error("the base component's constant must be 0, found {0}")]
    BaseConstantNonzero(f64),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl CompletionError {
    /// A verdict states a mathematical fact about the instance; anything else
    /// is a problem with the inputs themselves.
    pub fn is_verdict(&self) -> bool {
        matches!(self, CompletionError::NotMetrizable)
    }
}

/// Components keyed by representative, in representative order.
pub fn component_reps(g: &WeightedGraph) -> Vec<(String, Vec<String>)> {
    let mut reps: Vec<(String, Vec<String>)> = connected_components(g)
        .into_iter()
        .map(|members| {
            let rep = members
                .iter()
                .min()
                .expect("components are nonempty")
                .clone();
            (rep, members)
        })
        .collect();
    reps.sort();
    reps
}

impl CompletionSpec {
    /// Canonical default: each component anchored at its representative, the
    /// component of the smallest label as base, and unit constants elsewhere.
    pub fn default_for(g: &WeightedGraph) -> Self {
        let reps = component_reps(g);
        let base = reps.first().map(|(rep, _)| rep.clone()).unwrap_or_default();
        let mut anchors = BTreeMap::new();
        let mut constants = BTreeMap::new();
        for (rep, _) in &reps {
            anchors.insert(rep.clone(), rep.clone());
            constants.insert(rep.clone(), if *rep == base { 0.0 } else { 1.0 });
        }
        CompletionSpec {
            anchors,
            base,
            constants,
        }
    }

    /// Checks the spec against the graph's component structure and resolves
    /// it into per-component indices.
    fn resolve(&self, g: &WeightedGraph) -> Result<Resolved, CompletionError> {
        let reps = component_reps(g);
        let rep_index: BTreeMap<&str, usize> = reps
            .iter()
            .enumerate()
            .map(|(i, (rep, _))| (rep.as_str(), i))
            .collect();
        for key in self.anchors.keys().chain(self.constants.keys()) {
            if !rep_index.contains_key(key.as_str()) {
                return Err(CompletionError::UnknownComponent(key.clone()));
            }
        }
        let base = *rep_index
            .get(self.base.as_str())
            .ok_or_else(|| CompletionError::UnknownComponent(self.base.clone()))?;
        let mut anchor_of = Vec::with_capacity(reps.len());
        let mut constant_of = Vec::with_capacity(reps.len());
        for (i, (rep, members)) in reps.iter().enumerate() {
            let anchor = self
                .anchors
                .get(rep)
                .ok_or_else(|| CompletionError::MissingAnchor(rep.clone()))?;
            if !members.contains(anchor) {
                return Err(CompletionError::AnchorOutsideComponent {
                    anchor: anchor.clone(),
                    rep: rep.clone(),
                });
            }
            anchor_of.push(g.index_of(anchor).expect("anchor is a member"));
            let a = match self.constants.get(rep) {
                Some(&a) => a,
                None if i == base => 0.0,
                None => return Err(CompletionError::MissingConstant(rep.clone())),
            };
            if !a.is_finite() || a < 0.0 {
                return Err(CompletionError::InvalidConstant {
                    rep: rep.clone(),
                    value: a,
                });
            }
            if i == base && a != 0.0 {
                return Err(CompletionError::BaseConstantNonzero(a));
            }
            constant_of.push(a);
        }
        let mut component_of = vec![usize::MAX; g.vertex_count()];
        for (i, (_, members)) in reps.iter().enumerate() {
            for label in members {
                component_of[g.index_of(label).expect("member label")] = i;
            }
        }
        Ok(Resolved {
            component_of,
            anchor_of,
            constant_of,
            base,
        })
    }

    /// Validates the spec against the graph without computing anything.
    pub fn validate(&self, g: &WeightedGraph) -> Result<(), CompletionError> {
        self.resolve(g).map(|_| ())
    }
}

struct Resolved {
    component_of: Vec<usize>,
    anchor_of: Vec<usize>,
    constant_of: Vec<f64>,
    base: usize,
}

/// Finite pseudometric extension of a metrizable weight on a possibly
/// disconnected graph. Within components it is the shortest-path
/// pseudometric; across components it joins through the anchors. In
/// particular the anchor of component `i` sits at distance exactly `a_i`
/// from the base anchor.
pub fn complete_disconnected(
    g: &WeightedGraph,
    spec: &CompletionSpec,
    eps: f64,
) -> Result<DistanceMatrix, CompletionError> {
    let resolved = spec.resolve(g)?;
    if !check_metrizable(g, eps).metrizable {
        return Err(CompletionError::NotMetrizable);
    }
    let d = all_pairs_distance(g);
    let n = g.vertex_count();
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let (ci, cj) = (resolved.component_of[i], resolved.component_of[j]);
            let value = if ci == cj {
                d.get_at(i, j)
            } else {
                resolved.constant_of[ci]
                    + resolved.constant_of[cj]
                    + d.get_at(i, resolved.anchor_of[ci])
                    + d.get_at(j, resolved.anchor_of[cj])
            };
            rows[i][j] = value;
            rows[j][i] = value;
        }
    }
    Ok(DistanceMatrix::from_rows(g.vertices().to_vec(), rows)
        .expect("completion entries are nonnegative"))
}

/// The connected supergraph realizing a completion: every non-base anchor is
/// linked to the base anchor by an edge weighted with its component's
/// constant. A connected graph comes back unchanged.
pub fn star_supergraph(
    g: &WeightedGraph,
    spec: &CompletionSpec,
) -> Result<WeightedGraph, CompletionError> {
    let resolved = spec.resolve(g)?;
    let base = resolved.base;
    let mut edges: Vec<(String, String, f64)> = g
        .edges()
        .map(|(u, v, w)| (u.to_string(), v.to_string(), w))
        .collect();
    let base_anchor = g.label(resolved.anchor_of[base]).to_string();
    for (c, &anchor) in resolved.anchor_of.iter().enumerate() {
        if c != base {
            edges.push((
                g.label(anchor).to_string(),
                base_anchor.clone(),
                resolved.constant_of[c],
            ));
        }
    }
    Ok(WeightedGraph::from_parts(g.vertices().to_vec(), edges)?)
}
