//! Complete multipartite graphs and the least pseudometric extension.
//!
//! On an arbitrary graph the metrizable extensions of a weight have a
//! greatest element (the shortest-path pseudometric) but in general no least
//! one. A least extension exists precisely on complete multipartite graphs
//! with at least two parts, where it has the closed form
//!
//! ```text
//! rho0(u, v) = max over p outside the part of u, v of |w(u, p) - w(p, v)|
//! ```
//!
//! for nonadjacent `u, v`, while the greatest one satisfies
//! `d_w(u, v) = min over p of (w(u, p) + w(p, v))`. Between the two bounds,
//! symmetric interpolation stays an extension when every part has at most two
//! vertices; a size-three part admits counterexamples.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{validate_matrix_shape, DistanceMatrix, GraphError, WeightedGraph};
use crate::metrization::{check_metrizable, validate_membership};
use crate::shortest_path::{all_pairs_distance, single_source};

/// Partition of the vertices witnessing a complete multipartite structure:
/// two vertices are adjacent exactly when they lie in different parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub k: usize,
    /// Parts sorted internally, and between each other by first label.
    pub parts: Vec<Vec<String>>,
}

impl Partition {
    /// Index of the part containing `label`.
    pub fn part_of(&self, label: &str) -> Option<usize> {
        self.parts
            .iter()
            .position(|part| part.iter().any(|v| v == label))
    }

    pub fn max_part_size(&self) -> usize {
        self.parts.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Recognizes complete multipartite graphs.
///
/// The parts are the connected components of the complement graph; the
/// structure is complete multipartite exactly when non-adjacency is
/// transitive, i.e. when no vertex is adjacent to exactly one of two
/// nonadjacent vertices. Returns `None` for other graphs and for the empty
/// graph; a complete graph yields all-singleton parts, an edgeless graph on
/// `n >= 1` vertices the single part of everything.
pub fn detect_partition(g: &WeightedGraph) -> Option<Partition> {
    let n = g.vertex_count();
    if n == 0 {
        return None;
    }
    let mut adjacent = vec![false; n * n];
    for (u, v, _) in g.edge_indices() {
        adjacent[u * n + v] = true;
        adjacent[v * n + u] = true;
    }
    let mut part_of = vec![usize::MAX; n];
    let mut count = 0;
    for start in 0..n {
        if part_of[start] != usize::MAX {
            continue;
        }
        part_of[start] = count;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for to in 0..n {
                if to != v && !adjacent[v * n + to] && part_of[to] == usize::MAX {
                    part_of[to] = count;
                    stack.push(to);
                }
            }
        }
        count += 1;
    }
    // Every cross-part pair must be an edge; within-part edges cannot occur
    // (complement components are non-adjacent by construction), so one pass
    // over all pairs settles both.
    for u in 0..n {
        for v in (u + 1)..n {
            if (part_of[u] != part_of[v]) != adjacent[u * n + v] {
                return None;
            }
        }
    }
    let mut parts = vec![Vec::new(); count];
    for v in 0..n {
        parts[part_of[v]].push(g.label(v).to_string());
    }
    for part in &mut parts {
        part.sort();
    }
    parts.sort();
    Some(Partition { k: count, parts })
}

/// Failure modes of the least-extension operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MultipartiteError {
    #[error("the graph is not complete multipartite")]
    NotMultipartite,
    #[error("a least extension needs at least two parts, found {k}")]
    TooFewParts { k: usize },
    #[error("the weight is not metrizable")]
    NotMetrizable,
    #[error("every part must have at most two vertices, found one of size {size}")]
    PartTooLarge { size: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("vertices '{0}' and '{0}' coincide")]
    IdenticalVertices(String),
    #[error("vertices '{0}' and '{1}' are adjacent; their value is fixed to the weight")]
    AdjacentVertices(String, String),
}

impl MultipartiteError {
    /// A verdict states a mathematical fact about the instance; anything else
    /// is a problem with the inputs themselves.
    pub fn is_verdict(&self) -> bool {
        matches!(
            self,
            MultipartiteError::NotMultipartite
                | MultipartiteError::TooFewParts { .. }
                | MultipartiteError::NotMetrizable
                | MultipartiteError::PartTooLarge { .. }
        )
    }
}

fn multipartite_context(
    g: &WeightedGraph,
    eps: f64,
) -> Result<(Partition, Vec<usize>), MultipartiteError> {
    let partition = detect_partition(g).ok_or(MultipartiteError::NotMultipartite)?;
    if partition.k < 2 {
        return Err(MultipartiteError::TooFewParts { k: partition.k });
    }
    if !check_metrizable(g, eps).metrizable {
        return Err(MultipartiteError::NotMetrizable);
    }
    let part_of: Vec<usize> = g
        .vertices()
        .iter()
        .map(|v| partition.part_of(v).expect("partition covers all vertices"))
        .collect();
    Ok((partition, part_of))
}

fn weight_table(g: &WeightedGraph) -> Vec<f64> {
    let n = g.vertex_count();
    let mut w = vec![f64::NAN; n * n];
    for (u, v, weight) in g.edge_indices() {
        w[u * n + v] = weight;
        w[v * n + u] = weight;
    }
    w
}

/// The least metrizable extension on a complete multipartite graph with at
/// least two parts. Nonadjacent pairs get the closed-form value; edges keep
/// their weight.
pub fn least_pseudometric(
    g: &WeightedGraph,
    eps: f64,
) -> Result<DistanceMatrix, MultipartiteError> {
    let (_, part_of) = multipartite_context(g, eps)?;
    let n = g.vertex_count();
    let w = weight_table(g);
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let value = if part_of[i] != part_of[j] {
                w[i * n + j]
            } else {
                let mut worst = 0.0f64;
                for p in 0..n {
                    if part_of[p] != part_of[i] {
                        worst = worst.max((w[i * n + p] - w[p * n + j]).abs());
                    }
                }
                worst
            };
            rows[i][j] = value;
            rows[j][i] = value;
        }
    }
    Ok(DistanceMatrix::from_rows(g.vertices().to_vec(), rows)
        .expect("least-extension entries are nonnegative"))
}

/// The attainable interval `[rho0(u, v), d_w(u, v)]` for a nonadjacent pair
/// on a complete multipartite graph.
///
/// Asserts the structural identity that the greatest extension equals the
/// best two-edge detour `min over p of (w(u, p) + w(p, v))`.
pub fn greatest_vs_least_interval(
    g: &WeightedGraph,
    u: &str,
    v: &str,
    eps: f64,
) -> Result<(f64, f64), MultipartiteError> {
    let iu = g
        .index_of(u)
        .ok_or_else(|| GraphError::UnknownVertex(u.to_string()))?;
    let iv = g
        .index_of(v)
        .ok_or_else(|| GraphError::UnknownVertex(v.to_string()))?;
    if iu == iv {
        return Err(MultipartiteError::IdenticalVertices(u.to_string()));
    }
    if g.edge_weight_indexed(iu, iv).is_some() {
        return Err(MultipartiteError::AdjacentVertices(
            u.to_string(),
            v.to_string(),
        ));
    }
    let (_, part_of) = multipartite_context(g, eps)?;
    let n = g.vertex_count();
    let w = weight_table(g);
    let mut lower = 0.0f64;
    let mut two_hop = f64::INFINITY;
    for p in 0..n {
        if part_of[p] != part_of[iu] {
            lower = lower.max((w[iu * n + p] - w[p * n + iv]).abs());
            two_hop = two_hop.min(w[iu * n + p] + w[p * n + iv]);
        }
    }
    let upper = single_source(g, iu, None)[iv];
    assert!(
        (upper - two_hop).abs() <= eps.max(1e-9),
        "greatest extension {upper} must equal the best two-edge detour {two_hop}"
    );
    Ok((lower, upper))
}

/// Failure modes when checking a candidate against the sandwich property.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SandwichError {
    #[error("precondition: {0}")]
    Precondition(#[from] MultipartiteError),
    #[error("candidate matrix: {0}")]
    Candidate(String),
    #[error("entry ({u}, {v}) = {value} lies outside [{lower}, {upper}]")]
    OutsideEnvelope {
        u: String,
        v: String,
        value: f64,
        lower: f64,
        upper: f64,
    },
    #[error("sandwich property violated, which contradicts the structure theorem: {0}")]
    TheoremViolation(String),
}

fn sandwich_context(
    g: &WeightedGraph,
    eps: f64,
) -> Result<(DistanceMatrix, DistanceMatrix), SandwichError> {
    let (partition, _) = multipartite_context(g, eps)?;
    let size = partition.max_part_size();
    if size > 2 {
        return Err(MultipartiteError::PartTooLarge { size }.into());
    }
    let least = least_pseudometric(g, eps)?;
    let greatest = all_pairs_distance(g);
    Ok((least, greatest))
}

/// Checks that a symmetric candidate lying between the least and greatest
/// extensions is itself an extension. Requires a metrizable weight on a
/// complete multipartite graph, at least two parts, every part of size at
/// most two. A candidate outside the envelope is rejected as such; one inside
/// the envelope failing membership would contradict the structure theorem and
/// is reported as a theorem violation.
pub fn sandwich_validate(
    g: &WeightedGraph,
    candidate: &DistanceMatrix,
    eps: f64,
) -> Result<(), SandwichError> {
    let (least, greatest) = sandwich_context(g, eps)?;
    let n = g.vertex_count();
    if candidate.len() != n {
        return Err(SandwichError::Candidate(
            "labels do not match the graph's vertex set".to_string(),
        ));
    }
    let mut pos = Vec::with_capacity(n);
    for label in g.vertices() {
        pos.push(candidate.index_of(label).ok_or_else(|| {
            SandwichError::Candidate("labels do not match the graph's vertex set".to_string())
        })?);
    }
    for i in 0..n {
        for j in 0..n {
            if !candidate.get_at(pos[i], pos[j]).is_finite() {
                return Err(SandwichError::Candidate(format!(
                    "entry ({}, {}) is not finite",
                    g.label(i),
                    g.label(j)
                )));
            }
        }
    }
    if let Err(e) = validate_matrix_shape(candidate) {
        return Err(SandwichError::Candidate(e.to_string()));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let value = candidate.get_at(pos[i], pos[j]);
            let lower = least.get_at(i, j);
            let upper = greatest.get_at(i, j);
            if value < lower - eps || value > upper + eps {
                return Err(SandwichError::OutsideEnvelope {
                    u: g.label(i).to_string(),
                    v: g.label(j).to_string(),
                    value,
                    lower,
                    upper,
                });
            }
        }
    }
    validate_membership(g, candidate, eps)
        .map_err(|e| SandwichError::TheoremViolation(e.to_string()))
}

/// Draws a random extension by sampling every nonadjacent pair uniformly
/// from its interval `[rho0, d_w]`. Same preconditions as
/// [`sandwich_validate`]; the result is deterministic in `seed`.
pub fn sandwich_sample(
    g: &WeightedGraph,
    seed: u64,
    eps: f64,
) -> Result<DistanceMatrix, SandwichError> {
    let (least, greatest) = sandwich_context(g, eps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.vertex_count();
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let lower = least.get_at(i, j);
            let upper = greatest.get_at(i, j);
            // Rounding can push the sample, or a degenerate interval's lower
            // bound, one ulp past the greatest extension; members never
            // exceed it, so cap there.
            let value = if lower < upper {
                rng.random_range(lower..=upper).min(upper)
            } else {
                lower.min(upper)
            };
            rows[i][j] = value;
            rows[j][i] = value;
        }
    }
    Ok(DistanceMatrix::from_rows(g.vertices().to_vec(), rows)
        .expect("sampled entries are nonnegative"))
}

/// A star is a complete bipartite graph with a singleton side.
pub fn is_star(g: &WeightedGraph) -> bool {
    match detect_partition(g) {
        Some(p) => p.k == 2 && p.parts.iter().any(|part| part.len() == 1),
        None => false,
    }
}

/// Closed-form analysis of the weighted quadrilateral: consecutive side
/// weights `a, b, c, k` on the 4-cycle `v1 v2 v3 v4`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadReport {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub k: f64,
    pub metrizable: bool,
    /// Attainable values for the diagonal pair `{v1, v3}`.
    pub v1_v3: [f64; 2],
    /// Attainable values for the diagonal pair `{v2, v4}`.
    pub v2_v4: [f64; 2],
}

/// The 4-cycle `v1 v2 v3 v4` with consecutive side weights `a, b, c, k`.
pub fn quadrilateral(a: f64, b: f64, c: f64, k: f64) -> Result<WeightedGraph, GraphError> {
    WeightedGraph::from_parts(
        ["v1", "v2", "v3", "v4"].map(String::from).to_vec(),
        vec![
            ("v1".to_string(), "v2".to_string(), a),
            ("v2".to_string(), "v3".to_string(), b),
            ("v3".to_string(), "v4".to_string(), c),
            ("v4".to_string(), "v1".to_string(), k),
        ],
    )
}

/// Evaluates the quadrilateral in closed form: metrizable exactly when twice
/// the largest side is at most the perimeter, with diagonal intervals
/// `[max(|a-b|, |c-k|), min(a+b, c+k)]` and `[max(|b-c|, |a-k|), min(b+c, a+k)]`.
/// The intervals are reported regardless of the verdict.
pub fn analyze_quadrilateral(
    a: f64,
    b: f64,
    c: f64,
    k: f64,
    eps: f64,
) -> Result<QuadReport, GraphError> {
    for (side, other, w) in [
        ("v1", "v2", a),
        ("v2", "v3", b),
        ("v3", "v4", c),
        ("v4", "v1", k),
    ] {
        if w.is_nan() || w.is_infinite() {
            return Err(GraphError::NonFiniteWeight {
                u: side.to_string(),
                v: other.to_string(),
            });
        }
        if w < 0.0 {
            return Err(GraphError::NegativeWeight {
                u: side.to_string(),
                v: other.to_string(),
                weight: w,
            });
        }
    }
    let perimeter = a + b + c + k;
    let largest = a.max(b).max(c).max(k);
    Ok(QuadReport {
        a,
        b,
        c,
        k,
        metrizable: 2.0 * largest <= perimeter + eps,
        v1_v3: [(a - b).abs().max((c - k).abs()), (a + b).min(c + k)],
        v2_v4: [(b - c).abs().max((a - k).abs()), (b + c).min(a + k)],
    })
}
