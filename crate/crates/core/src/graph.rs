//! Core types: weighted graphs, distance matrices, and cycle witnesses.
//!
//! A [`WeightedGraph`] is a finite simple graph with nonnegative finite edge
//! weights. Vertices carry string labels and keep their declaration order;
//! each edge is stored with the lexicographically smaller endpoint first, and
//! the canonical edge order is lexicographic on those pairs. A
//! [`DistanceMatrix`] is a square symmetric-by-use table over the same labels
//! with entries in `[0, +inf]`; `+inf` marks vertex pairs separated into
//! different connected components.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use serde::Deserialize;
use serde_json::json;
use thiserror::Error;

/// Violation of a structural invariant of a weighted graph.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex '{0}'")]
    SelfLoop(String),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(String, String),
    #[error("edge {{{u}, {v}}} has negative weight {weight}")]
    NegativeWeight { u: String, v: String, weight: f64 },
    #[error("edge {{{u}, {v}}} has non-finite weight")]
    NonFiniteWeight { u: String, v: String },
    #[error("unknown vertex '{0}'")]
    UnknownVertex(String),
    #[error("duplicate vertex '{0}'")]
    DuplicateVertex(String),
    #[error("no edge {{{0}, {1}}} in the graph")]
    UnknownEdge(String, String),
}

/// Error while reading a graph or matrix from text.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: {source}")]
    Graph {
        line: usize,
        #[source]
        source: GraphError,
    },
    #[error("invalid JSON graph: {0}")]
    Json(String),
    #[error("invalid matrix: {0}")]
    Matrix(String),
}

/// Finite simple graph with a nonnegative weight on every edge.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<Vec<(usize, f64)>>,
    /// Endpoints ordered so `labels[e.0] < labels[e.1]` lexicographically.
    edges: Vec<(usize, usize, f64)>,
}

impl PartialEq for WeightedGraph {
    /// Same labeled vertex sequence and the same weighted edge set.
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.sorted_edge_indices() == other.sorted_edge_indices()
    }
}

impl WeightedGraph {
    /// Builds a graph from declared vertices and weighted edges.
    ///
    /// Rejects duplicate vertices, unknown endpoints, self-loops, duplicate
    /// unordered pairs, and negative or non-finite weights.
    pub fn from_parts(
        vertices: Vec<String>,
        edges: Vec<(String, String, f64)>,
    ) -> Result<Self, GraphError> {
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, label) in vertices.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(label.clone()));
            }
        }
        let mut graph = WeightedGraph {
            adj: vec![Vec::new(); vertices.len()],
            labels: vertices,
            index,
            edges: Vec::with_capacity(edges.len()),
        };
        let mut seen = HashSet::with_capacity(edges.len());
        for (u, v, w) in edges {
            let iu = graph
                .index_of(&u)
                .ok_or_else(|| GraphError::UnknownVertex(u.clone()))?;
            let iv = graph
                .index_of(&v)
                .ok_or_else(|| GraphError::UnknownVertex(v.clone()))?;
            check_edge(&u, &v, iu, iv, w)?;
            let key = if graph.labels[iu] < graph.labels[iv] {
                (iu, iv)
            } else {
                (iv, iu)
            };
            if !seen.insert(key) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            graph.edges.push((key.0, key.1, w));
            graph.adj[iu].push((iv, w));
            graph.adj[iv].push((iu, w));
        }
        Ok(graph)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Vertex labels in declaration order.
    pub fn vertices(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn contains_vertex(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }

    /// Adjacency list of vertex `i` as `(neighbor index, weight)` pairs.
    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.adj[i]
    }

    /// Edges as label triples, in insertion order.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, f64)> + '_ {
        self.edges
            .iter()
            .map(|&(u, v, w)| (self.labels[u].as_str(), self.labels[v].as_str(), w))
    }

    /// Edges as index triples, in insertion order.
    pub fn edge_indices(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_weight(&self, u: &str, v: &str) -> Option<f64> {
        let iu = self.index_of(u)?;
        let iv = self.index_of(v)?;
        self.edge_weight_indexed(iu, iv)
    }

    pub fn edge_weight_indexed(&self, i: usize, j: usize) -> Option<f64> {
        self.adj[i]
            .iter()
            .find(|&&(to, _)| to == j)
            .map(|&(_, w)| w)
    }

    pub fn has_edge(&self, u: &str, v: &str) -> bool {
        self.edge_weight(u, v).is_some()
    }

    fn sorted_edge_indices(&self) -> Vec<(usize, usize, f64)> {
        let mut es = self.edges.clone();
        es.sort_by(|a, b| {
            (&self.labels[a.0], &self.labels[a.1]).cmp(&(&self.labels[b.0], &self.labels[b.1]))
        });
        es
    }

    /// Same graph with edges rewritten into canonical (sorted) order.
    pub fn canonicalize(&self) -> Self {
        let mut out = WeightedGraph {
            labels: self.labels.clone(),
            index: self.index.clone(),
            adj: vec![Vec::new(); self.labels.len()],
            edges: self.sorted_edge_indices(),
        };
        for &(u, v, w) in &out.edges {
            out.adj[u].push((v, w));
            out.adj[v].push((u, w));
        }
        out
    }

    /// Copy of the graph with the edge `{u, v}` removed.
    pub fn without_edge(&self, u: &str, v: &str) -> Result<Self, GraphError> {
        let (iu, iv) = self.known_edge(u, v)?;
        let edges = self
            .edges()
            .filter(|&(a, b, _)| {
                let (ia, ib) = (self.index[a], self.index[b]);
                (ia, ib) != (iu, iv) && (ia, ib) != (iv, iu)
            })
            .map(|(a, b, w)| (a.to_string(), b.to_string(), w))
            .collect();
        WeightedGraph::from_parts(self.labels.clone(), edges)
    }

    /// Copy of the graph with the weight of edge `{u, v}` replaced.
    pub fn with_edge_weight(&self, u: &str, v: &str, weight: f64) -> Result<Self, GraphError> {
        let (iu, iv) = self.known_edge(u, v)?;
        let edges = self
            .edges()
            .map(|(a, b, w)| {
                let (ia, ib) = (self.index[a], self.index[b]);
                let hit = (ia, ib) == (iu, iv) || (ia, ib) == (iv, iu);
                (a.to_string(), b.to_string(), if hit { weight } else { w })
            })
            .collect();
        WeightedGraph::from_parts(self.labels.clone(), edges)
    }

    fn known_edge(&self, u: &str, v: &str) -> Result<(usize, usize), GraphError> {
        let iu = self
            .index_of(u)
            .ok_or_else(|| GraphError::UnknownVertex(u.to_string()))?;
        let iv = self
            .index_of(v)
            .ok_or_else(|| GraphError::UnknownVertex(v.to_string()))?;
        if self.edge_weight_indexed(iu, iv).is_none() {
            return Err(GraphError::UnknownEdge(u.to_string(), v.to_string()));
        }
        Ok((iu, iv))
    }

    /// Serializes to the line-oriented edge-list format.
    ///
    /// Every vertex gets a `node` line (declaration order), then every edge a
    /// `edge` line in canonical order, so parsing the output reproduces the
    /// canonicalized graph.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for label in &self.labels {
            let _ = writeln!(out, "node {label}");
        }
        for (u, v, w) in self.canonicalize().edges() {
            let _ = writeln!(out, "edge {u} {v} {}", fmt_value(w));
        }
        out
    }

    /// Serializes to the JSON object form `{"vertices": [...], "edges": [[u, v, w], ...]}`.
    pub fn to_json_value(&self) -> serde_json::Value {
        let edges: Vec<serde_json::Value> = self
            .canonicalize()
            .edges()
            .map(|(u, v, w)| json!([u, v, w]))
            .collect();
        json!({ "vertices": self.labels, "edges": edges })
    }
}

fn check_edge(u: &str, v: &str, iu: usize, iv: usize, w: f64) -> Result<(), GraphError> {
    if iu == iv {
        return Err(GraphError::SelfLoop(u.to_string()));
    }
    if w.is_nan() || w.is_infinite() {
        return Err(GraphError::NonFiniteWeight {
            u: u.to_string(),
            v: v.to_string(),
        });
    }
    if w < 0.0 {
        return Err(GraphError::NegativeWeight {
            u: u.to_string(),
            v: v.to_string(),
            weight: w,
        });
    }
    Ok(())
}

/// Formats a value for text output; `+inf` becomes the token `inf`.
pub fn fmt_value(v: f64) -> String {
    if v.is_infinite() {
        "inf".to_string()
    } else {
        format!("{v}")
    }
}

/// Parses the line-oriented edge-list format.
///
/// `#` starts a comment, blank lines are skipped. `node <label>` declares a
/// vertex; `edge <u> <v> <w>` declares an edge and implicitly declares any
/// endpoint not seen before, in order of first appearance. Redeclaring a
/// vertex via `node` is an error.
pub fn parse_edge_list(text: &str) -> Result<WeightedGraph, ParseError> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    fn declare(label: &str, labels: &mut Vec<String>, index: &mut HashMap<String, usize>) {
        if !index.contains_key(label) {
            index.insert(label.to_string(), labels.len());
            labels.push(label.to_string());
        }
    }
    let mut edges: Vec<(String, String, f64)> = Vec::new();
    let mut seen_pairs: HashSet<(String, String)> = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let keyword = tokens.next().unwrap_or("");
        let rest: Vec<&str> = tokens.collect();
        match keyword {
            "node" => {
                let [label] = rest[..] else {
                    return Err(ParseError::Malformed {
                        line,
                        message: "expected 'node <label>'".to_string(),
                    });
                };
                if index.contains_key(label) {
                    return Err(ParseError::Graph {
                        line,
                        source: GraphError::DuplicateVertex(label.to_string()),
                    });
                }
                declare(label, &mut labels, &mut index);
            }
            "edge" => {
                let [u, v, wtok] = rest[..] else {
                    return Err(ParseError::Malformed {
                        line,
                        message: "expected 'edge <u> <v> <weight>'".to_string(),
                    });
                };
                let w: f64 = wtok.parse().map_err(|_| ParseError::Malformed {
                    line,
                    message: format!("invalid weight '{wtok}'"),
                })?;
                declare(u, &mut labels, &mut index);
                declare(v, &mut labels, &mut index);
                check_edge(u, v, index[u], index[v], w)
                    .map_err(|source| ParseError::Graph { line, source })?;
                let key = if u < v {
                    (u.to_string(), v.to_string())
                } else {
                    (v.to_string(), u.to_string())
                };
                if !seen_pairs.insert(key) {
                    return Err(ParseError::Graph {
                        line,
                        source: GraphError::DuplicateEdge(u.to_string(), v.to_string()),
                    });
                }
                edges.push((u.to_string(), v.to_string(), w));
            }
            other => {
                return Err(ParseError::Malformed {
                    line,
                    message: format!("unknown directive '{other}'"),
                });
            }
        }
    }
    WeightedGraph::from_parts(labels, edges).map_err(|source| ParseError::Graph { line: 0, source })
}

#[derive(Deserialize)]
struct GraphJson {
    vertices: Vec<String>,
    edges: Vec<(String, String, f64)>,
}

/// Parses the JSON object form. Edge endpoints must appear in `vertices`.
pub fn parse_json(text: &str) -> Result<WeightedGraph, ParseError> {
    let parsed: GraphJson =
        serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
    WeightedGraph::from_parts(parsed.vertices, parsed.edges)
        .map_err(|e| ParseError::Json(e.to_string()))
}

/// Connected components, each listed in declared vertex order; components
/// ordered by their earliest declared vertex.
pub fn connected_components(g: &WeightedGraph) -> Vec<Vec<String>> {
    let n = g.vertex_count();
    let mut component = vec![usize::MAX; n];
    let mut count = 0;
    for start in 0..n {
        if component[start] != usize::MAX {
            continue;
        }
        component[start] = count;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &(to, _) in g.neighbors(v) {
                if component[to] == usize::MAX {
                    component[to] = count;
                    queue.push_back(to);
                }
            }
        }
        count += 1;
    }
    let mut parts = vec![Vec::new(); count];
    for v in 0..n {
        parts[component[v]].push(g.label(v).to_string());
    }
    parts
}

/// Entry-level violation of the matrix value domain.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("duplicate label '{0}'")]
    DuplicateLabel(String),
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    RowLength {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("entry ({u}, {v}) = {value} lies outside [0, +inf]")]
    InvalidEntry { u: String, v: String, value: f64 },
}

/// Square table of pairwise values over labeled vertices.
///
/// Entries are nonnegative and never NaN; `+inf` is allowed. Symmetry and a
/// zero diagonal are properties of particular matrices, checked by
/// [`validate_matrix_shape`], not enforced by the type.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    values: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_rows(labels: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self, MatrixError> {
        let n = labels.len();
        if rows.len() != n {
            return Err(MatrixError::RowCount {
                expected: n,
                found: rows.len(),
            });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(MatrixError::RowLength {
                    row: i,
                    found: row.len(),
                    expected: n,
                });
            }
        }
        Self::build(labels, |i, j| rows[i][j])
    }

    /// Builds an `n x n` matrix from a function of index pairs.
    pub fn build(
        labels: Vec<String>,
        mut entry: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self, MatrixError> {
        let n = labels.len();
        let mut index = HashMap::with_capacity(n);
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(MatrixError::DuplicateLabel(label.clone()));
            }
        }
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let v = entry(i, j);
                if v.is_nan() || v < 0.0 {
                    return Err(MatrixError::InvalidEntry {
                        u: labels[i].clone(),
                        v: labels[j].clone(),
                        value: v,
                    });
                }
                values.push(v);
            }
        }
        Ok(DistanceMatrix {
            labels,
            index,
            values,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn get_at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.labels.len() + j]
    }

    pub fn get(&self, u: &str, v: &str) -> Option<f64> {
        Some(self.get_at(self.index_of(u)?, self.index_of(v)?))
    }

    /// True when every entry is finite.
    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Serializes to TSV: a header row of labels, then one row per vertex
    /// with its label followed by the entries. `+inf` is written as `inf`.
    pub fn to_tsv(&self) -> String {
        let n = self.labels.len();
        let mut out = String::new();
        for label in &self.labels {
            out.push('\t');
            out.push_str(label);
        }
        out.push('\n');
        for i in 0..n {
            out.push_str(&self.labels[i]);
            for j in 0..n {
                out.push('\t');
                out.push_str(&fmt_value(self.get_at(i, j)));
            }
            out.push('\n');
        }
        out
    }

    /// Parses the TSV form produced by [`DistanceMatrix::to_tsv`]. A leading
    /// empty header field is optional; row labels must match the header order.
    pub fn from_tsv(text: &str) -> Result<Self, ParseError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| ParseError::Matrix("empty input".to_string()))?;
        let mut fields: Vec<&str> = header.split('\t').collect();
        if fields.first() == Some(&"") {
            fields.remove(0);
        }
        let labels: Vec<String> = fields.iter().map(|s| s.to_string()).collect();
        let n = labels.len();
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n);
        for (i, raw) in lines {
            let line = i + 1;
            if raw.trim().is_empty() {
                continue;
            }
            let mut parts = raw.split('\t');
            let row_label = parts.next().unwrap_or("");
            let row_idx = rows.len();
            if row_idx >= n || row_label != labels[row_idx] {
                return Err(ParseError::Malformed {
                    line,
                    message: format!("unexpected row label '{row_label}'"),
                });
            }
            let mut row = Vec::with_capacity(n);
            for tok in parts {
                let v = if tok == "inf" {
                    f64::INFINITY
                } else {
                    tok.parse().map_err(|_| ParseError::Malformed {
                        line,
                        message: format!("invalid entry '{tok}'"),
                    })?
                };
                row.push(v);
            }
            if row.len() != n {
                return Err(ParseError::Malformed {
                    line,
                    message: format!("expected {n} entries, found {}", row.len()),
                });
            }
            rows.push(row);
        }
        DistanceMatrix::from_rows(labels, rows).map_err(|e| ParseError::Matrix(e.to_string()))
    }

    /// Serializes to `{"vertices": [...], "entries": [[...], ...]}` with
    /// `+inf` rendered as the string `"inf"`.
    pub fn to_json_value(&self) -> serde_json::Value {
        let n = self.labels.len();
        let entries: Vec<serde_json::Value> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let v = self.get_at(i, j);
                        if v.is_infinite() {
                            json!("inf")
                        } else {
                            json!(v)
                        }
                    })
                    .collect()
            })
            .collect();
        json!({ "vertices": self.labels, "entries": entries })
    }
}

/// Failure of the basic pseudometric shape: zero diagonal and symmetry.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShapeViolation {
    #[error("diagonal entry ({0}, {0}) = {1}, expected 0")]
    NonzeroDiagonal(String, f64),
    #[error("asymmetric at ({u}, {v}): {forward} vs {backward}")]
    Asymmetric {
        u: String,
        v: String,
        forward: f64,
        backward: f64,
    },
}

/// Checks the zero diagonal and exact symmetry of a matrix, reporting the
/// first violation in row-major scan order.
pub fn validate_matrix_shape(m: &DistanceMatrix) -> Result<(), ShapeViolation> {
    let n = m.len();
    for i in 0..n {
        let d = m.get_at(i, i);
        if d != 0.0 {
            return Err(ShapeViolation::NonzeroDiagonal(m.labels()[i].clone(), d));
        }
        for j in (i + 1)..n {
            let forward = m.get_at(i, j);
            let backward = m.get_at(j, i);
            if forward != backward {
                return Err(ShapeViolation::Asymmetric {
                    u: m.labels()[i].clone(),
                    v: m.labels()[j].clone(),
                    forward,
                    backward,
                });
            }
        }
    }
    Ok(())
}

/// A cycle on which a weight fails the metrizability inequality: twice the
/// heaviest edge exceeds the cycle's total weight.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleWitness {
    /// Vertex sequence with the first label repeated at the end.
    pub cycle: Vec<String>,
    /// Heaviest edge of the cycle, endpoints in lexicographic order.
    pub max_edge: (String, String),
    /// Twice the weight of `max_edge`.
    pub lhs: f64,
    /// Total weight of the cycle.
    pub rhs: f64,
}

impl CycleWitness {
    pub fn to_json_value(&self) -> serde_json::Value {
        json!({
            "cycle": self.cycle,
            "max_edge": [self.max_edge.0, self.max_edge.1],
            "lhs": self.lhs,
            "rhs": self.rhs,
        })
    }
}
