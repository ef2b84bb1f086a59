//! Deterministic fixtures shared by the benchmarks.

use metrize_core::oracle::{GraphClass, InstanceGenerator, WeightDistribution};
use metrize_core::WeightedGraph;

/// A connected instance with exactly `n` vertices: a path plus chords, with
/// line-placement weights, so the weight is metrizable and distances are
/// nontrivial.
pub fn connected(n: usize, seed: u64) -> WeightedGraph {
    let labels: Vec<String> = (0..n).map(|i| format!("v{i:04}")).collect();
    let xs: Vec<f64> = (0..n)
        .map(|i| ((i as u64 * 37 + seed * 11) % 97) as f64 * (19.0 / 96.0))
        .collect();
    let mut pairs: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    pairs.extend((0..n).step_by(3).filter(|&i| i + 5 < n).map(|i| (i, i + 5)));
    pairs.extend(
        (2..n)
            .step_by(7)
            .filter(|&i| i + 11 < n)
            .map(|i| (i, i + 11)),
    );
    let edges = pairs
        .into_iter()
        .map(|(i, j)| (labels[i].clone(), labels[j].clone(), (xs[i] - xs[j]).abs()))
        .collect();
    WeightedGraph::from_parts(labels, edges).expect("fixture is well formed")
}

/// The complete multipartite graph with `parts` parts of size two and
/// metrizable weights: the largest family on which the least extension and
/// the sandwich sampler both apply.
pub fn paired_multipartite(parts: usize) -> WeightedGraph {
    let n = 2 * parts;
    let labels: Vec<String> = (0..n).map(|i| format!("v{i:04}")).collect();
    let xs: Vec<f64> = (0..n).map(|i| (i as f64 * 7.3) % 19.0).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if i / 2 != j / 2 {
                edges.push((labels[i].clone(), labels[j].clone(), (xs[i] - xs[j]).abs()));
            }
        }
    }
    WeightedGraph::from_parts(labels, edges).expect("fixture is well formed")
}

/// A sparse instance whose cycle space stays small enough for enumeration.
pub fn sparse_cyclic(seed: u64) -> WeightedGraph {
    InstanceGenerator {
        seed,
        max_vertices: 9,
        weights: WeightDistribution::Uniform {
            max: 10.0,
            zero_mass: 0.1,
        },
        class: GraphClass::Arbitrary,
    }
    .generate()
}
