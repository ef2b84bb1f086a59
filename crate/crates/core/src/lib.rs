//! Pseudometric extensions of edge weights on finite simple graphs.
//!
//! Given a nonnegative weight `w` on the edges of a finite simple graph,
//! this crate answers:
//!
//! - does `w` extend to a pseudometric on the vertices at all
//!   ([`check_metrizable`]), and if not, which cycle proves it;
//! - what is the greatest extension, the shortest-path pseudometric
//!   ([`all_pairs_distance`]);
//! - when does a least extension exist, exactly on complete multipartite
//!   graphs with at least two parts, and what is it
//!   ([`least_pseudometric`]);
//! - is a candidate distance matrix an extension ([`validate_membership`]);
//! - how to extend across a disconnected graph with finite values
//!   ([`complete_disconnected`]).
//!
//! Every answer has a brute-force counterpart in [`oracle`] that recomputes
//! it by exhaustive enumeration at small scale; the test suite cross-checks
//! the two on generated instances.
//!
//! ```
//! use metrize_core::{check_metrizable, parse_edge_list, DEFAULT_EPS};
//!
//! let g = parse_edge_list("edge a b 1\nedge b c 1\nedge a c 3\n").unwrap();
//! let report = check_metrizable(&g, DEFAULT_EPS);
//! assert!(!report.metrizable);
//! let witness = report.witness.unwrap();
//! assert!(witness.lhs > witness.rhs);
//! ```

pub mod completion;
pub mod graph;
pub mod metrization;
pub mod multipartite;
pub mod oracle;
pub mod shortest_path;

/// Default absolute tolerance for floating-point comparisons.
pub const DEFAULT_EPS: f64 = 1e-9;

pub use completion::{
    complete_disconnected, component_reps, star_supergraph, CompletionError, CompletionSpec,
};
pub use graph::{
    connected_components, parse_edge_list, parse_json, validate_matrix_shape, CycleWitness,
    DistanceMatrix, GraphError, MatrixError, ParseError, ShapeViolation, WeightedGraph,
};
pub use metrization::{
    bridges, check_metrizable, free_reweight_set, is_forest, metric_exists, validate_membership,
    MembershipError, MembershipViolation, MetricExistence, MetrizabilityReport,
};
pub use multipartite::{
    analyze_quadrilateral, detect_partition, greatest_vs_least_interval, is_star,
    least_pseudometric, quadrilateral, sandwich_sample, sandwich_validate, MultipartiteError,
    Partition, QuadReport, SandwichError,
};
pub use oracle::{
    cycle_condition_holds, enumerate_cycles, exhaustive_all_pairs, rho0_path_sup, Cycle,
    CycleStream, GraphClass, InstanceGenerator, OracleError, WeightDistribution,
    DEFAULT_SAFETY_BOUND,
};
pub use shortest_path::{
    all_pairs_distance, all_pairs_distance_with, shortest_path_witness, Algorithm, PathRecord,
};
