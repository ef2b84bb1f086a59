//! Command-line frontend for pseudometric extension analysis.
//!
//! Exit codes: 0 = affirmative answer or successful computation, 1 = negative
//! verdict (not metrizable, not complete multipartite, validation failed),
//! 2 = usage or input error.  Verdicts go to stdout as JSON; diagnostics for
//! exit code 2 go to stderr.

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use metrize_core::completion::{complete_disconnected, CompletionSpec};
use metrize_core::graph::{DistanceMatrix, WeightedGraph};
use metrize_core::metrization::{
    bridges, check_metrizable, is_forest, metric_exists, validate_membership, MembershipError,
};
use metrize_core::multipartite::{
    analyze_quadrilateral, detect_partition, greatest_vs_least_interval, is_star,
    least_pseudometric, sandwich_sample, sandwich_validate, MultipartiteError, SandwichError,
};
use metrize_core::oracle::{
    cycle_condition_holds, enumerate_cycles, exhaustive_all_pairs, rho0_path_sup, GraphClass,
    InstanceGenerator, WeightDistribution,
};
use metrize_core::shortest_path::all_pairs_distance;
use metrize_core::DEFAULT_EPS;

#[derive(Parser)]
#[command(
    name = "metrize",
    version,
    about = "Pseudometric extensions of edge weights"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Read the graph from this file.
    #[arg(long, global = true, value_name = "PATH", conflicts_with = "stdin")]
    input: Option<PathBuf>,

    /// Read the graph from standard input.
    #[arg(long, global = true)]
    stdin: bool,

    /// Graph input format.
    #[arg(long, global = true, value_enum, default_value_t = Format::EdgeList)]
    format: Format,

    /// Comparison tolerance; defaults to METRIZE_EPS, then 1e-9.
    #[arg(long, global = true, value_name = "X", allow_hyphen_values = true)]
    eps: Option<String>,

    /// Emit matrices as TSV instead of JSON.
    #[arg(long, global = true)]
    tsv: bool,

    /// Seed for sampling and generation.
    #[arg(long, global = true, value_name = "N", default_value_t = 0)]
    seed: u64,

    /// Lift the brute-force safety bound on the vertex count.
    #[arg(long, global = true)]
    force: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    EdgeList,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the edge weight is metrizable.
    Check,
    /// Print the shortest-path distance matrix (the greatest extension).
    Matrix,
    /// Print the least extension on a complete multipartite graph.
    Least,
    /// Print the attainable value interval for a nonadjacent pair.
    Interval { u: String, v: String },
    /// Print the complete multipartite partition, if any.
    Partition,
    /// List the bridge edges.
    Bridges,
    /// Report whether the graph is a forest.
    Forest,
    /// Report whether the graph is a star.
    Star,
    /// Report whether a metric (not merely pseudometric) extension exists.
    MetricExists,
    /// Validate a candidate matrix as an extension of the weight.
    Validate { matrix: PathBuf },
    /// Sample a random extension between the least and greatest ones.
    SandwichSample,
    /// Validate a candidate against the two-part sandwich criterion.
    SandwichValidate { matrix: PathBuf },
    /// Extend a metrizable weight across components with finite values.
    Complete {
        /// JSON completion spec; defaults to unit constants and
        /// lexicographically smallest anchors.
        #[arg(long, value_name = "FILE")]
        spec: Option<PathBuf>,
    },
    /// Closed-form analysis of the quadrilateral with consecutive weights a, b, c, k.
    Quad { a: f64, b: f64, c: f64, k: f64 },
    /// Brute-force reference computations (safety-bounded; see --force).
    Oracle {
        #[command(subcommand)]
        oracle: OracleCommand,
    },
    /// Generate a seeded random instance and print it in the graph format.
    Generate {
        class: ClassArg,
        #[arg(long, default_value_t = 8)]
        max_vertices: usize,
        /// Place vertices uniformly on a line of this length instead of
        /// drawing weights independently.
        #[arg(long, value_name = "LENGTH")]
        line: Option<f64>,
        #[arg(long, default_value_t = 10.0)]
        max_weight: f64,
        /// Probability mass assigned to exactly-zero weights.
        #[arg(long, default_value_t = 0.1)]
        zero_mass: f64,
        #[arg(long, default_value_t = 3)]
        max_parts: usize,
        #[arg(long, default_value_t = 3)]
        max_part_size: usize,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// List every simple cycle, canonically oriented.
    Cycles {
        #[arg(long, value_name = "L")]
        max_len: Option<usize>,
    },
    /// Exhaustively test the cycle condition and print a witness on failure.
    Check,
    /// Least-extension value of a nonadjacent pair, by supremum over paths.
    Rho0 { u: String, v: String },
    /// All-pairs distances by exhaustive enumeration of simple paths.
    Matrix,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Arbitrary,
    Connected,
    Forest,
    Multipartite,
}

/// An input or usage problem: message on stderr, exit code 2.
struct Failure(String);

impl Failure {
    fn new(message: impl Into<String>) -> Self {
        Failure(message.into())
    }
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let eps = resolve_eps(cli)?;
    match &cli.command {
        Command::Check => {
            let g = load_graph(cli)?;
            let report = check_metrizable(&g, eps);
            println!("{}", report.to_json_value());
            Ok(verdict(report.metrizable))
        }
        Command::Matrix => {
            let g = load_graph(cli)?;
            print_matrix(cli, &all_pairs_distance(&g));
            Ok(0)
        }
        Command::Least => {
            let g = load_graph(cli)?;
            match least_pseudometric(&g, eps) {
                Ok(m) => {
                    print_matrix(cli, &m);
                    Ok(0)
                }
                Err(e) => {
                    let mut body = json!({ "error": e.to_string() });
                    if matches!(
                        e,
                        MultipartiteError::NotMultipartite | MultipartiteError::TooFewParts { .. }
                    ) && check_metrizable(&g, eps).metrizable
                    {
                        body["detail"] = json!(
                            "least element does not exist for some metrizable weight on this graph"
                        );
                    }
                    negative_verdict(&e, body)
                }
            }
        }
        Command::Interval { u, v } => {
            let g = load_graph(cli)?;
            match greatest_vs_least_interval(&g, u, v, eps) {
                Ok((lower, upper)) => {
                    println!(
                        "{}",
                        json!({ "u": u, "v": v, "lower": lower, "upper": upper })
                    );
                    Ok(0)
                }
                Err(e) => negative_verdict(&e, json!({ "error": e.to_string() })),
            }
        }
        Command::Partition => {
            let g = load_graph(cli)?;
            match detect_partition(&g) {
                Some(p) => {
                    println!(
                        "{}",
                        serde_json::to_value(&p).expect("partition serializes")
                    );
                    Ok(0)
                }
                None => {
                    println!(
                        "{}",
                        json!({ "error": "graph is not complete multipartite" })
                    );
                    Ok(1)
                }
            }
        }
        Command::Bridges => {
            let g = load_graph(cli)?;
            let b: Vec<_> = bridges(&g).into_iter().collect();
            println!("{}", json!({ "bridges": b }));
            Ok(0)
        }
        Command::Forest => {
            let g = load_graph(cli)?;
            let answer = is_forest(&g);
            println!("{}", json!({ "forest": answer }));
            Ok(verdict(answer))
        }
        Command::Star => {
            let g = load_graph(cli)?;
            let answer = is_star(&g);
            println!("{}", json!({ "star": answer }));
            Ok(verdict(answer))
        }
        Command::MetricExists => {
            let g = load_graph(cli)?;
            let existence = metric_exists(&g, eps);
            println!(
                "{}",
                serde_json::to_value(&existence).expect("existence serializes")
            );
            Ok(verdict(existence.exists))
        }
        Command::Validate { matrix } => {
            let g = load_graph(cli)?;
            let m = load_matrix(matrix)?;
            match validate_membership(&g, &m, eps) {
                Ok(()) => {
                    println!("{}", json!({ "ok": true }));
                    Ok(0)
                }
                Err(MembershipError::Violation(v)) => {
                    println!("{}", json!({ "ok": false, "violation": v.to_string() }));
                    Ok(1)
                }
                Err(e) => Err(Failure(e.to_string())),
            }
        }
        Command::SandwichSample => {
            let g = load_graph(cli)?;
            match sandwich_sample(&g, cli.seed, eps) {
                Ok(m) => {
                    print_matrix(cli, &m);
                    Ok(0)
                }
                Err(SandwichError::Precondition(e)) => {
                    negative_verdict(&e, json!({ "error": e.to_string() }))
                }
                Err(e) => Err(Failure(e.to_string())),
            }
        }
        Command::SandwichValidate { matrix } => {
            let g = load_graph(cli)?;
            let m = load_matrix(matrix)?;
            match sandwich_validate(&g, &m, eps) {
                Ok(()) => {
                    println!("{}", json!({ "ok": true }));
                    Ok(0)
                }
                Err(SandwichError::Precondition(e)) => {
                    negative_verdict(&e, json!({ "error": e.to_string() }))
                }
                Err(SandwichError::Candidate(message)) => Err(Failure(message)),
                Err(e) => {
                    println!("{}", json!({ "ok": false, "violation": e.to_string() }));
                    Ok(1)
                }
            }
        }
        Command::Complete { spec } => {
            let g = load_graph(cli)?;
            let spec = match spec {
                Some(path) => {
                    let text = fs::read_to_string(path)
                        .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
                    serde_json::from_str::<CompletionSpec>(&text)
                        .map_err(|e| Failure(format!("completion spec: {e}")))?
                }
                None => CompletionSpec::default_for(&g),
            };
            match complete_disconnected(&g, &spec, eps) {
                Ok(m) => {
                    print_matrix(cli, &m);
                    Ok(0)
                }
                Err(e) if e.is_verdict() => {
                    println!("{}", json!({ "error": e.to_string() }));
                    Ok(1)
                }
                Err(e) => Err(Failure(e.to_string())),
            }
        }
        Command::Quad { a, b, c, k } => {
            let report =
                analyze_quadrilateral(*a, *b, *c, *k, eps).map_err(|e| Failure(e.to_string()))?;
            println!(
                "{}",
                serde_json::to_value(&report).expect("report serializes")
            );
            Ok(verdict(report.metrizable))
        }
        Command::Oracle { oracle } => run_oracle(cli, oracle, eps),
        Command::Generate {
            class,
            max_vertices,
            line,
            max_weight,
            zero_mass,
            max_parts,
            max_part_size,
        } => {
            if !(0.0..=1.0).contains(zero_mass) {
                return Err(Failure::new("--zero-mass must lie in [0, 1]"));
            }
            if !max_weight.is_finite() || *max_weight < 0.0 {
                return Err(Failure::new("--max-weight must be finite and nonnegative"));
            }
            let weights = match line {
                Some(length) if length.is_finite() && *length >= 0.0 => {
                    WeightDistribution::LinePlacement { length: *length }
                }
                Some(_) => return Err(Failure::new("--line must be finite and nonnegative")),
                None => WeightDistribution::Uniform {
                    max: *max_weight,
                    zero_mass: *zero_mass,
                },
            };
            let class = match class {
                ClassArg::Arbitrary => GraphClass::Arbitrary,
                ClassArg::Connected => GraphClass::Connected,
                ClassArg::Forest => GraphClass::Forest,
                ClassArg::Multipartite => GraphClass::CompleteMultipartite {
                    max_parts: *max_parts,
                    max_part_size: *max_part_size,
                },
            };
            let generator = InstanceGenerator {
                seed: cli.seed,
                max_vertices: *max_vertices,
                weights,
                class,
            };
            let g = generator.generate();
            match cli.format {
                Format::EdgeList => print!("{}", g.to_edge_list()),
                Format::Json => println!("{}", g.to_json_value()),
            }
            Ok(0)
        }
    }
}

fn run_oracle(cli: &Cli, oracle: &OracleCommand, eps: f64) -> Result<u8, Failure> {
    let g = load_graph(cli)?;
    match oracle {
        OracleCommand::Cycles { max_len } => {
            let limit = max_len.unwrap_or(g.vertex_count());
            let cycles: Vec<Vec<String>> = enumerate_cycles(&g, limit, cli.force)
                .map_err(|e| Failure(e.to_string()))?
                .map(|c| c.vertices)
                .collect();
            println!("{}", json!({ "cycles": cycles }));
            Ok(0)
        }
        OracleCommand::Check => {
            let (holds, witness) =
                cycle_condition_holds(&g, eps, cli.force).map_err(|e| Failure(e.to_string()))?;
            let witness = witness.map(|w| w.to_json_value());
            println!("{}", json!({ "holds": holds, "witness": witness }));
            Ok(verdict(holds))
        }
        OracleCommand::Rho0 { u, v } => {
            let value = rho0_path_sup(&g, u, v, cli.force).map_err(|e| Failure(e.to_string()))?;
            println!("{}", json!({ "u": u, "v": v, "value": value }));
            Ok(0)
        }
        OracleCommand::Matrix => {
            let m = exhaustive_all_pairs(&g, cli.force).map_err(|e| Failure(e.to_string()))?;
            print_matrix(cli, &m);
            Ok(0)
        }
    }
}

fn verdict(affirmative: bool) -> u8 {
    if affirmative {
        0
    } else {
        1
    }
}

/// Print a negative verdict to stdout, or convert an input error to exit 2.
fn negative_verdict(e: &MultipartiteError, body: serde_json::Value) -> Result<u8, Failure> {
    if e.is_verdict() {
        println!("{body}");
        Ok(1)
    } else {
        Err(Failure(e.to_string()))
    }
}

fn resolve_eps(cli: &Cli) -> Result<f64, Failure> {
    let (source, text) = match &cli.eps {
        Some(text) => ("--eps", text.clone()),
        None => match std::env::var("METRIZE_EPS") {
            Ok(text) => ("METRIZE_EPS", text),
            Err(_) => return Ok(DEFAULT_EPS),
        },
    };
    let eps: f64 = text
        .trim()
        .parse()
        .map_err(|_| Failure(format!("{source}: expected a number, got {text:?}")))?;
    if !eps.is_finite() || eps < 0.0 {
        return Err(Failure(format!(
            "{source}: tolerance must be finite and nonnegative"
        )));
    }
    Ok(eps)
}

fn load_graph(cli: &Cli) -> Result<WeightedGraph, Failure> {
    let text = match (&cli.input, cli.stdin) {
        (Some(path), false) => {
            fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?
        }
        (None, true) => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure(format!("stdin: {e}")))?;
            text
        }
        _ => return Err(Failure::new("no graph given: pass --input PATH or --stdin")),
    };
    let g = match cli.format {
        Format::EdgeList => metrize_core::graph::parse_edge_list(&text)?,
        Format::Json => metrize_core::graph::parse_json(&text)?,
    };
    Ok(g)
}

fn load_matrix(path: &PathBuf) -> Result<DistanceMatrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    DistanceMatrix::from_tsv(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn print_matrix(cli: &Cli, m: &DistanceMatrix) {
    if cli.tsv {
        print!("{}", m.to_tsv());
    } else {
        println!("{}", m.to_json_value());
    }
}
