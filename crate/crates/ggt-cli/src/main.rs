//! Command-line front end. Artifacts (instances, families, colorings, CSV)
//! go to `--output` or stdout; summaries and warnings go to stderr, so
//! repeated runs with equal seeds produce byte-identical artifacts.
//!
//! Exit codes: 0 success, 1 validity failure, 2 usage, 3 I/O or malformed
//! input files.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use ggt::generators::{families, GenParams, DEFAULT_EDGE_CAP};
use ggt::{
    adaptive_identify, decode, optimal_bruteforce, randomized_construct, required_k, verify,
    AdaptiveError, Coloring, ConstructError, ConstructionParams, ContaminationOracle, DecodeError,
    EdgeOracle, FallbackConfig, Graph, Hypergraph, MethodError, ReductionError, TestFamily,
    VertexSet,
};
use ggt_cli::bench::{resolve_methods, run_sweep, BenchError, InstanceSpec};
use ggt_cli::formats::{
    emit_coloring, emit_graph, emit_hypergraph, emit_tests, emit_transcript, parse_coloring,
    parse_graph, parse_hypergraph, parse_outcomes, parse_tests,
};

#[derive(Parser)]
#[command(name = "ggt", version, about = "Group testing on arbitrary hypergraphs")]
struct Cli {
    /// Seed for every randomized step; equal seeds give equal bytes.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Confidence parameter: constructions succeed except with
    /// probability exp(-alpha).
    #[arg(long, global = true, default_value_t = 3.0)]
    alpha: f64,

    /// Retry budget for the randomized construction.
    #[arg(long, global = true, default_value_t = 16)]
    attempts: usize,

    /// Write the artifact here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a named instance family as a .hg file.
    Gen {
        /// Family name; run with an unknown name to list the registry.
        family: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        /// Active subset size for the embedded family.
        #[arg(long = "n-prime")]
        n_prime: Option<usize>,
        /// Edge count for the random family.
        #[arg(long)]
        m: Option<usize>,
        /// Refuse to generate more edges than this.
        #[arg(long, default_value_t = DEFAULT_EDGE_CAP)]
        max_edges: usize,
    },
    /// Print size parameters and bounds of an instance.
    Stats { instance: PathBuf },
    /// Build a valid test family with the randomized construction.
    Construct { instance: PathBuf },
    /// Check a test family against an instance.
    Verify { instance: PathBuf, family: PathBuf },
    /// Identify the edge matching an outcome bitstring.
    Decode {
        instance: PathBuf,
        family: PathBuf,
        /// One character per test, `0` or `1`, first test first.
        outcomes: String,
    },
    /// Exhaustively search for a smallest valid family.
    Optimal {
        instance: PathBuf,
        /// Give up beyond this many tests.
        #[arg(long, default_value_t = 8)]
        k_max: usize,
    },
    /// Identify a hidden edge with adaptive queries.
    Adaptive {
        instance: PathBuf,
        /// Simulate against this edge index.
        #[arg(long)]
        oracle_edge: Option<usize>,
        /// Query an external oracle: print `TEST v1 v2 ...` lines on
        /// stdout and read `0` or `1` answers from stdin.
        #[arg(long)]
        interactive: bool,
    },
    /// Translate a graph into a group-testing instance.
    Reduce {
        graph: PathBuf,
        /// Extend the graph to the next usable edge count first.
        #[arg(long)]
        pad: bool,
        /// Pad with a triangle so the result needs three colors; implies
        /// --pad.
        #[arg(long)]
        force_3chromatic: bool,
        /// Also write the (possibly padded) graph here.
        #[arg(long, value_name = "FILE")]
        graph_out: Option<PathBuf>,
    },
    /// Turn a proper 3-coloring into a test family for the reduced
    /// instance.
    TestsFromColoring { graph: PathBuf, coloring: PathBuf },
    /// Turn a valid test family for the reduced instance into a coloring.
    ExtractColoring { graph: PathBuf, family: PathBuf },
    /// Sweep instances, methods, and seeds; emit one CSV row per cell.
    Bench {
        /// Comma-separated specs: traditional:n:d, embedded:n:n':d,
        /// adaptive-lb:d, random:n:m:d, file:path.
        #[arg(long, value_delimiter = ',', required = true)]
        instances: Vec<String>,
        /// Comma-separated method names; default is every registered
        /// method.
        #[arg(long, value_delimiter = ',')]
        methods: Vec<String>,
        /// Comma-separated seeds; default is the global --seed.
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<u64>,
        #[arg(long, default_value_t = 8)]
        k_max: usize,
    },
}

/// A failed command: message for stderr plus the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn validity(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn io(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }
}

fn construct_code(e: &ConstructError) -> u8 {
    match e {
        ConstructError::ExhaustedAttempts { .. } => 1,
        _ => 2,
    }
}

fn adaptive_code(e: &AdaptiveError) -> u8 {
    match e {
        AdaptiveError::OracleInconsistent { .. } => 1,
        AdaptiveError::Fallback(inner) => construct_code(inner),
    }
}

fn reduction_failure(e: ReductionError) -> Failure {
    match e {
        ReductionError::NotProper { .. }
        | ReductionError::NotThreeColors { .. }
        | ReductionError::SupportTooLarge { .. }
        | ReductionError::NotValidFamily { .. } => Failure::validity(e.to_string()),
        ReductionError::BadEdgeCount { .. } => {
            Failure::usage(format!("{e} (reduce --pad extends the graph to a usable count)"))
        }
        _ => Failure::usage(e.to_string()),
    }
}

fn bench_failure(e: BenchError) -> Failure {
    match &e {
        BenchError::Io { .. } | BenchError::Parse { .. } => Failure::io(e.to_string()),
        BenchError::Run { source, .. } => {
            let code = match source {
                MethodError::Construct(inner) => construct_code(inner),
                MethodError::Adaptive(inner) => adaptive_code(inner),
            };
            Failure { code, message: e.to_string() }
        }
        _ => Failure::usage(e.to_string()),
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn load_hypergraph(path: &Path) -> Result<Hypergraph, Failure> {
    parse_hypergraph(&read_file(path)?)
        .map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn load_tests(path: &Path) -> Result<TestFamily, Failure> {
    parse_tests(&read_file(path)?).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    parse_graph(&read_file(path)?).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn load_coloring(path: &Path) -> Result<Coloring, Failure> {
    parse_coloring(&read_file(path)?)
        .map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

/// Send the artifact to `--output` if given, stdout otherwise.
fn write_artifact(output: &Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Failure::io(format!("{}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Oracle that speaks the interactive protocol on stdio. Read failures are
/// recorded rather than raised because `answer` is infallible; the caller
/// checks `error` after the run.
#[derive(Default)]
struct InteractiveOracle {
    error: Option<String>,
}

impl ContaminationOracle for InteractiveOracle {
    fn answer(&mut self, test: &VertexSet) -> bool {
        if self.error.is_some() {
            return false;
        }
        let ids: Vec<String> = test.iter().map(|v| v.to_string()).collect();
        println!("TEST {}", ids.join(" "));
        let _ = std::io::stdout().flush();
        let mut line = String::new();
        match std::io::stdin().lock().read_line(&mut line) {
            Ok(0) => {
                self.error = Some("oracle stream closed before an answer".into());
                false
            }
            Ok(_) => match line.trim() {
                "0" => false,
                "1" => true,
                other => {
                    self.error = Some(format!("oracle answered `{other}`, expected 0 or 1"));
                    false
                }
            },
            Err(e) => {
                self.error = Some(format!("reading oracle answer: {e}"));
                false
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Gen { family, n, d, n_prime, m, max_edges } => {
            let Some(fam) = families().iter().find(|f| f.name() == family) else {
                let known: Vec<String> =
                    families().iter().map(|f| format!("  {}: {}", f.name(), f.usage())).collect();
                return Err(Failure::usage(format!(
                    "unknown instance family `{family}`; registered families:\n{}",
                    known.join("\n")
                )));
            };
            let params = GenParams {
                n: *n,
                d: *d,
                n_prime: *n_prime,
                m: *m,
                seed: cli.seed,
                max_edges: *max_edges,
            };
            let h = fam.generate(&params).map_err(|e| Failure::usage(e.to_string()))?;
            eprintln!(
                "gen: {} with n={} m={} d={}",
                fam.name(),
                h.n(),
                h.edge_count(),
                h.max_edge_size()
            );
            write_artifact(&cli.output, &emit_hypergraph(&h))
        }

        Command::Stats { instance } => {
            let h = load_hypergraph(instance)?;
            let mut out = String::new();
            out.push_str(&format!("n {}\n", h.n()));
            out.push_str(&format!("m {}\n", h.edge_count()));
            out.push_str(&format!("d {}\n", h.max_edge_size()));
            match h.beta() {
                Ok(beta) => {
                    out.push_str(&format!("beta {beta}\n"));
                    out.push_str(&format!("info_lower_bound {}\n", h.info_lower_bound()));
                    out.push_str(&format!(
                        "required_k {}\n",
                        required_k(h.edge_count(), h.max_edge_size(), beta, cli.alpha)
                    ));
                }
                Err(_) => {
                    out.push_str("beta n/a\n");
                    out.push_str(&format!("info_lower_bound {}\n", h.info_lower_bound()));
                    out.push_str("required_k n/a\n");
                }
            }
            write_artifact(&cli.output, &out)
        }

        Command::Construct { instance } => {
            let h = load_hypergraph(instance)?;
            if h.edge_count() == 1 {
                eprintln!("construct: single edge, the empty family already identifies it");
                return write_artifact(&cli.output, &emit_tests(&TestFamily::empty(h.n())));
            }
            let params = ConstructionParams {
                alpha: cli.alpha,
                seed: cli.seed,
                max_attempts: cli.attempts,
                p_override: None,
            };
            let result = randomized_construct(&h, &params)
                .map_err(|e| Failure { code: construct_code(&e), message: e.to_string() })?;
            eprintln!(
                "construct: k={} after {} attempt(s) (d={}, beta={})",
                result.k, result.attempts_used, result.d_used, result.beta_used
            );
            write_artifact(&cli.output, &emit_tests(&result.family))
        }

        Command::Verify { instance, family } => {
            let h = load_hypergraph(instance)?;
            let f = load_tests(family)?;
            if f.n() != h.n() {
                return Err(Failure::usage(format!(
                    "family is over {} vertices, the instance has {}",
                    f.n(),
                    h.n()
                )));
            }
            for idx in f.useless_tests() {
                eprintln!("warning: test {idx} is empty and can never separate anything");
            }
            let report = verify(&h, &f);
            match report.counterexample() {
                None => {
                    println!("valid");
                    Ok(())
                }
                Some((i, j)) => {
                    println!("invalid {i} {j}");
                    Err(Failure::validity(format!(
                        "edges {i} and {j} produce the same outcomes"
                    )))
                }
            }
        }

        Command::Decode { instance, family, outcomes } => {
            let h = load_hypergraph(instance)?;
            let f = load_tests(family)?;
            let y = parse_outcomes(outcomes).map_err(|e| Failure::usage(e.to_string()))?;
            match decode(&h, &f, &y) {
                Ok(index) => {
                    let ids: Vec<String> =
                        h.edges()[index].iter().map(|v| v.to_string()).collect();
                    println!("index {index}");
                    println!("edge {}", ids.join(" "));
                    Ok(())
                }
                Err(e @ DecodeError::LengthMismatch { .. }) => Err(Failure::usage(e.to_string())),
                Err(e) => Err(Failure::validity(e.to_string())),
            }
        }

        Command::Optimal { instance, k_max } => {
            let h = load_hypergraph(instance)?;
            let found =
                optimal_bruteforce(&h, *k_max).map_err(|e| Failure::usage(e.to_string()))?;
            match found {
                Some(f) => {
                    eprintln!(
                        "optimal: k={} (information lower bound {})",
                        f.k(),
                        h.info_lower_bound()
                    );
                    write_artifact(&cli.output, &emit_tests(&f))
                }
                None => {
                    println!("none");
                    Err(Failure::validity(format!(
                        "no valid family with at most {k_max} tests"
                    )))
                }
            }
        }

        Command::Adaptive { instance, oracle_edge, interactive } => {
            let h = load_hypergraph(instance)?;
            let fallback = FallbackConfig {
                alpha: cli.alpha,
                seed: cli.seed,
                max_attempts: cli.attempts,
            };
            match (oracle_edge, interactive) {
                (Some(index), false) => {
                    if *index >= h.edge_count() {
                        return Err(Failure::usage(format!(
                            "--oracle-edge {index} is out of range, the instance has {} edges",
                            h.edge_count()
                        )));
                    }
                    let mut oracle = EdgeOracle::for_edge(&h, *index);
                    finish_adaptive(&cli, &h, adaptive_identify(&h, &mut oracle, &fallback))
                }
                (None, true) => {
                    let mut oracle = InteractiveOracle::default();
                    let outcome = adaptive_identify(&h, &mut oracle, &fallback);
                    if let Some(message) = oracle.error {
                        return Err(Failure::io(message));
                    }
                    finish_adaptive(&cli, &h, outcome)
                }
                _ => Err(Failure::usage(
                    "pass exactly one of --oracle-edge <index> or --interactive",
                )),
            }
        }

        Command::Reduce { graph, pad, force_3chromatic, graph_out } => {
            let g = load_graph(graph)?;
            let (working, padding) = if *pad || *force_3chromatic {
                let (padded, record) = ggt::pad_graph(&g, *force_3chromatic);
                (padded, Some(record))
            } else {
                (g, None)
            };
            if let Some(path) = graph_out {
                std::fs::write(path, emit_graph(&working))
                    .map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
            }
            let inst = ggt::reduce_3col_to_gt(&working).map_err(reduction_failure)?;
            if let Some(record) = padding {
                eprintln!(
                    "reduce: padded with {} path edge(s), {} new vertices, triangle {}",
                    record.path_edges,
                    record.added_vertices,
                    if record.added_triangle { "added" } else { "not added" }
                );
            }
            eprintln!(
                "reduce: l={} edge_vertices={} vertices={} hyperedges={}",
                inst.ell(),
                inst.edge_vertex_count(),
                inst.hypergraph().n(),
                inst.hypergraph().edge_count()
            );
            write_artifact(&cli.output, &emit_hypergraph(inst.hypergraph()))
        }

        Command::TestsFromColoring { graph, coloring } => {
            let g = load_graph(graph)?;
            let c = load_coloring(coloring)?;
            let inst = ggt::reduce_3col_to_gt(&g).map_err(reduction_failure)?;
            let family = ggt::coloring_to_tests(&inst, &c).map_err(reduction_failure)?;
            eprintln!("tests-from-coloring: k={} over {} vertices", family.k(), family.n());
            write_artifact(&cli.output, &emit_tests(&family))
        }

        Command::ExtractColoring { graph, family } => {
            let g = load_graph(graph)?;
            let f = load_tests(family)?;
            let inst = ggt::reduce_3col_to_gt(&g).map_err(reduction_failure)?;
            let coloring = ggt::tests_to_coloring(&inst, &f).map_err(reduction_failure)?;
            eprintln!(
                "extract-coloring: {} color(s) over {} vertices",
                coloring.distinct_count(),
                g.n()
            );
            write_artifact(&cli.output, &emit_coloring(&coloring))
        }

        Command::Bench { instances, methods, seeds, k_max } => {
            let specs: Vec<InstanceSpec> = instances
                .iter()
                .map(|s| InstanceSpec::parse(s))
                .collect::<Result<_, _>>()
                .map_err(bench_failure)?;
            let methods = if methods.is_empty() {
                ggt::methods::methods().to_vec()
            } else {
                resolve_methods(methods).map_err(bench_failure)?
            };
            let seeds = if seeds.is_empty() { vec![cli.seed] } else { seeds.clone() };
            let started = Instant::now();
            let csv = run_sweep(&specs, &methods, &seeds, cli.alpha, cli.attempts, *k_max)
                .map_err(bench_failure)?;
            eprintln!(
                "bench: {} row(s) in {:.2}s",
                csv.lines().count() - 1,
                started.elapsed().as_secs_f64()
            );
            write_artifact(&cli.output, &csv)
        }
    }
}

/// Shared tail of the adaptive subcommand: report the result line, the
/// summary, and the transcript artifact.
fn finish_adaptive(
    cli: &Cli,
    h: &Hypergraph,
    outcome: Result<(usize, ggt::Transcript), AdaptiveError>,
) -> Result<(), Failure> {
    let (found, transcript) =
        outcome.map_err(|e| Failure { code: adaptive_code(&e), message: e.to_string() })?;
    eprintln!(
        "adaptive: queries={} fallback={}",
        transcript.query_count(),
        if transcript.fallback_used() { "yes" } else { "no" }
    );
    println!("RESULT {found}");
    if let Some(path) = &cli.output {
        std::fs::write(path, emit_transcript(&transcript, h.n()))
            .map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}
