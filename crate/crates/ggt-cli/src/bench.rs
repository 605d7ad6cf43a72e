//! Sweep harness: instances crossed with methods crossed with seeds,
//! reported as CSV.

use std::fmt::Write as _;

use ggt::generators::{family, GenError, GenParams};
use ggt::methods::{method, Method, MethodConfig, MethodError};
use ggt::{required_k, Hypergraph};
use thiserror::Error;

use crate::formats::{parse_hypergraph, ParseError};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("instance spec `{spec}`: {reason}")]
    BadSpec { spec: String, reason: String },
    #[error("unknown method `{name}` (registered: {known})")]
    UnknownMethod { name: String, known: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error("instance `{spec}`, method `{method}`, seed {seed}: {source}")]
    Run { spec: String, method: &'static str, seed: u64, source: MethodError },
}

/// One cell of the instance axis: a named generator with positional
/// parameters, or a file. The original text is kept for the CSV.
#[derive(Clone, Debug)]
pub struct InstanceSpec {
    text: String,
    kind: SpecKind,
}

#[derive(Clone, Debug)]
enum SpecKind {
    Family { name: &'static str, params: GenParams },
    File { path: String },
}

impl InstanceSpec {
    /// Parse `traditional:n:d`, `embedded:n:n_prime:d`, `adaptive-lb:d`,
    /// `random:n:m:d`, or `file:path`.
    pub fn parse(spec: &str) -> Result<Self, BenchError> {
        let bad = |reason: &str| BenchError::BadSpec { spec: spec.to_string(), reason: reason.to_string() };
        let (kind, rest) = spec.split_once(':').ok_or_else(|| bad("expected `kind:...`"))?;
        if kind == "file" {
            if rest.is_empty() {
                return Err(bad("empty file path"));
            }
            return Ok(InstanceSpec { text: spec.to_string(), kind: SpecKind::File { path: rest.to_string() } });
        }

        let fields: Vec<usize> = rest
            .split(':')
            .map(|t| t.parse().map_err(|_| bad(&format!("`{t}` is not a count"))))
            .collect::<Result<_, _>>()?;
        let mut params = GenParams::default();
        let name = match (kind, fields.as_slice()) {
            ("traditional", [n, d]) => {
                params.n = Some(*n);
                params.d = Some(*d);
                "traditional"
            }
            ("embedded", [n, n_prime, d]) => {
                params.n = Some(*n);
                params.n_prime = Some(*n_prime);
                params.d = Some(*d);
                "embedded"
            }
            ("adaptive-lb", [d]) => {
                params.d = Some(*d);
                "adaptive-lb"
            }
            ("random", [n, m, d]) => {
                params.n = Some(*n);
                params.m = Some(*m);
                params.d = Some(*d);
                "random"
            }
            ("traditional", _) => return Err(bad("traditional takes n:d")),
            ("embedded", _) => return Err(bad("embedded takes n:n_prime:d")),
            ("adaptive-lb", _) => return Err(bad("adaptive-lb takes d")),
            ("random", _) => return Err(bad("random takes n:m:d")),
            _ => return Err(bad("unknown kind (traditional, embedded, adaptive-lb, random, file)")),
        };
        Ok(InstanceSpec { text: spec.to_string(), kind: SpecKind::Family { name, params } })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    /// Build the hypergraph; `seed` feeds the `random` family, other kinds
    /// ignore it.
    pub fn realize(&self, seed: u64) -> Result<Hypergraph, BenchError> {
        match &self.kind {
            SpecKind::Family { name, params } => {
                let mut params = params.clone();
                params.seed = seed;
                Ok(family(name).expect("parsed names are registered").generate(&params)?)
            }
            SpecKind::File { path } => {
                let text = std::fs::read_to_string(path)
                    .map_err(|source| BenchError::Io { path: path.clone(), source })?;
                parse_hypergraph(&text)
                    .map_err(|source| BenchError::Parse { path: path.clone(), source })
            }
        }
    }
}

pub fn resolve_methods(names: &[String]) -> Result<Vec<&'static dyn Method>, BenchError> {
    names
        .iter()
        .map(|name| {
            method(name).ok_or_else(|| BenchError::UnknownMethod {
                name: name.clone(),
                known: ggt::methods::methods()
                    .iter()
                    .map(|m| m.name())
                    .collect::<Vec<_>>()
                    .join(", "),
            })
        })
        .collect()
}

pub const CSV_HEADER: &str =
    "instance,method,seed,n,m,d,beta,info_lower_bound,required_k,k,attempts,adaptive_worst,adaptive_mean";

fn csv_field(raw: &str) -> String {
    if raw.contains(',') || raw.contains('"') || raw.contains('\n') {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}

fn opt<T: ToString>(value: Option<T>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

/// Run the full cross product in (instance, method, seed) order and render
/// one CSV row per cell. Reference columns are recomputed per instance.
pub fn run_sweep(
    instances: &[InstanceSpec],
    methods: &[&'static dyn Method],
    seeds: &[u64],
    alpha: f64,
    max_attempts: usize,
    k_max: usize,
) -> Result<String, BenchError> {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for spec in instances {
        for m in methods {
            for &seed in seeds {
                let h = spec.realize(seed)?;
                let beta = h.beta().ok();
                let req = beta.map(|b| required_k(h.edge_count(), h.max_edge_size(), b, alpha));
                let cfg = MethodConfig { seed, alpha, max_attempts, k_max };
                let outcome = m.run(&h, &cfg).map_err(|source| BenchError::Run {
                    spec: spec.text().to_string(),
                    method: m.name(),
                    seed,
                    source,
                })?;
                let _ = writeln!(
                    out,
                    "{},{},{seed},{},{},{},{},{},{},{},{},{},{}",
                    csv_field(spec.text()),
                    m.name(),
                    h.n(),
                    h.edge_count(),
                    h.max_edge_size(),
                    opt(beta),
                    h.info_lower_bound(),
                    opt(req),
                    opt(outcome.k),
                    opt(outcome.attempts),
                    opt(outcome.adaptive_worst),
                    opt(outcome.adaptive_mean),
                );
            }
        }
    }
    Ok(out)
}
