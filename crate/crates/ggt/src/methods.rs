//! Solve methods behind a common trait, registered by name so benchmarks
//! and the CLI can select them at runtime.

use thiserror::Error;

use crate::adaptive::{adaptive_identify, AdaptiveError, EdgeOracle, FallbackConfig};
use crate::construct::{
    optimal_bruteforce, randomized_construct, ConstructError, ConstructionParams,
};
use crate::hypergraph::{Hypergraph, TestFamily};

#[derive(Clone, Debug)]
pub struct MethodConfig {
    pub seed: u64,
    pub alpha: f64,
    pub max_attempts: usize,
    /// Search ceiling for the exhaustive method.
    pub k_max: usize,
}

impl Default for MethodConfig {
    fn default() -> Self {
        MethodConfig { seed: 0, alpha: 3.0, max_attempts: 16, k_max: 8 }
    }
}

/// What a method produced; fields a method does not measure stay `None`.
#[derive(Clone, Debug, Default)]
pub struct MethodOutcome {
    /// Tests used by a non-adaptive family, when one was produced.
    pub k: Option<usize>,
    pub family: Option<TestFamily>,
    pub attempts: Option<usize>,
    /// Worst-case adaptive queries over all hidden edges.
    pub adaptive_worst: Option<usize>,
    /// Mean adaptive queries over all hidden edges.
    pub adaptive_mean: Option<f64>,
}

#[derive(Debug, Error)]
pub enum MethodError {
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Adaptive(#[from] AdaptiveError),
}

pub trait Method: Sync {
    fn name(&self) -> &'static str;
    fn run(&self, h: &Hypergraph, cfg: &MethodConfig) -> Result<MethodOutcome, MethodError>;
}

/// Randomized non-adaptive construction; reports family size and attempts.
struct Construct;

impl Method for Construct {
    fn name(&self) -> &'static str {
        "construct"
    }

    fn run(&self, h: &Hypergraph, cfg: &MethodConfig) -> Result<MethodOutcome, MethodError> {
        if h.edge_count() == 1 {
            return Ok(MethodOutcome {
                k: Some(0),
                family: Some(TestFamily::empty(h.n())),
                attempts: Some(0),
                ..MethodOutcome::default()
            });
        }
        let params = ConstructionParams {
            alpha: cfg.alpha,
            seed: cfg.seed,
            max_attempts: cfg.max_attempts,
            p_override: None,
        };
        let result = randomized_construct(h, &params)?;
        Ok(MethodOutcome {
            k: Some(result.k),
            family: Some(result.family),
            attempts: Some(result.attempts_used),
            ..MethodOutcome::default()
        })
    }
}

/// Simulates adaptive identification against every hidden edge in turn and
/// aggregates the query counts.
struct Adaptive;

impl Method for Adaptive {
    fn name(&self) -> &'static str {
        "adaptive"
    }

    fn run(&self, h: &Hypergraph, cfg: &MethodConfig) -> Result<MethodOutcome, MethodError> {
        let fallback = FallbackConfig {
            alpha: cfg.alpha,
            seed: cfg.seed,
            max_attempts: cfg.max_attempts,
        };
        let mut worst = 0usize;
        let mut total = 0usize;
        for hidden in 0..h.edge_count() {
            let mut oracle = EdgeOracle::for_edge(h, hidden);
            let (found, transcript) = adaptive_identify(h, &mut oracle, &fallback)?;
            debug_assert_eq!(found, hidden);
            worst = worst.max(transcript.query_count());
            total += transcript.query_count();
        }
        Ok(MethodOutcome {
            adaptive_worst: Some(worst),
            adaptive_mean: Some(total as f64 / h.edge_count() as f64),
            ..MethodOutcome::default()
        })
    }
}

/// Exhaustive search for the smallest valid family within `k_max`.
struct Optimal;

impl Method for Optimal {
    fn name(&self) -> &'static str {
        "optimal"
    }

    fn run(&self, h: &Hypergraph, cfg: &MethodConfig) -> Result<MethodOutcome, MethodError> {
        let found = optimal_bruteforce(h, cfg.k_max)?;
        Ok(MethodOutcome {
            k: found.as_ref().map(TestFamily::k),
            family: found,
            ..MethodOutcome::default()
        })
    }
}

/// Every registered method, in a fixed order.
pub fn methods() -> &'static [&'static dyn Method] {
    &[&Construct, &Adaptive, &Optimal]
}

/// Look up a method by its registered name.
pub fn method(name: &str) -> Option<&'static dyn Method> {
    methods().iter().copied().find(|m| m.name() == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{traditional, DEFAULT_EDGE_CAP};
    use crate::hypergraph::verify;

    #[test]
    fn registry_lists_all_methods() {
        let names: Vec<&str> = methods().iter().map(|m| m.name()).collect();
        assert_eq!(names, vec!["construct", "adaptive", "optimal"]);
        assert!(method("construct").is_some());
        assert!(method("unknown").is_none());
    }

    #[test]
    fn construct_method_reports_a_valid_family() {
        let h = traditional(6, 2, DEFAULT_EDGE_CAP).unwrap();
        let outcome = method("construct").unwrap().run(&h, &MethodConfig::default()).unwrap();
        let family = outcome.family.unwrap();
        assert_eq!(outcome.k, Some(family.k()));
        assert!(verify(&h, &family).is_valid());
        assert!(outcome.attempts.unwrap() >= 1);
    }

    #[test]
    fn adaptive_method_aggregates_queries() {
        let h = traditional(6, 2, DEFAULT_EDGE_CAP).unwrap();
        let outcome = method("adaptive").unwrap().run(&h, &MethodConfig::default()).unwrap();
        let worst = outcome.adaptive_worst.unwrap();
        let mean = outcome.adaptive_mean.unwrap();
        assert!(worst >= 1);
        assert!(mean > 0.0 && mean <= worst as f64);
    }

    #[test]
    fn optimal_method_respects_k_max() {
        let h = traditional(4, 2, DEFAULT_EDGE_CAP).unwrap();
        let capped = method("optimal")
            .unwrap()
            .run(&h, &MethodConfig { k_max: 1, ..MethodConfig::default() })
            .unwrap();
        assert_eq!(capped.k, None);
        let full = method("optimal").unwrap().run(&h, &MethodConfig::default()).unwrap();
        let family = full.family.unwrap();
        assert!(verify(&h, &family).is_valid());
        assert!(family.k() >= h.info_lower_bound());
    }
}
