//! Non-adaptive test-family construction.
//!
//! Two routes: a Las-Vegas randomized construction whose size bound depends
//! only on the edge count, the largest edge, and the separation parameter
//! beta, and an exhaustive search for the exact optimum on tiny instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::hypergraph::{ceil_log2, verify, Hypergraph, TestFamily};
use crate::set::VertexSet;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructError {
    #[error("randomized construction needs at least two edges")]
    TooFewEdges,
    #[error("invalid construction parameters: {reason}")]
    InvalidParams { reason: String },
    #[error("all {attempts} attempts produced an invalid family; last counterexample: edge pair {counterexample:?}")]
    ExhaustedAttempts { attempts: usize, counterexample: (usize, usize) },
    #[error("instance too large for exhaustive search: {reason}")]
    TooLarge { reason: String },
}

/// Number of tests guaranteeing success probability at least `1 - e^{-alpha}`
/// for a single sampled family: `ceil((2 ln m + alpha) * 2 e d / beta)`.
///
/// Requires `m >= 2`, `1 <= beta <= d`, `alpha > 0`.
pub fn required_k(m: usize, d: usize, beta: usize, alpha: f64) -> usize {
    debug_assert!(m >= 2);
    debug_assert!(beta >= 1 && beta <= d);
    debug_assert!(alpha > 0.0);
    let bound =
        (2.0 * (m as f64).ln() + alpha) * 2.0 * std::f64::consts::E * d as f64 / beta as f64;
    bound.ceil() as usize
}

#[derive(Clone, Debug)]
pub struct ConstructionParams {
    pub alpha: f64,
    pub seed: u64,
    pub max_attempts: usize,
    /// Test inclusion probability; defaults to `1/d`.
    pub p_override: Option<f64>,
}

impl Default for ConstructionParams {
    fn default() -> Self {
        ConstructionParams { alpha: 3.0, seed: 0, max_attempts: 16, p_override: None }
    }
}

impl ConstructionParams {
    fn validate(&self) -> Result<(), ConstructError> {
        if !(self.alpha > 0.0) {
            return Err(ConstructError::InvalidParams { reason: format!("alpha must be positive, got {}", self.alpha) });
        }
        if self.max_attempts < 1 {
            return Err(ConstructError::InvalidParams { reason: "max_attempts must be at least 1".into() });
        }
        if let Some(p) = self.p_override {
            if !(p > 0.0 && p < 1.0) {
                return Err(ConstructError::InvalidParams { reason: format!("p must lie in (0, 1), got {p}") });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionResult {
    pub family: TestFamily,
    pub k: usize,
    /// 1-based count of sampled families, so 1 means the first try verified.
    pub attempts_used: usize,
    pub beta_used: usize,
    pub d_used: usize,
}

/// Las-Vegas construction: sample `k = required_k(...)` tests with i.i.d.
/// entries at probability `1/d`, verify, and retry on a fresh PRNG stream
/// until a family verifies or attempts run out. Attempt `i` uses stream `i`
/// of the seed, so results are reproducible and independent of retry count.
pub fn randomized_construct(
    h: &Hypergraph,
    params: &ConstructionParams,
) -> Result<ConstructionResult, ConstructError> {
    params.validate()?;
    if h.edge_count() < 2 {
        return Err(ConstructError::TooFewEdges);
    }
    let d = h.max_edge_size();
    let beta = h.beta().expect("two or more edges");
    let k = required_k(h.edge_count(), d, beta, params.alpha);
    // At d = 1 the default 1/d degenerates to all-ones tests, which never
    // separate anything; 1/2 maximizes the per-pair separation chance for
    // singleton edges and keeps the k bound valid.
    let p = params.p_override.unwrap_or(1.0 / d.max(2) as f64);

    let mut last_counterexample = (0, 0);
    for attempt in 0..params.max_attempts {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        rng.set_stream(attempt as u64);
        let family = sample_family(h.n(), k, p, &mut rng);
        match verify(h, &family).counterexample() {
            None => {
                return Ok(ConstructionResult {
                    family,
                    k,
                    attempts_used: attempt + 1,
                    beta_used: beta,
                    d_used: d,
                })
            }
            Some(pair) => last_counterexample = pair,
        }
    }
    Err(ConstructError::ExhaustedAttempts {
        attempts: params.max_attempts,
        counterexample: last_counterexample,
    })
}

/// One draw per matrix entry in row-major order, so a family's contents
/// depend only on the PRNG state, not on branch history.
fn sample_family(n: usize, k: usize, p: f64, rng: &mut ChaCha8Rng) -> TestFamily {
    let mut family = TestFamily::empty(n);
    for _ in 0..k {
        let test: VertexSet = (0..n).filter(|_| rng.gen::<f64>() < p).collect();
        family.push(test);
    }
    family
}

/// Hard ceilings for [`optimal_bruteforce`]; the search is exponential in
/// both dimensions.
pub const BRUTEFORCE_MAX_N: usize = 16;
pub const BRUTEFORCE_MAX_EDGES: usize = 64;

/// Smallest valid family for `h`, found by depth-first search over test
/// subsets; `None` if no family of size at most `k_max` is valid.
///
/// Tests are scanned as bitmasks in increasing numeric order and chosen with
/// strictly increasing masks, so the first family found is the
/// lexicographically least optimum under that encoding. A candidate test is
/// skipped unless it separates some pair that the tests chosen so far leave
/// unseparated; a branch is abandoned when some group of mutually
/// unseparated edges is too large to split within the remaining test budget.
/// Both rules only discard redundant or doomed branches, so the first
/// family found is still the lexicographic least.
pub fn optimal_bruteforce(h: &Hypergraph, k_max: usize) -> Result<Option<TestFamily>, ConstructError> {
    if h.n() > BRUTEFORCE_MAX_N {
        return Err(ConstructError::TooLarge {
            reason: format!("{} vertices, limit {BRUTEFORCE_MAX_N}", h.n()),
        });
    }
    if h.edge_count() > BRUTEFORCE_MAX_EDGES {
        return Err(ConstructError::TooLarge {
            reason: format!("{} edges, limit {BRUTEFORCE_MAX_EDGES}", h.edge_count()),
        });
    }

    let edge_masks: Vec<u32> = h
        .edges()
        .iter()
        .map(|e| e.iter().fold(0u32, |acc, v| acc | (1 << v)))
        .collect();
    let full: u32 = (1 << h.n()) - 1;

    // Partition of edge indices into classes with equal outcomes so far.
    let initial = vec![(0..edge_masks.len()).collect::<Vec<usize>>()];
    for k in 0..=k_max {
        let mut chosen: Vec<u32> = Vec::with_capacity(k);
        if search(&edge_masks, &initial, 1, k, full, &mut chosen) {
            let tests = chosen
                .iter()
                .map(|&mask| (0..h.n()).filter(|&v| mask & (1 << v) != 0).collect())
                .collect();
            let family = TestFamily::new(h.n(), tests).expect("masks only use valid vertices");
            return Ok(Some(family));
        }
    }
    Ok(None)
}

fn search(
    edge_masks: &[u32],
    classes: &[Vec<usize>],
    from_mask: u32,
    remaining: usize,
    full: u32,
    chosen: &mut Vec<u32>,
) -> bool {
    if classes.iter().all(|c| c.len() == 1) {
        return true;
    }
    if remaining == 0 {
        return false;
    }
    let largest = classes.iter().map(|c| c.len()).max().unwrap_or(1);
    if ceil_log2(largest) > remaining {
        return false;
    }
    for mask in from_mask..=full {
        let mut refined: Vec<Vec<usize>> = Vec::with_capacity(classes.len() + 1);
        let mut split_any = false;
        for class in classes {
            let (hit, miss): (Vec<usize>, Vec<usize>) =
                class.iter().partition(|&&e| edge_masks[e] & mask != 0);
            if !hit.is_empty() && !miss.is_empty() {
                split_any = true;
            }
            if !hit.is_empty() {
                refined.push(hit);
            }
            if !miss.is_empty() {
                refined.push(miss);
            }
        }
        if !split_any {
            continue;
        }
        chosen.push(mask);
        if search(edge_masks, &refined, mask + 1, remaining - 1, full, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}
