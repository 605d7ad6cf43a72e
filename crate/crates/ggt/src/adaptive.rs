//! Adaptive identification of the hidden contaminated set.
//!
//! The strategy repeatedly asks for a "balanced prefix" test: a prefix of
//! the vertices in nondecreasing candidate-degree order whose intersection
//! count lands in `[eps * |E'|, (1 - eps) * |E'|]`. Either answer to such a
//! test removes at least an `eps` fraction of the candidates. When no
//! balanced prefix exists the balance target is halved, down to `1/d`; past
//! that point the survivors are handed to the non-adaptive construction.

use thiserror::Error;

use crate::construct::{randomized_construct, ConstructError, ConstructionParams};
use crate::hypergraph::{decode, outcome, DecodeError, Hypergraph, OutcomeVector};
use crate::set::VertexSet;

/// Answers contamination queries: does the hidden set intersect `test`?
pub trait ContaminationOracle {
    fn answer(&mut self, test: &VertexSet) -> bool;
}

/// Oracle backed by a known hidden set; used for simulation and benchmarks.
#[derive(Clone, Debug)]
pub struct EdgeOracle {
    hidden: VertexSet,
}

impl EdgeOracle {
    pub fn new(hidden: VertexSet) -> Self {
        EdgeOracle { hidden }
    }

    pub fn for_edge(h: &Hypergraph, index: usize) -> Self {
        EdgeOracle { hidden: h.edges()[index].clone() }
    }
}

impl ContaminationOracle for EdgeOracle {
    fn answer(&mut self, test: &VertexSet) -> bool {
        outcome(test, &self.hidden)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    /// Balanced-prefix query chosen from the surviving candidates.
    Loop,
    /// Test from the non-adaptive family built over the survivors.
    Fallback,
}

#[derive(Clone, Debug)]
pub struct TranscriptStep {
    pub test: VertexSet,
    pub outcome: bool,
    pub phase: Phase,
    /// Balance target in force when the test was issued.
    pub epsilon: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct RoundInfo {
    pub epsilon: f64,
    /// Balanced-prefix queries issued at this epsilon.
    pub sub_rounds: usize,
}

#[derive(Clone, Debug)]
pub struct Transcript {
    pub steps: Vec<TranscriptStep>,
    pub rounds: Vec<RoundInfo>,
    /// Index of the identified edge.
    pub result: usize,
}

impl Transcript {
    pub fn query_count(&self) -> usize {
        self.steps.len()
    }

    pub fn fallback_used(&self) -> bool {
        self.steps.iter().any(|s| s.phase == Phase::Fallback)
    }
}

/// Parameters for the non-adaptive construction over the survivors.
#[derive(Clone, Debug)]
pub struct FallbackConfig {
    pub alpha: f64,
    pub seed: u64,
    pub max_attempts: usize,
}

impl Default for FallbackConfig {
    fn default() -> Self {
        FallbackConfig { alpha: 3.0, seed: 0, max_attempts: 16 }
    }
}

#[derive(Debug, Error)]
pub enum AdaptiveError {
    #[error("oracle answers are inconsistent with every candidate edge: {detail}")]
    OracleInconsistent { detail: String },
    #[error("fallback construction failed: {0}")]
    Fallback(#[from] ConstructError),
}

/// Shortest prefix of the degree-sorted vertices that intersects between
/// `eps * |edges|` and `(1 - eps) * |edges|` of `edges`, or `None` when the
/// count jumps past the window.
///
/// Vertices are ordered by nondecreasing degree in `edges`, ties by index.
/// The intersection count is nondecreasing in the prefix length, so the
/// first prefix reaching the lower target decides: inside the window it is
/// returned, above the window no prefix works. The empty prefix is never a
/// candidate.
pub fn find_balanced_prefix(n: usize, edges: &[&VertexSet], epsilon: f64) -> Option<VertexSet> {
    let m = edges.len();
    debug_assert!(m >= 2, "a balanced test needs two candidates to distinguish");
    debug_assert!(epsilon > 0.0 && epsilon <= 0.25);

    let mut degree = vec![0usize; n];
    for e in edges {
        for v in e.iter() {
            degree[v] += 1;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (degree[v], v));

    // epsilon is a negative power of two, so both bounds are exact in f64.
    let lo = epsilon * m as f64;
    let hi = (1.0 - epsilon) * m as f64;

    let mut covered = vec![false; m];
    let mut count = 0usize;
    let mut prefix = VertexSet::new();
    for &v in &order {
        prefix.insert(v);
        for (i, e) in edges.iter().enumerate() {
            if !covered[i] && e.contains(v) {
                covered[i] = true;
                count += 1;
            }
        }
        if count as f64 >= lo {
            return if count as f64 <= hi { Some(prefix) } else { None };
        }
    }
    None
}

/// Identify the hidden edge by adaptive queries. Returns the edge index and
/// the full query transcript.
///
/// The halving stop rule uses the largest edge size of the original `h`;
/// the fallback construction recomputes its parameters on the survivors.
pub fn adaptive_identify(
    h: &Hypergraph,
    oracle: &mut dyn ContaminationOracle,
    fallback: &FallbackConfig,
) -> Result<(usize, Transcript), AdaptiveError> {
    let d_entry = h.max_edge_size();
    let mut candidates: Vec<usize> = (0..h.edge_count()).collect();
    let mut epsilon = 0.25f64;
    let mut steps: Vec<TranscriptStep> = Vec::new();
    let mut rounds = vec![RoundInfo { epsilon, sub_rounds: 0 }];

    loop {
        if candidates.len() == 1 {
            let result = candidates[0];
            return Ok((result, Transcript { steps, rounds, result }));
        }
        let view: Vec<&VertexSet> = candidates.iter().map(|&i| &h.edges()[i]).collect();
        if let Some(test) = find_balanced_prefix(h.n(), &view, epsilon) {
            let fired = oracle.answer(&test);
            steps.push(TranscriptStep { test: test.clone(), outcome: fired, phase: Phase::Loop, epsilon });
            rounds.last_mut().expect("at least one round").sub_rounds += 1;
            candidates.retain(|&i| outcome(&test, &h.edges()[i]) == fired);
            if candidates.is_empty() {
                return Err(AdaptiveError::OracleInconsistent {
                    detail: "an answer removed every remaining candidate".into(),
                });
            }
        } else if epsilon > 1.0 / d_entry as f64 {
            epsilon /= 2.0;
            rounds.push(RoundInfo { epsilon, sub_rounds: 0 });
        } else {
            return fallback_phase(h, candidates, oracle, fallback, epsilon, steps, rounds);
        }
    }
}

fn fallback_phase(
    h: &Hypergraph,
    candidates: Vec<usize>,
    oracle: &mut dyn ContaminationOracle,
    fallback: &FallbackConfig,
    epsilon: f64,
    mut steps: Vec<TranscriptStep>,
    rounds: Vec<RoundInfo>,
) -> Result<(usize, Transcript), AdaptiveError> {
    let survivors: Vec<VertexSet> = candidates.iter().map(|&i| h.edges()[i].clone()).collect();
    let restricted = Hypergraph::new(h.n(), survivors).expect("survivors are distinct edges of h");
    let params = ConstructionParams {
        alpha: fallback.alpha,
        seed: fallback.seed,
        max_attempts: fallback.max_attempts,
        p_override: None,
    };
    let construction = randomized_construct(&restricted, &params)?;

    let mut bits = Vec::with_capacity(construction.family.k());
    for test in construction.family.tests() {
        let fired = oracle.answer(test);
        steps.push(TranscriptStep { test: test.clone(), outcome: fired, phase: Phase::Fallback, epsilon });
        bits.push(fired);
    }
    let y = OutcomeVector::new(bits);
    match decode(&restricted, &construction.family, &y) {
        Ok(local) => {
            let result = candidates[local];
            Ok((result, Transcript { steps, rounds, result }))
        }
        Err(DecodeError::NoMatch) => Err(AdaptiveError::OracleInconsistent {
            detail: "fallback outcomes match no surviving candidate".into(),
        }),
        Err(DecodeError::Ambiguous(which)) => Err(AdaptiveError::OracleInconsistent {
            detail: format!("fallback outcomes match {} surviving candidates", which.len()),
        }),
        Err(DecodeError::LengthMismatch { .. }) => unreachable!("one bit was recorded per test"),
    }
}
