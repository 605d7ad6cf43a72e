//! Group testing on arbitrary hypergraphs.
//!
//! The classical screening problem asks for pooled tests that pinpoint up
//! to `d` contaminated items among `n`. Here the prior knowledge is an
//! explicit hypergraph: the contaminated set is promised to be one of its
//! edges, and a test returns whether its pool touches that edge. This crate
//! provides the data model ([`Hypergraph`], [`TestFamily`]), validity
//! checking and decoding, named instance generators, a randomized
//! construction with a provable size bound, an exact optimum for tiny
//! instances, an adaptive identification strategy, and a two-way
//! translation between 3-coloring and test design that pins down the
//! hardness of sizing optimal families.
//!
//! Randomness is always explicit: every randomized entry point takes a seed
//! and equal seeds give equal results, bit for bit.

pub mod adaptive;
pub mod construct;
pub mod generators;
pub mod hypergraph;
pub mod methods;
pub mod reduction;
pub mod set;

pub use adaptive::{
    adaptive_identify, find_balanced_prefix, AdaptiveError, ContaminationOracle, EdgeOracle,
    FallbackConfig, Phase, RoundInfo, Transcript, TranscriptStep,
};
pub use construct::{
    optimal_bruteforce, randomized_construct, required_k, ConstructError, ConstructionParams,
    ConstructionResult,
};
pub use generators::{
    adaptive_lb_instance, embedded_traditional, random_hypergraph, traditional, GenError,
    GenParams, InstanceFamily, DEFAULT_EDGE_CAP,
};
pub use hypergraph::{
    decode, outcome, outcomes, separates, verify, DecodeError, Hypergraph, HypergraphError,
    OutcomeVector, SeparationReport, SingleEdge, TestFamily, TestFamilyError,
};
pub use methods::{Method, MethodConfig, MethodError, MethodOutcome};
pub use reduction::{
    coloring_to_tests, pad_graph, reduce_3col_to_gt, tests_to_coloring, verify_coloring, Coloring,
    Graph, GraphError, PaddingRecord, ReductionError, ReductionInstance,
};
pub use set::VertexSet;
