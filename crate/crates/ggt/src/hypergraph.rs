//! Core data model: hypergraphs of candidate contaminated sets, test
//! families, OR-outcome semantics, separation checking, and decoding.

use thiserror::Error;

use crate::set::VertexSet;

/// A ground set `{0..n-1}` together with the candidate contaminated sets.
///
/// Edges are kept in insertion order; indices into that order identify a
/// candidate everywhere else in the crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<VertexSet>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("hypergraph must have at least one edge")]
    NoEdges,
    #[error("edge {index} is empty")]
    EmptyEdge { index: usize },
    #[error("edge {index} contains vertex {vertex}, outside the ground set 0..{n}")]
    VertexOutOfRange { index: usize, vertex: usize, n: usize },
    #[error("edge {second} duplicates edge {first}")]
    DuplicateEdge { first: usize, second: usize },
}

impl Hypergraph {
    /// Validates the edge list: edges must be non-empty, within `0..n`, and
    /// pairwise distinct as sets. Duplicate edges can never be separated, so
    /// they are rejected here rather than detected later.
    pub fn new(n: usize, edges: Vec<VertexSet>) -> Result<Self, HypergraphError> {
        if edges.is_empty() {
            return Err(HypergraphError::NoEdges);
        }
        for (index, edge) in edges.iter().enumerate() {
            if edge.is_empty() {
                return Err(HypergraphError::EmptyEdge { index });
            }
            if let Some(vertex) = edge.max_vertex().filter(|&v| v >= n) {
                return Err(HypergraphError::VertexOutOfRange { index, vertex, n });
            }
        }
        for second in 1..edges.len() {
            if let Some(first) = (0..second).find(|&first| edges[first] == edges[second]) {
                return Err(HypergraphError::DuplicateEdge { first, second });
            }
        }
        Ok(Hypergraph { n, edges })
    }

    pub fn from_edges<I, E>(n: usize, edges: I) -> Result<Self, HypergraphError>
    where
        I: IntoIterator<Item = E>,
        E: IntoIterator<Item = usize>,
    {
        Self::new(n, edges.into_iter().map(|e| e.into_iter().collect()).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[VertexSet] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Maximum edge cardinality.
    pub fn max_edge_size(&self) -> usize {
        self.edges.iter().map(VertexSet::len).max().unwrap_or(0)
    }

    /// Minimum over unordered edge pairs of the larger one-sided difference
    /// `max(|e \ e'|, |e' \ e|)`. At least 1 whenever edges are distinct.
    pub fn beta(&self) -> Result<usize, SingleEdge> {
        if self.edges.len() < 2 {
            return Err(SingleEdge);
        }
        let mut best = usize::MAX;
        for a in 0..self.edges.len() {
            for b in a + 1..self.edges.len() {
                let fwd = self.edges[a].difference_len(&self.edges[b]);
                let back = self.edges[b].difference_len(&self.edges[a]);
                best = best.min(fwd.max(back));
            }
        }
        Ok(best)
    }

    /// `⌈log₂ |E|⌉`: every test outcome carries at most one bit, so no valid
    /// family can be smaller.
    pub fn info_lower_bound(&self) -> usize {
        ceil_log2(self.edges.len())
    }
}

/// The larger one-sided difference is undefined with fewer than two edges.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("beta is undefined for a hypergraph with fewer than two edges")]
pub struct SingleEdge;

pub(crate) fn ceil_log2(m: usize) -> usize {
    assert!(m >= 1);
    (usize::BITS - (m - 1).leading_zeros()) as usize
}

/// An ordered list of tests over the ground set `{0..n-1}`; equivalently a
/// `k x n` 0/1 incidence matrix.
///
/// Empty tests are legal (they arise from file round-trips) but never fire.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestFamily {
    n: usize,
    tests: Vec<VertexSet>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TestFamilyError {
    #[error("test {index} contains vertex {vertex}, outside the ground set 0..{n}")]
    VertexOutOfRange { index: usize, vertex: usize, n: usize },
}

impl TestFamily {
    pub fn new(n: usize, tests: Vec<VertexSet>) -> Result<Self, TestFamilyError> {
        for (index, test) in tests.iter().enumerate() {
            if let Some(vertex) = test.max_vertex().filter(|&v| v >= n) {
                return Err(TestFamilyError::VertexOutOfRange { index, vertex, n });
            }
        }
        Ok(TestFamily { n, tests })
    }

    pub fn empty(n: usize) -> Self {
        TestFamily { n, tests: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tests(&self) -> &[VertexSet] {
        &self.tests
    }

    pub fn k(&self) -> usize {
        self.tests.len()
    }

    pub fn push(&mut self, test: VertexSet) {
        debug_assert!(test.max_vertex().map_or(true, |v| v < self.n));
        self.tests.push(test);
    }

    /// Indices of tests that are empty and therefore separate nothing.
    pub fn useless_tests(&self) -> Vec<usize> {
        self.tests
            .iter()
            .enumerate()
            .filter(|(_, t)| t.is_empty())
            .map(|(i, _)| i)
            .collect()
    }
}

/// The OR-outcomes of a test family against one contaminated set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutcomeVector {
    bits: Vec<bool>,
}

impl OutcomeVector {
    pub fn new(bits: Vec<bool>) -> Self {
        OutcomeVector { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// Result of checking a family against a hypergraph: either every pair of
/// edges is separated, or the first failing pair in index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationReport {
    counterexample: Option<(usize, usize)>,
}

impl SeparationReport {
    pub fn is_valid(&self) -> bool {
        self.counterexample.is_none()
    }

    /// Edge-index pair with no separating test, present iff invalid.
    pub fn counterexample(&self) -> Option<(usize, usize)> {
        self.counterexample
    }
}

/// A single test fires on `s` iff the test pool contains a contaminated item.
pub fn outcome(test: &VertexSet, s: &VertexSet) -> bool {
    test.intersects(s)
}

/// A test separates `a` from `b` when exactly one of them fires on it.
pub fn separates(test: &VertexSet, a: &VertexSet, b: &VertexSet) -> bool {
    outcome(test, a) != outcome(test, b)
}

/// Outcome bits of every test in the family against `s`, in test order.
pub fn outcomes(family: &TestFamily, s: &VertexSet) -> OutcomeVector {
    OutcomeVector::new(family.tests().iter().map(|t| outcome(t, s)).collect())
}

/// Checks that every unordered pair of distinct edges has a separating test.
///
/// Pairs are scanned in lexicographic edge-index order and the scan stops at
/// the first failure, so the reported counterexample is deterministic.
pub fn verify(h: &Hypergraph, family: &TestFamily) -> SeparationReport {
    let edges = h.edges();
    for a in 0..edges.len() {
        for b in a + 1..edges.len() {
            let separated = family
                .tests()
                .iter()
                .any(|t| separates(t, &edges[a], &edges[b]));
            if !separated {
                return SeparationReport { counterexample: Some((a, b)) };
            }
        }
    }
    SeparationReport { counterexample: None }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecodeError {
    #[error("no edge is consistent with the outcome vector")]
    NoMatch,
    #[error("outcome vector is ambiguous between edges {0:?}")]
    Ambiguous(Vec<usize>),
    #[error("outcome vector has {got} bits but the family has {expected} tests")]
    LengthMismatch { got: usize, expected: usize },
}

/// Recovers the unique edge whose outcome vector equals `y`.
///
/// Ambiguity reports the full consistent set rather than an arbitrary pick,
/// which surfaces invalid families during testing.
pub fn decode(h: &Hypergraph, family: &TestFamily, y: &OutcomeVector) -> Result<usize, DecodeError> {
    if y.len() != family.k() {
        return Err(DecodeError::LengthMismatch { got: y.len(), expected: family.k() });
    }
    let consistent: Vec<usize> = h
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| outcomes(family, e) == *y)
        .map(|(i, _)| i)
        .collect();
    match consistent.len() {
        0 => Err(DecodeError::NoMatch),
        1 => Ok(consistent[0]),
        _ => Err(DecodeError::Ambiguous(consistent)),
    }
}
