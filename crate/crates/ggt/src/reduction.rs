//! Constructive reductions between graph 3-coloring and test-family design.
//!
//! A graph with `2^l - 1` edges maps to a hypergraph whose optimal family
//! size is `l + 2` exactly when the graph is 3-colorable: a proper
//! 3-coloring yields an `(l + 2)`-test family, and any valid family with
//! `l + delta` tests yields a proper coloring with at most `2^delta` colors.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::hypergraph::{ceil_log2, Hypergraph, TestFamily};
use crate::set::VertexSet;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {index} touches vertex {vertex}, but the graph has {n} vertices")]
    VertexOutOfRange { index: usize, vertex: usize, n: usize },
    #[error("edge {index} is a self-loop")]
    SelfLoop { index: usize },
    #[error("edges {first} and {second} join the same endpoints")]
    DuplicateEdge { first: usize, second: usize },
}

/// Simple undirected graph; endpoints are stored as normalized `(low, high)`
/// pairs in insertion order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let mut normalized = Vec::with_capacity(edges.len());
        for (index, (a, b)) in edges.into_iter().enumerate() {
            if a >= n {
                return Err(GraphError::VertexOutOfRange { index, vertex: a, n });
            }
            if b >= n {
                return Err(GraphError::VertexOutOfRange { index, vertex: b, n });
            }
            if a == b {
                return Err(GraphError::SelfLoop { index });
            }
            let edge = (a.min(b), a.max(b));
            if let Some(first) = normalized.iter().position(|&e| e == edge) {
                return Err(GraphError::DuplicateEdge { first, second: index });
            }
            normalized.push(edge);
        }
        Ok(Graph { n, edges: normalized })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

/// A color per vertex; colors are arbitrary small integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<usize>,
}

impl Coloring {
    pub fn new(colors: Vec<usize>) -> Self {
        Coloring { colors }
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn distinct_count(&self) -> usize {
        self.colors.iter().collect::<BTreeSet<_>>().len()
    }
}

/// First edge in insertion order whose endpoints share a color.
fn first_conflict(g: &Graph, coloring: &Coloring) -> Option<(usize, usize)> {
    g.edges()
        .iter()
        .copied()
        .find(|&(u, v)| coloring.colors[u] == coloring.colors[v])
}

/// True when the coloring assigns every vertex a color and no edge is
/// monochromatic. A coloring of the wrong length is not proper.
pub fn verify_coloring(g: &Graph, coloring: &Coloring) -> bool {
    coloring.len() == g.n() && first_conflict(g, coloring).is_none()
}

/// What [`pad_graph`] appended.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PaddingRecord {
    pub added_triangle: bool,
    pub path_edges: usize,
    pub added_vertices: usize,
}

/// Grow the graph to exactly `2^l - 1` edges (`l >= 2`) by appending
/// disjoint filler: optionally a triangle (forcing chromatic number at
/// least 3), then a simple path. Filler touches only fresh vertices, so
/// 3-colorability is preserved; with the triangle it is also forced from
/// below.
pub fn pad_graph(g: &Graph, force_three_chromatic: bool) -> (Graph, PaddingRecord) {
    let mut n = g.n();
    let mut edges = g.edges().to_vec();
    let mut record = PaddingRecord::default();

    if force_three_chromatic {
        edges.push((n, n + 1));
        edges.push((n + 1, n + 2));
        edges.push((n, n + 2));
        n += 3;
        record.added_triangle = true;
        record.added_vertices += 3;
    }

    let m = edges.len();
    let ell = ceil_log2(m + 1).max(2);
    let target = (1usize << ell) - 1;
    let missing = target - m;
    if missing > 0 {
        for i in 0..missing {
            edges.push((n + i, n + i + 1));
        }
        n += missing + 1;
        record.path_edges = missing;
        record.added_vertices += missing + 1;
    }

    let padded = Graph::new(n, edges).expect("filler edges touch only fresh vertices");
    (padded, record)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("need exactly 2^l - 1 graph edges for some l >= 2, got {edges}")]
    BadEdgeCount { edges: usize },
    #[error("coloring has {got} entries, the graph has {expected} vertices")]
    WrongColoringLength { expected: usize, got: usize },
    #[error("edge ({u}, {v}) has one color on both endpoints")]
    NotProper { u: usize, v: usize },
    #[error("coloring uses colors {used:?}, need exactly 0, 1, 2")]
    NotThreeColors { used: Vec<usize> },
    #[error("family is over {got} vertices, the instance has {expected}")]
    WrongGroundSet { expected: usize, got: usize },
    #[error("{support} tests touch node vertices, at most {delta} may; hyperedge pair {pair:?} shares all outcomes")]
    SupportTooLarge { support: usize, delta: i64, pair: (usize, usize) },
    #[error("family does not separate hyperedge pair {pair:?}")]
    NotValidFamily { pair: (usize, usize) },
}

/// A 3-coloring instance translated to a group-testing instance.
///
/// With `M = 2^l - 1` graph edges, hypergraph vertices `0..M` stand for the
/// graph edges (`m`-th edge, 1-based, at vertex `m - 1`) and vertices
/// `M..M + n` for the graph vertices. Hyperedges: for each `m` one "big"
/// edge holding every node vertex plus edge vertex `m - 1`, then for each
/// `m` the two pairs `{node(u), m - 1}` and `{node(v), m - 1}` where
/// `(u, v)` is the `m`-th graph edge. Big edges sit at hyperedge indices
/// `0..M`, the pairs for `m` at `M + 2(m-1)` and `M + 2(m-1) + 1`.
#[derive(Clone, Debug)]
pub struct ReductionInstance {
    graph: Graph,
    hypergraph: Hypergraph,
    ell: usize,
}

impl ReductionInstance {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Number of edge vertices, `M = 2^l - 1`.
    pub fn edge_vertex_count(&self) -> usize {
        (1 << self.ell) - 1
    }

    /// Hypergraph vertex standing for the `m`-th graph edge, `m` 1-based.
    pub fn edge_vertex(&self, m: usize) -> usize {
        debug_assert!(m >= 1 && m <= self.edge_vertex_count());
        m - 1
    }

    /// Hypergraph vertex standing for graph vertex `i`.
    pub fn node_vertex(&self, i: usize) -> usize {
        debug_assert!(i < self.graph.n());
        self.edge_vertex_count() + i
    }

    /// Hyperedge indices of the two pair edges for the `m`-th graph edge.
    pub fn pair_edge_indices(&self, m: usize) -> (usize, usize) {
        let base = self.edge_vertex_count() + 2 * (m - 1);
        (base, base + 1)
    }
}

/// Build the group-testing instance for `g`; requires `|edges| = 2^l - 1`
/// with `l >= 2` (see [`pad_graph`]).
pub fn reduce_3col_to_gt(g: &Graph) -> Result<ReductionInstance, ReductionError> {
    let m_count = g.edge_count();
    let ell = ceil_log2(m_count.max(1) + 1);
    if m_count < 3 || (1usize << ell) - 1 != m_count {
        return Err(ReductionError::BadEdgeCount { edges: m_count });
    }

    let node_base = m_count;
    let n_h = m_count + g.n();
    let all_nodes: VertexSet = (node_base..n_h).collect();

    let mut hyperedges: Vec<VertexSet> = Vec::with_capacity(3 * m_count);
    for m in 1..=m_count {
        let mut big = all_nodes.clone();
        big.insert(m - 1);
        hyperedges.push(big);
    }
    for (index, &(u, v)) in g.edges().iter().enumerate() {
        let ev = index;
        hyperedges.push(VertexSet::from_slice(&[node_base + u, ev]));
        hyperedges.push(VertexSet::from_slice(&[node_base + v, ev]));
    }

    let hypergraph =
        Hypergraph::new(n_h, hyperedges).expect("reduction produces distinct non-empty edges");
    Ok(ReductionInstance { graph: g.clone(), hypergraph, ell })
}

/// Turn a proper 3-coloring (colors exactly `{0, 1, 2}`) into a valid
/// family of `l + 2` tests.
///
/// Rows `1..=l` broadcast the binary code of each edge vertex's index
/// (1-based, most significant bit in row 1). Row `l + 1` holds the node
/// vertices of color 2 and row `l + 2` those of color 1, so the per-vertex
/// code pairs are 00, 01, 10 for colors 0, 1, 2.
pub fn coloring_to_tests(
    inst: &ReductionInstance,
    coloring: &Coloring,
) -> Result<TestFamily, ReductionError> {
    let g = &inst.graph;
    if coloring.len() != g.n() {
        return Err(ReductionError::WrongColoringLength { expected: g.n(), got: coloring.len() });
    }
    if let Some((u, v)) = first_conflict(g, coloring) {
        return Err(ReductionError::NotProper { u, v });
    }
    let used: BTreeSet<usize> = coloring.colors().iter().copied().collect();
    if used != BTreeSet::from([0, 1, 2]) {
        return Err(ReductionError::NotThreeColors { used: used.into_iter().collect() });
    }

    let ell = inst.ell;
    let m_count = inst.edge_vertex_count();
    let mut tests: Vec<VertexSet> = Vec::with_capacity(ell + 2);
    for row in 1..=ell {
        tests.push((1..=m_count).filter(|m| (m >> (ell - row)) & 1 == 1).map(|m| m - 1).collect());
    }
    for target_color in [2, 1] {
        tests.push(
            (0..g.n())
                .filter(|&i| coloring.colors()[i] == target_color)
                .map(|i| inst.node_vertex(i))
                .collect(),
        );
    }
    Ok(TestFamily::new(inst.hypergraph.n(), tests).expect("rows use only instance vertices"))
}

/// Extract a proper coloring from a valid family of `l + delta` tests; the
/// coloring uses at most `2^delta` colors.
///
/// `w` marks the tests containing a node vertex. Big edges agree on every
/// such test, so a valid family must separate all `2^l - 1` of them with
/// the remaining tests alone; more than `delta` marked tests leave fewer
/// than `l` of those, which is impossible, and the offending unseparated
/// pair is reported. Otherwise each graph vertex is colored by its node
/// vertex's membership pattern on the marked tests, and any monochromatic
/// graph edge exposes a pair of hyperedges the family fails to separate.
pub fn tests_to_coloring(
    inst: &ReductionInstance,
    family: &TestFamily,
) -> Result<Coloring, ReductionError> {
    let h = inst.hypergraph();
    if family.n() != h.n() {
        return Err(ReductionError::WrongGroundSet { expected: h.n(), got: family.n() });
    }
    let g = &inst.graph;
    let m_count = inst.edge_vertex_count();
    let k = family.k();
    let delta = k as i64 - inst.ell as i64;

    let node_vertices: VertexSet = (m_count..h.n()).collect();
    let support: Vec<usize> = (0..k).filter(|&t| family.tests()[t].intersects(&node_vertices)).collect();

    if support.len() as i64 > delta {
        let pair = unseparated_big_pair(inst, family, &support);
        return Err(ReductionError::SupportTooLarge {
            support: support.len(),
            delta,
            pair,
        });
    }

    // Each vertex's color is its membership pattern on the support rows,
    // read as a binary number with the lowest support row most significant
    // (so the canonical codes 00, 01, 10 become colors 0, 1, 2). Patterns
    // wider than a machine word get dense labels in order of first
    // appearance instead; only distinctness matters from here on.
    let patterns: Vec<Vec<bool>> = (0..g.n())
        .map(|i| {
            let node = inst.node_vertex(i);
            support.iter().map(|&t| family.tests()[t].contains(node)).collect()
        })
        .collect();
    let colors: Vec<usize> = if support.len() < usize::BITS as usize {
        patterns
            .iter()
            .map(|p| p.iter().fold(0usize, |acc, &bit| (acc << 1) | bit as usize))
            .collect()
    } else {
        let mut seen: Vec<&[bool]> = Vec::new();
        patterns
            .iter()
            .map(|p| {
                seen.iter().position(|q| q == &p.as_slice()).unwrap_or_else(|| {
                    seen.push(p);
                    seen.len() - 1
                })
            })
            .collect()
    };
    let coloring = Coloring::new(colors);

    if let Some(position) = g
        .edges()
        .iter()
        .position(|&(u, v)| coloring.colors()[u] == coloring.colors()[v])
    {
        return Err(ReductionError::NotValidFamily {
            pair: inst.pair_edge_indices(position + 1),
        });
    }
    Ok(coloring)
}

/// Two big edges with equal outcomes on every test outside `support`.
/// Exists whenever fewer than `l` tests lie outside the support, because
/// tests inside it fire on every big edge. Returns the first collision in
/// index order.
fn unseparated_big_pair(
    inst: &ReductionInstance,
    family: &TestFamily,
    support: &[usize],
) -> (usize, usize) {
    let h = inst.hypergraph();
    let m_count = inst.edge_vertex_count();
    let outside: Vec<usize> =
        (0..family.k()).filter(|t| !support.contains(t)).collect();

    let mut seen: Vec<(Vec<bool>, usize)> = Vec::with_capacity(m_count);
    for big in 0..m_count {
        let pattern: Vec<bool> = outside
            .iter()
            .map(|&t| family.tests()[t].intersects(&h.edges()[big]))
            .collect();
        if let Some((_, first)) = seen.iter().find(|(p, _)| *p == pattern) {
            return (*first, big);
        }
        seen.push((pattern, big));
    }
    unreachable!("fewer than l outside tests cannot tell 2^l - 1 big edges apart");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::verify;

    fn triangle() -> Graph {
        Graph::new(3, vec![(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn graph_rejects_malformed_edges() {
        assert_eq!(
            Graph::new(3, vec![(0, 3)]),
            Err(GraphError::VertexOutOfRange { index: 0, vertex: 3, n: 3 })
        );
        assert_eq!(Graph::new(3, vec![(1, 1)]), Err(GraphError::SelfLoop { index: 0 }));
        assert_eq!(
            Graph::new(3, vec![(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge { first: 0, second: 1 })
        );
    }

    #[test]
    fn coloring_checks() {
        let g = triangle();
        assert!(verify_coloring(&g, &Coloring::new(vec![0, 1, 2])));
        assert!(!verify_coloring(&g, &Coloring::new(vec![0, 1, 1])));
        assert!(!verify_coloring(&g, &Coloring::new(vec![0, 1])));
    }

    #[test]
    fn padding_reaches_the_next_target() {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        let (padded, record) = pad_graph(&g, false);
        assert_eq!(padded.edge_count(), 3);
        assert_eq!(padded.n(), 5);
        assert_eq!(
            record,
            PaddingRecord { added_triangle: false, path_edges: 2, added_vertices: 3 }
        );

        let (unchanged, record) = pad_graph(&triangle(), false);
        assert_eq!(unchanged, triangle());
        assert_eq!(record, PaddingRecord::default());
    }

    #[test]
    fn forced_padding_adds_a_triangle_first() {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        let (padded, record) = pad_graph(&g, true);
        assert_eq!(padded.edge_count(), 7);
        assert!(record.added_triangle);
        assert_eq!(record.path_edges, 3);
        assert_eq!(record.added_vertices, 7);
        assert_eq!(padded.n(), 9);
        // The filler triangle sits on fresh vertices 2, 3, 4.
        assert!(padded.edges().contains(&(2, 3)));
        assert!(padded.edges().contains(&(2, 4)));
        assert!(padded.edges().contains(&(3, 4)));
    }

    #[test]
    fn reduce_rejects_bad_edge_counts() {
        let g = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            reduce_3col_to_gt(&g),
            Err(ReductionError::BadEdgeCount { edges: 2 })
        ));
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        assert!(matches!(reduce_3col_to_gt(&g), Err(ReductionError::BadEdgeCount { edges: 1 })));
    }

    #[test]
    fn triangle_reduction_layout() {
        let inst = reduce_3col_to_gt(&triangle()).unwrap();
        assert_eq!(inst.ell(), 2);
        let h = inst.hypergraph();
        assert_eq!(h.n(), 6);
        assert_eq!(h.edge_count(), 9);
        assert_eq!(h.info_lower_bound(), inst.ell() + 2);

        assert_eq!(h.edges()[0], VertexSet::from_slice(&[0, 3, 4, 5]));
        assert_eq!(h.edges()[2], VertexSet::from_slice(&[2, 3, 4, 5]));
        // Pairs for the first graph edge (0, 1) on edge vertex 0.
        assert_eq!(h.edges()[3], VertexSet::from_slice(&[0, 3]));
        assert_eq!(h.edges()[4], VertexSet::from_slice(&[0, 4]));
        // Pairs for the third graph edge (1, 2) on edge vertex 2.
        assert_eq!(h.edges()[7], VertexSet::from_slice(&[2, 4]));
        assert_eq!(h.edges()[8], VertexSet::from_slice(&[2, 5]));
    }

    #[test]
    fn coloring_to_tests_layout_and_validity() {
        let inst = reduce_3col_to_gt(&triangle()).unwrap();
        let family = coloring_to_tests(&inst, &Coloring::new(vec![0, 1, 2])).unwrap();
        assert_eq!(family.k(), 4);
        assert_eq!(family.tests()[0], VertexSet::from_slice(&[1, 2]));
        assert_eq!(family.tests()[1], VertexSet::from_slice(&[0, 2]));
        assert_eq!(family.tests()[2], VertexSet::from_slice(&[5]));
        assert_eq!(family.tests()[3], VertexSet::from_slice(&[4]));
        assert!(verify(inst.hypergraph(), &family).is_valid());
    }

    #[test]
    fn coloring_to_tests_rejects_bad_colorings() {
        let inst = reduce_3col_to_gt(&triangle()).unwrap();
        assert_eq!(
            coloring_to_tests(&inst, &Coloring::new(vec![0, 1])),
            Err(ReductionError::WrongColoringLength { expected: 3, got: 2 })
        );
        assert_eq!(
            coloring_to_tests(&inst, &Coloring::new(vec![0, 0, 2])),
            Err(ReductionError::NotProper { u: 0, v: 1 })
        );
        assert_eq!(
            coloring_to_tests(&inst, &Coloring::new(vec![0, 1, 3])),
            Err(ReductionError::NotThreeColors { used: vec![0, 1, 3] })
        );
        // Proper but with a color outside {0, 1, 2} still rejects.
        let square = Graph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        let inst = reduce_3col_to_gt(&square).unwrap();
        assert!(matches!(
            coloring_to_tests(&inst, &Coloring::new(vec![0, 1, 0, 1])),
            Err(ReductionError::NotThreeColors { .. })
        ));
    }

    #[test]
    fn extraction_round_trips_the_canonical_coloring() {
        let inst = reduce_3col_to_gt(&triangle()).unwrap();
        let original = Coloring::new(vec![0, 1, 2]);
        let family = coloring_to_tests(&inst, &original).unwrap();
        let extracted = tests_to_coloring(&inst, &family).unwrap();
        assert_eq!(extracted, original);
        assert!(verify_coloring(inst.graph(), &extracted));
    }

    #[test]
    fn support_too_large_reports_an_unseparated_pair() {
        let inst = reduce_3col_to_gt(&triangle()).unwrap();
        let family = coloring_to_tests(&inst, &Coloring::new(vec![0, 1, 2])).unwrap();
        // Contaminate the first index row with a node vertex: support grows
        // to 3 while delta stays 2, and only one index row remains for the
        // three big edges.
        let mut tests: Vec<VertexSet> = family.tests().to_vec();
        tests[0].insert(3);
        let tampered = TestFamily::new(family.n(), tests).unwrap();
        match tests_to_coloring(&inst, &tampered) {
            Err(ReductionError::SupportTooLarge { support: 3, delta: 2, pair: (0, 2) }) => {}
            other => panic!("expected support overflow, got {other:?}"),
        }
    }

    #[test]
    fn improper_extraction_reports_the_pair_edges() {
        let inst = reduce_3col_to_gt(&triangle()).unwrap();
        let tests = vec![
            VertexSet::from_slice(&[1, 2]),
            VertexSet::from_slice(&[0, 2]),
            VertexSet::from_slice(&[4, 5]),
            VertexSet::new(),
        ];
        let family = TestFamily::new(inst.hypergraph().n(), tests).unwrap();
        // Node vertices 4 and 5 share the pattern, so graph vertices 1 and
        // 2 get one color; their shared edge is the third (m = 3).
        assert_eq!(
            tests_to_coloring(&inst, &family),
            Err(ReductionError::NotValidFamily { pair: (7, 8) })
        );
    }

    #[test]
    fn wrong_ground_set_is_rejected() {
        let inst = reduce_3col_to_gt(&triangle()).unwrap();
        let family = TestFamily::new(3, vec![VertexSet::from_slice(&[0])]).unwrap();
        assert_eq!(
            tests_to_coloring(&inst, &family),
            Err(ReductionError::WrongGroundSet { expected: 6, got: 3 })
        );
    }
}
