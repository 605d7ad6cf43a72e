//! Named instance families and seeded random instances.
//!
//! Each family lives behind the [`InstanceFamily`] trait and is registered
//! by name, so callers (the CLI in particular) can select one at runtime.
//! The free functions are the typed entry points the trait impls delegate to.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::hypergraph::Hypergraph;
use crate::set::VertexSet;

/// Default guard against accidental combinatorial explosions.
pub const DEFAULT_EDGE_CAP: usize = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("instance would have {edges} edges, over the limit of {limit}")]
    TooLarge { edges: u128, limit: u128 },
    #[error("invalid parameters: {reason}")]
    InvalidParams { reason: String },
    #[error("unknown instance family `{name}`")]
    UnknownFamily { name: String },
    #[error("family `{family}` requires parameter `{param}`")]
    MissingParam { family: &'static str, param: &'static str },
}

/// `C(n, d)`, saturating at `u128::MAX` (only compared against caps, so
/// saturation never changes a cap decision).
pub fn binomial(n: usize, d: usize) -> u128 {
    if d > n {
        return 0;
    }
    let d = d.min(n - d);
    let mut result: u128 = 1;
    for i in 0..d {
        result = result.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    result
}

fn check_cap(edges: u128, cap: usize) -> Result<(), GenError> {
    if edges > cap as u128 {
        Err(GenError::TooLarge { edges, limit: cap as u128 })
    } else {
        Ok(())
    }
}

/// All `d`-subsets of `{0..n-1}` in lexicographic order of their sorted
/// vertex lists.
pub fn traditional(n: usize, d: usize, cap: usize) -> Result<Hypergraph, GenError> {
    if d < 1 || d > n {
        return Err(GenError::InvalidParams { reason: format!("need 1 <= d <= n, got n={n}, d={d}") });
    }
    check_cap(binomial(n, d), cap)?;
    let edges: Vec<VertexSet> = (0..n).combinations(d).map(VertexSet::from_iter).collect();
    Ok(Hypergraph::new(n, edges).expect("combinations are distinct and non-empty"))
}

/// A traditional instance on the first `n_prime` vertices, embedded in a
/// ground set of `n` vertices; vertices `n_prime..n` touch no edge.
pub fn embedded_traditional(
    n: usize,
    n_prime: usize,
    d: usize,
    cap: usize,
) -> Result<Hypergraph, GenError> {
    if d < 1 || d > n_prime || n_prime > n {
        return Err(GenError::InvalidParams {
            reason: format!("need 1 <= d <= n' <= n, got n={n}, n'={n_prime}, d={d}"),
        });
    }
    check_cap(binomial(n_prime, d), cap)?;
    let edges: Vec<VertexSet> = (0..n_prime).combinations(d).map(VertexSet::from_iter).collect();
    Ok(Hypergraph::new(n, edges).expect("combinations are distinct and non-empty"))
}

/// `d+1` vertices and the `d+1` edges of size `d`; edge `i` omits exactly
/// vertex `i`. The worst case for adaptive identification: any test with two
/// or more vertices fires on every edge.
pub fn adaptive_lb_instance(d: usize) -> Result<Hypergraph, GenError> {
    if d < 1 {
        return Err(GenError::InvalidParams { reason: format!("need d >= 1, got d={d}") });
    }
    let n = d + 1;
    let edges: Vec<VertexSet> = (0..n)
        .map(|omit| (0..n).filter(|&v| v != omit).collect())
        .collect();
    Ok(Hypergraph::new(n, edges).expect("complements of singletons are distinct"))
}

/// `m` distinct `d`-subsets of `{0..n-1}`, uniform over all `d`-subsets, in
/// first-acceptance order. Deterministic given the seed: each draw takes the
/// first `d` slots of a partial Fisher-Yates shuffle, and duplicate sets are
/// rejected and redrawn.
pub fn random_hypergraph(
    n: usize,
    m: usize,
    d: usize,
    seed: u64,
    cap: usize,
) -> Result<Hypergraph, GenError> {
    if d < 1 || d > n || m < 1 {
        return Err(GenError::InvalidParams { reason: format!("need 1 <= d <= n and m >= 1, got n={n}, m={m}, d={d}") });
    }
    let universe = binomial(n, d);
    if (m as u128) > universe {
        return Err(GenError::TooLarge { edges: m as u128, limit: universe });
    }
    check_cap(m as u128, cap)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scratch: Vec<usize> = (0..n).collect();
    let mut edges: Vec<VertexSet> = Vec::with_capacity(m);
    while edges.len() < m {
        for i in 0..d {
            let j = rng.gen_range(i..n);
            scratch.swap(i, j);
        }
        let edge: VertexSet = scratch[..d].iter().copied().collect();
        if !edges.contains(&edge) {
            edges.push(edge);
        }
    }
    Ok(Hypergraph::new(n, edges).expect("edges are distinct by construction"))
}

/// Parameter bag for registry-driven generation. Families read the fields
/// they need and reject missing ones.
#[derive(Clone, Debug)]
pub struct GenParams {
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub n_prime: Option<usize>,
    pub m: Option<usize>,
    pub seed: u64,
    pub max_edges: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { n: None, d: None, n_prime: None, m: None, seed: 0, max_edges: DEFAULT_EDGE_CAP }
    }
}

impl GenParams {
    fn require(opt: Option<usize>, family: &'static str, param: &'static str) -> Result<usize, GenError> {
        opt.ok_or(GenError::MissingParam { family, param })
    }
}

/// An instance family selectable by name.
pub trait InstanceFamily: Sync {
    fn name(&self) -> &'static str;
    /// Parameters the family reads from [`GenParams`].
    fn usage(&self) -> &'static str;
    fn generate(&self, params: &GenParams) -> Result<Hypergraph, GenError>;
}

struct Traditional;

impl InstanceFamily for Traditional {
    fn name(&self) -> &'static str {
        "traditional"
    }
    fn usage(&self) -> &'static str {
        "--n <vertices> --d <edge size>: all d-subsets of the ground set"
    }
    fn generate(&self, p: &GenParams) -> Result<Hypergraph, GenError> {
        let n = GenParams::require(p.n, "traditional", "n")?;
        let d = GenParams::require(p.d, "traditional", "d")?;
        traditional(n, d, p.max_edges)
    }
}

struct Embedded;

impl InstanceFamily for Embedded {
    fn name(&self) -> &'static str {
        "embedded"
    }
    fn usage(&self) -> &'static str {
        "--n <vertices> --n-prime <active vertices> --d <edge size>: all d-subsets of the first n' vertices"
    }
    fn generate(&self, p: &GenParams) -> Result<Hypergraph, GenError> {
        let n = GenParams::require(p.n, "embedded", "n")?;
        let n_prime = GenParams::require(p.n_prime, "embedded", "n-prime")?;
        let d = GenParams::require(p.d, "embedded", "d")?;
        embedded_traditional(n, n_prime, d, p.max_edges)
    }
}

struct AdaptiveLb;

impl InstanceFamily for AdaptiveLb {
    fn name(&self) -> &'static str {
        "adaptive-lb"
    }
    fn usage(&self) -> &'static str {
        "--d <edge size>: the d+1 edges of size d on d+1 vertices"
    }
    fn generate(&self, p: &GenParams) -> Result<Hypergraph, GenError> {
        let d = GenParams::require(p.d, "adaptive-lb", "d")?;
        adaptive_lb_instance(d)
    }
}

struct Random;

impl InstanceFamily for Random {
    fn name(&self) -> &'static str {
        "random"
    }
    fn usage(&self) -> &'static str {
        "--n <vertices> --m <edges> --d <edge size> (seeded): m distinct uniform d-subsets"
    }
    fn generate(&self, p: &GenParams) -> Result<Hypergraph, GenError> {
        let n = GenParams::require(p.n, "random", "n")?;
        let m = GenParams::require(p.m, "random", "m")?;
        let d = GenParams::require(p.d, "random", "d")?;
        random_hypergraph(n, m, d, p.seed, p.max_edges)
    }
}

/// Every registered family, in a fixed order.
pub fn families() -> &'static [&'static dyn InstanceFamily] {
    &[&Traditional, &Embedded, &AdaptiveLb, &Random]
}

/// Look up a family by its registered name.
pub fn family(name: &str) -> Result<&'static dyn InstanceFamily, GenError> {
    families()
        .iter()
        .copied()
        .find(|f| f.name() == name)
        .ok_or_else(|| GenError::UnknownFamily { name: name.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(5, 5), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(50, 25), 126_410_606_437_752);
    }

    #[test]
    fn traditional_examples() {
        let h = traditional(4, 2, DEFAULT_EDGE_CAP).unwrap();
        assert_eq!(h.edge_count(), 6);
        assert_eq!(h.edges()[0], VertexSet::from_slice(&[0, 1]));
        assert_eq!(h.edges()[5], VertexSet::from_slice(&[2, 3]));

        let h = traditional(3, 3, DEFAULT_EDGE_CAP).unwrap();
        assert_eq!(h.edge_count(), 1);
        assert_eq!(h.edges()[0], VertexSet::from_slice(&[0, 1, 2]));

        let h = traditional(5, 1, DEFAULT_EDGE_CAP).unwrap();
        assert_eq!(h.edge_count(), 5);
        assert!(h.edges().iter().all(|e| e.len() == 1));
        assert_eq!(h.max_edge_size(), 1);
    }

    #[test]
    fn traditional_is_lexicographic() {
        let h = traditional(4, 2, DEFAULT_EDGE_CAP).unwrap();
        let listed: Vec<Vec<usize>> = h.edges().iter().map(|e| e.iter().collect()).collect();
        assert_eq!(
            listed,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
    }

    #[test]
    fn traditional_cap() {
        assert_eq!(
            traditional(30, 15, 1000),
            Err(GenError::TooLarge { edges: 155_117_520, limit: 1000 })
        );
    }

    #[test]
    fn embedded_examples() {
        let h = embedded_traditional(10, 5, 2, DEFAULT_EDGE_CAP).unwrap();
        assert_eq!(h.n(), 10);
        assert_eq!(h.edge_count(), 10);
        for v in 5..10 {
            assert!(h.edges().iter().all(|e| !e.contains(v)));
        }

        let full = embedded_traditional(5, 5, 2, DEFAULT_EDGE_CAP).unwrap();
        assert_eq!(full, traditional(5, 2, DEFAULT_EDGE_CAP).unwrap());

        let single = embedded_traditional(4, 2, 2, DEFAULT_EDGE_CAP).unwrap();
        assert_eq!(single.edge_count(), 1);
        assert_eq!(single.edges()[0], VertexSet::from_slice(&[0, 1]));
    }

    #[test]
    fn adaptive_lb_examples() {
        let h = adaptive_lb_instance(1).unwrap();
        assert_eq!(h.n(), 2);
        assert_eq!(h.edges(), &[VertexSet::from_slice(&[1]), VertexSet::from_slice(&[0])]);

        let h = adaptive_lb_instance(3).unwrap();
        assert_eq!(h.n(), 4);
        assert_eq!(h.edge_count(), 4);
        for (omit, edge) in h.edges().iter().enumerate() {
            assert_eq!(edge.len(), 3);
            assert!(!edge.contains(omit));
        }

        let h = adaptive_lb_instance(2).unwrap();
        let listed: Vec<Vec<usize>> = h.edges().iter().map(|e| e.iter().collect()).collect();
        assert_eq!(listed, vec![vec![1, 2], vec![0, 2], vec![0, 1]]);
    }

    #[test]
    fn random_is_deterministic() {
        let a = random_hypergraph(6, 3, 2, 1, DEFAULT_EDGE_CAP).unwrap();
        let b = random_hypergraph(6, 3, 2, 1, DEFAULT_EDGE_CAP).unwrap();
        assert_eq!(a, b);
        let c = random_hypergraph(6, 3, 2, 2, DEFAULT_EDGE_CAP).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn random_exhausts_the_universe() {
        let h = random_hypergraph(4, 6, 2, 9, DEFAULT_EDGE_CAP).unwrap();
        assert_eq!(h.edge_count(), 6);
        let mut listed: Vec<Vec<usize>> = h.edges().iter().map(|e| e.iter().collect()).collect();
        listed.sort();
        assert_eq!(
            listed,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
    }

    #[test]
    fn random_edges_are_distinct_and_sized() {
        let h = random_hypergraph(5, 3, 2, 7, DEFAULT_EDGE_CAP).unwrap();
        assert_eq!(h.edge_count(), 3);
        assert!(h.edges().iter().all(|e| e.len() == 2));
        assert!(
            random_hypergraph(4, 7, 2, 0, DEFAULT_EDGE_CAP).is_err(),
            "m above C(n,d) must be rejected"
        );
    }

    #[test]
    fn registry_finds_families() {
        assert_eq!(families().len(), 4);
        let f = family("traditional").unwrap();
        let params = GenParams { n: Some(4), d: Some(2), ..GenParams::default() };
        assert_eq!(f.generate(&params).unwrap().edge_count(), 6);

        assert!(matches!(family("nope"), Err(GenError::UnknownFamily { .. })));
        let missing = family("random").unwrap().generate(&GenParams::default());
        assert_eq!(missing, Err(GenError::MissingParam { family: "random", param: "n" }));
    }
}
