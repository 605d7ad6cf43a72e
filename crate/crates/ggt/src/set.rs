use std::fmt;

/// A set of vertex ids backed by 64-bit blocks.
///
/// The representation is normalized: the highest block is never zero, so
/// equality and hashing are independent of the ground-set size a value was
/// built against.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct VertexSet {
    blocks: Vec<u64>,
}

impl VertexSet {
    pub fn new() -> Self {
        VertexSet { blocks: Vec::new() }
    }

    pub fn from_slice(vertices: &[usize]) -> Self {
        vertices.iter().copied().collect()
    }

    pub fn insert(&mut self, v: usize) {
        let block = v / 64;
        if block >= self.blocks.len() {
            self.blocks.resize(block + 1, 0);
        }
        self.blocks[block] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        let block = v / 64;
        if block < self.blocks.len() {
            self.blocks[block] &= !(1 << (v % 64));
            self.normalize();
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        let block = v / 64;
        block < self.blocks.len() && self.blocks[block] & (1 << (v % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Largest vertex id in the set, if any.
    pub fn max_vertex(&self) -> Option<usize> {
        let block = self.blocks.last()?;
        Some((self.blocks.len() - 1) * 64 + 63 - block.leading_zeros() as usize)
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .any(|(a, b)| a & b != 0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        !self.intersects(other)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.blocks.len() <= other.blocks.len()
            && self
                .blocks
                .iter()
                .zip(&other.blocks)
                .all(|(a, b)| a & !b == 0)
    }

    /// Number of vertices in `self` but not in `other`.
    pub fn difference_len(&self, other: &VertexSet) -> usize {
        self.blocks
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let b = other.blocks.get(i).copied().unwrap_or(0);
                (a & !b).count_ones() as usize
            })
            .sum()
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        if other.blocks.len() > self.blocks.len() {
            self.blocks.resize(other.blocks.len(), 0);
        }
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a |= b;
        }
    }

    /// Vertex ids in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(i, &block)| {
            let mut bits = block;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let tz = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(i * 64 + tz)
                }
            })
        })
    }

    fn normalize(&mut self) {
        while self.blocks.last() == Some(&0) {
            self.blocks.pop();
        }
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = VertexSet::new();
        for v in iter {
            set.insert(v);
        }
        set
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order on the ascending vertex sequences, so `{0,5} < {1,2}`
/// and a proper prefix sorts before its extension.
impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
