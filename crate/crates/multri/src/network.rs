//! Multislice networks: `L` simple graphs over a shared set of `n` basis
//! nodes, plus node-aligned inter-layer links ("down edges") between copies
//! of the same node in different layers.

use crate::error::{Error, Result};

/// Row-indexed adjacency bitset for one layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitMatrix {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    #[inline]
    pub fn set(&mut self, u: usize, v: usize) {
        let base = u * self.words;
        self.bits[base + v / 64] |= 1u64 << (v % 64);
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> bool {
        let base = u * self.words;
        self.bits[base + v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn row(&self, u: usize) -> &[u64] {
        &self.bits[u * self.words..(u + 1) * self.words]
    }
}

/// Popcount of the AND of two bit rows.
#[inline]
pub(crate) fn and_count(a: &[u64], b: &[u64]) -> u64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x & y).count_ones() as u64)
        .sum()
}

/// Popcount of the AND of three bit rows.
#[inline]
pub(crate) fn and3_count(a: &[u64], b: &[u64], c: &[u64]) -> u64 {
    a.iter()
        .zip(b)
        .zip(c)
        .map(|((x, y), z)| (x & y & z).count_ones() as u64)
        .sum()
}

/// Node-aligned inter-layer links, stored per unordered layer pair as a
/// bitset over basis nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct CouplingSet {
    layers: usize,
    words: usize,
    /// One bit row per unordered pair (i < j), indexed by `pair_index`.
    rows: Vec<u64>,
    count: usize,
}

#[inline]
pub(crate) fn pair_index(layers: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < layers);
    i * (2 * layers - i - 1) / 2 + (j - i - 1)
}

impl CouplingSet {
    fn new(n: usize, layers: usize) -> Self {
        let words = n.div_ceil(64);
        let pairs = layers * (layers.saturating_sub(1)) / 2;
        CouplingSet {
            layers,
            words,
            rows: vec![0; pairs * words],
            count: 0,
        }
    }

    fn insert(&mut self, i: usize, j: usize, u: usize) {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let base = pair_index(self.layers, i, j) * self.words;
        let word = &mut self.rows[base + u / 64];
        let mask = 1u64 << (u % 64);
        if *word & mask == 0 {
            *word |= mask;
            self.count += 1;
        }
    }

    #[inline]
    pub fn contains(&self, i: usize, j: usize, u: usize) -> bool {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let base = pair_index(self.layers, i, j) * self.words;
        self.rows[base + u / 64] >> (u % 64) & 1 == 1
    }

    /// Bit row of nodes coupled between layers `i` and `j`.
    #[inline]
    pub fn pair_row(&self, i: usize, j: usize) -> &[u64] {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let base = pair_index(self.layers, i, j) * self.words;
        &self.rows[base..base + self.words]
    }

    pub fn len(&self) -> usize {
        self.count
    }
}

/// Inter-layer link specification accepted by [`build_network`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coupling {
    /// Every node coupled between every pair of layers (the q = 1 convention).
    Full,
    /// Explicit (layer i, layer j, node u) links.
    Links(Vec<(usize, usize, usize)>),
}

/// An immutable multislice network.
///
/// Intra-layer edge lists are deduplicated and stored sorted with `u < v`;
/// inter-layer links are restricted to node-aligned pairs `u^i ~ u^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultisliceNetwork {
    n: usize,
    layers: usize,
    intra: Vec<Vec<(u32, u32)>>,
    adj: Vec<BitMatrix>,
    coupling: CouplingSet,
}

impl MultisliceNetwork {
    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn layer_count(&self) -> usize {
        self.layers
    }

    /// Sorted `(u, v)` pairs with `u < v` for one layer.
    pub fn edges(&self, layer: usize) -> &[(u32, u32)] {
        &self.intra[layer]
    }

    pub fn edge_count(&self, layer: usize) -> usize {
        self.intra[layer].len()
    }

    pub fn total_edge_count(&self) -> usize {
        self.intra.iter().map(Vec::len).sum()
    }

    pub fn has_edge(&self, layer: usize, u: usize, v: usize) -> bool {
        self.adj[layer].get(u, v)
    }

    pub fn is_coupled(&self, i: usize, j: usize, u: usize) -> bool {
        i != j && self.coupling.contains(i, j, u)
    }

    /// Number of (unordered layer pair, node) inter-layer links.
    pub fn coupling_count(&self) -> usize {
        self.coupling.len()
    }

    /// All couplings as sorted (i, j, u) triples with i < j.
    pub fn couplings(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::with_capacity(self.coupling.len());
        for i in 0..self.layers {
            for j in (i + 1)..self.layers {
                for u in 0..self.n {
                    if self.coupling.contains(i, j, u) {
                        out.push((i, j, u));
                    }
                }
            }
        }
        out
    }

    pub fn is_fully_coupled(&self) -> bool {
        self.coupling.len() == self.n * self.layers * (self.layers - 1) / 2
    }

    pub(crate) fn adjacency(&self, layer: usize) -> &BitMatrix {
        &self.adj[layer]
    }

    pub(crate) fn coupling_set(&self) -> &CouplingSet {
        &self.coupling
    }
}

/// Validate and assemble a multislice network from raw records.
///
/// Duplicate intra edges collapse; every index is range-checked and the
/// offending record is named in the error.
pub fn build_network(
    n: usize,
    layers: usize,
    intra_edges: &[(usize, usize, usize)],
    coupling: Coupling,
) -> Result<MultisliceNetwork> {
    if n == 0 || layers == 0 {
        return Err(Error::EmptyShape { nodes: n, layers });
    }
    let mut intra: Vec<Vec<(u32, u32)>> = vec![Vec::new(); layers];
    let mut adj: Vec<BitMatrix> = (0..layers).map(|_| BitMatrix::new(n)).collect();
    for &(layer, u, v) in intra_edges {
        if layer >= layers {
            return Err(Error::LayerOutOfRange { layer, layers });
        }
        if u >= n || v >= n {
            return Err(Error::NodeOutOfRange {
                node: u.max(v),
                nodes: n,
                record: format!("edge ({layer}, {u}, {v})"),
            });
        }
        if u == v {
            return Err(Error::SelfLoop { layer, u });
        }
        if !adj[layer].get(u, v) {
            adj[layer].set(u, v);
            adj[layer].set(v, u);
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            intra[layer].push((a as u32, b as u32));
        }
    }
    for edges in &mut intra {
        edges.sort_unstable();
    }

    let mut cset = CouplingSet::new(n, layers);
    match coupling {
        Coupling::Full => {
            for i in 0..layers {
                for j in (i + 1)..layers {
                    for u in 0..n {
                        cset.insert(i, j, u);
                    }
                }
            }
        }
        Coupling::Links(links) => {
            for (i, j, u) in links {
                if i >= layers || j >= layers {
                    return Err(Error::LayerOutOfRange {
                        layer: i.max(j),
                        layers,
                    });
                }
                if i == j {
                    return Err(Error::SelfCoupling { i, j, u });
                }
                if u >= n {
                    return Err(Error::NodeOutOfRange {
                        node: u,
                        nodes: n,
                        record: format!("coupling ({i}, {j}, {u})"),
                    });
                }
                cset.insert(i, j, u);
            }
        }
    }

    Ok(MultisliceNetwork {
        n,
        layers,
        intra,
        adj,
        coupling: cset,
    })
}
