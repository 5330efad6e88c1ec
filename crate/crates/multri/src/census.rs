//! Triangle censuses over a multislice network.
//!
//! Triangles are classified by how many distinct layers their intra-layer
//! edges occupy: 1D (one layer), 2D (two layers), 3D (three layers). A 2D
//! triangle needs inter-layer links at both endpoints of its single edge;
//! a 3D triangle needs one at every corner.
//!
//! Two independent engines are provided: [`count_by_trace`] evaluates trace
//! products of the supra-matrices, and [`count_by_enumeration`] sums the
//! presence indicators of canonical triangle indices directly. They must
//! agree on every node-aligned network.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{and3_count, and_count, MultisliceNetwork};
use crate::supra::SupraMatrices;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TriangleType {
    OneD,
    TwoD,
    ThreeD,
}

/// Edge records as `(layer-or-pair, node, node)` style integer triples.
pub type EdgeRecords = Vec<(u32, u32, u32)>;

/// Canonical representative of a triangle-index equivalence class.
///
/// Conventions: 1D has `layers = (i, i, i)` and sorted nodes; 2D has
/// `layers = (i, j, j)` with the single edge joining `nodes.0 < nodes.1`
/// in layer `i` and the apex `nodes.2` carrying the two edges in layer `j`;
/// 3D has pairwise-distinct layers and sorted nodes, with edge
/// `(nodes.0, nodes.1)` in the first layer, `(nodes.1, nodes.2)` in the
/// second, and `(nodes.2, nodes.0)` in the third.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TriangleIndex {
    pub nodes: (u32, u32, u32),
    pub layers: (u32, u32, u32),
}

impl TriangleIndex {
    pub fn triangle_type(&self) -> TriangleType {
        let (i, j, k) = self.layers;
        if i == j && j == k {
            TriangleType::OneD
        } else if j == k {
            TriangleType::TwoD
        } else {
            TriangleType::ThreeD
        }
    }

    /// The intra-layer edges `(layer, u, v)` and node-aligned links
    /// `(i, j, u)` whose joint presence defines this index's indicator.
    pub fn required_edges(&self) -> (EdgeRecords, EdgeRecords) {
        let (a, b, c) = self.nodes;
        let (i, j, k) = self.layers;
        match self.triangle_type() {
            TriangleType::OneD => (vec![(i, a, b), (i, a, c), (i, b, c)], vec![]),
            TriangleType::TwoD => (
                vec![(i, a, b), (j, b, c), (j, c, a)],
                vec![(i, j, a), (i, j, b)],
            ),
            TriangleType::ThreeD => (
                vec![(i, a, b), (j, b, c), (k, c, a)],
                vec![(i, j, b), (j, k, c), (k, i, a)],
            ),
        }
    }

    fn rank(&self) -> u8 {
        match self.triangle_type() {
            TriangleType::OneD => 0,
            TriangleType::TwoD => 1,
            TriangleType::ThreeD => 2,
        }
    }
}

impl PartialOrd for TriangleIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TriangleIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.rank(), self.nodes, self.layers).cmp(&(other.rank(), other.nodes, other.layers))
    }
}

/// Census totals per triangle type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TriangleCounts {
    pub one_d: u64,
    pub two_d: u64,
    pub three_d: u64,
}

impl TriangleCounts {
    pub fn total(&self) -> u64 {
        self.one_d + self.two_d + self.three_d
    }

    pub fn as_tuple(&self) -> (u64, u64, u64) {
        (self.one_d, self.two_d, self.three_d)
    }
}

/// Sizes of the index sets (Γ1, Γ2, Γ3) of all possible 1D/2D/3D triangle
/// indices: `C(n,3)·L`, `6·C(n,3)·C(L,2)`, `6·C(n,3)·C(L,3)`.
pub fn gamma_sizes(n: usize, layers: usize) -> (u128, u128, u128) {
    let triples = binomial(n as u128, 3);
    (
        triples * layers as u128,
        6 * triples * binomial(layers as u128, 2),
        6 * triples * binomial(layers as u128, 3),
    )
}

pub(crate) fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

/// Count triangles from trace products of the supra-matrices.
///
/// Every division by 6 is checked; a remainder means the inter-layer matrix
/// was not node-aligned and the counts would be meaningless.
pub fn count_by_trace(sup: &SupraMatrices) -> Result<TriangleCounts> {
    let a = sup.intra();
    let c = sup.inter();

    let aa = a.multiply(a);
    let ac = a.multiply(c);
    let ca = c.multiply(a);
    let aca = ac.multiply(a);
    let aac = aa.multiply(c);
    let cac = ca.multiply(c);

    let t1 = aa.trace_with(a);
    let t2 = aac.trace_with(&ac) + aca.trace_with(&ac) + aca.trace_with(&ca);
    let t3 = aca.trace_with(&cac);

    let div6 = |trace: u64, product: &'static str| -> Result<u64> {
        if !trace.is_multiple_of(6) {
            Err(Error::TraceNotDivisible { product, trace })
        } else {
            Ok(trace / 6)
        }
    };

    Ok(TriangleCounts {
        one_d: div6(t1, "AAA")?,
        two_d: div6(t2, "AACAC + ACAAC + ACACA")?,
        three_d: div6(t3, "ACACAC")?,
    })
}

/// Count triangles by summing presence indicators of canonical indices.
///
/// Each class is visited through an anchor edge: a 2D index is counted once
/// (single edge and ordered layer pair determine it), 1D and 3D indices are
/// counted once per edge and divided by their exact threefold multiplicity.
pub fn count_by_enumeration(net: &MultisliceNetwork) -> TriangleCounts {
    let layers = net.layer_count();
    let coupling = net.coupling_set();

    let mut one_anchored = 0u64;
    for i in 0..layers {
        let adj = net.adjacency(i);
        for &(u, v) in net.edges(i) {
            one_anchored += and_count(adj.row(u as usize), adj.row(v as usize));
        }
    }
    debug_assert_eq!(one_anchored % 3, 0);

    let mut two = 0u64;
    for i in 0..layers {
        for j in 0..layers {
            if i == j {
                continue;
            }
            let adj_j = net.adjacency(j);
            for &(u, v) in net.edges(i) {
                let (u, v) = (u as usize, v as usize);
                if coupling.contains(i, j, u) && coupling.contains(i, j, v) {
                    two += and_count(adj_j.row(u), adj_j.row(v));
                }
            }
        }
    }

    let mut three_anchored = 0u64;
    if layers >= 3 {
        for i in 0..layers {
            for j in 0..layers {
                if j == i {
                    continue;
                }
                for k in 0..layers {
                    if k == i || k == j {
                        continue;
                    }
                    let adj_j = net.adjacency(j);
                    let adj_k = net.adjacency(k);
                    let jk_row = coupling.pair_row(j, k);
                    for &(u, v) in net.edges(i) {
                        let (u, v) = (u as usize, v as usize);
                        if coupling.contains(i, j, v) && coupling.contains(k, i, u) {
                            three_anchored += and3_count(adj_j.row(v), adj_k.row(u), jk_row);
                        }
                    }
                }
            }
        }
    }
    debug_assert_eq!(three_anchored % 3, 0);

    TriangleCounts {
        one_d: one_anchored / 3,
        two_d: two,
        three_d: three_anchored / 3,
    }
}

/// Every canonical triangle index over `n` nodes and `layers` layers,
/// present or not. Lengths match [`gamma_sizes`].
pub fn all_triangle_indices(n: usize, layers: usize) -> Vec<TriangleIndex> {
    let mut out = Vec::new();
    for a in 0..n as u32 {
        for b in (a + 1)..n as u32 {
            for c in (b + 1)..n as u32 {
                for i in 0..layers as u32 {
                    out.push(TriangleIndex {
                        nodes: (a, b, c),
                        layers: (i, i, i),
                    });
                }
                for i in 0..layers as u32 {
                    for j in 0..layers as u32 {
                        if i == j {
                            continue;
                        }
                        for (x, y, apex) in [(a, b, c), (a, c, b), (b, c, a)] {
                            out.push(TriangleIndex {
                                nodes: (x, y, apex),
                                layers: (i, j, j),
                            });
                        }
                    }
                }
                for i in 0..layers as u32 {
                    for j in 0..layers as u32 {
                        if j == i {
                            continue;
                        }
                        for k in 0..layers as u32 {
                            if k == i || k == j {
                                continue;
                            }
                            out.push(TriangleIndex {
                                nodes: (a, b, c),
                                layers: (i, j, k),
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Canonical triangle indices whose presence indicator is 1, sorted by
/// (type, nodes, layers). Iterates node triples and tests every layer
/// assignment, which is the literal definition of the index sets.
pub fn enumerate_present(
    net: &MultisliceNetwork,
    type_filter: Option<TriangleType>,
) -> Vec<TriangleIndex> {
    let n = net.node_count();
    let layers = net.layer_count();
    let want = |t: TriangleType| type_filter.is_none() || type_filter == Some(t);
    let mut out = Vec::new();

    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                if want(TriangleType::OneD) {
                    for i in 0..layers {
                        if net.has_edge(i, a, b) && net.has_edge(i, a, c) && net.has_edge(i, b, c) {
                            out.push(TriangleIndex {
                                nodes: (a as u32, b as u32, c as u32),
                                layers: (i as u32, i as u32, i as u32),
                            });
                        }
                    }
                }
                if want(TriangleType::TwoD) && layers >= 2 {
                    // (single-edge endpoints, apex) per the canonical form
                    let splits = [(a, b, c), (a, c, b), (b, c, a)];
                    for i in 0..layers {
                        for j in 0..layers {
                            if i == j {
                                continue;
                            }
                            for &(x, y, apex) in &splits {
                                if net.has_edge(i, x, y)
                                    && net.has_edge(j, y, apex)
                                    && net.has_edge(j, apex, x)
                                    && net.is_coupled(i, j, x)
                                    && net.is_coupled(i, j, y)
                                {
                                    out.push(TriangleIndex {
                                        nodes: (x as u32, y as u32, apex as u32),
                                        layers: (i as u32, j as u32, j as u32),
                                    });
                                }
                            }
                        }
                    }
                }
                if want(TriangleType::ThreeD) && layers >= 3 {
                    for i in 0..layers {
                        for j in 0..layers {
                            if j == i {
                                continue;
                            }
                            for k in 0..layers {
                                if k == i || k == j {
                                    continue;
                                }
                                if net.has_edge(i, a, b)
                                    && net.has_edge(j, b, c)
                                    && net.has_edge(k, c, a)
                                    && net.is_coupled(i, j, b)
                                    && net.is_coupled(j, k, c)
                                    && net.is_coupled(k, i, a)
                                {
                                    out.push(TriangleIndex {
                                        nodes: (a as u32, b as u32, c as u32),
                                        layers: (i as u32, j as u32, k as u32),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    out.sort_unstable();
    out
}
