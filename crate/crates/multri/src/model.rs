//! The multislice Erdős–Rényi model: independent intra-layer edges with a
//! per-layer probability, independent node-aligned inter-layer links with a
//! shared probability.

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use serde::{Deserialize, Serialize};

use crate::census::{binomial, TriangleIndex, TriangleType};
use crate::error::{Error, Result};
use crate::network::{build_network, Coupling, MultisliceNetwork};

/// Model parameters: one intra-layer edge probability per layer and a single
/// inter-layer link probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MserParams {
    pub p: Vec<f64>,
    pub q: f64,
}

impl MserParams {
    pub fn new(p: Vec<f64>, q: f64) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::EmptyShape {
                nodes: 1,
                layers: 0,
            });
        }
        for &pi in &p {
            if !(0.0..=1.0).contains(&pi) {
                return Err(Error::InvalidProbability {
                    what: "intra-layer edge",
                    value: pi,
                });
            }
        }
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidProbability {
                what: "inter-layer link",
                value: q,
            });
        }
        Ok(MserParams { p, q })
    }

    /// Equal edge probability in every layer.
    pub fn uniform(p: f64, layers: usize, q: f64) -> Result<Self> {
        Self::new(vec![p; layers], q)
    }

    pub fn layer_count(&self) -> usize {
        self.p.len()
    }
}

/// Master seed for reproducible sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngSeed(pub u64);

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive an independent substream seed from a master seed and a tag path.
/// Replicate and layer streams stay reproducible regardless of scheduling.
pub(crate) fn substream(master: u64, tags: &[u64]) -> u64 {
    let mut state = splitmix(master);
    for &tag in tags {
        state = splitmix(state ^ tag.wrapping_mul(GOLDEN));
    }
    state
}

pub(crate) fn substream_rng(master: u64, tags: &[u64]) -> Pcg64 {
    Pcg64::seed_from_u64(substream(master, tags))
}

const COUPLING_STREAM: u64 = u64::MAX;

/// Sample one network: each of the `C(n,2)` node pairs in layer `i` is an
/// edge with probability `p[i]`; each of the `C(L,2)·n` node-aligned links
/// is present with probability `q`. `q = 1` and `q = 0` are deterministic.
pub fn sample(params: &MserParams, n: usize, seed: RngSeed) -> MultisliceNetwork {
    let layers = params.layer_count();
    let mut edges = Vec::new();
    for (layer, &p) in params.p.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let mut rng = substream_rng(seed.0, &[layer as u64]);
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random::<f64>() < p {
                    edges.push((layer, u, v));
                }
            }
        }
    }

    let coupling = if params.q >= 1.0 {
        Coupling::Full
    } else if params.q == 0.0 {
        Coupling::Links(Vec::new())
    } else {
        let mut rng = substream_rng(seed.0, &[COUPLING_STREAM]);
        let mut links = Vec::new();
        for i in 0..layers {
            for j in (i + 1)..layers {
                for u in 0..n {
                    if rng.random::<f64>() < params.q {
                        links.push((i, j, u));
                    }
                }
            }
        }
        Coupling::Links(links)
    };

    build_network(n, layers, &edges, coupling)
        .expect("sampled records are in range by construction")
}

/// Maximum-likelihood edge probabilities.
///
/// Per layer: `|E^i| / C(n,2)`. Pooled: one shared estimate
/// `Σ|E^i| / (L·C(n,2))`. The inter-layer probability is not estimated;
/// it is fixed at 1 by convention.
pub fn fit_mle(net: &MultisliceNetwork, pooled: bool) -> Result<MserParams> {
    let n = net.node_count();
    if n < 2 {
        return Err(Error::UndefinedDensity { nodes: n });
    }
    let pairs = binomial(n as u128, 2) as f64;
    let layers = net.layer_count();
    let p = if pooled {
        let total: usize = net.total_edge_count();
        vec![total as f64 / (layers as f64 * pairs); layers]
    } else {
        (0..layers)
            .map(|l| net.edge_count(l) as f64 / pairs)
            .collect()
    };
    MserParams::new(p, 1.0)
}

/// Presence probability of one canonical triangle index under the model:
/// `p_i^3` (1D), `p_i p_j^2 q^2` (2D), `p_i p_j p_k q^3` (3D).
pub fn index_probability(params: &MserParams, idx: &TriangleIndex) -> f64 {
    let (i, j, k) = idx.layers;
    let p = &params.p;
    let q = params.q;
    match idx.triangle_type() {
        TriangleType::OneD => p[i as usize].powi(3),
        TriangleType::TwoD => p[i as usize] * p[j as usize].powi(2) * q * q,
        TriangleType::ThreeD => p[i as usize] * p[j as usize] * p[k as usize] * q.powi(3),
    }
}
