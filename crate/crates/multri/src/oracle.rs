//! Exact covariance class sums by brute force over all pairs of canonical
//! triangle indices.
//!
//! Every edge indicator in the model is independent, so for two indices the
//! expectation of the product of their indicators is the probability product
//! over the union of their required edges. The oracle evaluates
//! `Cov(X_α, X_β)` for every ordered pair of distinct indices and
//! accumulates the sums per (type, type) class. It shares no code with the
//! closed forms in [`crate::moments`], which it exists to check.

use rayon::prelude::*;

use crate::census::{all_triangle_indices, TriangleType};
use crate::error::{Error, Result};
use crate::model::MserParams;
use crate::moments::{BoundValue, CovarianceBounds, KahanSum};
use crate::network::pair_index;

/// Hard cap on the number of index pairs the oracle will evaluate.
pub const ORACLE_PAIR_LIMIT: u128 = 100_000_000;

struct IndexSupport {
    mask: Vec<u64>,
    probability: f64,
    class: u8,
}

fn masks_intersect(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

/// Exact per-class covariance sums under the model, in the same shape as
/// [`crate::moments::covariance_bounds`]. Guarded by [`ORACLE_PAIR_LIMIT`].
pub fn exact_covariance_oracle(params: &MserParams, n: usize) -> Result<CovarianceBounds> {
    let layers = params.layer_count();
    let indices = all_triangle_indices(n, layers);
    let pairs = (indices.len() as u128).pow(2);
    if pairs > ORACLE_PAIR_LIMIT {
        return Err(Error::OracleTooLarge {
            pairs,
            limit: ORACLE_PAIR_LIMIT,
        });
    }

    // Edge-indicator universe: intra edges first, then node-aligned links.
    let node_pairs = n * (n - 1) / 2;
    let intra_bits = layers * node_pairs;
    let down_bits = n * layers * layers.saturating_sub(1) / 2;
    let universe = intra_bits + down_bits;
    let words = universe.div_ceil(64);

    let pair_rank = |u: usize, v: usize| -> usize {
        debug_assert!(u < v);
        u * (2 * n - u - 1) / 2 + (v - u - 1)
    };
    let intra_bit = |layer: usize, u: usize, v: usize| -> usize {
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        layer * node_pairs + pair_rank(u, v)
    };
    let down_bit = |i: usize, j: usize, u: usize| -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        intra_bits + pair_index(layers, i, j) * n + u
    };

    let mut bit_prob = vec![0.0f64; universe];
    for layer in 0..layers {
        for u in 0..n {
            for v in (u + 1)..n {
                bit_prob[intra_bit(layer, u, v)] = params.p[layer];
            }
        }
    }
    for i in 0..layers {
        for j in (i + 1)..layers {
            for u in 0..n {
                bit_prob[down_bit(i, j, u)] = params.q;
            }
        }
    }

    let supports: Vec<IndexSupport> = indices
        .iter()
        .map(|idx| {
            let mut mask = vec![0u64; words];
            let mut probability = 1.0f64;
            let (edges, downs) = idx.required_edges();
            for (layer, u, v) in edges {
                let bit = intra_bit(layer as usize, u as usize, v as usize);
                mask[bit / 64] |= 1 << (bit % 64);
                probability *= bit_prob[bit];
            }
            for (i, j, u) in downs {
                let bit = down_bit(i as usize, j as usize, u as usize);
                mask[bit / 64] |= 1 << (bit % 64);
                probability *= bit_prob[bit];
            }
            let class = match idx.triangle_type() {
                TriangleType::OneD => 1,
                TriangleType::TwoD => 2,
                TriangleType::ThreeD => 3,
            };
            IndexSupport {
                mask,
                probability,
                class,
            }
        })
        .collect();

    // Per-α partial sums, reduced in index order so the result does not
    // depend on thread scheduling.
    let partials: Vec<[f64; 6]> = supports
        .par_iter()
        .enumerate()
        .map(|(ai, alpha)| {
            let mut sums = [KahanSum::default(); 6];
            for (bi, beta) in supports.iter().enumerate() {
                if ai == bi || !masks_intersect(&alpha.mask, &beta.mask) {
                    continue;
                }
                // classes keyed as the closed forms are: same-type sums take
                // every ordered pair, cross-type sums take one orientation
                let slot = match (alpha.class, beta.class) {
                    (1, 1) => 0,
                    (2, 1) => 1,
                    (3, 1) => 2,
                    (2, 2) => 3,
                    (2, 3) => 4,
                    (3, 3) => 5,
                    _ => continue,
                };
                let mut joint = 1.0f64;
                for w in 0..words {
                    let mut bits = alpha.mask[w] | beta.mask[w];
                    while bits != 0 {
                        let b = bits.trailing_zeros() as usize;
                        joint *= bit_prob[w * 64 + b];
                        bits &= bits - 1;
                    }
                }
                sums[slot].add(joint - alpha.probability * beta.probability);
            }
            [
                sums[0].value(),
                sums[1].value(),
                sums[2].value(),
                sums[3].value(),
                sums[4].value(),
                sums[5].value(),
            ]
        })
        .collect();

    let mut totals = [KahanSum::default(); 6];
    for part in &partials {
        for (slot, &v) in part.iter().enumerate() {
            totals[slot].add(v);
        }
    }

    let exact = |slot: usize| BoundValue {
        value: totals[slot].value(),
        exact: true,
    };
    Ok(CovarianceBounds {
        r11: exact(0),
        r21: exact(1),
        r31: exact(2),
        r22: exact(3),
        r23: exact(4),
        r33: exact(5),
    })
}
