//! Closed-form first moments of the triangle counts, covariance bounds over
//! index pairs, and the resulting total-variation bounds for the
//! multivariate Poisson approximation of `(W1, W2, W3)`.
//!
//! Tuple sums over ordered distinct layer tuples are spelled out term by
//! term, exactly mirroring the closed forms, with compensated summation.

use serde::{Deserialize, Serialize};

use crate::census::binomial;
use crate::model::MserParams;

/// Compensated (Kahan) accumulator for sums of many small positive terms.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn add(&mut self, value: f64) {
        let y = value - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Visit every ordered tuple of `m` distinct layer indices.
fn for_tuples(layers: usize, m: usize, mut f: impl FnMut(&[usize])) {
    fn rec(
        layers: usize,
        m: usize,
        scratch: &mut Vec<usize>,
        used: &mut [bool],
        f: &mut impl FnMut(&[usize]),
    ) {
        if scratch.len() == m {
            f(scratch);
            return;
        }
        for l in 0..layers {
            if !used[l] {
                used[l] = true;
                scratch.push(l);
                rec(layers, m, scratch, used, f);
                scratch.pop();
                used[l] = false;
            }
        }
    }
    let mut scratch = Vec::with_capacity(m);
    let mut used = vec![false; layers];
    rec(layers, m, &mut scratch, &mut used, &mut f);
}

fn tuple_sum(layers: usize, m: usize, f: impl Fn(&[usize]) -> f64) -> f64 {
    let mut acc = KahanSum::default();
    for_tuples(layers, m, |t| acc.add(f(t)));
    acc.value()
}

/// Expected 1D/2D/3D triangle counts under the model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub lambda_total: f64,
}

/// Mean triangle counts:
/// `λ1 = C(n,3)·Σ_i p_i³`,
/// `λ2 = 3·C(n,3)·Σ_{i≠j} p_i p_j² q²`,
/// `λ3 = C(n,3)·Σ_{(i,j,k) distinct} p_i p_j p_k q³` (ordered triples).
pub fn expected_counts(params: &MserParams, n: usize) -> MomentSummary {
    let layers = params.layer_count();
    let p = &params.p;
    let q = params.q;
    let triples = binomial(n as u128, 3) as f64;

    let lambda1 = triples * tuple_sum(layers, 1, |t| p[t[0]].powi(3));
    let lambda2 = 3.0 * triples * tuple_sum(layers, 2, |t| p[t[0]] * p[t[1]].powi(2) * q * q);
    let lambda3 = triples * tuple_sum(layers, 3, |t| p[t[0]] * p[t[1]] * p[t[2]] * q.powi(3));

    MomentSummary {
        lambda1,
        lambda2,
        lambda3,
        lambda_total: lambda1 + lambda2 + lambda3,
    }
}

/// A covariance-class sum: either an exact closed form or an upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub value: f64,
    pub exact: bool,
}

/// The six covariance-class sums `R_{i,j}` over pairs of distinct triangle
/// indices, grouped by the types of the two indices. `r11` and `r21` are
/// exact; the other four are upper bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovarianceBounds {
    pub r11: BoundValue,
    pub r21: BoundValue,
    pub r31: BoundValue,
    pub r22: BoundValue,
    pub r23: BoundValue,
    pub r33: BoundValue,
}

impl CovarianceBounds {
    /// Weighted total as it enters the total-variation bound:
    /// same-type sums once, cross-type sums twice.
    pub fn weighted_total(&self) -> f64 {
        self.r11.value
            + self.r22.value
            + self.r33.value
            + 2.0 * (self.r21.value + self.r31.value + self.r23.value)
    }

    pub fn values(&self) -> [f64; 6] {
        [
            self.r11.value,
            self.r21.value,
            self.r31.value,
            self.r22.value,
            self.r23.value,
            self.r33.value,
        ]
    }
}

/// Evaluate the closed-form covariance-class sums.
pub fn covariance_bounds(params: &MserParams, n: usize) -> CovarianceBounds {
    let layers = params.layer_count();
    let p = &params.p;
    let q = params.q;
    let nf = n as f64;
    let triples = binomial(n as u128, 3) as f64;
    let n3 = nf.powi(3);
    let n4 = nf.powi(4);
    let n5 = nf.powi(5);

    // Exact: pairs of 1D indices sharing one edge in the same layer.
    let r11 =
        triples * 3.0 * (nf - 3.0) * tuple_sum(layers, 1, |t| p[t[0]].powi(5) * (1.0 - p[t[0]]));

    // Exact: 2D against 1D, split by which edge is shared.
    let r21 = tuple_sum(layers, 2, |t| {
        let (pi, pj) = (p[t[0]], p[t[1]]);
        3.0 * triples
            * q
            * q
            * ((nf - 2.0) * pi.powi(3) * pj.powi(2) * (1.0 - pi)
                + 2.0 * (nf - 3.0) * pi * pj.powi(4) * (1.0 - pj)
                + pi * pj.powi(3) * (1.0 - pj * pj))
    });

    let r31 = 0.5
        * n4
        * tuple_sum(layers, 3, |t| {
            p[t[0]].powi(3) * p[t[1]] * p[t[2]] * q.powi(3)
        });

    let r22 = {
        let mut acc = KahanSum::default();
        acc.add(
            (1.0 / 6.0)
                * n3
                * tuple_sum(layers, 2, |t| {
                    let (pi, pj) = (p[t[0]], p[t[1]]);
                    4.0 * pi.powi(2) * pj.powi(2) * q.powi(3)
                        + pi.powi(3) * pj.powi(3) * q.powi(2) * (1.0 - q * q)
                }),
        );
        acc.add(
            (4.0 / 3.0)
                * n3
                * tuple_sum(layers, 3, |t| {
                    p[t[0]] * p[t[1]].powi(2) * p[t[2]] * q.powi(4)
                }),
        );
        acc.add(
            (1.0 / 6.0)
                * n4
                * tuple_sum(layers, 2, |t| {
                    let (pi, pj) = (p[t[0]], p[t[1]]);
                    8.0 * pi.powi(3) * pj.powi(2) * q.powi(3)
                        + 2.0 * pi.powi(3) * pj.powi(3) * q.powi(3) * (1.0 - q)
                        + pi * pj.powi(4) * q.powi(2)
                        + 4.0 * pi.powi(2) * pj.powi(4) * q.powi(3) * (1.0 - q)
                        + pi.powi(3) * pj.powi(3) * q.powi(2) * (1.0 - q * q)
                }),
        );
        acc.add(
            (1.0 / 6.0)
                * n4
                * tuple_sum(layers, 3, |t| {
                    let (pi, pj, pk) = (p[t[0]], p[t[1]], p[t[2]]);
                    5.0 * pi * pj.powi(2) * pk.powi(2) * q.powi(4)
                        + 4.0 * pi * pj.powi(3) * pk * q.powi(4)
                }),
        );
        acc.add(
            (2.0 / 3.0)
                * n3
                * tuple_sum(layers, 2, |t| {
                    let (pi, pj) = (p[t[0]], p[t[1]]);
                    pi.powi(2) * pj.powi(4) * q.powi(3) * (1.0 - q)
                        + pi.powi(3) * pj.powi(3) * q.powi(3) * (1.0 - q)
                }),
        );
        acc.value()
    };

    let r23 = {
        let mut acc = KahanSum::default();
        acc.add(
            3.0 * n3
                * tuple_sum(layers, 3, |t| {
                    let (pi, pj, pk) = (p[t[0]], p[t[1]], p[t[2]]);
                    2.0 * pi * pj.powi(2) * pk * q.powi(4)
                        + pi.powi(2) * pj.powi(3) * pk * q.powi(4) * (1.0 - q)
                }),
        );
        acc.add(
            1.5 * n3
                * tuple_sum(layers, 4, |t| {
                    p[t[0]] * p[t[1]] * p[t[2]] * p[t[3]].powi(2) * q.powi(5)
                }),
        );
        acc.add(
            n4 * tuple_sum(layers, 3, |t| {
                let (pi, pj, pk) = (p[t[0]], p[t[1]], p[t[2]]);
                2.0 * pi.powi(2) * pj.powi(2) * pk * q.powi(5)
                    + 2.0 * pi.powi(2) * pj.powi(3) * pk * q.powi(4) * (1.0 - q)
                    + pi.powi(3) * pj * pk * q.powi(4)
            }),
        );
        acc.add(
            1.5 * n4
                * tuple_sum(layers, 4, |t| {
                    p[t[0]] * p[t[1]] * p[t[2]].powi(2) * p[t[3]] * q.powi(5)
                }),
        );
        acc.add(
            0.25 * n5
                * tuple_sum(layers, 3, |t| {
                    4.0 * p[t[0]] * p[t[1]].powi(2) * p[t[2]].powi(3) * q.powi(4) * (1.0 - q)
                }),
        );
        acc.value()
    };

    let r33 = {
        let mut acc = KahanSum::default();
        acc.add(
            0.5 * n3
                * tuple_sum(layers, 3, |t| {
                    p[t[0]] * p[t[1]].powi(2) * p[t[2]].powi(2) * q.powi(5)
                }),
        );
        acc.add(
            0.5 * n3
                * tuple_sum(layers, 4, |t| {
                    let (pi, pj, pk, pl) = (p[t[0]], p[t[1]], p[t[2]], p[t[3]]);
                    3.0 * pi * pj * pk * pl * q.powi(5)
                        + pi.powi(2) * pj.powi(2) * pk * pl * q.powi(5) * (1.0 - q)
                }),
        );
        acc.add(
            0.5 * n4
                * tuple_sum(layers, 3, |t| {
                    let (pi, pj, pk) = (p[t[0]], p[t[1]], p[t[2]]);
                    2.0 * pi.powi(2) * pj.powi(2) * pk.powi(2) * q.powi(5) * (1.0 - q)
                        + 2.0 * pi.powi(2) * pj * pk.powi(2) * q.powi(4)
                }),
        );
        acc.add(
            0.5 * n4
                * tuple_sum(layers, 4, |t| {
                    let (pi, pj, pk, pl) = (p[t[0]], p[t[1]], p[t[2]], p[t[3]]);
                    pi.powi(2) * pj.powi(2) * pk * pl * q.powi(5) * (1.0 - q)
                        + pi * pj.powi(2) * pk * pl * q.powi(5)
                }),
        );
        acc.add(
            n3 * tuple_sum(layers, 5, |t| {
                p[t[0]] * p[t[1]] * p[t[2]] * p[t[3]] * p[t[4]] * q.powi(6)
            }),
        );
        acc.add(
            0.5 * n5
                * tuple_sum(layers, 3, |t| {
                    p[t[0]].powi(2) * p[t[1]].powi(2) * p[t[2]].powi(2) * q.powi(5) * (1.0 - q)
                }),
        );
        acc.add(
            n4 * tuple_sum(layers, 5, |t| {
                p[t[0]] * p[t[1]] * p[t[2]] * p[t[3]] * p[t[4]] * q.powi(6)
            }),
        );
        acc.add(
            0.25 * n5
                * tuple_sum(layers, 4, |t| {
                    2.0 * p[t[0]]
                        * p[t[1]].powi(2)
                        * p[t[2]].powi(2)
                        * p[t[3]]
                        * q.powi(5)
                        * (1.0 - q)
                }),
        );
        acc.value()
    };

    CovarianceBounds {
        r11: BoundValue {
            value: r11,
            exact: true,
        },
        r21: BoundValue {
            value: r21,
            exact: true,
        },
        r31: BoundValue {
            value: r31,
            exact: false,
        },
        r22: BoundValue {
            value: r22,
            exact: false,
        },
        r23: BoundValue {
            value: r23,
            exact: false,
        },
        r33: BoundValue {
            value: r33,
            exact: false,
        },
    }
}

/// Total-variation bound between the law of `(W1, W2, W3)` and the product
/// of Poisson laws with the matching means.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TvBoundReport {
    /// Sum of squared index probabilities over all indices.
    pub indicator_term: f64,
    /// Weighted covariance-class total.
    pub covariance_term: f64,
    pub general_bound: f64,
    /// A total-variation distance never exceeds 1; larger bounds are still
    /// reported but carry no information.
    pub uninformative: bool,
    /// The simpler closed form, available when all layers share one edge
    /// probability and inter-layer links are certain.
    pub uniform_bound: Option<f64>,
}

/// Evaluate the general total-variation bound at the given parameters.
pub fn tv_bound_general(params: &MserParams, n: usize) -> TvBoundReport {
    let layers = params.layer_count();
    let p = &params.p;
    let q = params.q;
    let triples = binomial(n as u128, 3) as f64;

    let mut indicator = KahanSum::default();
    indicator.add(triples * tuple_sum(layers, 1, |t| p[t[0]].powi(6)));
    indicator.add(
        3.0 * triples * tuple_sum(layers, 2, |t| p[t[0]].powi(2) * p[t[1]].powi(4) * q.powi(4)),
    );
    indicator.add(
        triples
            * tuple_sum(layers, 3, |t| {
                p[t[0]].powi(2) * p[t[1]].powi(2) * p[t[2]].powi(2) * q.powi(6)
            }),
    );
    let indicator_term = indicator.value();

    let covariance_term = covariance_bounds(params, n).weighted_total();
    let general_bound = indicator_term + covariance_term;

    let uniform_bound = if q == 1.0 && p.iter().all(|&pi| pi == p[0]) {
        Some(tv_bound_uniform(n, layers, p[0]))
    } else {
        None
    };

    TvBoundReport {
        indicator_term,
        covariance_term,
        general_bound,
        uninformative: general_bound >= 1.0,
        uniform_bound,
    }
}

/// The uniform-case bound `21·L⁵·n⁴·p⁵ + (107/6)·L⁴·n³·p⁴`.
///
/// Valid only when every layer has edge probability `p` and inter-layer
/// links are certain (the signature carries no `q`: unit probability is the
/// premise of this closed form).
pub fn tv_bound_uniform(n: usize, layers: usize, p: f64) -> f64 {
    let nf = n as f64;
    let lf = layers as f64;
    21.0 * lf.powi(5) * nf.powi(4) * p.powi(5) + (107.0 / 6.0) * lf.powi(4) * nf.powi(3) * p.powi(4)
}
