//! Monte Carlo goodness-of-fit test for the multislice Erdős–Rényi null:
//! simulate replicate networks at fixed parameters, compare observed
//! triangle statistics against the simulated distribution, and report
//! two-sided quantile intervals and one-sided (upper tail) mid-p values.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::census::{count_by_enumeration, TriangleCounts};
use crate::error::{Error, Result};
use crate::model::{sample, substream, MserParams, RngSeed};
use crate::network::MultisliceNetwork;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GofStatistic {
    OneD,
    TwoD,
    ThreeD,
    Total,
}

impl GofStatistic {
    pub const ALL: [GofStatistic; 4] = [
        GofStatistic::OneD,
        GofStatistic::TwoD,
        GofStatistic::ThreeD,
        GofStatistic::Total,
    ];

    pub fn value(&self, counts: &TriangleCounts) -> u64 {
        match self {
            GofStatistic::OneD => counts.one_d,
            GofStatistic::TwoD => counts.two_d,
            GofStatistic::ThreeD => counts.three_d,
            GofStatistic::Total => counts.total(),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            GofStatistic::OneD => "1D",
            GofStatistic::TwoD => "2D",
            GofStatistic::ThreeD => "3D",
            GofStatistic::Total => "total",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofConfig {
    pub num_replicates: usize,
    pub master_seed: RngSeed,
    pub statistics: Vec<GofStatistic>,
    pub alpha: f64,
    pub null_params: MserParams,
    pub n: usize,
}

impl GofConfig {
    pub fn new(null_params: MserParams, n: usize, num_replicates: usize, seed: RngSeed) -> Self {
        GofConfig {
            num_replicates,
            master_seed: seed,
            statistics: GofStatistic::ALL.to_vec(),
            alpha: 0.05,
            null_params,
            n,
        }
    }
}

/// Test outcome for one statistic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofStatResult {
    pub statistic: GofStatistic,
    pub observed: u64,
    /// Empirical `alpha/2` quantile of the simulated counts.
    pub q_low: u64,
    /// Empirical `1 - alpha/2` quantile of the simulated counts.
    pub q_high: u64,
    /// Upper-tail mid-p value with the observation counted among the ties.
    pub p_value: f64,
    /// Two-sided decision: observed outside `[q_low, q_high]`.
    pub reject: bool,
    /// Full sorted vector of simulated counts, for reports and plots.
    pub simulated: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofResult {
    pub num_replicates: usize,
    pub alpha: f64,
    pub statistics: Vec<GofStatResult>,
}

impl GofResult {
    pub fn statistic(&self, which: GofStatistic) -> Option<&GofStatResult> {
        self.statistics.iter().find(|s| s.statistic == which)
    }
}

/// Mid-p value for an upper-tail Monte Carlo test: `greater` simulated
/// values exceed the observation, `ties` equal it, and the observation
/// itself counts as one of the ties, split evenly:
/// `(greater + (ties + 1)/2) / (replicates + 1)`.
pub fn mid_p_value(greater: usize, ties: usize, num_replicates: usize) -> f64 {
    (greater as f64 + (ties as f64 + 1.0) / 2.0) / (num_replicates as f64 + 1.0)
}

/// Two-sided empirical quantiles at levels `alpha/2` and `1 - alpha/2`,
/// using the 1-based order statistic at `ceil(level · N)`.
pub fn empirical_quantiles(sorted: &[u64], alpha: f64) -> Result<(u64, u64)> {
    if sorted.is_empty() {
        return Err(Error::EmptySamples);
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidAlpha { alpha });
    }
    let n = sorted.len();
    let order_stat = |level: f64| -> u64 {
        let rank = (level * n as f64).ceil() as usize;
        sorted[rank.clamp(1, n) - 1]
    };
    Ok((order_stat(alpha / 2.0), order_stat(1.0 - alpha / 2.0)))
}

const REPLICATE_STREAM: u64 = 0x5265_706c_6963_6174; // distinct tag space per replicate

/// Seed for one simulation replicate, derived from the master seed.
pub fn replicate_seed(master: RngSeed, replicate: usize) -> RngSeed {
    RngSeed(substream(master.0, &[REPLICATE_STREAM, replicate as u64]))
}

/// Run the Monte Carlo test. Deterministic in `(net, cfg)`: replicate
/// seeds derive from the master seed and results are gathered by replicate
/// index, so thread scheduling cannot change the outcome.
pub fn run_gof(net: &MultisliceNetwork, cfg: &GofConfig) -> Result<GofResult> {
    if cfg.n != net.node_count() {
        return Err(Error::ConfigMismatch {
            message: format!(
                "config n = {} but network has {} nodes",
                cfg.n,
                net.node_count()
            ),
        });
    }
    if cfg.null_params.layer_count() != net.layer_count() {
        return Err(Error::ConfigMismatch {
            message: format!(
                "null parameters have {} layers but network has {}",
                cfg.null_params.layer_count(),
                net.layer_count()
            ),
        });
    }
    if cfg.num_replicates == 0 {
        return Err(Error::NoReplicates);
    }
    if !(cfg.alpha > 0.0 && cfg.alpha < 1.0) {
        return Err(Error::InvalidAlpha { alpha: cfg.alpha });
    }

    let observed = count_by_enumeration(net);
    let simulated: Vec<TriangleCounts> = (0..cfg.num_replicates)
        .into_par_iter()
        .map(|r| {
            let replicate = sample(&cfg.null_params, cfg.n, replicate_seed(cfg.master_seed, r));
            count_by_enumeration(&replicate)
        })
        .collect();

    let statistics = cfg
        .statistics
        .iter()
        .map(|&stat| {
            let obs = stat.value(&observed);
            let mut sims: Vec<u64> = simulated.iter().map(|c| stat.value(c)).collect();
            sims.sort_unstable();
            let greater = sims.iter().filter(|&&s| s > obs).count();
            let ties = sims.iter().filter(|&&s| s == obs).count();
            let (q_low, q_high) = empirical_quantiles(&sims, cfg.alpha)
                .expect("non-empty by construction, alpha validated");
            GofStatResult {
                statistic: stat,
                observed: obs,
                q_low,
                q_high,
                p_value: mid_p_value(greater, ties, cfg.num_replicates),
                reject: obs < q_low || obs > q_high,
                simulated: sims,
            }
        })
        .collect();

    Ok(GofResult {
        num_replicates: cfg.num_replicates,
        alpha: cfg.alpha,
        statistics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{build_network, Coupling};

    #[test]
    fn mid_p_examples() {
        assert!((mid_p_value(40, 37, 999) - 0.059).abs() < 1e-15);
        assert!((mid_p_value(0, 0, 999) - 0.0005).abs() < 1e-15);
        assert!((mid_p_value(999, 0, 999) - 0.9995).abs() < 1e-15);
        assert!((mid_p_value(0, 1, 1) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn quantile_examples() {
        let ramp: Vec<u64> = (0..1000).collect();
        assert_eq!(empirical_quantiles(&ramp, 0.05).unwrap(), (24, 974));
        let constant = vec![7u64; 33];
        assert_eq!(empirical_quantiles(&constant, 0.05).unwrap(), (7, 7));
        assert_eq!(empirical_quantiles(&[5], 0.05).unwrap(), (5, 5));
        assert!(matches!(
            empirical_quantiles(&[], 0.05),
            Err(Error::EmptySamples)
        ));
        assert!(empirical_quantiles(&[1, 2], 0.0).is_err());
    }

    #[test]
    fn single_replicate_tie_gives_half() {
        // a null network identical in distribution to itself: with one
        // replicate that happens to produce the same count, p = 0.5
        let net = build_network(3, 1, &[], Coupling::Full).unwrap();
        let params = MserParams::new(vec![0.0], 1.0).unwrap();
        let cfg = GofConfig::new(params, 3, 1, RngSeed(5));
        let result = run_gof(&net, &cfg).unwrap();
        for stat in &result.statistics {
            assert_eq!(stat.observed, 0);
            assert_eq!(stat.simulated, vec![0]);
            assert!((stat.p_value - 0.5).abs() < 1e-15);
            assert!(!stat.reject);
        }
    }

    #[test]
    fn config_mismatch_is_rejected() {
        let net = build_network(4, 2, &[], Coupling::Full).unwrap();
        let params = MserParams::new(vec![0.1], 1.0).unwrap();
        let cfg = GofConfig::new(params, 4, 10, RngSeed(1));
        assert!(matches!(
            run_gof(&net, &cfg),
            Err(Error::ConfigMismatch { .. })
        ));
        let params = MserParams::new(vec![0.1, 0.1], 1.0).unwrap();
        let mut cfg = GofConfig::new(params, 5, 10, RngSeed(1));
        assert!(matches!(
            run_gof(&net, &cfg),
            Err(Error::ConfigMismatch { .. })
        ));
        cfg.n = 4;
        cfg.num_replicates = 0;
        assert!(matches!(run_gof(&net, &cfg), Err(Error::NoReplicates)));
    }

    #[test]
    fn deterministic_given_seed() {
        let net = build_network(6, 2, &[(0, 0, 1), (0, 1, 2), (0, 0, 2)], Coupling::Full).unwrap();
        let params = MserParams::new(vec![0.4, 0.3], 1.0).unwrap();
        let cfg = GofConfig::new(params, 6, 64, RngSeed(11));
        let a = run_gof(&net, &cfg).unwrap();
        let b = run_gof(&net, &cfg).unwrap();
        assert_eq!(a, b);
        // and independent of worker count
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let c = pool.install(|| run_gof(&net, &cfg).unwrap());
        assert_eq!(a, c);
    }

    #[test]
    fn monotone_rejection_in_observed() {
        // holding simulations fixed, a larger observation can only shrink
        // the upper-tail mid-p value
        let sims: Vec<u64> = vec![0, 1, 1, 2, 3, 3, 3, 4, 7, 9];
        let n = sims.len();
        let p_at = |obs: u64| {
            let greater = sims.iter().filter(|&&s| s > obs).count();
            let ties = sims.iter().filter(|&&s| s == obs).count();
            mid_p_value(greater, ties, n)
        };
        let mut last = f64::INFINITY;
        for obs in 0..=10 {
            let p = p_at(obs);
            assert!(p <= last + 1e-15, "p increased at obs = {obs}");
            last = p;
        }
    }
}
