//! Triangle statistics for multislice networks.
//!
//! A multislice network is a stack of simple graphs ("layers") over one
//! shared node set, with inter-layer links joining copies of the same node.
//! Triangles then come in three kinds, by how many layers their edges span,
//! and this crate provides:
//!
//! - network construction and the supra-adjacency matrices ([`network`],
//!   [`supra`]);
//! - exact censuses of 1D/2D/3D triangles by two independent engines —
//!   trace products and direct index enumeration ([`census`]);
//! - the multislice Erdős–Rényi null model: seeded sampling, maximum
//!   likelihood fitting, per-index presence probabilities ([`model`]);
//! - closed-form count means, covariance-class bounds, and total-variation
//!   bounds against a product-Poisson law, plus a brute-force covariance
//!   oracle for validating the closed forms ([`moments`], [`oracle`]);
//! - a Monte Carlo goodness-of-fit test with mid-p values ([`gof`]);
//! - the `.mnet` file format, bundled case-study data, and JSON analysis
//!   reports ([`mnet`], [`datasets`], [`report`]).

pub mod census;
pub mod datasets;
pub mod error;
pub mod gof;
pub mod mnet;
pub mod model;
pub mod moments;
pub mod network;
pub mod oracle;
pub mod report;
pub mod supra;

pub use census::{
    all_triangle_indices, count_by_enumeration, count_by_trace, enumerate_present, gamma_sizes,
    TriangleCounts, TriangleIndex, TriangleType,
};
pub use error::{Error, Result};
pub use gof::{
    empirical_quantiles, mid_p_value, run_gof, GofConfig, GofResult, GofStatResult, GofStatistic,
};
pub use mnet::{load_network, parse_str, LabeledNetwork};
pub use model::{fit_mle, index_probability, sample, MserParams, RngSeed};
pub use moments::{
    covariance_bounds, expected_counts, tv_bound_general, tv_bound_uniform, BoundValue,
    CovarianceBounds, MomentSummary, TvBoundReport,
};
pub use network::{build_network, Coupling, MultisliceNetwork};
pub use oracle::exact_covariance_oracle;
pub use report::{analyze, AnalysisReport, ReportOptions};
pub use supra::{supra_matrices, SparseMatrix, SupraMatrices};
