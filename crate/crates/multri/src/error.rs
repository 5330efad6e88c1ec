use thiserror::Error;

/// Errors produced by network construction, file ingestion, and the
/// statistical engines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("layer index {layer} out of range (network has {layers} layers)")]
    LayerOutOfRange { layer: usize, layers: usize },

    #[error("node index {node} out of range (network has {nodes} nodes) in record {record}")]
    NodeOutOfRange {
        node: usize,
        nodes: usize,
        record: String,
    },

    #[error("self-loop ({u}, {u}) rejected in layer {layer}")]
    SelfLoop { layer: usize, u: usize },

    #[error("coupling ({i}, {j}, {u}) joins a layer to itself")]
    SelfCoupling { i: usize, j: usize, u: usize },

    #[error(
        "network must have at least one node and one layer (got n = {nodes}, layers = {layers})"
    )]
    EmptyShape { nodes: usize, layers: usize },

    #[error("edge density undefined for n = {nodes} < 2")]
    UndefinedDensity { nodes: usize },

    #[error("probability {value} for {what} outside [0, 1]")]
    InvalidProbability { what: &'static str, value: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(
        "trace of {product} is {trace}, not divisible by 6; \
         the inter-layer matrix is not node-aligned"
    )]
    TraceNotDivisible { product: &'static str, trace: u64 },

    #[error(
        "triangle censuses disagree: trace gives {trace:?}, enumeration gives {enumeration:?}"
    )]
    CensusMismatch {
        trace: (u64, u64, u64),
        enumeration: (u64, u64, u64),
    },

    #[error("covariance oracle infeasible: {pairs} index pairs exceed the {limit} limit")]
    OracleTooLarge { pairs: u128, limit: u128 },

    #[error("goodness-of-fit config mismatch: {message}")]
    ConfigMismatch { message: String },

    #[error("empty sample vector has no quantiles")]
    EmptySamples,

    #[error("significance level {alpha} outside (0, 1)")]
    InvalidAlpha { alpha: f64 },

    #[error("replicate count must be at least 1")]
    NoReplicates,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
