//! Machine-readable analysis reports: input digest, parameters, both
//! censuses, moments, covariance and total-variation bounds, and the Monte
//! Carlo test, in one JSON document.
//!
//! Reports are byte-deterministic for a given input and options. Every
//! floating value is emitted with 17 significant digits so a reader
//! recovers bit-identical doubles.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::census::{count_by_enumeration, count_by_trace, TriangleCounts};
use crate::error::Result;
use crate::gof::{run_gof, GofConfig, GofResult};
use crate::mnet::{serialize as serialize_mnet, LabeledNetwork};
use crate::model::{fit_mle, MserParams, RngSeed};
use crate::moments::{
    covariance_bounds, expected_counts, tv_bound_general, CovarianceBounds, MomentSummary,
    TvBoundReport,
};
use crate::supra::supra_matrices;

pub const REPORT_SCHEMA_VERSION: &str = "multri-report/1";

/// The JSON schema document describing [`AnalysisReport`].
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputSummary {
    pub nodes: usize,
    pub layers: usize,
    pub edges_per_layer: Vec<usize>,
    pub coupling_links: usize,
    pub fully_coupled: bool,
    /// SHA-256 of the canonical serialized form of the input network.
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsSummary {
    pub p: Vec<f64>,
    pub q: f64,
    /// "fitted-pooled", "fitted-per-layer", or "supplied".
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub trace: TriangleCounts,
    pub enumeration: TriangleCounts,
    pub methods_agree: bool,
}

/// Comparison of computed counts against caller-supplied reference values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceCheck {
    pub expected: TriangleCounts,
    pub mismatches: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema: String,
    pub input: InputSummary,
    pub params: ParamsSummary,
    pub census: CensusSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<ReferenceCheck>,
    pub moments: MomentSummary,
    /// The three-layer mean under the unordered-triple convention
    /// (half the ordered-triple `lambda3` reported in `moments`).
    pub lambda3_unordered_convention: f64,
    pub covariance_bounds: CovarianceBounds,
    pub tv_bound: TvBoundReport,
    pub gof: GofResult,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportOptions {
    /// Pool layers in the maximum-likelihood fit.
    pub pooled: bool,
    /// Use these parameters instead of fitting.
    pub params: Option<MserParams>,
    pub replicates: usize,
    pub seed: RngSeed,
    pub alpha: f64,
    /// Reference census to flag mismatches against.
    pub reference: Option<TriangleCounts>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            pooled: false,
            params: None,
            replicates: 999,
            seed: RngSeed(0),
            alpha: 0.05,
            reference: None,
        }
    }
}

/// Run the full analysis pipeline on one network.
pub fn analyze(labeled: &LabeledNetwork, opts: &ReportOptions) -> Result<AnalysisReport> {
    let net = &labeled.network;
    let n = net.node_count();
    let layers = net.layer_count();

    let canonical = serialize_mnet(net, &labeled.labels);
    let sha256 = hex(&Sha256::digest(canonical.as_bytes()));

    let (params, source) = match &opts.params {
        Some(p) => (p.clone(), "supplied".to_string()),
        None => (
            fit_mle(net, opts.pooled)?,
            if opts.pooled {
                "fitted-pooled".to_string()
            } else {
                "fitted-per-layer".to_string()
            },
        ),
    };

    let trace = count_by_trace(&supra_matrices(net))?;
    let enumeration = count_by_enumeration(net);
    let methods_agree = trace == enumeration;

    let mut notes = Vec::new();
    if !methods_agree {
        notes.push(format!(
            "census methods disagree: trace {:?} vs enumeration {:?}",
            trace.as_tuple(),
            enumeration.as_tuple()
        ));
    }

    let reference = opts.reference.map(|expected| {
        let mut mismatches = Vec::new();
        for (name, exp, got) in [
            ("one_d", expected.one_d, enumeration.one_d),
            ("two_d", expected.two_d, enumeration.two_d),
            ("three_d", expected.three_d, enumeration.three_d),
        ] {
            if exp != got {
                mismatches.push(format!("{name}: reference {exp}, computed {got}"));
            }
        }
        let ref_total = expected.total();
        if ref_total != enumeration.total() {
            mismatches.push(format!(
                "total: reference {ref_total}, computed {}",
                enumeration.total()
            ));
        }
        ReferenceCheck {
            expected,
            mismatches,
        }
    });
    if let Some(check) = &reference {
        for m in &check.mismatches {
            notes.push(format!("reference mismatch — {m}"));
        }
    }

    let moments = expected_counts(&params, n);
    let lambda3_unordered = moments.lambda3 / 2.0;
    if layers >= 3 {
        notes.push(format!(
            "lambda3 sums over ordered layer triples; the unordered-triple convention gives {lambda3_unordered}"
        ));
    }

    let cov = covariance_bounds(&params, n);
    let tv = tv_bound_general(&params, n);
    if tv.uninformative {
        notes.push("total-variation bound is at least 1 and therefore uninformative".to_string());
    }

    let mut cfg = GofConfig::new(params.clone(), n, opts.replicates, opts.seed);
    cfg.alpha = opts.alpha;
    let gof = run_gof(net, &cfg)?;

    Ok(AnalysisReport {
        schema: REPORT_SCHEMA_VERSION.to_string(),
        input: InputSummary {
            nodes: n,
            layers,
            edges_per_layer: (0..layers).map(|l| net.edge_count(l)).collect(),
            coupling_links: net.coupling_count(),
            fully_coupled: net.is_fully_coupled(),
            sha256,
        },
        params: ParamsSummary {
            p: params.p.clone(),
            q: params.q,
            source,
        },
        census: CensusSummary {
            trace,
            enumeration,
            methods_agree,
        },
        reference,
        moments,
        lambda3_unordered_convention: lambda3_unordered,
        covariance_bounds: cov,
        tv_bound: tv,
        gof,
        notes,
    })
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Rewrite every floating JSON number to 17 significant digits in place.
fn widen_floats(value: &mut serde_json::Value) {
    match value {
        serde_json::Value::Number(n) => {
            if !n.is_i64() && !n.is_u64() {
                if let Some(f) = n.as_f64() {
                    *n = serde_json::Number::from_string_unchecked(format!("{f:.16e}"));
                }
            }
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(widen_floats),
        serde_json::Value::Object(map) => map.values_mut().for_each(widen_floats),
        _ => {}
    }
}

/// Serialize a report to deterministic pretty JSON with 17-significant-digit
/// floats.
pub fn to_json(report: &AnalysisReport) -> String {
    let mut value = serde_json::to_value(report).expect("report is serializable");
    widen_floats(&mut value);
    let mut text = serde_json::to_string_pretty(&value).expect("value is serializable");
    text.push('\n');
    text
}

/// Parse a report back from JSON.
pub fn from_json(text: &str) -> serde_json::Result<AnalysisReport> {
    serde_json::from_str(text)
}
