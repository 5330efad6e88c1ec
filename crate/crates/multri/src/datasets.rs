//! Bundled case-study networks. See `data/README.md` for provenance.

use crate::mnet::{parse_str, LabeledNetwork};

/// Padgett's Florentine families: 16 families, marriage and business layers.
pub const FLORENTINE_MNET: &str = include_str!("../data/florentine.mnet");

/// Lazega's law-firm networks: 71 attorneys; advice, coworker, and
/// friendship layers, symmetrized by union.
pub const LAZEGA_MNET: &str = include_str!("../data/lazega.mnet");

pub fn florentine() -> LabeledNetwork {
    parse_str(FLORENTINE_MNET).expect("bundled florentine data parses")
}

pub fn lazega() -> LabeledNetwork {
    parse_str(LAZEGA_MNET).expect("bundled lazega data parses")
}
