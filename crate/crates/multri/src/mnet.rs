//! The `.mnet` multilayer edge-list format.
//!
//! Line-oriented UTF-8 text. Full-line comments start with `#`. The first
//! record must be the header `nodes <n> layers <L>`. Edge records are
//! `<layer> <u> <v>` with 0-based integer layers and free-form node labels;
//! coupling records are `couple <i> <j> <u>`. If no coupling records are
//! present, full node-aligned coupling is implied. Labels map to dense node
//! ids in sorted order.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::network::{build_network, Coupling, MultisliceNetwork};

/// A parsed network together with its node-label dictionary. Ids `0..k`
/// correspond to the sorted distinct labels; ids `k..n` (if any) never
/// appeared in a record and stay unlabeled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledNetwork {
    pub network: MultisliceNetwork,
    pub labels: Vec<String>,
}

impl LabeledNetwork {
    pub fn label(&self, node: usize) -> Option<&str> {
        self.labels.get(node).map(String::as_str)
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

struct RawRecords {
    n: usize,
    layers: usize,
    // (line, layer, label u, label v)
    edges: Vec<(usize, usize, String, String)>,
    // (line, i, j, label u)
    couples: Vec<(usize, usize, usize, String)>,
}

fn scan(text: &str) -> Result<RawRecords> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut couples = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            ["nodes", n, "layers", layers] => {
                if header.is_some() {
                    return Err(parse_error(lineno, "duplicate header"));
                }
                let n: usize = n
                    .parse()
                    .map_err(|_| parse_error(lineno, format!("bad node count {n:?}")))?;
                let layers: usize = layers
                    .parse()
                    .map_err(|_| parse_error(lineno, format!("bad layer count {layers:?}")))?;
                if n == 0 || layers == 0 {
                    return Err(parse_error(
                        lineno,
                        "node and layer counts must be positive",
                    ));
                }
                // adjacency storage is layers * n^2 bits; reject headers
                // that would commit gigabytes before any record is read
                let cost = (n as u128) * (n as u128) * (layers as u128);
                if cost > 1 << 31 {
                    return Err(parse_error(
                        lineno,
                        format!("declared size {n} nodes x {layers} layers exceeds format limits"),
                    ));
                }
                header = Some((n, layers));
            }
            ["couple", i, j, u] => {
                if header.is_none() {
                    return Err(parse_error(lineno, "record before header"));
                }
                let i: usize = i
                    .parse()
                    .map_err(|_| parse_error(lineno, format!("bad layer index {i:?}")))?;
                let j: usize = j
                    .parse()
                    .map_err(|_| parse_error(lineno, format!("bad layer index {j:?}")))?;
                couples.push((lineno, i, j, u.to_string()));
            }
            [layer, u, v] => {
                if header.is_none() {
                    return Err(parse_error(lineno, "record before header"));
                }
                let layer: usize = layer.parse().map_err(|_| {
                    parse_error(lineno, format!("bad layer index {layer:?} in edge record"))
                })?;
                edges.push((lineno, layer, u.to_string(), v.to_string()));
            }
            _ => {
                return Err(parse_error(
                    lineno,
                    format!("malformed record with {} fields", tokens.len()),
                ));
            }
        }
    }

    let (n, layers) =
        header.ok_or_else(|| parse_error(text.lines().count() + 1, "missing header"))?;
    Ok(RawRecords {
        n,
        layers,
        edges,
        couples,
    })
}

/// Parse a network from `.mnet` text.
pub fn parse_str(text: &str) -> Result<LabeledNetwork> {
    let raw = scan(text)?;

    let mut label_set: BTreeMap<&str, usize> = BTreeMap::new();
    for (_, _, u, v) in &raw.edges {
        label_set.insert(u, 0);
        label_set.insert(v, 0);
    }
    for (_, _, _, u) in &raw.couples {
        label_set.insert(u, 0);
    }
    if label_set.len() > raw.n {
        return Err(parse_error(
            0,
            format!(
                "{} distinct labels exceed declared node count {}",
                label_set.len(),
                raw.n
            ),
        ));
    }
    for (rank, (_, id)) in label_set.iter_mut().enumerate() {
        *id = rank;
    }

    let mut edges = Vec::with_capacity(raw.edges.len());
    for (line, layer, u, v) in &raw.edges {
        if *layer >= raw.layers {
            return Err(parse_error(
                *line,
                format!("unknown layer {layer} (file declares {})", raw.layers),
            ));
        }
        if u == v {
            return Err(parse_error(*line, format!("self-loop at node {u:?}")));
        }
        edges.push((*layer, label_set[u.as_str()], label_set[v.as_str()]));
    }

    let coupling = if raw.couples.is_empty() {
        Coupling::Full
    } else {
        let mut links = Vec::with_capacity(raw.couples.len());
        for (line, i, j, u) in &raw.couples {
            if *i >= raw.layers || *j >= raw.layers {
                return Err(parse_error(
                    *line,
                    format!("unknown layer in coupling ({i}, {j})"),
                ));
            }
            if i == j {
                return Err(parse_error(
                    *line,
                    format!("coupling joins layer {i} to itself"),
                ));
            }
            links.push((*i, *j, label_set[u.as_str()]));
        }
        Coupling::Links(links)
    };

    let network = build_network(raw.n, raw.layers, &edges, coupling)?;
    Ok(LabeledNetwork {
        network,
        labels: label_set.into_keys().map(str::to_string).collect(),
    })
}

/// Load a network from a `.mnet` file.
pub fn load_network(path: impl AsRef<Path>) -> Result<LabeledNetwork> {
    let text = std::fs::read_to_string(path)?;
    parse_str(&text)
}

/// Zero-padded fallback labels `v00, v01, …` for generated networks.
pub fn default_labels(n: usize) -> Vec<String> {
    let width = (n.max(2) - 1).to_string().len();
    (0..n).map(|u| format!("v{u:0width$}")).collect()
}

/// Serialize a network to `.mnet` text.
///
/// Coupling records are omitted exactly when the network is fully coupled
/// and every labeled node already occurs in an edge record (the implicit
/// full-coupling convention then reconstructs the same network). Otherwise
/// couplings are written explicitly, which is what keeps labels alive for
/// nodes that occur only in coupling records. Nodes beyond the label
/// dictionary are written with a `_anon` placeholder; round-trip fidelity
/// requires labels for every node that occurs in a record.
pub fn serialize(net: &MultisliceNetwork, labels: &[String]) -> String {
    let n = net.node_count();
    let layers = net.layer_count();
    let name = |u: usize| -> String {
        labels
            .get(u)
            .cloned()
            .unwrap_or_else(|| format!("_anon{u}"))
    };

    let mut edge_referenced = vec![false; n];
    for layer in 0..layers {
        for &(u, v) in net.edges(layer) {
            edge_referenced[u as usize] = true;
            edge_referenced[v as usize] = true;
        }
    }
    let implicit_full =
        net.is_fully_coupled() && (0..labels.len().min(n)).all(|u| edge_referenced[u]);

    let mut out = String::new();
    out.push_str(&format!("nodes {n} layers {layers}\n"));
    for layer in 0..layers {
        for &(u, v) in net.edges(layer) {
            out.push_str(&format!(
                "{layer} {} {}\n",
                name(u as usize),
                name(v as usize)
            ));
        }
    }
    if !implicit_full {
        for (i, j, u) in net.couplings() {
            out.push_str(&format!("couple {i} {j} {}\n", name(u)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_only_is_an_empty_network() {
        let parsed = parse_str("# empty\nnodes 4 layers 2\n").unwrap();
        assert_eq!(parsed.network.node_count(), 4);
        assert_eq!(parsed.network.layer_count(), 2);
        assert_eq!(parsed.network.total_edge_count(), 0);
        // no coupling records: full coupling implied
        assert!(parsed.network.is_fully_coupled());
        assert!(parsed.labels.is_empty());
    }

    #[test]
    fn labels_map_in_sorted_order() {
        let parsed = parse_str("nodes 3 layers 1\n0 zebra ant\n0 moth zebra\n").unwrap();
        assert_eq!(parsed.labels, vec!["ant", "moth", "zebra"]);
        assert!(parsed.network.has_edge(0, 2, 0)); // zebra-ant
        assert!(parsed.network.has_edge(0, 1, 2)); // moth-zebra
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_str("nodes 3 layers 1\n5 a b\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");

        let err = parse_str("nodes 3 layers 1\nnodes 3 layers 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));

        let err = parse_str("nodes 2 layers 1\n0 a\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));

        let err = parse_str("0 a b\nnodes 2 layers 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));

        let err = parse_str("nodes 2 layers 1\n0 a a\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));

        let err = parse_str("nodes 2 layers 2\ncouple 0 0 a\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));

        let err = parse_str("").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));

        let err = parse_str("nodes 2 layers 1\n0 a b\n0 a c\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "too many labels: {err}");

        let err = parse_str("nodes 4000000000 layers 4000000000\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn round_trip_is_identity() {
        let text = "nodes 5 layers 3\n\
                    0 dog cat\n1 cat emu\n2 dog emu\n1 dog cat\n\
                    couple 0 1 dog\ncouple 1 2 cat\ncouple 0 2 emu\n";
        let first = parse_str(text).unwrap();
        let emitted = serialize(&first.network, &first.labels);
        let second = parse_str(&emitted).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn round_trip_keeps_coupling_only_labels() {
        // node c occurs only in coupling records; explicit couplings must
        // survive serialization or its id would shift
        let text = "nodes 3 layers 2\n0 a b\n\
                    couple 0 1 a\ncouple 0 1 b\ncouple 0 1 c\n";
        let first = parse_str(text).unwrap();
        assert_eq!(first.labels, vec!["a", "b", "c"]);
        assert!(first.network.is_fully_coupled());
        let emitted = serialize(&first.network, &first.labels);
        assert!(emitted.contains("couple 0 1 c"));
        assert_eq!(parse_str(&emitted).unwrap(), first);
    }

    #[test]
    fn fully_coupled_edge_covered_networks_serialize_implicitly() {
        let text = "nodes 3 layers 2\n0 a b\n1 b c\n0 a c\n";
        let first = parse_str(text).unwrap();
        let emitted = serialize(&first.network, &first.labels);
        assert!(!emitted.contains("couple"));
        assert_eq!(parse_str(&emitted).unwrap(), first);
    }

    #[test]
    fn generated_networks_serialize_with_default_labels() {
        use crate::model::{sample, MserParams, RngSeed};
        let params = MserParams::new(vec![0.5, 0.5], 0.6).unwrap();
        let net = sample(&params, 12, RngSeed(3));
        let labels = default_labels(12);
        let text = serialize(&net, &labels);
        let parsed = parse_str(&text).unwrap();
        assert_eq!(parsed.network, net);
    }
}
