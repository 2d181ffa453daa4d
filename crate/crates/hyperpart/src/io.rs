//! hMETIS-format hypergraph files, partition files, and metric reports.
//!
//! Readers tolerate `\r\n`, trailing whitespace, and `%` comment lines;
//! writers emit canonical `\n`-terminated lines with single spaces.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Partition};

/// hMETIS fmt codes: which weight sections the file carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HmetisFormat {
    Plain,
    EdgeWeights,
    NodeWeights,
    Both,
}

impl HmetisFormat {
    fn from_code(code: &str) -> Option<Self> {
        match code {
            "0" => Some(HmetisFormat::Plain),
            "1" => Some(HmetisFormat::EdgeWeights),
            "10" => Some(HmetisFormat::NodeWeights),
            "11" => Some(HmetisFormat::Both),
            _ => None,
        }
    }

    fn has_edge_weights(self) -> bool {
        matches!(self, HmetisFormat::EdgeWeights | HmetisFormat::Both)
    }

    fn has_node_weights(self) -> bool {
        matches!(self, HmetisFormat::NodeWeights | HmetisFormat::Both)
    }
}

/// Header of an hMETIS file: `num_edges num_nodes [fmt]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HmetisHeader {
    pub num_edges: usize,
    pub num_nodes: usize,
    pub fmt: HmetisFormat,
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('%'))
}

fn parse_count(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| Error::parse(line, format!("malformed {what} `{tok}`")))
}

fn parse_weight(tok: &str, line: usize, what: &str) -> Result<f64> {
    let w: f64 = tok
        .parse()
        .map_err(|_| Error::parse(line, format!("malformed {what} `{tok}`")))?;
    if !w.is_finite() {
        return Err(Error::parse(line, format!("non-finite {what} `{tok}`")));
    }
    Ok(w)
}

/// Parse an hMETIS hypergraph file. Pin ids are converted to 0-based.
///
/// Duplicate pins within a hyperedge are dropped with a warning (returned,
/// not printed) since real netlists contain them.
pub fn read_hmetis(text: &str) -> Result<(Hypergraph, Vec<String>)> {
    let mut lines = data_lines(text);
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "empty file".to_string()))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() < 2 || toks.len() > 3 {
        return Err(Error::parse(
            header_line,
            format!("header must be `edges nodes [fmt]`, got `{header}`"),
        ));
    }
    let num_edges = parse_count(toks[0], header_line, "edge count")?;
    let num_nodes = parse_count(toks[1], header_line, "node count")?;
    if num_nodes == 0 {
        return Err(Error::parse(header_line, "node count must be positive".to_string()));
    }
    let fmt = match toks.get(2) {
        None => HmetisFormat::Plain,
        Some(code) => HmetisFormat::from_code(code)
            .ok_or_else(|| Error::parse(header_line, format!("unknown fmt code `{code}`")))?,
    };

    let mut warnings = Vec::new();
    let mut edges: Vec<Vec<usize>> = Vec::with_capacity(num_edges);
    let mut edge_weights: Vec<f64> = Vec::with_capacity(num_edges);
    for e in 0..num_edges {
        let (line_no, line) = lines.next().ok_or_else(|| {
            Error::parse(
                header_line,
                format!("header promises {num_edges} hyperedges but file has {e}"),
            )
        })?;
        let mut toks = line.split_whitespace();
        let weight = if fmt.has_edge_weights() {
            let tok = toks
                .next()
                .ok_or_else(|| Error::parse(line_no, "missing hyperedge weight".to_string()))?;
            let w = parse_weight(tok, line_no, "hyperedge weight")?;
            if w <= 0.0 {
                return Err(Error::parse(line_no, format!("nonpositive hyperedge weight {w}")));
            }
            w
        } else {
            1.0
        };
        let mut pins = Vec::new();
        for tok in toks {
            let pin = parse_count(tok, line_no, "pin id")?;
            if pin == 0 || pin > num_nodes {
                return Err(Error::parse(
                    line_no,
                    format!("pin {pin} out of range 1..={num_nodes}"),
                ));
            }
            let pin = pin - 1;
            if pins.contains(&pin) {
                warnings.push(format!(
                    "line {line_no}: duplicate pin {} in hyperedge {} dropped",
                    pin + 1,
                    e + 1
                ));
            } else {
                pins.push(pin);
            }
        }
        if pins.is_empty() {
            return Err(Error::parse(line_no, "hyperedge has no pins".to_string()));
        }
        edges.push(pins);
        edge_weights.push(weight);
    }

    let mut node_weights = vec![1.0; num_nodes];
    if fmt.has_node_weights() {
        for v in 0..num_nodes {
            let (line_no, line) = lines.next().ok_or_else(|| {
                Error::parse(
                    header_line,
                    format!("header promises {num_nodes} node weights but file has {v}"),
                )
            })?;
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 1 {
                return Err(Error::parse(
                    line_no,
                    format!("expected one node weight, got `{line}`"),
                ));
            }
            let w = parse_weight(toks[0], line_no, "node weight")?;
            if w < 0.0 {
                return Err(Error::parse(line_no, format!("negative node weight {w}")));
            }
            node_weights[v] = w;
        }
    }

    if let Some((line_no, line)) = lines.next() {
        return Err(Error::parse(
            line_no,
            format!("unexpected trailing content `{line}`"),
        ));
    }

    let h = Hypergraph::new(num_nodes, edges, edge_weights, node_weights)
        .map_err(|e| Error::parse(header_line, e.to_string()))?;
    Ok((h, warnings))
}

fn format_weight(w: f64) -> String {
    format!("{w}")
}

/// Serialize a hypergraph in canonical hMETIS form.
///
/// The fmt code is the minimal one covering non-unit weights, so
/// `read_hmetis(write_hmetis(h)) == h` on the data model.
pub fn write_hmetis(h: &Hypergraph) -> String {
    let edge_weighted = h.edge_weights().iter().any(|&w| w != 1.0);
    let node_weighted = h.node_weights().iter().any(|&w| w != 1.0);
    let fmt = match (edge_weighted, node_weighted) {
        (false, false) => HmetisFormat::Plain,
        (true, false) => HmetisFormat::EdgeWeights,
        (false, true) => HmetisFormat::NodeWeights,
        (true, true) => HmetisFormat::Both,
    };
    let mut out = String::new();
    match fmt {
        HmetisFormat::Plain => {
            let _ = writeln!(out, "{} {}", h.num_edges(), h.num_nodes());
        }
        HmetisFormat::EdgeWeights => {
            let _ = writeln!(out, "{} {} 1", h.num_edges(), h.num_nodes());
        }
        HmetisFormat::NodeWeights => {
            let _ = writeln!(out, "{} {} 10", h.num_edges(), h.num_nodes());
        }
        HmetisFormat::Both => {
            let _ = writeln!(out, "{} {} 11", h.num_edges(), h.num_nodes());
        }
    }
    for e in 0..h.num_edges() {
        let mut first = true;
        if fmt.has_edge_weights() {
            out.push_str(&format_weight(h.edge_weight(e)));
            first = false;
        }
        for &p in h.pins_of(e) {
            if !first {
                out.push(' ');
            }
            let _ = write!(out, "{}", p + 1);
            first = false;
        }
        out.push('\n');
    }
    if fmt.has_node_weights() {
        for v in 0..h.num_nodes() {
            out.push_str(&format_weight(h.node_weight(v)));
            out.push('\n');
        }
    }
    out
}

/// Write a partition file: line `i` holds the block id of node `i`.
pub fn write_partition(p: &Partition) -> String {
    let mut out = String::with_capacity(p.num_nodes() * 2);
    for v in 0..p.num_nodes() {
        let _ = writeln!(out, "{}", p.block_of(v));
    }
    out
}

/// Read a partition file with exactly `num_nodes` lines; `k` is inferred
/// as `max block id + 1` and ids must be dense.
pub fn read_partition(text: &str, num_nodes: usize, epsilon: f64) -> Result<Partition> {
    let mut blocks = Vec::with_capacity(num_nodes);
    for (line_no, line) in data_lines(text) {
        if blocks.len() == num_nodes {
            return Err(Error::parse(
                line_no,
                format!("more than {num_nodes} partition lines"),
            ));
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 1 {
            return Err(Error::parse(
                line_no,
                format!("expected one block id, got `{line}`"),
            ));
        }
        blocks.push(parse_count(toks[0], line_no, "block id")?);
    }
    if blocks.len() != num_nodes {
        return Err(Error::parse(
            0,
            format!("expected {num_nodes} partition lines, got {}", blocks.len()),
        ));
    }
    let k = blocks.iter().max().map_or(0, |&b| b + 1);
    Partition::new(blocks, k, epsilon).map_err(|e| Error::parse(0, e.to_string()))
}

/// A report metric value.
#[derive(Debug, Clone, PartialEq)]
pub enum ReportValue {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
}

/// Key-sorted metric report; renders as `key: value` lines plus one
/// machine-readable JSON line. Rendering is deterministic.
#[derive(Debug, Clone, Default)]
pub struct Report {
    entries: BTreeMap<String, ReportValue>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn set_int(&mut self, key: &str, v: i64) {
        self.entries.insert(key.to_string(), ReportValue::Int(v));
    }

    pub fn set_float(&mut self, key: &str, v: f64) {
        self.entries.insert(key.to_string(), ReportValue::Float(v));
    }

    pub fn set_text(&mut self, key: &str, v: &str) {
        self.entries
            .insert(key.to_string(), ReportValue::Text(v.to_string()));
    }

    pub fn set_bool(&mut self, key: &str, v: bool) {
        self.entries.insert(key.to_string(), ReportValue::Bool(v));
    }

    pub fn get(&self, key: &str) -> Option<&ReportValue> {
        self.entries.get(key)
    }
}

/// Render a report: one `key: value` line per metric (keys sorted), then a
/// `json:` line carrying the same data as a JSON object.
pub fn write_report(report: &Report) -> String {
    let mut out = String::new();
    let mut json = serde_json::Map::new();
    for (key, value) in &report.entries {
        match value {
            ReportValue::Int(v) => {
                let _ = writeln!(out, "{key}: {v}");
                json.insert(key.clone(), serde_json::json!(v));
            }
            ReportValue::Float(v) => {
                let _ = writeln!(out, "{key}: {v}");
                json.insert(key.clone(), serde_json::json!(v));
            }
            ReportValue::Text(v) => {
                let _ = writeln!(out, "{key}: {v}");
                json.insert(key.clone(), serde_json::json!(v));
            }
            ReportValue::Bool(v) => {
                let _ = writeln!(out, "{key}: {v}");
                json.insert(key.clone(), serde_json::json!(v));
            }
        }
    }
    let _ = writeln!(out, "json: {}", serde_json::Value::Object(json));
    out
}
