//! Line-oriented text formats.
//!
//! Edge list: one `u v` pair of non-negative integer ids per line, any
//! whitespace between them. Lines starting with `#` are comments. The
//! writer emits a `# nodes=N edges=M` header, which the reader honours so
//! that trailing isolated nodes survive a round trip.
//!
//! Partition: one `node community` pair per line, nodes `0..n` each exactly
//! once. Community ids are arbitrary integers and are densified to `1..=k`
//! in ascending order on read.
//!
//! Reports: `key=value` lines (single runs) or CSV with a header row.
//! Floats carry six significant digits; see [`crate::format::sig6`].

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::community::GoodnessReport;
use crate::error::{Error, Result};
use crate::format::sig6;
use crate::generator::LabeledNetwork;
use crate::graph::Graph;
use crate::partition::Partition;
use crate::structural::MetricsReport;

#[derive(Debug, Clone)]
pub struct EdgeList {
    pub graph: Graph,
    /// Lines repeating an edge already read, in either orientation.
    pub duplicates: usize,
    /// With compaction, the original id of every dense node id.
    pub original_ids: Option<Vec<u64>>,
}

pub fn write_edge_list<W: Write>(graph: &Graph, mut sink: W) -> Result<()> {
    writeln!(sink, "# nodes={} edges={}", graph.node_count(), graph.edge_count())?;
    for (u, v) in graph.edges() {
        writeln!(sink, "{u} {v}")?;
    }
    sink.flush()?;
    Ok(())
}

pub fn read_edge_list<R: BufRead>(source: R) -> Result<EdgeList> {
    read_edge_list_with(source, false)
}

/// Reads an edge list. With `compact`, ids are mapped to `0..n` in
/// ascending order of the original id and the mapping is returned.
pub fn read_edge_list_with<R: BufRead>(source: R, compact: bool) -> Result<EdgeList> {
    let mut declared_nodes = 0usize;
    let mut pairs: Vec<(u64, u64, usize)> = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if let Some(comment) = text.strip_prefix('#') {
            if let Some(n) = header_nodes(comment) {
                declared_nodes = n;
            }
            continue;
        }
        let (u, v) = parse_pair(text, lineno)?;
        if u == v {
            return Err(Error::Parse {
                line: lineno,
                message: format!("self-loop on node {u}"),
            });
        }
        pairs.push((u, v, lineno));
    }

    let (n, original_ids, map): (usize, Option<Vec<u64>>, Option<HashMap<u64, usize>>) = if compact {
        let mut ids: Vec<u64> = pairs.iter().flat_map(|&(u, v, _)| [u, v]).collect();
        ids.sort_unstable();
        ids.dedup();
        let map = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        (ids.len(), Some(ids), Some(map))
    } else {
        let max = pairs.iter().map(|&(u, v, _)| u.max(v) as usize + 1).max().unwrap_or(0);
        (max.max(declared_nodes), None, None)
    };

    let mut graph = Graph::with_nodes(n);
    let mut duplicates = 0;
    for (u, v, _) in pairs {
        let (u, v) = match &map {
            Some(m) => (m[&u], m[&v]),
            None => (u as usize, v as usize),
        };
        if !graph.add_edge(u, v)? {
            duplicates += 1;
        }
    }
    Ok(EdgeList {
        graph,
        duplicates,
        original_ids,
    })
}

fn header_nodes(comment: &str) -> Option<usize> {
    comment
        .split_whitespace()
        .find_map(|tok| tok.strip_prefix("nodes="))
        .and_then(|n| n.parse().ok())
}

fn parse_pair(text: &str, line: usize) -> Result<(u64, u64)> {
    let mut tokens = text.split_whitespace();
    let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
        return Err(Error::Parse {
            line,
            message: format!("expected two integer ids, found '{text}'"),
        });
    };
    let parse = |t: &str| -> Result<u64> {
        t.parse().map_err(|_| Error::Parse {
            line,
            message: format!("'{t}' is not a non-negative integer"),
        })
    };
    Ok((parse(a)?, parse(b)?))
}

pub fn write_partition<W: Write>(partition: &Partition, mut sink: W) -> Result<()> {
    for (u, l) in partition.labels().iter().enumerate() {
        writeln!(sink, "{u} {l}")?;
    }
    sink.flush()?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct PartitionFile {
    pub partition: Partition,
    /// `(label in file, dense label)`, ascending.
    pub mapping: Vec<(u64, u32)>,
}

/// Reads a partition that must cover exactly the nodes `0..node_count`.
pub fn read_partition<R: BufRead>(source: R, node_count: usize) -> Result<PartitionFile> {
    let mut raw: Vec<Option<u64>> = vec![None; node_count];
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let (node, label) = parse_pair(text, lineno)?;
        let node = node as usize;
        if node >= node_count {
            return Err(Error::Parse {
                line: lineno,
                message: format!("node {node} outside 0..{node_count}"),
            });
        }
        if raw[node].replace(label).is_some() {
            return Err(Error::DuplicateNode { line: lineno, node });
        }
    }
    let labels = raw
        .into_iter()
        .enumerate()
        .map(|(u, l)| l.ok_or(Error::MissingNode(u)))
        .collect::<Result<Vec<u64>>>()?;
    let (partition, mapping) = Partition::densify(&labels);
    Ok(PartitionFile { partition, mapping })
}

/// Provenance for a generated network, as `key=value` lines. Parameters are
/// written in shortest round-trip form so they can be re-entered exactly.
pub fn write_config<W: Write>(net: &LabeledNetwork, mut sink: W) -> Result<()> {
    let c = &net.config;
    let d = &net.diagnostics;
    writeln!(sink, "generator=commbench {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(sink, "nodes={}", c.nodes)?;
    writeln!(sink, "communities={}", c.communities)?;
    writeln!(sink, "pt={}", c.pt)?;
    writeln!(sink, "mu={}", c.mu)?;
    writeln!(sink, "m={}", c.m)?;
    writeln!(sink, "seed={}", c.seed)?;
    writeln!(sink, "edges={}", net.graph.edge_count())?;
    writeln!(sink, "triad_fallbacks={}", d.triad_fallbacks)?;
    writeln!(sink, "class_fallbacks={}", d.class_fallbacks)?;
    writeln!(sink, "skipped_edges={}", d.skipped_edges)?;
    sink.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Kv,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kv" => Ok(ReportFormat::Kv),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::InvalidConfig(format!("unknown report format '{other}'"))),
        }
    }
}

/// Tabular view of a report. Column order is fixed per report type.
pub trait Report {
    fn columns(&self) -> Vec<&'static str>;
    fn rows(&self) -> Vec<Vec<String>>;

    /// Key prefix for row `i` in `key=value` output. Single-row reports
    /// need none.
    fn row_key(&self, _i: usize) -> Option<String> {
        None
    }
}

pub fn write_report<W: Write>(report: &dyn Report, mut sink: W, format: ReportFormat) -> Result<()> {
    let columns = report.columns();
    match format {
        ReportFormat::Kv => {
            for (i, row) in report.rows().iter().enumerate() {
                let prefix = report.row_key(i);
                for (col, value) in columns.iter().zip(row) {
                    match &prefix {
                        Some(p) => writeln!(sink, "{p}.{col}={value}")?,
                        None => writeln!(sink, "{col}={value}")?,
                    }
                }
            }
        }
        ReportFormat::Csv => {
            writeln!(sink, "{}", columns.join(","))?;
            for row in report.rows() {
                writeln!(sink, "{}", row.join(","))?;
            }
        }
    }
    sink.flush()?;
    Ok(())
}

pub(crate) fn opt_sig6(x: Option<f64>) -> String {
    x.map(sig6).unwrap_or_else(|| "undefined".into())
}

impl Report for MetricsReport {
    fn columns(&self) -> Vec<&'static str> {
        vec![
            "nodes",
            "edges",
            "edge_node_ratio",
            "apl",
            "cc_global",
            "cc_mean_local",
            "alpha",
            "xmin",
            "gcc_fraction",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.nodes.to_string(),
            self.edges.to_string(),
            sig6(self.edge_node_ratio),
            sig6(self.apl),
            sig6(self.cc_global),
            sig6(self.cc_mean_local),
            opt_sig6(self.alpha),
            self.xmin.map_or_else(|| "undefined".into(), |x| x.to_string()),
            sig6(self.gcc_fraction),
        ]]
    }
}

impl Report for GoodnessReport {
    fn columns(&self) -> Vec<&'static str> {
        vec![
            "community",
            "size",
            "internal_edges",
            "boundary_edges",
            "separability",
            "density",
            "clustering",
            "loyalty",
            "loyalty_ratio",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.communities
            .iter()
            .map(|c| {
                vec![
                    c.community.to_string(),
                    c.size.to_string(),
                    c.internal_edges.to_string(),
                    c.boundary_edges.to_string(),
                    sig6(c.separability),
                    sig6(c.density),
                    sig6(c.clustering),
                    sig6(c.loyalty),
                    sig6(c.loyalty_ratio),
                ]
            })
            .collect()
    }

    fn row_key(&self, i: usize) -> Option<String> {
        Some(format!("community.{}", self.communities[i].community))
    }
}

/// Free-form single-row report.
#[derive(Debug, Clone, Default)]
pub struct KeyValues(pub Vec<(&'static str, String)>);

impl Report for KeyValues {
    fn columns(&self) -> Vec<&'static str> {
        self.0.iter().map(|(k, _)| *k).collect()
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![self.0.iter().map(|(_, v)| v.clone()).collect()]
    }
}
