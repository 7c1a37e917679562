//! Whole-graph statistics: degree distribution, fitted power-law exponent,
//! average path length and clustering.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Smallest tail the exponent fit will accept when scanning for `xmin`.
pub const MIN_TAIL: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub nodes: usize,
    pub edges: usize,
    pub edge_node_ratio: f64,
    pub apl: f64,
    /// Transitivity.
    pub cc_global: f64,
    /// Mean of local clustering coefficients (degree < 2 counts as 0).
    pub cc_mean_local: f64,
    pub alpha: Option<f64>,
    pub xmin: Option<usize>,
    pub gcc_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DegreeDistribution {
    pub histogram: BTreeMap<usize, usize>,
    pub max_degree: usize,
}

impl DegreeDistribution {
    pub fn node_count(&self) -> usize {
        self.histogram.values().sum()
    }

    /// Expands the histogram into a sorted sample of degrees.
    pub fn samples(&self) -> Vec<usize> {
        self.histogram
            .iter()
            .flat_map(|(&d, &c)| std::iter::repeat_n(d, c))
            .collect()
    }

    pub fn from_samples(samples: &[usize]) -> Self {
        let mut histogram = BTreeMap::new();
        for &d in samples {
            *histogram.entry(d).or_insert(0) += 1;
        }
        let max_degree = histogram.keys().next_back().copied().unwrap_or(0);
        DegreeDistribution {
            histogram,
            max_degree,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub alpha: f64,
    pub xmin: usize,
    /// Samples at or above `xmin`.
    pub tail: usize,
    pub ks: f64,
}

pub fn degree_distribution(graph: &Graph) -> DegreeDistribution {
    let degrees: Vec<usize> = (0..graph.node_count()).map(|u| graph.degree(u)).collect();
    DegreeDistribution::from_samples(&degrees)
}

/// Sum of hop distances and number of reached nodes from `source`,
/// excluding the source itself.
fn bfs_totals(graph: &Graph, source: usize, dist: &mut [u32], queue: &mut Vec<usize>) -> (u64, u64) {
    dist.fill(u32::MAX);
    queue.clear();
    dist[source] = 0;
    queue.push(source);
    let mut head = 0;
    let (mut sum, mut reached) = (0u64, 0u64);
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        let du = dist[u];
        for &v in graph.neighbors(u) {
            if dist[v] == u32::MAX {
                dist[v] = du + 1;
                sum += u64::from(du + 1);
                reached += 1;
                queue.push(v);
            }
        }
    }
    (sum, reached)
}

/// Mean shortest-path length over ordered pairs of distinct nodes that can
/// reach each other. Unreachable pairs are ignored.
pub fn average_path_length(graph: &Graph) -> Result<f64> {
    let n = graph.node_count();
    let (sum, pairs) = (0..n)
        .into_par_iter()
        .map_init(
            || (vec![u32::MAX; n], Vec::with_capacity(n)),
            |(dist, queue), s| bfs_totals(graph, s, dist, queue),
        )
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    if pairs == 0 {
        return Err(Error::NoReachablePairs);
    }
    Ok(sum as f64 / pairs as f64)
}

/// Number of triangles through each node.
fn triangles_per_node(graph: &Graph) -> Vec<u64> {
    let n = graph.node_count();
    let mut count = vec![0u64; n];
    let mut mark = vec![usize::MAX; n];
    for u in 0..n {
        for &v in graph.neighbors(u) {
            mark[v] = u;
        }
        for &v in graph.neighbors(u).iter().filter(|&&v| v > u) {
            for &w in graph.neighbors(v).iter().filter(|&&w| w > v) {
                if mark[w] == u {
                    count[u] += 1;
                    count[v] += 1;
                    count[w] += 1;
                }
            }
        }
    }
    count
}

/// Transitivity: `3 * triangles / connected triples`, 0 without triples.
pub fn global_clustering_coefficient(graph: &Graph) -> f64 {
    let tri: u64 = triangles_per_node(graph).iter().sum();
    let triples: u64 = (0..graph.node_count())
        .map(|u| {
            let d = graph.degree(u) as u64;
            d * d.saturating_sub(1) / 2
        })
        .sum();
    if triples == 0 {
        0.0
    } else {
        // `tri` already counts each triangle three times.
        tri as f64 / triples as f64
    }
}

pub fn mean_local_clustering(graph: &Graph) -> f64 {
    let n = graph.node_count();
    if n == 0 {
        return 0.0;
    }
    let tri = triangles_per_node(graph);
    let total: f64 = (0..n)
        .map(|u| {
            let d = graph.degree(u) as f64;
            if d < 2.0 {
                0.0
            } else {
                tri[u] as f64 / (d * (d - 1.0) / 2.0)
            }
        })
        .sum();
    total / n as f64
}

pub fn largest_component_fraction(graph: &Graph) -> f64 {
    let n = graph.node_count();
    if n == 0 {
        return 0.0;
    }
    let (count, comp) = graph.connected_components();
    let mut sizes = vec![0usize; count];
    for c in comp {
        sizes[c] += 1;
    }
    *sizes.iter().max().unwrap() as f64 / n as f64
}

/// Discrete power-law MLE for a fixed `xmin`, using the continuous
/// approximation `alpha = 1 + n / sum(ln(x / (xmin - 1/2)))`.
pub fn alpha_mle(samples: &[usize], xmin: usize) -> Result<f64> {
    if xmin == 0 {
        return Err(Error::AlphaUndefined("xmin must be positive".into()));
    }
    let shift = xmin as f64 - 0.5;
    let (n, log_sum) = samples
        .iter()
        .filter(|&&x| x >= xmin)
        .fold((0usize, 0.0f64), |(n, s), &x| (n + 1, s + (x as f64 / shift).ln()));
    if n == 0 || log_sum <= 0.0 {
        return Err(Error::AlphaUndefined(format!("no spread in degrees >= {xmin}")));
    }
    Ok(1.0 + n as f64 / log_sum)
}

/// Kolmogorov–Smirnov distance between the tail `x >= xmin` of a sorted
/// sample and the fitted law `P(X >= x) = ((x - 1/2) / (xmin - 1/2))^(1 - alpha)`.
fn ks_distance(sorted_tail: &[usize], xmin: usize, alpha: f64) -> f64 {
    let n = sorted_tail.len() as f64;
    let shift = xmin as f64 - 0.5;
    let mut d = 0.0f64;
    let mut i = 0;
    while i < sorted_tail.len() {
        let x = sorted_tail[i];
        let mut j = i;
        while j < sorted_tail.len() && sorted_tail[j] == x {
            j += 1;
        }
        let empirical = j as f64 / n;
        let fitted = 1.0 - ((x as f64 + 0.5) / shift).powf(1.0 - alpha);
        d = d.max((empirical - fitted).abs());
        i = j;
    }
    d
}

/// Fits the power-law exponent of a degree distribution.
///
/// With `xmin` given the MLE is taken directly over degrees `>= xmin`.
/// Otherwise every distinct positive degree leaving at least [`MIN_TAIL`]
/// samples and two distinct values above it is tried, and the candidate
/// with the smallest KS distance wins (ties go to the smaller `xmin`).
pub fn fit_power_law(dist: &DegreeDistribution, xmin: Option<usize>) -> Result<PowerLawFit> {
    let samples = dist.samples();
    let check_spread = |tail: &[usize]| -> Result<()> {
        match (tail.first(), tail.last()) {
            (Some(a), Some(b)) if a != b => Ok(()),
            _ => Err(Error::AlphaUndefined(
                "fewer than two distinct degrees in the tail".into(),
            )),
        }
    };

    if let Some(xmin) = xmin {
        let start = samples.partition_point(|&x| x < xmin);
        let tail = &samples[start..];
        check_spread(tail)?;
        let alpha = alpha_mle(tail, xmin)?;
        return Ok(PowerLawFit {
            alpha,
            xmin,
            tail: tail.len(),
            ks: ks_distance(tail, xmin, alpha),
        });
    }

    let mut best: Option<PowerLawFit> = None;
    for &candidate in dist.histogram.keys().filter(|&&d| d > 0) {
        let start = samples.partition_point(|&x| x < candidate);
        let tail = &samples[start..];
        if tail.len() < MIN_TAIL || check_spread(tail).is_err() {
            continue;
        }
        let alpha = alpha_mle(tail, candidate)?;
        let ks = ks_distance(tail, candidate, alpha);
        if best.is_none_or(|b| ks < b.ks) {
            best = Some(PowerLawFit {
                alpha,
                xmin: candidate,
                tail: tail.len(),
                ks,
            });
        }
    }
    best.ok_or_else(|| Error::AlphaUndefined("no admissible xmin".into()))
}

pub fn fit_power_law_alpha(dist: &DegreeDistribution, xmin: Option<usize>) -> Result<f64> {
    fit_power_law(dist, xmin).map(|f| f.alpha)
}

/// All structural statistics at once. A graph whose degrees admit no
/// exponent fit reports `alpha = None` rather than failing.
pub fn metrics_report(graph: &Graph) -> Result<MetricsReport> {
    let nodes = graph.node_count();
    if nodes == 0 {
        return Err(Error::EmptyGraph);
    }
    let edges = graph.edge_count();
    let fit = fit_power_law(&degree_distribution(graph), None).ok();
    Ok(MetricsReport {
        nodes,
        edges,
        edge_node_ratio: edges as f64 / nodes as f64,
        apl: average_path_length(graph)?,
        cc_global: global_clustering_coefficient(graph),
        cc_mean_local: mean_local_clustering(graph),
        alpha: fit.map(|f| f.alpha),
        xmin: fit.map(|f| f.xmin),
        gcc_fraction: largest_component_fraction(graph),
    })
}
