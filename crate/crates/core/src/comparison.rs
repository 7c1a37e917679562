//! Side-by-side comparison of generated networks with published statistics
//! for three real-world networks.

use rayon::prelude::*;

use crate::error::Result;
use crate::format::sig6;
use crate::generator::{generate, generate_holme_kim};
use crate::graph::Graph;
use crate::io::{opt_sig6, Report};
use crate::reference::{Published, ReferenceTables};
use crate::structural::metrics_report;
use crate::sweep::derive_seed;

/// Edges, APL, transitivity and fitted exponent of one generated graph.
type Stats = (usize, f64, f64, Option<f64>);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Proposed,
    HolmeKim,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Proposed => "community-growth",
            Model::HolmeKim => "holme-kim",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measured {
    pub instances: usize,
    pub edges: f64,
    pub apl: f64,
    pub cc: f64,
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub dataset: String,
    pub model: Model,
    pub nodes: usize,
    pub measured: Measured,
    pub published: Published,
    pub note: Option<String>,
}

impl ComparisonRow {
    pub fn apl_rel_dev(&self) -> f64 {
        (self.measured.apl - self.published.apl) / self.published.apl
    }

    pub fn cc_dev(&self) -> f64 {
        self.measured.cc - self.published.cc
    }

    pub fn alpha_dev(&self) -> Option<f64> {
        self.measured.alpha.map(|a| a - self.published.alpha)
    }

    pub fn edge_rel_dev(&self) -> f64 {
        (self.measured.edges - self.published.edges as f64) / self.published.edges as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub version: u32,
    pub rows: Vec<ComparisonRow>,
}

/// Generates `seeds` instances of each model for every dataset and averages
/// edge count, APL, transitivity and fitted exponent.
pub fn run_comparison(tables: &ReferenceTables, seeds: usize, base_seed: u64) -> Result<Comparison> {
    let mut jobs = Vec::new();
    for d in 0..tables.datasets.len() {
        for (k, model) in [Model::Proposed, Model::HolmeKim].into_iter().enumerate() {
            for s in 0..seeds {
                jobs.push((d, model, derive_seed(base_seed, 2 * d + k, s)));
            }
        }
    }
    let measured: Vec<(usize, Model, Result<Stats>)> = jobs
        .par_iter()
        .map(|&(d, model, seed)| {
            let dataset = &tables.datasets[d];
            let graph: Result<Graph> = match model {
                Model::Proposed => generate(&dataset.generator_config(seed)).map(|n| n.graph),
                Model::HolmeKim => generate_holme_kim(dataset.nodes, dataset.holme_kim.m, dataset.holme_kim.pt, seed),
            };
            let stats = graph.and_then(|g| metrics_report(&g)).map(|r| (r.edges, r.apl, r.cc_global, r.alpha));
            (d, model, stats)
        })
        .collect();

    let mut rows = Vec::new();
    for (d, dataset) in tables.datasets.iter().enumerate() {
        for model in [Model::Proposed, Model::HolmeKim] {
            let mut stats = Vec::new();
            for (_, _, r) in measured.iter().filter(|(dd, mm, _)| *dd == d && *mm == model) {
                match r {
                    Ok(s) => stats.push(*s),
                    Err(e) => return Err(crate::Error::Reference(format!("{}: {e}", dataset.name))),
                }
            }
            let n = stats.len() as f64;
            let alphas: Vec<f64> = stats.iter().filter_map(|s| s.3).collect();
            let (published, note) = match model {
                Model::Proposed => (dataset.proposed.published.clone(), dataset.proposed.note.clone()),
                Model::HolmeKim => (dataset.holme_kim.published.clone(), None),
            };
            rows.push(ComparisonRow {
                dataset: dataset.name.clone(),
                model,
                nodes: dataset.nodes,
                measured: Measured {
                    instances: stats.len(),
                    edges: stats.iter().map(|s| s.0 as f64).sum::<f64>() / n,
                    apl: stats.iter().map(|s| s.1).sum::<f64>() / n,
                    cc: stats.iter().map(|s| s.2).sum::<f64>() / n,
                    alpha: (!alphas.is_empty()).then(|| alphas.iter().sum::<f64>() / alphas.len() as f64),
                },
                published,
                note,
            });
        }
    }
    Ok(Comparison {
        version: tables.version,
        rows,
    })
}

impl Report for Comparison {
    fn columns(&self) -> Vec<&'static str> {
        vec![
            "dataset",
            "model",
            "nodes",
            "edges",
            "published_edges",
            "apl",
            "published_apl",
            "apl_rel_dev",
            "cc",
            "published_cc",
            "cc_dev",
            "alpha",
            "published_alpha",
            "alpha_dev",
        ]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.dataset.clone(),
                    r.model.name().into(),
                    r.nodes.to_string(),
                    sig6(r.measured.edges),
                    r.published.edges.to_string(),
                    sig6(r.measured.apl),
                    r.published.apl.to_string(),
                    sig6(r.apl_rel_dev()),
                    sig6(r.measured.cc),
                    r.published.cc.to_string(),
                    sig6(r.cc_dev()),
                    opt_sig6(r.measured.alpha),
                    r.published.alpha.to_string(),
                    opt_sig6(r.alpha_dev()),
                ]
            })
            .collect()
    }

    fn row_key(&self, i: usize) -> Option<String> {
        Some(format!("row.{}", i + 1))
    }
}
