//! Parameter sweeps: every combination of node count, community count,
//! triad probability and mixing parameter, several seeded instances per
//! combination, each generated, measured and run through both detectors.

use rayon::prelude::*;
use serde::Deserialize;

use crate::community::{goodness_report, modularity, nmi};
use crate::detection::Algorithm;
use crate::error::{Error, Result};
use crate::format::sig6;
use crate::generator::{generate, GeneratorConfig};
use crate::io::{opt_sig6, Report};
use crate::structural::metrics_report;

fn default_m() -> usize {
    2
}

fn default_instances() -> usize {
    5
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub nodes: Vec<usize>,
    pub communities: Vec<usize>,
    pub pt: Vec<f64>,
    pub mu: Vec<f64>,
    #[serde(default = "default_m")]
    pub m: usize,
    #[serde(default = "default_instances")]
    pub instances: usize,
    #[serde(default)]
    pub base_seed: u64,
}

impl SweepSpec {
    /// The full experimental grid: 3 sizes x 4 community counts x 5 triad
    /// probabilities x 4 mixing values, `m = 2`, 5 instances per cell.
    pub fn full(base_seed: u64) -> Self {
        SweepSpec {
            nodes: vec![1000, 2000, 4000],
            communities: vec![10, 20, 30, 40],
            pt: vec![0.1, 0.3, 0.5, 0.7, 0.9],
            mu: vec![0.2, 0.4, 0.6, 0.8],
            m: 2,
            instances: 5,
            base_seed,
        }
    }

    /// A reduced grid that runs in seconds.
    pub fn lite(base_seed: u64) -> Self {
        SweepSpec {
            nodes: vec![1000],
            communities: vec![10, 20],
            pt: vec![0.1, 0.5, 0.9],
            mu: vec![0.2, 0.4, 0.6, 0.8],
            m: 2,
            instances: 3,
            base_seed,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: SweepSpec = toml::from_str(text).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let empty = [
            ("nodes", self.nodes.is_empty()),
            ("communities", self.communities.is_empty()),
            ("pt", self.pt.is_empty()),
            ("mu", self.mu.is_empty()),
        ];
        if let Some((name, _)) = empty.iter().find(|(_, e)| *e) {
            return Err(Error::InvalidConfig(format!("sweep list '{name}' is empty")));
        }
        if self.instances == 0 {
            return Err(Error::InvalidConfig("instances must be at least 1".into()));
        }
        Ok(())
    }

    /// Cell parameters in canonical order (nodes outermost, mu innermost).
    /// Seeds are left at 0; see [`derive_seed`].
    pub fn cells(&self) -> Vec<GeneratorConfig> {
        let mut out = Vec::new();
        for &n in &self.nodes {
            for &c in &self.communities {
                for &pt in &self.pt {
                    for &mu in &self.mu {
                        out.push(GeneratorConfig::new(n, c, pt, mu, self.m, 0));
                    }
                }
            }
        }
        out
    }

    pub fn total_runs(&self) -> usize {
        self.cells().len() * self.instances
    }
}

/// `base ^ mix(cell, instance)`, with a SplitMix64 finaliser as the mix.
pub fn derive_seed(base: u64, cell: usize, instance: usize) -> u64 {
    let mut z = ((cell as u64) << 32 | instance as u64).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    base ^ (z ^ (z >> 31))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunMetrics {
    pub edges: usize,
    pub apl: f64,
    pub cc_global: f64,
    pub alpha: Option<f64>,
    pub gcc_fraction: f64,
    pub modularity: f64,
    pub separability: f64,
    pub density: f64,
    pub clustering: f64,
    pub loyalty: f64,
    pub nmi_labelprop: f64,
    pub nmi_louvain: f64,
}

/// Generates one network and takes every measurement reported by a sweep.
pub fn run_instance(config: &GeneratorConfig) -> Result<RunMetrics> {
    let net = generate(config)?;
    let metrics = metrics_report(&net.graph)?;
    let goodness = goodness_report(&net)?;
    let score = |algo: Algorithm| -> Result<f64> {
        let found = algo.run(&net.graph, config.seed)?;
        nmi(&net.ground_truth, &found.partition)
    };
    Ok(RunMetrics {
        edges: metrics.edges,
        apl: metrics.apl,
        cc_global: metrics.cc_global,
        alpha: metrics.alpha,
        gcc_fraction: metrics.gcc_fraction,
        modularity: modularity(&net.graph, &net.ground_truth)?,
        separability: goodness.mean_of(|c| c.separability),
        density: goodness.mean_of(|c| c.density),
        clustering: goodness.mean_of(|c| c.clustering),
        loyalty: goodness.mean_of(|c| c.loyalty),
        nmi_labelprop: score(Algorithm::LabelPropagation)?,
        nmi_louvain: score(Algorithm::Louvain)?,
    })
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub cell: usize,
    pub instance: usize,
    pub config: GeneratorConfig,
    pub result: std::result::Result<RunMetrics, String>,
}

#[derive(Debug, Clone)]
pub struct SweepTable {
    pub spec: SweepSpec,
    /// Cell-major, instance-minor.
    pub runs: Vec<RunOutcome>,
}

impl SweepTable {
    pub fn failures(&self) -> usize {
        self.runs.iter().filter(|r| r.result.is_err()).count()
    }

    /// Per-cell means over the successful instances, `None` when every
    /// instance of the cell failed.
    pub fn aggregates(&self) -> Vec<(GeneratorConfig, Option<RunMetrics>, usize)> {
        self.runs
            .chunks(self.spec.instances)
            .map(|chunk| {
                let ok: Vec<&RunMetrics> = chunk.iter().filter_map(|r| r.result.as_ref().ok()).collect();
                let failed = chunk.len() - ok.len();
                let mut config = chunk[0].config;
                config.seed = 0;
                (config, mean_metrics(&ok), failed)
            })
            .collect()
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (n, s) = values.fold((0usize, 0.0), |(n, s), v| (n + 1, s + v));
    s / n as f64
}

fn mean_metrics(runs: &[&RunMetrics]) -> Option<RunMetrics> {
    if runs.is_empty() {
        return None;
    }
    let alphas: Vec<f64> = runs.iter().filter_map(|r| r.alpha).collect();
    Some(RunMetrics {
        edges: (mean(runs.iter().map(|r| r.edges as f64))).round() as usize,
        apl: mean(runs.iter().map(|r| r.apl)),
        cc_global: mean(runs.iter().map(|r| r.cc_global)),
        alpha: (!alphas.is_empty()).then(|| mean(alphas.into_iter())),
        gcc_fraction: mean(runs.iter().map(|r| r.gcc_fraction)),
        modularity: mean(runs.iter().map(|r| r.modularity)),
        separability: mean(runs.iter().map(|r| r.separability)),
        density: mean(runs.iter().map(|r| r.density)),
        clustering: mean(runs.iter().map(|r| r.clustering)),
        loyalty: mean(runs.iter().map(|r| r.loyalty)),
        nmi_labelprop: mean(runs.iter().map(|r| r.nmi_labelprop)),
        nmi_louvain: mean(runs.iter().map(|r| r.nmi_louvain)),
    })
}

/// Runs every (cell, instance) of `spec` on a pool of `jobs` threads.
/// Failures are recorded per run rather than aborting the sweep.
pub fn run_sweep(spec: &SweepSpec, jobs: usize) -> Result<SweepTable> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let tasks: Vec<(usize, usize, GeneratorConfig)> = spec
        .cells()
        .into_iter()
        .enumerate()
        .flat_map(|(cell, base)| {
            (0..spec.instances).map(move |instance| {
                let mut config = base;
                config.seed = derive_seed(spec.base_seed, cell, instance);
                (cell, instance, config)
            })
        })
        .collect();
    let runs = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(cell, instance, config)| RunOutcome {
                cell,
                instance,
                config,
                result: run_instance(&config).map_err(|e| e.to_string()),
            })
            .collect()
    });
    Ok(SweepTable {
        spec: spec.clone(),
        runs,
    })
}

const SWEEP_COLUMNS: [&str; 22] = [
    "cell",
    "instance",
    "aggregate",
    "nodes",
    "communities",
    "pt",
    "mu",
    "m",
    "seed",
    "edges",
    "apl",
    "cc_global",
    "alpha",
    "gcc_fraction",
    "modularity",
    "separability",
    "density",
    "clustering",
    "loyalty",
    "nmi_labelprop",
    "nmi_louvain",
    "error",
];

fn metric_fields(m: Option<&RunMetrics>) -> Vec<String> {
    match m {
        Some(m) => vec![
            m.edges.to_string(),
            sig6(m.apl),
            sig6(m.cc_global),
            opt_sig6(m.alpha),
            sig6(m.gcc_fraction),
            sig6(m.modularity),
            sig6(m.separability),
            sig6(m.density),
            sig6(m.clustering),
            sig6(m.loyalty),
            sig6(m.nmi_labelprop),
            sig6(m.nmi_louvain),
        ],
        None => vec![String::new(); 12],
    }
}

fn param_fields(c: &GeneratorConfig) -> [String; 5] {
    [
        c.nodes.to_string(),
        c.communities.to_string(),
        c.pt.to_string(),
        c.mu.to_string(),
        c.m.to_string(),
    ]
}

impl Report for SweepTable {
    fn columns(&self) -> Vec<&'static str> {
        SWEEP_COLUMNS.to_vec()
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let mut rows = Vec::with_capacity(self.runs.len() + self.runs.len() / self.spec.instances);
        let aggregates = self.aggregates();
        for (chunk, (config, agg, failed)) in self.runs.chunks(self.spec.instances).zip(aggregates) {
            for run in chunk {
                let mut row = vec![run.cell.to_string(), run.instance.to_string(), "0".into()];
                row.extend(param_fields(&run.config));
                row.push(run.config.seed.to_string());
                row.extend(metric_fields(run.result.as_ref().ok()));
                row.push(match &run.result {
                    Ok(_) => String::new(),
                    Err(e) => e.replace([',', '\n'], ";"),
                });
                rows.push(row);
            }
            let mut row = vec![chunk[0].cell.to_string(), "all".into(), "1".into()];
            row.extend(param_fields(&config));
            row.push(String::new());
            row.extend(metric_fields(agg.as_ref()));
            row.push(if failed > 0 {
                format!("failed_instances={failed}")
            } else {
                String::new()
            });
            rows.push(row);
        }
        rows
    }

    fn row_key(&self, i: usize) -> Option<String> {
        Some(format!("row.{}", i + 1))
    }
}
