//! Reference community detectors used to close the generate → detect →
//! score loop without external tools.

mod label_propagation;
mod louvain;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

pub use label_propagation::{label_propagation, MAX_SWEEPS};
pub use louvain::louvain;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    LabelPropagation,
    Louvain,
}

impl Algorithm {
    pub const ALL: [Algorithm; 2] = [Algorithm::LabelPropagation, Algorithm::Louvain];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::LabelPropagation => "labelprop",
            Algorithm::Louvain => "louvain",
        }
    }

    pub fn run(self, graph: &Graph, seed: u64) -> Result<DetectionResult> {
        match self {
            Algorithm::LabelPropagation => label_propagation(graph, seed),
            Algorithm::Louvain => louvain(graph, seed),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "labelprop" => Ok(Algorithm::LabelPropagation),
            "louvain" => Ok(Algorithm::Louvain),
            other => Err(Error::InvalidConfig(format!(
                "unknown algorithm '{other}' (expected labelprop or louvain)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionResult {
    pub partition: Partition,
    pub algorithm: Algorithm,
    /// Sweeps for label propagation, aggregation levels for Louvain.
    pub iterations: usize,
    pub modularity: f64,
}
