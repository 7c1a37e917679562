//! Published reference statistics for the real-world comparison, loaded
//! from an embedded data file.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::generator::GeneratorConfig;

const DATA: &str = include_str!("../data/reference_tables.toml");

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct Published {
    pub edges: usize,
    pub apl: f64,
    pub cc: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct HolmeKimRow {
    pub pt: f64,
    pub m: usize,
    #[serde(flatten)]
    pub published: Published,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ProposedRow {
    pub communities: usize,
    pub pt: f64,
    pub mu: f64,
    pub m: usize,
    #[serde(flatten)]
    pub published: Published,
    #[serde(default)]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct Dataset {
    pub key: String,
    pub name: String,
    pub nodes: usize,
    pub real: Published,
    pub holme_kim: HolmeKimRow,
    pub proposed: ProposedRow,
}

impl Dataset {
    pub fn generator_config(&self, seed: u64) -> GeneratorConfig {
        let p = &self.proposed;
        GeneratorConfig::new(self.nodes, p.communities, p.pt, p.mu, p.m, seed)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ReferenceTables {
    pub version: u32,
    #[serde(rename = "dataset")]
    pub datasets: Vec<Dataset>,
}

impl ReferenceTables {
    pub fn embedded() -> Result<Self> {
        toml::from_str(DATA).map_err(|e| Error::Reference(e.to_string()))
    }

    pub fn dataset(&self, key: &str) -> Option<&Dataset> {
        self.datasets.iter().find(|d| d.key == key)
    }
}
