//! Benchmark graphs with planted communities, grown by preferential
//! attachment and triadic closure, together with the measurements used to
//! evaluate them: structural statistics, per-community goodness scores,
//! modularity, normalized mutual information and two reference detectors.
//!
//! The typical loop is generate → measure → detect → score:
//!
//! ```
//! use commbench::{community, detection, generator::{self, GeneratorConfig}, structural};
//!
//! let config = GeneratorConfig::new(300, 5, 0.5, 0.2, 2, 7);
//! let net = generator::generate(&config).unwrap();
//! let report = structural::metrics_report(&net.graph).unwrap();
//! assert_eq!(report.nodes, 300);
//!
//! let found = detection::louvain(&net.graph, 1).unwrap();
//! let score = community::nmi(&net.ground_truth, &found.partition).unwrap();
//! assert!(score > 0.0 && score <= 1.0);
//! ```

pub mod community;
pub mod comparison;
pub mod detection;
pub mod error;
pub mod format;
pub mod generator;
pub mod graph;
pub mod io;
pub mod partition;
pub mod reference;
pub mod structural;
pub mod sweep;

pub use error::{Error, Result};
pub use generator::{GeneratorConfig, LabeledNetwork};
pub use graph::Graph;
pub use partition::Partition;
