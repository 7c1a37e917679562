use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Algorithm, DetectionResult};
use crate::community::modularity;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

pub const MAX_SWEEPS: usize = 100;

/// Neighbour label counts for one node, reusing scratch buffers.
struct Tally {
    count: Vec<usize>,
    seen: Vec<usize>,
}

impl Tally {
    fn new(n: usize) -> Self {
        Tally {
            count: vec![0; n],
            seen: Vec::new(),
        }
    }

    /// Labels held by the most neighbours of `u`, in order of first
    /// appearance among the neighbours, plus that maximum count.
    fn majority(&mut self, graph: &Graph, labels: &[usize], u: usize, out: &mut Vec<usize>) -> usize {
        for &v in graph.neighbors(u) {
            let l = labels[v];
            if self.count[l] == 0 {
                self.seen.push(l);
            }
            self.count[l] += 1;
        }
        let best = self.seen.iter().map(|&l| self.count[l]).max().unwrap_or(0);
        out.clear();
        out.extend(self.seen.iter().copied().filter(|&l| self.count[l] == best));
        for &l in &self.seen {
            self.count[l] = 0;
        }
        self.seen.clear();
        best
    }
}

/// Asynchronous label propagation.
///
/// Every node starts with its own label. Each sweep visits the nodes in a
/// fresh random order and gives each the label most common among its
/// neighbours, breaking ties uniformly at random. The run ends once every
/// node holds a majority label, or after [`MAX_SWEEPS`] sweeps.
pub fn label_propagation(graph: &Graph, seed: u64) -> Result<DetectionResult> {
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if graph.edge_count() == 0 {
        return Err(Error::NoEdges);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<usize> = (0..n).collect();
    let mut order: Vec<usize> = (0..n).filter(|&u| graph.degree(u) > 0).collect();
    let mut tally = Tally::new(n);
    let mut candidates = Vec::new();

    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        order.shuffle(&mut rng);
        for &u in &order {
            tally.majority(graph, &labels, u, &mut candidates);
            labels[u] = candidates[rng.random_range(0..candidates.len())];
        }

        let settled = order.iter().all(|&u| {
            tally.majority(graph, &labels, u, &mut candidates);
            candidates.contains(&labels[u])
        });
        if settled {
            break;
        }
    }

    let partition = Partition::from_first_appearance(&labels);
    let q = modularity(graph, &partition)?;
    Ok(DetectionResult {
        partition,
        algorithm: Algorithm::LabelPropagation,
        iterations: sweeps,
        modularity: q,
    })
}
