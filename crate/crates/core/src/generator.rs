//! Growth model producing graphs with planted communities.
//!
//! Generation has two phases. Setup creates one triangle per community and
//! labels its three nodes with the community id. Growth then adds nodes one
//! at a time until the target size is reached. Each new node:
//!
//! 1. attaches to an anchor chosen by preferential attachment over the whole
//!    graph and inherits the anchor's community;
//! 2. places `m - 1` further edges. Each is independently designated
//!    inter-community with probability `mu` (intra otherwise), and its
//!    partner is drawn with probability `pt` uniformly from the anchor's
//!    neighbours (triadic closure) or otherwise by preferential attachment,
//!    in both cases restricted to the designated community class.
//!
//! When the class restriction leaves no eligible partner the draw falls back
//! first to class-restricted preferential attachment (for triad draws) and
//! then to unrestricted preferential attachment. Fallbacks and skipped edges
//! are counted in [`Diagnostics`].
//!
//! [`generate_holme_kim`] implements the community-free baseline.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// Draws from the endpoint pool before giving up on a constrained sample.
const MAX_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorConfig {
    /// Target node count.
    pub nodes: usize,
    /// Number of planted communities.
    pub communities: usize,
    /// Probability that a non-anchor edge closes a triad.
    pub pt: f64,
    /// Probability that a non-anchor edge leaves the new node's community.
    pub mu: f64,
    /// Edges placed by each new node, the anchor edge included.
    pub m: usize,
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn new(nodes: usize, communities: usize, pt: f64, mu: f64, m: usize, seed: u64) -> Self {
        GeneratorConfig {
            nodes,
            communities,
            pt,
            mu,
            m,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.communities < 1 {
            return fail("communities must be at least 1".into());
        }
        if self.nodes < 3 * self.communities {
            return fail(format!(
                "nodes ({}) must be at least 3 x communities ({})",
                self.nodes,
                3 * self.communities
            ));
        }
        if !(0.0..=1.0).contains(&self.pt) {
            return fail(format!("pt ({}) must lie in [0, 1]", self.pt));
        }
        if !(0.0..=1.0).contains(&self.mu) {
            return fail(format!("mu ({}) must lie in [0, 1]", self.mu));
        }
        if self.m < 1 {
            return fail("m must be at least 1".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagnostics {
    /// Triad draws with no eligible neighbour, redone as class-restricted
    /// preferential attachment.
    pub triad_fallbacks: usize,
    /// Draws with no eligible partner in the designated class, redone
    /// without the class restriction.
    pub class_fallbacks: usize,
    /// Edges abandoned after repeated collisions.
    pub skipped_edges: usize,
    /// Nodes that were born with fewer than `m` edges.
    pub deficit_nodes: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct LabeledNetwork {
    pub graph: Graph,
    pub ground_truth: Partition,
    pub config: GeneratorConfig,
    pub diagnostics: Diagnostics,
}

impl LabeledNetwork {
    /// Edges whose endpoints carry different ground-truth labels.
    pub fn inter_community_edges(&self) -> usize {
        self.graph
            .edges()
            .filter(|&(u, v)| self.ground_truth.label(u) != self.ground_truth.label(v))
            .count()
    }
}

#[derive(Debug, Clone, Copy)]
enum Class {
    Same(u32),
    Other(u32),
}

impl Class {
    fn admits(self, label: u32) -> bool {
        match self {
            Class::Same(l) => label == l,
            Class::Other(l) => label != l,
        }
    }
}

/// One triangle per community; triangle `k` holds nodes `3(k-1)..3k` and is
/// labelled `k`.
pub fn setup_triads(config: &GeneratorConfig) -> Result<LabeledNetwork> {
    config.validate()?;
    let sigma = config.communities;
    let mut graph = Graph::with_nodes(3 * sigma);
    let mut truth = Partition::with_count(sigma as u32);
    for k in 0..sigma {
        let base = 3 * k;
        graph.add_edge(base, base + 1)?;
        graph.add_edge(base + 1, base + 2)?;
        graph.add_edge(base, base + 2)?;
        for _ in 0..3 {
            truth.push(k as u32 + 1);
        }
    }
    Ok(LabeledNetwork {
        graph,
        ground_truth: truth,
        config: *config,
        diagnostics: Diagnostics::default(),
    })
}

/// Adds one node and its edges to `net`.
pub fn grow_step<R: Rng + ?Sized>(net: &mut LabeledNetwork, rng: &mut R) -> Result<()> {
    let LabeledNetwork {
        graph,
        ground_truth,
        config,
        diagnostics,
    } = net;

    let anchor = graph.preferential_select(rng)?;
    let label = ground_truth.label(anchor);
    let node = graph.add_node();
    ground_truth.push(label);
    graph.add_edge(node, anchor)?;

    let mut placed = 1;
    for _ in 1..config.m {
        let class = if rng.random_bool(config.mu) {
            Class::Other(label)
        } else {
            Class::Same(label)
        };

        let mut partner = if rng.random_bool(config.pt) {
            let p = triad_partner(graph, ground_truth, node, anchor, class, rng);
            if p.is_none() {
                diagnostics.triad_fallbacks += 1;
                class_preferential(graph, ground_truth, node, class, rng)
            } else {
                p
            }
        } else {
            class_preferential(graph, ground_truth, node, class, rng)
        };
        if partner.is_none() {
            diagnostics.class_fallbacks += 1;
            partner = global_preferential(graph, node, rng);
        }

        match partner {
            Some(v) => {
                graph.add_edge(node, v)?;
                placed += 1;
            }
            None => diagnostics.skipped_edges += 1,
        }
    }
    if placed < config.m {
        diagnostics.deficit_nodes.push(node);
    }
    Ok(())
}

pub fn generate(config: &GeneratorConfig) -> Result<LabeledNetwork> {
    let mut net = setup_triads(config)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    while net.graph.node_count() < config.nodes {
        grow_step(&mut net, &mut rng)?;
    }
    Ok(net)
}

fn eligible(graph: &Graph, node: usize, v: usize) -> bool {
    v != node && !graph.has_edge(node, v)
}

fn triad_partner<R: Rng + ?Sized>(
    graph: &Graph,
    truth: &Partition,
    node: usize,
    anchor: usize,
    class: Class,
    rng: &mut R,
) -> Option<usize> {
    let candidates: Vec<usize> = graph
        .neighbors(anchor)
        .iter()
        .copied()
        .filter(|&v| eligible(graph, node, v) && class.admits(truth.label(v)))
        .collect();
    if candidates.is_empty() {
        None
    } else {
        Some(candidates[rng.random_range(0..candidates.len())])
    }
}

/// Degree-proportional draw among eligible nodes of `class`: rejection
/// sampling from the endpoint pool, then an explicit weighted draw over the
/// class when rejection keeps failing.
fn class_preferential<R: Rng + ?Sized>(
    graph: &Graph,
    truth: &Partition,
    node: usize,
    class: Class,
    rng: &mut R,
) -> Option<usize> {
    let pool = graph.endpoint_pool().as_slice();
    for _ in 0..MAX_ATTEMPTS {
        let v = pool[rng.random_range(0..pool.len())];
        if class.admits(truth.label(v)) && eligible(graph, node, v) {
            return Some(v);
        }
    }

    let candidates: Vec<usize> = (0..graph.node_count())
        .filter(|&v| graph.degree(v) > 0 && class.admits(truth.label(v)) && eligible(graph, node, v))
        .collect();
    let total: usize = candidates.iter().map(|&v| graph.degree(v)).sum();
    if total == 0 {
        return None;
    }
    let mut ticket = rng.random_range(0..total);
    for v in candidates {
        let d = graph.degree(v);
        if ticket < d {
            return Some(v);
        }
        ticket -= d;
    }
    unreachable!("ticket exceeds total weight")
}

fn global_preferential<R: Rng + ?Sized>(graph: &Graph, node: usize, rng: &mut R) -> Option<usize> {
    let pool = graph.endpoint_pool().as_slice();
    (0..MAX_ATTEMPTS)
        .map(|_| pool[rng.random_range(0..pool.len())])
        .find(|&v| eligible(graph, node, v))
}

/// Holme–Kim growth: a seed clique on `m + 1` nodes, then each new node
/// makes `m` edges. The first goes to a preferentially chosen node; each
/// later edge closes a triad through the most recent preferential target
/// with probability `pt`, otherwise it is another preferential draw.
pub fn generate_holme_kim(nodes: usize, m: usize, pt: f64, seed: u64) -> Result<Graph> {
    if m < 1 {
        return Err(Error::InvalidConfig("m must be at least 1".into()));
    }
    if nodes <= m {
        return Err(Error::InvalidConfig(format!(
            "nodes ({nodes}) must exceed m ({m})"
        )));
    }
    if !(0.0..=1.0).contains(&pt) {
        return Err(Error::InvalidConfig(format!("pt ({pt}) must lie in [0, 1]")));
    }

    let mut graph = Graph::with_nodes(m + 1);
    for u in 0..=m {
        for v in u + 1..=m {
            graph.add_edge(u, v)?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while graph.node_count() < nodes {
        let node = graph.add_node();
        let mut last_pa = match global_preferential(&graph, node, &mut rng) {
            Some(v) => v,
            None => continue,
        };
        graph.add_edge(node, last_pa)?;
        for _ in 1..m {
            if rng.random_bool(pt) {
                let candidates: Vec<usize> = graph
                    .neighbors(last_pa)
                    .iter()
                    .copied()
                    .filter(|&v| eligible(&graph, node, v))
                    .collect();
                if !candidates.is_empty() {
                    let v = candidates[rng.random_range(0..candidates.len())];
                    graph.add_edge(node, v)?;
                    continue;
                }
            }
            if let Some(v) = global_preferential(&graph, node, &mut rng) {
                graph.add_edge(node, v)?;
                last_pa = v;
            }
        }
    }
    Ok(graph)
}
