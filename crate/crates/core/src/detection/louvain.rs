use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Algorithm, DetectionResult};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// Gains within this margin of staying put do not count as improvements.
const MIN_GAIN: f64 = 1e-12;

/// Weighted graph of one Louvain level. Node `i` of a coarse level stands
/// for a community of the level below.
struct Level {
    adj: Vec<Vec<(usize, f64)>>,
    /// Weight of the edges folded inside each node.
    self_loops: Vec<f64>,
    /// Weighted degree, self-loops counted twice.
    strength: Vec<f64>,
    /// Twice the total edge weight.
    two_m: f64,
}

impl Level {
    fn from_graph(graph: &Graph) -> Self {
        let adj: Vec<Vec<(usize, f64)>> = (0..graph.node_count())
            .map(|u| graph.neighbors(u).iter().map(|&v| (v, 1.0)).collect())
            .collect();
        let strength: Vec<f64> = adj.iter().map(|a| a.len() as f64).collect();
        Level {
            two_m: strength.iter().sum(),
            self_loops: vec![0.0; adj.len()],
            adj,
            strength,
        }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    /// Repeated passes of greedy single-node moves. Returns the community of
    /// every node (ids are node ids of community founders) and whether any
    /// node moved.
    fn local_moves(&self, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
        let n = self.len();
        let mut comm: Vec<usize> = (0..n).collect();
        let mut tot = self.strength.clone();
        let mut weight_to = vec![0.0f64; n];
        let mut touched: Vec<usize> = Vec::new();
        let mut order: Vec<usize> = (0..n).collect();
        let mut any_move = false;

        loop {
            order.shuffle(rng);
            let mut moved = false;
            for &i in &order {
                let k = self.strength[i];
                if k == 0.0 {
                    continue;
                }
                let home = comm[i];
                for &(j, w) in &self.adj[i] {
                    let c = comm[j];
                    if weight_to[c] == 0.0 {
                        touched.push(c);
                    }
                    weight_to[c] += w;
                }

                tot[home] -= k;
                let mut best = home;
                let mut best_gain = weight_to[home] - tot[home] * k / self.two_m;
                for &c in &touched {
                    let gain = weight_to[c] - tot[c] * k / self.two_m;
                    if gain > best_gain + MIN_GAIN {
                        best = c;
                        best_gain = gain;
                    }
                }
                tot[best] += k;
                if best != home {
                    comm[i] = best;
                    moved = true;
                }

                for &c in &touched {
                    weight_to[c] = 0.0;
                }
                touched.clear();
            }
            if !moved {
                break;
            }
            any_move = true;
        }
        (comm, any_move)
    }

    /// Collapses each community into one node. `dense[i]` is the new id of
    /// node `i`.
    fn aggregate(&self, dense: &[usize], count: usize) -> Level {
        let mut self_loops = vec![0.0; count];
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); count];
        // Position of each neighbouring community in the row being built.
        let mut slot = vec![usize::MAX; count];
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
        for (i, &c) in dense.iter().enumerate() {
            members[c].push(i);
        }
        for (c, nodes) in members.iter().enumerate() {
            let row = &mut rows[c];
            for &i in nodes {
                self_loops[c] += self.self_loops[i];
                for &(j, w) in &self.adj[i] {
                    let d = dense[j];
                    if d == c {
                        // Seen once from each end.
                        self_loops[c] += w / 2.0;
                    } else if slot[d] == usize::MAX {
                        slot[d] = row.len();
                        row.push((d, w));
                    } else {
                        row[slot[d]].1 += w;
                    }
                }
            }
            for &(d, _) in row.iter() {
                slot[d] = usize::MAX;
            }
        }
        let strength = (0..count)
            .map(|c| 2.0 * self_loops[c] + rows[c].iter().map(|&(_, w)| w).sum::<f64>())
            .collect();
        Level {
            adj: rows,
            self_loops,
            strength,
            two_m: self.two_m,
        }
    }

    /// Modularity of the partition placing every node of this level in its
    /// own community.
    fn singleton_modularity(&self) -> f64 {
        (0..self.len())
            .map(|c| 2.0 * self.self_loops[c] / self.two_m - (self.strength[c] / self.two_m).powi(2))
            .sum()
    }
}

/// Relabels arbitrary community ids to `0..count` by first appearance.
fn compact(comm: &[usize]) -> (Vec<usize>, usize) {
    let mut map = vec![usize::MAX; comm.len()];
    let mut next = 0;
    let dense = comm
        .iter()
        .map(|&c| {
            if map[c] == usize::MAX {
                map[c] = next;
                next += 1;
            }
            map[c]
        })
        .collect();
    (dense, next)
}

/// Multilevel greedy modularity optimisation.
///
/// Each level moves single nodes to the neighbouring community with the best
/// modularity gain until no move helps, then collapses communities into
/// weighted super-nodes. The run stops at the first level where nothing
/// moves. The reported modularity is evaluated on the final coarse graph.
pub fn louvain(graph: &Graph, seed: u64) -> Result<DetectionResult> {
    if graph.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut level = Level::from_graph(graph);
    let mut membership: Vec<usize> = (0..graph.node_count()).collect();
    let mut levels = 0;

    loop {
        let (comm, moved) = level.local_moves(&mut rng);
        if !moved {
            break;
        }
        let (dense, count) = compact(&comm);
        for m in membership.iter_mut() {
            *m = dense[*m];
        }
        level = level.aggregate(&dense, count);
        levels += 1;
    }

    Ok(DetectionResult {
        partition: Partition::from_first_appearance(&membership),
        algorithm: Algorithm::Louvain,
        iterations: levels,
        modularity: level.singleton_modularity(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::community::modularity;

    fn bridged_triangles() -> Graph {
        Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]).unwrap()
    }

    fn clique_ring(cliques: usize, size: usize) -> Graph {
        let n = cliques * size;
        let mut g = Graph::with_nodes(n);
        for c in 0..cliques {
            let base = c * size;
            for u in 0..size {
                for v in u + 1..size {
                    g.add_edge(base + u, base + v).unwrap();
                }
            }
            g.add_edge(base + size - 1, ((c + 1) % cliques) * size).unwrap();
        }
        g
    }

    #[test]
    fn bridged_triangles_every_seed() {
        let g = bridged_triangles();
        for seed in 0..20 {
            let r = louvain(&g, seed).unwrap();
            assert_eq!(r.partition.labels(), &[1, 1, 1, 2, 2, 2], "seed {seed}");
            assert!((r.modularity - 5.0 / 14.0).abs() < 1e-12);
        }
    }

    #[test]
    fn clique_ring_recovered() {
        let g = clique_ring(4, 5);
        let expected: Vec<u32> = (0..20).map(|u| u as u32 / 5 + 1).collect();
        for seed in 0..20 {
            let r = louvain(&g, seed).unwrap();
            assert_eq!(r.partition.labels(), expected.as_slice(), "seed {seed}");
        }
    }

    /// Best modularity over all ways of grouping the four cliques.
    #[test]
    fn clique_ring_grouping_is_optimal() {
        let g = clique_ring(4, 5);
        let groupings: [[u32; 4]; 15] = [
            [1, 1, 1, 1], [1, 1, 1, 2], [1, 1, 2, 1], [1, 1, 2, 2], [1, 1, 2, 3],
            [1, 2, 1, 1], [1, 2, 1, 2], [1, 2, 1, 3], [1, 2, 2, 1], [1, 2, 2, 2],
            [1, 2, 2, 3], [1, 2, 3, 1], [1, 2, 3, 2], [1, 2, 3, 3], [1, 2, 3, 4],
        ];
        let score = |grp: &[u32; 4]| {
            let labels: Vec<u32> = (0..20).map(|u| grp[u / 5]).collect();
            modularity(&g, &Partition::from_dense(labels).unwrap()).unwrap()
        };
        let best = groupings.iter().max_by(|a, b| score(a).total_cmp(&score(b))).unwrap();
        assert_eq!(best, &[1, 2, 3, 4]);
    }

    #[test]
    fn reported_modularity_matches_recomputation() {
        for seed in 0..4 {
            let net = crate::generator::generate(&crate::GeneratorConfig::new(800, 10, 0.5, 0.3, 2, seed)).unwrap();
            let r = louvain(&net.graph, seed).unwrap();
            let q = modularity(&net.graph, &r.partition).unwrap();
            assert!((r.modularity - q).abs() < 1e-12, "{} vs {}", r.modularity, q);
            assert!(r.modularity > 0.0);
            let singletons: Vec<u32> = (1..=800).collect();
            let q0 = modularity(&net.graph, &Partition::from_dense(singletons).unwrap()).unwrap();
            assert!(r.modularity >= q0);
        }
    }

    #[test]
    fn rejects_edgeless() {
        assert!(matches!(louvain(&Graph::with_nodes(3), 0), Err(Error::NoEdges)));
    }

    #[test]
    fn deterministic_per_seed() {
        let g = clique_ring(6, 4);
        assert_eq!(louvain(&g, 5).unwrap(), louvain(&g, 5).unwrap());
    }
}
