//! Goodness of individual communities, modularity of a partition, and
//! normalized mutual information between partitions.
//!
//! Edge counts are undirected throughout: an edge with both ends in `C`
//! counts once as internal, an edge with one end in `C` once as boundary.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::generator::LabeledNetwork;
use crate::graph::Graph;
use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq)]
pub struct CommunityGoodness {
    pub community: u32,
    pub size: usize,
    pub internal_edges: usize,
    pub boundary_edges: usize,
    /// `f64::INFINITY` when the community has no boundary edges.
    pub separability: f64,
    pub density: f64,
    pub clustering: f64,
    /// Mean of per-node loyalties.
    pub loyalty: f64,
    /// Share of member edge endpoints that stay inside the community,
    /// i.e. the degree-weighted mean loyalty.
    pub loyalty_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoodnessReport {
    pub communities: Vec<CommunityGoodness>,
}

impl GoodnessReport {
    pub fn mean_of(&self, field: impl Fn(&CommunityGoodness) -> f64) -> f64 {
        let n = self.communities.len();
        if n == 0 {
            return f64::NAN;
        }
        self.communities.iter().map(field).sum::<f64>() / n as f64
    }
}

#[derive(Debug, Clone, Default)]
struct EdgeTally {
    internal: Vec<usize>,
    boundary: Vec<usize>,
    degree_sum: Vec<usize>,
}

fn tally(graph: &Graph, partition: &Partition) -> Result<EdgeTally> {
    check_sizes(graph, partition)?;
    let k = partition.community_count() as usize;
    let mut t = EdgeTally {
        internal: vec![0; k],
        boundary: vec![0; k],
        degree_sum: vec![0; k],
    };
    for (u, v) in graph.edges() {
        let (a, b) = (partition.label(u) as usize - 1, partition.label(v) as usize - 1);
        if a == b {
            t.internal[a] += 1;
        } else {
            t.boundary[a] += 1;
            t.boundary[b] += 1;
        }
    }
    for u in 0..graph.node_count() {
        t.degree_sum[partition.label(u) as usize - 1] += graph.degree(u);
    }
    Ok(t)
}

fn check_sizes(graph: &Graph, partition: &Partition) -> Result<()> {
    if graph.node_count() != partition.node_count() {
        return Err(Error::SizeMismatch {
            partition: partition.node_count(),
            graph: graph.node_count(),
        });
    }
    Ok(())
}

/// Internal edges over boundary edges; infinite for an isolated community.
pub fn separability(graph: &Graph, partition: &Partition, c: u32) -> Result<f64> {
    partition.check(c)?;
    let t = tally(graph, partition)?;
    let i = c as usize - 1;
    Ok(ratio_or_inf(t.internal[i], t.boundary[i]))
}

fn ratio_or_inf(internal: usize, boundary: usize) -> f64 {
    if boundary == 0 {
        f64::INFINITY
    } else {
        internal as f64 / boundary as f64
    }
}

/// Internal edges over the `n(n-1)/2` possible; 0 for a singleton.
pub fn density(graph: &Graph, partition: &Partition, c: u32) -> Result<f64> {
    partition.check(c)?;
    let t = tally(graph, partition)?;
    let size = partition.sizes()[c as usize - 1];
    Ok(density_of(t.internal[c as usize - 1], size))
}

fn density_of(internal: usize, size: usize) -> f64 {
    if size < 2 {
        0.0
    } else {
        internal as f64 / (size * (size - 1) / 2) as f64
    }
}

/// Mean local clustering coefficient of the members, measured in the
/// subgraph induced by the community.
pub fn community_clustering(graph: &Graph, partition: &Partition, c: u32) -> Result<f64> {
    check_sizes(graph, partition)?;
    let members = partition.members(c)?;
    Ok(induced_clustering(graph, partition, c, &members, &mut vec![usize::MAX; graph.node_count()]))
}

fn induced_clustering(graph: &Graph, partition: &Partition, c: u32, members: &[usize], mark: &mut [usize]) -> f64 {
    if members.is_empty() {
        return 0.0;
    }
    let total: f64 = members
        .iter()
        .map(|&u| {
            let inside: Vec<usize> = graph
                .neighbors(u)
                .iter()
                .copied()
                .filter(|&v| partition.label(v) == c)
                .collect();
            let k = inside.len();
            if k < 2 {
                return 0.0;
            }
            for &v in &inside {
                mark[v] = u;
            }
            // Each link among the neighbours is seen from both ends.
            let links: usize = inside
                .iter()
                .map(|&v| graph.neighbors(v).iter().filter(|&&w| mark[w] == u).count())
                .sum();
            for &v in &inside {
                mark[v] = usize::MAX;
            }
            (links / 2) as f64 / (k * (k - 1) / 2) as f64
        })
        .sum();
    total / members.len() as f64
}

fn node_loyalty(graph: &Graph, partition: &Partition, u: usize) -> f64 {
    let d = graph.degree(u);
    if d == 0 {
        return 0.0;
    }
    let c = partition.label(u);
    let inside = graph.neighbors(u).iter().filter(|&&v| partition.label(v) == c).count();
    inside as f64 / d as f64
}

/// Mean over members of the fraction of their edges that stay inside.
/// Isolated members contribute 0.
pub fn loyalty(graph: &Graph, partition: &Partition, c: u32) -> Result<f64> {
    check_sizes(graph, partition)?;
    let members = partition.members(c)?;
    Ok(mean_loyalty(graph, partition, &members))
}

fn mean_loyalty(graph: &Graph, partition: &Partition, members: &[usize]) -> f64 {
    if members.is_empty() {
        return 0.0;
    }
    members.iter().map(|&u| node_loyalty(graph, partition, u)).sum::<f64>() / members.len() as f64
}

/// Newman modularity `Q = sum_c [ e_c / m - (d_c / 2m)^2 ]`.
pub fn modularity(graph: &Graph, partition: &Partition) -> Result<f64> {
    let m = graph.edge_count();
    if m == 0 {
        return Err(Error::NoEdges);
    }
    let t = tally(graph, partition)?;
    let m = m as f64;
    Ok(t.internal
        .iter()
        .zip(&t.degree_sum)
        .map(|(&e, &d)| e as f64 / m - (d as f64 / (2.0 * m)).powi(2))
        .sum())
}

/// Normalized mutual information `2 I(a; b) / (H(a) + H(b))`.
///
/// Two single-cluster partitions score 1; a single cluster against any
/// split scores 0.
pub fn nmi(a: &Partition, b: &Partition) -> Result<f64> {
    if a.node_count() != b.node_count() {
        return Err(Error::SizeMismatch {
            partition: b.node_count(),
            graph: a.node_count(),
        });
    }
    let n = a.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut joint: HashMap<(u32, u32), usize> = HashMap::new();
    for (&x, &y) in a.labels().iter().zip(b.labels()) {
        *joint.entry((x, y)).or_insert(0) += 1;
    }
    let sa = a.sizes();
    let sb = b.sizes();
    let nf = n as f64;
    let entropy = |sizes: &[usize]| -> f64 {
        sizes
            .iter()
            .filter(|&&s| s > 0)
            .map(|&s| {
                let p = s as f64 / nf;
                -p * p.ln()
            })
            .sum()
    };
    let (ha, hb) = (entropy(&sa), entropy(&sb));
    if ha + hb == 0.0 {
        return Ok(1.0);
    }
    let mut keys: Vec<_> = joint.into_iter().collect();
    keys.sort_unstable();
    let info: f64 = keys
        .into_iter()
        .map(|((x, y), nxy)| {
            let nxy = nxy as f64;
            let px = sa[x as usize - 1] as f64;
            let py = sb[y as usize - 1] as f64;
            nxy / nf * (nxy * nf / (px * py)).ln()
        })
        .sum();
    Ok((2.0 * info / (ha + hb)).clamp(0.0, 1.0))
}

/// All goodness metrics for every ground-truth community, in id order.
pub fn goodness_report(network: &LabeledNetwork) -> Result<GoodnessReport> {
    goodness_for(&network.graph, &network.ground_truth)
}

pub fn goodness_for(graph: &Graph, partition: &Partition) -> Result<GoodnessReport> {
    let t = tally(graph, partition)?;
    let k = partition.community_count();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); k as usize];
    for u in 0..graph.node_count() {
        members[partition.label(u) as usize - 1].push(u);
    }
    let mut mark = vec![usize::MAX; graph.node_count()];
    let communities = (1..=k)
        .map(|c| {
            let i = c as usize - 1;
            let nodes = &members[i];
            CommunityGoodness {
                community: c,
                size: nodes.len(),
                internal_edges: t.internal[i],
                boundary_edges: t.boundary[i],
                separability: ratio_or_inf(t.internal[i], t.boundary[i]),
                density: density_of(t.internal[i], nodes.len()),
                clustering: induced_clustering(graph, partition, c, nodes, &mut mark),
                loyalty: mean_loyalty(graph, partition, nodes),
                loyalty_ratio: if t.degree_sum[i] == 0 {
                    0.0
                } else {
                    2.0 * t.internal[i] as f64 / t.degree_sum[i] as f64
                },
            }
        })
        .collect();
    Ok(GoodnessReport { communities })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges.iter().copied()).unwrap()
    }

    fn p(labels: &[u32]) -> Partition {
        Partition::from_dense(labels.to_vec()).unwrap()
    }

    fn bridged_triangles() -> Graph {
        g(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
    }

    #[test]
    fn separability_cases() {
        let gr = bridged_triangles();
        let part = p(&[1, 1, 1, 2, 2, 2]);
        assert_eq!(separability(&gr, &part, 1).unwrap(), 3.0);

        let tri = g(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(separability(&tri, &Partition::single(3), 1).unwrap(), f64::INFINITY);

        // Community {0,1,2,3} as two internal edges (0,1),(2,3); each member
        // has one edge leaving to its own outside partner 4..8.
        let gr = g(8, &[(0, 1), (2, 3), (0, 4), (1, 5), (2, 6), (3, 7)]);
        let part = p(&[1, 1, 1, 1, 2, 2, 2, 2]);
        assert_eq!(separability(&gr, &part, 1).unwrap(), 0.5);
        assert!(matches!(separability(&gr, &part, 3), Err(Error::UnknownCommunity(3))));
    }

    #[test]
    fn density_cases() {
        let tri = g(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(density(&tri, &Partition::single(3), 1).unwrap(), 1.0);
        let path4 = g(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(density(&path4, &Partition::single(4), 1).unwrap(), 0.5);
        let gr = g(2, &[(0, 1)]);
        assert_eq!(density(&gr, &p(&[1, 2]), 2).unwrap(), 0.0);
    }

    #[test]
    fn clustering_cases() {
        let tri = g(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(community_clustering(&tri, &Partition::single(3), 1).unwrap(), 1.0);
        let path = g(3, &[(0, 1), (1, 2)]);
        assert_eq!(community_clustering(&path, &Partition::single(3), 1).unwrap(), 0.0);
        let k4e = g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]);
        let c = community_clustering(&k4e, &Partition::single(4), 1).unwrap();
        assert!((c - brute_local_mean(&k4e)).abs() < 1e-15);
        assert!((c - 5.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn clustering_ignores_outside_links() {
        // Path 0-1-2 inside; node 3 outside closes triangles with all of them.
        let gr = g(4, &[(0, 1), (1, 2), (0, 3), (1, 3), (2, 3)]);
        let part = p(&[1, 1, 1, 2]);
        assert_eq!(community_clustering(&gr, &part, 1).unwrap(), 0.0);
    }

    fn brute_local_mean(gr: &Graph) -> f64 {
        let n = gr.node_count();
        let mut total = 0.0;
        for u in 0..n {
            let nb = gr.neighbors(u);
            let k = nb.len();
            if k < 2 {
                continue;
            }
            let mut links = 0;
            for i in 0..k {
                for j in i + 1..k {
                    if gr.has_edge(nb[i], nb[j]) {
                        links += 1;
                    }
                }
            }
            total += links as f64 / (k * (k - 1) / 2) as f64;
        }
        total / n as f64
    }

    #[test]
    fn loyalty_cases() {
        let tri = g(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(loyalty(&tri, &Partition::single(3), 1).unwrap(), 1.0);

        // Node 0: two friends inside (1, 2), one outside (3).
        let gr = g(4, &[(0, 1), (0, 2), (0, 3)]);
        let part = p(&[1, 1, 1, 2]);
        assert!((node_loyalty(&gr, &part, 0) - 2.0 / 3.0).abs() < 1e-15);

        // Community {0, 1}: node 0 fully loyal, node 1 half.
        let gr = g(3, &[(0, 1), (1, 2)]);
        let part = p(&[1, 1, 2]);
        assert_eq!(loyalty(&gr, &part, 1).unwrap(), 0.75);
    }

    #[test]
    fn modularity_cases() {
        let gr = bridged_triangles();
        assert_eq!(modularity(&gr, &Partition::single(6)).unwrap(), 0.0);
        let q = modularity(&gr, &p(&[1, 1, 1, 2, 2, 2])).unwrap();
        assert!((q - 5.0 / 14.0).abs() < 1e-15);
        let tri = g(3, &[(0, 1), (1, 2), (0, 2)]);
        let q = modularity(&tri, &p(&[1, 2, 3])).unwrap();
        assert!((q + 1.0 / 3.0).abs() < 1e-15);
        assert!(matches!(modularity(&Graph::with_nodes(3), &Partition::single(3)), Err(Error::NoEdges)));
    }

    /// Every partition of 6 nodes, as restricted-growth strings.
    fn all_partitions(n: usize) -> Vec<Vec<u32>> {
        fn rec(prefix: &mut Vec<u32>, max: u32, n: usize, out: &mut Vec<Vec<u32>>) {
            if prefix.len() == n {
                out.push(prefix.clone());
                return;
            }
            for l in 1..=max + 1 {
                prefix.push(l);
                rec(prefix, max.max(l), n, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), 0, n, &mut out);
        out
    }

    #[test]
    fn bridged_triangles_optimum_is_the_triangles() {
        let gr = bridged_triangles();
        let parts = all_partitions(6);
        assert_eq!(parts.len(), 203);
        let (best, q) = parts
            .iter()
            .map(|l| (l, modularity(&gr, &p(l)).unwrap()))
            .fold((None, f64::NEG_INFINITY), |(bl, bq), (l, q)| if q > bq { (Some(l), q) } else { (bl, bq) });
        assert_eq!(best.unwrap(), &vec![1, 1, 1, 2, 2, 2]);
        assert!((q - 5.0 / 14.0).abs() < 1e-15);
    }

    #[test]
    fn nmi_cases() {
        let a = p(&[1, 1, 1, 2, 2, 2]);
        assert!((nmi(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(nmi(&Partition::single(6), &a).unwrap(), 0.0);
        assert_eq!(nmi(&Partition::single(6), &Partition::single(6)).unwrap(), 1.0);
        // Frozen from an independent contingency-table evaluation.
        let b = p(&[1, 1, 2, 2, 2, 2]);
        assert!((nmi(&a, &b).unwrap() - 0.478_703_971_385_68).abs() < 1e-12);
        assert!(matches!(nmi(&a, &Partition::single(5)), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn report_rows_and_sentinels() {
        let gr = g(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
        let part = p(&[1, 1, 1, 2, 2, 2]);
        let r = goodness_for(&gr, &part).unwrap();
        assert_eq!(r.communities.len(), 2);
        for row in &r.communities {
            assert_eq!(row.separability, f64::INFINITY);
            assert_eq!(row.loyalty, 1.0);
            assert_eq!(row.density, 1.0);
            assert_eq!(row.clustering, 1.0);
        }
        // The single-community entry points agree with the batch report.
        let gr = bridged_triangles();
        let r = goodness_for(&gr, &part).unwrap();
        for row in &r.communities {
            let c = row.community;
            assert_eq!(row.separability, separability(&gr, &part, c).unwrap());
            assert_eq!(row.density, density(&gr, &part, c).unwrap());
            assert_eq!(row.clustering, community_clustering(&gr, &part, c).unwrap());
            assert_eq!(row.loyalty, loyalty(&gr, &part, c).unwrap());
        }
    }

    fn labels(n: usize, k: u32) -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(1..=k, n)
    }

    proptest! {
        #[test]
        fn nmi_properties(
            (a, b) in (2usize..40).prop_flat_map(|n| (labels(n, 5), labels(n, 4))),
            shift in 1u64..100,
        ) {
            let raw_a: Vec<u64> = a.iter().map(|&x| x as u64).collect();
            let raw_b: Vec<u64> = b.iter().map(|&x| x as u64).collect();
            let (pa, _) = Partition::densify(&raw_a);
            let (pb, _) = Partition::densify(&raw_b);
            let ab = nmi(&pa, &pb).unwrap();
            let ba = nmi(&pb, &pa).unwrap();
            prop_assert!((ab - ba).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&ab));
            if pa.community_count() >= 2 {
                prop_assert!((nmi(&pa, &pa).unwrap() - 1.0).abs() < 1e-12);
            }
            // Relabel a by reversing and shifting the ids.
            let relabeled: Vec<u64> = raw_a.iter().map(|&x| 1000 - x * shift).collect();
            let (pr, _) = Partition::densify(&relabeled);
            prop_assert!((nmi(&pr, &pb).unwrap() - ab).abs() < 1e-12);
        }

        #[test]
        fn modularity_bounds(
            (n, edges) in (2usize..25).prop_flat_map(|n| (Just(n), prop::collection::vec((0..n, 0..n), 1..60))),
            seed_labels in prop::collection::vec(1u64..6, 25),
        ) {
            let gr = Graph::from_edges(n, edges).unwrap();
            prop_assume!(gr.edge_count() > 0);
            let (part, _) = Partition::densify(&seed_labels[..n]);
            let q = modularity(&gr, &part).unwrap();
            prop_assert!((-1.0..=1.0).contains(&q));
            prop_assert_eq!(modularity(&gr, &Partition::single(n)).unwrap(), 0.0);
            let r = goodness_for(&gr, &part).unwrap();
            for row in r.communities {
                prop_assert!((0.0..=1.0).contains(&row.density));
                prop_assert!((0.0..=1.0).contains(&row.loyalty));
                prop_assert!((0.0..=1.0).contains(&row.clustering));
                prop_assert_eq!(row.separability.is_infinite(), row.boundary_edges == 0);
            }
        }
    }
}
