//! Undirected simple graph with dense node ids and O(1) degree-proportional
//! sampling.

use rand::Rng;

use crate::error::{Error, Result};

/// Flat list holding every node id once per incident edge.
///
/// A uniform draw from the pool selects node `u` with probability
/// `degree(u) / (2 * edge_count)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EndpointPool {
    endpoints: Vec<usize>,
}

impl EndpointPool {
    pub fn len(&self) -> usize {
        self.endpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.endpoints.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.endpoints
    }

    /// Draws one endpoint uniformly. Fails on an empty pool.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<usize> {
        if self.endpoints.is_empty() {
            return Err(Error::NoEdges);
        }
        Ok(self.endpoints[rng.random_range(0..self.endpoints.len())])
    }

    fn push_edge(&mut self, u: usize, v: usize) {
        self.endpoints.push(u);
        self.endpoints.push(v);
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    pool: EndpointPool,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph with `n` isolated nodes `0..n`.
    pub fn with_nodes(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
            pool: EndpointPool::default(),
        }
    }

    /// Builds a graph on `n` nodes from an edge iterator, silently dropping
    /// self-loops and repeated edges.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::with_nodes(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_node(&mut self) -> usize {
        self.adjacency.push(Vec::new());
        self.adjacency.len() - 1
    }

    /// Inserts the undirected edge `{u, v}`. Returns `false`, leaving the
    /// graph untouched, for self-loops and edges that already exist.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        self.check(u)?;
        self.check(v)?;
        if u == v || self.has_edge(u, v) {
            return Ok(false);
        }
        self.adjacency[u].push(v);
        self.adjacency[v].push(u);
        self.pool.push_edge(u, v);
        Ok(true)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u >= self.adjacency.len() || v >= self.adjacency.len() {
            return false;
        }
        let (a, b) = if self.adjacency[u].len() <= self.adjacency[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adjacency[a].contains(&b)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.pool.len() / 2
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adjacency[u]
    }

    pub fn endpoint_pool(&self) -> &EndpointPool {
        &self.pool
    }

    /// Each undirected edge once as `(u, v)` with `u < v`, ordered by `u`
    /// then by insertion order of `v` into `u`'s adjacency.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, nbrs)| nbrs.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Node selected with probability proportional to its degree.
    pub fn preferential_select<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<usize> {
        self.pool.sample(rng)
    }

    /// Component id per node, ids assigned in order of lowest member.
    pub fn connected_components(&self) -> (usize, Vec<usize>) {
        let n = self.node_count();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = count;
            stack.push(start);
            while let Some(u) = stack.pop() {
                for &v in &self.adjacency[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = count;
                        stack.push(v);
                    }
                }
            }
            count += 1;
        }
        (count, comp)
    }

    fn check(&self, id: usize) -> Result<()> {
        if id < self.adjacency.len() {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                id,
                node_count: self.adjacency.len(),
            })
        }
    }
}
