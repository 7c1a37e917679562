use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};

/// Assignment of every node to exactly one community, with community ids
/// dense in `1..=count` and every community non-empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<u32>,
    count: u32,
}

impl Partition {
    /// Accepts labels already dense in `1..=k`, every id used.
    pub fn from_dense(labels: Vec<u32>) -> Result<Self> {
        let count = labels.iter().copied().max().unwrap_or(0);
        let mut seen = vec![false; count as usize + 1];
        for &l in &labels {
            if l == 0 {
                return Err(Error::InvalidConfig("community id 0 is reserved".into()));
            }
            seen[l as usize] = true;
        }
        if let Some(missing) = (1..=count).find(|&c| !seen[c as usize]) {
            return Err(Error::UnknownCommunity(missing));
        }
        Ok(Partition { labels, count })
    }

    /// Densifies arbitrary labels in ascending order of the original id.
    /// Returns the partition and the `(original, dense)` mapping.
    pub fn densify(raw: &[u64]) -> (Self, Vec<(u64, u32)>) {
        let mut map: BTreeMap<u64, u32> = raw.iter().map(|&l| (l, 0)).collect();
        for (i, v) in map.values_mut().enumerate() {
            *v = i as u32 + 1;
        }
        let labels = raw.iter().map(|l| map[l]).collect();
        let count = map.len() as u32;
        (Partition { labels, count }, map.into_iter().collect())
    }

    /// Densifies labels by order of first appearance over node ids.
    pub fn from_first_appearance(raw: &[usize]) -> Self {
        let mut map = HashMap::new();
        let labels = raw
            .iter()
            .map(|&l| {
                let next = map.len() as u32 + 1;
                *map.entry(l).or_insert(next)
            })
            .collect();
        Partition {
            labels,
            count: map.len() as u32,
        }
    }

    /// Every node in one community.
    pub fn single(n: usize) -> Self {
        Partition {
            labels: vec![1; n],
            count: u32::from(n > 0),
        }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn community_count(&self) -> u32 {
        self.count
    }

    pub fn label(&self, node: usize) -> u32 {
        self.labels[node]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.count as usize];
        for &l in &self.labels {
            sizes[l as usize - 1] += 1;
        }
        sizes
    }

    pub fn members(&self, community: u32) -> Result<Vec<usize>> {
        self.check(community)?;
        Ok(self
            .labels
            .iter()
            .enumerate()
            .filter(|&(_, &l)| l == community)
            .map(|(u, _)| u)
            .collect())
    }

    pub(crate) fn check(&self, community: u32) -> Result<()> {
        if community == 0 || community > self.count {
            Err(Error::UnknownCommunity(community))
        } else {
            Ok(())
        }
    }

    pub(crate) fn push(&mut self, label: u32) {
        debug_assert!(label >= 1 && label <= self.count);
        self.labels.push(label);
    }

    pub(crate) fn with_count(count: u32) -> Self {
        Partition {
            labels: Vec::new(),
            count,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn densify_sorted_order() {
        let (p, map) = Partition::densify(&[5, 5, 9]);
        assert_eq!(p.labels(), &[1, 1, 2]);
        assert_eq!(map, vec![(5, 1), (9, 2)]);
    }

    #[test]
    fn first_appearance() {
        let p = Partition::from_first_appearance(&[7, 3, 7, 0]);
        assert_eq!(p.labels(), &[1, 2, 1, 3]);
        assert_eq!(p.sizes(), vec![2, 1, 1]);
    }

    #[test]
    fn from_dense_rejects_gaps() {
        assert!(Partition::from_dense(vec![1, 3]).is_err());
        assert!(Partition::from_dense(vec![0, 1]).is_err());
        assert!(Partition::from_dense(vec![2, 1, 2]).is_ok());
    }

    #[test]
    fn unknown_community() {
        let p = Partition::from_dense(vec![1, 2]).unwrap();
        assert!(matches!(p.members(3), Err(Error::UnknownCommunity(3))));
        assert_eq!(p.members(2).unwrap(), vec![1]);
    }
}
