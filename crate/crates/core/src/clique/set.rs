use std::collections::BTreeSet;

use crate::clique::Clique;

/// Deduplicated cliques plus the number of insertions that produced them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CliqueSet {
    set: BTreeSet<Clique>,
    total: u64,
    trajectories: u64,
}

impl CliqueSet {
    pub fn new() -> Self {
        CliqueSet::default()
    }

    /// Returns whether the clique was new.
    pub fn insert(&mut self, c: Clique) -> bool {
        self.total += 1;
        self.set.insert(c)
    }

    pub fn contains(&self, c: &Clique) -> bool {
        self.set.contains(c)
    }

    pub fn distinct(&self) -> usize {
        self.set.len()
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    /// Insertions, duplicates included.
    pub fn total_sampled(&self) -> u64 {
        self.total
    }

    pub fn trajectories(&self) -> u64 {
        self.trajectories
    }

    pub(crate) fn add_trajectories(&mut self, n: u64) {
        self.trajectories += n;
    }

    /// Restores counters when reloading a persisted set.
    pub fn with_counters(mut self, total_sampled: u64, trajectories: u64) -> Self {
        self.total = total_sampled.max(self.set.len() as u64);
        self.trajectories = trajectories;
        self
    }

    pub fn merge(&mut self, other: CliqueSet) {
        self.total += other.total;
        self.trajectories += other.trajectories;
        if self.set.len() < other.set.len() {
            let mine = std::mem::replace(&mut self.set, other.set);
            self.set.extend(mine);
        } else {
            self.set.extend(other.set);
        }
    }

    /// Sorted by interval, then nodes.
    pub fn iter(&self) -> impl ExactSizeIterator<Item = &Clique> + DoubleEndedIterator {
        self.set.iter()
    }

    pub fn min_size(&self, min: usize) -> impl Iterator<Item = &Clique> {
        self.set.iter().filter(move |c| c.size() >= min)
    }
}

impl FromIterator<Clique> for CliqueSet {
    fn from_iter<I: IntoIterator<Item = Clique>>(iter: I) -> Self {
        let mut s = CliqueSet::new();
        for c in iter {
            s.insert(c);
        }
        s
    }
}

impl Extend<Clique> for CliqueSet {
    fn extend<I: IntoIterator<Item = Clique>>(&mut self, iter: I) {
        for c in iter {
            self.insert(c);
        }
    }
}

impl<'a> IntoIterator for &'a CliqueSet {
    type Item = &'a Clique;
    type IntoIter = std::collections::btree_set::Iter<'a, Clique>;
    fn into_iter(self) -> Self::IntoIter {
        self.set.iter()
    }
}
