//! Exhaustive enumeration of maximal balanced cliques for tiny streams.
//!
//! Walks every pair of non-empty node subsets whose sizes differ by at most
//! one, intersects the presence of all their pairs, and keeps each maximal
//! interval of positive length as a candidate. A candidate survives if no
//! other candidate contains it in node sets and interval. Deliberately
//! naive: it shares nothing with the sampler beyond `IntervalSet::intersect`.

use crate::clique::{Clique, CliqueSet};
use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalSet};
use crate::stream::{BipartiteLinkStream, NodeId};
use crate::time::Time;

pub const BRUTE_FORCE_NODE_LIMIT: usize = 12;

struct Candidate {
    top: u32,
    bottom: u32,
    interval: Interval,
}

impl Candidate {
    fn size(&self) -> u32 {
        self.top.count_ones() + self.bottom.count_ones()
    }

    fn within(&self, other: &Candidate) -> bool {
        self.top & !other.top == 0
            && self.bottom & !other.bottom == 0
            && other.interval.contains(&self.interval)
    }
}

pub fn enumerate_maximal_balanced_bruteforce(
    stream: &BipartiteLinkStream,
    max_total_nodes: usize,
) -> Result<CliqueSet> {
    let limit = max_total_nodes.min(BRUTE_FORCE_NODE_LIMIT);
    if stream.node_count() > limit {
        return Err(Error::TooManyNodes {
            nodes: stream.node_count(),
            limit,
        });
    }
    let tops: Vec<NodeId> = stream.top_nodes().collect();
    let bottoms: Vec<NodeId> = stream.bottom_nodes().collect();

    let mut candidates = Vec::new();
    for tmask in 1u32..(1 << tops.len()) {
        for bmask in 1u32..(1 << bottoms.len()) {
            if tmask.count_ones().abs_diff(bmask.count_ones()) > 1 {
                continue;
            }
            let mut common: Option<IntervalSet> = None;
            'pairs: for (i, &u) in tops.iter().enumerate() {
                if tmask >> i & 1 == 0 {
                    continue;
                }
                for (j, &v) in bottoms.iter().enumerate() {
                    if bmask >> j & 1 == 0 {
                        continue;
                    }
                    let set = stream.pair(u, v).cloned().unwrap_or_default();
                    let next = match common {
                        None => set,
                        Some(c) => c.intersect(&set),
                    };
                    let empty = next.is_empty();
                    common = Some(next);
                    if empty {
                        break 'pairs;
                    }
                }
            }
            for iv in common.unwrap_or_default().iter() {
                if iv.duration() > Time::ZERO {
                    candidates.push(Candidate {
                        top: tmask,
                        bottom: bmask,
                        interval: *iv,
                    });
                }
            }
        }
    }

    // A dominating candidate has strictly more nodes (equal node sets have
    // disjoint maximal intervals), and containment is transitive, so checking
    // against the already-kept larger candidates is enough.
    candidates.sort_by_key(|c| std::cmp::Reverse(c.size()));
    let mut kept: Vec<Candidate> = Vec::new();
    for c in candidates {
        if !kept.iter().any(|k| c.within(k)) {
            kept.push(c);
        }
    }

    let pick = |mask: u32, ids: &[NodeId]| -> Vec<NodeId> {
        ids.iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &id)| id)
            .collect()
    };
    Ok(kept
        .into_iter()
        .map(|c| Clique::new(pick(c.top, &tops), pick(c.bottom, &bottoms), c.interval))
        .collect())
}
