//! Cliques in a bipartite link stream.
//!
//! A clique `(C_top, C_bottom, I)` holds when every top/bottom pair is linked
//! throughout `I`. It is balanced when the two sides differ in size by at
//! most one. The sampler builds balanced cliques greedily; the brute-force
//! oracle enumerates the maximal balanced ones exactly on tiny streams.

mod oracle;
mod sampler;
mod set;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::stream::{BipartiteLinkStream, NodeId, Side};
use crate::time::Time;

pub use oracle::{enumerate_maximal_balanced_bruteforce, BRUTE_FORCE_NODE_LIMIT};
pub use sampler::{
    sample_many, sample_range, sample_trajectory, trajectory_rng, Budget, Sampler, SamplerConfig,
    SubintervalChoice, Trajectory, TrajectoryStep,
};
pub use set::CliqueSet;

/// A clique over stream-local node ids. Node lists are sorted and
/// deduplicated; ordering is by interval, then top nodes, then bottom nodes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clique {
    interval: Interval,
    top: Vec<NodeId>,
    bottom: Vec<NodeId>,
}

impl Clique {
    pub fn new(mut top: Vec<NodeId>, mut bottom: Vec<NodeId>, interval: Interval) -> Self {
        top.sort_unstable();
        top.dedup();
        bottom.sort_unstable();
        bottom.dedup();
        Clique { interval, top, bottom }
    }

    /// Resolves names against `stream`, checking each node's side.
    pub fn from_names<S: AsRef<str>>(
        stream: &BipartiteLinkStream,
        top: &[S],
        bottom: &[S],
        interval: Interval,
    ) -> Result<Self> {
        let resolve = |names: &[S], side: Side| -> Result<Vec<NodeId>> {
            names
                .iter()
                .map(|n| {
                    let id = stream.node(n.as_ref())?;
                    if stream.side(id) != side {
                        return Err(Error::SideViolation(format!(
                            "{} is not a {side} node",
                            n.as_ref()
                        )));
                    }
                    Ok(id)
                })
                .collect()
        };
        Ok(Clique::new(
            resolve(top, Side::Top)?,
            resolve(bottom, Side::Bottom)?,
            interval,
        ))
    }

    pub fn top(&self) -> &[NodeId] {
        &self.top
    }

    pub fn bottom(&self) -> &[NodeId] {
        &self.bottom
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn side(&self, side: Side) -> &[NodeId] {
        match side {
            Side::Top => &self.top,
            Side::Bottom => &self.bottom,
        }
    }

    pub fn size(&self) -> usize {
        self.top.len() + self.bottom.len()
    }

    pub fn duration(&self) -> Time {
        self.interval.duration()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.top.iter().chain(self.bottom.iter()).copied()
    }

    pub fn with_interval(&self, interval: Interval) -> Clique {
        Clique {
            interval,
            top: self.top.clone(),
            bottom: self.bottom.clone(),
        }
    }

    /// Containment order: node sets and interval all included.
    pub fn is_contained_in(&self, other: &Clique) -> bool {
        other.interval.contains(&self.interval)
            && is_sorted_subset(&self.top, &other.top)
            && is_sorted_subset(&self.bottom, &other.bottom)
    }

    pub fn to_named(&self, stream: &BipartiteLinkStream) -> NamedClique {
        let names = |ids: &[NodeId]| ids.iter().map(|&i| stream.name(i).to_owned()).collect();
        NamedClique {
            interval: self.interval,
            top: names(&self.top),
            bottom: names(&self.bottom),
        }
    }
}

fn is_sorted_subset(small: &[NodeId], big: &[NodeId]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.any(|y| y == x))
}

pub fn is_balanced(c: &Clique) -> bool {
    c.top.len().abs_diff(c.bottom.len()) <= 1
}

fn check_nodes(stream: &BipartiteLinkStream, c: &Clique) -> Result<()> {
    for (side, ids) in [(Side::Top, &c.top), (Side::Bottom, &c.bottom)] {
        for &id in ids {
            stream.check(id)?;
            if stream.side(id) != side {
                return Err(Error::SideViolation(format!(
                    "{} listed as {side} but is {}",
                    stream.name(id),
                    stream.side(id)
                )));
            }
        }
    }
    Ok(())
}

/// True iff every pair of `top × bottom` is linked throughout the interval.
pub fn is_clique(stream: &BipartiteLinkStream, c: &Clique) -> Result<bool> {
    check_nodes(stream, c)?;
    Ok(c.top.iter().all(|&u| {
        c.bottom.iter().all(|&v| {
            stream
                .pair(u, v)
                .is_some_and(|set| set.contains_interval(&c.interval))
        })
    }))
}

/// Widens the interval to the maximal one over which all pairs stay linked.
pub fn extend_time(stream: &BipartiteLinkStream, c: &Clique) -> Result<Clique> {
    check_nodes(stream, c)?;
    if c.top.is_empty() || c.bottom.is_empty() {
        return Err(Error::Precondition(
            "extend_time needs both sides non-empty".into(),
        ));
    }
    let common = stream
        .all_pairs_intersection(&c.top, &c.bottom)
        .unwrap_or_default();
    let widened = common
        .interval_containing(&c.interval)
        .ok_or_else(|| Error::NotAClique(format!("{} fails over {}", c.to_named(stream), c.interval)))?;
    Ok(c.with_interval(widened))
}

/// Maximality among balanced cliques: the interval cannot grow, and no single
/// node can join the side(s) allowed by balance while keeping the interval.
/// A balanced clique strictly inside another balanced clique always admits
/// such a one-node step, so this matches the containment definition.
pub fn is_maximal_balanced(stream: &BipartiteLinkStream, c: &Clique) -> Result<bool> {
    if !is_clique(stream, c)? {
        return Err(Error::Precondition(format!("{} is not a clique", c.to_named(stream))));
    }
    if !is_balanced(c) {
        return Err(Error::Precondition(format!("{} is not balanced", c.to_named(stream))));
    }
    if extend_time(stream, c)?.interval != c.interval {
        return Ok(false);
    }
    let sides: &[Side] = match c.top.len().cmp(&c.bottom.len()) {
        std::cmp::Ordering::Less => &[Side::Top],
        std::cmp::Ordering::Greater => &[Side::Bottom],
        std::cmp::Ordering::Equal => &[Side::Top, Side::Bottom],
    };
    for &side in sides {
        let members = c.side(side);
        let opposite = c.side(side.opposite());
        // any joiner is a neighbor of every opposite member, in particular the first
        let pivot = opposite[0];
        for (w, set) in stream.neighbors(pivot) {
            if members.binary_search(&w).is_ok() || !set.contains_interval(&c.interval) {
                continue;
            }
            let joins = opposite[1..].iter().all(|&o| {
                stream
                    .pair(w, o)
                    .is_some_and(|s| s.contains_interval(&c.interval))
            });
            if joins {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A clique with node names, as stored on disk. One per line:
/// `begin,end,top1|top2,bottom1|bottom2` with times in seconds to six decimals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NamedClique {
    pub interval: Interval,
    pub top: Vec<String>,
    pub bottom: Vec<String>,
}

impl NamedClique {
    pub fn new(mut top: Vec<String>, mut bottom: Vec<String>, interval: Interval) -> Self {
        top.sort();
        top.dedup();
        bottom.sort();
        bottom.dedup();
        NamedClique { interval, top, bottom }
    }

    pub fn size(&self) -> usize {
        self.top.len() + self.bottom.len()
    }

    pub fn resolve(&self, stream: &BipartiteLinkStream) -> Result<Clique> {
        Clique::from_names(stream, &self.top, &self.bottom, self.interval)
    }
}

impl fmt::Display for NamedClique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{}",
            self.interval.begin(),
            self.interval.end(),
            self.top.join("|"),
            self.bottom.join("|")
        )
    }
}

impl FromStr for NamedClique {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let fields: Vec<&str> = line.trim_end_matches(['\r', '\n']).split(',').collect();
        if fields.len() != 4 {
            return Err(Error::Parse(format!(
                "clique line needs 4 fields, found {}: {line:?}",
                fields.len()
            )));
        }
        let interval = Interval::new(fields[0].parse()?, fields[1].parse()?)?;
        let nodes = |s: &str| -> Vec<String> {
            if s.is_empty() {
                Vec::new()
            } else {
                s.split('|').map(str::to_owned).collect()
            }
        };
        let (top, bottom) = (nodes(fields[2]), nodes(fields[3]));
        if top.iter().chain(bottom.iter()).any(|n| n.is_empty()) {
            return Err(Error::Parse(format!("empty node name in {line:?}")));
        }
        let parsed = NamedClique::new(top, bottom, interval);
        // canonical lines only: sorted, no duplicates, same time formatting
        if parsed.to_string() != line.trim_end_matches(['\r', '\n']) {
            return Err(Error::Parse(format!("non-canonical clique line {line:?}")));
        }
        Ok(parsed)
    }
}
