//! The bipartite link stream `L = (T, top, bottom, E)`.
//!
//! `E` is stored per top/bottom pair as a canonical [`IntervalSet`]. Nodes are
//! interned to dense [`NodeId`]s: top nodes first, then bottom nodes, each side
//! in lexicographic name order, so sorting ids within a side sorts names.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{PacketRecord, PartitionRule};
use crate::interval::{Interval, IntervalSet};
use crate::time::Time;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Top,
    Bottom,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Top => Side::Bottom,
            Side::Bottom => Side::Top,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Top => "top",
            Side::Bottom => "bottom",
        })
    }
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "top" => Ok(Side::Top),
            "bottom" => Ok(Side::Bottom),
            other => Err(Error::Parse(format!("unknown side {other:?} (expected top or bottom)"))),
        }
    }
}

/// Dense node handle, valid only for the stream that issued it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One maximal interval of one pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Link {
    pub begin: Time,
    pub end: Time,
    pub top: NodeId,
    pub bottom: NodeId,
}

impl Link {
    pub fn duration(&self) -> Time {
        self.end - self.begin
    }
}

#[derive(Debug, Clone)]
struct Node {
    name: String,
    side: Side,
    /// Sorted by neighbor id; second field indexes `pairs`.
    neighbors: Vec<(NodeId, u32)>,
}

#[derive(Debug, Clone)]
struct Pair {
    top: NodeId,
    bottom: NodeId,
    set: IntervalSet,
}

#[derive(Debug, Clone)]
pub struct BipartiteLinkStream {
    timespan: Interval,
    nodes: Vec<Node>,
    n_top: usize,
    by_name: HashMap<String, NodeId>,
    pairs: Vec<Pair>,
}

/// Collects nodes and pair interval sets, then freezes them into a stream.
#[derive(Debug, Clone)]
pub struct StreamBuilder {
    timespan: Interval,
    top: BTreeSet<String>,
    bottom: BTreeSet<String>,
    pairs: BTreeMap<(String, String), Vec<Interval>>,
}

impl StreamBuilder {
    pub fn new(timespan: Interval) -> Self {
        StreamBuilder {
            timespan,
            top: BTreeSet::new(),
            bottom: BTreeSet::new(),
            pairs: BTreeMap::new(),
        }
    }

    pub fn top(&mut self, name: &str) -> &mut Self {
        self.top.insert(name.to_owned());
        self
    }

    pub fn bottom(&mut self, name: &str) -> &mut Self {
        self.bottom.insert(name.to_owned());
        self
    }

    /// Adds presence intervals for a pair; repeated calls accumulate.
    pub fn link(
        &mut self,
        top: &str,
        bottom: &str,
        intervals: impl IntoIterator<Item = Interval>,
    ) -> &mut Self {
        self.top(top);
        self.bottom(bottom);
        self.pairs
            .entry((top.to_owned(), bottom.to_owned()))
            .or_default()
            .extend(intervals);
        self
    }

    pub fn build(&self) -> Result<BipartiteLinkStream> {
        if let Some(both) = self.top.intersection(&self.bottom).next() {
            return Err(Error::SideViolation(format!(
                "node {both:?} is declared on both sides"
            )));
        }
        let mut nodes: Vec<Node> = Vec::with_capacity(self.top.len() + self.bottom.len());
        let mut by_name = HashMap::with_capacity(nodes.capacity());
        for (side, names) in [(Side::Top, &self.top), (Side::Bottom, &self.bottom)] {
            for name in names {
                by_name.insert(name.clone(), NodeId(nodes.len() as u32));
                nodes.push(Node {
                    name: name.clone(),
                    side,
                    neighbors: Vec::new(),
                });
            }
        }
        let mut pairs = Vec::with_capacity(self.pairs.len());
        for ((t, b), raw) in &self.pairs {
            let set = IntervalSet::normalize(raw.iter().copied());
            if let Some(hull) = set.hull() {
                if !self.timespan.contains(&hull) {
                    return Err(Error::Precondition(format!(
                        "pair ({t}, {b}) has presence {set} outside timespan {}",
                        self.timespan
                    )));
                }
            }
            if set.is_empty() {
                continue;
            }
            pairs.push(Pair {
                top: by_name[t],
                bottom: by_name[b],
                set,
            });
        }
        Ok(BipartiteLinkStream::assemble(self.timespan, nodes, pairs))
    }
}

impl BipartiteLinkStream {
    fn assemble(timespan: Interval, mut nodes: Vec<Node>, pairs: Vec<Pair>) -> Self {
        let n_top = nodes.iter().take_while(|n| n.side == Side::Top).count();
        for (idx, p) in pairs.iter().enumerate() {
            nodes[p.top.index()].neighbors.push((p.bottom, idx as u32));
            nodes[p.bottom.index()].neighbors.push((p.top, idx as u32));
        }
        for n in &mut nodes {
            n.neighbors.sort_unstable();
        }
        let by_name = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.name.clone(), NodeId(i as u32)))
            .collect();
        BipartiteLinkStream {
            timespan,
            nodes,
            n_top,
            by_name,
            pairs,
        }
    }

    /// Builds the stream from raw packets: each packet at `t` between `u`
    /// and `v` makes the pair present over `[t - half_window, t + half_window]`,
    /// in either direction. The timespan defaults to the hull of all padded
    /// packet windows; `clamp` replaces it and clips every pair to it.
    pub fn from_packets(
        packets: &[PacketRecord],
        half_window: Time,
        partition: &PartitionRule,
        clamp: Option<Interval>,
    ) -> Result<Self> {
        if half_window < Time::ZERO {
            return Err(Error::Precondition("half_window must be non-negative".into()));
        }
        if packets.is_empty() {
            return Err(Error::EmptyTrace);
        }
        let mut side_cache: HashMap<String, Side> = HashMap::new();
        let mut side_of = |name: &str| -> Result<Side> {
            if let Some(s) = side_cache.get(name) {
                return Ok(*s);
            }
            let s = partition
                .side_of(name)
                .ok_or_else(|| Error::UnassignedNode(name.to_owned()))?;
            side_cache.insert(name.to_owned(), s);
            Ok(s)
        };
        let mut raw: HashMap<(String, String), Vec<Interval>> = HashMap::new();
        let (mut lo, mut hi) = (Time::MAX, Time::MIN);
        for (i, p) in packets.iter().enumerate() {
            let (ss, ds) = (side_of(&p.src)?, side_of(&p.dst)?);
            if ss == ds {
                return Err(Error::SameSidePacket {
                    line: i + 1,
                    row: p.to_string(),
                    side: ss.to_string(),
                });
            }
            let (t, b) = if ss == Side::Top {
                (&p.src, &p.dst)
            } else {
                (&p.dst, &p.src)
            };
            let iv = Interval::new(p.timestamp - half_window, p.timestamp + half_window)?;
            lo = lo.min(iv.begin());
            hi = hi.max(iv.end());
            raw.entry((t.clone(), b.clone())).or_default().push(iv);
        }
        let timespan = match clamp {
            Some(c) => c,
            None => Interval::new(lo, hi)?,
        };
        let mut builder = StreamBuilder::new(timespan);
        for ((t, b), ivs) in raw {
            let set = IntervalSet::normalize(ivs).clip(&timespan);
            if !set.is_empty() {
                builder.link(&t, &b, set.intervals().iter().copied());
            }
        }
        builder.build()
    }

    pub fn timespan(&self) -> Interval {
        self.timespan
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn top_count(&self) -> usize {
        self.n_top
    }

    pub fn bottom_count(&self) -> usize {
        self.nodes.len() - self.n_top
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn top_nodes(&self) -> impl ExactSizeIterator<Item = NodeId> + '_ {
        (0..self.n_top as u32).map(NodeId)
    }

    pub fn bottom_nodes(&self) -> impl ExactSizeIterator<Item = NodeId> + '_ {
        (self.n_top as u32..self.nodes.len() as u32).map(NodeId)
    }

    pub fn nodes_on(&self, side: Side) -> impl ExactSizeIterator<Item = NodeId> + '_ {
        let range = match side {
            Side::Top => 0..self.n_top as u32,
            Side::Bottom => self.n_top as u32..self.nodes.len() as u32,
        };
        range.map(NodeId)
    }

    pub fn node(&self, name: &str) -> Result<NodeId> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownNode(name.to_owned()))
    }

    pub fn contains_node(&self, name: &str) -> bool {
        self.by_name.contains_key(name)
    }

    pub fn check(&self, id: NodeId) -> Result<NodeId> {
        if id.index() < self.nodes.len() {
            Ok(id)
        } else {
            Err(Error::UnknownNode(format!("#{}", id.0)))
        }
    }

    /// Panics on an id from a different stream.
    pub fn name(&self, id: NodeId) -> &str {
        &self.nodes[id.index()].name
    }

    pub fn side(&self, id: NodeId) -> Side {
        self.nodes[id.index()].side
    }

    pub fn degree(&self, id: NodeId) -> usize {
        self.nodes[id.index()].neighbors.len()
    }

    /// Neighbors in id order with the pair's presence.
    pub fn neighbors(&self, id: NodeId) -> impl Iterator<Item = (NodeId, &IntervalSet)> + '_ {
        self.nodes[id.index()]
            .neighbors
            .iter()
            .map(move |&(n, p)| (n, &self.pairs[p as usize].set))
    }

    pub(crate) fn neighbor_ids(&self, id: NodeId) -> &[(NodeId, u32)] {
        &self.nodes[id.index()].neighbors
    }

    pub(crate) fn pair_set(&self, idx: u32) -> &IntervalSet {
        &self.pairs[idx as usize].set
    }

    /// Presence of the pair in either orientation; `None` if they never interact.
    pub fn pair(&self, a: NodeId, b: NodeId) -> Option<&IntervalSet> {
        let (small, other) = if self.degree(a) <= self.degree(b) {
            (a, b)
        } else {
            (b, a)
        };
        let nb = &self.nodes[small.index()].neighbors;
        nb.binary_search_by_key(&other, |&(n, _)| n)
            .ok()
            .map(|i| &self.pairs[nb[i].1 as usize].set)
    }

    /// Presence of `(top, bottom)` by name. Empty if the pair never interacts.
    pub fn pair_intervals(&self, top: &str, bottom: &str) -> Result<IntervalSet> {
        let (u, v) = (self.node(top)?, self.node(bottom)?);
        if self.side(u) != Side::Top || self.side(v) != Side::Bottom {
            return Err(Error::SideViolation(format!(
                "expected a (top, bottom) pair, got ({top}: {}, {bottom}: {})",
                self.side(u),
                self.side(v)
            )));
        }
        Ok(self.pair(u, v).cloned().unwrap_or_default())
    }

    /// Times within `window` at which `node` is linked to every node of
    /// `others`. With no others this is `{window}`.
    pub fn group_intersection(
        &self,
        node: NodeId,
        others: &[NodeId],
        window: Interval,
    ) -> Result<IntervalSet> {
        self.check(node)?;
        let side = self.side(node);
        for &o in others {
            self.check(o)?;
            if self.side(o) == side {
                return Err(Error::SideViolation(format!(
                    "{} and {} are both on the {side} side",
                    self.name(node),
                    self.name(o)
                )));
            }
        }
        let mut acc = IntervalSet::single(window);
        let mut scratch = Vec::new();
        for &o in others {
            match self.pair(node, o) {
                Some(set) => acc.intersect_in_place(set, &mut scratch),
                None => return Ok(IntervalSet::new()),
            }
            if acc.is_empty() {
                break;
            }
        }
        Ok(acc)
    }

    /// Intersection of the presence of every pair in `top × bottom`, or
    /// `None` when some pair never interacts. Both sides must be non-empty.
    pub fn all_pairs_intersection(&self, top: &[NodeId], bottom: &[NodeId]) -> Option<IntervalSet> {
        let mut acc: Option<IntervalSet> = None;
        let mut scratch = Vec::new();
        for &u in top {
            for &v in bottom {
                let set = self.pair(u, v)?;
                match acc.as_mut() {
                    None => acc = Some(set.clone()),
                    Some(a) => a.intersect_in_place(set, &mut scratch),
                }
                if acc.as_ref().is_some_and(IntervalSet::is_empty) {
                    return acc;
                }
            }
        }
        acc
    }

    /// Every maximal interval of every pair, ordered by (top, bottom, begin).
    pub fn links(&self) -> Vec<Link> {
        let mut out: Vec<Link> = self
            .pairs
            .iter()
            .flat_map(|p| {
                p.set.iter().map(move |iv| Link {
                    begin: iv.begin(),
                    end: iv.end(),
                    top: p.top,
                    bottom: p.bottom,
                })
            })
            .collect();
        out.sort_unstable_by_key(|l| (l.top, l.bottom, l.begin));
        out
    }

    pub fn link_count(&self) -> usize {
        self.pairs.iter().map(|p| p.set.len()).sum()
    }

    /// Iteratively removes nodes with a single neighbor until none is left,
    /// and drops nodes left without neighbors. The result is the 2-core of
    /// the static (time-aggregated) graph.
    pub fn prune_degree_one(&self) -> BipartiteLinkStream {
        let n = self.nodes.len();
        let mut degree: Vec<usize> = self.nodes.iter().map(|x| x.neighbors.len()).collect();
        let mut removed = vec![false; n];
        let mut queue: Vec<usize> = (0..n).filter(|&i| degree[i] <= 1).collect();
        while let Some(i) = queue.pop() {
            if removed[i] {
                continue;
            }
            removed[i] = true;
            for &(nb, _) in &self.nodes[i].neighbors {
                let j = nb.index();
                if !removed[j] {
                    degree[j] -= 1;
                    if degree[j] == 1 {
                        queue.push(j);
                    }
                }
            }
        }
        let mut builder = StreamBuilder::new(self.timespan);
        for p in &self.pairs {
            if !removed[p.top.index()] && !removed[p.bottom.index()] {
                builder.link(
                    self.name(p.top),
                    self.name(p.bottom),
                    p.set.intervals().iter().copied(),
                );
            }
        }
        builder
            .build()
            .expect("a sub-stream of a valid stream is valid")
    }

    /// Checks the structural invariants: disjoint sides, pairs oriented
    /// top→bottom within the timespan, and the neighbor index being exactly
    /// the transpose of the pair table.
    pub fn audit(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Precondition(m));
        if self.nodes[..self.n_top].iter().any(|n| n.side != Side::Top)
            || self.nodes[self.n_top..].iter().any(|n| n.side != Side::Bottom)
        {
            return fail("side layout broken".into());
        }
        let mut expected: Vec<Vec<(NodeId, u32)>> = vec![Vec::new(); self.nodes.len()];
        for (idx, p) in self.pairs.iter().enumerate() {
            if self.side(p.top) != Side::Top || self.side(p.bottom) != Side::Bottom {
                return fail(format!("pair {idx} is not oriented top->bottom"));
            }
            if !p.set.is_canonical() || p.set.is_empty() {
                return fail(format!("pair {idx} has a non-canonical or empty set"));
            }
            if !self.timespan.contains(&p.set.hull().unwrap()) {
                return fail(format!("pair {idx} leaves the timespan"));
            }
            expected[p.top.index()].push((p.bottom, idx as u32));
            expected[p.bottom.index()].push((p.top, idx as u32));
        }
        for (i, mut e) in expected.into_iter().enumerate() {
            e.sort_unstable();
            if e != self.nodes[i].neighbors {
                return fail(format!("neighbor index of {} disagrees with pairs", self.nodes[i].name));
            }
        }
        Ok(())
    }

    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        let file = StreamFile {
            format: STREAM_FORMAT.to_owned(),
            time_unit: "us".to_owned(),
            timespan: (self.timespan.begin(), self.timespan.end()),
            top: self.top_nodes().map(|id| self.name(id).to_owned()).collect(),
            bottom: self.bottom_nodes().map(|id| self.name(id).to_owned()).collect(),
            pairs: self
                .pairs
                .iter()
                .map(|p| PairRecord {
                    top: self.name(p.top).to_owned(),
                    bottom: self.name(p.bottom).to_owned(),
                    intervals: p.set.iter().map(|iv| (iv.begin(), iv.end())).collect(),
                })
                .collect(),
        };
        serde_json::to_writer(w, &file).map_err(|e| Error::StreamFormat(e.to_string()))
    }

    pub fn read_json<R: Read>(r: R) -> Result<Self> {
        let file: StreamFile =
            serde_json::from_reader(r).map_err(|e| Error::StreamFormat(e.to_string()))?;
        if file.format != STREAM_FORMAT || file.time_unit != "us" {
            return Err(Error::StreamFormat(format!(
                "unsupported format {:?} / time unit {:?}",
                file.format, file.time_unit
            )));
        }
        let mut b = StreamBuilder::new(Interval::new(file.timespan.0, file.timespan.1)?);
        for t in &file.top {
            b.top(t);
        }
        for t in &file.bottom {
            b.bottom(t);
        }
        for p in &file.pairs {
            let set = IntervalSet::from_pairs(p.intervals.iter().copied())?;
            b.link(&p.top, &p.bottom, set.intervals().iter().copied());
        }
        if b.top.len() != file.top.len() || b.bottom.len() != file.bottom.len() {
            return Err(Error::StreamFormat("pairs reference undeclared nodes".into()));
        }
        b.build()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = std::io::BufWriter::new(f);
        self.write_json(&mut w)?;
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        BipartiteLinkStream::read_json(std::io::BufReader::new(f))
    }
}

const STREAM_FORMAT: &str = "bilink-stream/1";

#[derive(Serialize, Deserialize)]
struct StreamFile {
    format: String,
    time_unit: String,
    timespan: (Time, Time),
    top: Vec<String>,
    bottom: Vec<String>,
    pairs: Vec<PairRecord>,
}

#[derive(Serialize, Deserialize)]
struct PairRecord {
    top: String,
    bottom: String,
    intervals: Vec<(Time, Time)>,
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// The four-node example stream: T=[0,10], top {u,v}, bottom {a,b}.
    pub(crate) fn example_stream() -> BipartiteLinkStream {
        let mut b = StreamBuilder::new(Interval::secs(0, 10));
        b.link("u", "a", [Interval::secs(1, 6), Interval::secs(8, 10)])
            .link("u", "b", [Interval::secs(0, 5)])
            .link("v", "a", [Interval::secs(2, 5), Interval::secs(7, 10)])
            .link("v", "b", [Interval::secs(3, 6)]);
        b.build().unwrap()
    }

    fn pkt(t: &str, s: &str, d: &str) -> PacketRecord {
        PacketRecord::new(t.parse().unwrap(), s, d)
    }

    fn ua_partition() -> PartitionRule {
        PartitionRule::explicit([("u", Side::Top), ("v", Side::Top), ("a", Side::Bottom), ("b", Side::Bottom)])
    }

    fn set_of(s: &BipartiteLinkStream, t: &str, b: &str) -> Vec<(String, String)> {
        s.pair_intervals(t, b)
            .unwrap()
            .iter()
            .map(|iv| (iv.begin().to_string(), iv.end().to_string()))
            .collect()
    }

    fn strs(v: &[(&str, &str)]) -> Vec<(String, String)> {
        v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    #[test]
    fn packets_both_directions_merge() {
        let s = BipartiteLinkStream::from_packets(
            &[pkt("2.0", "u", "a"), pkt("2.8", "a", "u")],
            Time::from_micros(500_000),
            &ua_partition(),
            None,
        )
        .unwrap();
        assert_eq!(set_of(&s, "u", "a"), strs(&[("1.500000", "3.300000")]));
    }

    #[test]
    fn packets_with_large_gap_split() {
        let s = BipartiteLinkStream::from_packets(
            &[pkt("2.0", "u", "a"), pkt("3.5", "u", "a")],
            Time::from_micros(500_000),
            &ua_partition(),
            None,
        )
        .unwrap();
        assert_eq!(
            set_of(&s, "u", "a"),
            strs(&[("1.500000", "2.500000"), ("3.000000", "4.000000")])
        );
    }

    #[test]
    fn packets_one_second_apart_chain() {
        let s = BipartiteLinkStream::from_packets(
            &[pkt("0", "u", "a"), pkt("1", "u", "a"), pkt("2", "u", "a")],
            Time::from_micros(500_000),
            &ua_partition(),
            None,
        )
        .unwrap();
        let links = s.links();
        assert_eq!(links.len(), 1);
        assert_eq!(links[0].begin, Time::from_micros(-500_000));
        assert_eq!(links[0].duration(), Time::from_secs(3));
        assert_eq!(s.timespan(), Interval::new(Time::from_micros(-500_000), Time::from_micros(2_500_000)).unwrap());
    }

    #[test]
    fn single_packet_gives_one_second_link() {
        let s = BipartiteLinkStream::from_packets(
            &[pkt("5", "u", "a")],
            Time::from_micros(500_000),
            &ua_partition(),
            None,
        )
        .unwrap();
        let links = s.links();
        assert_eq!(links.len(), 1);
        assert_eq!((links[0].begin, links[0].end), (Time::from_micros(4_500_000), Time::from_micros(5_500_000)));
    }

    #[test]
    fn same_side_packet_is_rejected() {
        let err = BipartiteLinkStream::from_packets(
            &[pkt("1", "u", "a"), pkt("2", "u", "v")],
            Time::from_micros(500_000),
            &ua_partition(),
            None,
        )
        .unwrap_err();
        match err {
            Error::SameSidePacket { line, row, .. } => {
                assert_eq!(line, 2);
                assert!(row.contains("u") && row.contains("v"));
            }
            e => panic!("unexpected {e}"),
        }
        assert!(matches!(
            BipartiteLinkStream::from_packets(&[], Time::from_micros(500_000), &ua_partition(), None),
            Err(Error::EmptyTrace)
        ));
    }

    #[test]
    fn clamp_clips_pairs() {
        let s = BipartiteLinkStream::from_packets(
            &[pkt("1", "u", "a"), pkt("9", "v", "b")],
            Time::from_micros(500_000),
            &ua_partition(),
            Some(Interval::secs(0, 5)),
        )
        .unwrap();
        assert_eq!(s.timespan(), Interval::secs(0, 5));
        assert_eq!(s.link_count(), 1);
        assert!(!s.contains_node("v"));
    }

    #[test]
    fn example_stream_queries() {
        let s = example_stream();
        s.audit().unwrap();
        assert_eq!(
            s.pair_intervals("u", "a").unwrap(),
            IntervalSet::normalize([Interval::secs(1, 6), Interval::secs(8, 10)])
        );
        assert_eq!(s.pair_intervals("v", "b").unwrap(), IntervalSet::single(Interval::secs(3, 6)));
        assert!(s.pair_intervals("a", "u").is_err());
        assert!(matches!(s.pair_intervals("u", "zz"), Err(Error::UnknownNode(_))));
        assert_eq!(s.links().len(), 6);
    }

    #[test]
    fn never_interacting_pair_is_empty() {
        let mut b = StreamBuilder::new(Interval::secs(0, 10));
        b.link("u", "a", [Interval::secs(0, 1)]).link("v", "b", [Interval::secs(0, 1)]);
        let s = b.build().unwrap();
        assert!(s.pair_intervals("u", "b").unwrap().is_empty());
    }

    #[test]
    fn group_intersection_examples() {
        let s = example_stream();
        let id = |n| s.node(n).unwrap();
        assert_eq!(
            s.group_intersection(id("b"), &[id("u"), id("v")], Interval::secs(0, 10)).unwrap(),
            IntervalSet::single(Interval::secs(3, 5))
        );
        assert_eq!(
            s.group_intersection(id("a"), &[id("u")], Interval::secs(2, 9)).unwrap(),
            IntervalSet::normalize([Interval::secs(2, 6), Interval::secs(8, 9)])
        );
        assert_eq!(
            s.group_intersection(id("v"), &[], Interval::secs(0, 10)).unwrap(),
            IntervalSet::single(Interval::secs(0, 10))
        );
        assert!(matches!(
            s.group_intersection(id("a"), &[id("b")], Interval::secs(0, 10)),
            Err(Error::SideViolation(_))
        ));
    }

    #[test]
    fn empty_stream_has_no_links() {
        let s = StreamBuilder::new(Interval::secs(0, 1)).build().unwrap();
        assert!(s.links().is_empty());
        assert!(s.is_empty());
    }

    #[test]
    fn prune_star_cascades_to_empty() {
        let mut b = StreamBuilder::new(Interval::secs(0, 10));
        for i in 0..5 {
            b.link("hub", &format!("leaf{i}"), [Interval::secs(i, i + 1)]);
        }
        let pruned = b.build().unwrap().prune_degree_one();
        assert_eq!(pruned.link_count(), 0);
        assert_eq!(pruned.node_count(), 0);
    }

    #[test]
    fn prune_keeps_example_stream_and_complete_bicliques() {
        let s = example_stream();
        let p = s.prune_degree_one();
        assert_eq!(p.links(), s.links());
        assert_eq!(p.node_count(), 4);

        let mut b = StreamBuilder::new(Interval::secs(0, 10));
        for t in ["x1", "x2"] {
            for u in ["y1", "y2"] {
                b.link(t, u, [Interval::secs(0, 10)]);
            }
        }
        let k22 = b.build().unwrap();
        assert_eq!(k22.prune_degree_one().link_count(), 4);
    }

    #[test]
    fn builder_rejects_bad_input() {
        let mut b = StreamBuilder::new(Interval::secs(0, 5));
        b.link("u", "a", [Interval::secs(4, 6)]);
        assert!(b.build().is_err());
        let mut b = StreamBuilder::new(Interval::secs(0, 5));
        b.link("u", "a", [Interval::secs(0, 1)]).bottom("u");
        assert!(matches!(b.build(), Err(Error::SideViolation(_))));
    }

    #[test]
    fn json_round_trip() {
        let s = example_stream();
        let mut buf = Vec::new();
        s.write_json(&mut buf).unwrap();
        let back = BipartiteLinkStream::read_json(&buf[..]).unwrap();
        assert_eq!(back.links(), s.links());
        assert_eq!(back.timespan(), s.timespan());
        back.audit().unwrap();
        assert!(BipartiteLinkStream::read_json(&b"{}"[..]).is_err());
    }
}
