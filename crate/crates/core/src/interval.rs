//! Closed time intervals and canonical unions of them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::time::Time;

/// A closed interval `[begin, end]`. Zero-length intervals are valid values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Interval {
    begin: Time,
    end: Time,
}

impl Interval {
    pub fn new(begin: Time, end: Time) -> Result<Self> {
        if begin > end {
            return Err(Error::InvalidInterval {
                begin: begin.to_string(),
                end: end.to_string(),
            });
        }
        Ok(Interval { begin, end })
    }

    /// Convenience constructor from whole seconds. Panics if `begin > end`.
    pub fn secs(begin: i64, end: i64) -> Self {
        Interval::new(Time::from_secs(begin), Time::from_secs(end)).expect("begin <= end")
    }

    pub fn begin(&self) -> Time {
        self.begin
    }

    pub fn end(&self) -> Time {
        self.end
    }

    pub fn duration(&self) -> Time {
        self.end - self.begin
    }

    pub fn contains_point(&self, t: Time) -> bool {
        self.begin <= t && t <= self.end
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.begin <= other.begin && other.end <= self.end
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let begin = self.begin.max(other.begin);
        let end = self.end.min(other.end);
        (begin <= end).then_some(Interval { begin, end })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.begin, self.end)
    }
}

/// A finite union of closed intervals kept in canonical form: sorted by
/// begin, pairwise disjoint and separated by a strictly positive gap.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

impl IntervalSet {
    pub fn new() -> Self {
        IntervalSet::default()
    }

    pub fn single(interval: Interval) -> Self {
        IntervalSet {
            intervals: vec![interval],
        }
    }

    /// Canonicalizes an arbitrary collection of intervals. Overlapping and
    /// touching intervals merge.
    pub fn normalize(raw: impl IntoIterator<Item = Interval>) -> Self {
        let mut v: Vec<Interval> = raw.into_iter().collect();
        v.sort_unstable();
        let mut out: Vec<Interval> = Vec::with_capacity(v.len());
        for iv in v {
            match out.last_mut() {
                Some(last) if iv.begin <= last.end => {
                    if iv.end > last.end {
                        last.end = iv.end;
                    }
                }
                _ => out.push(iv),
            }
        }
        IntervalSet { intervals: out }
    }

    /// Like [`IntervalSet::normalize`] but from raw endpoint pairs, rejecting
    /// any pair with `begin > end`.
    pub fn from_pairs(raw: impl IntoIterator<Item = (Time, Time)>) -> Result<Self> {
        let ivs = raw
            .into_iter()
            .map(|(b, e)| Interval::new(b, e))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntervalSet::normalize(ivs))
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Interval> {
        self.intervals.iter()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn is_canonical(&self) -> bool {
        is_canonical(&self.intervals)
    }

    /// Total covered length.
    pub fn measure(&self) -> Time {
        self.intervals
            .iter()
            .fold(Time::ZERO, |acc, iv| acc + iv.duration())
    }

    pub fn hull(&self) -> Option<Interval> {
        Some(Interval {
            begin: self.intervals.first()?.begin,
            end: self.intervals.last()?.end,
        })
    }

    fn locate(&self, t: Time) -> Option<&Interval> {
        // first interval whose end is >= t
        let idx = self.intervals.partition_point(|iv| iv.end < t);
        self.intervals.get(idx).filter(|iv| iv.begin <= t)
    }

    pub fn contains_point(&self, t: Time) -> bool {
        self.locate(t).is_some()
    }

    /// The maximal interval of the set that contains `query`, if any.
    pub fn interval_containing(&self, query: &Interval) -> Option<Interval> {
        self.locate(query.begin)
            .filter(|iv| iv.contains(query))
            .copied()
    }

    pub fn contains_interval(&self, query: &Interval) -> bool {
        self.interval_containing(query).is_some()
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let (a, b) = (&self.intervals, &other.intervals);
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if let Some(iv) = a[i].intersect(&b[j]) {
                out.push(iv);
            }
            if a[i].end < b[j].end {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { intervals: out }
    }

    /// Restriction to a single interval.
    pub fn clip(&self, window: &Interval) -> IntervalSet {
        let start = self.intervals.partition_point(|iv| iv.end < window.begin);
        let intervals = self.intervals[start..]
            .iter()
            .take_while(|iv| iv.begin <= window.end)
            .filter_map(|iv| iv.intersect(window))
            .collect();
        IntervalSet { intervals }
    }

    /// In-place intersection with another set, restricted to `window`.
    /// Used on the sampler's hot path to avoid reallocating per pair.
    pub(crate) fn intersect_in_place(&mut self, other: &IntervalSet, scratch: &mut Vec<Interval>) {
        scratch.clear();
        let (a, b) = (&self.intervals, &other.intervals);
        let mut j = b.partition_point(|iv| iv.end < a.first().map_or(Time::MAX, |f| f.begin));
        let mut i = 0;
        while i < a.len() && j < b.len() {
            if let Some(iv) = a[i].intersect(&b[j]) {
                scratch.push(iv);
            }
            if a[i].end < b[j].end {
                i += 1;
            } else {
                j += 1;
            }
        }
        std::mem::swap(&mut self.intervals, scratch);
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet::normalize(self.intervals.iter().chain(other.intervals.iter()).copied())
    }
}

impl<'a> IntoIterator for &'a IntervalSet {
    type Item = &'a Interval;
    type IntoIter = std::slice::Iter<'a, Interval>;
    fn into_iter(self) -> Self::IntoIter {
        self.intervals.iter()
    }
}

impl FromIterator<Interval> for IntervalSet {
    fn from_iter<I: IntoIterator<Item = Interval>>(iter: I) -> Self {
        IntervalSet::normalize(iter)
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{iv}")?;
        }
        f.write_str("}")
    }
}

fn is_canonical(v: &[Interval]) -> bool {
    v.iter().all(|iv| iv.begin <= iv.end) && v.windows(2).all(|w| w[0].end < w[1].begin)
}
