use std::collections::BTreeMap;
use std::io::{self, Write};

use crate::clique::{Clique, CliqueSet};
use crate::time::Time;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionKind {
    SizeHistogram,
    /// Fraction of items strictly greater than `x`.
    DurationInverseCumulative,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionRow {
    pub x: f64,
    pub count: u64,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionTable {
    pub kind: DistributionKind,
    pub total: u64,
    pub rows: Vec<DistributionRow>,
}

impl DistributionTable {
    fn empty(kind: DistributionKind) -> Self {
        DistributionTable {
            kind,
            total: 0,
            rows: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Evaluates an inverse-cumulative table as a step function: 1 below the
    /// smallest value, then the fraction of the last row with `row.x <= x`.
    pub fn ccdf_at(&self, x: f64) -> Option<f64> {
        debug_assert_eq!(self.kind, DistributionKind::DurationInverseCumulative);
        if self.total == 0 {
            return None;
        }
        let idx = self.rows.partition_point(|r| r.x <= x);
        Some(if idx == 0 { 1.0 } else { self.rows[idx - 1].fraction })
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        match self.kind {
            DistributionKind::SizeHistogram => writeln!(w, "size,count,fraction")?,
            DistributionKind::DurationInverseCumulative => writeln!(w, "duration,count_above,fraction_above")?,
        }
        for r in &self.rows {
            writeln!(w, "{},{},{}", r.x, r.count, r.fraction)?;
        }
        Ok(())
    }
}

/// Histogram of clique sizes, restricted to sizes `>= min_size`.
pub fn size_distribution(cliques: &CliqueSet, min_size: usize) -> DistributionTable {
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    for c in cliques.min_size(min_size) {
        *counts.entry(c.size()).or_default() += 1;
    }
    let total: u64 = counts.values().sum();
    if total == 0 {
        return DistributionTable::empty(DistributionKind::SizeHistogram);
    }
    DistributionTable {
        kind: DistributionKind::SizeHistogram,
        total,
        rows: counts
            .into_iter()
            .map(|(size, count)| DistributionRow {
                x: size as f64,
                count,
                fraction: count as f64 / total as f64,
            })
            .collect(),
    }
}

fn ccdf_of(mut durations: Vec<Time>) -> DistributionTable {
    if durations.is_empty() {
        return DistributionTable::empty(DistributionKind::DurationInverseCumulative);
    }
    durations.sort_unstable();
    let n = durations.len() as u64;
    let mut rows = Vec::new();
    let mut i = 0;
    while i < durations.len() {
        let d = durations[i];
        let at_or_below = durations.partition_point(|&x| x <= d);
        let above = n - at_or_below as u64;
        rows.push(DistributionRow {
            x: d.as_secs_f64(),
            count: above,
            fraction: above as f64 / n as f64,
        });
        i = at_or_below;
    }
    DistributionTable {
        kind: DistributionKind::DurationInverseCumulative,
        total: n,
        rows,
    }
}

/// Inverse cumulative distribution of durations: one row per distinct
/// duration `x` with the fraction of cliques lasting strictly longer.
pub fn duration_ccdf(cliques: &CliqueSet, min_size: usize) -> DistributionTable {
    ccdf_of(cliques.min_size(min_size).map(Clique::duration).collect())
}

/// One inverse cumulative curve per clique size.
pub fn duration_ccdf_by_size(cliques: &CliqueSet, min_size: usize) -> Vec<(usize, DistributionTable)> {
    let mut by_size: BTreeMap<usize, Vec<Time>> = BTreeMap::new();
    for c in cliques.min_size(min_size) {
        by_size.entry(c.size()).or_default().push(c.duration());
    }
    by_size.into_iter().map(|(s, d)| (s, ccdf_of(d))).collect()
}

/// Fraction of cliques (size `>= min_size`) lasting strictly more than
/// `threshold`; `None` when there are none.
pub fn fraction_exceeding(cliques: &CliqueSet, min_size: usize, threshold: Time) -> Option<(u64, u64, f64)> {
    let (mut above, mut n) = (0u64, 0u64);
    for c in cliques.min_size(min_size) {
        n += 1;
        if c.duration() > threshold {
            above += 1;
        }
    }
    (n > 0).then(|| (above, n, above as f64 / n as f64))
}

pub fn write_ccdf_by_size<W: Write>(curves: &[(usize, DistributionTable)], mut w: W) -> io::Result<()> {
    writeln!(w, "size,duration,count_above,fraction_above")?;
    for (size, t) in curves {
        for r in &t.rows {
            writeln!(w, "{size},{},{},{}", r.x, r.count, r.fraction)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;
    use crate::stream::{BipartiteLinkStream, StreamBuilder};
    use proptest::prelude::*;

    /// A stream with `n` top and `n` bottom nodes and no links; cliques over
    /// it are only used as values here.
    fn nodes(n: usize) -> BipartiteLinkStream {
        let mut b = StreamBuilder::new(Interval::secs(0, 100_000));
        for i in 0..n {
            b.top(&format!("t{i:03}")).bottom(&format!("b{i:03}"));
        }
        b.build().unwrap()
    }

    fn mk(s: &BipartiteLinkStream, nt: usize, nb: usize, begin_us: i64, dur_us: i64) -> Clique {
        Clique::new(
            s.top_nodes().take(nt).collect(),
            s.bottom_nodes().take(nb).collect(),
            Interval::new(Time::from_micros(begin_us), Time::from_micros(begin_us + dur_us)).unwrap(),
        )
    }

    #[test]
    fn size_histogram() {
        let s = nodes(3);
        let set: CliqueSet = [mk(&s, 2, 2, 0, 1), mk(&s, 2, 2, 5, 1), mk(&s, 3, 2, 0, 1)].into_iter().collect();
        let t = size_distribution(&set, 0);
        let got: Vec<_> = t.rows.iter().map(|r| (r.x as usize, r.count)).collect();
        assert_eq!(got, [(4, 2), (5, 1)]);
        assert!(size_distribution(&CliqueSet::new(), 0).is_empty());
        assert_eq!(size_distribution(&set, 5).rows.len(), 1);
    }

    #[test]
    fn ccdf_examples() {
        let s = nodes(1);
        let set: CliqueSet = [1, 1, 2, 10]
            .iter()
            .enumerate()
            .map(|(i, &d)| mk(&s, 1, 1, i as i64 * 100_000_000, d * 1_000_000))
            .collect();
        let t = duration_ccdf(&set, 0);
        assert_eq!(t.ccdf_at(1.5), Some(0.5));
        assert_eq!(t.ccdf_at(0.5), Some(1.0));
        assert_eq!(t.ccdf_at(10.0), Some(0.0));
        assert_eq!(fraction_exceeding(&set, 0, Time::from_micros(1_500_000)), Some((2, 4, 0.5)));

        let equal: CliqueSet = (0..5).map(|i| mk(&s, 1, 1, i * 10_000_000, 3_000_000)).collect();
        assert_eq!(duration_ccdf(&equal, 0).ccdf_at(3.0), Some(0.0));
        assert!(duration_ccdf(&CliqueSet::new(), 0).is_empty());
        assert_eq!(fraction_exceeding(&CliqueSet::new(), 0, Time::ZERO), None);
    }

    proptest! {
        #[test]
        fn per_size_curves_recombine(specs in prop::collection::vec((1usize..4, 0usize..2, 0i64..40), 1..60)) {
            let s = nodes(4);
            let set: CliqueSet = specs
                .iter()
                .enumerate()
                .map(|(i, &(nt, extra, d))| mk(&s, nt, (nt + extra).min(4), i as i64 * 1_000_000_000, d * 250_000))
                .collect();
            let global = duration_ccdf(&set, 0);
            let curves = duration_ccdf_by_size(&set, 0);
            let mut prev = 1.0;
            for r in &global.rows {
                prop_assert!(r.fraction <= prev && (0.0..=1.0).contains(&r.fraction));
                prev = r.fraction;
                let weighted: u64 = curves
                    .iter()
                    .map(|(_, c)| (c.ccdf_at(r.x).unwrap() * c.total as f64).round() as u64)
                    .sum();
                prop_assert_eq!(weighted, r.count);
            }
            prop_assert_eq!(global.ccdf_at(-1.0), Some(1.0));
        }
    }
}
