//! Summaries of sampled clique sets and of streams.

mod activity;
mod anomaly;
mod distribution;
mod induced;

use std::io::{self, Write};

pub use activity::{activity_per_second, write_activity_csv, ActivityRow};
pub use anomaly::{anomaly_stats, sig2, AnomalySummary};
pub use distribution::{
    duration_ccdf, duration_ccdf_by_size, fraction_exceeding, size_distribution, write_ccdf_by_size,
    DistributionKind, DistributionRow, DistributionTable,
};
pub use induced::{induced_graph, Component, GraphNode, InducedGraph};

use crate::clique::CliqueSet;
use crate::time::Time;

/// One clique in a time-span listing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimespanRow {
    pub rank: usize,
    pub begin: Time,
    pub end: Time,
    pub size: usize,
}

/// Cliques of size `>= min_size` ranked by start time, then end time.
pub fn timespan_table(cliques: &CliqueSet, min_size: usize) -> Vec<TimespanRow> {
    cliques
        .min_size(min_size)
        .enumerate()
        .map(|(rank, c)| TimespanRow {
            rank,
            begin: c.interval().begin(),
            end: c.interval().end(),
            size: c.size(),
        })
        .collect()
}

pub fn write_timespan_csv<W: Write>(rows: &[TimespanRow], mut w: W) -> io::Result<()> {
    writeln!(w, "rank,begin,end,size")?;
    for r in rows {
        writeln!(w, "{},{},{},{}", r.rank, r.begin, r.end, r.size)?;
    }
    Ok(())
}
