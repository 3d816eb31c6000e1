use std::io::{self, Write};

use crate::ingest::LabelSet;
use crate::interval::Interval;
use crate::stream::BipartiteLinkStream;
use crate::time::MICROS_PER_SECOND;

/// Activity within the second `[second, second + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ActivityRow {
    pub second: i64,
    pub nodes: u64,
    pub anomalous_nodes: u64,
    pub links: u64,
    pub anomalous_links: u64,
}

/// Inclusive range of second bins `[k, k+1)` that meet the closed interval.
fn bins_touched(iv: &Interval) -> (i64, i64) {
    (iv.begin().floor_second(), iv.end().floor_second())
}

/// Sorts and merges inclusive bin ranges in place.
fn merge_ranges(ranges: &mut Vec<(i64, i64)>) {
    ranges.sort_unstable();
    let mut out: Vec<(i64, i64)> = Vec::with_capacity(ranges.len());
    for &(a, b) in ranges.iter() {
        match out.last_mut() {
            Some(last) if a <= last.1 + 1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    *ranges = out;
}

/// Adds one to every bin of each (merged) range, via a difference array
/// indexed from `first`.
fn add_ranges(ranges: &[(i64, i64)], first: i64, diff: &mut [i64]) {
    let nbins = diff.len() as i64 - 1;
    for &(a, b) in ranges {
        let lo = (a - first).clamp(0, nbins);
        let hi = (b - first + 1).clamp(0, nbins);
        if lo < hi {
            diff[lo as usize] += 1;
            diff[hi as usize] -= 1;
        }
    }
}

/// Per-second counts of distinct active nodes and pairs. Bins are the
/// half-open seconds `[k, k+1)` from `floor(T.begin)` up to (excluding)
/// `ceil(T.end)`; a pair is active in a bin when its presence meets the bin,
/// a node when any of its pairs is. A pair is anomalous when either endpoint
/// is labelled.
pub fn activity_per_second(stream: &BipartiteLinkStream, labels: &LabelSet) -> Vec<ActivityRow> {
    let span = stream.timespan();
    let first = span.begin().floor_second();
    let end_bin = span.end().floor_second();
    let ends_on_boundary = span.end().as_micros() % MICROS_PER_SECOND == 0;
    let last_exclusive = if ends_on_boundary && span.end() > span.begin() {
        end_bin
    } else {
        end_bin + 1
    };
    let nbins = (last_exclusive - first).max(1) as usize;

    let all = || stream.top_nodes().chain(stream.bottom_nodes());
    let flagged: Vec<bool> = all().map(|id| labels.contains(stream.name(id))).collect();

    let mut nodes = vec![0i64; nbins + 1];
    let mut bad_nodes = vec![0i64; nbins + 1];
    let mut links = vec![0i64; nbins + 1];
    let mut bad_links = vec![0i64; nbins + 1];
    let mut ranges = Vec::new();

    for u in all() {
        ranges.clear();
        for (_, set) in stream.neighbors(u) {
            ranges.extend(set.iter().map(bins_touched));
        }
        merge_ranges(&mut ranges);
        add_ranges(&ranges, first, &mut nodes);
        if flagged[u.index()] {
            add_ranges(&ranges, first, &mut bad_nodes);
        }
    }
    for u in stream.top_nodes() {
        for (v, set) in stream.neighbors(u) {
            ranges.clear();
            ranges.extend(set.iter().map(bins_touched));
            merge_ranges(&mut ranges);
            add_ranges(&ranges, first, &mut links);
            if flagged[u.index()] || flagged[v.index()] {
                add_ranges(&ranges, first, &mut bad_links);
            }
        }
    }

    let mut running = [0i64; 4];
    (0..nbins)
        .map(|k| {
            for (acc, diff) in running.iter_mut().zip([&nodes, &bad_nodes, &links, &bad_links]) {
                *acc += diff[k];
            }
            ActivityRow {
                second: first + k as i64,
                nodes: running[0] as u64,
                anomalous_nodes: running[1] as u64,
                links: running[2] as u64,
                anomalous_links: running[3] as u64,
            }
        })
        .collect()
}

pub fn write_activity_csv<W: Write>(rows: &[ActivityRow], mut w: W) -> io::Result<()> {
    writeln!(w, "second,nodes_active,anomalous_nodes_active,links_active,anomalous_links_active")?;
    for r in rows {
        writeln!(w, "{},{},{},{},{}", r.second, r.nodes, r.anomalous_nodes, r.links, r.anomalous_links)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::random_stream;
    use crate::stream::tests::example_stream;
    use crate::time::Time;
    use rand::SeedableRng;

    #[test]
    fn example_stream_bins() {
        let s = example_stream();
        let rows = activity_per_second(&s, &LabelSet::new());
        assert_eq!(rows.len(), 10);
        assert_eq!((rows[0].second, rows[0].nodes, rows[0].links), (0, 2, 1));
        assert_eq!((rows[3].nodes, rows[3].links), (4, 4));
        assert!(rows.iter().all(|r| r.anomalous_nodes == 0 && r.anomalous_links == 0));
    }

    #[test]
    fn labels_flag_nodes_and_incident_links() {
        let s = example_stream();
        let rows = activity_per_second(&s, &["b"].into_iter().collect());
        // [3,4): b active via (u,b) and (v,b)
        assert_eq!((rows[3].anomalous_nodes, rows[3].anomalous_links), (1, 2));
        // [7,8): only (v,a) is present
        assert_eq!((rows[7].nodes, rows[7].links, rows[7].anomalous_links), (2, 1, 0));
    }

    /// Brute force: a pair is active in bin k iff some interval meets [k, k+1).
    #[test]
    fn matches_point_oracle_on_random_streams() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let s = random_stream(&mut rng, 5, 5, 15);
            let labels: LabelSet = ["t0", "b1"].into_iter().collect();
            let rows = activity_per_second(&s, &labels);
            for r in &rows {
                let lo = Time::from_secs(r.second);
                let hi = Time::from_secs(r.second + 1);
                let meets = |set: &crate::interval::IntervalSet| set.iter().any(|iv| iv.begin() < hi && iv.end() >= lo);
                let mut links = 0;
                let mut bad_links = 0;
                let mut active = std::collections::BTreeSet::new();
                for u in s.top_nodes() {
                    for (v, set) in s.neighbors(u) {
                        if meets(set) {
                            links += 1;
                            active.insert(u);
                            active.insert(v);
                            if labels.contains(s.name(u)) || labels.contains(s.name(v)) {
                                bad_links += 1;
                            }
                        }
                    }
                }
                let bad_nodes = active.iter().filter(|&&n| labels.contains(s.name(n))).count() as u64;
                assert_eq!((r.links, r.anomalous_links), (links, bad_links));
                assert_eq!((r.nodes, r.anomalous_nodes), (active.len() as u64, bad_nodes));
                assert!(r.anomalous_links <= r.links && r.anomalous_nodes <= r.nodes);
            }
            // every link meets at least one bin
            let touched: u64 = rows.iter().map(|r| r.links).sum();
            assert!(touched >= s.pair_count() as u64);
        }
    }
}
