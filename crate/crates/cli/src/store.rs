//! Persistent deduplicated clique store.
//!
//! A store directory holds `cliques.txt`, one canonical clique line per
//! distinct clique in clique order, and `cliques.counts`, a `key value`
//! sidecar:
//!
//! ```text
//! format bilink-store/1
//! distinct 2
//! total_sampled 5
//! trajectories 3
//! covered seed=7,min_emit=2,min_interval_us=1,choice=uniform 0-1000
//! ```
//!
//! `covered` lines list, per sampler setting, the trajectory index ranges
//! already merged, so re-running a range adds nothing.

use std::collections::BTreeMap;
use std::fs;
use std::ops::Range;
use std::path::{Path, PathBuf};

use bilink::clique::SubintervalChoice;
use bilink::{BipartiteLinkStream, CliqueSet, NamedClique, SamplerConfig};

use crate::CliError;

pub const CLIQUES_FILE: &str = "cliques.txt";
pub const COUNTS_FILE: &str = "cliques.counts";
const FORMAT: &str = "bilink-store/1";

/// Identifies sampler settings whose trajectory `k` always yields the same
/// cliques on a given stream.
pub fn run_key(cfg: &SamplerConfig) -> String {
    let choice = match cfg.subinterval_choice {
        SubintervalChoice::UniformRandom => "uniform",
        SubintervalChoice::Longest => "longest",
    };
    format!(
        "seed={},min_emit={},min_interval_us={},choice={choice}",
        cfg.rng_seed,
        cfg.min_emit_size,
        cfg.min_interval_duration.as_micros()
    )
}

#[derive(Debug, Clone, Default)]
pub struct Store {
    pub cliques: CliqueSet,
    /// Sorted, disjoint, non-adjacent half-open index ranges per run key.
    pub covered: BTreeMap<String, Vec<(u64, u64)>>,
}

fn corrupt(dir: &Path, why: impl std::fmt::Display) -> CliError {
    CliError::Data(format!(
        "clique store in {} is corrupt ({why}); refusing to append. Remove {} and {} and rerun `sample` to rebuild it",
        dir.display(),
        CLIQUES_FILE,
        COUNTS_FILE
    ))
}

impl Store {
    pub fn cliques_path(dir: &Path) -> PathBuf {
        dir.join(CLIQUES_FILE)
    }

    pub fn exists(dir: &Path) -> bool {
        Self::cliques_path(dir).exists() || dir.join(COUNTS_FILE).exists()
    }

    /// Loads the store in `dir`; a missing store is empty.
    pub fn load(dir: &Path, stream: &BipartiteLinkStream) -> Result<Store, CliError> {
        let (lines_path, counts_path) = (dir.join(CLIQUES_FILE), dir.join(COUNTS_FILE));
        match (lines_path.exists(), counts_path.exists()) {
            (false, false) => return Ok(Store::default()),
            (true, false) => return Err(corrupt(dir, format!("{COUNTS_FILE} is missing"))),
            (false, true) => return Err(corrupt(dir, format!("{CLIQUES_FILE} is missing"))),
            (true, true) => {}
        }
        let read = |p: &Path| fs::read_to_string(p).map_err(|e| CliError::Data(format!("{}: {e}", p.display())));
        let text = read(&lines_path)?;
        let mut set = CliqueSet::new();
        let mut prev = None;
        for (i, line) in text.lines().enumerate() {
            let named: NamedClique = line
                .parse()
                .map_err(|e| corrupt(dir, format!("{CLIQUES_FILE} line {}: {e}", i + 1)))?;
            let c = named
                .resolve(stream)
                .map_err(|e| corrupt(dir, format!("{CLIQUES_FILE} line {}: {e}", i + 1)))?;
            if prev.as_ref().is_some_and(|p| *p >= c) {
                return Err(corrupt(dir, format!("{CLIQUES_FILE} line {} is out of order or repeated", i + 1)));
            }
            prev = Some(c.clone());
            set.insert(c);
        }

        let mut fields: BTreeMap<&str, u64> = BTreeMap::new();
        let mut covered: BTreeMap<String, Vec<(u64, u64)>> = BTreeMap::new();
        let counts = read(&counts_path)?;
        let mut format_ok = false;
        for (i, line) in counts.lines().enumerate() {
            let bad = |m: &str| corrupt(dir, format!("{COUNTS_FILE} line {}: {m}", i + 1));
            let mut parts = line.split_whitespace();
            match parts.next() {
                None => {}
                Some("format") => format_ok = parts.next() == Some(FORMAT),
                Some(key @ ("distinct" | "total_sampled" | "trajectories")) => {
                    let v = parts.next().and_then(|v| v.parse().ok()).ok_or_else(|| bad("bad count"))?;
                    fields.insert(key, v);
                }
                Some("covered") => {
                    let key = parts.next().ok_or_else(|| bad("missing run key"))?;
                    let mut ranges = Vec::new();
                    for r in parts {
                        let (a, b) = r
                            .split_once('-')
                            .and_then(|(a, b)| Some((a.parse::<u64>().ok()?, b.parse::<u64>().ok()?)))
                            .filter(|(a, b)| a < b)
                            .ok_or_else(|| bad("bad range"))?;
                        ranges.push((a, b));
                    }
                    covered.insert(key.to_owned(), normalize(ranges));
                }
                Some(other) => return Err(bad(&format!("unknown key {other:?}"))),
            }
        }
        if !format_ok {
            return Err(corrupt(dir, format!("{COUNTS_FILE} lacks `format {FORMAT}`")));
        }
        let get = |k: &str| fields.get(k).copied().ok_or_else(|| corrupt(dir, format!("{COUNTS_FILE} lacks `{k}`")));
        let (distinct, total, traj) = (get("distinct")?, get("total_sampled")?, get("trajectories")?);
        if distinct != set.distinct() as u64 {
            return Err(corrupt(
                dir,
                format!("{COUNTS_FILE} records {distinct} distinct cliques but {CLIQUES_FILE} has {}", set.distinct()),
            ));
        }
        if total < distinct {
            return Err(corrupt(dir, "total_sampled is below distinct"));
        }
        Ok(Store {
            cliques: set.with_counters(total, traj),
            covered,
        })
    }

    /// Writes both files via temporary files and renames.
    pub fn save(&self, dir: &Path, stream: &BipartiteLinkStream) -> Result<(), CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::Data(format!("{}: {e}", dir.display())))?;
        let mut lines = String::new();
        for c in self.cliques.iter() {
            lines.push_str(&c.to_named(stream).to_string());
            lines.push('\n');
        }
        let mut counts = format!(
            "format {FORMAT}\ndistinct {}\ntotal_sampled {}\ntrajectories {}\n",
            self.cliques.distinct(),
            self.cliques.total_sampled(),
            self.cliques.trajectories()
        );
        for (key, ranges) in &self.covered {
            counts.push_str("covered ");
            counts.push_str(key);
            for (a, b) in ranges {
                counts.push_str(&format!(" {a}-{b}"));
            }
            counts.push('\n');
        }
        write_atomic(&dir.join(CLIQUES_FILE), &lines)?;
        write_atomic(&dir.join(COUNTS_FILE), &counts)
    }

    /// Parts of `range` not yet merged for `key`.
    pub fn gaps(&self, key: &str, range: Range<u64>) -> Vec<Range<u64>> {
        let mut out = Vec::new();
        let mut at = range.start;
        for &(a, b) in self.covered.get(key).map(Vec::as_slice).unwrap_or(&[]) {
            if b <= at {
                continue;
            }
            if a >= range.end {
                break;
            }
            if a > at {
                out.push(at..a);
            }
            at = at.max(b);
        }
        if at < range.end {
            out.push(at..range.end);
        }
        out
    }

    /// First index at or after `from` not yet merged for `key`.
    pub fn next_uncovered(&self, key: &str, from: u64) -> u64 {
        let mut at = from;
        for &(a, b) in self.covered.get(key).map(Vec::as_slice).unwrap_or(&[]) {
            if a <= at && at < b {
                at = b;
            }
        }
        at
    }

    pub fn mark(&mut self, key: &str, range: Range<u64>) {
        if range.is_empty() {
            return;
        }
        let entry = self.covered.entry(key.to_owned()).or_default();
        entry.push((range.start, range.end));
        *entry = normalize(std::mem::take(entry));
    }
}

fn normalize(mut ranges: Vec<(u64, u64)>) -> Vec<(u64, u64)> {
    ranges.sort_unstable();
    let mut out: Vec<(u64, u64)> = Vec::with_capacity(ranges.len());
    for (a, b) in ranges {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

pub(crate) fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents)
        .and_then(|_| fs::rename(&tmp, path))
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}
