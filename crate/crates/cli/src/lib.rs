//! Command implementations behind the `bilink` binary.
//!
//! Each command takes a resolved [`RunConfig`] and returns a report whose
//! `text` is what the binary prints. Settings come from an optional TOML
//! file overlaid by command-line flags ([`ConfigLayer::overlay`]).

pub mod store;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use serde::Deserialize;
use thiserror::Error;

use bilink::analysis::{
    activity_per_second, anomaly_stats, duration_ccdf, duration_ccdf_by_size, fraction_exceeding,
    induced_graph, sig2, size_distribution, timespan_table, write_activity_csv, write_ccdf_by_size,
    write_timespan_csv, AnomalySummary, Component, InducedGraph,
};
use bilink::clique::{is_maximal_balanced, sample_range, Budget, SubintervalChoice};
use bilink::ingest::{
    assign_sides, generate_synthetic, load_labels, parse_packet_csv, write_packets, CsvOptions, HeaderMode,
    LabelSet, PartitionRule, Scenario, SideMode, SyntheticTrace,
};
use bilink::{BipartiteLinkStream, CliqueSet, Interval, SamplerConfig, Time};

use store::{run_key, write_atomic, Store};

pub const STREAM_FILE: &str = "stream.json";
pub const STATS_FILE: &str = "stats.csv";
pub const ANALYSIS_DIR: &str = "analysis";

/// `Usage` covers bad flags, config files and missing inputs (exit 1);
/// `Data` covers malformed or inconsistent input data (exit 2).
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn data(e: impl std::fmt::Display) -> CliError {
    CliError::Data(e.to_string())
}

/// One layer of settings. Every field is optional so that layers can be
/// stacked; TOML keys use the field names.
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub packets: Option<PathBuf>,
    pub partition: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    pub scenario: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub half_window: Option<f64>,
    /// `begin:end` in seconds.
    pub timespan: Option<String>,
    pub prune: Option<bool>,
    pub lenient: Option<bool>,
    /// `auto`, `present` or `absent`.
    pub header: Option<String>,
    pub trajectories: Option<u64>,
    pub seconds: Option<f64>,
    pub workers: Option<usize>,
    pub seed: Option<u64>,
    pub min_emit_size: Option<usize>,
    pub min_interval: Option<f64>,
    /// `uniform` or `longest`.
    pub subinterval: Option<String>,
    pub checkpoint_every: Option<u64>,
    pub start_index: Option<u64>,
    pub min_size: Option<usize>,
    /// `begin:end` in seconds, begin inclusive, end exclusive.
    pub window: Option<String>,
    pub maximal_only: Option<bool>,
}

macro_rules! overlay_fields {
    ($base:ident, $top:ident; $($f:ident),*) => {
        ConfigLayer { $($f: $top.$f.or($base.$f)),* }
    };
}

impl ConfigLayer {
    /// Reads a TOML file; relative paths in it are taken relative to the
    /// file's directory.
    pub fn load(path: &Path) -> Result<ConfigLayer, CliError> {
        let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let mut layer: ConfigLayer =
            toml::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [
            &mut layer.packets,
            &mut layer.partition,
            &mut layer.labels,
            &mut layer.scenario,
            &mut layer.out,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(layer)
    }

    /// Fields set in `top` win over those in `self`.
    pub fn overlay(self, top: ConfigLayer) -> ConfigLayer {
        let base = self;
        overlay_fields!(base, top;
            packets, partition, labels, scenario, out, half_window, timespan, prune, lenient, header,
            trajectories, seconds, workers, seed, min_emit_size, min_interval, subinterval,
            checkpoint_every, start_index, min_size, window, maximal_only)
    }
}

/// Fully resolved settings shared by all commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub packets: Option<PathBuf>,
    pub partition: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    pub scenario: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub half_window: Time,
    pub timespan: Option<Interval>,
    pub prune: bool,
    pub side_mode: SideMode,
    pub header: HeaderMode,
    pub sampler: SamplerConfig,
    pub budget: Option<Budget>,
    pub workers: usize,
    /// Trajectories between store checkpoints.
    pub checkpoint_every: u64,
    pub start_index: Option<u64>,
    pub min_size: Option<usize>,
    pub window: Option<Interval>,
    pub maximal_only: bool,
}

impl RunConfig {
    pub fn new(out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            packets: None,
            partition: None,
            labels: None,
            scenario: None,
            out_dir: out_dir.into(),
            half_window: Time::from_micros(500_000),
            timespan: None,
            prune: false,
            side_mode: SideMode::Strict,
            header: HeaderMode::Auto,
            sampler: SamplerConfig::default(),
            budget: None,
            workers: 1,
            checkpoint_every: 10_000,
            start_index: None,
            min_size: None,
            window: None,
            maximal_only: false,
        }
    }

    /// Validates a layer and fills in defaults.
    pub fn resolve(layer: ConfigLayer) -> Result<RunConfig, CliError> {
        let out = layer.out.ok_or_else(|| usage("an output directory is required (--out)"))?;
        let mut cfg = RunConfig::new(out);
        for p in [&layer.packets, &layer.partition, &layer.labels, &layer.scenario].into_iter().flatten() {
            if !p.is_file() {
                return Err(usage(format!("{}: no such file", p.display())));
            }
        }
        cfg.packets = layer.packets;
        cfg.partition = layer.partition;
        cfg.labels = layer.labels;
        cfg.scenario = layer.scenario;
        if let Some(h) = layer.half_window {
            if !(h.is_finite() && h >= 0.0) {
                return Err(usage(format!("half_window must be a non-negative number of seconds, got {h}")));
            }
            cfg.half_window = Time::from_secs_f64(h);
        }
        cfg.timespan = layer.timespan.as_deref().map(|s| parse_span("timespan", s)).transpose()?;
        cfg.window = layer.window.as_deref().map(|s| parse_span("window", s)).transpose()?;
        if cfg.window.is_some_and(|w| w.begin() >= w.end()) {
            return Err(usage("window must satisfy begin < end"));
        }
        cfg.prune = layer.prune.unwrap_or(false);
        cfg.side_mode = if layer.lenient.unwrap_or(false) {
            SideMode::Lenient
        } else {
            SideMode::Strict
        };
        if let Some(h) = layer.header.as_deref() {
            cfg.header = match h {
                "auto" => HeaderMode::Auto,
                "present" => HeaderMode::Present,
                "absent" => HeaderMode::Absent,
                other => return Err(usage(format!("header must be auto, present or absent, got {other:?}"))),
            };
        }
        cfg.budget = match (layer.trajectories, layer.seconds) {
            (Some(_), Some(_)) => return Err(usage("give either trajectories or seconds, not both")),
            (Some(0), None) => return Err(usage("trajectories must be positive")),
            (Some(n), None) => Some(Budget::Trajectories(n)),
            (None, Some(s)) if !(s.is_finite() && s > 0.0) => {
                return Err(usage(format!("seconds must be positive, got {s}")))
            }
            (None, Some(s)) => Some(Budget::WallClock(Duration::from_secs_f64(s))),
            (None, None) => None,
        };
        if let Some(w) = layer.workers {
            if w == 0 {
                return Err(usage("workers must be at least 1"));
            }
            cfg.workers = w;
        }
        if let Some(s) = layer.seed {
            cfg.sampler.rng_seed = s;
        }
        if let Some(m) = layer.min_emit_size {
            cfg.sampler.min_emit_size = m;
        }
        if let Some(m) = layer.min_interval {
            if !(m.is_finite() && m > 0.0) || Time::from_secs_f64(m) <= Time::ZERO {
                return Err(usage(format!("min_interval must be at least one microsecond, got {m}")));
            }
            cfg.sampler.min_interval_duration = Time::from_secs_f64(m);
        }
        if let Some(s) = layer.subinterval.as_deref() {
            cfg.sampler.subinterval_choice = s.parse::<SubintervalChoice>().map_err(|e| usage(e.to_string()))?;
        }
        if let Some(n) = layer.checkpoint_every {
            if n == 0 {
                return Err(usage("checkpoint_every must be positive"));
            }
            cfg.checkpoint_every = n;
        }
        cfg.start_index = layer.start_index;
        cfg.min_size = layer.min_size;
        cfg.maximal_only = layer.maximal_only.unwrap_or(false);
        Ok(cfg)
    }

    pub fn stream_path(&self) -> PathBuf {
        self.out_dir.join(STREAM_FILE)
    }

    fn load_stream(&self) -> Result<BipartiteLinkStream, CliError> {
        let p = self.stream_path();
        if !p.is_file() {
            return Err(usage(format!("{}: no stream found; run `build` first", p.display())));
        }
        BipartiteLinkStream::load(&p).map_err(data)
    }

    fn load_labels(&self) -> Result<Option<LabelSet>, CliError> {
        self.labels.as_deref().map(load_labels).transpose().map_err(data)
    }
}

fn parse_span(what: &str, s: &str) -> Result<Interval, CliError> {
    let bad = || usage(format!("{what} must look like BEGIN:END in seconds, got {s:?}"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let a: Time = a.trim().parse().map_err(|_| bad())?;
    let b: Time = b.trim().parse().map_err(|_| bad())?;
    Interval::new(a, b).map_err(|e| usage(format!("{what}: {e}")))
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| data(format!("{}: {e}", dir.display())))
}

fn write_file(path: &Path, write: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Result<PathBuf, CliError> {
    let mut buf = Vec::new();
    write(&mut buf).map_err(|e| data(format!("{}: {e}", path.display())))?;
    write_atomic(path, &String::from_utf8(buf).expect("writers emit UTF-8"))?;
    Ok(path.to_owned())
}

// ---------------------------------------------------------------- build

#[derive(Debug, Clone, PartialEq)]
pub struct BuildStats {
    pub packets: usize,
    pub dropped_same_side: usize,
    pub top_nodes: usize,
    pub bottom_nodes: usize,
    pub links: usize,
    pub pairs: usize,
    pub timespan: Interval,
    /// Nodes and links removed by degree-1 pruning.
    pub pruned: Option<(usize, usize)>,
}

impl BuildStats {
    fn of(stream: &BipartiteLinkStream, packets: usize, dropped: usize, pruned: Option<(usize, usize)>) -> Self {
        BuildStats {
            packets,
            dropped_same_side: dropped,
            top_nodes: stream.top_count(),
            bottom_nodes: stream.bottom_count(),
            links: stream.link_count(),
            pairs: stream.pair_count(),
            timespan: stream.timespan(),
            pruned,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut rows = vec![
            ("top_nodes", self.top_nodes.to_string()),
            ("bottom_nodes", self.bottom_nodes.to_string()),
            ("packets", self.packets.to_string()),
            ("dropped_same_side", self.dropped_same_side.to_string()),
            ("links", self.links.to_string()),
            ("linked_pairs", self.pairs.to_string()),
            ("timespan_begin", self.timespan.begin().to_string()),
            ("timespan_end", self.timespan.end().to_string()),
        ];
        if let Some((n, l)) = self.pruned {
            rows.push(("pruned_nodes", n.to_string()));
            rows.push(("pruned_links", l.to_string()));
        }
        let mut out = String::from("key,value\n");
        for (k, v) in rows {
            out.push_str(&format!("{k},{v}\n"));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct BuildReport {
    pub stats: BuildStats,
    pub stream_path: PathBuf,
    pub text: String,
}

/// Parses packets, assigns sides, builds (and optionally prunes) the stream,
/// and writes `stream.json` and `stats.csv`.
pub fn cmd_build(cfg: &RunConfig) -> Result<BuildReport, CliError> {
    let packets_path = cfg.packets.as_deref().ok_or_else(|| usage("build needs a packet file (--packets)"))?;
    let partition_path = cfg
        .partition
        .as_deref()
        .ok_or_else(|| usage("build needs a partition file (--partition)"))?;
    let records = parse_packet_csv(packets_path, CsvOptions { header: cfg.header }).map_err(data)?;
    let rule = PartitionRule::load(partition_path).map_err(data)?;
    let n_packets = records.len();
    let sides = assign_sides(records, &rule, cfg.side_mode)
        .map_err(|e| data(format!("{}: {e}", packets_path.display())))?;
    let mut stream = BipartiteLinkStream::from_packets(&sides.records, cfg.half_window, &rule, cfg.timespan)
        .map_err(|e| data(format!("{}: {e}", packets_path.display())))?;
    let mut pruned = None;
    if cfg.prune {
        let p = stream.prune_degree_one();
        pruned = Some((stream.node_count() - p.node_count(), stream.link_count() - p.link_count()));
        stream = p;
    }
    let stats = BuildStats::of(&stream, n_packets, sides.dropped_same_side, pruned);
    create_dir(&cfg.out_dir)?;
    let stream_path = cfg.stream_path();
    stream.save(&stream_path).map_err(data)?;
    write_atomic(&cfg.out_dir.join(STATS_FILE), &stats.to_csv())?;
    let mut text = format!(
        "top nodes: {}\nbottom nodes: {}\npackets: {}\nlinks: {} over {} pairs\ntimespan: {}",
        stats.top_nodes, stats.bottom_nodes, stats.packets, stats.links, stats.pairs, stats.timespan
    );
    if stats.dropped_same_side > 0 {
        text.push_str(&format!("\ndropped same-side packets: {}", stats.dropped_same_side));
    }
    if let Some((n, l)) = stats.pruned {
        text.push_str(&format!("\npruned: {n} nodes, {l} links"));
    }
    Ok(BuildReport { stats, stream_path, text })
}

// ---------------------------------------------------------------- sample

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleReport {
    /// Trajectories run now; indices already in the store are skipped.
    pub trajectories_run: u64,
    pub new_distinct: usize,
    pub distinct: usize,
    pub total_sampled: u64,
    pub trajectories: u64,
    pub text: String,
}

/// Samples cliques from `stream.json` and merges them into the store,
/// checkpointing every `checkpoint_every` trajectories.
pub fn cmd_sample(cfg: &RunConfig) -> Result<SampleReport, CliError> {
    let budget = cfg
        .budget
        .ok_or_else(|| usage("sample needs a budget (--trajectories or --seconds)"))?;
    cfg.sampler.validate().map_err(|e| usage(e.to_string()))?;
    let stream = cfg.load_stream()?;
    let mut store = Store::load(&cfg.out_dir, &stream)?;
    let key = run_key(&cfg.sampler);
    let before = store.cliques.distinct();
    let mut ran = 0u64;

    let mut run = |store: &mut Store, range: std::ops::Range<u64>| -> Result<(), CliError> {
        let got = sample_range(&stream, &cfg.sampler, range.clone(), cfg.workers).map_err(data)?;
        ran += got.trajectories();
        store.cliques.merge(got);
        store.mark(&key, range);
        Ok(())
    };

    match budget {
        Budget::Trajectories(n) => {
            let start = cfg.start_index.unwrap_or(0);
            let end = start.checked_add(n).ok_or_else(|| usage("trajectory index overflow"))?;
            for gap in store.gaps(&key, start..end) {
                let mut at = gap.start;
                while at < gap.end {
                    let stop = gap.end.min(at.saturating_add(cfg.checkpoint_every));
                    run(&mut store, at..stop)?;
                    store.save(&cfg.out_dir, &stream)?;
                    at = stop;
                }
            }
        }
        Budget::WallClock(limit) => {
            let clock = Instant::now();
            let batch = (256 * cfg.workers as u64).min(cfg.checkpoint_every);
            let mut at = store.next_uncovered(&key, cfg.start_index.unwrap_or(0));
            let mut since_checkpoint = 0;
            while clock.elapsed() < limit {
                let stop = at + batch;
                for gap in store.gaps(&key, at..stop) {
                    run(&mut store, gap)?;
                }
                since_checkpoint += batch;
                if since_checkpoint >= cfg.checkpoint_every {
                    store.save(&cfg.out_dir, &stream)?;
                    since_checkpoint = 0;
                }
                at = store.next_uncovered(&key, stop);
            }
        }
    }
    store.save(&cfg.out_dir, &stream)?;

    let c = &store.cliques;
    let text = format!(
        "trajectories run: {ran}\nnew distinct cliques: {}\ndistinct cliques: {}\ntotal sampled: {}\ntrajectories in store: {}",
        c.distinct() - before,
        c.distinct(),
        c.total_sampled(),
        c.trajectories()
    );
    Ok(SampleReport {
        trajectories_run: ran,
        new_distinct: c.distinct() - before,
        distinct: c.distinct(),
        total_sampled: c.total_sampled(),
        trajectories: c.trajectories(),
        text,
    })
}

// ---------------------------------------------------------------- analyze

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Selector {
    /// Clique size histogram.
    Sizes,
    /// Duration inverse cumulative distribution.
    Ccdf,
    /// One duration curve per clique size.
    CcdfBySize,
    /// Cliques ranked by start time.
    Timespan,
    /// Active nodes and links per second.
    Activity,
    /// Labelled nodes in cliques versus in the stream.
    Summary,
    /// Graph induced by the cliques starting in a window.
    Induced,
}

impl Selector {
    /// Clique size filter used when none is given.
    pub fn default_min_size(self) -> usize {
        match self {
            Selector::Sizes | Selector::Ccdf | Selector::CcdfBySize | Selector::Activity => 0,
            Selector::Timespan | Selector::Summary | Selector::Induced => 4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnalyzeReport {
    pub files: Vec<PathBuf>,
    pub summary: Option<AnomalySummary>,
    pub graph: Option<InducedGraph>,
    pub components: Vec<Component>,
    pub text: String,
}

/// Writes the table or export named by `which` under `<out>/analysis/`.
pub fn cmd_analyze(cfg: &RunConfig, which: Selector) -> Result<AnalyzeReport, CliError> {
    let stream = cfg.load_stream()?;
    let labels = cfg.load_labels()?;
    if which == Selector::Summary && labels.is_none() {
        return Err(usage("labels required: the summary analysis needs a label file (--labels)"));
    }
    let dir = cfg.out_dir.join(ANALYSIS_DIR);
    create_dir(&dir)?;
    let min_size = cfg.min_size.unwrap_or(which.default_min_size());
    let mut report = AnalyzeReport {
        files: Vec::new(),
        summary: None,
        graph: None,
        components: Vec::new(),
        text: String::new(),
    };

    if which == Selector::Activity {
        let rows = activity_per_second(&stream, labels.as_ref().unwrap_or(&LabelSet::new()));
        report.files.push(write_file(&dir.join("activity.csv"), |w| write_activity_csv(&rows, w))?);
        report.text = format!("{} one-second bins", rows.len());
        return Ok(report);
    }

    if !Store::exists(&cfg.out_dir) {
        return Err(usage(format!("{}: no clique store; run `sample` first", cfg.out_dir.display())));
    }
    let mut cliques = Store::load(&cfg.out_dir, &stream)?.cliques;
    if cfg.maximal_only {
        let (total, traj) = (cliques.total_sampled(), cliques.trajectories());
        let mut kept = CliqueSet::new();
        for c in cliques.iter() {
            if is_maximal_balanced(&stream, c).map_err(data)? {
                kept.insert(c.clone());
            }
        }
        cliques = kept.with_counters(total, traj);
    }

    match which {
        Selector::Sizes => {
            let t = size_distribution(&cliques, min_size);
            report.files.push(write_file(&dir.join("sizes.csv"), |w| t.write_csv(w))?);
            report.text = format!("{} cliques of size >= {min_size} in {} size classes", t.total, t.rows.len());
        }
        Selector::Ccdf => {
            let t = duration_ccdf(&cliques, min_size);
            report.files.push(write_file(&dir.join("ccdf.csv"), |w| t.write_csv(w))?);
            report.text = match fraction_exceeding(&cliques, min_size, Time::from_secs(10)) {
                Some((above, n, f)) => format!("{above} of {n} cliques last more than 10 s (fraction {})", sig2(Some(f))),
                None => "no cliques".to_owned(),
            };
        }
        Selector::CcdfBySize => {
            let curves = duration_ccdf_by_size(&cliques, min_size);
            report.files.push(write_file(&dir.join("ccdf_by_size.csv"), |w| write_ccdf_by_size(&curves, w))?);
            report.text = format!("{} size classes", curves.len());
        }
        Selector::Timespan => {
            let rows = timespan_table(&cliques, min_size);
            report.files.push(write_file(&dir.join("timespan.csv"), |w| write_timespan_csv(&rows, w))?);
            report.text = format!("{} cliques of size >= {min_size}", rows.len());
        }
        Selector::Summary => {
            let s = anomaly_stats(&cliques, &stream, labels.as_ref().expect("checked above"), min_size);
            write_atomic(&dir.join("summary.csv"), &s.to_csv())?;
            report.files.push(dir.join("summary.csv"));
            report.text = s.to_string();
            report.summary = Some(s);
        }
        Selector::Induced => {
            let w = cfg.window.ok_or_else(|| usage("induced needs a start-time window (--window BEGIN:END)"))?;
            let g = induced_graph(
                &cliques,
                &stream,
                w.begin(),
                w.end(),
                min_size,
                labels.as_ref().unwrap_or(&LabelSet::new()),
            );
            assert!(g.is_bipartite(), "induced graph edges must cross sides");
            report.files.push(write_file(&dir.join("induced_edges.csv"), |out| g.write_edges_csv(out))?);
            report.files.push(write_file(&dir.join("induced_nodes.csv"), |out| g.write_nodes_csv(out))?);
            report.files.push(write_file(&dir.join("induced.graphml"), |out| g.write_graphml(out))?);
            let comps = g.components();
            let mut text = format!(
                "{} cliques of size >= {min_size} starting in [{}, {}): {} nodes, {} edges, {} components",
                g.cliques,
                w.begin(),
                w.end(),
                g.nodes.len(),
                g.edges.len(),
                comps.len()
            );
            for (i, c) in comps.iter().enumerate() {
                text.push_str(&format!(
                    "\ncomponent {i}: {} nodes ({} flagged, {} unflagged)",
                    c.nodes.len(),
                    c.anomalous,
                    c.normal
                ));
            }
            report.text = text;
            report.components = comps;
            report.graph = Some(g);
        }
        Selector::Activity => unreachable!("handled above"),
    }
    Ok(report)
}

// ---------------------------------------------------------------- synth

#[derive(Debug, Clone)]
pub struct SynthReport {
    pub packets: usize,
    pub files: Vec<PathBuf>,
    pub text: String,
}

/// Generates a synthetic trace from a scenario file into the output
/// directory: `packets.csv`, `partition.txt`, `labels.txt`, `truth.csv`.
pub fn cmd_synth(cfg: &RunConfig) -> Result<SynthReport, CliError> {
    let path = cfg.scenario.as_deref().ok_or_else(|| usage("synth needs a scenario file (--scenario)"))?;
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let scenario = Scenario::parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let trace = generate_synthetic(&scenario, cfg.sampler.rng_seed)
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    create_dir(&cfg.out_dir)?;
    let d = &cfg.out_dir;
    let files = vec![
        write_file(&d.join("packets.csv"), |w| write_packets(w, &trace.packets))?,
        write_file(&d.join("partition.txt"), |w| {
            w.extend_from_slice(SyntheticTrace::partition().to_text().as_bytes());
            Ok(())
        })?,
        write_file(&d.join("labels.txt"), |w| {
            w.extend_from_slice(trace.labels.to_text().as_bytes());
            Ok(())
        })?,
        write_file(&d.join("truth.csv"), |w| {
            w.extend_from_slice(trace.truth_text().as_bytes());
            Ok(())
        })?,
    ];
    let text = format!(
        "{} packets, {} planted events, {} labelled nodes",
        trace.packets.len(),
        trace.truth.len(),
        trace.labels.len()
    );
    Ok(SynthReport {
        packets: trace.packets.len(),
        files,
        text,
    })
}
