use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bilink_cli::{cmd_analyze, cmd_build, cmd_sample, cmd_synth, CliError, ConfigLayer, RunConfig, Selector};

/// Maximal balanced cliques in bipartite link streams built from packet traces.
#[derive(Debug, Parser)]
#[command(name = "bilink", version)]
struct Cli {
    /// TOML file supplying any flag; flags given on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a link stream from a packet CSV and a side partition.
    Build {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        input: Input,
    },
    /// Sample cliques into the output directory's store.
    Sample {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Write one analysis table or export.
    Analyze {
        /// What to compute.
        #[arg(value_enum)]
        which: Selector,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        analysis: Analysis,
    },
    /// Generate a synthetic packet trace from a scenario file.
    Synth {
        #[command(flatten)]
        common: Common,
        /// Scenario file (`key = value` lines).
        #[arg(long)]
        scenario: Option<PathBuf>,
        /// Random seed.
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Working directory holding the stream, store and outputs.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Input {
    /// Packet CSV with `timestamp,src,dst` rows.
    #[arg(long)]
    packets: Option<PathBuf>,
    /// Side partition file (`node,side`, `prefix*,side`, `default,side`).
    #[arg(long)]
    partition: Option<PathBuf>,
    /// Seconds each packet extends on both sides of its timestamp [default: 0.5].
    #[arg(long)]
    half_window: Option<f64>,
    /// Clamp the stream to BEGIN:END seconds.
    #[arg(long, value_name = "BEGIN:END")]
    timespan: Option<String>,
    /// Iteratively remove degree-1 nodes.
    #[arg(long)]
    prune: bool,
    /// Drop packets whose endpoints share a side instead of failing.
    #[arg(long)]
    lenient: bool,
    /// Header row handling: auto, present or absent [default: auto].
    #[arg(long)]
    header: Option<String>,
}

#[derive(Debug, Args)]
struct Sampling {
    /// Number of trajectories to run.
    #[arg(long, conflicts_with = "seconds")]
    trajectories: Option<u64>,
    /// Wall-clock budget in seconds.
    #[arg(long)]
    seconds: Option<f64>,
    /// Worker threads [default: 1].
    #[arg(long, short)]
    workers: Option<usize>,
    /// Random seed [default: 0].
    #[arg(long)]
    seed: Option<u64>,
    /// Smallest emitted clique size [default: 2].
    #[arg(long)]
    min_emit_size: Option<usize>,
    /// Shortest usable sub-interval in seconds [default: 0.000001].
    #[arg(long)]
    min_interval: Option<f64>,
    /// Sub-interval policy: uniform or longest [default: uniform].
    #[arg(long)]
    subinterval: Option<String>,
    /// Trajectories between store checkpoints [default: 10000].
    #[arg(long)]
    checkpoint_every: Option<u64>,
    /// First trajectory index [default: 0, or the first unsampled one for --seconds].
    #[arg(long)]
    start_index: Option<u64>,
}

#[derive(Debug, Args)]
struct Analysis {
    /// Label file: one flagged node per line.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Only cliques with at least this many nodes.
    #[arg(long)]
    min_size: Option<usize>,
    /// Clique start-time window BEGIN:END (end excluded), for `induced`.
    #[arg(long, value_name = "BEGIN:END")]
    window: Option<String>,
    /// Keep only cliques that are maximal among balanced cliques.
    #[arg(long)]
    maximal_only: bool,
}

fn flag(b: bool) -> Option<bool> {
    b.then_some(true)
}

fn layer(command: &Command) -> ConfigLayer {
    match command {
        Command::Build { common, input } => ConfigLayer {
            out: common.out.clone(),
            packets: input.packets.clone(),
            partition: input.partition.clone(),
            half_window: input.half_window,
            timespan: input.timespan.clone(),
            prune: flag(input.prune),
            lenient: flag(input.lenient),
            header: input.header.clone(),
            ..Default::default()
        },
        Command::Sample { common, sampling: s } => ConfigLayer {
            out: common.out.clone(),
            trajectories: s.trajectories,
            seconds: s.seconds,
            workers: s.workers,
            seed: s.seed,
            min_emit_size: s.min_emit_size,
            min_interval: s.min_interval,
            subinterval: s.subinterval.clone(),
            checkpoint_every: s.checkpoint_every,
            start_index: s.start_index,
            ..Default::default()
        },
        Command::Analyze { common, analysis: a, .. } => ConfigLayer {
            out: common.out.clone(),
            labels: a.labels.clone(),
            min_size: a.min_size,
            window: a.window.clone(),
            maximal_only: flag(a.maximal_only),
            ..Default::default()
        },
        Command::Synth { common, scenario, seed } => ConfigLayer {
            out: common.out.clone(),
            scenario: scenario.clone(),
            seed: *seed,
            ..Default::default()
        },
    }
}

/// Drops file settings that belong to other commands, so that one config
/// file can drive the whole pipeline.
fn relevant(file: ConfigLayer, command: &Command) -> ConfigLayer {
    let out = file.out.clone();
    match command {
        Command::Build { .. } => ConfigLayer {
            out,
            packets: file.packets,
            partition: file.partition,
            half_window: file.half_window,
            timespan: file.timespan,
            prune: file.prune,
            lenient: file.lenient,
            header: file.header,
            ..Default::default()
        },
        Command::Sample { .. } => ConfigLayer {
            out,
            trajectories: file.trajectories,
            seconds: file.seconds,
            workers: file.workers,
            seed: file.seed,
            min_emit_size: file.min_emit_size,
            min_interval: file.min_interval,
            subinterval: file.subinterval,
            checkpoint_every: file.checkpoint_every,
            start_index: file.start_index,
            ..Default::default()
        },
        Command::Analyze { .. } => ConfigLayer {
            out,
            labels: file.labels,
            min_size: file.min_size,
            window: file.window,
            maximal_only: file.maximal_only,
            ..Default::default()
        },
        Command::Synth { .. } => ConfigLayer {
            out,
            scenario: file.scenario,
            seed: file.seed,
            ..Default::default()
        },
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    let file = match &cli.config {
        Some(p) => relevant(ConfigLayer::load(p)?, &cli.command),
        None => ConfigLayer::default(),
    };
    let cfg = RunConfig::resolve(file.overlay(layer(&cli.command)))?;
    Ok(match cli.command {
        Command::Build { .. } => cmd_build(&cfg)?.text,
        Command::Sample { .. } => cmd_sample(&cfg)?.text,
        Command::Analyze { which, .. } => cmd_analyze(&cfg, which)?.text,
        Command::Synth { .. } => cmd_synth(&cfg)?.text,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(text) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
