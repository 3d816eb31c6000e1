//! Randomized alternating greedy sampling of maximal balanced cliques.
//!
//! A trajectory starts from `(∅, ∅, T)` and repeatedly adds one random node
//! that is linked to the whole opposite side over a sub-interval of the
//! current interval, shrinking the interval to that sub-interval. Sides
//! alternate: while the sides differ in size only the smaller side may grow;
//! when they are equal the side opposite to the last addition is tried first,
//! then the other. The trajectory stops when no node qualifies. Every
//! intermediate state with both sides non-empty is emitted after widening its
//! interval to the maximal one.
//!
//! Trajectory `k` draws from its own RNG stream derived from `(seed, k)`, so a
//! run over trajectories `0..n` yields the same clique set and counters no
//! matter how many workers execute it.

use std::ops::Range;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clique::{Clique, CliqueSet};
use crate::error::{Error, Result};
use crate::interval::{Interval, IntervalSet};
use crate::stream::{BipartiteLinkStream, NodeId, Side};
use crate::time::Time;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SubintervalChoice {
    /// Uniformly among the qualifying maximal sub-intervals.
    #[default]
    UniformRandom,
    /// The longest one; earliest on ties.
    Longest,
}

impl std::str::FromStr for SubintervalChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" | "uniform-random" => Ok(SubintervalChoice::UniformRandom),
            "longest" => Ok(SubintervalChoice::Longest),
            other => Err(Error::Parse(format!(
                "unknown sub-interval policy {other:?} (expected uniform or longest)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    /// Smallest clique size that is emitted.
    pub min_emit_size: usize,
    /// A node qualifies only over a sub-interval at least this long.
    pub min_interval_duration: Time,
    pub subinterval_choice: SubintervalChoice,
    pub rng_seed: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            min_emit_size: 2,
            min_interval_duration: Time::from_micros(1),
            subinterval_choice: SubintervalChoice::UniformRandom,
            rng_seed: 0,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_interval_duration <= Time::ZERO {
            return Err(Error::Precondition(
                "min_interval_duration must be strictly positive".into(),
            ));
        }
        Ok(())
    }
}

/// How much sampling to do.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Budget {
    Trajectories(u64),
    WallClock(Duration),
}

/// One greedy addition: the node, its side, and the interval after it joined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrajectoryStep {
    pub node: NodeId,
    pub side: Side,
    pub interval: Interval,
}

#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    pub steps: Vec<TrajectoryStep>,
    /// Emitted cliques in order of emission (time-widened).
    pub emitted: Vec<Clique>,
    /// The widened clique of the stopping state, if it was emitted.
    pub final_clique: Option<Clique>,
}

/// Derives the RNG of trajectory `index`.
pub fn trajectory_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Reusable per-worker sampling state over a shared stream.
pub struct Sampler<'s> {
    stream: &'s BipartiteLinkStream,
    cfg: SamplerConfig,
    /// Non-isolated nodes per side, the candidates of a first addition.
    seeds: [Vec<NodeId>; 2],
    candidates: Vec<(NodeId, u32, u32)>,
    spans: Vec<Interval>,
    acc: IntervalSet,
    scratch: Vec<Interval>,
}

fn side_index(side: Side) -> usize {
    match side {
        Side::Top => 0,
        Side::Bottom => 1,
    }
}

impl<'s> Sampler<'s> {
    pub fn new(stream: &'s BipartiteLinkStream, cfg: SamplerConfig) -> Result<Self> {
        cfg.validate()?;
        let seeds_on = |side| {
            stream
                .nodes_on(side)
                .filter(|&n| stream.degree(n) > 0)
                .collect()
        };
        Ok(Sampler {
            stream,
            cfg,
            seeds: [seeds_on(Side::Top), seeds_on(Side::Bottom)],
            candidates: Vec::new(),
            spans: Vec::new(),
            acc: IntervalSet::new(),
            scratch: Vec::new(),
        })
    }

    /// Fills `self.candidates` with the nodes of `side` that may join the
    /// clique over some sub-interval of `window`, and `self.spans` with those
    /// sub-intervals.
    fn collect_candidates(&mut self, side: Side, members: &[NodeId], opposite: &[NodeId], window: Interval) {
        self.candidates.clear();
        self.spans.clear();
        let min = self.cfg.min_interval_duration;
        if opposite.is_empty() {
            // joined vacuously over the whole window
            if window.duration() >= min {
                self.spans.push(window);
                for &n in &self.seeds[side_index(side)] {
                    if !members.contains(&n) {
                        self.candidates.push((n, 0, 1));
                    }
                }
            }
            return;
        }
        let stream = self.stream;
        let pivot = *opposite
            .iter()
            .min_by_key(|&&o| stream.degree(o))
            .expect("non-empty");
        for &(w, pair) in stream.neighbor_ids(pivot) {
            if members.contains(&w) {
                continue;
            }
            self.acc = stream.pair_set(pair).clip(&window);
            for &o in opposite {
                if self.acc.is_empty() {
                    break;
                }
                if o == pivot {
                    continue;
                }
                match stream.pair(w, o) {
                    Some(set) => self.acc.intersect_in_place(set, &mut self.scratch),
                    None => self.acc = IntervalSet::new(),
                }
            }
            let start = self.spans.len() as u32;
            self.spans
                .extend(self.acc.iter().filter(|iv| iv.duration() >= min).copied());
            let end = self.spans.len() as u32;
            if end > start {
                self.candidates.push((w, start, end));
            }
        }
    }

    fn choose_span(&self, rng: &mut impl Rng, start: u32, end: u32) -> Interval {
        let spans = &self.spans[start as usize..end as usize];
        match self.cfg.subinterval_choice {
            SubintervalChoice::UniformRandom => spans[rng.random_range(0..spans.len())],
            SubintervalChoice::Longest => *spans
                .iter()
                .rev()
                .max_by_key(|iv| iv.duration())
                .expect("non-empty"),
        }
    }

    /// Runs one trajectory, recording every step.
    pub fn trajectory(&mut self, rng: &mut impl Rng) -> Trajectory {
        let stream = self.stream;
        let mut out = Trajectory::default();
        let mut top: Vec<NodeId> = Vec::new();
        let mut bottom: Vec<NodeId> = Vec::new();
        let mut window = stream.timespan();
        let mut preferred = if rng.random_bool(0.5) { Side::Top } else { Side::Bottom };
        loop {
            let order = match top.len().cmp(&bottom.len()) {
                std::cmp::Ordering::Less => [Some(Side::Top), None],
                std::cmp::Ordering::Greater => [Some(Side::Bottom), None],
                std::cmp::Ordering::Equal => [Some(preferred), Some(preferred.opposite())],
            };
            let mut step = None;
            for side in order.into_iter().flatten() {
                let (members, opposite) = match side {
                    Side::Top => (&top, &bottom),
                    Side::Bottom => (&bottom, &top),
                };
                self.collect_candidates(side, members, opposite, window);
                if !self.candidates.is_empty() {
                    let (node, s, e) = self.candidates[rng.random_range(0..self.candidates.len())];
                    step = Some(TrajectoryStep {
                        node,
                        side,
                        interval: self.choose_span(rng, s, e),
                    });
                    break;
                }
            }
            let Some(step) = step else { break };
            match step.side {
                Side::Top => top.push(step.node),
                Side::Bottom => bottom.push(step.node),
            }
            window = step.interval;
            preferred = step.side.opposite();
            out.steps.push(step);

            if top.len() + bottom.len() >= self.cfg.min_emit_size && !top.is_empty() && !bottom.is_empty() {
                let widened = stream
                    .all_pairs_intersection(&top, &bottom)
                    .and_then(|s| s.interval_containing(&window))
                    .expect("the current state is a clique over its window");
                out.emitted.push(Clique::new(top.clone(), bottom.clone(), widened));
            }
        }
        if let Some(last) = out.steps.last() {
            let (t, b) = (top.len(), bottom.len());
            if out.emitted.last().is_some_and(|c| c.top().len() == t && c.bottom().len() == b) {
                out.final_clique = out.emitted.last().cloned();
            }
            debug_assert_eq!(last.interval, window);
        }
        out
    }
}

/// One trajectory's emitted cliques.
pub fn sample_trajectory(
    stream: &BipartiteLinkStream,
    cfg: &SamplerConfig,
    rng: &mut impl Rng,
) -> Result<Vec<Clique>> {
    Ok(Sampler::new(stream, *cfg)?.trajectory(rng).emitted)
}

/// Runs trajectories `range` on `workers` threads and merges the emissions.
/// The result depends only on `(stream, cfg, range)`.
pub fn sample_range(
    stream: &BipartiteLinkStream,
    cfg: &SamplerConfig,
    range: Range<u64>,
    workers: usize,
) -> Result<CliqueSet> {
    cfg.validate()?;
    let workers = workers.max(1);
    let run = |next: &AtomicU64| -> CliqueSet {
        let mut sampler = Sampler::new(stream, *cfg).expect("validated");
        let mut local = CliqueSet::new();
        loop {
            let k = next.fetch_add(1, Ordering::Relaxed);
            if k >= range.end {
                break;
            }
            let mut rng = trajectory_rng(cfg.rng_seed, k);
            local.extend(sampler.trajectory(&mut rng).emitted);
            local.add_trajectories(1);
        }
        local
    };
    let next = AtomicU64::new(range.start);
    if workers == 1 || range.end.saturating_sub(range.start) < 2 {
        return Ok(run(&next));
    }
    let merged = Mutex::new(CliqueSet::new());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| {
                let local = run(&next);
                merged.lock().expect("no worker panicked").merge(local);
            });
        }
    });
    Ok(merged.into_inner().expect("no worker panicked"))
}

/// Trajectories per chunk when sampling against a wall-clock budget.
const CLOCK_CHUNK: u64 = 256;

/// Samples from trajectory 0 onwards until the budget is spent.
pub fn sample_many(
    stream: &BipartiteLinkStream,
    cfg: &SamplerConfig,
    budget: Budget,
    workers: usize,
) -> Result<CliqueSet> {
    match budget {
        Budget::Trajectories(n) => sample_range(stream, cfg, 0..n, workers),
        Budget::WallClock(limit) => {
            let start = Instant::now();
            let mut out = CliqueSet::new();
            let mut next = 0;
            let chunk = CLOCK_CHUNK * workers.max(1) as u64;
            while start.elapsed() < limit {
                out.merge(sample_range(stream, cfg, next..next + chunk, workers)?);
                next += chunk;
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clique::{extend_time, is_balanced, is_clique};
    use crate::stream::tests::example_stream;
    use crate::stream::StreamBuilder;

    fn lines(s: &BipartiteLinkStream, set: &CliqueSet) -> Vec<String> {
        set.iter().map(|c| c.to_named(s).to_string()).collect()
    }

    #[test]
    fn example_reaches_both_reference_cliques() {
        let s = example_stream();
        let cfg = SamplerConfig { rng_seed: 7, ..Default::default() };
        let set = sample_many(&s, &cfg, Budget::Trajectories(1000), 1).unwrap();
        let l = lines(&s, &set);
        assert!(l.contains(&"3.000000,5.000000,u|v,a|b".into()), "{l:?}");
        assert!(l.contains(&"8.000000,10.000000,u|v,a".into()), "{l:?}");
        assert_eq!(set.trajectories(), 1000);
    }

    #[test]
    fn single_pair_emits_once() {
        let mut b = StreamBuilder::new(Interval::secs(0, 2));
        b.link("u", "a", [Interval::secs(0, 2)]);
        let s = b.build().unwrap();
        for seed in 0..20 {
            let mut rng = trajectory_rng(seed, 0);
            let out = sample_trajectory(&s, &SamplerConfig::default(), &mut rng).unwrap();
            assert_eq!(out.len(), 1);
            assert_eq!(out[0].to_named(&s).to_string(), "0.000000,2.000000,u,a");
        }
    }

    #[test]
    fn zero_budget_is_empty() {
        let s = example_stream();
        let set = sample_many(&s, &SamplerConfig::default(), Budget::Trajectories(0), 4).unwrap();
        assert!(set.is_empty());
        assert_eq!(set.total_sampled(), 0);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let s = example_stream();
        let cfg = SamplerConfig { rng_seed: 99, ..Default::default() };
        let one = sample_many(&s, &cfg, Budget::Trajectories(500), 1).unwrap();
        let again = sample_many(&s, &cfg, Budget::Trajectories(500), 1).unwrap();
        let four = sample_many(&s, &cfg, Budget::Trajectories(500), 4).unwrap();
        assert_eq!(one, again);
        assert_eq!(one, four);
    }

    #[test]
    fn rejects_non_positive_min_duration() {
        let s = example_stream();
        let cfg = SamplerConfig { min_interval_duration: Time::ZERO, ..Default::default() };
        assert!(sample_many(&s, &cfg, Budget::Trajectories(1), 1).is_err());
    }

    #[test]
    fn trajectory_invariants_on_example_stream() {
        let s = example_stream();
        for choice in [SubintervalChoice::UniformRandom, SubintervalChoice::Longest] {
            let cfg = SamplerConfig { subinterval_choice: choice, ..Default::default() };
            let mut sampler = Sampler::new(&s, cfg).unwrap();
            for k in 0..200 {
                let t = sampler.trajectory(&mut trajectory_rng(3, k));
                let mut prev = s.timespan();
                let (mut nt, mut nb) = (0usize, 0usize);
                for step in &t.steps {
                    assert!(prev.contains(&step.interval));
                    prev = step.interval;
                    match step.side {
                        Side::Top => nt += 1,
                        Side::Bottom => nb += 1,
                    }
                    assert!(nt.abs_diff(nb) <= 1);
                }
                for c in &t.emitted {
                    assert!(is_clique(&s, c).unwrap() && is_balanced(c));
                    assert_eq!(&extend_time(&s, c).unwrap(), c);
                }
            }
        }
    }

    #[test]
    fn longest_policy_prefers_longest_span() {
        // a links to u over [0,1] and [3,9]; starting from u then a always takes [3,9]
        let mut b = StreamBuilder::new(Interval::secs(0, 10));
        b.link("u", "a", [Interval::secs(0, 1), Interval::secs(3, 9)]);
        let s = b.build().unwrap();
        let cfg = SamplerConfig { subinterval_choice: SubintervalChoice::Longest, ..Default::default() };
        let set = sample_many(&s, &cfg, Budget::Trajectories(50), 1).unwrap();
        assert_eq!(lines(&s, &set), ["3.000000,9.000000,u,a"]);
    }
}
