//! Synthetic packet traces with planted structures.
//!
//! Scenarios are flat `key = value` files:
//!
//! ```text
//! timespan     = 0 600          # begin end, seconds
//! noise_rate   = 20             # background packets per second (Poisson)
//! noise_top    = 500            # background top (internal) hosts
//! noise_bottom = 1000           # background bottom (external) hosts
//! clique       = 4 4 100 160 0.9     # tops bottoms begin end period
//! scan         = 2 228 3059.5 3060.5 # sources destinations begin end
//! ```
//!
//! `clique` and `scan` may repeat. Top hosts are named `10.*`, bottom hosts
//! anything else, so [`SyntheticTrace::partition`] is a single prefix rule.

use std::fmt;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};
use crate::ingest::labels::LabelSet;
use crate::ingest::packets::PacketRecord;
use crate::ingest::partition::PartitionRule;
use crate::interval::Interval;
use crate::stream::{BipartiteLinkStream, Side, StreamBuilder};
use crate::time::Time;

/// Per-destination spread of the coordinated sources' packets.
const SCAN_JITTER: Time = Time::from_micros(50_000);

#[derive(Debug, Clone, PartialEq)]
pub enum PlantedEvent {
    /// Every top/bottom pair exchanges a packet every `period` over `[begin, end]`.
    Clique {
        top: usize,
        bottom: usize,
        begin: Time,
        end: Time,
        period: Time,
    },
    /// Each source probes each destination once; destinations are hit at
    /// uniform times in `[begin, end]`, all sources within a few tens of ms.
    Scan {
        sources: usize,
        destinations: usize,
        begin: Time,
        end: Time,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub timespan: Interval,
    pub noise_rate: f64,
    pub noise_top: usize,
    pub noise_bottom: usize,
    pub events: Vec<PlantedEvent>,
}

impl Scenario {
    pub fn new(timespan: Interval) -> Self {
        Scenario {
            timespan,
            noise_rate: 0.0,
            noise_top: 0,
            noise_bottom: 0,
            events: Vec::new(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut timespan = None;
        let mut sc = Scenario::new(Interval::secs(0, 0));
        for (i, raw) in text.lines().enumerate() {
            let bad = |m: String| Error::Scenario(format!("line {}: {m}", i + 1));
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected `key = value`, got {line:?}")))?;
            let fields: Vec<&str> = value.split_whitespace().collect();
            let want = |n: usize| {
                if fields.len() == n {
                    Ok(())
                } else {
                    Err(bad(format!("`{}` takes {n} values, got {}", key.trim(), fields.len())))
                }
            };
            let time = |s: &str| s.parse::<Time>().map_err(|e| bad(e.to_string()));
            let count = |s: &str| s.parse::<usize>().map_err(|e| bad(format!("{s:?}: {e}")));
            match key.trim() {
                "timespan" => {
                    want(2)?;
                    timespan = Some(Interval::new(time(fields[0])?, time(fields[1])?).map_err(|e| bad(e.to_string()))?);
                }
                "noise_rate" => {
                    want(1)?;
                    sc.noise_rate = fields[0].parse().map_err(|_| bad(format!("bad rate {:?}", fields[0])))?;
                }
                "noise_top" => {
                    want(1)?;
                    sc.noise_top = count(fields[0])?;
                }
                "noise_bottom" => {
                    want(1)?;
                    sc.noise_bottom = count(fields[0])?;
                }
                "clique" => {
                    want(5)?;
                    sc.events.push(PlantedEvent::Clique {
                        top: count(fields[0])?,
                        bottom: count(fields[1])?,
                        begin: time(fields[2])?,
                        end: time(fields[3])?,
                        period: time(fields[4])?,
                    });
                }
                "scan" => {
                    want(4)?;
                    sc.events.push(PlantedEvent::Scan {
                        sources: count(fields[0])?,
                        destinations: count(fields[1])?,
                        begin: time(fields[2])?,
                        end: time(fields[3])?,
                    });
                }
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        sc.timespan = timespan.ok_or_else(|| Error::Scenario("missing `timespan`".into()))?;
        Ok(sc)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Scenario(m));
        if !(self.noise_rate.is_finite() && self.noise_rate >= 0.0) {
            return bad(format!("noise_rate must be a non-negative number, got {}", self.noise_rate));
        }
        if self.noise_rate > 0.0 && (self.noise_top == 0 || self.noise_bottom == 0) {
            return bad("background noise needs noise_top and noise_bottom hosts".into());
        }
        for (k, ev) in self.events.iter().enumerate() {
            let (a, b, begin, end) = match *ev {
                PlantedEvent::Clique { top, bottom, begin, end, period } => {
                    if period <= Time::ZERO || period > Time::from_secs(1) {
                        return bad(format!("event {k}: clique period must be in (0, 1] s"));
                    }
                    (top, bottom, begin, end)
                }
                PlantedEvent::Scan { sources, destinations, begin, end } => (sources, destinations, begin, end),
            };
            if a == 0 || b == 0 {
                return bad(format!("event {k}: both sides need at least one node"));
            }
            let iv = Interval::new(begin, end).map_err(|e| Error::Scenario(format!("event {k}: {e}")))?;
            if !self.timespan.contains(&iv) {
                return bad(format!("event {k}: {iv} lies outside timespan {}", self.timespan));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "timespan = {} {}", self.timespan.begin(), self.timespan.end())?;
        writeln!(f, "noise_rate = {}", self.noise_rate)?;
        writeln!(f, "noise_top = {}", self.noise_top)?;
        writeln!(f, "noise_bottom = {}", self.noise_bottom)?;
        for ev in &self.events {
            match ev {
                PlantedEvent::Clique { top, bottom, begin, end, period } => {
                    writeln!(f, "clique = {top} {bottom} {begin} {end} {period}")?
                }
                PlantedEvent::Scan { sources, destinations, begin, end } => {
                    writeln!(f, "scan = {sources} {destinations} {begin} {end}")?
                }
            }
        }
        Ok(())
    }
}

/// Ground truth for one planted event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantedTruth {
    pub kind: &'static str,
    pub top: Vec<String>,
    pub bottom: Vec<String>,
    pub interval: Interval,
}

#[derive(Debug, Clone)]
pub struct SyntheticTrace {
    pub packets: Vec<PacketRecord>,
    pub truth: Vec<PlantedTruth>,
    /// Scan sources.
    pub labels: LabelSet,
}

impl SyntheticTrace {
    pub fn partition() -> PartitionRule {
        PartitionRule::new()
            .with_prefix("10.", Side::Top)
            .with_default(Side::Bottom)
    }

    pub fn truth_text(&self) -> String {
        let mut out = String::from("kind,begin,end,top,bottom\n");
        for t in &self.truth {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                t.kind,
                t.interval.begin(),
                t.interval.end(),
                t.top.join("|"),
                t.bottom.join("|")
            ));
        }
        out
    }
}

fn host(prefix: &str, i: usize) -> String {
    format!("{prefix}.{}.{}", i / 256, i % 256)
}

fn uniform_time(rng: &mut ChaCha8Rng, lo: Time, hi: Time) -> Time {
    if hi <= lo {
        return lo;
    }
    Time::from_micros(rng.random_range(lo.as_micros()..=hi.as_micros()))
}

/// Generates the packets of a scenario. Output is sorted by timestamp and is
/// a pure function of `(scenario, seed)`.
pub fn generate_synthetic(scenario: &Scenario, seed: u64) -> Result<SyntheticTrace> {
    scenario.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut packets = Vec::new();
    let mut truth = Vec::new();
    let mut labels = Vec::new();
    let span = scenario.timespan;

    if scenario.noise_rate > 0.0 {
        let tops: Vec<String> = (0..scenario.noise_top).map(|i| host("10.0", i)).collect();
        let bottoms: Vec<String> = (0..scenario.noise_bottom).map(|i| host("198.18", i)).collect();
        let mean = scenario.noise_rate * span.duration().as_secs_f64();
        let n = if mean > 0.0 {
            Poisson::new(mean)
                .map_err(|e| Error::Scenario(e.to_string()))?
                .sample(&mut rng) as usize
        } else {
            0
        };
        for _ in 0..n {
            let t = uniform_time(&mut rng, span.begin(), span.end());
            let u = tops.choose(&mut rng).expect("non-empty");
            let v = bottoms.choose(&mut rng).expect("non-empty");
            packets.push(if rng.random_bool(0.5) {
                PacketRecord::new(t, u, v)
            } else {
                PacketRecord::new(t, v, u)
            });
        }
    }

    for (k, ev) in scenario.events.iter().enumerate() {
        match *ev {
            PlantedEvent::Clique { top, bottom, begin, end, period } => {
                let tops: Vec<String> = (0..top).map(|i| host(&format!("10.1.{k}"), i)).collect();
                let bottoms: Vec<String> = (0..bottom).map(|i| host(&format!("198.19.{k}"), i)).collect();
                for u in &tops {
                    for v in &bottoms {
                        // random phase in [0, period); consecutive packets never more than `period` apart
                        let mut t = begin + Time::from_micros(rng.random_range(0..period.as_micros()));
                        while t <= end {
                            packets.push(PacketRecord::new(t, u, v));
                            t = t + period;
                        }
                    }
                }
                truth.push(PlantedTruth {
                    kind: "clique",
                    top: tops,
                    bottom: bottoms,
                    interval: Interval::new(begin, end)?,
                });
            }
            PlantedEvent::Scan { sources, destinations, begin, end } => {
                let srcs: Vec<String> = (0..sources).map(|i| host(&format!("198.20.{k}"), i)).collect();
                let dsts: Vec<String> = (0..destinations).map(|i| host(&format!("10.2.{k}"), i)).collect();
                for d in &dsts {
                    let hit = uniform_time(&mut rng, begin, end);
                    for s in &srcs {
                        let t = hit + uniform_time(&mut rng, Time::ZERO, SCAN_JITTER);
                        packets.push(PacketRecord::new(t.min(span.end()), s, d));
                    }
                }
                labels.extend(srcs.iter().cloned());
                truth.push(PlantedTruth {
                    kind: "scan",
                    top: dsts,
                    bottom: srcs,
                    interval: Interval::new(begin, end)?,
                });
            }
        }
    }

    if packets.is_empty() {
        return Err(Error::Scenario("scenario produces an empty trace".into()));
    }
    packets.sort_by_key(|p| p.timestamp);
    Ok(SyntheticTrace {
        packets,
        truth,
        labels: labels.into_iter().collect(),
    })
}

/// A small random stream for property tests: up to `max_top` top and
/// `max_bottom` bottom nodes, up to `max_links` raw intervals with endpoints on
/// a half-second grid over `[0, 10]` so touching and nested intervals occur often.
pub fn random_stream(rng: &mut impl Rng, max_top: usize, max_bottom: usize, max_links: usize) -> BipartiteLinkStream {
    let n_top = rng.random_range(1..=max_top);
    let n_bottom = rng.random_range(1..=max_bottom);
    let n_links = rng.random_range(1..=max_links);
    let mut b = StreamBuilder::new(Interval::secs(0, 10));
    for _ in 0..n_links {
        let u = format!("t{}", rng.random_range(0..n_top));
        let v = format!("b{}", rng.random_range(0..n_bottom));
        let start = rng.random_range(0..20i64);
        let len = rng.random_range(1..=(20 - start).min(8));
        let iv = Interval::new(Time::from_micros(start * 500_000), Time::from_micros((start + len) * 500_000))
            .expect("ordered");
        b.link(&u, &v, [iv]);
    }
    b.build().expect("generated stream is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clique::{is_clique, Clique};

    fn planted_clique_scenario() -> Scenario {
        Scenario::parse("timespan = 0 200\nclique = 3 3 100 160 0.9\n").unwrap()
    }

    #[test]
    fn parse_round_trip() {
        let text = "timespan = 0 600\nnoise_rate = 20\nnoise_top = 5\nnoise_bottom = 7\nclique = 4 4 100 160 0.9\nscan = 2 228 300 301\n";
        let sc = Scenario::parse(text).unwrap();
        assert_eq!(sc.events.len(), 2);
        assert_eq!(Scenario::parse(&sc.to_string()).unwrap(), sc);
    }

    #[test]
    fn rejects_inconsistent_scenarios() {
        assert!(Scenario::parse("noise_rate = 1\n").is_err());
        assert!(Scenario::parse("timespan = 0 10\nbogus = 1\n").is_err());
        let outside = Scenario::parse("timespan = 0 10\nclique = 2 2 5 20 0.5\n").unwrap();
        assert!(generate_synthetic(&outside, 1).is_err());
        let slow = Scenario::parse("timespan = 0 10\nclique = 2 2 1 5 1.5\n").unwrap();
        assert!(generate_synthetic(&slow, 1).is_err());
    }

    #[test]
    fn zero_noise_and_no_events_is_empty_error() {
        let sc = Scenario::parse("timespan = 0 10\nnoise_rate = 0\n").unwrap();
        assert!(matches!(generate_synthetic(&sc, 3), Err(Error::Scenario(_))));
    }

    #[test]
    fn same_seed_same_trace() {
        let sc = Scenario::parse("timespan = 0 100\nnoise_rate = 5\nnoise_top = 10\nnoise_bottom = 10\nscan = 2 20 50 51\n").unwrap();
        let a = generate_synthetic(&sc, 42).unwrap();
        let b = generate_synthetic(&sc, 42).unwrap();
        assert_eq!(a.packets, b.packets);
        assert_ne!(a.packets, generate_synthetic(&sc, 43).unwrap().packets);
        assert_eq!(a.labels.len(), 2);
    }

    #[test]
    fn planted_clique_holds_over_shrunk_interval() {
        let trace = generate_synthetic(&planted_clique_scenario(), 9).unwrap();
        let half = Time::from_micros(500_000);
        let stream = BipartiteLinkStream::from_packets(&trace.packets, half, &SyntheticTrace::partition(), None).unwrap();
        let t = &trace.truth[0];
        assert_eq!(stream.pair_count(), 9);
        let shrunk = Interval::new(t.interval.begin() + half, t.interval.end() - half).unwrap();
        let clique = Clique::from_names(&stream, &t.top, &t.bottom, shrunk).unwrap();
        assert!(is_clique(&stream, &clique).unwrap());
    }

    #[test]
    fn random_streams_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let s = random_stream(&mut rng, 5, 5, 15);
            s.audit().unwrap();
            assert!(s.link_count() <= 15);
        }
    }
}
