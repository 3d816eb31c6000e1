//! Bipartite link streams built from packet traces, and sampling of maximal
//! balanced cliques in them.
//!
//! The pipeline is: parse packets ([`ingest`]), turn them into a
//! [`BipartiteLinkStream`] where two hosts are linked while they exchange
//! packets at least every `2 * half_window` seconds, sample cliques with the
//! randomized alternating greedy [`clique::Sampler`], then summarize the
//! resulting [`clique::CliqueSet`] with [`analysis`].

pub mod analysis;
pub mod clique;
pub mod error;
pub mod ingest;
pub mod interval;
pub mod stream;
pub mod time;

pub use clique::{Clique, CliqueSet, NamedClique, SamplerConfig};
pub use error::{Error, Result};
pub use interval::{Interval, IntervalSet};
pub use stream::{BipartiteLinkStream, Link, NodeId, Side, StreamBuilder};
pub use time::Time;
