//! Trace ingestion: packet CSV, side partitioning, anomaly labels and
//! synthetic scenarios.

pub mod labels;
pub mod packets;
pub mod partition;
pub mod synth;

pub use labels::{load_labels, LabelSet};
pub use packets::{parse_packet_csv, read_packets, write_packets, CsvOptions, HeaderMode, PacketRecord};
pub use partition::{assign_sides, PartitionRule, SideAssignment, SideMode};
pub use synth::{generate_synthetic, random_stream, PlantedEvent, PlantedTruth, Scenario, SyntheticTrace};
