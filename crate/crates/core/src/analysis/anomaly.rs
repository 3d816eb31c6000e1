use std::collections::BTreeSet;
use std::fmt;

use crate::clique::CliqueSet;
use crate::ingest::LabelSet;
use crate::stream::BipartiteLinkStream;

/// How labelled nodes are spread between cliques and the whole stream.
#[derive(Debug, Clone, PartialEq)]
pub struct AnomalySummary {
    pub min_size: usize,
    pub cliques: u64,
    pub anomalous_cliques: u64,
    pub clique_nodes: u64,
    pub flagged_clique_nodes: u64,
    pub stream_nodes: u64,
    pub flagged_stream_nodes: u64,
    /// Labels naming nodes absent from the stream.
    pub unmatched_labels: u64,
}

impl AnomalySummary {
    pub fn clique_fraction(&self) -> Option<f64> {
        ratio(self.flagged_clique_nodes, self.clique_nodes)
    }

    pub fn stream_fraction(&self) -> Option<f64> {
        ratio(self.flagged_stream_nodes, self.stream_nodes)
    }

    /// `key,value` lines.
    pub fn to_csv(&self) -> String {
        let rows: [(&str, String); 10] = [
            ("min_size", self.min_size.to_string()),
            ("cliques", self.cliques.to_string()),
            ("anomalous_cliques", self.anomalous_cliques.to_string()),
            ("clique_nodes", self.clique_nodes.to_string()),
            ("flagged_clique_nodes", self.flagged_clique_nodes.to_string()),
            ("clique_flagged_fraction", sig2(self.clique_fraction())),
            ("stream_nodes", self.stream_nodes.to_string()),
            ("flagged_stream_nodes", self.flagged_stream_nodes.to_string()),
            ("stream_flagged_fraction", sig2(self.stream_fraction())),
            ("unmatched_labels", self.unmatched_labels.to_string()),
        ];
        let mut out = String::from("key,value\n");
        for (k, v) in rows {
            out.push_str(&format!("{k},{v}\n"));
        }
        out
    }
}

impl fmt::Display for AnomalySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "cliques of size >= {}: {} ({} anomalous)",
            self.min_size, self.cliques, self.anomalous_cliques
        )?;
        writeln!(
            f,
            "nodes in those cliques: {}, flagged {} (fraction {})",
            self.clique_nodes,
            self.flagged_clique_nodes,
            sig2(self.clique_fraction())
        )?;
        writeln!(
            f,
            "nodes in the stream: {}, flagged {} (fraction {})",
            self.stream_nodes,
            self.flagged_stream_nodes,
            sig2(self.stream_fraction())
        )?;
        write!(f, "labels not seen in the stream: {}", self.unmatched_labels)
    }
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// Two significant digits in scientific notation, or `n/a`.
pub fn sig2(x: Option<f64>) -> String {
    match x {
        None => "n/a".to_owned(),
        Some(0.0) => "0".to_owned(),
        Some(v) => format!("{v:.1e}"),
    }
}

/// Counts labelled nodes among the cliques of size `>= min_size` and among
/// all stream nodes. A clique is anomalous if it holds a labelled node.
pub fn anomaly_stats(
    cliques: &CliqueSet,
    stream: &BipartiteLinkStream,
    labels: &LabelSet,
    min_size: usize,
) -> AnomalySummary {
    let flagged = |id| labels.contains(stream.name(id));
    let mut nodes = BTreeSet::new();
    let (mut n, mut bad) = (0u64, 0u64);
    for c in cliques.min_size(min_size) {
        n += 1;
        if c.nodes().any(flagged) {
            bad += 1;
        }
        nodes.extend(c.nodes());
    }
    let all = stream.top_nodes().chain(stream.bottom_nodes());
    AnomalySummary {
        min_size,
        cliques: n,
        anomalous_cliques: bad,
        clique_nodes: nodes.len() as u64,
        flagged_clique_nodes: nodes.iter().filter(|&&id| flagged(id)).count() as u64,
        stream_nodes: stream.node_count() as u64,
        flagged_stream_nodes: all.filter(|&id| flagged(id)).count() as u64,
        unmatched_labels: labels.unmatched(stream) as u64,
    }
}
