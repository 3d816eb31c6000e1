//! Assigning observed nodes to the top or bottom side.
//!
//! Partition files hold one `key,side` rule per line. A key ending in `*` is a
//! string prefix (`10.*,top`); any other key names a single node; `default,side`
//! may appear once. Exact names win over prefixes, the longest matching prefix
//! wins among prefixes, and ties go to the rule listed first.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::ingest::packets::PacketRecord;
use crate::stream::Side;

#[derive(Debug, Clone, Default)]
pub struct PartitionRule {
    exact: HashMap<String, Side>,
    prefixes: Vec<(String, Side)>,
    default: Option<Side>,
}

impl PartitionRule {
    pub fn new() -> Self {
        PartitionRule::default()
    }

    pub fn explicit<'a>(map: impl IntoIterator<Item = (&'a str, Side)>) -> Self {
        PartitionRule {
            exact: map.into_iter().map(|(k, s)| (k.to_owned(), s)).collect(),
            ..Default::default()
        }
    }

    pub fn with_node(mut self, node: &str, side: Side) -> Self {
        self.exact.insert(node.to_owned(), side);
        self
    }

    pub fn with_prefix(mut self, prefix: &str, side: Side) -> Self {
        self.prefixes.push((prefix.to_owned(), side));
        self
    }

    pub fn with_default(mut self, side: Side) -> Self {
        self.default = Some(side);
        self
    }

    pub fn default_side(&self) -> Option<Side> {
        self.default
    }

    pub fn side_of(&self, node: &str) -> Option<Side> {
        if let Some(s) = self.exact.get(node) {
            return Some(*s);
        }
        let mut best: Option<(usize, Side)> = None;
        for (p, s) in &self.prefixes {
            if node.starts_with(p.as_str()) && best.is_none_or(|(len, _)| p.len() > len) {
                best = Some((p.len(), *s));
            }
        }
        best.map(|(_, s)| s).or(self.default)
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut rule = PartitionRule::new();
        for (i, raw) in text.lines().enumerate() {
            let syntax = |message: String| Error::Syntax {
                path: origin.to_owned(),
                line: i + 1,
                message,
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, side) = line
                .split_once(',')
                .ok_or_else(|| syntax(format!("expected `key,side`, got {line:?}")))?;
            let (key, side) = (key.trim(), side.trim().parse::<Side>().map_err(|e| syntax(e.to_string()))?);
            if key.is_empty() {
                return Err(syntax("empty key".into()));
            }
            if key == "default" {
                if rule.default.replace(side).is_some() {
                    return Err(syntax("`default` given more than once".into()));
                }
            } else if let Some(prefix) = key.strip_suffix('*') {
                rule.prefixes.push((prefix.to_owned(), side));
            } else if let Some(prev) = rule.exact.insert(key.to_owned(), side) {
                if prev != side {
                    return Err(syntax(format!("node {key:?} mapped to both sides")));
                }
            }
        }
        Ok(rule)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        PartitionRule::parse(&text, path)
    }

    /// Serializes back into the partition file syntax.
    pub fn to_text(&self) -> String {
        let mut exact: Vec<_> = self.exact.iter().collect();
        exact.sort();
        let mut out = String::new();
        for (p, s) in &self.prefixes {
            out.push_str(&format!("{p}*,{s}\n"));
        }
        for (n, s) in exact {
            out.push_str(&format!("{n},{s}\n"));
        }
        if let Some(d) = self.default {
            out.push_str(&format!("default,{d}\n"));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SideMode {
    /// Same-side packets are an error.
    #[default]
    Strict,
    /// Same-side packets are dropped and counted.
    Lenient,
}

#[derive(Debug, Clone, Default)]
pub struct SideAssignment {
    pub top: BTreeSet<String>,
    pub bottom: BTreeSet<String>,
    pub records: Vec<PacketRecord>,
    pub dropped_same_side: usize,
}

/// Assigns every observed node a side and validates that each packet crosses
/// the partition.
pub fn assign_sides(records: Vec<PacketRecord>, rule: &PartitionRule, mode: SideMode) -> Result<SideAssignment> {
    let mut seen: HashMap<String, Side> = HashMap::new();
    let mut out = SideAssignment::default();
    for (i, rec) in records.into_iter().enumerate() {
        let mut sides = [Side::Top; 2];
        for (k, node) in [&rec.src, &rec.dst].into_iter().enumerate() {
            sides[k] = match seen.get(node.as_str()) {
                Some(s) => *s,
                None => {
                    let s = rule
                        .side_of(node)
                        .ok_or_else(|| Error::UnassignedNode(node.clone()))?;
                    seen.insert(node.clone(), s);
                    s
                }
            };
        }
        if sides[0] == sides[1] {
            match mode {
                SideMode::Strict => {
                    return Err(Error::SameSidePacket {
                        line: i + 1,
                        row: rec.to_string(),
                        side: sides[0].to_string(),
                    })
                }
                SideMode::Lenient => {
                    out.dropped_same_side += 1;
                    continue;
                }
            }
        }
        for (node, side) in [(&rec.src, sides[0]), (&rec.dst, sides[1])] {
            match side {
                Side::Top => out.top.insert(node.clone()),
                Side::Bottom => out.bottom.insert(node.clone()),
            };
        }
        out.records.push(rec);
    }
    Ok(out)
}
