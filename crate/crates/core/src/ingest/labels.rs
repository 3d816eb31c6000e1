use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::stream::BipartiteLinkStream;

/// Node ids flagged as anomalous by an external labeller.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelSet {
    ids: BTreeSet<String>,
}

impl LabelSet {
    pub fn new() -> Self {
        LabelSet::default()
    }

    /// One id per line; `#` starts a comment.
    pub fn parse(text: &str) -> Self {
        text.lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .collect()
    }

    pub fn load(path: &Path) -> Result<Self> {
        fs::read_to_string(path)
            .map(|t| LabelSet::parse(&t))
            .map_err(|e| Error::io(path, e))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.ids.contains(id)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.ids.iter().map(String::as_str)
    }

    /// Labels naming nodes the stream never saw.
    pub fn unmatched(&self, stream: &BipartiteLinkStream) -> usize {
        self.ids.iter().filter(|id| !stream.contains_node(id)).count()
    }

    pub fn to_text(&self) -> String {
        self.ids.iter().map(|id| format!("{id}\n")).collect()
    }
}

impl<S: Into<String>> FromIterator<S> for LabelSet {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        LabelSet {
            ids: iter.into_iter().map(Into::into).collect(),
        }
    }
}

pub fn load_labels(path: &Path) -> Result<LabelSet> {
    LabelSet::load(path)
}
