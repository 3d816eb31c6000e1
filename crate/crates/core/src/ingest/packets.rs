use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::time::Time;

/// One trace row: a packet seen at `timestamp` between `src` and `dst`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PacketRecord {
    pub timestamp: Time,
    pub src: String,
    pub dst: String,
}

impl PacketRecord {
    pub fn new(timestamp: Time, src: &str, dst: &str) -> Self {
        PacketRecord {
            timestamp,
            src: src.to_owned(),
            dst: dst.to_owned(),
        }
    }
}

impl fmt::Display for PacketRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.timestamp, self.src, self.dst)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HeaderMode {
    /// Skip the first row iff it reads `timestamp,src,dst`.
    #[default]
    Auto,
    Present,
    Absent,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CsvOptions {
    pub header: HeaderMode,
}

pub const PACKET_HEADER: [&str; 3] = ["timestamp", "src", "dst"];

/// Characters reserved by the clique line format.
pub(crate) fn check_node_id(id: &str) -> std::result::Result<(), String> {
    if id.is_empty() {
        return Err("empty node id".into());
    }
    if let Some(c) = id.chars().find(|c| matches!(c, ',' | '|') || c.is_whitespace()) {
        return Err(format!("node id {id:?} contains reserved character {c:?}"));
    }
    Ok(())
}

pub fn parse_packet_csv(path: &Path, opts: CsvOptions) -> Result<Vec<PacketRecord>> {
    let f = File::open(path).map_err(|e| Error::io(path, e))?;
    read_packets(f, path, opts)
}

/// Parses `timestamp,src,dst` rows from any reader; `origin` labels errors.
pub fn read_packets<R: Read>(r: R, origin: &Path, opts: CsvOptions) -> Result<Vec<PacketRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(r);
    let mut out = Vec::new();
    let syntax = |line: usize, message: String| Error::Syntax {
        path: origin.to_owned(),
        line,
        message,
    };
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            syntax(line, e.to_string())
        })?;
        let line = rec.position().map_or(i + 1, |p| p.line() as usize);
        if i == 0 {
            let is_header = rec.iter().eq(PACKET_HEADER.iter().copied());
            match opts.header {
                HeaderMode::Auto if is_header => continue,
                HeaderMode::Present => continue,
                _ => {}
            }
        }
        if rec.len() != 3 {
            return Err(syntax(line, format!("expected 3 fields, found {}", rec.len())));
        }
        let timestamp: Time = rec[0].parse().map_err(|e: Error| syntax(line, e.to_string()))?;
        let (src, dst) = (&rec[1], &rec[2]);
        check_node_id(src).map_err(|m| syntax(line, m))?;
        check_node_id(dst).map_err(|m| syntax(line, m))?;
        if src == dst {
            return Err(syntax(line, format!("source and destination are both {src:?}")));
        }
        out.push(PacketRecord::new(timestamp, src, dst));
    }
    Ok(out)
}

pub fn write_packets<W: Write>(mut w: W, packets: &[PacketRecord]) -> std::io::Result<()> {
    writeln!(w, "{}", PACKET_HEADER.join(","))?;
    for p in packets {
        writeln!(w, "{p}")?;
    }
    Ok(())
}
