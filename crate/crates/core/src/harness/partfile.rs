//! METIS-style partition files: line `i` holds node `i`'s part id.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::hypergraph::PartitionAssignment;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionFile {
    pub assignment: PartitionAssignment,
    /// Some id below `k` never occurs (e.g. labels {0, 2}).
    pub label_gap: bool,
}

/// Parses a partition file. `k` is one more than the largest id (at least 2).
pub fn parse_partition(text: &str) -> Result<PartitionFile> {
    let mut parts = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let p: usize = line
            .parse()
            .map_err(|_| Error::parse(i + 1, format!("invalid part id `{line}`")))?;
        parts.push(p);
    }
    if parts.is_empty() {
        return Err(Error::parse(1, "empty partition file"));
    }
    let max = *parts.iter().max().unwrap();
    let mut present = vec![false; max + 1];
    for &p in &parts {
        present[p] = true;
    }
    let label_gap = present.iter().any(|&x| !x);
    Ok(PartitionFile {
        assignment: PartitionAssignment::from_parts(parts),
        label_gap,
    })
}

pub fn emit_partition(pa: &PartitionAssignment) -> String {
    let mut out = String::with_capacity(pa.len() * 2);
    for &p in pa.parts() {
        writeln!(out, "{p}").unwrap();
    }
    out
}

pub fn read_partition(path: &Path) -> Result<PartitionFile> {
    parse_partition(&std::fs::read_to_string(path)?)
}

pub fn write_partition(pa: &PartitionAssignment, path: &Path) -> Result<()> {
    Ok(std::fs::write(path, emit_partition(pa))?)
}
