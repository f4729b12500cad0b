//! Invocation of an external hMETIS-compatible partitioner.
//!
//! The command line comes from a whitespace-separated template with the
//! placeholders `{bin}`, `{input}`, `{k}` and `{ubfactor}`. The default
//! template is the classic nine-argument hMETIS form with its default
//! options:
//!
//! ```text
//! {bin} {input} {k} {ubfactor} 10 1 1 1 0 0
//! ```
//!
//! `{bin}` resolves to the configured binary, else the `HGBENCH_HMETIS`
//! environment variable, else `hmetis` on `PATH`. The tool is expected to
//! write `<input>.part.<k>` in partition-file format.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::harness::partfile::read_partition;
use crate::hypergraph::PartitionAssignment;

pub const BINARY_ENV: &str = "HGBENCH_HMETIS";
pub const DEFAULT_BINARY: &str = "hmetis";
pub const DEFAULT_TEMPLATE: &str = "{bin} {input} {k} {ubfactor} 10 1 1 1 0 0";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalCommand {
    pub binary: Option<PathBuf>,
    pub template: String,
}

impl Default for ExternalCommand {
    fn default() -> Self {
        Self {
            binary: None,
            template: DEFAULT_TEMPLATE.to_string(),
        }
    }
}

impl ExternalCommand {
    pub fn resolve_binary(&self) -> PathBuf {
        self.binary
            .clone()
            .or_else(|| std::env::var_os(BINARY_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_BINARY))
    }

    /// Expanded argument vector, program first.
    pub fn argv(&self, input: &Path, k: usize, ub_factor: u32) -> Vec<String> {
        let bin = self.resolve_binary();
        self.template
            .split_whitespace()
            .map(|tok| {
                tok.replace("{bin}", &bin.to_string_lossy())
                    .replace("{input}", &input.to_string_lossy())
                    .replace("{k}", &k.to_string())
                    .replace("{ubfactor}", &ub_factor.to_string())
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct ExternalRun {
    pub assignment: PartitionAssignment,
    pub wall_time_ms: f64,
    pub stdout: String,
    pub stderr: String,
}

pub fn run_external_partitioner(
    hgr_path: &Path,
    k: usize,
    ub_factor: u32,
    cmd: &ExternalCommand,
) -> Result<ExternalRun> {
    if k < 2 {
        return Err(Error::contract(format!("external partitioning needs k >= 2, got {k}")));
    }
    let argv = cmd.argv(hgr_path, k, ub_factor);
    let Some((program, args)) = argv.split_first() else {
        return Err(Error::contract("empty external command template"));
    };
    let start = Instant::now();
    let output = match Command::new(program).args(args).output() {
        Ok(o) => o,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(Error::ExternalNotFound(format!(
                "`{program}` (set {BINARY_ENV} or pass an explicit binary)"
            )))
        }
        Err(e) => return Err(e.into()),
    };
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    let stdout = String::from_utf8_lossy(&output.stdout).into_owned();
    let stderr = String::from_utf8_lossy(&output.stderr).into_owned();
    if !output.status.success() {
        return Err(Error::ExternalFailed {
            msg: format!("`{program}` exited with {}", output.status),
            stdout,
            stderr,
        });
    }
    let part_path = PathBuf::from(format!("{}.part.{k}", hgr_path.display()));
    let parsed = read_partition(&part_path).map_err(|e| Error::ExternalFailed {
        msg: format!("could not read {}: {e}", part_path.display()),
        stdout: stdout.clone(),
        stderr: stderr.clone(),
    })?;
    let assignment = PartitionAssignment::new(parsed.assignment.into_parts(), k).map_err(|e| {
        Error::ExternalFailed {
            msg: format!("{}: {e}", part_path.display()),
            stdout: stdout.clone(),
            stderr: stderr.clone(),
        }
    })?;
    Ok(ExternalRun {
        assignment,
        wall_time_ms,
        stdout,
        stderr,
    })
}
