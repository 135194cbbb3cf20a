//! File output: atomic writes, the run manifest, and CSV formatting.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::{io_error, CliError};

/// An output directory collecting files; the manifest is written last and
/// lists everything produced before it.
pub struct OutDir {
    dir: PathBuf,
    outputs: Vec<String>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a str,
    version: &'a str,
    seed: u64,
    config: Value,
    outputs: &'a [String],
}

impl OutDir {
    pub fn create(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(io_error)?;
        Ok(OutDir {
            dir: dir.to_path_buf(),
            outputs: Vec::new(),
        })
    }

    /// Write bytes to `name` atomically (temp file + rename) and record it.
    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let tmp = self.dir.join(format!("{name}.tmp"));
        let final_path = self.dir.join(name);
        fs::write(&tmp, bytes).map_err(io_error)?;
        fs::rename(&tmp, &final_path).map_err(io_error)?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|e| CliError::Config(format!("serialization: {e}")))?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    /// Write the manifest and consume the directory handle.
    pub fn finish(self, command: &str, seed: u64, config: Value) -> Result<(), CliError> {
        let manifest = Manifest {
            command,
            version: env!("CARGO_PKG_VERSION"),
            seed,
            config,
            outputs: &self.outputs,
        };
        let mut text = serde_json::to_string_pretty(&manifest)
            .map_err(|e| CliError::Config(format!("serialization: {e}")))?;
        text.push('\n');
        let tmp = self.dir.join("manifest.json.tmp");
        fs::write(&tmp, text.as_bytes()).map_err(io_error)?;
        fs::rename(tmp, self.dir.join("manifest.json")).map_err(io_error)?;
        Ok(())
    }
}

/// Overlap-table cell: three decimals, optionally with the comma decimal
/// separator of the original tables (fields are quoted as needed by the
/// CSV writer).
pub fn format_overlap(value: f64, appendix_style: bool) -> String {
    let s = format!("{value:.3}");
    if appendix_style {
        s.replace('.', ",")
    } else {
        s
    }
}

/// RFC-4180 CSV bytes from string records.
pub fn csv_bytes(records: &[Vec<String>]) -> Result<Vec<u8>, CliError> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    for record in records {
        writer
            .write_record(record)
            .map_err(|e| CliError::Config(format!("csv: {e}")))?;
    }
    writer
        .into_inner()
        .map_err(|e| CliError::Config(format!("csv: {e}")))
}
