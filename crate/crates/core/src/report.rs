//! Deterministic CSV and JSON report writers.
//!
//! Every report carries the same metadata: artifact name and version,
//! subcommand, unit system, constants set and the full configuration echo.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{OutputFormat, RunConfig};
use crate::error::Result;

pub const ARTIFACT: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize)]
pub struct Metadata<'a> {
    pub artifact: &'static str,
    pub version: &'static str,
    pub subcommand: &'a str,
    pub units: &'static str,
    pub constants: &'static str,
    pub config: &'a RunConfig,
}

impl<'a> Metadata<'a> {
    pub fn new(subcommand: &'a str, config: &'a RunConfig) -> Self {
        Self {
            artifact: ARTIFACT,
            version: VERSION,
            subcommand,
            units: match config.units {
                crate::units::UnitSystem::Natural => "natural",
                crate::units::UnitSystem::Physical => "physical",
            },
            constants: config.constants.name(),
            config,
        }
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Collects report files for one run and writes them in a fixed order.
pub struct ReportWriter<'a> {
    dir: PathBuf,
    format: OutputFormat,
    meta: Metadata<'a>,
    written: Vec<PathBuf>,
}

impl<'a> ReportWriter<'a> {
    pub fn new(dir: &Path, format: OutputFormat, meta: Metadata<'a>) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            format,
            meta,
            written: Vec::new(),
        })
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    /// `{"metadata": …, "result": …}`, pretty-printed.
    pub fn json<T: Serialize>(&mut self, name: &str, result: &T) -> Result<()> {
        if !self.format.json() {
            return Ok(());
        }
        #[derive(Serialize)]
        struct Envelope<'m, 'c, T> {
            metadata: &'m Metadata<'c>,
            result: &'m T,
        }
        let path = self.dir.join(format!("{name}.json"));
        let mut text = serde_json::to_string_pretty(&Envelope { metadata: &self.meta, result })?;
        text.push('\n');
        fs::write(&path, text)?;
        self.written.push(path);
        Ok(())
    }

    /// `#`-prefixed metadata lines, then a header and rows.
    pub fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        if !self.format.csv() {
            return Ok(());
        }
        let path = self.dir.join(format!("{name}.csv"));
        let mut out = Vec::new();
        for (k, v) in [
            ("artifact", self.meta.artifact.to_string()),
            ("version", self.meta.version.to_string()),
            ("subcommand", self.meta.subcommand.to_string()),
            ("units", self.meta.units.to_string()),
            ("constants", self.meta.constants.to_string()),
            ("config", serde_json::to_string(self.meta.config)?),
        ] {
            out.extend_from_slice(format!("# {k}: {v}\n").as_bytes());
        }
        {
            let mut w = csv::WriterBuilder::new().from_writer(&mut out);
            w.write_record(header)?;
            for row in rows {
                w.write_record(row)?;
            }
            w.flush()?;
        }
        fs::write(&path, out)?;
        self.written.push(path);
        Ok(())
    }
}
