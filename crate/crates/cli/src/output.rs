//! CSV files and the run manifest written beside each of them.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

/// Inputs needed to reproduce one output file.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub params_json: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tool_version: String,
}

impl RunManifest {
    pub fn new<A: Serialize>(command: &str, args: &A, seed: Option<u64>) -> Result<Self> {
        Ok(Self {
            command: command.to_owned(),
            params_json: serde_json::to_value(args)?,
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
        })
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Output directory plus the manifest shared by every file of one run.
pub struct Sink {
    dir: PathBuf,
    manifest: RunManifest,
}

impl Sink {
    pub fn new(dir: &Path, manifest: RunManifest) -> Result<Self> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            manifest,
        })
    }

    /// Writes `name` with an optional leading `# ` comment line, a header row
    /// and `rows`, then its manifest.
    pub fn write_csv<I>(&self, name: &str, comment: Option<&str>, header: &[&str], rows: I) -> Result<PathBuf>
    where
        I: IntoIterator<Item = Vec<String>>,
    {
        let path = self.dir.join(name);
        let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        let mut buf = BufWriter::new(file);
        if let Some(c) = comment {
            writeln!(buf, "# {c}")?;
        }
        let mut w = csv::Writer::from_writer(buf);
        w.write_record(header)?;
        for row in rows {
            w.write_record(&row)?;
        }
        w.flush()?;
        self.write_manifest(&path)?;
        Ok(path)
    }

    fn write_manifest(&self, data_path: &Path) -> Result<()> {
        let mut name = data_path.file_name().expect("data file has a name").to_os_string();
        name.push(".manifest.json");
        let path = data_path.with_file_name(name);
        let mut text = serde_json::to_string_pretty(&self.manifest)?;
        text.push('\n');
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
    }
}
