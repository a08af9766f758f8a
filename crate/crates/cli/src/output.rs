use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)?;
    Ok(())
}

/// Where a command's artifacts go.
#[derive(Debug, Clone)]
pub struct Sink {
    pub csv: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

impl Sink {
    pub fn new(out: Option<PathBuf>, summary: Option<PathBuf>) -> Self {
        let summary = summary.or_else(|| out.as_ref().map(|p| p.with_extension("json")));
        Self { csv: out, summary }
    }

    /// CSV table preceded by `#` lines with the version, the config hash and
    /// the resolved config as JSON. Printed to stdout without `--out`.
    pub fn table(
        &self,
        command: &str,
        cfg: &ExperimentConfig,
        header: &[&str],
        rows: &[Vec<String>],
    ) -> anyhow::Result<()> {
        let mut buf = Vec::new();
        writeln!(buf, "# eaed {VERSION} {command}")?;
        writeln!(buf, "# config_hash: {}", cfg.hash())?;
        writeln!(buf, "# config: {}", serde_json::to_string(cfg)?)?;
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(header)?;
            for r in rows {
                w.write_record(r)?;
            }
            w.flush()?;
        }
        match &self.csv {
            Some(p) => write_atomic(p, &buf),
            None => {
                std::io::stdout().write_all(&buf)?;
                Ok(())
            }
        }
    }

    pub fn summary<T: Serialize>(&self, command: &str, cfg: &ExperimentConfig, result: &T) -> anyhow::Result<()> {
        let Some(path) = &self.summary else {
            return Ok(());
        };
        let doc = Summary {
            version: VERSION.into(),
            command: command.into(),
            config_hash: cfg.hash(),
            config: cfg.clone(),
            result: serde_json::to_value(result)?,
        };
        write_atomic(path, serde_json::to_string_pretty(&doc)?.as_bytes())
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Summary {
    pub version: String,
    pub command: String,
    pub config_hash: String,
    pub config: ExperimentConfig,
    pub result: serde_json::Value,
}

/// Completed points of an interrupted run, tied to one config hash.
#[derive(Debug, Serialize, Deserialize)]
pub struct Checkpoint<T> {
    pub config_hash: String,
    pub points: Vec<T>,
}

impl<T: Serialize + for<'de> Deserialize<'de>> Checkpoint<T> {
    /// Points saved for `hash`, or nothing when the file is missing or stale.
    pub fn load(path: &Path, hash: &str) -> Vec<T> {
        let Ok(text) = std::fs::read_to_string(path) else {
            return Vec::new();
        };
        match serde_json::from_str::<Checkpoint<T>>(&text) {
            Ok(c) if c.config_hash == hash => c.points,
            _ => {
                eprintln!("ignoring checkpoint {} (different configuration)", path.display());
                Vec::new()
            }
        }
    }

    pub fn save(path: &Path, hash: &str, points: &[T]) -> anyhow::Result<()>
    where
        T: Clone,
    {
        let c = Checkpoint {
            config_hash: hash.to_string(),
            points: points.to_vec(),
        };
        write_atomic(path, serde_json::to_string(&c)?.as_bytes())
    }
}
