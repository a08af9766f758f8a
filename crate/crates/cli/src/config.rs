use std::fmt;
use std::path::{Path, PathBuf};

use clap::Args;
use eaed_core::de::ScanConfig;
use eaed_core::montecarlo::UpdateOrder;
use eaed_core::{CodeDescriptor, ComponentCode, DeConfig, Decoder, Ensemble, Schedule, SimConfig, WeightPolicy};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Invalid configuration or flags; the process exits with status 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn invalid(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Component code, e.g. `nu9t3`, `nu6t4-shortened`, `nu7t3-even`.
    pub code: String,
    pub decoder: Decoder,
    pub ensemble: Ensemble,
    pub weights: WeightPolicy,
    /// Transition tables are cached here when set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cache_dir: Option<PathBuf>,
    pub channel: ChannelGrid,
    pub de: DeConfig,
    pub scan: ScanSettings,
    pub sim: SimConfig,
    pub search: SearchSettings,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            code: "nu9t3".into(),
            decoder: Decoder::Eaed,
            ensemble: Ensemble::Product,
            weights: WeightPolicy::default(),
            cache_dir: None,
            channel: ChannelGrid::default(),
            de: DeConfig::default(),
            scan: ScanSettings::default(),
            sim: SimConfig::default(),
            search: SearchSettings::default(),
        }
    }
}

/// Operating point and the `(E_s/N_0, T)` grid of `capacity-scan`, in dB.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelGrid {
    pub esn0_db: f64,
    pub t: f64,
    pub esn0_min_db: f64,
    pub esn0_max_db: f64,
    pub esn0_steps: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub t_steps: usize,
}

impl Default for ChannelGrid {
    fn default() -> Self {
        Self {
            esn0_db: 0.0,
            t: 0.0,
            esn0_min_db: 0.0,
            esn0_max_db: 6.0,
            esn0_steps: 61,
            t_min: 0.0,
            t_max: 0.5,
            t_steps: 51,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanSettings {
    pub t_min: f64,
    pub t_max: f64,
    /// Number of grid points including both ends.
    pub steps: usize,
    pub refine_tol: f64,
    pub width_db: f64,
}

impl Default for ScanSettings {
    fn default() -> Self {
        let core = ScanConfig::default();
        Self {
            t_min: 0.0,
            t_max: 0.2,
            steps: 21,
            refine_tol: core.refine_tol,
            width_db: core.width_db,
        }
    }
}

/// Bisection settings of the simulated threshold search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchSettings {
    /// Bracket relative to the DE threshold when `lo_db`/`hi_db` are unset.
    pub offset_lo_db: f64,
    pub offset_hi_db: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lo_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hi_db: Option<f64>,
    pub width_db: f64,
    /// Bracket shifts tried when an end lies on the wrong side.
    pub max_expansions: usize,
    /// Erasure thresholds of `reproduce-fig5`; the DE optimum is added.
    pub t_values: Vec<f64>,
}

impl Default for SearchSettings {
    fn default() -> Self {
        Self {
            offset_lo_db: 0.0,
            offset_hi_db: 0.2,
            lo_db: None,
            hi_db: None,
            width_db: 0.005,
            max_expansions: 8,
            t_values: vec![0.0, 0.02, 0.04, 0.06, 0.08, 0.1],
        }
    }
}

fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..steps).map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64).collect(),
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn descriptor(&self) -> anyhow::Result<CodeDescriptor> {
        self.code.parse().map_err(|e: eaed_core::Error| invalid(e.to_string()))
    }

    pub fn component(&self) -> anyhow::Result<ComponentCode> {
        self.descriptor()?.build().map_err(|e| invalid(e.to_string()))
    }

    pub fn scan_config(&self) -> anyhow::Result<ScanConfig> {
        let s = &self.scan;
        if s.t_min != 0.0 || !(s.t_max > 0.0) || s.steps < 2 {
            return Err(invalid("the T scan must start at 0 and have at least 2 points"));
        }
        Ok(ScanConfig {
            grid: linspace(s.t_min, s.t_max, s.steps),
            refine_tol: s.refine_tol,
            width_db: s.width_db,
        })
    }

    pub fn esn0_grid(&self) -> Vec<f64> {
        let c = &self.channel;
        linspace(c.esn0_min_db, c.esn0_max_db, c.esn0_steps)
    }

    pub fn t_grid(&self) -> Vec<f64> {
        let c = &self.channel;
        linspace(c.t_min, c.t_max, c.t_steps)
    }

    /// Simulation settings with the top-level decoder.
    pub fn sim_config(&self) -> anyhow::Result<SimConfig> {
        let cfg = SimConfig {
            decoder: self.decoder,
            ..self.sim.clone()
        };
        cfg.validate().map_err(|e| invalid(e.to_string()))?;
        Ok(cfg)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        self.descriptor()?;
        if !(self.channel.t >= 0.0) || !(self.channel.t_min >= 0.0) {
            return Err(invalid("erasure thresholds must be non-negative"));
        }
        if !(self.de.bracket_lo_db < self.de.bracket_hi_db) {
            return Err(invalid("the DE bracket is empty"));
        }
        if !(self.search.width_db > 0.0) || !(self.scan.width_db > 0.0) || !(self.de.width_db > 0.0) {
            return Err(invalid("bisection widths must be positive"));
        }
        if let (Some(lo), Some(hi)) = (self.search.lo_db, self.search.hi_db) {
            if !(lo < hi) {
                return Err(invalid("the simulation bracket is empty"));
            }
        }
        if !(self.search.offset_lo_db < self.search.offset_hi_db) {
            return Err(invalid("the simulation bracket offsets are empty"));
        }
        self.sim_config()?;
        Ok(())
    }

    /// SHA-256 of the canonical JSON form, hex encoded.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(json.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Flags that override the configuration file.
#[derive(Debug, Default, Clone, Args)]
pub struct Overrides {
    #[arg(long, global = true)]
    pub code: Option<String>,
    /// eaed or eaed-plus.
    #[arg(long, global = true)]
    pub decoder: Option<String>,
    /// product or staircase.
    #[arg(long, global = true)]
    pub ensemble: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub esn0_db: Option<f64>,
    /// Erasure threshold.
    #[arg(long = "t", global = true)]
    pub t: Option<f64>,
    #[arg(long, global = true)]
    pub t_min: Option<f64>,
    #[arg(long, global = true)]
    pub t_max: Option<f64>,
    /// Scan grid points.
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub esn0_min_db: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub esn0_max_db: Option<f64>,
    #[arg(long, global = true)]
    pub esn0_steps: Option<usize>,
    #[arg(long, global = true)]
    pub t_steps: Option<usize>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub bracket_lo_db: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub bracket_hi_db: Option<f64>,
    /// emp or imp.
    #[arg(long, global = true)]
    pub schedule: Option<String>,
    /// alternating or flooding.
    #[arg(long, global = true)]
    pub order: Option<String>,
    #[arg(long, global = true)]
    pub iters: Option<usize>,
    #[arg(long, global = true)]
    pub target_ber: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Per-probe bit budget.
    #[arg(long, global = true)]
    pub max_bits: Option<u64>,
    #[arg(long, global = true)]
    pub max_frames: Option<u64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lo_db: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub hi_db: Option<f64>,
    /// Final width of the simulated threshold search.
    #[arg(long, global = true)]
    pub width_db: Option<f64>,
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
}

fn parse<T: std::str::FromStr<Err = eaed_core::Error>>(s: &str) -> anyhow::Result<T> {
    s.parse().map_err(|e: eaed_core::Error| invalid(e.to_string()))
}

impl Overrides {
    pub fn apply(&self, cfg: &mut ExperimentConfig) -> anyhow::Result<()> {
        if let Some(v) = &self.code {
            cfg.code = v.clone();
        }
        if let Some(v) = &self.decoder {
            cfg.decoder = parse(v)?;
        }
        if let Some(v) = &self.ensemble {
            cfg.ensemble = parse(v)?;
        }
        if let Some(v) = &self.schedule {
            cfg.sim.schedule = parse::<Schedule>(v)?;
        }
        if let Some(v) = &self.order {
            cfg.sim.order = parse::<UpdateOrder>(v)?;
        }
        let set = |slot: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *slot = v;
            }
        };
        set(&mut cfg.channel.esn0_db, self.esn0_db);
        set(&mut cfg.channel.t, self.t);
        set(&mut cfg.scan.t_min, self.t_min);
        set(&mut cfg.scan.t_max, self.t_max);
        set(&mut cfg.channel.esn0_min_db, self.esn0_min_db);
        set(&mut cfg.channel.esn0_max_db, self.esn0_max_db);
        set(&mut cfg.de.bracket_lo_db, self.bracket_lo_db);
        set(&mut cfg.de.bracket_hi_db, self.bracket_hi_db);
        set(&mut cfg.sim.target_ber, self.target_ber);
        set(&mut cfg.search.width_db, self.width_db);
        if let Some(v) = self.steps {
            cfg.scan.steps = v;
        }
        if let Some(v) = self.esn0_steps {
            cfg.channel.esn0_steps = v;
        }
        if let Some(v) = self.t_steps {
            cfg.channel.t_steps = v;
        }
        if let Some(v) = self.iters {
            cfg.sim.iterations = v;
        }
        if let Some(v) = self.seed {
            cfg.sim.seed = v;
        }
        if let Some(v) = self.max_bits {
            cfg.sim.max_bits = v;
        }
        if self.max_frames.is_some() {
            cfg.sim.max_frames = self.max_frames;
        }
        if self.lo_db.is_some() {
            cfg.search.lo_db = self.lo_db;
        }
        if self.hi_db.is_some() {
            cfg.search.hi_db = self.hi_db;
        }
        if self.cache_dir.is_some() {
            cfg.cache_dir = self.cache_dir.clone();
        }
        Ok(())
    }
}
