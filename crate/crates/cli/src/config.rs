//! Run configuration: defaults, then a TOML config file, then command-line flags.
//!
//! ```toml
//! material = "silica.toml"
//! a = 1.0e-6
//! T = 300.0
//! policy = "dc"
//! format = "json"
//! deterministic = true
//!
//! [tolerances]
//! relative_tolerance = 1e-9
//! term_cutoff_ratio = 1e-10
//! ```

use crate::fail::CliError;
use lifshitz::engine::Numerics;
use lifshitz::reflection::ReflectionPolicy;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub material: Option<PathBuf>,
    pub material2: Option<PathBuf>,
    pub atom: Option<String>,
    pub a: Option<f64>,
    #[serde(rename = "T")]
    pub temperature: Option<f64>,
    #[serde(rename = "R")]
    pub radius: Option<f64>,
    pub policy: Option<ReflectionPolicy>,
    pub sweep: Option<String>,
    pub format: Option<Format>,
    pub deterministic: Option<bool>,
    pub threads: Option<usize>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

#[derive(Debug, Default, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub relative_tolerance: Option<f64>,
    pub absolute_floor: Option<f64>,
    pub max_subdivisions: Option<usize>,
    pub term_cutoff_ratio: Option<f64>,
    pub max_matsubara_index: Option<usize>,
}

impl Tolerances {
    /// `self` wins over `other` field by field.
    pub fn or(self, other: Tolerances) -> Tolerances {
        Tolerances {
            relative_tolerance: self.relative_tolerance.or(other.relative_tolerance),
            absolute_floor: self.absolute_floor.or(other.absolute_floor),
            max_subdivisions: self.max_subdivisions.or(other.max_subdivisions),
            term_cutoff_ratio: self.term_cutoff_ratio.or(other.term_cutoff_ratio),
            max_matsubara_index: self.max_matsubara_index.or(other.max_matsubara_index),
        }
    }

    pub fn numerics(&self) -> Result<Numerics, CliError> {
        let mut n = Numerics::default();
        let q = &mut n.quadrature;
        let s = &mut n.summation;
        q.relative_tolerance = self.relative_tolerance.unwrap_or(q.relative_tolerance);
        q.absolute_floor = self.absolute_floor.unwrap_or(q.absolute_floor);
        q.max_subdivisions = self.max_subdivisions.unwrap_or(q.max_subdivisions);
        s.term_cutoff_ratio = self.term_cutoff_ratio.unwrap_or(s.term_cutoff_ratio);
        s.max_matsubara_index = self.max_matsubara_index.unwrap_or(s.max_matsubara_index);
        n.validate()?;
        Ok(n)
    }
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let mut cfg: FileConfig =
            toml::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut cfg.material, &mut cfg.material2].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }
}

/// Fully resolved settings of one invocation; hashed into every output header.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub material: Option<PathBuf>,
    pub material2: Option<PathBuf>,
    pub atom: Option<String>,
    pub a: f64,
    #[serde(rename = "T")]
    pub temperature: f64,
    #[serde(rename = "R")]
    pub radius: Option<f64>,
    pub policy: ReflectionPolicy,
    pub sweep: Option<String>,
    pub format: Format,
    pub deterministic: bool,
    pub threads: Option<usize>,
    pub numerics: Numerics,
    /// Command-specific settings.
    pub extra: serde_json::Value,
}

impl RunConfig {
    /// SHA-256 over the resolved settings and the bytes of every input file.
    pub fn hash(&self, inputs: &[&Path]) -> String {
        let mut h = Sha256::new();
        h.update(serde_json::to_string(self).expect("config is serialisable").as_bytes());
        for p in inputs {
            h.update(p.display().to_string().as_bytes());
            if let Ok(bytes) = std::fs::read(p) {
                h.update(&bytes);
            }
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn input_files(&self) -> Vec<&Path> {
        [&self.material, &self.material2].into_iter().flatten().map(|p| p.as_path()).collect()
    }
}
