use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mg_core::LevelPrecision;
use crate::vprec::QUAD_BITS;

use super::experiments::ExperimentSpec;

/// CSV header. The trailing `e_alg`, `param` and `label` columns carry the
/// algebraic error, the swept parameter (spectrum fraction, N, e_goal, a
/// constant) and a free-form tag such as the precision mode or a failure.
pub const CSV_COLUMNS: [&str; 22] = [
    "experiment",
    "p",
    "level",
    "h_inv",
    "bits_eps",
    "bits_epsbar",
    "bits_epsdot",
    "bits_epscheck",
    "cycle",
    "e_disc",
    "e_quant",
    "e_iter",
    "e_round",
    "e_fl",
    "e_total",
    "rho_v",
    "kappa",
    "lambda_min",
    "seed",
    "e_alg",
    "param",
    "label",
];

/// One result row; absent values are written as empty cells.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub experiment: String,
    pub p: usize,
    pub level: usize,
    pub h_inv: u64,
    pub bits_eps: u32,
    pub bits_epsbar: u32,
    pub bits_epsdot: u32,
    pub bits_epscheck: u32,
    pub cycle: Option<usize>,
    pub e_disc: Option<f64>,
    pub e_quant: Option<f64>,
    pub e_iter: Option<f64>,
    pub e_round: Option<f64>,
    pub e_fl: Option<f64>,
    pub e_total: Option<f64>,
    pub rho_v: Option<f64>,
    pub kappa: Option<f64>,
    pub lambda_min: Option<f64>,
    pub seed: u64,
    pub e_alg: Option<f64>,
    pub param: Option<f64>,
    pub label: String,
}

impl Row {
    pub fn new(experiment: &str, p: usize, level: usize, seed: u64) -> Self {
        Row {
            experiment: experiment.to_string(),
            p,
            level,
            h_inv: if level == 0 { 0 } else { 1u64 << (level - 1) },
            bits_eps: QUAD_BITS,
            bits_epsbar: QUAD_BITS,
            bits_epsdot: QUAD_BITS,
            bits_epscheck: QUAD_BITS,
            seed,
            ..Row::default()
        }
    }

    pub fn with_prec(mut self, prec: &LevelPrecision) -> Self {
        self.bits_eps = prec.eps.bits();
        self.bits_epsbar = prec.eps_bar.bits();
        self.bits_epsdot = prec.eps_dot.bits();
        self.bits_epscheck = prec.eps_check.bits();
        self
    }

    pub fn label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn param(mut self, v: f64) -> Self {
        self.param = Some(v);
        self
    }
}

/// Writes `rows` to `path`; an empty result is an error and leaves no file.
pub fn write_csv(path: &Path, rows: &[Row]) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::Invalid("no rows to write".into()));
    }
    let tmp = path.with_extension("csv.partial");
    {
        let mut w = csv::Writer::from_path(&tmp)?;
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ManifestStatus {
    Running,
    Complete,
    Failed,
}

/// Run manifest. It is written with status `running` before any
/// computation and rewritten on exit, so a crashed run is recognizable.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub status: ManifestStatus,
    pub spec: Option<ExperimentSpec>,
    /// Free-form results: constants, schedules, PFMG steps.
    pub details: serde_json::Value,
    pub outputs: Vec<PathBuf>,
    pub rows: usize,
    pub error: Option<String>,
}

impl Manifest {
    pub fn new(command: &str, spec: Option<ExperimentSpec>) -> Self {
        Manifest {
            tool: "ppmg".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            status: ManifestStatus::Running,
            spec,
            details: serde_json::Value::Null,
            outputs: Vec::new(),
            rows: 0,
            error: None,
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let s = serde_json::to_string_pretty(self)?;
        fs::write(path, s + "\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }
}
