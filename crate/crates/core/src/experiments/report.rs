use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dp::BudgetLedger;
use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

/// Ledger of one private call inside an experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialLedger {
    pub trial: usize,
    pub label: String,
    pub total_epsilon: f64,
    pub total_delta: f64,
    pub ledger: BudgetLedger,
}

impl TrialLedger {
    pub fn new(trial: usize, label: impl Into<String>, ledger: BudgetLedger) -> Self {
        let (total_epsilon, total_delta) = ledger.compose();
        TrialLedger { trial, label: label.into(), total_epsilon, total_delta, ledger }
    }
}

/// Experiment output: one numeric row per trial under fixed columns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub experiment: String,
    /// Set for runs that probe a conjecture and claim nothing.
    pub exploratory: bool,
    pub config: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub summary: BTreeMap<String, f64>,
    pub fitted_constants: BTreeMap<String, f64>,
    pub ledgers: Vec<TrialLedger>,
}

impl ExperimentReport {
    pub fn new(experiment: &str, columns: &[&str], config: BTreeMap<String, String>) -> Self {
        ExperimentReport {
            schema_version: SCHEMA_VERSION,
            experiment: experiment.to_string(),
            exploratory: false,
            config,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: BTreeMap::new(),
            fitted_constants: BTreeMap::new(),
            ledgers: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns)?;
        for row in &self.rows {
            out.write_record(row.iter().map(|x| x.to_string()))?;
        }
        out.flush()?;
        Ok(())
    }

    /// Writes `<experiment>.json` and `<experiment>.csv` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir)?;
        let json = dir.join(format!("{}.json", self.experiment));
        let csv_path = dir.join(format!("{}.csv", self.experiment));
        std::fs::write(&json, serde_json::to_string_pretty(self)?)?;
        self.write_csv(std::fs::File::create(&csv_path)?)?;
        Ok((json, csv_path))
    }
}

/// q-quantile of finite values by the nearest-rank rule.
pub fn quantile(values: &[f64], q: f64) -> f64 {
    let mut v: Vec<f64> = values.iter().copied().filter(|x| !x.is_nan()).collect();
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let k = ((q * v.len() as f64).ceil() as usize).clamp(1, v.len());
    v[k - 1]
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}
