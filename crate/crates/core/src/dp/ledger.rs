use serde::{Deserialize, Serialize};

use super::params::PrivacyParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageStatus {
    Executed,
    /// The stage ran and returned the halting symbol.
    Halted,
    /// An earlier stage halted; the allocation is still charged.
    Skipped,
}

/// One allocation of privacy budget.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub stage: String,
    pub epsilon: f64,
    pub delta: f64,
    /// Failure mass of a gating stage, added to the total delta.
    pub p_fail: f64,
    pub status: StageStatus,
}

/// Append-only record of the budget charged by a pipeline.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BudgetLedger {
    pub entries: Vec<LedgerEntry>,
}

impl BudgetLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, stage: &str, budget: PrivacyParams, status: StageStatus) {
        self.entries.push(LedgerEntry {
            stage: stage.to_string(),
            epsilon: budget.epsilon,
            delta: budget.delta,
            p_fail: budget.p_fail,
            status,
        });
    }

    pub fn append(&mut self, other: BudgetLedger) {
        self.entries.extend(other.entries);
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total (epsilon, delta) with delta = sum delta_i + sum p_i.
    pub fn compose(&self) -> (f64, f64) {
        ledger_compose(self)
    }
}

/// Correctly rounded floating-point sum (Shewchuk's exact partials).
fn exact_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut partials: Vec<f64> = Vec::new();
    for mut x in xs {
        let mut kept = 0;
        for i in 0..partials.len() {
            let mut y = partials[i];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                partials[kept] = lo;
                kept += 1;
            }
            x = hi;
        }
        partials.truncate(kept);
        partials.push(x);
    }
    // Round the partials (largest last) to the nearest double.
    let mut n = partials.len();
    if n == 0 {
        return 0.0;
    }
    n -= 1;
    let mut hi = partials[n];
    let mut lo = 0.0;
    while n > 0 {
        n -= 1;
        let x = hi;
        let y = partials[n];
        hi = x + y;
        let yr = hi - x;
        lo = y - yr;
        if lo != 0.0 {
            break;
        }
    }
    if n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0)) {
        let y = lo * 2.0;
        let x = hi + y;
        if y == x - hi {
            hi = x;
        }
    }
    hi
}

/// Basic composition with halting-stage failure mass folded into delta.
///
/// Sums are correctly rounded, so splits of one budget recombine exactly.
pub fn ledger_compose(ledger: &BudgetLedger) -> (f64, f64) {
    let eps = exact_sum(ledger.entries.iter().map(|e| e.epsilon));
    let delta = exact_sum(ledger.entries.iter().flat_map(|e| [e.delta, e.p_fail]));
    (eps, delta)
}
