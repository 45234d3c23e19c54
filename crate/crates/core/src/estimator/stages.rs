use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::config::{validate_stage_inputs, EstimatorConfig, EstimatorConstants};
use crate::dp::{BudgetLedger, PrivacyParams, SeededRng, StageStatus};
use crate::error::Result;
use crate::spectral::{compress, rect_svd, svd_full, Projector, SpectralDecomposition, SymMatrix};

/// Spectral quantities of a symmetric matrix or of the embedding of a rectangular one.
#[derive(Clone, Debug)]
pub(crate) struct SpectralView {
    /// Rank used by the coherence and noise formulas (2r for an embedding).
    pub rank_eff: usize,
    /// Dimension of the symmetric matrix the formulas refer to.
    pub dim_total: usize,
    pub gap: f64,
    pub coherence: f64,
    /// Top-r left singular basis of the released block.
    pub basis: DMatrix<f64>,
}

impl SpectralView {
    pub fn symmetric(dec: &SpectralDecomposition, r: usize) -> Self {
        let basis = dec.top_basis(r);
        let coherence = dec.dim() as f64 / r as f64
            * Projector::from_basis_unchecked(basis.clone()).max_diagonal();
        SpectralView {
            rank_eff: r,
            dim_total: dec.dim(),
            gap: dec.sigma_at(r) - dec.sigma_at(r + 1),
            coherence,
            basis,
        }
    }

    pub fn rectangular(b: &DMatrix<f64>, r: usize) -> Result<Self> {
        let (n, m) = b.shape();
        if r == 0 || r > n.min(m) {
            return Err(crate::Error::Rank { requested: r, available: n.min(m) });
        }
        let svd = rect_svd(b)?;
        let left = svd.u.columns(0, r).into_owned();
        let right = svd.v.columns(0, r).into_owned();
        let pl = Projector::from_basis_unchecked(left.clone()).max_diagonal();
        let pr = Projector::from_basis_unchecked(right).max_diagonal();
        let total = n + m;
        Ok(SpectralView {
            rank_eff: 2 * r,
            dim_total: total,
            gap: svd.sigma_at(r) - svd.sigma_at(r + 1),
            coherence: total as f64 / (2 * r) as f64 * pl.max(pr),
            basis: left,
        })
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn released_dim(&self) -> usize {
        self.basis.nrows()
    }
}

fn status(halted: bool) -> StageStatus {
    if halted {
        StageStatus::Halted
    } else {
        StageStatus::Executed
    }
}

/// Noisy gap, or None when it falls below the halting threshold.
pub(crate) fn gap_stage(
    view: &SpectralView,
    delta_adj: f64,
    constant: f64,
    budget: PrivacyParams,
    rng: &mut SeededRng,
    ledger: &mut BudgetLedger,
    label: &str,
) -> Result<Option<f64>> {
    budget.check_gaussian_regime()?;
    let log_d = (1.0 / budget.delta).ln().sqrt();
    let std = constant.sqrt() * delta_adj * log_d / budget.epsilon;
    let mut stream = rng.substream(label);
    let noisy = view.gap + stream.gaussian(std);
    let threshold = if rng.noise_off() {
        0.0
    } else {
        constant * delta_adj * log_d / budget.epsilon * (1.0 / budget.p_fail).ln().sqrt()
    };
    let halted = noisy < threshold;
    ledger.record(label, budget, status(halted));
    Ok(if halted { None } else { Some(noisy) })
}

/// exp(ln mu + N(0, C Delta^2 ln(1/delta) / (gap_hat^2 eps^2))).
pub(crate) fn coherence_stage(
    view: &SpectralView,
    gap_hat: f64,
    delta_adj: f64,
    constant: f64,
    budget: PrivacyParams,
    rng: &mut SeededRng,
    ledger: &mut BudgetLedger,
    label: &str,
) -> Result<f64> {
    budget.check_gaussian_regime()?;
    let std = constant.sqrt() * delta_adj * (1.0 / budget.delta).ln().sqrt() / (gap_hat * budget.epsilon);
    let mut stream = rng.substream(label);
    let noise = stream.gaussian(std);
    ledger.record(label, budget, StageStatus::Executed);
    Ok((view.coherence.ln() + noise).exp())
}

/// Haar-like random r-dimensional subspace of R^n.
pub(crate) fn random_projector(n: usize, r: usize, rng: &mut SeededRng) -> Projector {
    let g = DMatrix::from_fn(n, r, |_, _| rng.standard_normal());
    let q = g.qr().q();
    Projector::from_basis_unchecked(q.columns(0, r).into_owned())
}

/// Result of the private projector.
#[derive(Clone, Debug)]
pub struct ProjectorRelease {
    pub projector: Projector,
    pub gap_hat: Option<f64>,
    pub mu_hat: Option<f64>,
    pub ledger: BudgetLedger,
    pub used_default_random_subspace: bool,
}

const GAP: &str = "gap";
const COHERENCE: &str = "log-coherence";
const PERTURB: &str = "projector-perturbation";

pub(crate) fn projector_from_view(
    view: &SpectralView,
    delta_adj: f64,
    constants: &EstimatorConstants,
    params: PrivacyParams,
    rng: &mut SeededRng,
    prefix: &str,
) -> Result<ProjectorRelease> {
    let mut ledger = BudgetLedger::new();
    let name = |s: &str| format!("{prefix}{s}");
    let gap_budget = params.split(0.25, 0.25, 0.5);
    let coh_budget = params.split(0.25, 0.25, 0.5);
    let perturb_budget = params.split(0.5, 0.5, 0.0);
    let n = view.released_dim();
    let r = view.rank();

    let gap_hat = gap_stage(view, delta_adj, constants.gap, gap_budget, rng, &mut ledger, &name(GAP))?;
    let Some(gap_hat) = gap_hat else {
        ledger.record(&name(COHERENCE), coh_budget, StageStatus::Skipped);
        ledger.record(&name(PERTURB), perturb_budget, StageStatus::Skipped);
        let mut stream = rng.substream(&name("default-subspace"));
        return Ok(ProjectorRelease {
            projector: random_projector(n, r, &mut stream),
            gap_hat: None,
            mu_hat: None,
            ledger,
            used_default_random_subspace: true,
        });
    };
    let mu_hat = coherence_stage(
        view,
        gap_hat,
        delta_adj,
        constants.coherence,
        coh_budget,
        rng,
        &mut ledger,
        &name(COHERENCE),
    )?;

    perturb_budget.check_gaussian_regime()?;
    let projector = if rng.noise_off() {
        Projector::from_basis_unchecked(view.basis.clone())
    } else {
        let scale = constants.projector * delta_adj * (view.rank_eff as f64 * mu_hat).sqrt()
            / ((view.dim_total as f64).sqrt() * gap_hat)
            * (1.0 / perturb_budget.delta).ln().sqrt()
            / perturb_budget.epsilon;
        let mut stream = rng.substream(&name(PERTURB));
        let p = &view.basis * view.basis.transpose();
        let s = p + DMatrix::from_fn(n, n, |_, _| stream.gaussian(scale));
        let dec = svd_full(&SymMatrix::from_computed(&s * s.transpose()));
        Projector::from_basis_unchecked(dec.top_basis(r))
    };
    ledger.record(&name(PERTURB), perturb_budget, StageStatus::Executed);
    Ok(ProjectorRelease {
        projector,
        gap_hat: Some(gap_hat),
        mu_hat: Some(mu_hat),
        ledger,
        used_default_random_subspace: false,
    })
}

/// Private gap of a symmetric matrix; the whole budget goes to one noisy release.
pub fn private_gap(
    m: &SymMatrix,
    r: usize,
    delta_adj: f64,
    constant: f64,
    params: PrivacyParams,
    rng: &mut SeededRng,
    ledger: &mut BudgetLedger,
) -> Result<Option<f64>> {
    validate_stage_inputs(r, m.dim(), delta_adj, &params)?;
    let view = SpectralView::symmetric(&svd_full(m), r);
    gap_stage(&view, delta_adj, constant, params, rng, ledger, GAP)
}

/// Private rank-r coherence; half the budget buys the gap estimate it is scaled by.
pub fn private_coherence(
    m: &SymMatrix,
    r: usize,
    delta_adj: f64,
    constants: &EstimatorConstants,
    params: PrivacyParams,
    rng: &mut SeededRng,
    ledger: &mut BudgetLedger,
) -> Result<Option<f64>> {
    constants.validate()?;
    validate_stage_inputs(r, m.dim(), delta_adj, &params)?;
    let view = SpectralView::symmetric(&svd_full(m), r);
    let half = params.split(0.5, 0.5, 0.5);
    match gap_stage(&view, delta_adj, constants.gap, half, rng, ledger, GAP)? {
        None => {
            ledger.record(COHERENCE, half, StageStatus::Skipped);
            Ok(None)
        }
        Some(g) => coherence_stage(&view, g, delta_adj, constants.coherence, half, rng, ledger, COHERENCE)
            .map(Some),
    }
}

/// Private top-r projector of a symmetric matrix.
pub fn private_projector(
    m: &SymMatrix,
    r: usize,
    delta_adj: f64,
    constants: &EstimatorConstants,
    params: PrivacyParams,
    rng: &mut SeededRng,
) -> Result<ProjectorRelease> {
    constants.validate()?;
    validate_stage_inputs(r, m.dim(), delta_adj, &params)?;
    let view = SpectralView::symmetric(&svd_full(m), r);
    projector_from_view(&view, delta_adj, constants, params, rng, "")
}

/// Private top-r left singular subspace of an n x m matrix, released through
/// the n x n block of its symmetric embedding.
pub fn private_projector_rect(
    b: &DMatrix<f64>,
    r: usize,
    delta_adj: f64,
    constants: &EstimatorConstants,
    params: PrivacyParams,
    rng: &mut SeededRng,
) -> Result<ProjectorRelease> {
    constants.validate()?;
    validate_stage_inputs(r, b.nrows().min(b.ncols()), delta_adj, &params)?;
    let view = SpectralView::rectangular(b, r)?;
    projector_from_view(&view, delta_adj, constants, params, rng, "")
}

/// Output of the private low-rank estimator.
#[derive(Clone, Debug)]
pub struct PrivateSpectralResult {
    pub m_hat: SymMatrix,
    pub p_hat: Projector,
    pub gap_hat: Option<f64>,
    pub mu_hat: Option<f64>,
    pub ledger: BudgetLedger,
    pub used_default_random_subspace: bool,
}

/// Summary suitable for JSON reports.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReleaseSummary {
    pub gap_hat: Option<f64>,
    pub mu_hat: Option<f64>,
    pub used_default_random_subspace: bool,
    pub ledger: BudgetLedger,
    pub total_epsilon: f64,
    pub total_delta: f64,
}

impl PrivateSpectralResult {
    pub fn summary(&self) -> ReleaseSummary {
        let (e, d) = self.ledger.compose();
        ReleaseSummary {
            gap_hat: self.gap_hat,
            mu_hat: self.mu_hat,
            used_default_random_subspace: self.used_default_random_subspace,
            ledger: self.ledger.clone(),
            total_epsilon: e,
            total_delta: d,
        }
    }
}

/// Private rank-r approximation U_hat (U_hat^T M U_hat + W) U_hat^T.
pub fn private_low_rank(m: &SymMatrix, cfg: &EstimatorConfig, rng: &mut SeededRng) -> Result<PrivateSpectralResult> {
    cfg.validate(m.dim())?;
    let dec = svd_full(m);
    low_rank_from_decomposition(m, &dec, cfg, rng, "")
}

pub(crate) fn low_rank_from_decomposition(
    m: &SymMatrix,
    dec: &SpectralDecomposition,
    cfg: &EstimatorConfig,
    rng: &mut SeededRng,
    prefix: &str,
) -> Result<PrivateSpectralResult> {
    let r = cfg.rank;
    let view = SpectralView::symmetric(dec, r);
    let proj_budget = cfg.params.split(0.5, 0.5, 1.0);
    let core_budget = cfg.params.split(0.5, 0.5, 0.0);
    let release = projector_from_view(&view, cfg.delta_adj, &cfg.constants, proj_budget, rng, prefix)?;
    let mut ledger = release.ledger;
    core_budget.check_gaussian_regime()?;
    let std = cfg.constants.low_rank.sqrt() * cfg.delta_adj * (1.0 / core_budget.delta).ln().sqrt()
        / core_budget.epsilon;
    let mut stream = rng.substream(&format!("{prefix}low-rank-core"));
    let mut w = DMatrix::zeros(r, r);
    for i in 0..r {
        for j in i..r {
            let x = stream.gaussian(std);
            w[(i, j)] = x;
            w[(j, i)] = x;
        }
    }
    ledger.record(&format!("{prefix}low-rank-core"), core_budget, StageStatus::Executed);
    let m_hat = compress(m, release.projector.basis(), Some(&w));
    Ok(PrivateSpectralResult {
        m_hat,
        p_hat: release.projector,
        gap_hat: release.gap_hat,
        mu_hat: release.mu_hat,
        ledger,
        used_default_random_subspace: release.used_default_random_subspace,
    })
}

/// Ledger of a low-rank estimator run that never started.
pub(crate) fn skipped_low_rank_ledger(params: PrivacyParams, prefix: &str) -> BudgetLedger {
    let mut ledger = BudgetLedger::new();
    let proj = params.split(0.5, 0.5, 1.0);
    for (name, b) in [
        (GAP, proj.split(0.25, 0.25, 0.5)),
        (COHERENCE, proj.split(0.25, 0.25, 0.5)),
        (PERTURB, proj.split(0.5, 0.5, 0.0)),
        ("low-rank-core", params.split(0.5, 0.5, 0.0)),
    ] {
        ledger.record(&format!("{prefix}{name}"), b, StageStatus::Skipped);
    }
    ledger
}
