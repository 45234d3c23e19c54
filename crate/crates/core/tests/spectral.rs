mod common;

use coherent_dp::dp::{BudgetLedger, PrivacyParams, SeededRng};
use coherent_dp::estimator::{
    coherence_gaussian_check, coherence_sensitivity_check, private_coherence, private_gap, private_low_rank,
    private_projector, EstimatorConfig, EstimatorConstants,
};
use coherent_dp::spectral::{
    adjacency_distance, basic_coherence, best_rank_r, coherence_r, spectral_gap, subspace_closeness, svd_full,
    symmetrize_embed, top_r_projector, wedin_bound_check, Projector, SymMatrix,
};
use nalgebra::{DMatrix, DVector};

use common::*;

fn diag(values: &[f64]) -> SymMatrix {
    SymMatrix::new(DMatrix::from_diagonal(&DVector::from_column_slice(values))).unwrap()
}

fn ones(n: usize) -> SymMatrix {
    SymMatrix::new(DMatrix::from_element(n, n, 1.0)).unwrap()
}

fn e1(n: usize) -> SymMatrix {
    let mut m = DMatrix::zeros(n, n);
    m[(0, 0)] = 1.0;
    SymMatrix::new(m).unwrap()
}

fn close(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> bool {
    (a - b).amax() <= tol
}

#[test]
fn signed_diagonal_decomposition() {
    let dec = svd_full(&diag(&[3.0, -2.0, 1.0]));
    assert_eq!(dec.sigma.len(), 3);
    for (s, e) in dec.sigma.iter().zip([3.0, 2.0, 1.0]) {
        assert!((s - e).abs() < 1e-12);
    }
    let u2 = dec.u.column(1);
    assert!((u2[1] - 1.0).abs() < 1e-12 && u2[0].abs() < 1e-12 && u2[2].abs() < 1e-12);
    assert_eq!(dec.signs[1], -1.0);
}

#[test]
fn projector_examples() {
    let p = top_r_projector(&svd_full(&SymMatrix::identity(3)), 3).unwrap();
    assert!(close(&p.matrix(), &DMatrix::identity(3, 3), 1e-12));
    let p = top_r_projector(&svd_full(&ones(4)), 1).unwrap();
    assert!(close(&p.matrix(), &DMatrix::from_element(4, 4, 0.25), 1e-12));
    let p = top_r_projector(&svd_full(&diag(&[3.0, 2.0, 1.0])), 2).unwrap();
    assert!(close(&p.matrix(), &DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, 0.0])), 1e-12));
}

#[test]
fn coherence_extremes() {
    assert!((coherence_r(&ones(8), 1).unwrap() - 1.0).abs() < 1e-12);
    assert!((coherence_r(&e1(8), 1).unwrap() - 8.0).abs() < 1e-12);
    assert!((basic_coherence(&SymMatrix::identity(5)) - 5.0).abs() < 1e-12);
    assert!((basic_coherence(&ones(6).scale(1.0 / 6.0)) - 1.0).abs() < 1e-12);
}

#[test]
fn incoherent_spike_on_identity() {
    let n = 16;
    let m = ones(n).add(&SymMatrix::identity(n).scale(1.0 / n as f64)).unwrap();
    let mu = coherence_r(&m, 1).unwrap();
    assert!((mu - oracle_coherence(&to_rows(m.as_matrix()), 1)).abs() < 1e-10);
    assert!(mu <= 1.0 + 1e-10);
    // The flat eigenspace admits bases of any coherence; the returned basis is one of them.
    let basic = basic_coherence(&m);
    assert!(basic >= mu && basic <= n as f64 + 1e-9);
}

#[test]
fn gap_examples() {
    assert_eq!(spectral_gap(&svd_full(&SymMatrix::identity(3)), 1).unwrap(), 0.0);
    assert!((spectral_gap(&svd_full(&diag(&[3.0, 1.0, 1.0])), 1).unwrap() - 2.0).abs() < 1e-12);
    assert!((spectral_gap(&svd_full(&diag(&[5.0, 5.0, 2.0])), 2).unwrap() - 3.0).abs() < 1e-12);
}

#[test]
fn closeness_of_rotated_planes() {
    let theta = std::f64::consts::FRAC_PI_6;
    let u = DMatrix::from_row_slice(4, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
    let rotated = DMatrix::from_row_slice(4, 2, &[theta.cos(), 0.0, 0.0, 1.0, theta.sin(), 0.0, 0.0, 0.0]);
    let p = Projector::from_basis(rotated, 1e-10).unwrap();
    assert!((subspace_closeness(&p, &u).unwrap() - 0.5).abs() < 1e-12);
    let orth = Projector::from_basis(DMatrix::from_row_slice(4, 2, &[0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0]), 1e-10)
        .unwrap();
    assert!((subspace_closeness(&orth, &u).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn adjacency_distance_examples() {
    let zero = SymMatrix::new(DMatrix::zeros(3, 3)).unwrap();
    let mut e = DMatrix::zeros(3, 3);
    e[(0, 1)] = 1.0;
    e[(1, 0)] = 1.0;
    let e = SymMatrix::new(e).unwrap();
    assert_eq!(adjacency_distance(&e, &e).unwrap(), 0.0);
    assert!((adjacency_distance(&zero, &e).unwrap() - 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn embedding_examples() {
    let one = symmetrize_embed(&DMatrix::from_element(1, 1, 1.0)).unwrap();
    assert_eq!(one.as_matrix(), &DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
    assert_eq!(svd_full(&one).sigma, vec![1.0, 1.0]);
    let zero = symmetrize_embed(&DMatrix::zeros(2, 3)).unwrap();
    assert_eq!(zero.as_matrix(), &DMatrix::zeros(5, 5));
    let d = symmetrize_embed(&DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0])).unwrap();
    let sigma = svd_full(&d).sigma;
    for (s, e) in sigma.iter().zip([2.0, 2.0, 1.0, 1.0]) {
        assert!((s - e).abs() < 1e-12);
    }
}

#[test]
fn wedin_on_perturbed_diagonal() {
    let m = diag(&[3.0, 1.0]);
    let mp = SymMatrix::new(DMatrix::from_row_slice(2, 2, &[3.0, 0.1, 0.1, 1.0])).unwrap();
    let rep = wedin_bound_check(&m, &mp, 1).unwrap();
    assert!(rep.hypothesis && rep.holds && rep.lhs > 0.0);
}

#[test]
fn coherence_sensitivity_rank_one_perturbation() {
    let m = diag(&[10.0, 1.0, 0.5, 0.0]);
    let mut e = DMatrix::zeros(4, 4);
    e[(0, 1)] = 1.0;
    e[(1, 0)] = 1.0;
    let e = SymMatrix::new(e).unwrap();
    let rep = coherence_sensitivity_check(&m, &e, 1).unwrap();
    assert!((rep.delta_adj - 2f64.sqrt()).abs() < 1e-12);
    assert!(rep.hypothesis && rep.holds);
    let zero = SymMatrix::new(DMatrix::zeros(4, 4)).unwrap();
    let rep = coherence_sensitivity_check(&m, &zero, 1).unwrap();
    assert_eq!(rep.mu_perturbed, rep.mu);
}

fn params() -> PrivacyParams {
    PrivacyParams::new(1.0, 1e-4, 1e-5).unwrap()
}

#[test]
fn gap_without_noise_and_gap_halt() {
    let mut ledger = BudgetLedger::new();
    let m = diag(&[12.0, 2.0, 1.0]);
    let g = private_gap(&m, 1, 1.0, 8.0, params(), &mut SeededRng::new(1).without_noise(), &mut ledger).unwrap();
    assert_eq!(g, Some(10.0));
    for s in 0..20 {
        let out = private_gap(&SymMatrix::identity(6), 2, 1.0, 8.0, params(), &mut SeededRng::new(s), &mut ledger)
            .unwrap();
        assert_eq!(out, None);
    }
}

#[test]
fn coherence_without_noise_and_propagation() {
    let mut ledger = BudgetLedger::new();
    let c = EstimatorConstants::default();
    let mu = private_coherence(&ones(8), 1, 1.0, &c, params(), &mut SeededRng::new(2).without_noise(), &mut ledger)
        .unwrap();
    assert!((mu.unwrap() - 1.0).abs() < 1e-12);
    let halted =
        private_coherence(&SymMatrix::identity(8), 1, 1.0, &c, params(), &mut SeededRng::new(3), &mut ledger).unwrap();
    assert_eq!(halted, None);
}

#[test]
fn projector_default_path_and_exact_path() {
    let c = EstimatorConstants::default();
    let rel = private_projector(&SymMatrix::identity(10), 3, 1.0, &c, params(), &mut SeededRng::new(4)).unwrap();
    assert!(rel.used_default_random_subspace);
    assert_eq!(rel.projector.rank(), 3);
    let p = rel.projector.matrix();
    assert!(close(&(&p * &p), &p, 1e-10));

    let mut rng = SeededRng::new(5);
    let m = with_spectrum(&[50.0, 40.0, 1.0, 0.5, 0.2], &mut rng);
    let rel = private_projector(&m, 2, 1.0, &c, params(), &mut SeededRng::new(6).without_noise()).unwrap();
    let exact = top_r_projector(&svd_full(&m), 2).unwrap();
    assert!(close(&rel.projector.matrix(), &exact.matrix(), 1e-10));
}

#[test]
fn low_rank_of_rank_one_diagonal() {
    let mut v = vec![0.0; 6];
    v[0] = 5.0;
    let m = diag(&v);
    let cfg = EstimatorConfig::new(1, 1.0, params());
    let out = private_low_rank(&m, &cfg, &mut SeededRng::new(7).without_noise()).unwrap();
    assert!(close(out.m_hat.as_matrix(), m.as_matrix(), 1e-12));
    let mut rng = SeededRng::new(8);
    let m = random_symmetric(9, &mut rng);
    let out = private_low_rank(&m, &EstimatorConfig::new(3, 1.0, params()), &mut SeededRng::new(9).without_noise())
        .unwrap();
    let err = m.sub(&out.m_hat).unwrap().spectral_norm();
    assert!((err - svd_full(&m).sigma_at(4)).abs() < 1e-9);
    assert_eq!(out.m_hat, best_rank_r(&m, 3).unwrap());
}

#[test]
fn private_gap_within_factor_two() {
    // Gap far above the halting threshold, so every run should be within [gap/2, 2 gap].
    let mut rng = SeededRng::new(10);
    let m = with_spectrum(&[2000.0, 10.0, 5.0, 1.0, 0.0, 0.0], &mut rng);
    let gap = spectral_gap(&svd_full(&m), 1).unwrap();
    let mut ok = 0;
    for s in 0..1000 {
        let mut ledger = BudgetLedger::new();
        if let Some(g) = private_gap(&m, 1, 1.0, 8.0, params(), &mut SeededRng::new(s), &mut ledger).unwrap() {
            if g >= gap / 2.0 && g <= 2.0 * gap {
                ok += 1;
            }
        }
    }
    assert!(ok as f64 >= 1000.0 * (1.0 - params().p_fail));
}

#[test]
fn private_coherence_within_factor_two() {
    let mut rng = SeededRng::new(11);
    let m = with_spectrum(&[3000.0, 2500.0, 10.0, 5.0, 1.0, 0.0, 0.0, 0.0], &mut rng);
    let mu = coherence_r(&m, 2).unwrap();
    let c = EstimatorConstants::default();
    let mut ok = 0;
    for s in 0..1000 {
        let mut ledger = BudgetLedger::new();
        if let Some(x) = private_coherence(&m, 2, 1.0, &c, params(), &mut SeededRng::new(s), &mut ledger).unwrap() {
            if x >= mu / 2.0 && x <= 2.0 * mu {
                ok += 1;
            }
        }
    }
    assert!(ok as f64 >= 1000.0 * (1.0 - params().p_fail));
}

#[test]
fn low_rank_error_tracks_tail_plus_noise() {
    let c = EstimatorConstants::default();
    let mut worst: f64 = 0.0;
    for s in 0..200u64 {
        let mut rng = SeededRng::new(12).substream_indexed("trial", s);
        let n = 30;
        let m = with_spectrum(
            &(0..n).map(|k| if k < 2 { 3000.0 + 100.0 * k as f64 } else { rng.uniform() }).collect::<Vec<_>>(),
            &mut rng,
        );
        let cfg = EstimatorConfig::new(2, 1.0, params()).with_constants(c);
        let out = private_low_rank(&m, &cfg, &mut rng).unwrap();
        let err = m.sub(&out.m_hat).unwrap().spectral_norm();
        let tail = svd_full(&m).sigma_at(3);
        let scale = (1.0 / (params().delta / 2.0)).ln().sqrt() / (params().epsilon / 2.0) * (n as f64).sqrt();
        worst = worst.max((err - tail) / scale);
    }
    assert!(worst < 20.0, "fitted constant {worst}");
}

#[test]
fn gaussian_coherence_upper_bound_on_delocalized_spike() {
    let n = 64;
    let mut worst: f64 = 0.0;
    for t in 0..100u64 {
        let mut rng = SeededRng::new(13).substream_indexed("spike", t);
        let u = DMatrix::from_fn(n, 1, |_, _| if rng.uniform() < 0.5 { -1.0 } else { 1.0 }) / (n as f64).sqrt();
        let a = 100.0 * &u * u.transpose();
        let rep = coherence_gaussian_check(&a, 1.0, 1, 1, 0.01, &mut rng).unwrap();
        worst = worst.max(rep.implied_upper_c);
        assert!(rep.lower_holds(50.0));
    }
    assert!(worst <= 2.0, "implied C {worst}");
}
