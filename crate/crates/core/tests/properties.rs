mod common;

use coherent_dp::csp::{
    brute_force_csp, expected_rounded_objective, global_correlation, independent_rounding, local_correlation,
    rounding_error_bound, solve_basic_sdp, CspInstance, PseudoDistribution2, SdpOptions,
};
use coherent_dp::dp::{BudgetLedger, PrivacyParams, SeededRng, StageStatus};
use coherent_dp::spectral::{
    adjacency_distance, coherence_r, read_matrix, subspace_closeness, svd_full, weyl_check, write_matrix, Projector,
    SymMatrix,
};
use nalgebra::DMatrix;
use proptest::prelude::*;

use common::*;

fn sym_matrix(max_n: usize) -> impl Strategy<Value = SymMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(-10.0f64..10.0, n * n).prop_map(move |v| {
            let m = DMatrix::from_row_slice(n, n, &v);
            SymMatrix::new((&m + m.transpose()) * 0.5).unwrap()
        })
    })
}

fn sym_pair(max_n: usize) -> impl Strategy<Value = (SymMatrix, SymMatrix)> {
    (1..=max_n).prop_flat_map(|n| {
        let one = proptest::collection::vec(-5.0f64..5.0, n * n);
        (one.clone(), one).prop_map(move |(a, b)| {
            let a = DMatrix::from_row_slice(n, n, &a);
            let b = DMatrix::from_row_slice(n, n, &b);
            (SymMatrix::new((&a + a.transpose()) * 0.5).unwrap(), SymMatrix::new((&b + b.transpose()) * 0.5).unwrap())
        })
    })
}

/// Random mixture of assignments: (n, q, weights, assignments).
fn mixture() -> impl Strategy<Value = PseudoDistribution2> {
    (1usize..5, 2usize..4, 1usize..5).prop_flat_map(|(n, q, k)| {
        proptest::collection::vec((0.05f64..1.0, proptest::collection::vec(0..q, n)), k)
            .prop_map(move |support| PseudoDistribution2::from_distribution(n, q, &support).unwrap())
    })
}

fn random_csp(seed: u64, n: usize, q: usize) -> CspInstance {
    let mut rng = SeededRng::new(seed);
    let mut inst = CspInstance::new(n, q).unwrap();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.uniform() < 0.6 {
                for l in 0..q {
                    for l2 in 0..q {
                        if rng.uniform() < 0.4 {
                            inst.add_allowed(i, j, 0.5 + rng.uniform(), l, l2).unwrap();
                        }
                    }
                }
            }
        }
    }
    inst
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ledger_sums_dyadic_budgets_exactly(parts in proptest::collection::vec((1u32..512, 1u32..512, 0u32..512), 1..20)) {
        let mut l = BudgetLedger::new();
        let (mut e, mut d) = (0u64, 0u64);
        for (a, b, c) in &parts {
            let p = PrivacyParams::new(*a as f64 / 1024.0, *b as f64 / 1048576.0, *c as f64 / 1048576.0).unwrap();
            l.record("stage", p, StageStatus::Executed);
            e += *a as u64;
            d += (*b + *c) as u64;
        }
        prop_assert_eq!(l.compose(), (e as f64 / 1024.0, d as f64 / 1048576.0));
    }

    #[test]
    fn dyadic_splits_recompose(eps in 0.01f64..4.0, delta in 1e-9f64..0.5, p in 0.0f64..0.1, k in 1u32..5) {
        let whole = PrivacyParams::new(eps, delta, p).unwrap();
        let f = 0.5f64.powi(k as i32);
        let mut l = BudgetLedger::new();
        for _ in 0..(1u32 << k) {
            l.record("part", whole.split(f, f, f), StageStatus::Executed);
        }
        prop_assert_eq!(l.compose(), (eps, delta + p));
    }

    #[test]
    fn matrix_text_round_trip(m in sym_matrix(8)) {
        let mut buf = Vec::new();
        write_matrix(&mut buf, &m).unwrap();
        let back = read_matrix(&buf[..], 1e-12).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn decomposition_invariants(m in sym_matrix(8)) {
        let dec = svd_full(&m);
        let n = m.dim();
        let scale = 1.0 + dec.sigma[0];
        prop_assert!((dec.reconstruct() - m.as_matrix()).amax() <= 1e-10 * scale);
        prop_assert!((dec.u.transpose() * &dec.u - DMatrix::<f64>::identity(n, n)).amax() <= 1e-10);
        prop_assert!(dec.sigma.windows(2).all(|w| w[0] >= w[1]) && dec.sigma[n - 1] >= 0.0);
        let oracle = oracle_singular(&to_rows(m.as_matrix()));
        for (s, (o, _)) in dec.sigma.iter().zip(&oracle) {
            prop_assert!((s - o).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn coherence_range_and_oracle(m in sym_matrix(7), pick in 0usize..7) {
        let n = m.dim();
        let r = 1 + pick % n;
        let mu = coherence_r(&m, r).unwrap();
        prop_assert!(mu >= 1.0 - 1e-9 && mu <= n as f64 / r as f64 + 1e-9);
        let dec = svd_full(&m);
        if dec.sigma_at(r) - dec.sigma_at(r + 1) > 1e-3 * (1.0 + dec.sigma[0]) {
            let oracle = oracle_coherence(&to_rows(m.as_matrix()), r);
            prop_assert!((mu - oracle).abs() <= 1e-6 * oracle, "{} vs {}", mu, oracle);
        }
    }

    #[test]
    fn closeness_in_unit_range_and_basis_free(seed in any::<u64>(), n in 2usize..9, pick in 0usize..8) {
        let mut rng = SeededRng::new(seed);
        let r = 1 + pick % n;
        let p = Projector::from_basis(random_orthogonal(n, &mut rng).columns(0, r).into_owned(), 1e-10).unwrap();
        let u = random_orthogonal(n, &mut rng).columns(0, r).into_owned();
        let c = subspace_closeness(&p, &u).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&c));
        let q = random_orthogonal(r, &mut rng);
        let rotated = Projector::from_basis(p.basis() * &q, 1e-10).unwrap();
        prop_assert!((subspace_closeness(&rotated, &(&u * q.transpose())).unwrap() - c).abs() <= 1e-10);
        prop_assert!(subspace_closeness(&p, p.basis()).unwrap() <= 1e-10);
    }

    #[test]
    fn adjacency_distance_between_norms((a, b) in sym_pair(7)) {
        let e = b.sub(&a).unwrap();
        let d = adjacency_distance(&a, &b).unwrap();
        let l1: f64 = e.as_matrix().iter().map(|x| x.abs()).sum();
        prop_assert!(e.frobenius_norm() <= d * (1.0 + 1e-12) + 1e-12);
        prop_assert!(d <= l1 * (1.0 + 1e-12) + 1e-12);
    }

    #[test]
    fn singular_values_move_at_most_the_perturbation((a, b) in sym_pair(8)) {
        prop_assert!(weyl_check(&a, &b).unwrap().holds);
    }

    #[test]
    fn correlation_measures_are_bounded(z in mixture(), seed in any::<u64>()) {
        let k = z.n() * z.q();
        let mut rng = SeededRng::new(seed);
        let d: Vec<f64> = (0..k).map(|_| rng.uniform()).collect();
        prop_assert!(global_correlation(&z, &d).unwrap() >= 0.0);
        let a = DMatrix::from_fn(k, k, |_, _| rng.standard_normal());
        let a = (&a + a.transpose()) * 0.5;
        let cov = z.covariance();
        let max_cov = cov.iter().map(|x| x.abs()).fold(0.0, f64::max);
        prop_assert!(local_correlation(&z, &a).unwrap() <= max_cov + 1e-12);
        let (lhs, rhs) = rounding_error_bound(&z, &a).unwrap();
        prop_assert!(lhs <= rhs + 1e-10, "{} > {}", lhs, rhs);
        prop_assert!(z.invariants().holds(1e-9, 1e-9));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn relaxation_dominates_optimum(seed in any::<u64>(), n in 2usize..8) {
        let inst = random_csp(seed, n, 2);
        let (opt, _) = brute_force_csp(&inst).unwrap();
        let obj = SymMatrix::new(inst.label_extended()).unwrap();
        let z = solve_basic_sdp(&inst, &obj, &[], &SdpOptions::default()).unwrap();
        let ub = z.stats.unwrap().upper_bound;
        prop_assert!(ub >= 2.0 * opt - 1e-6 * (1.0 + opt), "{} < 2 * {}", ub, opt);
    }

    #[test]
    fn rounding_concentrates_around_expectation(seed in any::<u64>(), n in 2usize..7) {
        let inst = random_csp(seed, n, 3);
        let mut rng = SeededRng::new(seed ^ 0x5eed);
        let marg: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                let w: Vec<f64> = (0..3).map(|_| rng.uniform() + 0.01).collect();
                let s: f64 = w.iter().sum();
                w.into_iter().map(|x| x / s).collect()
            })
            .collect();
        let z = PseudoDistribution2::product(n, 3, &marg).unwrap();
        let exact = expected_rounded_objective(&z, &inst.label_extended()) / 2.0;
        let trials = 4000;
        let vals: Vec<f64> = (0..trials).map(|_| inst.value(&independent_rounding(&z, &mut rng))).collect();
        let mean = vals.iter().sum::<f64>() / trials as f64;
        let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (trials - 1) as f64;
        let se = (var / trials as f64).sqrt();
        prop_assert!((mean - exact).abs() <= 5.0 * se + 1e-9, "{} vs {} (se {})", mean, exact, se);
    }
}
