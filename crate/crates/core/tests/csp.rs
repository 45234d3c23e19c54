mod common;

use coherent_dp::csp::{
    brute_force_csp, brute_force_max_cut, drive_down_correlation, expected_rounded_objective, global_correlation,
    independent_rounding, local_to_global_check, rounding_error_bound, solve_basic_sdp, solve_max_2csp,
    solve_max_bisection, solve_max_cut, CspInstance, PseudoDistribution2, SdpOptions, SolverOptions,
};
use coherent_dp::dp::SeededRng;
use coherent_dp::experiments::gen_gnp;
use coherent_dp::graph::{normalized_adjacency, WeightedGraph};
use coherent_dp::spectral::SymMatrix;
use nalgebra::DMatrix;

use common::*;

fn cut(g: &WeightedGraph, seed: u64) -> coherent_dp::csp::CutSolution {
    let a = normalized_adjacency(g).into_matrix();
    solve_max_cut(g, 2.min(g.n()), 0.25, &g.degrees(), &a, &SolverOptions::default(), &mut SeededRng::new(seed)).unwrap()
}

fn bisection(g: &WeightedGraph, seed: u64) -> coherent_dp::csp::CutSolution {
    let a = normalized_adjacency(g).into_matrix();
    solve_max_bisection(g, 2.min(g.n()), 0.25, &g.degrees(), &a, &SolverOptions::default(), &mut SeededRng::new(seed))
        .unwrap()
}

fn csp_inputs(inst: &CspInstance) -> (Vec<f64>, SymMatrix) {
    let gamma = WeightedGraph::from_adjacency(inst.label_extended()).unwrap();
    (gamma.degrees(), normalized_adjacency(&gamma).into_matrix())
}

fn coloring(g: &WeightedGraph, q: usize) -> CspInstance {
    let mut inst = CspInstance::new(g.n(), q).unwrap();
    for (u, v, w) in g.edges() {
        for l in 0..q {
            for l2 in 0..q {
                if l != l2 {
                    inst.add_allowed(u, v, w, l, l2).unwrap();
                }
            }
        }
    }
    inst
}

fn complete(n: usize) -> WeightedGraph {
    let e: Vec<_> = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v, 1.0))).collect();
    WeightedGraph::from_edges(n, &e).unwrap()
}

#[test]
fn max_cut_small_examples() {
    let k2 = WeightedGraph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
    assert_eq!(cut(&k2, 1).value, 1.0);
    assert_eq!(cut(&cycle(4), 2).value, 4.0);
    let p = petersen();
    assert_eq!(brute_force_max_cut(&p).unwrap().0, 12.0);
    for s in 0..5 {
        assert!(cut(&p, s).value >= 0.8 * 12.0);
    }
}

#[test]
fn cut_value_matches_sides() {
    let g = gen_gnp(12, 0.5, &mut SeededRng::new(3)).unwrap();
    let sol = cut(&g, 4);
    assert_eq!(sol.value, g.cut_value(&sol.side));
    let zeros = sol.side.iter().filter(|&&s| s).count();
    assert_eq!(sol.min_side, zeros.min(12 - zeros));
}

#[test]
fn max_2csp_small_examples() {
    let mut one = CspInstance::new(2, 3).unwrap();
    one.add_allowed(0, 1, 2.5, 2, 0).unwrap();
    let (d, a) = csp_inputs(&one);
    let sol = solve_max_2csp(&one, 2, 0.25, &d, &a, &SolverOptions::default(), &mut SeededRng::new(5)).unwrap();
    assert_eq!(sol.value, 2.5);
    assert_eq!(sol.assignment, vec![2, 0]);

    let c5 = coloring(&cycle(5), 2);
    assert_eq!(brute_force_csp(&c5).unwrap().0, 4.0);
    let (d, a) = csp_inputs(&c5);
    let sol = solve_max_2csp(&c5, 2, 0.25, &d, &a, &SolverOptions::default(), &mut SeededRng::new(6)).unwrap();
    assert!(sol.value >= 3.0);

    let k3 = coloring(&complete(3), 3);
    let (d, a) = csp_inputs(&k3);
    let sol = solve_max_2csp(&k3, 2, 0.25, &d, &a, &SolverOptions::default(), &mut SeededRng::new(7)).unwrap();
    assert_eq!(sol.value, 3.0);
    assert_eq!(sol.value, k3.value(&sol.assignment));
}

#[test]
fn bisection_small_examples() {
    let k2 = WeightedGraph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
    assert_eq!(bisection(&k2, 1).value, 1.0);
    let sol = bisection(&complete(4), 2);
    assert_eq!(sol.value, 4.0);
    assert_eq!(sol.min_side, 2);
}

#[test]
fn bisection_is_nearly_balanced() {
    let n = 50;
    let slack = (n as f64 * ((n + 1) as f64).ln()).sqrt();
    for s in 0..2 {
        let g = gen_gnp(n, 0.2, &mut SeededRng::new(100 + s)).unwrap();
        let sol = bisection(&g, s);
        assert!(sol.diagnostics.accepted);
        assert!(sol.min_side as f64 >= n as f64 / 2.0 - slack, "{}", sol.min_side);
    }
}

#[test]
fn drive_on_triangle_stops_quickly() {
    let inst = CspInstance::max_cut(&complete(3));
    let obj = SymMatrix::new(inst.label_extended()).unwrap();
    let d = vec![2.0; 6];
    let res = drive_down_correlation(&inst, &obj, &d, 0.1, &SolverOptions::default(), &mut SeededRng::new(8)).unwrap();
    assert!(res.rounds <= 10);
    assert!(res.gc_satisfied && res.global_correlation <= 0.1 + 1e-9);
    assert_eq!(res.history.len(), res.rounds + 1);
}

#[test]
fn drive_on_empty_graph_needs_no_rounds() {
    let inst = CspInstance::max_cut(&WeightedGraph::empty(5));
    let obj = SymMatrix::new(inst.label_extended()).unwrap();
    let res =
        drive_down_correlation(&inst, &obj, &[0.0; 10], 0.1, &SolverOptions::default(), &mut SeededRng::new(9)).unwrap();
    assert_eq!(res.rounds, 0);
    assert_eq!(res.global_correlation, 0.0);
}

#[test]
fn integral_rounding_is_deterministic() {
    let x = vec![1, 0, 2, 2];
    let z = PseudoDistribution2::from_distribution(4, 3, &[(1.0, x.clone())]).unwrap();
    assert!(z.is_integral(1e-12));
    let mut rng = SeededRng::new(10);
    for _ in 0..20 {
        assert_eq!(independent_rounding(&z, &mut rng), x);
    }
}

#[test]
fn uniform_rounding_frequency() {
    let z = PseudoDistribution2::product(1, 2, &[vec![0.5, 0.5]]).unwrap();
    let mut rng = SeededRng::new(11);
    let trials = 100_000;
    let zeros = (0..trials).filter(|_| independent_rounding(&z, &mut rng)[0] == 0).count();
    let f = zeros as f64 / trials as f64;
    assert!((f - 0.5).abs() < 4.0 * (0.25 / trials as f64).sqrt(), "{f}");
}

#[test]
fn expected_rounded_objective_matches_sampling() {
    let marg = vec![vec![0.2, 0.8], vec![0.6, 0.4], vec![0.5, 0.5]];
    let z = PseudoDistribution2::product(3, 2, &marg).unwrap();
    let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 2.0), (0, 2, 0.5)]).unwrap();
    let inst = CspInstance::max_cut(&g);
    let a = inst.label_extended();
    let exact = expected_rounded_objective(&z, &a);
    let mut rng = SeededRng::new(12);
    let trials = 200_000;
    let mean = (0..trials).map(|_| 2.0 * inst.value(&independent_rounding(&z, &mut rng))).sum::<f64>() / trials as f64;
    assert!((mean - exact).abs() < 0.02, "{mean} vs {exact}");
}

#[test]
fn rounding_error_bound_examples() {
    let z = PseudoDistribution2::product(2, 2, &[vec![0.3, 0.7], vec![0.5, 0.5]]).unwrap();
    let mut a = DMatrix::zeros(4, 4);
    a[(0, 2)] = 1.0;
    a[(2, 0)] = 1.0;
    let (lhs, rhs) = rounding_error_bound(&z, &a).unwrap();
    assert!(lhs.abs() < 1e-15 && rhs.abs() < 1e-15);

    let pair = PseudoDistribution2::from_distribution(2, 2, &[(0.5, vec![0, 0]), (0.5, vec![1, 1])]).unwrap();
    let (lhs, rhs) = rounding_error_bound(&pair, &a).unwrap();
    assert!((lhs - 0.5).abs() < 1e-12 && (rhs - 0.5).abs() < 1e-12, "{lhs} {rhs}");
}

#[test]
fn correlated_pair_global_correlation() {
    let pair = PseudoDistribution2::from_distribution(2, 2, &[(0.5, vec![0, 0]), (0.5, vec![1, 1])]).unwrap();
    let gc = global_correlation(&pair, &[1.0; 4]).unwrap();
    assert!((gc - 1.0 / 16.0).abs() < 1e-15);
    let indep = PseudoDistribution2::product(2, 2, &[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
    let gc = global_correlation(&indep, &[1.0; 4]).unwrap();
    assert!((gc - 2.0 * 4.0 / 16.0 / 16.0).abs() < 1e-15);
}

#[test]
fn local_to_global_trivial_when_below_tau() {
    let z = PseudoDistribution2::product(2, 2, &[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap();
    let inst = CspInstance::max_cut(&WeightedGraph::from_edges(2, &[(0, 1, 1.0)]).unwrap());
    let rep = local_to_global_check(&z, &inst.label_extended(), &[1.0; 4], 0.5, 1.0).unwrap();
    assert!(rep.local <= 0.5 && rep.holds);
}

#[test]
fn relaxation_output_is_a_pseudo_distribution() {
    for (s, g) in [cycle(5), petersen(), gen_gnp(9, 0.5, &mut SeededRng::new(13)).unwrap()].iter().enumerate() {
        let inst = CspInstance::max_cut(g);
        let obj = SymMatrix::new(inst.label_extended()).unwrap();
        let z = solve_basic_sdp(&inst, &obj, &[], &SdpOptions::default()).unwrap();
        assert!(z.invariants().holds(1e-6, 1e-6), "graph {s}");
        let stats = z.stats.unwrap();
        let (opt, _) = brute_force_max_cut(g).unwrap();
        assert!(stats.upper_bound / 2.0 >= opt - 1e-6, "graph {s}");
    }
}
