//! Edge-DP privatization of normalized adjacency matrices and synthetic graphs.

mod normalized;
mod private;
mod weighted;

pub use normalized::{normalized_adjacency, threshold_rank, NormalizedAdjacency};
pub(crate) use normalized::inv_sqrt;
pub use private::{
    graph_edge_sensitivity, private_degree_profile, private_synthetic_graph, private_threshold_rank_matrix, project_to_s,
    project_to_s_with, projection_radius, quadratic_form_deviation_bound, synthesize_graph, Projection, SyntheticGraphRelease,
    ThresholdRankConfig, ThresholdRankRelease,
};
pub(crate) use private::synthesize_from_low_rank;
pub use weighted::{read_edge_list, write_edge_list, WeightedGraph};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::{BudgetLedger, PrivacyParams, SeededRng};
    use crate::spectral::{best_rank_r, svd_full, SymMatrix};
    use nalgebra::DMatrix;

    fn complete(n: usize) -> WeightedGraph {
        let mut g = WeightedGraph::empty(n);
        for u in 0..n {
            for v in (u + 1)..n {
                g.add_edge(u, v, 1.0).unwrap();
            }
        }
        g
    }

    #[test]
    fn k4_normalized() {
        let a = normalized_adjacency(&complete(4)).into_matrix();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 0.0 } else { 1.0 / 3.0 };
                assert!((a.get(i, j) - want).abs() < 1e-15);
            }
        }
        assert!((svd_full(&a).sigma[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_edge_padded() {
        let g = WeightedGraph::from_edges(4, &[(0, 1, 1.0)]).unwrap();
        let a = normalized_adjacency(&g).into_matrix();
        let mut want = DMatrix::zeros(4, 4);
        want[(0, 1)] = 1.0;
        want[(1, 0)] = 1.0;
        assert_eq!(a.as_matrix(), &want);
    }

    #[test]
    fn star_spectrum() {
        let g = WeightedGraph::from_edges(4, &[(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)]).unwrap();
        let s = svd_full(&normalized_adjacency(&g).into_matrix()).sigma;
        assert!((s[0] - 1.0).abs() < 1e-12 && (s[1] - 1.0).abs() < 1e-12);
        assert!(s[2].abs() < 1e-12 && s[3].abs() < 1e-12);
    }

    #[test]
    fn sensitivity_arithmetic() {
        assert_eq!(graph_edge_sensitivity(17.0), Some(1.0));
        assert_eq!(graph_edge_sensitivity(3.0), Some(8.0));
        assert_eq!(graph_edge_sensitivity(2.9), None);
        assert_eq!(graph_edge_sensitivity(2.0), None);
    }

    #[test]
    fn edge_list_accumulates_duplicates() {
        let text = "0 1\n1 0 2.5\n# comment\n2 2 0.5\n";
        let g = read_edge_list(text.as_bytes()).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.weight(0, 1), 3.5);
        assert_eq!(g.degrees(), vec![3.5, 3.5, 0.5]);
        let mut buf = Vec::new();
        write_edge_list(&mut buf, &g).unwrap();
        assert_eq!(read_edge_list(buf.as_slice()).unwrap(), g);
        assert!(read_edge_list("0 1 -1\n".as_bytes()).is_err());
        assert!(read_edge_list("0 x\n".as_bytes()).is_err());
    }

    #[test]
    fn complete_graph_without_noise() {
        let g = complete(64);
        let p = PrivacyParams::new(1.0, 1e-3, 1e-6).unwrap();
        let mut rng = SeededRng::new(4).without_noise();
        let rel = private_threshold_rank_matrix(&g, 1, p, &ThresholdRankConfig::default(), &mut rng).unwrap();
        let a_bar = normalized_adjacency(&g).into_matrix();
        let best = best_rank_r(&a_bar, 1).unwrap();
        let err = rel.matrix.unwrap().sub(&best).unwrap().spectral_norm();
        assert!(err < 1e-12);
        assert_eq!(rel.ledger.compose(), (1.0, 1e-3 + 1e-6));
    }

    #[test]
    fn tiny_graph_halts() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
        let p = PrivacyParams::new(1.0, 1e-3, 1e-6).unwrap();
        let rel = private_threshold_rank_matrix(&g, 1, p, &ThresholdRankConfig::default(), &mut SeededRng::new(1))
            .unwrap();
        assert!(rel.matrix.is_none());
        assert_eq!(rel.ledger.compose(), (1.0, 1e-3 + 1e-6));
    }

    #[test]
    fn degree_profile_exact_without_noise() {
        let g = complete(5);
        let p = PrivacyParams::new(0.5, 1e-3, 0.0).unwrap();
        let mut ledger = BudgetLedger::new();
        let d = private_degree_profile(&g, p, &mut SeededRng::new(0).without_noise(), &mut ledger).unwrap();
        assert_eq!(d, Some(vec![4.0; 5]));
        let empty = WeightedGraph::empty(30);
        let d = private_degree_profile(&empty, p, &mut SeededRng::new(0), &mut ledger).unwrap();
        assert!(d.is_none());
    }

    #[test]
    fn projection_fixed_point_and_clamp() {
        let a = SymMatrix::from_rows(&[vec![0.2, 0.3], vec![0.3, 0.1]]).unwrap();
        let pr = project_to_s(&a);
        assert_eq!(pr.matrix, a);
        // rho = |1 - ||A 1|| / sqrt(2)| is generous for a small matrix.
        let b = SymMatrix::from_rows(&[vec![0.2, 0.1, 0.0], vec![0.1, 0.0, -0.1], vec![0.0, -0.1, 0.3]]).unwrap();
        assert!(projection_radius(&b) > 0.5);
        let pr = project_to_s(&b);
        assert!(pr.converged);
        let mut want = b.as_matrix().clone();
        want[(1, 2)] = 0.0;
        want[(2, 1)] = 0.0;
        assert!((pr.matrix.as_matrix() - want).abs().max() < 1e-9);
    }

    #[test]
    fn synthesize_round_trip() {
        let g = WeightedGraph::from_edges(4, &[(0, 1, 2.0), (1, 2, 1.0), (2, 3, 0.5), (3, 3, 1.0)]).unwrap();
        let a_bar = normalized_adjacency(&g).into_matrix();
        let back = synthesize_graph(&a_bar, &g.degrees()).unwrap();
        assert!((back.adjacency() - g.adjacency()).abs().max() < 1e-10);
        let zero = SymMatrix::new(DMatrix::zeros(4, 4)).unwrap();
        assert!(synthesize_graph(&zero, &g.degrees()).unwrap().edges().is_empty());
    }
}
