use nalgebra::DMatrix;

use super::weighted::WeightedGraph;
use crate::spectral::SymMatrix;

/// D^{-1/2} A D^{-1/2}, with D^{-1/2}_ii = 0 for isolated vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedAdjacency {
    matrix: SymMatrix,
}

impl NormalizedAdjacency {
    pub fn matrix(&self) -> &SymMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> SymMatrix {
        self.matrix
    }
}

pub(crate) fn inv_sqrt(d: f64) -> f64 {
    if d > 0.0 {
        1.0 / d.sqrt()
    } else {
        0.0
    }
}

pub fn normalized_adjacency(g: &WeightedGraph) -> NormalizedAdjacency {
    let s: Vec<f64> = g.degrees().into_iter().map(inv_sqrt).collect();
    let a = g.adjacency();
    let n = g.n();
    let m = DMatrix::from_fn(n, n, |i, j| s[i] * a[(i, j)] * s[j]);
    NormalizedAdjacency { matrix: SymMatrix::from_computed(m) }
}

/// Number of singular values at least tau.
pub fn threshold_rank(m: &SymMatrix, tau: f64) -> usize {
    crate::spectral::svd_full(m).sigma.iter().filter(|&&s| s >= tau).count()
}
