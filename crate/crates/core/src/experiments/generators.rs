use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::dp::SeededRng;
use crate::error::{input, Result};
use crate::graph::WeightedGraph;
use crate::spectral::rect_svd;

/// Single-spike model M = sqrt(beta) u g^T + W with M of size n x m.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WishartSpikeSpec {
    pub n: usize,
    pub m: usize,
    pub beta: f64,
    pub signal: Vec<f64>,
    pub seed: u64,
}

impl WishartSpikeSpec {
    /// Signal with entries +-1/sqrt(n), signs drawn from `seed`.
    pub fn delocalized(n: usize, m: usize, beta: f64, seed: u64) -> Self {
        let mut rng = SeededRng::new(seed).substream("signal");
        let s = 1.0 / (n as f64).sqrt();
        let signal = (0..n).map(|_| if rng.below(2) == 0 { s } else { -s }).collect();
        WishartSpikeSpec { n, m, beta, signal, seed }
    }

    /// Signal e_1.
    pub fn localized(n: usize, m: usize, beta: f64, seed: u64) -> Self {
        let mut signal = vec![0.0; n];
        signal[0] = 1.0;
        WishartSpikeSpec { n, m, beta, signal, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 || self.signal.len() != self.n {
            return input("signal length must equal n >= 1, and m >= 1");
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return input(format!("beta must be non-negative, got {}", self.beta));
        }
        let norm = self.signal.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return input(format!("signal norm {norm} is not 1"));
        }
        Ok(())
    }

    pub fn signal_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_column_slice(self.n, 1, &self.signal)
    }
}

pub fn gen_wishart_spike(spec: &WishartSpikeSpec, rng: &mut SeededRng) -> Result<DMatrix<f64>> {
    spec.validate()?;
    let (n, m) = (spec.n, spec.m);
    let g: Vec<f64> = (0..m).map(|_| rng.standard_normal()).collect();
    let s = spec.beta.sqrt();
    let mut out = DMatrix::from_fn(n, m, |_, _| rng.standard_normal());
    for j in 0..m {
        for i in 0..n {
            out[(i, j)] += s * spec.signal[i] * g[j];
        }
    }
    Ok(out)
}

/// Top two singular values against the beta sqrt(m) scale.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GapReport {
    pub sigma1: f64,
    pub sigma2: f64,
    pub gap: f64,
    pub beta_sqrt_m: f64,
    /// gap / (beta sqrt(m))
    pub ratio: f64,
}

pub fn gap_report(m: &DMatrix<f64>, beta: f64) -> Result<GapReport> {
    let svd = rect_svd(m)?;
    let (s1, s2) = (svd.sigma_at(1), svd.sigma_at(2));
    let scale = beta * (m.ncols() as f64).sqrt();
    Ok(GapReport { sigma1: s1, sigma2: s2, gap: s1 - s2, beta_sqrt_m: scale, ratio: (s1 - s2) / scale })
}

/// Erdos-Renyi G(n, p) with unit weights.
pub fn gen_gnp(n: usize, p: f64, rng: &mut SeededRng) -> Result<WeightedGraph> {
    if !(0.0..=1.0).contains(&p) {
        return input(format!("edge probability {p} outside [0, 1]"));
    }
    let mut g = WeightedGraph::empty(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.uniform() < p {
                g.add_edge(u, v, 1.0)?;
            }
        }
    }
    Ok(g)
}

/// Union of `base` with an independent G(n, p); edges present in both keep the base weight.
pub fn gen_planted_lowrank(base: &WeightedGraph, p: f64, rng: &mut SeededRng) -> Result<WeightedGraph> {
    let n = base.n();
    let extra = gen_gnp(n, p, rng)?;
    let adj = base.adjacency().zip_map(extra.adjacency(), |b, e| if b > 0.0 { b } else { e });
    WeightedGraph::from_adjacency(adj)
}

/// Complete bipartite graph between {0..a} and {a..a+b}, padded with isolated vertices to n.
pub fn planted_biclique(n: usize, a: usize, b: usize) -> Result<WeightedGraph> {
    if a + b > n {
        return input("biclique does not fit");
    }
    let mut g = WeightedGraph::empty(n);
    for u in 0..a {
        for v in a..a + b {
            g.add_edge(u, v, 1.0)?;
        }
    }
    Ok(g)
}

/// Two halves with edge probability `p_in` inside and `p_out` across.
pub fn gen_two_block(n: usize, p_in: f64, p_out: f64, rng: &mut SeededRng) -> Result<WeightedGraph> {
    if !(0.0..=1.0).contains(&p_in) || !(0.0..=1.0).contains(&p_out) {
        return input("edge probabilities must lie in [0, 1]");
    }
    let half = n / 2;
    let mut g = WeightedGraph::empty(n);
    for u in 0..n {
        for v in (u + 1)..n {
            let p = if (u < half) == (v < half) { p_in } else { p_out };
            if rng.uniform() < p {
                g.add_edge(u, v, 1.0)?;
            }
        }
    }
    Ok(g)
}

pub fn complete_graph(n: usize) -> WeightedGraph {
    let mut g = WeightedGraph::empty(n);
    for u in 0..n {
        for v in (u + 1)..n {
            g.add_edge(u, v, 1.0).expect("in range");
        }
    }
    g
}
