#![allow(dead_code)]

use std::collections::BTreeSet;

use coherent_dp::dp::SeededRng;
use coherent_dp::graph::WeightedGraph;
use coherent_dp::spectral::SymMatrix;
use nalgebra::DMatrix;

/// Cyclic Jacobi eigen-decomposition: (eigenvalues, eigenvectors as columns).
pub fn jacobi_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut a: Vec<Vec<f64>> = a.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        let total: f64 = a.iter().flatten().map(|x| x * x).sum();
        if off <= 1e-30 * total.max(1e-300) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let vals = (0..n).map(|i| a[i][i]).collect();
    let vecs = (0..n).map(|k| (0..n).map(|i| v[i][k]).collect()).collect();
    (vals, vecs)
}

/// Singular triplets of a symmetric matrix from Jacobi, sorted by |lambda| descending.
pub fn oracle_singular(a: &[Vec<f64>]) -> Vec<(f64, Vec<f64>)> {
    let (vals, vecs) = jacobi_eigen(a);
    let mut pairs: Vec<(f64, Vec<f64>)> = vals.into_iter().map(f64::abs).zip(vecs).collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    pairs
}

/// (n / r) max_i sum_{k < r} u_{ik}^2.
pub fn oracle_coherence(a: &[Vec<f64>], r: usize) -> f64 {
    let n = a.len();
    let sv = oracle_singular(a);
    (0..n)
        .map(|i| (0..r).map(|k| sv[k].1[i] * sv[k].1[i]).sum::<f64>())
        .fold(0.0, f64::max)
        * n as f64
        / r as f64
}

pub fn oracle_basic_coherence(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let sv = oracle_singular(a);
    let top = sv[0].0;
    sv.iter()
        .filter(|(s, _)| *s > 1e-10 * top)
        .map(|(_, u)| u.iter().map(|x| x * x).fold(0.0, f64::max) * n as f64)
        .fold(0.0, f64::max)
}

pub fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

pub fn random_symmetric(n: usize, rng: &mut SeededRng) -> SymMatrix {
    let g = DMatrix::from_fn(n, n, |_, _| rng.standard_normal());
    SymMatrix::new((&g + g.transpose()) * 0.5).unwrap()
}

/// Random orthonormal n x n matrix.
pub fn random_orthogonal(n: usize, rng: &mut SeededRng) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| rng.standard_normal()).qr().q()
}

/// U diag(values) U^T for a random orthogonal U.
pub fn with_spectrum(values: &[f64], rng: &mut SeededRng) -> SymMatrix {
    let n = values.len();
    let u = random_orthogonal(n, rng);
    let m = &u * DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(values)) * u.transpose();
    SymMatrix::new((&m + m.transpose()) * 0.5).unwrap()
}

fn edge_index(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).collect()
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &(a, b) in edges {
            let w = if a == u { b } else if b == u { a } else { continue };
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.iter().all(|&s| s)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// All connected graphs on n vertices up to isomorphism.
pub fn connected_graphs(n: usize) -> Vec<WeightedGraph> {
    let idx = edge_index(n);
    let m = idx.len();
    let pos = |u: usize, v: usize| {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        idx.iter().position(|&e| e == (a, b)).unwrap()
    };
    let perms = permutations(n);
    let maps: Vec<Vec<usize>> = perms.iter().map(|p| idx.iter().map(|&(u, v)| pos(p[u], p[v])).collect()).collect();
    let mut seen: BTreeSet<u32> = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << m) {
        let edges: Vec<(usize, usize)> = (0..m).filter(|&k| mask >> k & 1 == 1).map(|k| idx[k]).collect();
        if !connected(n, &edges) {
            continue;
        }
        let canon = maps
            .iter()
            .map(|map| (0..m).filter(|&k| mask >> k & 1 == 1).fold(0u32, |acc, k| acc | 1 << map[k]))
            .min()
            .unwrap();
        if seen.insert(canon) {
            let list: Vec<(usize, usize, f64)> = edges.iter().map(|&(u, v)| (u, v, 1.0)).collect();
            out.push(WeightedGraph::from_edges(n, &list).unwrap());
        }
    }
    out
}

pub fn cycle(n: usize) -> WeightedGraph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, 1.0)).collect();
    WeightedGraph::from_edges(n, &edges).unwrap()
}

pub fn petersen() -> WeightedGraph {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5, 1.0));
        e.push((i, i + 5, 1.0));
        e.push((i + 5, (i + 2) % 5 + 5, 1.0));
    }
    WeightedGraph::from_edges(10, &e).unwrap()
}
