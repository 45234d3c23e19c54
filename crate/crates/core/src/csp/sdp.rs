use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::instance::CspInstance;
use super::pseudo::{PseudoDistribution2, SdpStats};
use crate::error::{input, Error, Result};
use crate::spectral::SymMatrix;

/// Stopping rules of the moment SDP solver.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SdpOptions {
    /// Relative gap between the primal value and the certified upper bound.
    pub tol: f64,
    /// Residual of the affine constraints at the returned PSD point.
    pub feasibility_tol: f64,
    pub max_iter: usize,
    pub check_every: usize,
}

impl Default for SdpOptions {
    fn default() -> Self {
        SdpOptions { tol: 1e-5, feasibility_tol: 1e-8, max_iter: 50_000, check_every: 20 }
    }
}

/// Affine parametrization of the full coordinates (1, x) by reduced coordinates.
///
/// Row a of `t` expresses coordinate a as a combination of the reduced ones;
/// reduced coordinate 0 is the constant. Partition, conditioning and balance
/// equalities are eliminated this way, so all their products hold exactly.
struct Param {
    t: DMatrix<f64>,
}

fn parametrize(n: usize, q: usize, conditioning: &[(usize, usize)], balance: Option<usize>) -> Result<Param> {
    let mut fixed: Vec<Option<usize>> = vec![None; n];
    for &(i, l) in conditioning {
        if i >= n || l >= q {
            return input(format!("conditioning ({i},{l}) out of range"));
        }
        match fixed[i] {
            Some(prev) if prev != l => {
                return Err(Error::Infeasible(format!("variable {i} fixed to both {prev} and {l}")))
            }
            _ => fixed[i] = Some(l),
        }
    }
    let free: Vec<usize> = (0..n).filter(|&i| fixed[i].is_none()).collect();
    let pivot = match balance {
        None => None,
        Some(k) => {
            let fixed_zero = fixed.iter().filter(|f| **f == Some(0)).count();
            if k < fixed_zero || k - fixed_zero > free.len() {
                return Err(Error::Infeasible(format!("balance {k} unreachable under conditioning")));
            }
            match free.last() {
                Some(&j) => Some((j, (k - fixed_zero) as f64)),
                None => None,
            }
        }
    };
    // Allocate reduced coordinates.
    let mut coord: HashMap<(usize, usize), usize> = HashMap::new();
    let mut d = 1;
    for &i in &free {
        for l in 0..q - 1 {
            if pivot.map(|p| p.0) == Some(i) && l == 0 {
                continue;
            }
            coord.insert((i, l), d);
            d += 1;
        }
    }
    let dim = n * q + 1;
    let mut t = DMatrix::zeros(dim, d);
    t[(0, 0)] = 1.0;
    for i in 0..n {
        let base = 1 + i * q;
        if let Some(l) = fixed[i] {
            t[(base + l, 0)] = 1.0;
            continue;
        }
        for l in 0..q - 1 {
            if let Some(&c) = coord.get(&(i, l)) {
                t[(base + l, c)] = 1.0;
            }
        }
    }
    if let Some((j, k)) = pivot {
        let row = 1 + j * q;
        t[(row, 0)] = k;
        for &i in &free {
            if i != j {
                let c = coord[&(i, 0)];
                t[(row, c)] -= 1.0;
            }
        }
    }
    for &i in &free {
        let base = 1 + i * q;
        let mut last = t.row(0).into_owned();
        for l in 0..q - 1 {
            last -= t.row(base + l);
        }
        t.set_row(base + q - 1, &last);
    }
    // The balance row is badly scaled; orthonormalize the non-constant columns
    // and let the constant absorb their offset.
    if pivot.is_some() && d > 1 {
        let qr = t.columns(1, d - 1).into_owned().qr();
        let q_mat = qr.q();
        let t0 = t.column(0).into_owned();
        let t0 = &t0 - &q_mat * (q_mat.transpose() * &t0);
        t.set_column(0, &t0);
        t.columns_mut(1, d - 1).copy_from(&q_mat);
    }
    Ok(Param { t })
}

fn svec_len(d: usize) -> usize {
    d * (d + 1) / 2
}

fn svec(m: &DMatrix<f64>) -> DVector<f64> {
    let d = m.nrows();
    let mut v = DVector::zeros(svec_len(d));
    let mut k = 0;
    let r2 = std::f64::consts::SQRT_2;
    for j in 0..d {
        for i in 0..=j {
            v[k] = if i == j { m[(i, i)] } else { r2 * m[(i, j)] };
            k += 1;
        }
    }
    v
}

fn smat(v: &DVector<f64>, d: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(d, d);
    let mut k = 0;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..d {
        for i in 0..=j {
            if i == j {
                m[(i, i)] = v[k];
            } else {
                m[(i, j)] = h * v[k];
                m[(j, i)] = h * v[k];
            }
            k += 1;
        }
    }
    m
}

fn sym_outer(a: &DVector<f64>, b: &DVector<f64>) -> DMatrix<f64> {
    0.5 * (a * b.transpose() + b * a.transpose())
}

fn psd_part(v: &DVector<f64>, d: usize) -> (DVector<f64>, f64) {
    let eig = smat(v, d).symmetric_eigen();
    let min = eig.eigenvalues.min();
    if min >= 0.0 {
        return (v.clone(), min);
    }
    let clipped = eig.eigenvalues.map(|l| l.max(0.0));
    let m = &eig.eigenvectors * DMatrix::from_diagonal(&clipped) * eig.eigenvectors.transpose();
    (svec(&m), min)
}

/// Maximizes <objective, E[x x^T]> over degree-2 pseudo-distributions on P_{n,q},
/// with the variables in `conditioning` fixed and, if `balance = Some(k)`,
/// sum_i x_{i,0} = k.
pub(crate) fn solve_moment_sdp(
    n: usize,
    q: usize,
    objective: &DMatrix<f64>,
    conditioning: &[(usize, usize)],
    balance: Option<usize>,
    opts: &SdpOptions,
) -> Result<PseudoDistribution2> {
    let k = n * q;
    if objective.shape() != (k, k) {
        return input(format!("objective must be {k}x{k}"));
    }
    let objective = SymMatrix::symmetrized(objective.clone(), 1e-9)?.into_matrix();
    let param = parametrize(n, q, conditioning, balance)?;
    let t = &param.t;
    let d = t.ncols();
    let len = svec_len(d);

    // Constraints <G, Z> = b on the reduced moment matrix Z.
    let row = |a: usize| t.row(a).transpose();
    let mut rows: Vec<(DVector<f64>, f64)> = Vec::new();
    let e0 = row(0);
    rows.push((svec(&(&e0 * e0.transpose())), 1.0));
    for i in 0..n {
        for l in 0..q {
            let a = row(1 + i * q + l);
            let g = &a * a.transpose() - sym_outer(&e0, &a);
            rows.push((svec(&g), 0.0));
            for l2 in (l + 1)..q {
                let b = row(1 + i * q + l2);
                rows.push((svec(&sym_outer(&a, &b)), 0.0));
            }
        }
    }
    rows.retain(|(g, b)| g.amax() > 1e-14 || *b != 0.0);
    let m = rows.len();
    let bmat = DMatrix::from_fn(m, len, |r, c| rows[r].0[c]);
    let bvec = DVector::from_iterator(m, rows.iter().map(|r| r.1));
    let gram = &bmat * bmat.transpose();
    let eig = SymMatrix::from_computed(gram).into_matrix().symmetric_eigen();
    let cut = 1e-10 * eig.eigenvalues.amax().max(1e-300);
    let inv = eig.eigenvalues.map(|l| if l > cut { 1.0 / l } else { 0.0 });
    let kinv = &eig.eigenvectors * DMatrix::from_diagonal(&inv) * eig.eigenvectors.transpose();
    let range_resid = &bvec - &bmat * (bmat.transpose() * (&kinv * &bvec));
    if range_resid.amax() > 1e-9 {
        return Err(Error::Infeasible("inconsistent moment constraints".into()));
    }

    let mut cfull = DMatrix::zeros(k + 1, k + 1);
    cfull.view_mut((1, 1), (k, k)).copy_from(&objective);
    let cred = SymMatrix::from_computed(t.transpose() * &cfull * t).into_matrix();
    let c_raw = svec(&cred);
    let scale = if c_raw.amax() > 0.0 { c_raw.amax() } else { 1.0 };
    let c = &c_raw / scale;

    let project_affine = |v: &DVector<f64>| -> DVector<f64> {
        let r = &bmat * v - &bvec;
        v - bmat.transpose() * (&kinv * r)
    };

    let mut x = project_affine(&DVector::zeros(len));
    let mut z = psd_part(&x, d).0;
    let mut u: DVector<f64> = DVector::zeros(len);
    let mut rho = 1.0;
    let mut adapt_every = opts.check_every;
    let mut next_adapt = 0;
    let mut last_feas = f64::INFINITY;
    let mut result: Option<(usize, f64, f64)> = None;
    let mut last: Option<(usize, f64, f64)> = None;
    for it in 1..=opts.max_iter {
        x = project_affine(&(&z - &u + &c / rho));
        let z_prev = z;
        z = psd_part(&(&x + &u), d).0;
        u += &x - &z;
        if it % opts.check_every != 0 && it != opts.max_iter {
            continue;
        }
        let rp = (&x - &z).norm();
        let rd = rho * (&z - &z_prev).norm();
        let feas = (&bmat * &z - &bvec).norm();
        last_feas = feas;
        let primal = c.dot(&z);
        let slack_target = &c - rho * &u;
        let lambda = &kinv * (&bmat * slack_target);
        let slack = bmat.transpose() * &lambda - &c;
        let (_, min_eig) = psd_part(&slack, d);
        let ub = bvec.dot(&lambda) + d as f64 * (-min_eig).max(0.0);
        let gap = (ub - primal) / ub.abs().max(1.0);
        last = Some((it, ub, feas));
        if feas <= opts.feasibility_tol && gap <= opts.tol {
            result = last;
            break;
        }
        if it < next_adapt {
            continue;
        }
        if rp > 10.0 * rd {
            rho *= 2.0;
            u /= 2.0;
            adapt_every *= 2;
        } else if rd > 10.0 * rp {
            rho /= 2.0;
            u *= 2.0;
            adapt_every *= 2;
        }
        next_adapt = it + adapt_every;
    }
    // A feasible iterate with a certified bound is kept even if the duality gap is still open.
    let Some((iterations, ub, feas)) = result.or(last.filter(|l| l.2 <= opts.feasibility_tol)) else {
        return Err(Error::Solver { iterations: opts.max_iter, residual: last_feas });
    };
    let zmat = smat(&z, d);
    let y = SymMatrix::from_computed(t * zmat * t.transpose()).into_matrix();
    let obj = y.view((1, 1), (k, k)).component_mul(&objective).sum();
    let mut out = PseudoDistribution2::from_moments(n, q, y)?;
    let mut cond = conditioning.to_vec();
    cond.sort_unstable();
    cond.dedup();
    out.conditioning = cond;
    out.stats = Some(SdpStats {
        objective: obj,
        upper_bound: (ub * scale).max(obj),
        iterations,
        feasibility_residual: feas,
    });
    Ok(out)
}

/// Maximizes E~<x, objective x> over degree-2 pseudo-distributions for the instance's
/// (n, q), subject to the conditioning equalities.
pub fn solve_basic_sdp(
    instance: &CspInstance,
    objective: &SymMatrix,
    conditioning: &[(usize, usize)],
    opts: &SdpOptions,
) -> Result<PseudoDistribution2> {
    solve_moment_sdp(instance.n(), instance.q(), objective.as_matrix(), conditioning, None, opts)
}

/// Same as `solve_basic_sdp` with the extra equality sum_i x_{i,0} = k and its products.
pub fn solve_balanced_sdp(
    instance: &CspInstance,
    objective: &SymMatrix,
    conditioning: &[(usize, usize)],
    k: usize,
    opts: &SdpOptions,
) -> Result<PseudoDistribution2> {
    solve_moment_sdp(instance.n(), instance.q(), objective.as_matrix(), conditioning, Some(k), opts)
}
