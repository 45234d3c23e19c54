//! Exhaustive optima for small instances.

use super::instance::CspInstance;
use crate::error::{input, Result};
use crate::graph::WeightedGraph;

const MAX_ASSIGNMENTS: f64 = 1.7e7;

fn for_each_assignment(n: usize, q: usize, mut f: impl FnMut(&[usize])) -> Result<()> {
    if (q as f64).powi(n as i32) > MAX_ASSIGNMENTS {
        return input(format!("{q}^{n} assignments is too many to enumerate"));
    }
    let mut x = vec![0usize; n];
    loop {
        f(&x);
        let mut i = 0;
        loop {
            if i == n {
                return Ok(());
            }
            x[i] += 1;
            if x[i] < q {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

/// Best assignment and its value.
pub fn brute_force_csp(inst: &CspInstance) -> Result<(f64, Vec<usize>)> {
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for_each_assignment(inst.n(), inst.q(), |x| {
        let v = inst.value(x);
        if v > best.0 {
            best = (v, x.to_vec());
        }
    })?;
    Ok(best)
}

/// Maximum cut value and a side indicator.
pub fn brute_force_max_cut(g: &WeightedGraph) -> Result<(f64, Vec<bool>)> {
    let (v, x) = brute_force_csp(&CspInstance::max_cut(g))?;
    Ok((v, x.iter().map(|&l| l == 0).collect()))
}

/// Maximum cut with exactly floor(n/2) vertices on one side.
pub fn brute_force_max_bisection(g: &WeightedGraph) -> Result<(f64, Vec<bool>)> {
    let n = g.n();
    let half = n / 2;
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for_each_assignment(n, 2, |x| {
        if x.iter().filter(|&&l| l == 0).count() == half {
            let side: Vec<bool> = x.iter().map(|&l| l == 0).collect();
            let v = g.cut_value(&side);
            if v > best.0 {
                best = (v, side);
            }
        }
    })?;
    Ok(best)
}
