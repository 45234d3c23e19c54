use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use nalgebra::DMatrix;

use crate::error::{input, Result};
use crate::graph::WeightedGraph;

/// Weighted 2-CSP over n variables with alphabet [q].
///
/// Each constraint on a pair i < j is a non-negative q x q payoff table; an
/// unweighted relation R{i,j} has entry w on its allowed pairs and 0 elsewhere.
#[derive(Clone, Debug, PartialEq)]
pub struct CspInstance {
    n: usize,
    q: usize,
    tables: BTreeMap<(usize, usize), DMatrix<f64>>,
}

impl CspInstance {
    pub fn new(n: usize, q: usize) -> Result<Self> {
        if n == 0 || q < 2 {
            return input(format!("need n >= 1 and q >= 2, got n={n}, q={q}"));
        }
        Ok(CspInstance { n, q, tables: BTreeMap::new() })
    }

    /// Adds weight `w` to the pair (x_i = l, x_j = l2).
    pub fn add_allowed(&mut self, i: usize, j: usize, w: f64, l: usize, l2: usize) -> Result<()> {
        if i >= self.n || j >= self.n || l >= self.q || l2 >= self.q {
            return input(format!("constraint ({i},{j},{l},{l2}) out of range"));
        }
        if i == j {
            return input(format!("constraint on a single variable {i}"));
        }
        if !(w.is_finite() && w >= 0.0) {
            return input(format!("invalid weight {w}"));
        }
        let q = self.q;
        let (a, b, la, lb) = if i < j { (i, j, l, l2) } else { (j, i, l2, l) };
        self.tables.entry((a, b)).or_insert_with(|| DMatrix::zeros(q, q))[(la, lb)] += w;
        Ok(())
    }

    /// Max-Cut as a q = 2 CSP: each edge rewards differing labels. Self-loops are dropped.
    pub fn max_cut(g: &WeightedGraph) -> Self {
        let mut inst = CspInstance { n: g.n(), q: 2, tables: BTreeMap::new() };
        for (u, v, w) in g.edges() {
            if u != v {
                inst.tables.insert((u, v), DMatrix::from_row_slice(2, 2, &[0.0, w, w, 0.0]));
            }
        }
        inst
    }

    /// Reads back an instance from a label-extended matrix; diagonal blocks are ignored.
    pub fn from_label_extended(n: usize, q: usize, a: &DMatrix<f64>) -> Result<Self> {
        if a.nrows() != n * q || a.ncols() != n * q {
            return input("label-extended matrix has wrong shape");
        }
        let mut inst = Self::new(n, q)?;
        for i in 0..n {
            for j in (i + 1)..n {
                let block = a.view((i * q, j * q), (q, q)).into_owned();
                if block.iter().any(|&x| x < 0.0) {
                    return input("label-extended matrix has negative entries");
                }
                if block.iter().any(|&x| x > 0.0) {
                    inst.tables.insert((i, j), block);
                }
            }
        }
        Ok(inst)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn constraints(&self) -> impl Iterator<Item = (&(usize, usize), &DMatrix<f64>)> {
        self.tables.iter()
    }

    /// Sum of the payoffs of all constraints.
    pub fn value(&self, x: &[usize]) -> f64 {
        self.tables.iter().map(|(&(i, j), t)| t[(x[i], x[j])]).sum()
    }

    /// nq x nq symmetric matrix with block (i, j) equal to the payoff table.
    ///
    /// For the indicator vector chi of x, <chi, A chi> = 2 value(x).
    pub fn label_extended(&self) -> DMatrix<f64> {
        let q = self.q;
        let mut a = DMatrix::zeros(self.n * q, self.n * q);
        for (&(i, j), t) in &self.tables {
            a.view_mut((i * q, j * q), (q, q)).copy_from(t);
            a.view_mut((j * q, i * q), (q, q)).copy_from(&t.transpose());
        }
        a
    }

    /// Constraint graph: weight of {i, j} is the total payoff mass of its table.
    pub fn constraint_graph(&self) -> WeightedGraph {
        let mut g = WeightedGraph::empty(self.n);
        for (&(i, j), t) in &self.tables {
            g.add_edge(i, j, t.sum()).expect("valid constraint");
        }
        g
    }
}

/// Reads a header `n q` and lines `i j w l l2`.
pub fn read_csp<R: BufRead>(reader: R) -> Result<CspInstance> {
    let mut inst: Option<CspInstance> = None;
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = t.split_whitespace().collect();
        let bad = || crate::Error::Input(format!("line {}: malformed '{t}'", lineno + 1));
        match inst.as_mut() {
            None => {
                if parts.len() != 2 {
                    return Err(bad());
                }
                let n = parts[0].parse().map_err(|_| bad())?;
                let q = parts[1].parse().map_err(|_| bad())?;
                inst = Some(CspInstance::new(n, q)?);
            }
            Some(inst) => {
                if parts.len() != 5 {
                    return Err(bad());
                }
                let i = parts[0].parse().map_err(|_| bad())?;
                let j = parts[1].parse().map_err(|_| bad())?;
                let w = parts[2].parse().map_err(|_| bad())?;
                let l = parts[3].parse().map_err(|_| bad())?;
                let l2 = parts[4].parse().map_err(|_| bad())?;
                inst.add_allowed(i, j, w, l, l2)?;
            }
        }
    }
    inst.ok_or_else(|| crate::Error::Input("empty CSP file".into()))
}

pub fn write_csp<W: Write>(mut w: W, inst: &CspInstance) -> Result<()> {
    writeln!(w, "{} {}", inst.n, inst.q)?;
    for (&(i, j), t) in &inst.tables {
        for l in 0..inst.q {
            for l2 in 0..inst.q {
                if t[(l, l2)] > 0.0 {
                    writeln!(w, "{i} {j} {:e} {l} {l2}", t[(l, l2)])?;
                }
            }
        }
    }
    Ok(())
}
