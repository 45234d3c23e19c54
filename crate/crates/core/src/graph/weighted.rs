use std::io::{BufRead, Write};

use nalgebra::DMatrix;

use crate::error::{input, Result};
use crate::spectral::SymMatrix;

/// Undirected graph with non-negative edge weights; self-loops allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    adj: DMatrix<f64>,
}

impl WeightedGraph {
    pub fn empty(n: usize) -> Self {
        WeightedGraph { adj: DMatrix::zeros(n, n) }
    }

    /// Builds a graph from (u, v, w) triples; repeated pairs accumulate weight.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v, w) in edges {
            g.add_edge(u, v, w)?;
        }
        Ok(g)
    }

    /// Wraps a symmetric non-negative adjacency matrix.
    pub fn from_adjacency(adj: DMatrix<f64>) -> Result<Self> {
        let sym = SymMatrix::new(adj)?;
        if sym.as_matrix().iter().any(|&x| x < 0.0) {
            return input("adjacency has negative entries");
        }
        Ok(WeightedGraph { adj: sym.into_matrix() })
    }

    pub fn add_edge(&mut self, u: usize, v: usize, w: f64) -> Result<()> {
        let n = self.n();
        if u >= n || v >= n {
            return input(format!("edge ({u},{v}) out of range for n={n}"));
        }
        if !(w.is_finite() && w >= 0.0) {
            return input(format!("edge ({u},{v}) has invalid weight {w}"));
        }
        self.adj[(u, v)] += w;
        if u != v {
            self.adj[(v, u)] += w;
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.adj.nrows()
    }

    pub fn adjacency(&self) -> &DMatrix<f64> {
        &self.adj
    }

    pub fn weight(&self, u: usize, v: usize) -> f64 {
        self.adj[(u, v)]
    }

    /// d(i) = sum_j w(i, j).
    pub fn degrees(&self) -> Vec<f64> {
        (0..self.n()).map(|i| self.adj.row(i).sum()).collect()
    }

    pub fn min_degree(&self) -> f64 {
        self.degrees().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn total_weight(&self) -> f64 {
        self.edges().iter().map(|e| e.2).sum()
    }

    /// Edges (u <= v) with positive weight.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let n = self.n();
        let mut out = Vec::new();
        for u in 0..n {
            for v in u..n {
                let w = self.adj[(u, v)];
                if w > 0.0 {
                    out.push((u, v, w));
                }
            }
        }
        out
    }

    /// Total weight of edges crossing the bipartition `side`.
    pub fn cut_value(&self, side: &[bool]) -> f64 {
        let mut total = 0.0;
        for (u, v, w) in self.edges() {
            if side[u] != side[v] {
                total += w;
            }
        }
        total
    }
}

/// Reads `u v [w]` lines (0-indexed, default weight 1).
///
/// A `# n <count>` line fixes the vertex count; otherwise it is the largest index plus one.
pub fn read_edge_list<R: BufRead>(reader: R) -> Result<WeightedGraph> {
    let mut declared: Option<usize> = None;
    let mut edges = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(rest) = t.strip_prefix('#') {
            let mut parts = rest.split_whitespace();
            if parts.next() == Some("n") {
                let n = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| crate::Error::Input(format!("line {}: bad '# n' directive", lineno + 1)))?;
                declared = Some(n);
            }
            continue;
        }
        let parts: Vec<&str> = t.split_whitespace().collect();
        if parts.len() < 2 || parts.len() > 3 {
            return input(format!("line {}: expected 'u v [w]'", lineno + 1));
        }
        let bad = |what: &str| crate::Error::Input(format!("line {}: bad {what}", lineno + 1));
        let u: usize = parts[0].parse().map_err(|_| bad("vertex"))?;
        let v: usize = parts[1].parse().map_err(|_| bad("vertex"))?;
        let w: f64 = match parts.get(2) {
            Some(s) => s.parse().map_err(|_| bad("weight"))?,
            None => 1.0,
        };
        edges.push((u, v, w));
    }
    let inferred = edges.iter().map(|e| e.0.max(e.1) + 1).max().unwrap_or(0);
    let n = match declared {
        Some(n) if n < inferred => return input(format!("declared n={n} but edge uses vertex {}", inferred - 1)),
        Some(n) => n,
        None => inferred,
    };
    if n == 0 {
        return input("graph has no vertices");
    }
    WeightedGraph::from_edges(n, &edges)
}

pub fn write_edge_list<W: Write>(mut w: W, g: &WeightedGraph) -> Result<()> {
    writeln!(w, "# n {}", g.n())?;
    for (u, v, weight) in g.edges() {
        writeln!(w, "{u} {v} {weight:e}")?;
    }
    Ok(())
}
