//! Sparse undirected weighted graphs and the operators built on them.
//!
//! A [`Graph`] stores a symmetric adjacency in compressed sparse row form with
//! sorted neighbor lists, a cached weighted degree per vertex and a
//! connectivity flag computed once at construction. Graphs are immutable.
//!
//! Operators (all applied matrix-free):
//!
//! ```text
//! standard walk          x ↦ A D⁻¹ x
//! lazy walk  W           x ↦ (x + A D⁻¹ x) / 2
//! normalized adjacency   x ↦ D^(-1/2) A D^(-1/2) x
//! normalized Laplacian   𝓛 = I − D^(-1/2) A D^(-1/2)
//! ```

use std::collections::VecDeque;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Counts of input irregularities repaired while building a [`Graph`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildReport {
    pub self_loops_dropped: usize,
    pub duplicates_merged: usize,
    pub zero_weights_dropped: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
    degrees: Vec<f64>,
    connected: bool,
}

impl Graph {
    /// Builds a graph on `n` vertices from undirected edges `(u, v, w)`.
    ///
    /// Self-loops are dropped (laziness belongs to the walk operator), parallel
    /// edges are merged by summing weights, and zero-weight edges are ignored.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<(Graph, BuildReport)> {
        if edges.is_empty() {
            return Err(Error::EmptyEdgeList);
        }
        let mut report = BuildReport::default();
        let mut canon: Vec<(usize, usize, f64)> = Vec::with_capacity(edges.len());
        for &(u, v, w) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidWeight { u, v, weight: w });
            }
            if u == v {
                report.self_loops_dropped += 1;
                continue;
            }
            if w == 0.0 {
                report.zero_weights_dropped += 1;
                continue;
            }
            canon.push((u.min(v), u.max(v), w));
        }
        canon.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(canon.len());
        for (u, v, w) in canon {
            match merged.last_mut() {
                Some(last) if last.0 == u && last.1 == v => {
                    last.2 += w;
                    report.duplicates_merged += 1;
                }
                _ => merged.push((u, v, w)),
            }
        }
        if report.self_loops_dropped > 0 {
            log::warn!("dropped {} self-loop(s)", report.self_loops_dropped);
        }
        Ok((Self::from_canonical(n, &merged), report))
    }

    /// Builds from an edge list, inferring `n` as one past the largest id.
    pub fn from_edge_list(edges: &[(usize, usize, f64)]) -> Result<(Graph, BuildReport)> {
        let n = edges
            .iter()
            .map(|&(u, v, _)| u.max(v) + 1)
            .max()
            .ok_or(Error::EmptyEdgeList)?;
        Self::from_edges(n, edges)
    }

    /// `edges` must be sorted, deduplicated, `u < v`, positive weights.
    fn from_canonical(n: usize, edges: &[(usize, usize, f64)]) -> Graph {
        let mut counts = vec![0usize; n + 1];
        for &(u, v, _) in edges {
            counts[u + 1] += 1;
            counts[v + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let offsets = counts;
        let mut fill = offsets.clone();
        let mut targets = vec![0usize; 2 * edges.len()];
        let mut weights = vec![0.0; 2 * edges.len()];
        // Lower-id neighbors are written first, then higher-id ones, each pass
        // in increasing order, so every neighbor list comes out sorted.
        let mut by_target: Vec<(usize, usize, f64)> = edges.iter().map(|&(u, v, w)| (v, u, w)).collect();
        by_target.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        for &(v, u, w) in &by_target {
            targets[fill[v]] = u;
            weights[fill[v]] = w;
            fill[v] += 1;
        }
        for &(u, v, w) in edges {
            targets[fill[u]] = v;
            weights[fill[u]] = w;
            fill[u] += 1;
        }
        let degrees = (0..n)
            .map(|u| weights[offsets[u]..offsets[u + 1]].iter().sum())
            .collect();
        let mut g = Graph {
            offsets,
            targets,
            weights,
            degrees,
            connected: false,
        };
        g.connected = g.component_count() == 1;
        g
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.offsets[u]..self.offsets[u + 1];
        self.targets[r.clone()].iter().copied().zip(self.weights[r].iter().copied())
    }

    pub fn neighbor_ids(&self, u: usize) -> &[usize] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<f64> {
        let r = self.offsets[u]..self.offsets[u + 1];
        self.targets[r.clone()]
            .binary_search(&v)
            .ok()
            .map(|i| self.weights[r.start + i])
    }

    pub fn degree(&self, u: usize) -> f64 {
        self.degrees[u]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    /// Each undirected edge once, as `(u, v, w)` with `u < v`, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&(v, _)| v > u)
                .map(move |(v, w)| (u, v, w))
        })
    }

    pub fn first_isolated(&self) -> Option<usize> {
        self.degrees.iter().position(|&d| d <= 0.0)
    }

    pub(crate) fn require_no_isolated(&self) -> Result<()> {
        match self.first_isolated() {
            Some(u) => Err(Error::IsolatedVertex(u)),
            None => Ok(()),
        }
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        self.require_no_isolated()?;
        if self.connected {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// Component label per vertex (labels in order of first appearance).
    pub fn components(&self) -> Vec<usize> {
        let n = self.n();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbor_ids(u) {
                    if label[v] == usize::MAX {
                        label[v] = next;
                        queue.push_back(v);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    /// Common degree if every vertex has the same weighted degree (within `tol`).
    pub fn regular_degree(&self, tol: f64) -> Option<f64> {
        let d0 = *self.degrees.first()?;
        self.degrees
            .iter()
            .all(|&d| (d - d0).abs() <= tol)
            .then_some(d0)
    }

    /// `y = A x`.
    pub fn adjacency_mul(&self, x: &[f64], y: &mut [f64]) {
        for (u, yu) in y.iter_mut().enumerate() {
            *yu = self.neighbors(u).map(|(v, w)| w * x[v]).sum();
        }
    }

    pub fn dense_adjacency(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut a = DMatrix::zeros(n, n);
        for u in 0..n {
            for (v, w) in self.neighbors(u) {
                a[(u, v)] = w;
            }
        }
        a
    }

    /// Dense `𝓛 = I − D^(-1/2) A D^(-1/2)`.
    pub fn dense_normalized_laplacian(&self) -> Result<DMatrix<f64>> {
        self.require_no_isolated()?;
        let n = self.n();
        let s: Vec<f64> = self.degrees.iter().map(|d| d.sqrt().recip()).collect();
        let mut l = DMatrix::identity(n, n);
        for u in 0..n {
            for (v, w) in self.neighbors(u) {
                l[(u, v)] -= w * s[u] * s[v];
            }
        }
        Ok(l)
    }

    /// Dense combinatorial Laplacian `D − A`.
    pub fn dense_laplacian(&self) -> DMatrix<f64> {
        let mut l = -self.dense_adjacency();
        for u in 0..self.n() {
            l[(u, u)] += self.degrees[u];
        }
        l
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WalkKind {
    /// `W = (I + A D⁻¹) / 2`
    Lazy,
    /// `A D⁻¹`
    Standard,
    /// `D^(-1/2) A D^(-1/2)`
    NormalizedAdjacency,
}

/// Matrix-free walk operator over a borrowed graph.
#[derive(Debug, Clone, Copy)]
pub struct WalkOperator<'g> {
    graph: &'g Graph,
    kind: WalkKind,
}

impl<'g> WalkOperator<'g> {
    pub fn new(graph: &'g Graph, kind: WalkKind) -> Result<Self> {
        graph.require_no_isolated()?;
        Ok(Self { graph, kind })
    }

    pub fn kind(&self) -> WalkKind {
        self.kind
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.graph.n();
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.len() });
        }
        let mut y = vec![0.0; n];
        self.apply_into(x, &mut y);
        Ok(y)
    }

    /// Unchecked variant of [`apply`](Self::apply); lengths must equal `n`.
    pub fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let g = self.graph;
        match self.kind {
            WalkKind::Standard | WalkKind::Lazy => {
                // Scatter form keeps every column exactly stochastic.
                y.iter_mut().for_each(|v| *v = 0.0);
                for u in 0..g.n() {
                    let share = x[u] / g.degrees[u];
                    for (v, w) in g.neighbors(u) {
                        y[v] += w * share;
                    }
                }
                if self.kind == WalkKind::Lazy {
                    for (yi, xi) in y.iter_mut().zip(x) {
                        *yi = 0.5 * (*yi + xi);
                    }
                }
            }
            WalkKind::NormalizedAdjacency => {
                for (u, yu) in y.iter_mut().enumerate() {
                    let su = g.degrees[u].sqrt();
                    *yu = g
                        .neighbors(u)
                        .map(|(v, w)| w * x[v] / (su * g.degrees[v].sqrt()))
                        .sum();
                }
            }
        }
    }
}

/// `(D^(-1/2) A D^(-1/2))^p e_seed` by repeated application.
pub fn normalized_adjacency_power(graph: &Graph, seed: usize, p: usize) -> Result<Vec<f64>> {
    let n = graph.n();
    if seed >= n {
        return Err(Error::VertexOutOfRange { vertex: seed, n });
    }
    let op = WalkOperator::new(graph, WalkKind::NormalizedAdjacency)?;
    let mut x = vec![0.0; n];
    x[seed] = 1.0;
    let mut y = vec![0.0; n];
    for _ in 0..p {
        op.apply_into(&x, &mut y);
        std::mem::swap(&mut x, &mut y);
    }
    Ok(x)
}

/// Which Laplacian a Rayleigh quotient or spectral basis refers to.
///
/// `Normalized` and `RandomWalk` share eigenvalues: `RandomWalk` is the
/// generalized problem `L z = λ D z` (Laplacian eigenmaps), whose solutions are
/// `z = D^(-1/2) q` for eigenvectors `q` of `𝓛`. Its quotient
/// `zᵀ L z / zᵀ D z` equals the `𝓛` quotient of `D^(1/2) z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum LaplacianKind {
    /// `𝓛 = I − D^(-1/2) A D^(-1/2)`, quotient `xᵀ𝓛x / xᵀx`.
    Normalized,
    /// `L z = λ D z`, quotient `xᵀLx / xᵀDx`.
    #[default]
    RandomWalk,
    /// `L = D − A`, quotient `xᵀLx / xᵀx`.
    Combinatorial,
}

fn check_len(graph: &Graph, x: &[f64]) -> Result<()> {
    if x.len() != graph.n() {
        return Err(Error::DimensionMismatch { expected: graph.n(), found: x.len() });
    }
    Ok(())
}

/// `xᵀ𝓛x`, accumulated edge-wise as `Σ w_uv (x_u/√d_u − x_v/√d_v)²`, so the
/// result is never negative.
pub fn laplacian_quadratic_form(graph: &Graph, x: &[f64]) -> Result<f64> {
    check_len(graph, x)?;
    graph.require_no_isolated()?;
    let d = graph.degrees();
    Ok(graph
        .edges()
        .map(|(u, v, w)| {
            let t = x[u] / d[u].sqrt() - x[v] / d[v].sqrt();
            w * t * t
        })
        .sum())
}

/// `xᵀLx = Σ w_uv (x_u − x_v)²` for the combinatorial Laplacian.
pub fn combinatorial_quadratic_form(graph: &Graph, x: &[f64]) -> Result<f64> {
    check_len(graph, x)?;
    Ok(graph
        .edges()
        .map(|(u, v, w)| w * (x[u] - x[v]) * (x[u] - x[v]))
        .sum())
}

/// Rayleigh quotient of `x` for the chosen Laplacian.
pub fn rayleigh_quotient(graph: &Graph, x: &[f64], kind: LaplacianKind) -> Result<f64> {
    check_len(graph, x)?;
    let (num, den) = match kind {
        LaplacianKind::Normalized => (
            laplacian_quadratic_form(graph, x)?,
            x.iter().map(|v| v * v).sum::<f64>(),
        ),
        LaplacianKind::RandomWalk => {
            graph.require_no_isolated()?;
            (
                combinatorial_quadratic_form(graph, x)?,
                x.iter().zip(graph.degrees()).map(|(v, d)| d * v * v).sum::<f64>(),
            )
        }
        LaplacianKind::Combinatorial => (
            combinatorial_quadratic_form(graph, x)?,
            x.iter().map(|v| v * v).sum::<f64>(),
        ),
    };
    if den == 0.0 {
        return Err(Error::param("Rayleigh quotient of the zero vector"));
    }
    Ok(num / den)
}
