//! Linear algebra used by the solvers.
//!
//! Every sparse system the crate solves has the form `M = diag(a) − c·A` with
//! `a_u ≥ c·d_u` and at least one strict inequality per component, i.e. `M` is
//! a symmetric M-matrix (Stieltjes). PageRank systems, shift-inverted
//! Laplacians and their lazy variants all reduce to this shape after the
//! change of variables `x = D y`.

mod cg;
pub mod dense;
mod envelope;
mod ordering;
pub mod svd;

pub use cg::conjugate_gradient;
pub use envelope::EnvelopeCholesky;
pub use ordering::reverse_cuthill_mckee;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// `M = diag(diag) − coupling · A` over a borrowed graph.
#[derive(Debug, Clone)]
pub struct GraphSystem<'g> {
    graph: &'g Graph,
    diag: Vec<f64>,
    coupling: f64,
}

impl<'g> GraphSystem<'g> {
    pub fn new(graph: &'g Graph, diag: Vec<f64>, coupling: f64) -> Result<Self> {
        if diag.len() != graph.n() {
            return Err(Error::DimensionMismatch { expected: graph.n(), found: diag.len() });
        }
        Ok(Self { graph, diag, coupling })
    }

    /// `a·D − c·A`.
    pub fn scaled_degrees(graph: &'g Graph, degree_scale: f64, coupling: f64) -> Self {
        let diag = graph.degrees().iter().map(|d| degree_scale * d).collect();
        Self { graph, diag, coupling }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// `y = M x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (u, yu) in y.iter_mut().enumerate() {
            let ax: f64 = self.graph.neighbors(u).map(|(v, w)| w * x[v]).sum();
            *yu = self.diag[u] * x[u] - self.coupling * ax;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    /// Envelope Cholesky after reverse Cuthill–McKee ordering.
    #[default]
    Direct,
    /// Jacobi-preconditioned conjugate gradients.
    Iterative,
}

/// Largest envelope (stored factor entries) the direct solver will allocate.
pub const DEFAULT_MAX_ENVELOPE: usize = 60_000_000;

/// A [`GraphSystem`] prepared for repeated solves.
#[derive(Debug)]
pub struct SystemSolver<'g> {
    system: GraphSystem<'g>,
    factor: Option<EnvelopeCholesky>,
    tol: f64,
    max_iter: usize,
}

impl<'g> SystemSolver<'g> {
    /// `tol` is the absolute 1-norm residual target of the iterative path.
    pub fn prepare(system: GraphSystem<'g>, kind: SolverKind, tol: f64) -> Result<Self> {
        let factor = match kind {
            SolverKind::Direct => Some(EnvelopeCholesky::factor(&system, DEFAULT_MAX_ENVELOPE)?),
            SolverKind::Iterative => None,
        };
        let max_iter = 20 * system.n() + 1000;
        Ok(Self { system, factor, tol, max_iter })
    }

    pub fn system(&self) -> &GraphSystem<'g> {
        &self.system
    }

    pub fn kind(&self) -> SolverKind {
        if self.factor.is_some() {
            SolverKind::Direct
        } else {
            SolverKind::Iterative
        }
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        if rhs.len() != self.system.n() {
            return Err(Error::DimensionMismatch { expected: self.system.n(), found: rhs.len() });
        }
        match &self.factor {
            Some(f) => Ok(f.solve(rhs)),
            None => conjugate_gradient(&self.system, rhs, self.tol, self.max_iter).map(|(y, _)| y),
        }
    }
}
