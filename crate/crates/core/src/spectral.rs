//! Laplacian eigenvectors for the spectral baseline.
//!
//! All three [`LaplacianKind`]s are handled as one symmetric problem
//! `S⁻¹ L S⁻¹ q = λ q` (with `S = D^{1/2}` for the normalized and random-walk
//! kinds, `S = I` for the combinatorial one), whose trivial eigenvector `S e`
//! is known in closed form. Returned vectors are `q` itself, except for
//! [`LaplacianKind::RandomWalk`] where they are the eigenmap vectors
//! `z = D^{-1/2} q` scaled to unit length.
//!
//! Small graphs use a dense decomposition. Larger ones use shift-invert block
//! subspace iteration: `(S⁻¹LS⁻¹ + σI)⁻¹ = S (L + σS²)⁻¹ S`, and
//! `L + σS²` is again a Stieltjes matrix factored by the envelope Cholesky.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, LaplacianKind};
use crate::linalg::dense::{sign_normalize, symmetric_eigen_ascending};
use crate::linalg::{EnvelopeCholesky, GraphSystem, DEFAULT_MAX_ENVELOPE};
use crate::rng::PortableRng;

/// Eigenvalue gap below which neighbors are reported as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Which {
    Laplacian(LaplacianKind),
    LazyWalk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum EigenMethod {
    /// Dense up to [`DENSE_LIMIT`] vertices, iterative above.
    #[default]
    Auto,
    Dense,
    ShiftInvert,
}

pub const DENSE_LIMIT: usize = 500;

#[derive(Debug, Clone)]
pub struct SpectralBasis {
    /// Ascending for Laplacians, descending for the lazy walk.
    pub eigenvalues: Vec<f64>,
    /// One column per eigenvalue; the trivial vector comes first.
    pub eigenvectors: DMatrix<f64>,
    pub which: Which,
    /// Residual `‖𝓗q − λq‖₂` of each pair in the symmetric form.
    pub residuals: Vec<f64>,
    /// Indices `i` with `|λ_i − λ_{i+1}| < DEGENERACY_GAP`.
    pub degenerate: Vec<usize>,
}

impl SpectralBasis {
    /// The nontrivial columns (`z₂ …`), as an `n × k` matrix.
    pub fn embedding(&self) -> DMatrix<f64> {
        let c = self.eigenvectors.ncols();
        self.eigenvectors.columns(1, c - 1).into_owned()
    }

    pub fn vector(&self, j: usize) -> Vec<f64> {
        self.eigenvectors.column(j).iter().copied().collect()
    }
}

/// `z₂ … z_{k+1}` of the normalized Laplacian.
pub fn spectral_embedding(graph: &Graph, k: usize) -> Result<SpectralBasis> {
    laplacian_eigenpairs(graph, k, LaplacianKind::Normalized, EigenMethod::Auto)
}

/// The `k + 1` smallest eigenpairs (trivial one included) of the chosen Laplacian.
pub fn laplacian_eigenpairs(graph: &Graph, k: usize, kind: LaplacianKind, method: EigenMethod) -> Result<SpectralBasis> {
    let n = graph.n();
    graph.require_no_isolated()?;
    graph.require_connected()?;
    if k + 1 > n {
        return Err(Error::param(format!("k+1 = {} exceeds n = {n}", k + 1)));
    }
    let scale = scaling(graph, kind);
    let dense = match method {
        EigenMethod::Auto => n <= DENSE_LIMIT,
        EigenMethod::Dense => true,
        EigenMethod::ShiftInvert => false,
    };
    let (values, mut q) = if dense {
        dense_pairs(graph, kind, k + 1)
    } else {
        shift_invert_pairs(graph, &scale, k + 1)?
    };

    let trivial = trivial_vector(&scale);
    let overlap: f64 = q.column(0).iter().zip(&trivial).map(|(a, b)| a * b).sum();
    if (overlap.abs() - 1.0).abs() > 1e-8 {
        return Err(Error::Factorization(format!(
            "smallest eigenvector is not the trivial one (|cos| = {})",
            overlap.abs()
        )));
    }
    q.column_mut(0).copy_from_slice(&trivial);

    let residuals = (0..=k)
        .map(|j| symmetric_residual(graph, &scale, q.column(j).as_slice(), values[j]))
        .collect();

    if kind == LaplacianKind::RandomWalk {
        for mut col in q.column_iter_mut() {
            for (x, s) in col.iter_mut().zip(&scale) {
                *x /= s;
            }
            let norm = col.norm();
            col /= norm;
        }
    }
    for mut col in q.column_iter_mut() {
        sign_normalize(col.as_mut_slice());
    }
    let degenerate = degenerate_pairs(&values);
    Ok(SpectralBasis {
        eigenvalues: values,
        eigenvectors: q,
        which: Which::Laplacian(kind),
        residuals,
        degenerate,
    })
}

/// Top `k` eigenpairs of the lazy walk `W = (I + A D⁻¹)/2`, leading first.
///
/// `W = D^{1/2} (I − 𝓛/2) D^{-1/2}`, so its eigenvalues are `1 − λ/2` and its
/// right eigenvectors are `D^{1/2} q`, here scaled to unit length.
pub fn lazy_walk_eigenpairs(graph: &Graph, k: usize) -> Result<SpectralBasis> {
    if k == 0 {
        return Err(Error::param("k must be at least 1"));
    }
    let base = laplacian_eigenpairs(graph, k - 1, LaplacianKind::Normalized, EigenMethod::Auto)?;
    let sqrt_d: Vec<f64> = graph.degrees().iter().map(|d| d.sqrt()).collect();
    let mut v = base.eigenvectors;
    for mut col in v.column_iter_mut() {
        for (x, s) in col.iter_mut().zip(&sqrt_d) {
            *x *= s;
        }
        let norm = col.norm();
        col /= norm;
        sign_normalize(col.as_mut_slice());
    }
    let eigenvalues: Vec<f64> = base.eigenvalues.iter().map(|l| 1.0 - l / 2.0).collect();
    let degenerate = degenerate_pairs(&eigenvalues);
    Ok(SpectralBasis {
        eigenvalues,
        eigenvectors: v,
        which: Which::LazyWalk,
        residuals: base.residuals.iter().map(|r| r / 2.0).collect(),
        degenerate,
    })
}

fn degenerate_pairs(values: &[f64]) -> Vec<usize> {
    let d: Vec<usize> = values
        .windows(2)
        .enumerate()
        .filter(|(_, w)| (w[1] - w[0]).abs() < DEGENERACY_GAP)
        .map(|(i, _)| i)
        .collect();
    if !d.is_empty() {
        log::warn!("near-degenerate eigenvalues at positions {d:?}; only their span is determined");
    }
    d
}

/// Diagonal of `S`.
fn scaling(graph: &Graph, kind: LaplacianKind) -> Vec<f64> {
    match kind {
        LaplacianKind::Combinatorial => vec![1.0; graph.n()],
        _ => graph.degrees().iter().map(|d| d.sqrt()).collect(),
    }
}

fn trivial_vector(scale: &[f64]) -> Vec<f64> {
    let norm = scale.iter().map(|s| s * s).sum::<f64>().sqrt();
    scale.iter().map(|s| s / norm).collect()
}

/// `y = S⁻¹ L S⁻¹ x`.
fn apply_symmetric(graph: &Graph, scale: &[f64], x: &[f64], y: &mut [f64]) {
    let d = graph.degrees();
    for (u, yu) in y.iter_mut().enumerate() {
        let ax: f64 = graph.neighbors(u).map(|(v, w)| w * x[v] / scale[v]).sum();
        *yu = (d[u] * x[u] / scale[u] - ax) / scale[u];
    }
}

fn symmetric_residual(graph: &Graph, scale: &[f64], q: &[f64], lambda: f64) -> f64 {
    let mut y = vec![0.0; q.len()];
    apply_symmetric(graph, scale, q, &mut y);
    y.iter().zip(q).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt()
}

fn dense_pairs(graph: &Graph, kind: LaplacianKind, count: usize) -> (Vec<f64>, DMatrix<f64>) {
    let m = match kind {
        LaplacianKind::Combinatorial => graph.dense_laplacian(),
        _ => graph
            .dense_normalized_laplacian()
            .expect("isolated vertices were rejected above"),
    };
    let (values, vectors) = symmetric_eigen_ascending(m);
    (values[..count].to_vec(), vectors.columns(0, count).into_owned())
}

const SHIFT: f64 = 1e-9;
const MAX_ITERATIONS: usize = 500;
const TARGET_RESIDUAL: f64 = 1e-12;
/// Accepted, with a warning, if the target is not met within the cap.
const ACCEPT_RESIDUAL: f64 = 1e-6;

/// Block subspace iteration on `(S⁻¹LS⁻¹ + σI)⁻¹` with Rayleigh–Ritz on the
/// unshifted operator, deflating the known trivial vector.
fn shift_invert_pairs(graph: &Graph, scale: &[f64], count: usize) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = graph.n();
    let diag: Vec<f64> = graph
        .degrees()
        .iter()
        .zip(scale)
        .map(|(d, s)| d + SHIFT * s * s)
        .collect();
    let system = GraphSystem::new(graph, diag, 1.0)?;
    let factor = EnvelopeCholesky::factor(&system, DEFAULT_MAX_ENVELOPE)?;
    let trivial = trivial_vector(scale);
    let want = count - 1;
    let block = (want + 8).min(n - 1);

    let deflate = |v: &mut [f64]| {
        let c: f64 = v.iter().zip(&trivial).map(|(a, b)| a * b).sum();
        v.iter_mut().zip(&trivial).for_each(|(a, b)| *a -= c * b);
    };
    let mut rng = PortableRng::new(0x5eed);
    let mut v = DMatrix::from_fn(n, block, |_, _| rng.standard_normal());
    let mut values = vec![0.0; want];
    let mut worst = f64::INFINITY;
    let mut lv = DMatrix::zeros(n, block);

    for _ in 0..MAX_ITERATIONS {
        for mut col in v.column_iter_mut() {
            let c = col.as_mut_slice();
            deflate(c);
            let rhs: Vec<f64> = c.iter().zip(scale).map(|(x, s)| x * s).collect();
            let y = factor.solve(&rhs);
            for ((ci, yi), s) in c.iter_mut().zip(&y).zip(scale) {
                *ci = yi * s;
            }
            deflate(c);
        }
        v = v.qr().q();
        for j in 0..block {
            apply_symmetric(graph, scale, v.column(j).as_slice(), lv.column_mut(j).as_mut_slice());
        }
        let h = v.transpose() * &lv;
        let h = (&h + h.transpose()) * 0.5;
        let (theta, y) = symmetric_eigen_ascending(h);
        v = &v * &y;
        lv = &lv * &y;
        worst = 0.0;
        for j in 0..want {
            let r = (lv.column(j) - v.column(j) * theta[j]).norm();
            worst = f64::max(worst, r);
        }
        values.copy_from_slice(&theta[..want]);
        if worst <= TARGET_RESIDUAL {
            break;
        }
    }
    if worst > ACCEPT_RESIDUAL {
        return Err(Error::NonConvergence { iterations: MAX_ITERATIONS, residual: worst });
    }
    if worst > TARGET_RESIDUAL {
        log::warn!("eigensolver stopped at residual {worst:e} after {MAX_ITERATIONS} iterations");
    }
    let mut q = DMatrix::zeros(n, count);
    q.column_mut(0).copy_from_slice(&trivial);
    q.columns_mut(1, want).copy_from(&v.columns(0, want));
    let mut all = vec![0.0];
    all.extend_from_slice(&values);
    Ok((all, q))
}
