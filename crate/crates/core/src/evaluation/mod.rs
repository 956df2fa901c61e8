//! Quantitative comparisons between PageRank embeddings and the spectral
//! baseline.
//!
//! The approximation error is `(s − p)/s` where `s` is the Rayleigh quotient
//! of the baseline vector and `p` that of the embedding vector, both for the
//! same [`LaplacianKind`]. With the default random-walk kind the quotient is
//! `xᵀLx / xᵀDx` and `s = λ₂`, so `p ≥ s` and errors are zero or negative.

mod oracle;
mod table1;

pub use oracle::{expectation_oracle_ar1, Ar1Block, Ar1Report};
pub use table1::{published_value, reproduce_table1, Table1, Table1Config, Table1Row};

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embedding::{build_sample_matrix, draw_seeds, embed_samples, EmbeddingConfig, Transform};
use crate::error::{Error, Result};
use crate::graph::{rayleigh_quotient, Graph, LaplacianKind};
use crate::linalg::dense::max_principal_angle;
use crate::pagerank::prepare;
use crate::rng::PortableRng;
use crate::spectral::{laplacian_eigenpairs, EigenMethod};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxErrorReport {
    /// Quotient of the baseline vector.
    pub s: f64,
    /// Quotient of the embedding vector.
    pub p: f64,
    /// `(s − p)/s`, signed.
    pub error: f64,
    pub laplacian: LaplacianKind,
    pub graph: Option<String>,
    pub alpha: Option<f64>,
    pub transform: Option<Transform>,
    pub trial: Option<usize>,
}

/// Relative difference of Rayleigh quotients; invariant to the
/// scale and sign of either vector.
pub fn approximation_error(graph: &Graph, u: &[f64], z: &[f64], kind: LaplacianKind) -> Result<ApproxErrorReport> {
    let s = rayleigh_quotient(graph, z, kind)?;
    let p = rayleigh_quotient(graph, u, kind)?;
    if !s.is_finite() || !p.is_finite() {
        return Err(Error::param("vectors must be nonzero and finite"));
    }
    if s == 0.0 {
        return Err(Error::ZeroBaseline);
    }
    Ok(ApproxErrorReport {
        s,
        p,
        error: (s - p) / s,
        laplacian: kind,
        graph: None,
        alpha: None,
        transform: None,
        trial: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointCorrelation {
    /// `|Pearson r|` between `u` and `z`.
    pub correlation: f64,
    /// `(z_i, u_i)` pairs with `u` sign-aligned to `z`.
    pub scatter: Vec<(f64, f64)>,
}

pub fn joint_correlation(u: &[f64], z: &[f64]) -> Result<JointCorrelation> {
    if u.len() != z.len() {
        return Err(Error::DimensionMismatch { expected: z.len(), found: u.len() });
    }
    let n = u.len() as f64;
    let mean = |x: &[f64]| x.iter().sum::<f64>() / n;
    let (mu, mz) = (mean(u), mean(z));
    let (mut suz, mut suu, mut szz) = (0.0, 0.0, 0.0);
    for (a, b) in u.iter().zip(z) {
        let (du, dz) = (a - mu, b - mz);
        suz += du * dz;
        suu += du * du;
        szz += dz * dz;
    }
    if suu == 0.0 || szz == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let r = suz / (suu.sqrt() * szz.sqrt());
    let sign = if r < 0.0 { -1.0 } else { 1.0 };
    Ok(JointCorrelation {
        correlation: r.abs(),
        scatter: z.iter().zip(u).map(|(&zi, &ui)| (zi, sign * ui)).collect(),
    })
}

/// Largest principal angle between the column spans, in radians.
pub fn subspace_angle(u: &DMatrix<f64>, z: &DMatrix<f64>) -> Result<f64> {
    max_principal_angle(u, z)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum TrialSeeding {
    /// Trial `t` draws its seeds from stream `t` of the master seed.
    #[default]
    Streams,
    /// Every trial reuses the master seed.
    Fixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceConfig {
    pub trials: usize,
    pub fractions: Vec<f64>,
    pub laplacian: LaplacianKind,
    pub seeding: TrialSeeding,
}

impl Default for VarianceConfig {
    fn default() -> Self {
        Self {
            trials: 50,
            fractions: vec![0.01, 0.05, 0.10],
            laplacian: LaplacianKind::default(),
            seeding: TrialSeeding::Streams,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceRow {
    pub fraction: f64,
    pub samples: usize,
    pub errors: Vec<f64>,
    pub variance: f64,
    pub min: f64,
    pub max: f64,
    pub median: f64,
}

impl VarianceRow {
    pub fn spread(&self) -> f64 {
        self.max - self.min
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceReport {
    pub rows: Vec<VarianceRow>,
    pub rng_seed: u64,
}

/// Seed for trial `t` under the given seeding rule.
pub fn trial_seed(master: u64, trial: usize, seeding: TrialSeeding) -> u64 {
    match seeding {
        TrialSeeding::Streams => PortableRng::with_stream(master, trial as u64).next_u64(),
        TrialSeeding::Fixed => master,
    }
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Repeats the embedding with fresh seed sets and summarizes the spread of
/// the `u₂` approximation error per sample fraction. One factorization and
/// one spectral baseline serve every trial.
pub fn variance_study(graph: &Graph, config: &EmbeddingConfig, study: &VarianceConfig) -> Result<VarianceReport> {
    if study.trials < 2 {
        return Err(Error::param("variance study needs at least 2 trials"));
    }
    let n = graph.n();
    let basis = laplacian_eigenpairs(graph, 1, study.laplacian, EigenMethod::Auto)?;
    let z2 = basis.vector(1);
    let solver = prepare(graph, config.pagerank)?;
    let mut rows = Vec::new();
    for &fraction in &study.fractions {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(Error::param(format!("sample fraction must lie in (0, 1], got {fraction}")));
        }
        let samples = ((fraction * n as f64).ceil() as usize).clamp(config.k + 1, n);
        let errors: Vec<f64> = (0..study.trials)
            .into_par_iter()
            .map(|t| {
                let cfg = EmbeddingConfig {
                    samples: Some(samples),
                    rng_seed: trial_seed(config.rng_seed, t, study.seeding),
                    ..*config
                };
                let seeds = draw_seeds(n, &cfg)?;
                let x = build_sample_matrix(&solver, &seeds)?;
                let emb = embed_samples(&x, &cfg)?;
                let u2: Vec<f64> = emb.z.column(0).iter().copied().collect();
                Ok(approximation_error(graph, &u2, &z2, study.laplacian)?.error)
            })
            .collect::<Result<_>>()?;
        let mean = errors.iter().sum::<f64>() / errors.len() as f64;
        let variance = errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (errors.len() - 1) as f64;
        rows.push(VarianceRow {
            fraction,
            samples,
            variance,
            min: errors.iter().copied().fold(f64::INFINITY, f64::min),
            max: errors.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            median: median(&errors),
            errors,
        });
    }
    Ok(VarianceReport { rows, rng_seed: config.rng_seed })
}
