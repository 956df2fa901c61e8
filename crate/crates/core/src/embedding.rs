//! Log-PageRank embedding: sample seeds, solve one PageRank column per seed,
//! take elementwise logs, keep left singular vectors `2..=k+1`.
//!
//! The logarithm is natural; any other base scales `Y` uniformly and leaves
//! the left singular vectors unchanged.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, WalkKind};
use crate::linalg::dense::sign_normalize_columns;
use crate::linalg::svd::{randomized_svd, thin_svd};
use crate::pagerank::{prepare, PageRankConfig, SeedDiffusion};
use crate::rng::PortableRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Transform {
    #[default]
    Log,
    /// No transform ("raw" PageRank).
    Identity,
}

impl Transform {
    pub fn name(&self) -> &'static str {
        match self {
            Transform::Log => "log",
            Transform::Identity => "raw",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Sampling {
    #[default]
    WithoutReplacement,
    WithReplacement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SvdMethod {
    #[default]
    Dense,
    Randomized,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingConfig {
    pub k: usize,
    /// Seed count; `None` picks [`default_sample_count`].
    pub samples: Option<usize>,
    pub pagerank: PageRankConfig,
    pub transform: Transform,
    pub rng_seed: u64,
    pub zero_replacement_factor: f64,
    /// Scale each transformed column to unit 2-norm before the SVD.
    pub normalize_columns: bool,
    pub sampling: Sampling,
    pub svd: SvdMethod,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        Self {
            k: 2,
            samples: None,
            pagerank: PageRankConfig::default(),
            transform: Transform::Log,
            rng_seed: 0,
            zero_replacement_factor: 0.1,
            normalize_columns: false,
            sampling: Sampling::WithoutReplacement,
            svd: SvdMethod::Dense,
        }
    }
}

impl EmbeddingConfig {
    pub fn sample_count(&self, n: usize) -> usize {
        self.samples.unwrap_or_else(|| default_sample_count(n, self.k))
    }

    fn validate(&self, n: usize) -> Result<usize> {
        if self.k == 0 {
            return Err(Error::param("k must be at least 1"));
        }
        let s = self.sample_count(n);
        if s < self.k + 1 {
            return Err(Error::param(format!("need at least k+1 = {} samples, got {s}", self.k + 1)));
        }
        if self.k + 1 > n {
            return Err(Error::param(format!("k+1 = {} exceeds n = {n}", self.k + 1)));
        }
        if !(self.zero_replacement_factor > 0.0 && self.zero_replacement_factor < 1.0) {
            return Err(Error::param(format!(
                "zero replacement factor must lie in (0, 1), got {}",
                self.zero_replacement_factor
            )));
        }
        Ok(s)
    }
}

/// `min(⌈(10 + k) ln n⌉, n)`.
pub fn default_sample_count(n: usize, k: usize) -> usize {
    let s = ((10 + k) as f64 * (n as f64).ln()).ceil() as usize;
    s.clamp(1, n.max(1))
}

/// `s` distinct vertices drawn uniformly from `0..n`.
pub fn sample_seeds(n: usize, s: usize, rng_seed: u64) -> Result<Vec<usize>> {
    if s > n {
        return Err(Error::param(format!("cannot draw {s} distinct seeds from {n} vertices")));
    }
    Ok(PortableRng::new(rng_seed).sample_without_replacement(n, s))
}

/// `n × s` matrix whose column `j` is the diffusion of `seeds[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    pub columns: DMatrix<f64>,
    pub seeds: Vec<usize>,
}

/// Solves every column independently; columns are placed by index, so the
/// result does not depend on thread scheduling.
pub fn build_sample_matrix<D: SeedDiffusion + ?Sized>(diffusion: &D, seeds: &[usize]) -> Result<SampleMatrix> {
    let n = diffusion.n();
    let cols: Vec<Vec<f64>> = seeds
        .par_iter()
        .map(|&s| diffusion.diffuse(s))
        .collect::<Result<_>>()?;
    let mut columns = DMatrix::zeros(n, seeds.len());
    for (j, c) in cols.iter().enumerate() {
        columns.column_mut(j).copy_from_slice(c);
    }
    Ok(SampleMatrix { columns, seeds: seeds.to_vec() })
}

/// Elementwise natural log. Entries that are not positive (exact zeros, or
/// roundoff negatives from an iterative solve) become
/// `ln(factor · min positive entry)`. Returns the matrix and the replacement count.
pub fn log_transform(x: &SampleMatrix, zero_replacement_factor: f64) -> Result<(SampleMatrix, usize)> {
    for (j, col) in x.columns.column_iter().enumerate() {
        if col.iter().all(|&v| !(v > 0.0)) {
            return Err(Error::AllZeroColumn(j));
        }
    }
    let min_pos = x.columns.iter().copied().filter(|&v| v > 0.0).fold(f64::INFINITY, f64::min);
    let floor = (zero_replacement_factor * min_pos).ln();
    let mut replaced = 0;
    let columns = x.columns.map(|v| {
        if v > 0.0 {
            v.ln()
        } else {
            replaced += 1;
            floor
        }
    });
    if replaced > 0 {
        log::warn!("replaced {replaced} non-positive PageRank entries before the log");
    }
    Ok((SampleMatrix { columns, seeds: x.seeds.clone() }, replaced))
}

/// Left singular vectors `2..=k+1` of `y` with their diagnostics.
#[derive(Debug, Clone)]
pub struct SvdEmbedding {
    pub z: DMatrix<f64>,
    /// All computed singular values, descending.
    pub singular_values: Vec<f64>,
    /// Embedding columns (0-based) lying beyond the numerical rank.
    pub flagged_columns: Vec<usize>,
}

pub fn svd_embedding(y: &DMatrix<f64>, k: usize) -> Result<SvdEmbedding> {
    svd_embedding_with(y, k, SvdMethod::Dense, 0)
}

fn svd_embedding_with(y: &DMatrix<f64>, k: usize, method: SvdMethod, rng_seed: u64) -> Result<SvdEmbedding> {
    let (n, s) = y.shape();
    if k + 1 > n.min(s) {
        return Err(Error::param(format!("k+1 = {} exceeds min(n, s) = {}", k + 1, n.min(s))));
    }
    let (u, sigma) = match method {
        SvdMethod::Dense => thin_svd(y)?,
        SvdMethod::Randomized => {
            let mut rng = PortableRng::with_stream(rng_seed, 1);
            randomized_svd(y, k + 1, 10, 4, &mut rng)?
        }
    };
    let tol = sigma[0] * (n.max(s) as f64) * f64::EPSILON;
    let rank = sigma.iter().filter(|&&v| v > tol).count();
    if rank < 2 {
        return Err(Error::RankDeficient { rank, needed: k + 1 });
    }
    let flagged_columns: Vec<usize> = (0..k).filter(|&j| j + 1 >= rank).collect();
    if !flagged_columns.is_empty() {
        log::warn!("numerical rank {rank} < k+1 = {}; embedding columns {flagged_columns:?} are unreliable", k + 1);
    }
    let mut z = u.columns(1, k).into_owned();
    sign_normalize_columns(&mut z);
    Ok(SvdEmbedding { z, singular_values: sigma, flagged_columns })
}

/// Inputs and counts needed to reproduce an embedding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seeds: Vec<usize>,
    pub alpha: f64,
    pub walk: WalkKind,
    pub transform: Transform,
    pub replacement_count: usize,
    pub rng_seed: u64,
    pub normalize_columns: bool,
}

/// `n × k` column-orthonormal embedding; each column's largest-magnitude
/// entry is positive.
#[derive(Debug, Clone)]
pub struct EmbeddingMatrix {
    pub z: DMatrix<f64>,
    pub singular_values: Vec<f64>,
    pub flagged_columns: Vec<usize>,
    pub provenance: Provenance,
}

/// Draws the seed list the configuration calls for.
pub fn draw_seeds(n: usize, config: &EmbeddingConfig) -> Result<Vec<usize>> {
    let s = config.validate(n)?;
    match config.sampling {
        Sampling::WithoutReplacement => sample_seeds(n, s, config.rng_seed),
        Sampling::WithReplacement => Ok(PortableRng::new(config.rng_seed).sample_with_replacement(n, s)),
    }
}

/// Transform (and optionally normalize) a sample matrix, then embed it.
pub fn embed_samples(x: &SampleMatrix, config: &EmbeddingConfig) -> Result<EmbeddingMatrix> {
    let (mut y, replaced) = match config.transform {
        Transform::Log => log_transform(x, config.zero_replacement_factor)?,
        Transform::Identity => (x.clone(), 0),
    };
    if config.normalize_columns {
        for mut col in y.columns.column_iter_mut() {
            let norm = col.norm();
            if norm > 0.0 {
                col /= norm;
            }
        }
    }
    let svd = svd_embedding_with(&y.columns, config.k, config.svd, config.rng_seed)?;
    Ok(EmbeddingMatrix {
        z: svd.z,
        singular_values: svd.singular_values,
        flagged_columns: svd.flagged_columns,
        provenance: Provenance {
            seeds: x.seeds.clone(),
            alpha: config.pagerank.alpha,
            walk: config.pagerank.walk,
            transform: config.transform,
            replacement_count: replaced,
            rng_seed: config.rng_seed,
            normalize_columns: config.normalize_columns,
        },
    })
}

/// Full pipeline over any seed diffusion (graph PageRank, hypergraph PageRank, …).
pub fn embed_diffusion<D: SeedDiffusion + ?Sized>(diffusion: &D, config: &EmbeddingConfig) -> Result<EmbeddingMatrix> {
    let seeds = draw_seeds(diffusion.n(), config)?;
    let x = build_sample_matrix(diffusion, &seeds)?;
    embed_samples(&x, config)
}

pub fn log_pagerank_embedding(graph: &Graph, config: &EmbeddingConfig) -> Result<EmbeddingMatrix> {
    config.validate(graph.n())?;
    let solver = prepare(graph, config.pagerank)?;
    embed_diffusion(&solver, config)
}
