//! Hypergraphs and expansion-based hypergraph PageRank.
//!
//! The seed diffusion is pluggable ([`SeedDiffusion`]); the shipped
//! primitives run graph PageRank on one of two expansions:
//!
//! - clique: every hyperedge `e` adds weight `1/(|e| − 1)` to each pair inside it;
//! - star: one hub vertex per hyperedge, joined to its members with unit weight.
//!
//! On the star expansion the walk alternates between vertices and hubs, so
//! the diffusion uses the standard walk at `√α`: two hops per vertex step.
//! When every hyperedge has two vertices, the vertex part of that vector,
//! renormalized, is exactly lazy graph PageRank at `α`.
//!
//! `kappa`, `gamma` and `rho` are carried as configuration for penalty-based
//! diffusions; the expansion primitives do not read them.

use serde::{Deserialize, Serialize};

use crate::embedding::{embed_diffusion, EmbeddingConfig, EmbeddingMatrix};
use crate::error::{Error, Result};
use crate::graph::{Graph, WalkKind};
use crate::linalg::SolverKind;
use crate::pagerank::{prepare, PageRankConfig, PageRankSolver, PageRankVector, SeedDiffusion};
use crate::rng::PortableRng;

#[derive(Debug, Clone, PartialEq)]
pub struct Hypergraph {
    n: usize,
    hyperedges: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

impl Hypergraph {
    /// Hyperedges are deduplicated within themselves and sorted. Those left
    /// with fewer than two vertices are dropped; the count is returned.
    pub fn new(n: usize, hyperedges: Vec<Vec<usize>>) -> Result<(Self, usize)> {
        let mut kept = Vec::with_capacity(hyperedges.len());
        let mut dropped = 0;
        for mut e in hyperedges {
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            e.sort_unstable();
            e.dedup();
            if e.len() < 2 {
                dropped += 1;
            } else {
                kept.push(e);
            }
        }
        if dropped > 0 {
            log::warn!("dropped {dropped} hyperedge(s) with fewer than two vertices");
        }
        if kept.is_empty() {
            return Err(Error::EmptyEdgeList);
        }
        Ok((Self { n, hyperedges: kept, labels: None }, dropped))
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: labels.len() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hyperedges(&self) -> &[Vec<usize>] {
        &self.hyperedges
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn is_connected(&self) -> bool {
        clique_expand(self).map(|g| g.is_connected()).unwrap_or(false)
    }
}

pub fn clique_expand(h: &Hypergraph) -> Result<Graph> {
    let mut edges = Vec::new();
    for e in &h.hyperedges {
        let w = 1.0 / (e.len() - 1) as f64;
        for (i, &u) in e.iter().enumerate() {
            for &v in &e[i + 1..] {
                edges.push((u, v, w));
            }
        }
    }
    Ok(Graph::from_edges(h.n, &edges)?.0)
}

/// Vertices keep their ids; hyperedge `j` becomes vertex `n + j`.
pub fn star_expand(h: &Hypergraph) -> Result<Graph> {
    let edges: Vec<_> = h
        .hyperedges
        .iter()
        .enumerate()
        .flat_map(|(j, e)| e.iter().map(move |&v| (v, h.n + j, 1.0)))
        .collect();
    Ok(Graph::from_edges(h.n + h.hyperedges.len(), &edges)?.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Expansion {
    #[default]
    Clique,
    Star,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypergraphDiffusionConfig {
    pub primitive: Expansion,
    pub alpha: f64,
    /// Walk used on the clique expansion (the star expansion fixes its own).
    pub walk: WalkKind,
    pub solver: SolverKind,
    pub kappa: f64,
    pub gamma: f64,
    pub rho: f64,
}

impl Default for HypergraphDiffusionConfig {
    fn default() -> Self {
        Self {
            primitive: Expansion::Clique,
            alpha: 0.99,
            walk: WalkKind::Lazy,
            solver: SolverKind::Direct,
            kappa: 0.000025,
            gamma: 1.0,
            rho: 0.5,
        }
    }
}

impl HypergraphDiffusionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.kappa >= 0.0) {
            return Err(Error::param(format!("kappa must be nonnegative, got {}", self.kappa)));
        }
        if !(self.gamma > 0.0) {
            return Err(Error::param(format!("gamma must be positive, got {}", self.gamma)));
        }
        Ok(())
    }

    /// PageRank settings applied to the expansion graph.
    pub fn pagerank(&self) -> PageRankConfig {
        match self.primitive {
            Expansion::Clique => PageRankConfig { alpha: self.alpha, walk: self.walk, solver: self.solver, ..Default::default() },
            Expansion::Star => PageRankConfig {
                alpha: self.alpha.sqrt(),
                walk: WalkKind::Standard,
                solver: self.solver,
                ..Default::default()
            },
        }
    }
}

/// Expansion graph plus settings; [`prepare`](Self::prepare) yields the solver.
#[derive(Debug, Clone)]
pub struct HypergraphDiffusion {
    n: usize,
    expansion: Graph,
    config: HypergraphDiffusionConfig,
}

impl HypergraphDiffusion {
    pub fn new(h: &Hypergraph, config: HypergraphDiffusionConfig) -> Result<Self> {
        config.validate()?;
        let expansion = match config.primitive {
            Expansion::Clique => clique_expand(h)?,
            Expansion::Star => star_expand(h)?,
        };
        if !expansion.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(Self { n: h.n(), expansion, config })
    }

    pub fn expansion(&self) -> &Graph {
        &self.expansion
    }

    pub fn prepare(&self) -> Result<HypergraphSolver<'_>> {
        Ok(HypergraphSolver { n: self.n, inner: prepare(&self.expansion, self.config.pagerank())? })
    }
}

#[derive(Debug)]
pub struct HypergraphSolver<'g> {
    n: usize,
    inner: PageRankSolver<'g>,
}

impl SeedDiffusion for HypergraphSolver<'_> {
    fn n(&self) -> usize {
        self.n
    }

    /// Expansion PageRank restricted to the original vertices, renormalized.
    fn diffuse(&self, seed: usize) -> Result<Vec<f64>> {
        if seed >= self.n {
            return Err(Error::VertexOutOfRange { vertex: seed, n: self.n });
        }
        let mut x = self.inner.diffuse(seed)?;
        x.truncate(self.n);
        let total: f64 = x.iter().sum();
        x.iter_mut().for_each(|v| *v /= total);
        Ok(x)
    }
}

pub fn hypergraph_pagerank(h: &Hypergraph, config: HypergraphDiffusionConfig, seed: usize) -> Result<PageRankVector> {
    let diffusion = HypergraphDiffusion::new(h, config)?;
    let values = diffusion.prepare()?.diffuse(seed)?;
    Ok(PageRankVector { values, seed: Some(seed), alpha: config.alpha })
}

/// The embedding pipeline with hypergraph PageRank as the column primitive.
/// `embedding.pagerank` is replaced by the diffusion's own settings.
pub fn hypergraph_log_pr_embedding(
    h: &Hypergraph,
    embedding: &EmbeddingConfig,
    diffusion: &HypergraphDiffusionConfig,
) -> Result<EmbeddingMatrix> {
    let d = HypergraphDiffusion::new(h, *diffusion)?;
    let solver = d.prepare()?;
    let cfg = EmbeddingConfig {
        pagerank: PageRankConfig { alpha: diffusion.alpha, ..diffusion.pagerank() },
        ..*embedding
    };
    embed_diffusion(&solver, &cfg)
}

/// Planted-partition hypergraph: `blocks` groups of `block_size` vertices,
/// `per_block` random hyperedges of `edge_size` vertices inside each group
/// and `crossing` hyperedges spanning at least two groups.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlantedSpec {
    pub blocks: usize,
    pub block_size: usize,
    pub per_block: usize,
    pub edge_size: usize,
    pub crossing: usize,
    pub rng_seed: u64,
}

impl Default for PlantedSpec {
    fn default() -> Self {
        Self { blocks: 3, block_size: 30, per_block: 50, edge_size: 4, crossing: 5, rng_seed: 0 }
    }
}

impl PlantedSpec {
    /// Vertex labels are the block indices.
    pub fn generate(&self) -> Result<Hypergraph> {
        let (b, s, m) = (self.blocks, self.block_size, self.edge_size);
        if b < 2 || m < 2 || m > s {
            return Err(Error::param("planted hypergraph needs blocks >= 2 and 2 <= edge_size <= block_size"));
        }
        let n = b * s;
        let mut rng = PortableRng::new(self.rng_seed);
        let mut edges = Vec::with_capacity(b * self.per_block + self.crossing);
        for blk in 0..b {
            for _ in 0..self.per_block {
                let e = rng.sample_without_replacement(s, m).into_iter().map(|v| blk * s + v).collect();
                edges.push(e);
            }
        }
        let mut made = 0;
        while made < self.crossing {
            let e = rng.sample_without_replacement(n, m);
            if e.iter().any(|&v| v / s != e[0] / s) {
                edges.push(e);
                made += 1;
            }
        }
        let labels = (0..n).map(|v| (v / s).to_string()).collect();
        Hypergraph::new(n, edges)?.0.with_labels(labels)
    }

    /// Tries `rng_seed, rng_seed + 1, …` until the hypergraph is connected.
    pub fn generate_connected(&self, attempts: usize) -> Result<(Hypergraph, u64)> {
        for a in 0..attempts.max(1) as u64 {
            let spec = PlantedSpec { rng_seed: self.rng_seed.wrapping_add(a), ..*self };
            let h = spec.generate()?;
            if h.is_connected() {
                return Ok((h, spec.rng_seed));
            }
        }
        Err(Error::Disconnected)
    }
}
