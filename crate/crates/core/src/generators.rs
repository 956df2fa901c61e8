//! Synthetic graph families: chains, k-nearest-neighbor geometric graphs and
//! stochastic block models.
//!
//! Every generator is a pure function of its arguments. Randomness comes
//! from [`PortableRng`] seeded with `rng_seed`, so edge lists are identical
//! across runs and platforms.
//!
//! SBM naming: `sbm(n_per_block, blocks, p_within, q_between)`. A row label
//! such as `sbm(50,60,0.25,0.005)` means 60 blocks of 50 vertices.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::PortableRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Chain,
    KnnGeometric,
    Sbm,
}

/// Family parameters. For `Chain` only `n` is read; for `KnnGeometric`, `n`
/// points with `k` neighbors; for `Sbm`, `blocks = k` groups of `n` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub q: f64,
    pub rng_seed: u64,
}

impl GeneratorSpec {
    pub fn chain(n: usize) -> Self {
        Self { family: Family::Chain, n, k: 0, p: 0.0, q: 0.0, rng_seed: 0 }
    }

    pub fn knn(n: usize, k: usize, rng_seed: u64) -> Self {
        Self { family: Family::KnnGeometric, n, k, p: 0.0, q: 0.0, rng_seed }
    }

    pub fn sbm(n_per_block: usize, blocks: usize, p: f64, q: f64, rng_seed: u64) -> Self {
        Self { family: Family::Sbm, n: n_per_block, k: blocks, p, q, rng_seed }
    }

    /// Short human label, e.g. `knn3000-6` or `sbm(50,60,0.25,0.005)`.
    pub fn label(&self) -> String {
        match self.family {
            Family::Chain => format!("chain{}", self.n),
            Family::KnnGeometric => format!("knn{}-{}", self.n, self.k),
            Family::Sbm => format!("sbm({},{},{},{})", self.n, self.k, self.p, self.q),
        }
    }

    /// Inverse of [`label`](Self::label). `knnN` without a suffix means
    /// `k = 6`.
    pub fn from_label(label: &str, rng_seed: u64) -> Result<Self> {
        let bad = || Error::param(format!("unrecognized graph label {label:?}"));
        let int = |s: &str| s.parse::<usize>().map_err(|_| bad());
        if let Some(rest) = label.strip_prefix("chain") {
            return Ok(Self::chain(int(rest)?));
        }
        if let Some(rest) = label.strip_prefix("knn") {
            let (n, k) = rest.split_once('-').unwrap_or((rest, "6"));
            return Ok(Self::knn(int(n)?, int(k)?, rng_seed));
        }
        if let Some(rest) = label.strip_prefix("sbm(").and_then(|r| r.strip_suffix(')')) {
            let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
            if parts.len() != 4 {
                return Err(bad());
            }
            let prob = |s: &str| s.parse::<f64>().map_err(|_| bad());
            return Ok(Self::sbm(int(parts[0])?, int(parts[1])?, prob(parts[2])?, prob(parts[3])?, rng_seed));
        }
        Err(bad())
    }

    pub fn generate(&self) -> Result<GeneratedGraph> {
        match self.family {
            Family::Chain => Ok(GeneratedGraph {
                graph: chain(self.n)?,
                coordinates: None,
                labels: None,
                spec: *self,
            }),
            Family::KnnGeometric => {
                let (graph, coords) = knn_geometric(self.n, self.k, self.rng_seed)?;
                Ok(GeneratedGraph { graph, coordinates: Some(coords), labels: None, spec: *self })
            }
            Family::Sbm => {
                let (graph, labels) = sbm(self.n, self.k, self.p, self.q, self.rng_seed)?;
                Ok(GeneratedGraph { graph, coordinates: None, labels: Some(labels), spec: *self })
            }
        }
    }

    /// Regenerates with `rng_seed, rng_seed + 1, …` until the graph is
    /// connected, up to `attempts` tries. The returned spec holds the seed used.
    pub fn generate_connected(&self, attempts: usize) -> Result<GeneratedGraph> {
        let mut spec = *self;
        for a in 0..attempts.max(1) {
            spec.rng_seed = self.rng_seed.wrapping_add(a as u64);
            let g = spec.generate()?;
            if g.graph.is_connected() {
                if a > 0 {
                    log::info!("{}: connected after {} reseed(s)", spec.label(), a);
                }
                return Ok(g);
            }
            if self.family == Family::Chain {
                break;
            }
        }
        Err(Error::Disconnected)
    }
}

/// A generated graph with whatever side data its family provides.
#[derive(Debug, Clone)]
pub struct GeneratedGraph {
    pub graph: Graph,
    pub coordinates: Option<Vec<[f64; 2]>>,
    pub labels: Option<Vec<usize>>,
    pub spec: GeneratorSpec,
}

/// Path `0 – 1 – … – (n−1)` with unit weights.
pub fn chain(n: usize) -> Result<Graph> {
    if n <= 2 {
        return Err(Error::param(format!("chain needs n > 2, got {n}")));
    }
    let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, 1.0)).collect();
    Ok(Graph::from_edges(n, &edges)?.0)
}

/// `n` uniform points in the unit square, each joined to its `k` nearest
/// neighbors (ties by lower index); edges are symmetrized by union.
///
/// Exact duplicate points get a deterministic jitter of order `1e-12` before
/// neighbor search, drawn from the same stream.
pub fn knn_geometric(n: usize, k: usize, rng_seed: u64) -> Result<(Graph, Vec<[f64; 2]>)> {
    if !(n > k && k >= 1) {
        return Err(Error::param(format!("knn needs n > k >= 1, got n={n}, k={k}")));
    }
    let mut rng = PortableRng::new(rng_seed);
    let mut pts: Vec<[f64; 2]> = (0..n).map(|_| [rng.uniform(), rng.uniform()]).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| pts[a].partial_cmp(&pts[b]).unwrap().then(a.cmp(&b)));
    for w in 1..n {
        if pts[order[w]] == pts[order[w - 1]] {
            let p = &mut pts[order[w]];
            p[0] += 1e-12 * (rng.uniform() - 0.5);
            p[1] += 1e-12 * (rng.uniform() - 0.5);
        }
    }

    let lists: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let [xi, yi] = pts[i];
            let mut cand: Vec<(f64, usize)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| ((pts[j][0] - xi).powi(2) + (pts[j][1] - yi).powi(2), j))
                .collect();
            let by = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
            cand.select_nth_unstable_by(k - 1, by);
            cand.truncate(k);
            cand.sort_by(by);
            cand.into_iter().map(|(_, j)| j).collect()
        })
        .collect();

    let mut edges: Vec<(usize, usize)> = lists
        .iter()
        .enumerate()
        .flat_map(|(i, l)| l.iter().map(move |&j| (i.min(j), i.max(j))))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    let weighted: Vec<_> = edges.into_iter().map(|(u, v)| (u, v, 1.0)).collect();
    Ok((Graph::from_edges(n, &weighted)?.0, pts))
}

/// Stochastic block model with `blocks` groups of `n_per_block` vertices.
///
/// Pairs `i < j` are visited in lexicographic order with one Bernoulli draw
/// each. Vertex `v` belongs to block `v / n_per_block`. The result may be
/// disconnected; check [`Graph::is_connected`].
pub fn sbm(
    n_per_block: usize,
    blocks: usize,
    p_within: f64,
    q_between: f64,
    rng_seed: u64,
) -> Result<(Graph, Vec<usize>)> {
    for (name, v) in [("p_within", p_within), ("q_between", q_between)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::param(format!("{name} must lie in [0, 1], got {v}")));
        }
    }
    let n = n_per_block * blocks;
    if n < 2 {
        return Err(Error::param(format!("sbm needs at least 2 vertices, got {n}")));
    }
    let labels: Vec<usize> = (0..n).map(|v| v / n_per_block).collect();
    let mut rng = PortableRng::new(rng_seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let p = if labels[i] == labels[j] { p_within } else { q_between };
            if rng.bernoulli(p) {
                edges.push((i, j, 1.0));
            }
        }
    }
    Ok((Graph::from_edges(n, &edges)?.0, labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        for spec in [GeneratorSpec::chain(30), GeneratorSpec::knn(3000, 6, 4), GeneratorSpec::sbm(50, 60, 0.25, 0.005, 4)] {
            assert_eq!(GeneratorSpec::from_label(&spec.label(), spec.rng_seed).unwrap(), spec);
        }
        assert_eq!(GeneratorSpec::from_label("knn30", 0).unwrap().k, 6);
        assert!(GeneratorSpec::from_label("grid10", 0).is_err());
        assert!(GeneratorSpec::from_label("sbm(1,2,3)", 0).is_err());
    }

    #[test]
    fn chain_shapes() {
        let g = chain(3).unwrap();
        assert_eq!(g.degrees(), &[1.0, 2.0, 1.0]);
        assert_eq!(chain(30).unwrap().edge_count(), 29);
        assert!(chain(2).is_err());
    }

    #[test]
    fn knn_min_degree_and_determinism() {
        let (a, pa) = knn_geometric(30, 6, 11).unwrap();
        let (b, pb) = knn_geometric(30, 6, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(pa, pb);
        assert!(a.degrees().iter().all(|&d| d >= 6.0));
        let (c, _) = knn_geometric(30, 6, 12).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn knn_three_points() {
        let (g, _) = knn_geometric(3, 1, 0).unwrap();
        assert!(g.edge_count() >= 1 && g.component_count() <= 2);
        assert!(g.degrees().iter().all(|&d| d >= 1.0));
    }

    #[test]
    fn knn_neighbors_are_nearest() {
        let (g, pts) = knn_geometric(60, 4, 3).unwrap();
        let d2 = |a: usize, b: usize| (pts[a][0] - pts[b][0]).powi(2) + (pts[a][1] - pts[b][1]).powi(2);
        for i in 0..60 {
            let mut all: Vec<usize> = (0..60).filter(|&j| j != i).collect();
            all.sort_by(|&a, &b| d2(i, a).total_cmp(&d2(i, b)));
            for &j in &all[..4] {
                assert!(g.weight(i, j).is_some());
            }
        }
    }

    #[test]
    fn sbm_disjoint_cliques() {
        let (g, labels) = sbm(5, 2, 1.0, 0.0, 1).unwrap();
        assert_eq!(g.edge_count(), 20);
        assert!(!g.is_connected());
        assert_eq!(labels[4], 0);
        assert_eq!(labels[5], 1);
    }

    #[test]
    fn sbm_equal_probabilities_edge_count() {
        // p = q is G(n, p); the count should sit within 4σ of the binomial mean.
        let (g, _) = sbm(50, 4, 0.1, 0.1, 9).unwrap();
        let pairs = 200.0 * 199.0 / 2.0;
        let mean = pairs * 0.1;
        let sd = (pairs * 0.1 * 0.9f64).sqrt();
        assert!((g.edge_count() as f64 - mean).abs() < 4.0 * sd);
    }

    #[test]
    fn reseeding_finds_connected_graph() {
        let g = GeneratorSpec::knn(200, 3, 4).generate_connected(50).unwrap();
        assert!(g.graph.is_connected());
        assert!(GeneratorSpec::sbm(5, 2, 1.0, 0.0, 0).generate_connected(3).is_err());
    }
}
