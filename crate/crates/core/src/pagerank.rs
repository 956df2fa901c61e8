//! Seeded PageRank `(I − αP) x = (1 − α) v`, prepared once per `(graph, α)`.
//!
//! With `P = A D⁻¹` (standard) or `P = (I + A D⁻¹)/2` (lazy), the substitution
//! `x = D y` turns the nonsymmetric system into `M y = (1 − α) v` with
//!
//! | walk     | `M`                          |
//! |----------|------------------------------|
//! | standard | `D − α A`                    |
//! | lazy     | `(1 − α/2) D − (α/2) A`      |
//!
//! Both are symmetric positive definite for `α < 1`, so one Cholesky factor
//! serves every seed. The residual of `M y` equals the PageRank residual of
//! `x` exactly, since `(I − αP) D = M`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, WalkKind, WalkOperator};
use crate::linalg::{GraphSystem, SolverKind, SystemSolver};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PageRankConfig {
    pub alpha: f64,
    pub walk: WalkKind,
    pub solver: SolverKind,
    /// Absolute 1-norm residual target of the iterative solver.
    pub tol: f64,
}

impl Default for PageRankConfig {
    fn default() -> Self {
        Self { alpha: 0.99, walk: WalkKind::Lazy, solver: SolverKind::Direct, tol: 1e-10 }
    }
}

impl PageRankConfig {
    pub fn with_alpha(alpha: f64) -> Self {
        Self { alpha, ..Self::default() }
    }

    /// `α = 0` is accepted as the degenerate identity system.
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.alpha) {
            return Err(Error::param(format!("alpha must lie in [0, 1), got {}", self.alpha)));
        }
        if self.walk == WalkKind::NormalizedAdjacency {
            return Err(Error::param("PageRank walk must be lazy or standard"));
        }
        if !(self.tol > 0.0) {
            return Err(Error::param(format!("tolerance must be positive, got {}", self.tol)));
        }
        Ok(())
    }

    /// `(a, c)` with `M = a·D − c·A`.
    fn system_coefficients(&self) -> (f64, f64) {
        match self.walk {
            WalkKind::Lazy => (1.0 - self.alpha / 2.0, self.alpha / 2.0),
            _ => (1.0, self.alpha),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PageRankVector {
    pub values: Vec<f64>,
    pub seed: Option<usize>,
    pub alpha: f64,
}

/// Anything that maps a seed vertex to a stochastic diffusion vector.
///
/// Implementations are shared across worker threads.
pub trait SeedDiffusion: Sync {
    fn n(&self) -> usize;
    fn diffuse(&self, seed: usize) -> Result<Vec<f64>>;
}

/// Read-only after [`prepare`]; concurrent solves are safe.
#[derive(Debug)]
pub struct PageRankSolver<'g> {
    graph: &'g Graph,
    config: PageRankConfig,
    // `None` at α = 0, where the system is the identity.
    inner: Option<SystemSolver<'g>>,
}

pub fn prepare<'g>(graph: &'g Graph, config: PageRankConfig) -> Result<PageRankSolver<'g>> {
    config.validate()?;
    graph.require_no_isolated()?;
    graph.require_connected()?;
    let inner = if config.alpha == 0.0 {
        None
    } else {
        let (a, c) = config.system_coefficients();
        let system = GraphSystem::scaled_degrees(graph, a, c);
        Some(SystemSolver::prepare(system, config.solver, config.tol)?)
    };
    Ok(PageRankSolver { graph, config, inner })
}

fn check_stochastic(v: &[f64]) -> Result<()> {
    if let Some(i) = v.iter().position(|x| !(x.is_finite() && *x >= 0.0)) {
        return Err(Error::NotStochastic(format!("entry {i} is {}", v[i])));
    }
    let sum: f64 = v.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::NotStochastic(format!("entries sum to {sum}")));
    }
    Ok(())
}

impl<'g> PageRankSolver<'g> {
    pub fn config(&self) -> &PageRankConfig {
        &self.config
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn solve(&self, v: &[f64]) -> Result<PageRankVector> {
        let n = self.graph.n();
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
        check_stochastic(v)?;
        let values = self.solve_raw(v)?;
        Ok(PageRankVector { values, seed: None, alpha: self.config.alpha })
    }

    pub fn solve_seed(&self, seed: usize) -> Result<PageRankVector> {
        let values = self.diffuse(seed)?;
        Ok(PageRankVector { values, seed: Some(seed), alpha: self.config.alpha })
    }

    /// `(1 − α)(I − αP)⁻¹ v` without input checks; linear in `v`.
    pub fn solve_raw(&self, v: &[f64]) -> Result<Vec<f64>> {
        let Some(inner) = &self.inner else {
            return Ok(v.to_vec());
        };
        let scale = 1.0 - self.config.alpha;
        let rhs: Vec<f64> = v.iter().map(|x| scale * x).collect();
        let y = inner.solve(&rhs)?;
        Ok(y.iter().zip(self.graph.degrees()).map(|(y, d)| y * d).collect())
    }

    /// `‖(I − αP) x − (1 − α) v‖₁`, evaluated with the walk operator.
    pub fn residual(&self, x: &[f64], v: &[f64]) -> Result<f64> {
        residual(self.graph, &self.config, x, v)
    }
}

impl SeedDiffusion for PageRankSolver<'_> {
    fn n(&self) -> usize {
        self.graph.n()
    }

    fn diffuse(&self, seed: usize) -> Result<Vec<f64>> {
        let n = self.graph.n();
        if seed >= n {
            return Err(Error::VertexOutOfRange { vertex: seed, n });
        }
        let mut v = vec![0.0; n];
        v[seed] = 1.0;
        self.solve_raw(&v)
    }
}

/// `‖(I − αP) x − (1 − α) v‖₁` for any candidate `x`.
pub fn residual(graph: &Graph, config: &PageRankConfig, x: &[f64], v: &[f64]) -> Result<f64> {
    let op = WalkOperator::new(graph, config.walk)?;
    let px = op.apply(x)?;
    if v.len() != x.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), found: v.len() });
    }
    let a = config.alpha;
    Ok(x.iter()
        .zip(&px)
        .zip(v)
        .map(|((x, px), v)| (x - a * px - (1.0 - a) * v).abs())
        .sum())
}

/// Roots `(+)` and `(−)` of `α t² − 2t + α = 0`, and `c = √((1−α)/(1+α))`.
fn chain_constants(alpha: f64) -> Result<(f64, f64, f64)> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::param(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let s = (1.0 - alpha * alpha).sqrt();
    Ok(((1.0 + s) / alpha, (1.0 - s) / alpha, ((1.0 - alpha) / (1.0 + alpha)).sqrt()))
}

fn check_chain(n: usize, k: usize) -> Result<()> {
    if n <= 2 {
        return Err(Error::param(format!("chain needs n > 2, got {n}")));
    }
    if k == 0 || k > n {
        return Err(Error::param(format!("seed {k} outside 1..={n} (1-indexed)")));
    }
    Ok(())
}

/// Exact PageRank on the chain `1 – 2 – … – n` for the standard walk, seed `k`
/// given 1-indexed. Entry `i` of the result (0-indexed) is vertex `i + 1`.
///
/// The shape functions are the classical ones,
/// `f(i) = ((+)^{i−1} + (−)^{i−1}) / ((+)^{k−1} + (−)^{k−1})` to the left of the
/// seed and `g(i) = ((+)^{n−i} + (−)^{n−i}) / ((+)^{n−k} + (−)^{n−k})` to the
/// right. The scale is fixed by the seed row of `(D − αA) y = (1 − α) e_k`:
/// `y_k = (1 − α) / (d_k − α (f(k−1) + g(k+1)))` and `x_i = d_i y_k h(i)`.
/// The often-quoted `c = √((1−α)/(1+α))` is only the long-chain limit of that
/// scale and is used by [`chain_log_approx`].
///
/// Powers are evaluated as `(+)^{i−k} (1 + r^{i−1}) / (1 + r^{k−1})` with
/// `r = (−)/(+)`, which neither overflows nor cancels.
pub fn chain_closed_form(n: usize, k: usize, alpha: f64) -> Result<PageRankVector> {
    check_chain(n, k)?;
    let (plus, minus, _) = chain_constants(alpha)?;
    let ln_plus = plus.ln();
    let r = minus / plus;
    let ratio = |p: usize, q: usize| {
        // ((+)^p + (−)^p) / ((+)^q + (−)^q)
        ((p as f64 - q as f64) * ln_plus).exp() * (1.0 + r.powi(p as i32)) / (1.0 + r.powi(q as i32))
    };
    let f = |i: usize| ratio(i - 1, k - 1);
    let g = |i: usize| ratio(n - i, n - k);
    let deg = |i: usize| if i == 1 || i == n { 1.0 } else { 2.0 };

    let mut pull = 0.0;
    if k > 1 {
        pull += f(k - 1);
    }
    if k < n {
        pull += g(k + 1);
    }
    let yk = (1.0 - alpha) / (deg(k) - alpha * pull);
    let values = (1..=n)
        .map(|i| deg(i) * yk * if i <= k { f(i) } else { g(i) })
        .collect();
    Ok(PageRankVector { values, seed: Some(k - 1), alpha })
}

/// `−|k − i| ln((+)) + ln c`, the affine-in-distance approximation of
/// `ln x_i` (1-indexed `k`, `i`).
pub fn chain_log_approx(n: usize, k: usize, alpha: f64, i: usize) -> Result<f64> {
    check_chain(n, k)?;
    if i == 0 || i > n {
        return Err(Error::param(format!("index {i} outside 1..={n}")));
    }
    let (plus, _, c) = chain_constants(alpha)?;
    Ok(-(k.abs_diff(i) as f64) * plus.ln() + c.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};

    fn chain(n: usize) -> Graph {
        Graph::from_edges(n, &(0..n - 1).map(|i| (i, i + 1, 1.0)).collect::<Vec<_>>()).unwrap().0
    }

    // Dense oracle: LU on I − αP built entry by entry.
    fn dense_pagerank(g: &Graph, alpha: f64, walk: WalkKind, v: &[f64]) -> Vec<f64> {
        let n = g.n();
        let mut m = DMatrix::<f64>::identity(n, n);
        for u in 0..n {
            for (w, wt) in g.neighbors(u) {
                let p = wt / g.degree(u);
                let p = if walk == WalkKind::Lazy { p / 2.0 } else { p };
                m[(w, u)] -= alpha * p;
            }
            if walk == WalkKind::Lazy {
                m[(u, u)] -= alpha / 2.0;
            }
        }
        let rhs = DVector::from_iterator(n, v.iter().map(|x| (1.0 - alpha) * x));
        m.lu().solve(&rhs).unwrap().iter().copied().collect()
    }

    #[test]
    fn matches_dense_oracle_both_walks_and_solvers() {
        let e = vec![(0, 1, 1.0), (1, 2, 2.0), (2, 3, 1.0), (3, 0, 0.5), (2, 4, 1.0), (4, 5, 3.0)];
        let (g, _) = Graph::from_edges(6, &e).unwrap();
        for walk in [WalkKind::Lazy, WalkKind::Standard] {
            for solver in [SolverKind::Direct, SolverKind::Iterative] {
                let cfg = PageRankConfig { alpha: 0.85, walk, solver, tol: 1e-13 };
                let s = prepare(&g, cfg).unwrap();
                let v = [0.1, 0.0, 0.2, 0.3, 0.0, 0.4];
                let x = s.solve(&v).unwrap().values;
                let want = dense_pagerank(&g, 0.85, walk, &v);
                for (a, b) in x.iter().zip(&want) {
                    assert!((a - b).abs() < 1e-12, "{walk:?} {solver:?}: {a} vs {b}");
                }
                assert!(s.residual(&x, &v).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn chain30_matches_dense() {
        let g = chain(30);
        let s = prepare(&g, PageRankConfig::with_alpha(0.85)).unwrap();
        let x = s.solve_seed(14).unwrap().values;
        let mut v = vec![0.0; 30];
        v[14] = 1.0;
        let want = dense_pagerank(&g, 0.85, WalkKind::Lazy, &v);
        assert!(x.iter().zip(&want).all(|(a, b)| (a - b).abs() < 1e-10));
    }

    #[test]
    fn alpha_zero_is_identity() {
        let g = chain(5);
        let s = prepare(&g, PageRankConfig::with_alpha(0.0)).unwrap();
        let v = [0.2, 0.2, 0.1, 0.5, 0.0];
        assert_eq!(s.solve(&v).unwrap().values, v.to_vec());
    }

    #[test]
    fn tiny_alpha_stays_on_seed() {
        let g = chain(7);
        let s = prepare(&g, PageRankConfig::with_alpha(1e-12)).unwrap();
        let x = s.solve_seed(3).unwrap().values;
        let dist: f64 = x.iter().enumerate().map(|(i, v)| (v - if i == 3 { 1.0 } else { 0.0 }).abs()).sum();
        assert!(dist <= 1e-9);
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = chain(4);
        let s = prepare(&g, PageRankConfig::default()).unwrap();
        assert!(matches!(s.solve(&[0.5, 0.5, 0.5, 0.0]), Err(Error::NotStochastic(_))));
        assert!(matches!(s.solve(&[1.5, -0.5, 0.0, 0.0]), Err(Error::NotStochastic(_))));
        assert!(prepare(&g, PageRankConfig::with_alpha(1.0)).is_err());
        let (split, _) = Graph::from_edges(4, &[(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert!(matches!(prepare(&split, PageRankConfig::default()), Err(Error::Disconnected)));
    }

    #[test]
    fn closed_form_is_symmetric_and_stochastic() {
        let x = chain_closed_form(31, 16, 0.9).unwrap().values;
        for j in 1..15 {
            assert!((x[15 - j] - x[15 + j]).abs() < 1e-15);
        }
        assert!((x.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_standard_solve_everywhere() {
        for &n in &[10usize, 30, 100] {
            for &k in &[1, 2, n / 2, n - 1, n] {
                for &a in &[0.5, 0.85, 0.99] {
                    let g = chain(n);
                    let cfg = PageRankConfig { alpha: a, walk: WalkKind::Standard, ..Default::default() };
                    let x = prepare(&g, cfg).unwrap().solve_seed(k - 1).unwrap().values;
                    let c = chain_closed_form(n, k, a).unwrap().values;
                    let err = x.iter().zip(&c).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
                    assert!(err < 1e-12, "n={n} k={k} a={a}: {err:e}");
                }
            }
        }
    }

    #[test]
    fn log_approx_is_affine() {
        let (plus, _, _) = chain_constants(0.85).unwrap();
        let d = chain_log_approx(30, 15, 0.85, 21).unwrap() - chain_log_approx(30, 15, 0.85, 20).unwrap();
        assert!((d + plus.ln()).abs() < 1e-14);
        // Next to the seed the approximation is within 5% of the exact log.
        let x = chain_closed_form(30, 15, 0.85).unwrap().values;
        for i in [14, 16] {
            let exact = x[i - 1].ln();
            let approx = chain_log_approx(30, 15, 0.85, i).unwrap();
            assert!(((approx - exact) / exact).abs() < 0.05, "{approx} vs {exact}");
        }
    }
}
