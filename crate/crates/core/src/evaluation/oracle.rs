//! Exact expectation of `B Bᵀ` for uniformly seeded walk powers on regular
//! graphs.
//!
//! With `B = [W^{k_1} e_{i_1}, …, W^{k_m} e_{i_m}]`, seeds independent and
//! uniform, and `E[e_i e_iᵀ] = I/n`,
//!
//! ```text
//! E[B Bᵀ] = (1/n) Σ_j W^{k_j} W^{k_j}ᵀ = (1/n) Q (Σ_j Λ^{2 k_j}) Qᵀ
//! ```
//!
//! on a regular graph, where `W = QΛQᵀ` is symmetric. The oracle computes the
//! left side by brute force and the right side from a dense decomposition,
//! then compares eigenspaces of the expectation with those of `W`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, WalkKind, WalkOperator};
use crate::linalg::dense::{max_principal_angle, symmetric_eigen_ascending};

/// Largest `n^m` for which every seed tuple is enumerated.
const MAX_TUPLES: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ar1Block {
    /// Positions in descending eigenvalue order.
    pub indices: Vec<usize>,
    pub w_eigenvalues: Vec<f64>,
    pub expectation_eigenvalues: Vec<f64>,
    /// Largest principal angle between the two spans.
    pub angle: f64,
    /// Distinct eigenvalues of `W` that the expectation cannot separate.
    pub collapsed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ar1Report {
    /// `max |explicit − closed form|` over all entries.
    pub path_difference: f64,
    /// Whether the explicit path enumerated all `n^m` tuples.
    pub enumerated: bool,
    pub blocks: Vec<Ar1Block>,
    /// Largest angle over blocks that are not collapsed.
    pub max_angle: f64,
}

impl Ar1Report {
    pub fn degenerate(&self) -> bool {
        self.blocks.iter().any(|b| b.collapsed)
    }
}

pub fn expectation_oracle_ar1(graph: &Graph, powers: &[usize]) -> Result<Ar1Report> {
    let n = graph.n();
    if n > 200 {
        return Err(Error::param(format!("oracle is dense; n = {n} exceeds 200")));
    }
    if powers.is_empty() {
        return Err(Error::param("need at least one power"));
    }
    graph.require_connected()?;
    let d = graph.regular_degree(1e-12).ok_or(Error::NotRegular)?;
    let m = powers.len();

    // Columns W^k e_i for each distinct power, by repeated application.
    let op = WalkOperator::new(graph, WalkKind::Lazy)?;
    let mut cache: Vec<(usize, DMatrix<f64>)> = Vec::new();
    for &k in powers {
        if cache.iter().any(|(p, _)| *p == k) {
            continue;
        }
        let mut cols = DMatrix::identity(n, n);
        let mut buf = vec![0.0; n];
        for _ in 0..k {
            for mut col in cols.column_iter_mut() {
                op.apply_into(col.as_slice(), &mut buf);
                col.copy_from_slice(&buf);
            }
        }
        cache.push((k, cols));
    }
    let columns = |k: usize| &cache.iter().find(|(p, _)| *p == k).expect("cached").1;

    let tuples = n.checked_pow(m as u32).filter(|&t| t <= MAX_TUPLES);
    let mut explicit = DMatrix::<f64>::zeros(n, n);
    match tuples {
        Some(total) => {
            let mut idx = vec![0usize; m];
            for _ in 0..total {
                let mut b = DMatrix::zeros(n, m);
                for (j, &k) in powers.iter().enumerate() {
                    b.column_mut(j).copy_from(&columns(k).column(idx[j]));
                }
                explicit += &b * b.transpose();
                for slot in idx.iter_mut() {
                    *slot += 1;
                    if *slot < n {
                        break;
                    }
                    *slot = 0;
                }
            }
            explicit /= total as f64;
        }
        None => {
            // Same expectation, summed seed by seed per column.
            for &k in powers {
                let c = columns(k);
                for i in 0..n {
                    explicit += c.column(i) * c.column(i).transpose();
                }
            }
            explicit /= n as f64;
        }
    }

    // Closed form from W = (I + A/d)/2, symmetric on a regular graph.
    let w = (DMatrix::identity(n, n) + graph.dense_adjacency() / d) * 0.5;
    let (mu_asc, q_asc) = symmetric_eigen_ascending(w);
    let order: Vec<usize> = (0..n).rev().collect();
    let mu: Vec<f64> = order.iter().map(|&i| mu_asc[i]).collect();
    let q = DMatrix::from_fn(n, n, |r, c| q_asc[(r, order[c])]);
    let weights: Vec<f64> = mu
        .iter()
        .map(|&x| powers.iter().map(|&k| x.powi(2 * k as i32)).sum::<f64>() / n as f64)
        .collect();
    let closed = &q * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(weights)) * q.transpose();
    let path_difference = (&explicit - &closed).abs().max();

    let (e_asc, v_asc) = symmetric_eigen_ascending(closed.clone());
    let e: Vec<f64> = order.iter().map(|&i| e_asc[i]).collect();
    let v = DMatrix::from_fn(n, n, |r, c| v_asc[(r, order[c])]);

    // Eigenvalues of W in [0, 1] map monotonically to those of the
    // expectation, so positions correspond after sorting both descending.
    let e_tol = 1e-9 * e[0].abs().max(f64::MIN_POSITIVE);
    let mut blocks = Vec::new();
    let mut start = 0;
    for i in 0..n {
        let split = i + 1 == n || ((mu[i] - mu[i + 1]).abs() >= 1e-8 && (e[i] - e[i + 1]).abs() >= e_tol);
        if !split {
            continue;
        }
        let indices: Vec<usize> = (start..=i).collect();
        let qb = q.columns(start, i + 1 - start).into_owned();
        let vb = v.columns(start, i + 1 - start).into_owned();
        let w_eigenvalues: Vec<f64> = indices.iter().map(|&j| mu[j]).collect();
        let collapsed = w_eigenvalues.windows(2).any(|p| (p[0] - p[1]).abs() >= 1e-8);
        blocks.push(Ar1Block {
            angle: max_principal_angle(&qb, &vb)?,
            expectation_eigenvalues: indices.iter().map(|&j| e[j]).collect(),
            w_eigenvalues,
            indices,
            collapsed,
        });
        start = i + 1;
    }
    let max_angle = blocks
        .iter()
        .filter(|b| !b.collapsed)
        .map(|b| b.angle)
        .fold(0.0, f64::max);
    Ok(Ar1Report { path_difference, enumerated: tuples.is_some(), blocks, max_angle })
}
