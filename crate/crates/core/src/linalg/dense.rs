//! Small dense helpers on `nalgebra` matrices.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Flips `v` so its largest-magnitude entry (lowest index on ties) is positive.
pub fn sign_normalize(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v.get(best).is_some_and(|&x| x < 0.0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

pub fn sign_normalize_columns(m: &mut DMatrix<f64>) {
    for mut col in m.column_iter_mut() {
        sign_normalize(col.as_mut_slice());
    }
}

/// `max |QᵀQ − I|`.
pub fn orthonormality_defect(q: &DMatrix<f64>) -> f64 {
    let g = q.transpose() * q;
    let k = g.nrows();
    (0..k)
        .flat_map(|i| (0..k).map(move |j| (i, j)))
        .map(|(i, j)| (g[(i, j)] - if i == j { 1.0 } else { 0.0 }).abs())
        .fold(0.0, f64::max)
}

/// Orthonormal basis of the column span via Householder QR.
pub fn orthonormal_basis(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let k = m.ncols();
    if m.nrows() < k {
        return Err(Error::RankDeficient { rank: m.nrows(), needed: k });
    }
    let qr = m.clone().qr();
    let r = qr.r();
    let scale = (0..k).map(|i| r[(i, i)].abs()).fold(0.0, f64::max);
    let rank = (0..k)
        .filter(|&i| r[(i, i)].abs() > scale * 1e-10 * (m.nrows() as f64))
        .count();
    if scale == 0.0 || rank < k {
        return Err(Error::RankDeficient { rank, needed: k });
    }
    Ok(qr.q())
}

/// Eigen-decomposition of a symmetric matrix with eigenvalues ascending.
pub fn symmetric_eigen_ascending(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    let eig = SymmetricEigen::new(m);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, idx[c])]);
    (values, vectors)
}

/// Largest principal angle (radians) between two column spans.
///
/// Uses the cosine route above π/4 and the sine route below it so that
/// nearly identical subspaces resolve angles well under `√ε`.
pub fn max_principal_angle(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<f64> {
    if a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), found: b.nrows() });
    }
    let qa = orthonormal_basis(a)?;
    let qb = orthonormal_basis(b)?;
    if qa.ncols() != qb.ncols() {
        // Unequal dimensions: some direction of the larger span is missed.
        return Ok(std::f64::consts::FRAC_PI_2);
    }
    let c = qa.transpose() * &qb;
    let cos_min = c
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
        .clamp(0.0, 1.0);
    let residual = &qb - &qa * c;
    let sin_max = residual
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
        .clamp(0.0, 1.0);
    if sin_max < std::f64::consts::FRAC_1_SQRT_2 {
        Ok(sin_max.asin())
    } else {
        Ok(cos_min.acos())
    }
}
