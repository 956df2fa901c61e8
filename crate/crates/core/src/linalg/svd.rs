//! Thin SVDs returning left singular vectors ordered by decreasing singular value.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::rng::PortableRng;


/// Left singular vectors (`n × r`, `r = min(n, s)`) and singular values, descending.
///
/// Tall inputs are reduced by Householder QR first and the SVD is taken of the
/// square `R`; calling the bidiagonal SVD on the tall matrix directly loses
/// several digits in the leading singular values.
pub fn thin_svd(y: &DMatrix<f64>) -> Result<(DMatrix<f64>, Vec<f64>)> {
    let (n, s) = y.shape();
    if n > s {
        let qr = y.clone().qr();
        let (ur, sigma) = square_svd(qr.r())?;
        return Ok((qr.q() * ur, sigma));
    }
    square_svd(y.clone())
}

fn square_svd(m: DMatrix<f64>) -> Result<(DMatrix<f64>, Vec<f64>)> {
    let svd = m.svd(true, false);
    let u = svd
        .u
        .ok_or_else(|| Error::Factorization("SVD did not produce left vectors".into()))?;
    if svd.singular_values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Factorization("non-finite singular value".into()));
    }
    Ok(sort_desc(u, svd.singular_values.as_slice()))
}

fn sort_desc(u: DMatrix<f64>, sigma: &[f64]) -> (DMatrix<f64>, Vec<f64>) {
    let mut idx: Vec<usize> = (0..sigma.len()).collect();
    idx.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]).then(a.cmp(&b)));
    let sorted = DMatrix::from_fn(u.nrows(), idx.len(), |r, c| u[(r, idx[c])]);
    (sorted, idx.iter().map(|&i| sigma[i]).collect())
}

/// Randomized range-finder SVD with `power_iters` subspace iterations.
///
/// Returns `rank` leading left vectors and singular values.
pub fn randomized_svd(
    y: &DMatrix<f64>,
    rank: usize,
    oversample: usize,
    power_iters: usize,
    rng: &mut PortableRng,
) -> Result<(DMatrix<f64>, Vec<f64>)> {
    let (n, s) = y.shape();
    let width = (rank + oversample).min(n).min(s);
    if rank > width {
        return Err(Error::RankDeficient { rank: width, needed: rank });
    }
    let omega = DMatrix::from_fn(s, width, |_, _| rng.standard_normal());
    // Plain QR: the sketch may legitimately be rank deficient.
    let mut q = (y * omega).qr().q();
    for _ in 0..power_iters {
        let w = (y.transpose() * &q).qr().q();
        q = (y * w).qr().q();
    }
    let b = q.transpose() * y;
    let (ub, sigma) = thin_svd(&b)?;
    let u = q * ub;
    let u = u.columns(0, rank).into_owned();
    Ok((u, sigma[..rank].to_vec()))
}
