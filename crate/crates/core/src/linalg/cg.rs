use super::GraphSystem;
use crate::error::{Error, Result};

/// Jacobi-preconditioned conjugate gradients for `M y = b`.
///
/// Stops once the true residual `‖b − M y‖₁ ≤ tol`; returns the iterate and
/// the iteration count.
pub fn conjugate_gradient(
    system: &GraphSystem<'_>,
    b: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, usize)> {
    let n = system.n();
    let inv_diag: Vec<f64> = system.diag().iter().map(|d| d.recip()).collect();
    let mut y: Vec<f64> = b.iter().zip(&inv_diag).map(|(bi, di)| bi * di).collect();
    let mut my = vec![0.0; n];
    system.apply(&y, &mut my);
    let mut r: Vec<f64> = b.iter().zip(&my).map(|(bi, mi)| bi - mi).collect();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(ri, di)| ri * di).collect();
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let mut mp = vec![0.0; n];

    for it in 0..=max_iter {
        let res: f64 = r.iter().map(|v| v.abs()).sum();
        if res <= tol {
            // Guard against drift between the recursive and true residual.
            system.apply(&y, &mut my);
            let true_res: f64 = b.iter().zip(&my).map(|(bi, mi)| (bi - mi).abs()).sum();
            if true_res <= tol {
                return Ok((y, it));
            }
            r.iter_mut().zip(b.iter().zip(&my)).for_each(|(ri, (bi, mi))| *ri = bi - mi);
            z.iter_mut().zip(r.iter().zip(&inv_diag)).for_each(|(zi, (ri, di))| *zi = ri * di);
            p.copy_from_slice(&z);
            rz = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        }
        if rz == 0.0 {
            break;
        }
        system.apply(&p, &mut mp);
        let pmp: f64 = p.iter().zip(&mp).map(|(a, b)| a * b).sum();
        if pmp <= 0.0 {
            return Err(Error::Factorization("operator is not positive definite".into()));
        }
        let step = rz / pmp;
        for i in 0..n {
            y[i] += step * p[i];
            r[i] -= step * mp[i];
            z[i] = r[i] * inv_diag[i];
        }
        let rz_next: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    system.apply(&y, &mut my);
    let residual = b.iter().zip(&my).map(|(bi, mi)| (bi - mi).abs()).sum();
    if residual <= tol {
        return Ok((y, max_iter));
    }
    Err(Error::NonConvergence { iterations: max_iter, residual })
}
