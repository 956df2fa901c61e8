use super::{reverse_cuthill_mckee, GraphSystem};
use crate::error::{Error, Result};

/// Cholesky factor `P M Pᵀ = L Lᵀ` stored by rows over the envelope
/// (row `i` keeps columns `first[i]..=i`), with `P` from reverse Cuthill–McKee.
///
/// For a Stieltjes `M` the off-diagonal entries of `L` are nonpositive, so
/// both triangular sweeps with a nonnegative right-hand side only ever add
/// nonnegative terms. Solutions therefore keep componentwise relative
/// accuracy, including entries hundreds of orders of magnitude below the
/// largest one.
#[derive(Debug, Clone)]
pub struct EnvelopeCholesky {
    perm: Vec<usize>,
    first: Vec<usize>,
    start: Vec<usize>,
    values: Vec<f64>,
}

impl EnvelopeCholesky {
    pub fn factor(system: &GraphSystem<'_>, max_entries: usize) -> Result<Self> {
        let graph = system.graph();
        let n = graph.n();
        let perm = reverse_cuthill_mckee(graph);
        let mut inv = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let first: Vec<usize> = (0..n)
            .map(|i| {
                graph
                    .neighbor_ids(perm[i])
                    .iter()
                    .map(|&v| inv[v])
                    .fold(i, usize::min)
            })
            .collect();
        let mut start = Vec::with_capacity(n + 1);
        let mut total = 0usize;
        for i in 0..n {
            start.push(total);
            total += i - first[i] + 1;
        }
        start.push(total);
        if total > max_entries {
            return Err(Error::Factorization(format!(
                "envelope of {total} entries exceeds the limit of {max_entries}"
            )));
        }

        let mut values = vec![0.0; total];
        for i in 0..n {
            let old = perm[i];
            values[start[i] + i - first[i]] = system.diag()[old];
            for (v, w) in graph.neighbors(old) {
                let j = inv[v];
                if j < i {
                    values[start[i] + j - first[i]] = -system.coupling() * w;
                }
            }
        }

        for i in 0..n {
            let fi = first[i];
            let (done, rest) = values.split_at_mut(start[i]);
            let row = &mut rest[..i - fi + 1];
            for j in fi..i {
                let fj = first[j];
                let rj = &done[start[j]..start[j + 1]];
                let k0 = fi.max(fj);
                let s = dot(&row[k0 - fi..j - fi], &rj[k0 - fj..j - fj]);
                row[j - fi] = (row[j - fi] - s) / rj[j - fj];
            }
            let s = dot(&row[..i - fi], &row[..i - fi]);
            let pivot = row[i - fi] - s;
            if !(pivot > 0.0 && pivot.is_finite()) {
                return Err(Error::Factorization(format!(
                    "non-positive pivot {pivot:e} at row {i}"
                )));
            }
            row[i - fi] = pivot.sqrt();
        }

        Ok(Self { perm, first, start, values })
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    /// Stored entries of the factor.
    pub fn envelope_len(&self) -> usize {
        self.values.len()
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.values[self.start[i]..self.start[i + 1]]
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n();
        let mut z: Vec<f64> = self.perm.iter().map(|&old| b[old]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let row = self.row(i);
            let s = dot(&row[..i - fi], &z[fi..i]);
            z[i] = (z[i] - s) / row[i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let row = self.row(i);
            z[i] /= row[i - fi];
            let zi = z[i];
            for (zk, l) in z[fi..i].iter_mut().zip(&row[..i - fi]) {
                *zk -= l * zi;
            }
        }
        let mut out = vec![0.0; n];
        for (i, &old) in self.perm.iter().enumerate() {
            out[old] = z[i];
        }
        out
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4;
    for c in 0..chunks {
        let k = 4 * c;
        acc[0] += a[k] * b[k];
        acc[1] += a[k + 1] * b[k + 1];
        acc[2] += a[k + 2] * b[k + 2];
        acc[3] += a[k + 3] * b[k + 3];
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for k in 4 * chunks..a.len() {
        s += a[k] * b[k];
    }
    s
}
