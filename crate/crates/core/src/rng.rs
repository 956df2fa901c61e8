//! Portable seeded randomness.
//!
//! Every random draw in the crate goes through [`PortableRng`]: a ChaCha8
//! keystream seeded with `rand_core`'s `seed_from_u64` expansion. Floats,
//! bounded integers and samples are derived from raw `next_u64` words with
//! the fixed recipes below, so another implementation of ChaCha8 can replay
//! generator output and seed choices exactly.
//!
//! | draw | recipe |
//! |------|--------|
//! | `uniform()` | `(w >> 11) * 2^-53` |
//! | `below(b)` | rejection: redraw while `w >= 2^64 - (2^64 mod b)`, return `w mod b` |
//! | `bernoulli(p)` | `uniform() < p` |
//! | `sample_without_replacement(n, s)` | first `s` steps of a forward Fisher–Yates on `0..n` |

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

#[derive(Clone, Debug)]
pub struct PortableRng {
    inner: ChaCha8Rng,
}

impl PortableRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream `stream` of the generator seeded with `master`.
    pub fn with_stream(master: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(master);
        inner.set_stream(stream);
        Self { inner }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..bound`. Panics if `bound == 0`.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "below(0)");
        // 2^64 mod bound; words at or above 2^64 - rem would bias the result.
        let rem = bound.wrapping_neg() % bound;
        let limit = rem.wrapping_neg();
        loop {
            let w = self.next_u64();
            if rem == 0 || w < limit {
                return w % bound;
            }
        }
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// Standard normal draw (Box–Muller, cosine branch only).
    pub fn standard_normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// `s` distinct values from `0..n`, in draw order.
    pub fn sample_without_replacement(&mut self, n: usize, s: usize) -> Vec<usize> {
        assert!(s <= n, "sample of {s} from {n}");
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..s {
            let j = i + self.below((n - i) as u64) as usize;
            pool.swap(i, j);
        }
        pool.truncate(s);
        pool
    }

    pub fn sample_with_replacement(&mut self, n: usize, s: usize) -> Vec<usize> {
        (0..s).map(|_| self.below(n as u64) as usize).collect()
    }
}
