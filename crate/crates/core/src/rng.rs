//! SplitMix64 generator and the seeded samplers built on it.
//!
//! The generator is fixed (rather than taken from a crate) so that corpora
//! generated from `(n, seed)` are reproducible bit for bit on any platform.

use crate::error::{Error, Result};
use crate::numkit::{gram_schmidt, RealMatrix};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Independent stream for item `index` of a sweep seeded with `seed`.
    pub fn for_case(seed: u64, index: u64) -> Self {
        let mut mix = Self::new(seed ^ index.wrapping_mul(GOLDEN_GAMMA).rotate_left(17));
        Self::new(mix.next_u64())
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform on `[0, 1)` from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

/// Range of the sampled spectrum values.
pub const LAMBDA_RANGE: f64 = 5.0;

/// `n` values uniform on `[−5, 5]`.
pub fn random_lambda(rng: &mut SplitMix64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| rng.uniform(-LAMBDA_RANGE, LAMBDA_RANGE))
        .collect()
}

fn random_orthogonal(rng: &mut SplitMix64, d: usize) -> RealMatrix {
    loop {
        let cols: Vec<Vec<f64>> = (0..d)
            .map(|_| (0..d).map(|_| rng.uniform(-1.0, 1.0)).collect())
            .collect();
        if let Ok(q) = gram_schmidt(&cols, &RealMatrix::identity(d), 1e-3) {
            return RealMatrix::from_columns(&q).expect("square");
        }
    }
}

/// `Q₁·diag(s)·Q₂` with random orthogonal `Q₁, Q₂` and singular values
/// `s_i = cond_max^{u_i}`, `u_i` uniform on `[0, 1)`; the 2-norm condition
/// number is therefore at most `cond_max`.
pub fn random_invertible(rng: &mut SplitMix64, d: usize, cond_max: f64) -> Result<RealMatrix> {
    if !(cond_max >= 1.0) || !cond_max.is_finite() {
        return Err(Error::InvalidStructure(format!(
            "condition bound {cond_max} must be a finite value ≥ 1"
        )));
    }
    if d == 0 {
        return Err(Error::InvalidStructure("dimension must be positive".into()));
    }
    let q1 = random_orthogonal(rng, d);
    let q2 = random_orthogonal(rng, d);
    let s: Vec<f64> = (0..d).map(|_| cond_max.powf(rng.next_f64())).collect();
    q1.matmul(&RealMatrix::from_diagonal(&s))?.matmul(&q2)
}
