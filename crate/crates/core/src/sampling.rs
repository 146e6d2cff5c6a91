//! Deterministic low-discrepancy sampling of chart points and fiber vectors.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Radical inverse of `index` in base `base`.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut out = 0.0;
    while index > 0 {
        out += (index % base) as f64 * scale;
        index /= base;
        scale *= inv;
    }
    out
}

/// Folds a scenario name into the seed so scenarios sharing a seed still get
/// different point sets (FNV-1a).
pub fn mix_seed(seed: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// A Halton sequence with a seeded Cranley–Patterson rotation.
#[derive(Debug, Clone)]
pub struct HaltonSampler {
    dim: usize,
    shift: Vec<f64>,
}

impl HaltonSampler {
    pub fn new(dim: usize, seed: u64, label: &str) -> Self {
        assert!(dim <= PRIMES.len(), "at most {} dimensions", PRIMES.len());
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, label));
        let shift = (0..dim).map(|_| rng.gen::<f64>()).collect();
        Self { dim, shift }
    }

    /// The `i`-th point of the rotated sequence in `[0,1)^dim`.
    pub fn point(&self, i: usize) -> Vec<f64> {
        (0..self.dim)
            .map(|k| (radical_inverse(i as u64 + 1, PRIMES[k]) + self.shift[k]).fract())
            .collect()
    }

    pub fn take(&self, count: usize) -> Vec<Vec<f64>> {
        (0..count).map(|i| self.point(i)).collect()
    }
}

/// Maps `unit ∈ [0,1)^k` into `[lo, hi]` shrunk by `margin` of its width on each side.
pub fn to_interval(unit: f64, lo: f64, hi: f64, margin: f64) -> f64 {
    let w = hi - lo;
    lo + margin * w + unit * (1.0 - 2.0 * margin) * w
}

/// A fiber vector of Euclidean length `radius` whose direction is drawn from
/// `unit` (length = fiber dimension).
pub fn fiber_vector(unit: &[f64], radius: f64) -> Vec<f64> {
    match unit.len() {
        0 => Vec::new(),
        1 => vec![if unit[0] < 0.5 { -radius } else { radius }],
        k => {
            // Box–Muller style angles keep things deterministic without a normal sampler
            let raw: Vec<f64> = (0..k)
                .map(|i| {
                    let a = 2.0 * std::f64::consts::PI * unit[i];
                    a.cos() + 0.5 * (i as f64 + 1.0) * a.sin()
                })
                .collect();
            let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-9 {
                let mut v = vec![0.0; k];
                v[0] = radius;
                v
            } else {
                raw.iter().map(|x| x * radius / norm).collect()
            }
        }
    }
}
