use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::distribution::Distribution;
use crate::math::compensated_sum;

/// Independent generator for task `stream` of a run seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A uniform draw from the probability simplex (flat Dirichlet): `n` unit
/// exponentials, normalized.
pub fn sample_simplex_probs<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let draws: Vec<f64> = (0..n)
        .map(|_| loop {
            let x: f64 = rng.sample(Exp1);
            if x > 0.0 {
                break x;
            }
        })
        .collect();
    let total = compensated_sum(draws.iter().copied());
    draws.into_iter().map(|x| x / total).collect()
}

pub fn sample_simplex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Distribution {
    Distribution::from_probs(sample_simplex_probs(n, rng))
        .expect("normalized exponential draws form a valid distribution")
}
