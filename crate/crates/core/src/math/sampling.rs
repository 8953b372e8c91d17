use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::Vector;

/// Seedable generator used by every randomized suite.
pub type SampleRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard Gaussian vector of dimension `dim` scaled by `scale`.
pub fn gaussian_vector(rng: &mut SampleRng, dim: usize, scale: f64) -> Vector {
    let coords: Vec<f64> = (0..dim)
        .map(|_| {
            let g: f64 = StandardNormal.sample(rng);
            scale * g
        })
        .collect();
    Vector::from_vec_unchecked(coords)
}
