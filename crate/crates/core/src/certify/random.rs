use rand::Rng;

use crate::math::{gaussian_vector, SampleRng, Vector};
use crate::prox::{ProxInstance, SmoothInstance};

fn positive_vector(rng: &mut SampleRng, dim: usize, lo: f64, hi: f64) -> Vector {
    Vector::new((0..dim).map(|_| rng.random_range(lo..hi)).collect()).expect("finite")
}

/// Random instance of the kind selected by `kind % 5`, with parameters drawn
/// from moderate ranges.
pub fn random_prox_instance(rng: &mut SampleRng, dim: usize, kind: usize) -> ProxInstance {
    match kind % 5 {
        0 => ProxInstance::scaled_norm(rng.random_range(0.1..3.0), dim),
        1 => ProxInstance::huber(rng.random_range(0.1..3.0), rng.random_range(0.2..5.0), dim),
        2 => ProxInstance::quadratic(positive_vector(rng, dim, 0.1, 4.0), gaussian_vector(rng, dim, 1.0)),
        3 => ProxInstance::l1(rng.random_range(0.05..2.0), dim),
        _ => {
            let lo = gaussian_vector(rng, dim, 1.0);
            let width = positive_vector(rng, dim, 0.1, 2.0);
            let hi = &lo + &width;
            ProxInstance::box_indicator(lo, hi)
        }
    }
    .expect("parameters drawn inside the valid ranges")
}

/// Random Huber (`kind` even) or diagonal quadratic (`kind` odd).
pub fn random_smooth_instance(rng: &mut SampleRng, dim: usize, kind: usize) -> SmoothInstance {
    if kind.is_multiple_of(2) {
        SmoothInstance::huber(rng.random_range(0.1..3.0), rng.random_range(0.2..5.0), dim)
    } else {
        SmoothInstance::quadratic(positive_vector(rng, dim, 0.1, 4.0), gaussian_vector(rng, dim, 1.0))
    }
    .expect("parameters drawn inside the valid ranges")
}
