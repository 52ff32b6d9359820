use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::surface::{BallUnion, RadialSurface};

pub const DEFAULT_HAUSDORFF_SAMPLES: usize = 100_000;

/// How boundary points of the evolving set are sampled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sampling {
    /// Seeded uniformly random directions, split evenly among components.
    Random { samples: usize, seed: u64 },
    /// The nodes of each component's own grid.
    Grid,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling::Random { samples: DEFAULT_HAUSDORFF_SAMPLES, seed: 0 }
    }
}

/// `sup_{x ∈ EΔF} dist(x, ∂F)` for `E` the union of `components` and `F` the
/// ball union, estimated from boundary samples of `E` (where the supremum is
/// attained) plus the centers of balls not covered by `E`.
pub fn hausdorff_to_union(components: &[RadialSurface], target: &BallUnion, sampling: Sampling) -> Result<f64> {
    if target.is_empty() {
        return Err(Error::InvalidInput("target ball union is empty".into()));
    }
    let mut sup = 0.0f64;
    for (i, s) in components.iter().enumerate() {
        let dirs: Vec<[f64; 3]> = match sampling {
            Sampling::Grid => s.grid()?.nodes(),
            Sampling::Random { samples, seed } => {
                let share = samples / components.len().max(1);
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
                (0..share)
                    .map(|_| {
                        let z: f64 = rng.gen_range(-1.0..=1.0);
                        let phi: f64 = rng.gen_range(0.0..2.0 * PI);
                        let r = (1.0 - z * z).max(0.0).sqrt();
                        [r * phi.cos(), r * phi.sin(), z]
                    })
                    .collect()
            }
        };
        let local = dirs
            .par_iter()
            .map(|&x| target.boundary_distance(s.point(x)))
            .reduce(|| 0.0, f64::max);
        sup = sup.max(local);
    }
    for c in &target.centers {
        if !components.iter().any(|s| s.contains(*c)) {
            sup = sup.max(target.radius);
        }
    }
    Ok(sup)
}
