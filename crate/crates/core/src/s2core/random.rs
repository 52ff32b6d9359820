use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ShCoeffs;
use crate::error::{Error, Result};

/// Degree window and size of a random perturbation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomModes {
    pub l_min: usize,
    pub l_max: usize,
    pub amplitude: f64,
    /// Permit degrees 0 and 1 (volume and translation modes).
    pub allow_low_modes: bool,
}

impl RandomModes {
    pub fn new(l_min: usize, l_max: usize, amplitude: f64) -> Self {
        Self { l_min, l_max, amplitude, allow_low_modes: false }
    }
}

/// Coefficients i.i.d. uniform on `[-1, 1]` for `l_min <= l <= l_max`, scaled
/// so that `Σ |a_lm| sup|Y_lm|` equals the amplitude; this bounds the sup norm
/// of the synthesized field by the amplitude.
pub fn random_band_limited(seed: u64, modes: RandomModes, band_limit: usize) -> Result<ShCoeffs> {
    let RandomModes { l_min, l_max, amplitude, allow_low_modes } = modes;
    if l_min > l_max || l_max > band_limit {
        return Err(Error::InvalidInput(format!(
            "degree range [{l_min}, {l_max}] invalid for band limit {band_limit}"
        )));
    }
    if l_min < 2 && !allow_low_modes {
        return Err(Error::LowModes { l_min, l_max });
    }
    if !(amplitude >= 0.0) || !amplitude.is_finite() {
        return Err(Error::InvalidInput(format!("amplitude must be non-negative, got {amplitude}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = ShCoeffs::zeros(band_limit);
    let mut bound = 0.0;
    for l in l_min..=l_max {
        // sup |Y_lm| <= sqrt((2l+1)/4π) for every m
        let sup = ((2 * l + 1) as f64 / (4.0 * PI)).sqrt();
        for m in -(l as i64)..=l as i64 {
            let v: f64 = rng.gen_range(-1.0..=1.0);
            c.set(l, m, v);
            bound += v.abs() * sup;
        }
    }
    if bound > 0.0 {
        c = c.scaled(amplitude / bound);
    }
    Ok(c)
}
