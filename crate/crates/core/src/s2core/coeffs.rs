use crate::error::{Error, Result};

/// Real spherical-harmonic coefficients `a_lm`, `0 <= l <= L`, `-l <= m <= l`.
///
/// The basis is orthonormal on the unit sphere: `Y_l0 = P_l0(cos θ)`,
/// `Y_lm = √2 P_lm cos(mφ)` and `Y_l,-m = √2 P_lm sin(mφ)` for `m > 0`, with
/// no Condon–Shortley phase.
#[derive(Debug, Clone, PartialEq)]
pub struct ShCoeffs {
    band_limit: usize,
    data: Vec<f64>,
}

impl ShCoeffs {
    pub fn zeros(band_limit: usize) -> Self {
        Self { band_limit, data: vec![0.0; (band_limit + 1) * (band_limit + 1)] }
    }

    pub fn from_vec(band_limit: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != (band_limit + 1) * (band_limit + 1) {
            return Err(Error::InvalidInput(format!(
                "expected {} coefficients for band limit {band_limit}, got {}",
                (band_limit + 1) * (band_limit + 1),
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("coefficients"));
        }
        Ok(Self { band_limit, data })
    }

    /// Coefficients with a single nonzero entry `a_lm = amplitude`.
    pub fn single_mode(band_limit: usize, l: usize, m: i64, amplitude: f64) -> Result<Self> {
        if l > band_limit || m.unsigned_abs() as usize > l {
            return Err(Error::InvalidInput(format!(
                "mode ({l},{m}) not representable at band limit {band_limit}"
            )));
        }
        let mut c = Self::zeros(band_limit);
        c.set(l, m, amplitude);
        Ok(c)
    }

    /// Storage position of `(l, m)`: `l² + l + m`.
    #[inline]
    pub fn index(l: usize, m: i64) -> usize {
        idx(l, m)
    }

    pub fn band_limit(&self) -> usize {
        self.band_limit
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn get(&self, l: usize, m: i64) -> f64 {
        self.data[idx(l, m)]
    }

    #[inline]
    pub fn set(&mut self, l: usize, m: i64, value: f64) {
        self.data[idx(l, m)] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    /// Iterate `(l, m, a_lm)` in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, i64, f64)> + '_ {
        (0..=self.band_limit).flat_map(move |l| {
            (-(l as i64)..=l as i64).map(move |m| (l, m, self.data[idx(l, m)]))
        })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { band_limit: self.band_limit, data: self.data.iter().map(|v| v * factor).collect() }
    }

    /// Copy into a different band limit, truncating or zero-padding.
    pub fn resized(&self, band_limit: usize) -> Self {
        let mut out = Self::zeros(band_limit);
        let l_max = band_limit.min(self.band_limit);
        let n = (l_max + 1) * (l_max + 1);
        out.data[..n].copy_from_slice(&self.data[..n]);
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.data.len().max(other.data.len());
        (0..n)
            .map(|i| {
                let a = self.data.get(i).copied().unwrap_or(0.0);
                let b = other.data.get(i).copied().unwrap_or(0.0);
                (a - b).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Sum of squares, which equals the L² norm squared of the synthesized field.
    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    /// Apply the Laplace–Beltrami operator: `a_lm -> -l(l+1) a_lm`.
    pub fn laplace_beltrami(&self) -> Self {
        let mut out = self.clone();
        for l in 0..=self.band_limit {
            let f = -((l * (l + 1)) as f64);
            for m in -(l as i64)..=l as i64 {
                out.data[idx(l, m)] *= f;
            }
        }
        out
    }
}

#[inline]
fn idx(l: usize, m: i64) -> usize {
    ((l * l + l) as i64 + m) as usize
}
