//! Periodic grid on the flat torus, its FFT, and the spectral Poisson solver.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::{Error, Result};

/// Cubic grid of `n³` voxels on `[0, R)³` with periodic identification.
#[derive(Clone)]
pub struct TorusGrid {
    side: f64,
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for TorusGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TorusGrid").field("side", &self.side).field("n", &self.n).finish()
    }
}

impl PartialEq for TorusGrid {
    fn eq(&self, other: &Self) -> bool {
        self.side == other.side && self.n == other.n
    }
}

impl TorusGrid {
    pub fn new(side: f64, n: usize) -> Result<Self> {
        if !n.is_power_of_two() || !(32..=256).contains(&n) {
            return Err(Error::InvalidInput(format!("resolution {n} must be a power of two in [32, 256]")));
        }
        if !(side >= 1.0) || !side.is_finite() {
            return Err(Error::InvalidInput(format!("side length {side} must be at least 1")));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            side,
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        })
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.side / self.n as f64
    }

    pub fn voxel_volume(&self) -> f64 {
        self.spacing().powi(3)
    }

    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    /// Center of voxel `(i, j, k)`.
    #[inline]
    pub fn voxel_center(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        let h = self.spacing();
        [(i as f64 + 0.5) * h, (j as f64 + 0.5) * h, (k as f64 + 0.5) * h]
    }

    /// Angular wavenumber of FFT bin `idx`.
    #[inline]
    pub fn wavenumber(&self, idx: usize) -> f64 {
        let f = if idx <= self.n / 2 { idx as f64 } else { idx as f64 - self.n as f64 };
        2.0 * PI * f / self.side
    }

    fn wavenumbers_sq(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.wavenumber(i).powi(2)).collect()
    }

    /// Integral of a grid field (midpoint rule).
    pub fn integrate(&self, values: &[f64]) -> f64 {
        values.iter().sum::<f64>() * self.voxel_volume()
    }

    pub fn mean(&self, values: &[f64]) -> f64 {
        values.iter().sum::<f64>() / self.len() as f64
    }

    /// Unnormalized forward transform of a real field.
    pub fn fft(&self, values: &[f64]) -> Vec<Complex64> {
        let mut data: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.transform(&mut data, &self.forward);
        data
    }

    /// Inverse transform normalized by `1/n³`, real part.
    pub fn ifft_real(&self, mut data: Vec<Complex64>) -> Vec<f64> {
        self.transform(&mut data, &self.inverse);
        let scale = 1.0 / self.len() as f64;
        data.into_iter().map(|z| z.re * scale).collect()
    }

    fn transform(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        let scratch_len = plan.get_inplace_scratch_len();
        // along k: contiguous rows
        data.par_chunks_mut(n * n).for_each(|plane| {
            let mut scratch = vec![Complex64::new(0.0, 0.0); scratch_len];
            plan.process_with_scratch(plane, &mut scratch);
        });
        // along j: transpose each i-plane
        data.par_chunks_mut(n * n).for_each(|plane| {
            let mut scratch = vec![Complex64::new(0.0, 0.0); scratch_len];
            let mut buf = vec![Complex64::new(0.0, 0.0); n * n];
            for j in 0..n {
                for k in 0..n {
                    buf[k * n + j] = plane[j * n + k];
                }
            }
            plan.process_with_scratch(&mut buf, &mut scratch);
            for j in 0..n {
                for k in 0..n {
                    plane[j * n + k] = buf[k * n + j];
                }
            }
        });
        // along i: gather one j-slab at a time
        let mut scratch = vec![Complex64::new(0.0, 0.0); scratch_len];
        let mut buf = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            for i in 0..n {
                let row = (i * n + j) * n;
                for k in 0..n {
                    buf[k * n + i] = data[row + k];
                }
            }
            plan.process_with_scratch(&mut buf, &mut scratch);
            for i in 0..n {
                let row = (i * n + j) * n;
                for k in 0..n {
                    data[row + k] = buf[k * n + i];
                }
            }
        }
    }

    /// Calls `f(index, |k|²)` for every FFT bin.
    fn for_each_mode(&self, mut f: impl FnMut(usize, f64)) {
        let k2 = self.wavenumbers_sq();
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let kij = k2[i] + k2[j];
                let row = (i * n + j) * n;
                for (k, kk) in k2.iter().enumerate() {
                    f(row + k, kij + kk);
                }
            }
        }
    }

    fn check_len(&self, values: &[f64]) -> Result<()> {
        if values.len() != self.len() {
            return Err(Error::InvalidInput(format!(
                "field has {} values, grid has {} voxels",
                values.len(),
                self.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("grid field"));
        }
        Ok(())
    }

    fn check_zero_mean(&self, values: &[f64], rel_tol: f64) -> Result<()> {
        let mean = self.mean(values);
        let sup = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if mean.abs() > rel_tol * sup {
            return Err(Error::NonZeroMean { mean });
        }
        Ok(())
    }
}

/// Zero-mean periodic solution of `−ΔU = rhs`.
#[derive(Debug, Clone)]
pub struct Potential {
    pub grid: TorusGrid,
    pub values: Vec<f64>,
    /// `∫|DU|²`, from the spectrum.
    pub energy: f64,
    /// `‖ΔU + rhs‖₂ / ‖rhs‖₂` measured on the returned values.
    pub residual: f64,
}

impl Potential {
    pub fn mean(&self) -> f64 {
        self.grid.mean(&self.values)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Trilinear interpolation at a point of `ℝ³`, wrapped periodically.
    pub fn sample(&self, p: [f64; 3]) -> f64 {
        let n = self.grid.n;
        let h = self.grid.spacing();
        let mut idx = [[0usize; 2]; 3];
        let mut frac = [0.0; 3];
        for a in 0..3 {
            let u = p[a] / h - 0.5;
            let f = u.floor();
            frac[a] = u - f;
            let i0 = (f as i64).rem_euclid(n as i64) as usize;
            idx[a] = [i0, (i0 + 1) % n];
        }
        let mut acc = 0.0;
        for (di, wi) in [(0, 1.0 - frac[0]), (1, frac[0])] {
            for (dj, wj) in [(0, 1.0 - frac[1]), (1, frac[1])] {
                for (dk, wk) in [(0, 1.0 - frac[2]), (1, frac[2])] {
                    acc += wi * wj * wk * self.values[self.grid.index(idx[0][di], idx[1][dj], idx[2][dk])];
                }
            }
        }
        acc
    }
}

/// Spectral periodic Poisson solve `−ΔU = rhs` with the zero mode set to 0.
pub fn poisson_solve(grid: &TorusGrid, rhs: &[f64]) -> Result<Potential> {
    grid.check_len(rhs)?;
    grid.check_zero_mean(rhs, 1e-10)?;
    let total = grid.len() as f64;
    let parseval = grid.side.powi(3) / (total * total);
    let r_hat = grid.fft(rhs);
    let mut u_hat = r_hat.clone();
    let mut energy = 0.0;
    grid.for_each_mode(|idx, k2| {
        if k2 == 0.0 {
            u_hat[idx] = Complex64::new(0.0, 0.0);
        } else {
            u_hat[idx] /= k2;
            energy += k2 * u_hat[idx].norm_sqr();
        }
    });
    let values = grid.ifft_real(u_hat);

    // residual of the values actually returned
    let check = grid.fft(&values);
    let (mut res, mut norm) = (0.0, 0.0);
    grid.for_each_mode(|idx, k2| {
        res += (r_hat[idx] - check[idx] * k2).norm_sqr();
        norm += r_hat[idx].norm_sqr();
    });
    let residual = if norm > 0.0 { (res / norm).sqrt() } else { 0.0 };
    Ok(Potential {
        grid: grid.clone(),
        values,
        energy: energy * parseval,
        residual,
    })
}

/// `‖f‖_{H⁻¹} = ‖DΦ‖₂` with `−ΔΦ = f`, summed directly from the spectrum of `f`.
pub fn hminus1_norm(grid: &TorusGrid, f: &[f64]) -> Result<f64> {
    grid.check_len(f)?;
    grid.check_zero_mean(f, 1e-10)?;
    let total = grid.len() as f64;
    let f_hat = grid.fft(f);
    let mut acc = 0.0;
    grid.for_each_mode(|idx, k2| {
        if k2 > 0.0 {
            acc += f_hat[idx].norm_sqr() / k2;
        }
    });
    Ok((acc * grid.side.powi(3) / (total * total)).sqrt())
}
