use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::s2core::{Derivative, S2Grid, ShCoeffs};
use crate::surface::{curvature_fields, RadialSurface};

use super::optim::{lbfgs, non_convergence, LbfgsOptions};
use super::profile::DistanceProfile;
use super::{MmConfig, StepDiag};

/// Fraction of the profile band beyond which the band is widened and the
/// step re-solved.
const BAND_REFRESH: f64 = 0.9;
const MAX_BAND_REFRESH: usize = 8;
/// A stalled line search is accepted when the gradient is within this
/// factor of the tolerance.
const STALL_FACTOR: f64 = 100.0;

/// Quadrature data shared by objective evaluations.
pub(crate) struct Discretization {
    pub grid: S2Grid,
    /// Quadrature weight per node.
    pub weights: Vec<f64>,
    /// `1 / sin²θ` per node.
    pub inv_sin_sq: Vec<f64>,
}

impl Discretization {
    pub fn new(band_limit: usize) -> Result<Self> {
        let grid = S2Grid::new(band_limit)?;
        let weights = grid.weights();
        let n_phi = grid.n_phi();
        let inv_sin_sq = (0..grid.len()).map(|k| grid.sin_theta(k / n_phi).powi(-2)).collect();
        Ok(Self { grid, weights, inv_sin_sq })
    }

    pub fn volume(&self, rho: &[f64]) -> f64 {
        rho.iter().zip(&self.weights).map(|(r, w)| w * r * r * r).sum::<f64>() / 3.0
    }

    /// Uniform radial shift `s` with `volume(rho + s) = target`, iterated
    /// to round-off so that the projected objective is a smooth function of
    /// the remaining coefficients.
    pub fn volume_shift(&self, rho: &[f64], target: f64, start: f64, rel_tol: f64) -> Option<f64> {
        let mut s = start;
        let mut settled = false;
        let mut best = (f64::INFINITY, start);
        for _ in 0..40 {
            let (mut v, mut dv) = (0.0, 0.0);
            for (r, w) in rho.iter().zip(&self.weights) {
                let t = r + s;
                v += w * t * t * t;
                dv += w * t * t;
            }
            v /= 3.0;
            if !(dv > 0.0) {
                return None;
            }
            let miss = (v - target).abs();
            if miss < best.0 {
                best = (miss, s);
            }
            if settled {
                return Some(s);
            }
            s -= (v - target) / dv;
            // one more correction after the tolerance is met
            settled = miss <= rel_tol * target;
        }
        // round-off can leave a two-cycle just above a tight tolerance
        (best.0 <= 1e-12 * target).then_some(best.1)
    }
}

/// Area density `ρ√(ρ² + ρ_θ² + ρ_φ²/sin²θ)` and its partials with respect
/// to `ρ`, `ρ_θ`, `ρ_φ`.
#[inline]
fn area_density(r: f64, rt: f64, rp: f64, inv_s2: f64) -> (f64, f64, f64, f64) {
    let q = (r * r + rt * rt + rp * rp * inv_s2).sqrt();
    (r * q, q + r * r / q, r * rt / q, r * rp * inv_s2 / q)
}

struct Objective<'a> {
    disc: &'a Discretization,
    profile: &'a DistanceProfile,
    h: f64,
    target_volume: f64,
    volume_tol: f64,
    band_limit: usize,
    /// Last volume shift, used to warm-start the projection.
    shift: f64,
}

impl Objective<'_> {
    fn coeffs(&self, z: &[f64], a00: f64) -> ShCoeffs {
        let mut data = Vec::with_capacity(z.len() + 1);
        data.push(a00);
        data.extend_from_slice(z);
        ShCoeffs::from_vec(self.band_limit, data).expect("sized by construction")
    }

    /// Radii and their partials for reduced coefficients `z`, after the
    /// volume projection; also returns the resulting `a00`.
    fn fields(&mut self, z: &[f64]) -> Option<(f64, [Vec<f64>; 3])> {
        if z.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let c = self.coeffs(z, 0.0);
        let mut d = self
            .disc
            .grid
            .synthesize_many(&c, &[Derivative::Value, Derivative::Theta, Derivative::Phi])
            .ok()?;
        let rp = d.pop()?;
        let rt = d.pop()?;
        let mut rho = d.pop()?;
        rho.iter_mut().for_each(|r| *r += 1.0);
        let s = self.disc.volume_shift(&rho, self.target_volume, self.shift, self.volume_tol)?;
        rho.iter_mut().for_each(|r| *r += s);
        for (k, r) in rho.iter().enumerate() {
            if !(*r > 0.0) || !self.profile.contains(k, *r) {
                return None;
            }
        }
        self.shift = s;
        Some((s * (4.0 * PI).sqrt(), [rho, rt, rp]))
    }

    fn eval(&mut self, z: &[f64]) -> Option<(f64, Vec<f64>)> {
        let (_, [rho, rt, rp]) = self.fields(z)?;
        let n = rho.len();
        let (mut u, mut vt, mut vp, mut vv) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        let mut f = 0.0;
        for k in 0..n {
            let w = self.disc.weights[k];
            let (j, dj_r, dj_t, dj_p) = area_density(rho[k], rt[k], rp[k], self.disc.inv_sin_sq[k]);
            f += w * (j + self.profile.g(k, rho[k]) / self.h);
            u[k] = w * (dj_r + self.profile.q(k, rho[k]) / self.h);
            vt[k] = w * dj_t;
            vp[k] = w * dj_p;
            vv[k] = w * rho[k] * rho[k];
        }
        let grid = &self.disc.grid;
        let gj = grid
            .adjoint_synthesize(&[(&u, Derivative::Value), (&vt, Derivative::Theta), (&vp, Derivative::Phi)])
            .ok()?;
        let gv = grid.adjoint_synthesize(&[(&vv, Derivative::Value)]).ok()?;
        let (gj, gv) = (gj.as_slice(), gv.as_slice());
        let lambda = gj[0] / gv[0];
        let g = (1..gj.len()).map(|i| gj[i] - lambda * gv[i]).collect();
        Some((f, g))
    }
}

/// One minimizing-movement step: minimize `P(F) + (1/h)∫_F d_E` over radial
/// graphs about `E`'s center at `E`'s volume, starting from `F = E`.
pub fn mm_step(e: &RadialSurface, config: &MmConfig) -> Result<(RadialSurface, StepDiag)> {
    config.validate()?;
    let e = e.with_band_limit(config.band_limit);
    let disc = Discretization::new(config.band_limit)?;
    let cf = curvature_fields(&e, &disc.grid)?;
    let area: f64 = (0..cf.len()).map(|k| disc.weights[k] * cf.area_density[k]).sum();
    let hbar = (0..cf.len()).map(|k| disc.weights[k] * cf.area_density[k] * cf.mean[k]).sum::<f64>() / area;
    let spread = cf.mean.iter().map(|h| (h - hbar).abs()).fold(0.0, f64::max);
    let min_rho = cf.rho.iter().copied().fold(f64::INFINITY, f64::min);
    let max_width = 0.3 * min_rho;
    let mut width = (3.0 * config.h * spread).clamp(1e-4, max_width);
    let target_volume = disc.volume(&cf.rho);

    let mut z: Vec<f64> = e.coeffs.as_slice()[1..].to_vec();
    let mut total_iterations = 0;
    for _ in 0..MAX_BAND_REFRESH {
        let profile = DistanceProfile::build(&e, &disc.grid, width)?;
        let mut obj = Objective {
            disc: &disc,
            profile: &profile,
            h: config.h,
            target_volume,
            volume_tol: config.volume_tol,
            band_limit: config.band_limit,
            shift: 0.0,
        };
        let opts = LbfgsOptions {
            memory: 8,
            gradient_tol: config.gradient_tol,
            max_iterations: config.max_iterations.saturating_sub(total_iterations).max(1),
            initial_scale: 1.0 / (1.0 / config.h + 4.0),
        };
        let result = lbfgs(|x| obj.eval(x), z.clone(), opts)?;
        total_iterations += result.iterations;
        z = result.x.clone();
        let (a00, [rho, _, _]) = obj.fields(&z).ok_or_else(|| Error::StepRejected("final iterate infeasible".into()))?;
        let usage = profile.band_usage(&rho);
        if usage > BAND_REFRESH && width < max_width {
            width = (2.0 * width).min(max_width);
            continue;
        }
        let accepted = result.converged || (result.stalled && result.gradient_norm <= STALL_FACTOR * config.gradient_tol);
        if !accepted {
            return Err(non_convergence(&result));
        }
        let f = RadialSurface::new(e.center, obj.coeffs(&z, a00));
        let mut diag = diagnose(&e, &f, config.h, &profile, &disc)?;
        diag.iterations = total_iterations;
        diag.gradient_norm = result.gradient_norm;
        return Ok((f, diag));
    }
    Err(Error::StepRejected("displacement exceeds the admissible distance band".into()))
}

/// Step diagnostics using a distance profile of `E` that covers `F`.
pub(crate) fn diagnose(
    e: &RadialSurface,
    f: &RadialSurface,
    h: f64,
    profile: &DistanceProfile,
    disc: &Discretization,
) -> Result<StepDiag> {
    let grid = &disc.grid;
    let ce = curvature_fields(e, grid)?;
    let cf = curvature_fields(f, grid)?;
    let n = grid.len();
    let w = &disc.weights;
    let (mut area_e, mut area_f, mut dissipation, mut lam_num, mut distance_sq) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let mut d = vec![0.0; n];
    for k in 0..n {
        let r = cf.rho[k];
        if !profile.contains(k, r) {
            return Err(Error::StepRejected("surface left the distance band".into()));
        }
        d[k] = profile.distance(k, r);
        let da = w[k] * cf.area_density[k];
        area_e += w[k] * ce.area_density[k];
        area_f += da;
        dissipation += w[k] * profile.g(k, r);
        lam_num += da * (d[k] / h + cf.mean[k]);
        distance_sq += da * d[k] * d[k];
    }
    let lambda = lam_num / area_f;
    let el_sq: f64 = (0..n).map(|k| w[k] * cf.area_density[k] * (d[k] / h + cf.mean[k] - lambda).powi(2)).sum();
    let (ve, vf) = (disc.volume(&ce.rho), disc.volume(&cf.rho));
    Ok(StepDiag {
        lambda,
        dissipation,
        el_residual: el_sq.sqrt(),
        distance_sq,
        perimeter_before: area_e,
        perimeter_after: area_f,
        volume_drift: (vf - ve) / ve,
        iterations: 0,
        gradient_norm: 0.0,
    })
}
