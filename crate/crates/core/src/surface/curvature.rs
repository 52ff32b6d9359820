use crate::error::{Error, Result};
use crate::s2core::{Derivative, S2Grid};

use super::{add, cross, dot, norm, scale, RadialSurface};

/// Per-node differential geometry of a radial surface.
///
/// Metric and second fundamental form are in the `(θ, φ)` chart; the second
/// fundamental form uses the outward normal, so `H ≥ 0` on convex surfaces.
#[derive(Debug, Clone)]
pub struct CurvatureFields {
    pub grid: S2Grid,
    pub rho: Vec<f64>,
    pub position: Vec<[f64; 3]>,
    pub normal: Vec<[f64; 3]>,
    pub g11: Vec<f64>,
    pub g12: Vec<f64>,
    pub g22: Vec<f64>,
    pub a11: Vec<f64>,
    pub a12: Vec<f64>,
    pub a22: Vec<f64>,
    pub mean: Vec<f64>,
    pub gauss: Vec<f64>,
    /// `|A|²`.
    pub second_form_sq: Vec<f64>,
    /// `|Å|² = |A|² − H²/2`.
    pub traceless_sq: Vec<f64>,
    /// `√det g` in the `(θ, φ)` chart.
    pub area_element: Vec<f64>,
    /// Surface area per unit sphere area, `√det g / sin θ`.
    pub area_density: Vec<f64>,
}

impl CurvatureFields {
    /// Eigenvalues `k1 <= k2` of the Weingarten map at a node.
    pub fn principal_curvatures(&self, k: usize) -> (f64, f64) {
        let det = self.g11[k] * self.g22[k] - self.g12[k] * self.g12[k];
        // S = g^{-1} A
        let s11 = (self.g22[k] * self.a11[k] - self.g12[k] * self.a12[k]) / det;
        let s12 = (self.g22[k] * self.a12[k] - self.g12[k] * self.a22[k]) / det;
        let s21 = (self.g11[k] * self.a12[k] - self.g12[k] * self.a11[k]) / det;
        let s22 = (self.g11[k] * self.a22[k] - self.g12[k] * self.a12[k]) / det;
        let half_tr = 0.5 * (s11 + s22);
        let disc = (0.25 * (s11 - s22).powi(2) + s12 * s21).max(0.0).sqrt();
        (half_tr - disc, half_tr + disc)
    }

    /// Quadrature of `f` against surface area.
    pub fn integrate_area(&self, f: &[f64]) -> f64 {
        let n_phi = self.grid.n_phi();
        let mut total = 0.0;
        for i in 0..self.grid.n_theta() {
            let mut ring = 0.0;
            for k in i * n_phi..(i + 1) * n_phi {
                ring += f[k] * self.area_density[k];
            }
            total += self.grid.ring_weight(i) * ring;
        }
        total
    }

    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }
}

/// Curvature fields of `s` sampled on `grid` (whose band limit may exceed the
/// surface's own).
pub fn curvature_fields(s: &RadialSurface, grid: &S2Grid) -> Result<CurvatureFields> {
    let c = s.coeffs_for(grid)?;
    let d = grid.synthesize_many(
        &c,
        &[
            Derivative::Value,
            Derivative::Theta,
            Derivative::Phi,
            Derivative::ThetaTheta,
            Derivative::ThetaPhi,
            Derivative::PhiPhi,
        ],
    )?;
    let n = grid.len();
    let n_phi = grid.n_phi();
    let mut out = CurvatureFields {
        grid: grid.clone(),
        rho: vec![0.0; n],
        position: vec![[0.0; 3]; n],
        normal: vec![[0.0; 3]; n],
        g11: vec![0.0; n],
        g12: vec![0.0; n],
        g22: vec![0.0; n],
        a11: vec![0.0; n],
        a12: vec![0.0; n],
        a22: vec![0.0; n],
        mean: vec![0.0; n],
        gauss: vec![0.0; n],
        second_form_sq: vec![0.0; n],
        traceless_sq: vec![0.0; n],
        area_element: vec![0.0; n],
        area_density: vec![0.0; n],
    };
    for i in 0..grid.n_theta() {
        let (st, ct) = (grid.sin_theta(i), grid.cos_theta(i));
        for j in 0..n_phi {
            let k = i * n_phi + j;
            let (sp, cp) = grid.phi(j).sin_cos();
            let x = [st * cp, st * sp, ct];
            let e_t = [ct * cp, ct * sp, -st];
            let e_p = [-sp, cp, 0.0];
            let rho = 1.0 + d[0][k];
            if !(rho > 0.0) {
                return Err(Error::NotStarShaped { node: k, value: rho });
            }
            let (rt, rp, rtt, rtp, rpp) = (d[1][k], d[2][k], d[3][k], d[4][k], d[5][k]);
            // x_θ = e_θ, x_φ = sinθ e_φ, x_θθ = −x, x_θφ = cosθ e_φ,
            // x_φφ = −sinθ (sinθ x + cosθ e_θ)
            let f_t = add(scale(x, rt), scale(e_t, rho));
            let f_p = add(scale(x, rp), scale(e_p, rho * st));
            let f_tt = add(scale(x, rtt - rho), scale(e_t, 2.0 * rt));
            let f_tp = add(add(scale(x, rtp), scale(e_t, rp)), scale(e_p, rt * st + rho * ct));
            let f_pp = add(
                add(scale(x, rpp - rho * st * st), scale(e_t, -rho * st * ct)),
                scale(e_p, 2.0 * rp * st),
            );
            let g11 = dot(f_t, f_t);
            let g12 = dot(f_t, f_p);
            let g22 = dot(f_p, f_p);
            let det = g11 * g22 - g12 * g12;
            if !(det >= 1e-12) {
                return Err(Error::DegenerateMetric { node: k, det });
            }
            let nu_raw = cross(f_t, f_p);
            let nu = scale(nu_raw, 1.0 / norm(nu_raw));
            let a11 = -dot(f_tt, nu);
            let a12 = -dot(f_tp, nu);
            let a22 = -dot(f_pp, nu);
            let h = (g22 * a11 - 2.0 * g12 * a12 + g11 * a22) / det;
            let kg = (a11 * a22 - a12 * a12) / det;
            // tr (g^{-1} A)^2
            let s11 = (g22 * a11 - g12 * a12) / det;
            let s12 = (g22 * a12 - g12 * a22) / det;
            let s21 = (g11 * a12 - g12 * a11) / det;
            let s22 = (g11 * a22 - g12 * a12) / det;
            let a_sq = s11 * s11 + 2.0 * s12 * s21 + s22 * s22;
            let sqrt_det = det.sqrt();
            out.rho[k] = rho;
            out.position[k] = add(s.center, scale(x, rho));
            out.normal[k] = nu;
            out.g11[k] = g11;
            out.g12[k] = g12;
            out.g22[k] = g22;
            out.a11[k] = a11;
            out.a12[k] = a12;
            out.a22[k] = a22;
            out.mean[k] = h;
            out.gauss[k] = kg;
            out.second_form_sq[k] = a_sq;
            out.traceless_sq[k] = a_sq - 0.5 * h * h;
            out.area_element[k] = sqrt_det;
            out.area_density[k] = sqrt_det / st;
        }
    }
    Ok(out)
}
