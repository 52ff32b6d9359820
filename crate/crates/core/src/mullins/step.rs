//! One minimizing-movement step of the Mullins–Sekerka scheme.

use std::f64::consts::PI;

use super::raster::{rasterize, ChiSet};
use super::torus::{hminus1_norm, poisson_solve, Potential, TorusGrid};
use super::{sharp_volume, MsConfig, MsStepDiag};
use crate::s2core::S2Grid;
use crate::surface::{curvature_fields, RadialSurface};
use crate::{Error, Result};

/// Backtracking halvings before an iteration counts as stalled.
const MAX_HALVINGS: usize = 8;
/// Interfaces closer than this many voxels collide.
const COLLISION_VOXELS: f64 = 2.0;

/// Sharp interfaces together with their occupancies.
#[derive(Debug, Clone)]
pub struct MsState {
    pub components: Vec<RadialSurface>,
    pub chi: ChiSet,
}

impl MsState {
    pub fn new(components: Vec<RadialSurface>, grid: &TorusGrid) -> Result<Self> {
        let chi = rasterize(&components, grid)?;
        Ok(Self { components, chi })
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.chi.grid
    }

    /// Total perimeter of the sharp interfaces.
    pub fn perimeter(&self) -> Result<f64> {
        let mut p = 0.0;
        for s in &self.components {
            let cf = curvature_fields(s, &s.grid()?)?;
            p += cf.integrate_area(&vec![1.0; cf.len()]);
        }
        Ok(p)
    }

    /// Total sharp volume.
    pub fn volume(&self) -> Result<f64> {
        self.components.iter().map(sharp_volume).sum()
    }
}

/// `D(F, E) = ∫|DU|²` with `−ΔU = (χ_F − χ_E)/h`.
pub fn ms_dissipation(f: &ChiSet, e: &ChiSet, h: f64) -> Result<(f64, Potential)> {
    let rhs = difference(f, e, h)?;
    let u = poisson_solve(&f.grid, &rhs)?;
    Ok((u.energy, u))
}

/// `(χ_F − χ_E)/h` with the round-off mean removed; rejects unequal masses.
fn difference(f: &ChiSet, e: &ChiSet, h: f64) -> Result<Vec<f64>> {
    if f.grid != e.grid {
        return Err(Error::InvalidInput("occupancies live on different grids".into()));
    }
    if !(h > 0.0) {
        return Err(Error::InvalidInput("time step must be positive".into()));
    }
    let (mf, me) = (f.mass(), e.mass());
    if (mf - me).abs() > 1e-8 * mf.abs().max(me.abs()) {
        return Err(Error::MassMismatch(mf, me));
    }
    let mut d: Vec<f64> = f.occupancy.iter().zip(&e.occupancy).map(|(a, b)| (a - b) / h).collect();
    let mean = f.grid.mean(&d);
    d.iter_mut().for_each(|v| *v -= mean);
    Ok(d)
}

/// Everything the iteration needs about a candidate `F`.
struct Candidate {
    components: Vec<RadialSurface>,
    chi: ChiSet,
    potential: Potential,
    /// `H + U` at the nodes of each component.
    force: Vec<Vec<f64>>,
    /// Unit normals and node directions, for converting normal motion into
    /// radial motion.
    normal_dot_dir: Vec<Vec<f64>>,
    lambda: f64,
    residual: f64,
    /// Band-limited part of the residual.
    projected: f64,
    perimeter: f64,
    objective: f64,
}

struct Context<'a> {
    e: &'a MsState,
    h: f64,
    grid: S2Grid,
}

impl Context<'_> {
    fn evaluate(&self, components: Vec<RadialSurface>) -> Result<Candidate> {
        let chi = rasterize(&components, self.e.grid())?;
        let rhs = difference(&chi, &self.e.chi, self.h)?;
        let potential = poisson_solve(self.e.grid(), &rhs)?;
        let weights = self.grid.weights();
        let nodes = self.grid.nodes();
        let mut force = Vec::with_capacity(components.len());
        let mut normal_dot_dir = Vec::with_capacity(components.len());
        let mut res_terms = Vec::with_capacity(components.len());
        let mut densities = Vec::with_capacity(components.len());
        let (mut total_area, mut total_force) = (0.0, 0.0);
        for s in &components {
            let cf = curvature_fields(s, &self.grid)?;
            let g: Vec<f64> = (0..cf.len()).map(|k| cf.mean[k] + potential.sample(cf.position[k])).collect();
            let da: Vec<f64> = (0..cf.len()).map(|k| weights[k] * cf.area_density[k]).collect();
            let nd: Vec<f64> = (0..cf.len()).map(|k| crate::surface::dot(cf.normal[k], nodes[k])).collect();
            total_area += da.iter().sum::<f64>();
            total_force += g.iter().zip(&da).map(|(g, a)| g * a).sum::<f64>();
            res_terms.push(da);
            densities.push(cf.area_density);
            force.push(g);
            normal_dot_dir.push(nd);
        }
        let lambda = if total_area > 0.0 { total_force / total_area } else { 0.0 };
        let (mut res, mut projected) = (0.0, 0.0);
        for ((g, da), density) in force.iter().zip(&res_terms).zip(&densities) {
            res += g.iter().zip(da).map(|(g, a)| (g - lambda).powi(2) * a).sum::<f64>();
            let q: Vec<f64> = g.iter().zip(density).map(|(g, d)| (g - lambda) * d.sqrt()).collect();
            projected += self.grid.analyze(&q)?.norm_sq();
        }
        let objective = total_area + 0.5 * self.h * potential.energy;
        Ok(Candidate {
            components,
            chi,
            potential,
            force,
            normal_dot_dir,
            lambda,
            residual: res.sqrt(),
            projected: projected.sqrt(),
            perimeter: total_area,
            objective,
        })
    }

    /// Near-Newton update: each spherical-harmonic degree of the normal
    /// velocity is divided by the stiffness of that degree on a sphere of the
    /// component's radius, `(l−1)(l+2)/R² + R/(h(2l+1))`.
    fn update(&self, c: &Candidate, step: f64, volume: f64) -> Result<Vec<RadialSurface>> {
        let mut out = Vec::with_capacity(c.components.len());
        for (j, s) in c.components.iter().enumerate() {
            let radial: Vec<f64> = c.force[j]
                .iter()
                .zip(&c.normal_dot_dir[j])
                .map(|(g, nd)| -(g - c.lambda) / nd)
                .collect();
            let mut delta = self.grid.analyze(&radial)?;
            let r = (3.0 * sharp_volume(s)? / (4.0 * PI)).cbrt();
            for l in 0..=delta.band_limit() {
                let lf = l as f64;
                let stiffness = if l == 0 {
                    r / self.h
                } else {
                    (lf - 1.0) * (lf + 2.0) / (r * r) + r / (self.h * (2.0 * lf + 1.0))
                };
                for m in -(l as i64)..=(l as i64) {
                    let v = delta.get(l, m);
                    delta.set(l, m, step * v / stiffness);
                }
            }
            let mut coeffs = s.coeffs.clone();
            for (a, d) in coeffs.as_mut_slice().iter_mut().zip(delta.as_slice()) {
                *a += d;
            }
            out.push(RadialSurface::new(s.center, coeffs));
        }
        joint_dilation(out, volume)
    }
}

/// Dilates all components about the volume-weighted mean of their centers
/// so that the total sharp volume equals `volume`.
fn joint_dilation(components: Vec<RadialSurface>, volume: f64) -> Result<Vec<RadialSurface>> {
    let vols: Vec<f64> = components.iter().map(sharp_volume).collect::<Result<_>>()?;
    let total: f64 = vols.iter().sum();
    if !(total > 0.0) {
        return Err(Error::NonFinite("component volume"));
    }
    let alpha = (volume / total).cbrt();
    let mut b = [0.0; 3];
    for (s, v) in components.iter().zip(&vols) {
        for a in 0..3 {
            b[a] += v * s.center[a] / total;
        }
    }
    Ok(components
        .into_iter()
        .map(|s| {
            let mut d = s.scaled(alpha);
            for a in 0..3 {
                d.center[a] = b[a] + alpha * (s.center[a] - b[a]);
            }
            d
        })
        .collect())
}

fn check_collisions(components: &[RadialSurface], grid: &S2Grid, limit: f64) -> Result<()> {
    if components.len() < 2 {
        return Ok(());
    }
    let mut clouds = Vec::with_capacity(components.len());
    for s in components {
        let rho = s.radii(grid)?;
        let pts: Vec<[f64; 3]> = grid
            .nodes()
            .iter()
            .zip(&rho)
            .map(|(y, r)| [s.center[0] + r * y[0], s.center[1] + r * y[1], s.center[2] + r * y[2]])
            .collect();
        let rmax = rho.iter().copied().fold(0.0, f64::max);
        clouds.push((s.center, rmax, pts));
    }
    for a in 0..clouds.len() {
        for b in (a + 1)..clouds.len() {
            let (ca, ra, pa) = &clouds[a];
            let (cb, rb, pb) = &clouds[b];
            let dc = crate::surface::norm(crate::surface::sub(*ca, *cb));
            if dc - ra - rb > limit {
                continue;
            }
            let mut gap = f64::INFINITY;
            for p in pa {
                for q in pb {
                    gap = gap.min(crate::surface::norm(crate::surface::sub(*p, *q)));
                }
            }
            if gap < limit {
                return Err(Error::Collision { gap, limit });
            }
        }
    }
    Ok(())
}

/// One step from `F = E`.
pub fn ms_mm_step(e: &MsState, config: &MsConfig) -> Result<(MsState, MsStepDiag)> {
    ms_mm_step_from(e, None, config)
}

/// One step of `min P(F) + (h/2)∫|DU_{F,E}|²` at the volume of `E`, started
/// from `guess` when the guess does not raise the objective.
///
/// Iterates the preconditioned shape gradient `H_F + U − λ`, re-rasterizing
/// `F` and re-solving for `U` every iterate, with backtracking on the
/// band-limited residual and a joint dilation restoring the volume.
pub fn ms_mm_step_from(e: &MsState, guess: Option<Vec<RadialSurface>>, config: &MsConfig) -> Result<(MsState, MsStepDiag)> {
    config.validate()?;
    let grid = S2Grid::new(config.band_limit)?;
    let ctx = Context { e, h: config.h, grid: grid.clone() };
    let start: Vec<RadialSurface> = e.components.iter().map(|s| s.with_band_limit(config.band_limit)).collect();
    let volume: f64 = start.iter().map(sharp_volume).sum::<Result<f64>>()?;
    let from_e = ctx.evaluate(start)?;
    let perimeter_before = from_e.perimeter;
    let from_e_projected = from_e.projected;
    let mut current = from_e;
    if let Some(g) = guess {
        let g: Vec<RadialSurface> = g.iter().map(|s| s.with_band_limit(config.band_limit)).collect();
        if let Ok(cand) = joint_dilation(g, volume).and_then(|g| ctx.evaluate(g)) {
            if cand.objective <= current.objective {
                current = cand;
            }
        }
    }

    let target = config.tolerance.max(config.relative_tolerance * from_e_projected);
    let mut iterations = 0;
    let mut step = 1.0;
    while current.projected > target {
        if iterations >= config.max_iterations {
            return Err(Error::NonConvergence { iterations, gradient: current.projected });
        }
        iterations += 1;
        let mut accepted = None;
        let mut trial_step = step;
        for _ in 0..MAX_HALVINGS {
            let cand = ctx.update(&current, trial_step, volume).and_then(|c| ctx.evaluate(c));
            if let Ok(cand) = cand {
                if cand.projected < current.projected {
                    accepted = Some(cand);
                    break;
                }
            }
            trial_step *= 0.5;
        }
        match accepted {
            Some(c) => {
                current = c;
                step = (2.0 * trial_step).min(1.0);
            }
            None => {
                return Err(Error::NonConvergence { iterations, gradient: current.projected });
            }
        }
    }

    let spacing = e.grid().spacing();
    check_collisions(&current.components, &grid, COLLISION_VOXELS * spacing)?;
    let diff = difference(&current.chi, &e.chi, 1.0)?;
    let hminus1 = hminus1_norm(e.grid(), &diff)?;
    let dissipation = current.potential.energy;
    let perimeter_after = current.perimeter;
    if perimeter_after + 0.5 * config.h * dissipation > perimeter_before + config.comparison_tol {
        return Err(Error::StepRejected(format!(
            "energy comparison fails: {perimeter_after} + {} > {perimeter_before}",
            0.5 * config.h * dissipation
        )));
    }
    let mut displacement = 0.0f64;
    for (f, s) in current.components.iter().zip(&e.components) {
        let rf = f.radii(&grid)?;
        let rs = s.with_band_limit(config.band_limit).radii(&grid)?;
        let dr = rf.iter().zip(&rs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let dc = crate::surface::norm(crate::surface::sub(f.center, s.center));
        displacement = displacement.max(dr + dc);
    }
    let diag = MsStepDiag {
        dissipation,
        hminus1,
        lambda: current.lambda,
        el_residual: current.residual,
        projected_residual: current.projected,
        perimeter_before,
        perimeter_after,
        mass: current.chi.mass(),
        mass_error: (current.chi.mass() - e.chi.volume).abs() / e.chi.volume,
        poisson_residual: current.potential.residual,
        iterations,
        displacement,
    };
    let f = MsState { components: current.components, chi: current.chi };
    Ok((f, diag))
}
