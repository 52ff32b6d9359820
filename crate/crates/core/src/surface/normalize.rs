use std::f64::consts::PI;

use crate::error::{Error, Result};

use super::{dot, norm, report, scale, sub, RadialSurface, UNIT_BALL_VOLUME};

/// Barycenter offsets below this are treated as already centered.
const CENTER_TOL: f64 = 1e-11;
const MAX_RECENTER: usize = 20;

impl RadialSurface {
    /// Rescale about the center so the enclosed volume equals `target`.
    pub fn with_volume(&self, target: f64) -> Result<Self> {
        let v = report(self)?.volume;
        Ok(self.scaled((target / v).cbrt()))
    }

    /// Recenter at the barycenter of the enclosed region, then dilate to the
    /// volume of the unit ball.
    pub fn normalize(&self) -> Result<Self> {
        let mut s = self.clone();
        for _ in 0..MAX_RECENTER {
            let b = report(&s)?.barycenter;
            if norm(sub(b, s.center)) <= CENTER_TOL {
                break;
            }
            s = s.recentered(b)?;
        }
        s.with_volume(UNIT_BALL_VOLUME)
    }

    /// Same surface re-expanded as a radial graph about `new_center`,
    /// projected onto the current band limit.
    pub fn recentered(&self, new_center: [f64; 3]) -> Result<Self> {
        let grid = self.grid()?;
        let shift = sub(new_center, self.center);
        let mut t_minus_one = Vec::with_capacity(grid.len());
        for (k, x) in grid.nodes().into_iter().enumerate() {
            let t = self.ray_hit(shift, x).ok_or(Error::NotStarShaped { node: k, value: 0.0 })?;
            t_minus_one.push(t - 1.0);
        }
        let out = RadialSurface::new(new_center, grid.analyze(&t_minus_one)?);
        out.check_star_shaped(&grid)?;
        Ok(out)
    }

    /// Distance `t > 0` with `center + shift + t x` on the surface.
    fn ray_hit(&self, shift: [f64; 3], x: [f64; 3]) -> Option<f64> {
        let g = |t: f64| {
            let p = [shift[0] + t * x[0], shift[1] + t * x[1], shift[2] + t * x[2]];
            let r = norm(p);
            (r - self.radius_at(scale(p, 1.0 / r)), p, r)
        };
        let mut t = self.radius_at(x) - dot(shift, x);
        if !(t > 0.0) {
            t = self.radius_at(x);
        }
        for _ in 0..60 {
            let (val, p, r) = g(t);
            if val.abs() < 1e-15 * (1.0 + t) {
                return Some(t);
            }
            let y = scale(p, 1.0 / r);
            let jet = self.radius_jet(y);
            let tg = jet.tangential_gradient(y);
            let dy = scale(sub(x, scale(y, dot(x, y))), 1.0 / r);
            let slope = dot(x, y) - dot(tg, dy);
            if !(slope.abs() > 1e-12) {
                return None;
            }
            let next = t - val / slope;
            t = if next > 0.0 { next } else { 0.5 * t };
        }
        let (val, _, _) = g(t);
        (val.abs() < 1e-10).then_some(t)
    }

    /// Whether the enclosed volume equals that of the unit ball within
    /// `rel_tol`.
    pub fn is_normalized(&self, rel_tol: f64) -> Result<bool> {
        let v = report(self)?.volume;
        Ok(((v - UNIT_BALL_VOLUME) / UNIT_BALL_VOLUME).abs() <= rel_tol)
    }
}

/// Radius of the ball with the given volume.
pub(crate) fn equivalent_radius(volume: f64) -> f64 {
    (3.0 * volume / (4.0 * PI)).cbrt()
}
