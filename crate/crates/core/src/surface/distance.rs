use crate::error::Result;
use crate::s2core::{Derivative, S2Grid};

use super::{add, dot, norm, scale, sub, tangent_frame, RadialSurface};

/// Minimum band limit of the sampling used to seed nearest-point searches.
const MIN_SAMPLE_BAND: usize = 24;
/// Number of nearest samples refined by Newton iteration.
const CANDIDATES: usize = 6;
const MAX_NEWTON: usize = 40;
/// Largest chart step per Newton iteration.
const MAX_STEP: f64 = 0.3;

/// Signed distance to a radial surface (negative inside), by nearest-sample
/// search followed by Newton refinement of the nearest point.
#[derive(Debug, Clone)]
pub struct DistanceField {
    surface: RadialSurface,
    dirs: Vec<[f64; 3]>,
    points: Vec<[f64; 3]>,
}

impl DistanceField {
    pub fn new(surface: &RadialSurface) -> Result<Self> {
        let grid = S2Grid::new(surface.band_limit().max(MIN_SAMPLE_BAND))?;
        let c = surface.coeffs_for(&grid)?;
        let w = grid.synthesize(&c, Derivative::Value)?;
        let dirs = grid.nodes();
        let points = dirs
            .iter()
            .zip(&w)
            .map(|(d, wv)| add(surface.center, scale(*d, 1.0 + wv)))
            .collect();
        Ok(Self { surface: surface.clone(), dirs, points })
    }

    pub fn surface(&self) -> &RadialSurface {
        &self.surface
    }

    /// `dist(p, E) − dist(p, ℝ³∖E)`.
    pub fn signed_distance(&self, p: [f64; 3]) -> f64 {
        let d = self.unsigned_distance(p);
        if self.surface.contains(p) {
            -d
        } else {
            d
        }
    }

    /// Signed distance when a good guess of the nearest-point direction is
    /// known; falls back to the global search when the local refinement
    /// does not land closer than the radial projection.
    pub fn signed_distance_near(&self, p: [f64; 3], hint: [f64; 3]) -> (f64, [f64; 3]) {
        let (d, dir) = self.refine(p, hint);
        let radial = {
            let q = sub(p, self.surface.center);
            let r = norm(q);
            if r > 0.0 {
                let y = scale(q, 1.0 / r);
                norm(sub(p, self.surface.point(y)))
            } else {
                f64::INFINITY
            }
        };
        let (d, dir) = if d <= radial + 1e-12 { (d, dir) } else { self.nearest(p) };
        (if self.surface.contains(p) { -d } else { d }, dir)
    }

    pub fn unsigned_distance(&self, p: [f64; 3]) -> f64 {
        self.nearest(p).0
    }

    /// Distance to the surface and the direction (from the center) of the
    /// nearest point.
    pub fn nearest(&self, p: [f64; 3]) -> (f64, [f64; 3]) {
        let mut best: Vec<(f64, usize)> = Vec::with_capacity(CANDIDATES + 1);
        for (k, q) in self.points.iter().enumerate() {
            let e = sub(p, *q);
            let d2 = dot(e, e);
            if best.len() < CANDIDATES || d2 < best[best.len() - 1].0 {
                let pos = best.partition_point(|(v, _)| *v <= d2);
                best.insert(pos, (d2, k));
                best.truncate(CANDIDATES);
            }
        }
        let mut out = (best[0].0.sqrt(), self.dirs[best[0].1]);
        for &(_, k) in &best {
            let (d, dir) = self.refine(p, self.dirs[k]);
            if d < out.0 {
                out = (d, dir);
            }
        }
        out
    }

    /// Local minimization of `|F(y) − p|` over directions `y` near `y0`.
    fn refine(&self, p: [f64; 3], y0: [f64; 3]) -> (f64, [f64; 3]) {
        let s = &self.surface;
        let mut y = y0;
        let mut best = (norm(sub(s.point(y), p)), y);
        for _ in 0..MAX_NEWTON {
            let jet = s.radius_jet(y);
            let rho = jet.value;
            let (t1, t2) = tangent_frame(y);
            let t = [t1, t2];
            let tg = jet.tangential_gradient(y);
            let r = [dot(tg, t1), dot(tg, t2)];
            let f = add(s.center, scale(y, rho));
            let e = sub(f, p);
            let fi: Vec<[f64; 3]> = (0..2).map(|i| add(scale(y, r[i]), scale(t[i], rho))).collect();
            let mut grad = [0.0; 2];
            let mut gn = [[0.0; 2]; 2];
            let mut hess = [[0.0; 2]; 2];
            for i in 0..2 {
                grad[i] = dot(e, fi[i]);
                for j in 0..2 {
                    let hij = jet.covariant_hessian(y, t[i], t[j]);
                    let delta = if i == j { 1.0 } else { 0.0 };
                    let fij = add(
                        add(scale(y, hij - rho * delta), scale(t[j], r[i])),
                        scale(t[i], r[j]),
                    );
                    gn[i][j] = dot(fi[i], fi[j]);
                    hess[i][j] = gn[i][j] + dot(e, fij);
                }
            }
            let step = solve2(hess, grad)
                .filter(|_| hess[0][0] > 0.0 && hess[0][0] * hess[1][1] - hess[0][1] * hess[1][0] > 0.0)
                .or_else(|| solve2(gn, grad));
            let Some(mut step) = step else { break };
            let len = (step[0] * step[0] + step[1] * step[1]).sqrt();
            if len > MAX_STEP {
                step = [step[0] * MAX_STEP / len, step[1] * MAX_STEP / len];
            }
            let moved = add(y, add(scale(t1, -step[0]), scale(t2, -step[1])));
            y = scale(moved, 1.0 / norm(moved));
            let d = norm(sub(s.point(y), p));
            if d < best.0 {
                best = (d, y);
            }
            if len < 1e-14 {
                break;
            }
        }
        best
    }
}

fn solve2(a: [[f64; 2]; 2], b: [f64; 2]) -> Option<[f64; 2]> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if det.abs() < 1e-300 || !det.is_finite() {
        return None;
    }
    Some([(b[0] * a[1][1] - b[1] * a[0][1]) / det, (a[0][0] * b[1] - a[1][0] * b[0]) / det])
}

impl RadialSurface {
    /// Signed distance from `p` to the surface (negative inside).
    pub fn signed_distance(&self, p: [f64; 3]) -> Result<f64> {
        Ok(DistanceField::new(self)?.signed_distance(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_ball_distances() {
        let s = RadialSurface::unit_sphere(8);
        assert!((s.signed_distance([0.0; 3]).unwrap() + 1.0).abs() < 1e-12);
        assert!((s.signed_distance([2.0, 0.0, 0.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((s.signed_distance([0.3, -0.2, 0.1]).unwrap() + 1.0 - 0.14f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn near_hint_agrees_with_search() {
        let s = RadialSurface::from_mode(12, 2, 0, 0.1).unwrap();
        let df = DistanceField::new(&s).unwrap();
        let p = [0.4, 0.3, 1.2];
        let full = df.signed_distance(p);
        let (near, _) = df.signed_distance_near(p, [0.0, 0.0, 1.0]);
        assert!((full - near).abs() < 1e-12);
    }
}
