//! Evaluation of a coefficient set at arbitrary directions, including the
//! poles, through the polynomial extension `Re Σ C_m(z) (x + iy)^m`.

use std::cell::RefCell;

use rustfft::num_complex::Complex64;

use super::legendre::{reduced_functions, tri};
use super::ShCoeffs;

/// Value, ambient gradient and ambient Hessian of the polynomial extension
/// of a band-limited function at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointJet {
    pub value: f64,
    pub grad: [f64; 3],
    pub hess: [[f64; 3]; 3],
}

impl PointJet {
    /// Surface gradient on the unit sphere at the unit vector `y`.
    pub fn tangential_gradient(&self, y: [f64; 3]) -> [f64; 3] {
        let gn = dot(self.grad, y);
        [self.grad[0] - gn * y[0], self.grad[1] - gn * y[1], self.grad[2] - gn * y[2]]
    }

    /// Covariant Hessian on the unit sphere at `y`, applied to tangent
    /// vectors `t` and `s`.
    pub fn covariant_hessian(&self, y: [f64; 3], t: [f64; 3], s: [f64; 3]) -> f64 {
        let mut ths = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                ths += t[a] * self.hess[a][b] * s[b];
            }
        }
        ths - dot(self.grad, y) * dot(t, s)
    }
}

#[inline]
fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

thread_local! {
    static BUFFERS: RefCell<[Vec<f64>; 3]> = const { RefCell::new([Vec::new(), Vec::new(), Vec::new()]) };
}

impl ShCoeffs {
    /// Value at the direction of `p` (normalized internally).
    pub fn eval_direction(&self, p: [f64; 3]) -> f64 {
        self.jet_impl(p, 0).value
    }

    /// Value and first/second derivatives of the extension at the direction
    /// of `p`.
    pub fn jet(&self, p: [f64; 3]) -> PointJet {
        self.jet_impl(p, 2)
    }

    /// Value and gradient only.
    pub fn jet1(&self, p: [f64; 3]) -> PointJet {
        self.jet_impl(p, 1)
    }

    fn jet_impl(&self, p: [f64; 3], order: usize) -> PointJet {
        let n = dot(p, p).sqrt();
        let (x, y, z) = (p[0] / n, p[1] / n, (p[2] / n).clamp(-1.0, 1.0));
        let lmax = self.band_limit();
        let a = self.as_slice();
        BUFFERS.with(|cell| {
            let mut q = cell.borrow_mut();
            reduced_functions(lmax, z, order, &mut q);
            let zeta = Complex64::new(x, y);
            let i_unit = Complex64::new(0.0, 1.0);
            // zeta^(m-2), zeta^(m-1), zeta^m as m advances
            let mut pow_m = Complex64::new(1.0, 0.0);
            let mut pow_m1 = Complex64::new(0.0, 0.0);
            let mut pow_m2 = Complex64::new(0.0, 0.0);
            let mut jet = PointJet { value: 0.0, grad: [0.0; 3], hess: [[0.0; 3]; 3] };
            for m in 0..=lmax {
                let norm = if m > 0 { std::f64::consts::SQRT_2 } else { 1.0 };
                let mut c = [Complex64::new(0.0, 0.0); 3];
                for l in m..=lmax {
                    let base = l * l + l;
                    let coef = Complex64::new(a[base + m], if m > 0 { -a[base - m] } else { 0.0 }) * norm;
                    let t = tri(l, m);
                    c[0] += coef * q[0][t];
                    if order >= 1 {
                        c[1] += coef * q[1][t];
                    }
                    if order >= 2 {
                        c[2] += coef * q[2][t];
                    }
                }
                let mf = m as f64;
                jet.value += (c[0] * pow_m).re;
                if order >= 1 {
                    jet.grad[0] += (c[0] * pow_m1 * mf).re;
                    jet.grad[1] += (c[0] * i_unit * pow_m1 * mf).re;
                    jet.grad[2] += (c[1] * pow_m).re;
                }
                if order >= 2 {
                    let mm1 = mf * (mf - 1.0);
                    let hxx = (c[0] * pow_m2 * mm1).re;
                    let hxy = (c[0] * i_unit * pow_m2 * mm1).re;
                    let hxz = (c[1] * pow_m1 * mf).re;
                    let hyz = (c[1] * i_unit * pow_m1 * mf).re;
                    let hzz = (c[2] * pow_m).re;
                    jet.hess[0][0] += hxx;
                    jet.hess[1][1] -= hxx;
                    jet.hess[0][1] += hxy;
                    jet.hess[0][2] += hxz;
                    jet.hess[1][2] += hyz;
                    jet.hess[2][2] += hzz;
                }
                pow_m2 = pow_m1;
                pow_m1 = pow_m;
                pow_m *= zeta;
            }
            jet.hess[1][0] = jet.hess[0][1];
            jet.hess[2][0] = jet.hess[0][2];
            jet.hess[2][1] = jet.hess[1][2];
            jet
        })
    }
}
