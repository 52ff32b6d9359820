//! Orthonormal associated Legendre functions for the real spherical-harmonic
//! basis, both as colatitude tables (for grid transforms) and in the
//! pole-free Cartesian form used for point evaluation.

use std::f64::consts::PI;
use std::sync::OnceLock;

pub(crate) const MAX_DEGREE: usize = 256;

#[inline]
pub(crate) fn tri(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

pub(crate) struct Recurrence {
    /// Multiplier of `x * P_{l-1,m}` in the three-term recurrence.
    pub a: Vec<f64>,
    /// Multiplier of `P_{l-2,m}` (inside the `a` factor).
    pub b: Vec<f64>,
    /// `sqrt((2l+1)(l^2-m^2)/(2l-1))`, used by the colatitude derivative.
    pub e: Vec<f64>,
    /// Diagonal seeds `P_mm / sin^m`.
    pub seed: Vec<f64>,
}

pub(crate) fn recurrence() -> &'static Recurrence {
    static REC: OnceLock<Recurrence> = OnceLock::new();
    REC.get_or_init(|| {
        let n = tri(MAX_DEGREE, MAX_DEGREE) + 1;
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        let mut e = vec![0.0; n];
        for l in 0..=MAX_DEGREE {
            for m in 0..=l {
                let (lf, mf) = (l as f64, m as f64);
                let t = tri(l, m);
                if l >= m + 2 {
                    a[t] = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                    let lm1 = lf - 1.0;
                    b[t] = ((lm1 * lm1 - mf * mf) / (4.0 * lm1 * lm1 - 1.0)).sqrt();
                }
                if l > m {
                    e[t] = ((2.0 * lf + 1.0) * (lf * lf - mf * mf) / (2.0 * lf - 1.0)).sqrt();
                }
            }
        }
        let mut seed = vec![0.0; MAX_DEGREE + 1];
        seed[0] = 1.0 / (4.0 * PI).sqrt();
        for m in 1..=MAX_DEGREE {
            let mf = m as f64;
            seed[m] = seed[m - 1] * ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt();
        }
        Recurrence { a, b, e, seed }
    })
}

/// Values and first two colatitude derivatives of the normalized functions
/// on one ring, indexed by `tri(l, m)`.
#[derive(Debug, Clone)]
pub(crate) struct RingTables {
    pub value: Vec<f64>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
}

pub(crate) fn ring_tables(lmax: usize, cos_t: f64, sin_t: f64) -> RingTables {
    let rec = recurrence();
    let n = tri(lmax, lmax) + 1;
    let mut value = vec![0.0; n];
    let mut d1 = vec![0.0; n];
    let mut d2 = vec![0.0; n];
    let mut diag = rec.seed[0];
    for m in 0..=lmax {
        if m > 0 {
            let mf = m as f64;
            diag *= ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * sin_t;
        }
        value[tri(m, m)] = diag;
        if m < lmax {
            value[tri(m + 1, m)] = (2.0 * m as f64 + 3.0).sqrt() * cos_t * diag;
        }
        for l in (m + 2)..=lmax {
            let t = tri(l, m);
            value[t] = rec.a[t] * (cos_t * value[tri(l - 1, m)] - rec.b[t] * value[tri(l - 2, m)]);
        }
    }
    let cot = cos_t / sin_t;
    for m in 0..=lmax {
        let mf = m as f64;
        for l in m..=lmax {
            let t = tri(l, m);
            let lf = l as f64;
            let prev = if l > m { value[tri(l - 1, m)] } else { 0.0 };
            d1[t] = (lf * cos_t * value[t] - rec.e[t] * prev) / sin_t;
            d2[t] = -cot * d1[t] - (lf * (lf + 1.0) - mf * mf / (sin_t * sin_t)) * value[t];
        }
    }
    RingTables { value, d1, d2 }
}

/// Reduced functions `Q_lm(z) = P_lm / sin^m` and their z-derivatives up to
/// `order`; `out[k][tri(l,m)]` holds the k-th derivative.
pub(crate) fn reduced_functions(lmax: usize, z: f64, order: usize, out: &mut [Vec<f64>; 3]) {
    let rec = recurrence();
    let n = tri(lmax, lmax) + 1;
    for (k, buf) in out.iter_mut().enumerate() {
        if k <= order {
            buf.clear();
            buf.resize(n, 0.0);
        }
    }
    for m in 0..=lmax {
        let c = rec.seed[m];
        out[0][tri(m, m)] = c;
        if m < lmax {
            let s = (2.0 * m as f64 + 3.0).sqrt();
            out[0][tri(m + 1, m)] = s * z * c;
            if order >= 1 {
                out[1][tri(m + 1, m)] = s * c;
            }
        }
        for l in (m + 2)..=lmax {
            let t = tri(l, m);
            let (t1, t2) = (tri(l - 1, m), tri(l - 2, m));
            let (a, b) = (rec.a[t], rec.b[t]);
            out[0][t] = a * (z * out[0][t1] - b * out[0][t2]);
            if order >= 1 {
                out[1][t] = a * (out[0][t1] + z * out[1][t1] - b * out[1][t2]);
            }
            if order >= 2 {
                out[2][t] = a * (2.0 * out[1][t1] + z * out[2][t1] - b * out[2][t2]);
            }
        }
    }
}
