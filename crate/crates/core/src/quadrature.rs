//! One-dimensional quadrature and Chebyshev helpers shared by the modules.

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on [-1, 1], nodes in decreasing order.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for k in 0..n.div_ceil(2) {
        let mut x = (PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                let (_, d) = legendre_with_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[k] = x;
        weights[k] = w;
        nodes[n - 1 - k] = -x;
        weights[n - 1 - k] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule mapped to [a, b].
pub fn gauss_legendre_interval(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    x.iter()
        .zip(&w)
        .map(|(&xi, &wi)| (mid + half * xi, half * wi))
        .collect()
}

/// Chebyshev interpolant of a function on [lo, hi] together with the
/// antiderivative that vanishes at a chosen anchor.
#[derive(Debug, Clone)]
pub struct ChebyshevProfile {
    mid: f64,
    half: f64,
    coeffs: Vec<f64>,
    integral: Vec<f64>,
    anchor_value: f64,
}

impl ChebyshevProfile {
    /// First-kind Chebyshev nodes on [lo, hi].
    pub fn nodes(n: usize, lo: f64, hi: f64) -> Vec<f64> {
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        (0..n)
            .map(|k| mid + half * (PI * (k as f64 + 0.5) / n as f64).cos())
            .collect()
    }

    /// Builds the interpolant from samples taken at `nodes(n, lo, hi)`.
    pub fn from_samples(samples: &[f64], lo: f64, hi: f64, anchor: f64) -> Self {
        let n = samples.len();
        let mut coeffs = vec![0.0; n];
        for (j, c) in coeffs.iter_mut().enumerate() {
            let s: f64 = samples
                .iter()
                .enumerate()
                .map(|(k, &q)| q * (PI * j as f64 * (k as f64 + 0.5) / n as f64).cos())
                .sum();
            *c = 2.0 * s / n as f64;
        }
        coeffs[0] *= 0.5;
        let mut integral = vec![0.0; n + 1];
        let c = |j: usize| if j < n { coeffs[j] } else { 0.0 };
        integral[1] = c(0) - 0.5 * c(2);
        for k in 2..=n {
            integral[k] = (c(k - 1) - c(k + 1)) / (2.0 * k as f64);
        }
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let mut profile = Self {
            mid,
            half,
            coeffs,
            integral,
            anchor_value: 0.0,
        };
        profile.anchor_value = profile.raw_integral(anchor);
        profile
    }

    pub fn contains(&self, t: f64) -> bool {
        (t - self.mid).abs() <= self.half
    }

    pub fn value(&self, t: f64) -> f64 {
        clenshaw(&self.coeffs, (t - self.mid) / self.half)
    }

    /// Integral of the interpolant from the anchor to `t`.
    pub fn integral(&self, t: f64) -> f64 {
        self.raw_integral(t) - self.anchor_value
    }

    fn raw_integral(&self, t: f64) -> f64 {
        self.half * clenshaw(&self.integral, (t - self.mid) / self.half)
    }
}

fn clenshaw(c: &[f64], u: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &ck in c.iter().skip(1).rev() {
        let b0 = 2.0 * u * b1 - b2 + ck;
        b2 = b1;
        b1 = b0;
    }
    u * b1 - b2 + c[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(7);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        // degree 12 monomial is within 2n - 1 = 13
        let i: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(12)).sum();
        assert!((i - 2.0 / 13.0).abs() < 1e-14);
    }

    #[test]
    fn chebyshev_profile_integrates_cubic() {
        let (lo, hi) = (0.8, 1.3);
        let f = |t: f64| (t - 1.0) * t * t;
        let samples: Vec<f64> = ChebyshevProfile::nodes(8, lo, hi).into_iter().map(f).collect();
        let p = ChebyshevProfile::from_samples(&samples, lo, hi, 1.0);
        assert!((p.value(1.1) - f(1.1)).abs() < 1e-14);
        let exact = |t: f64| t.powi(4) / 4.0 - t.powi(3) / 3.0;
        assert!((p.integral(1.2) - (exact(1.2) - exact(1.0))).abs() < 1e-14);
        assert_eq!(p.integral(1.0), 0.0);
    }
}
