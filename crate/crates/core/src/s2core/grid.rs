use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::legendre::{ring_tables, tri, RingTables, MAX_DEGREE};
use super::{direction, ShCoeffs};
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;

/// Largest band limit whose Legendre tables are kept in memory.
const TABLE_CACHE_LIMIT: usize = 64;

/// Which partial derivative of a field to synthesize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Derivative {
    Value,
    Theta,
    Phi,
    ThetaTheta,
    ThetaPhi,
    PhiPhi,
}

impl Derivative {
    fn orders(self) -> (usize, usize) {
        match self {
            Derivative::Value => (0, 0),
            Derivative::Theta => (1, 0),
            Derivative::Phi => (0, 1),
            Derivative::ThetaTheta => (2, 0),
            Derivative::ThetaPhi => (1, 1),
            Derivative::PhiPhi => (0, 2),
        }
    }
}

struct GridData {
    band_limit: usize,
    n_theta: usize,
    n_phi: usize,
    theta: Vec<f64>,
    cos_theta: Vec<f64>,
    sin_theta: Vec<f64>,
    gl_weights: Vec<f64>,
    phi: Vec<f64>,
    tables: Option<Vec<RingTables>>,
    fft_forward: Arc<dyn Fft<f64>>,
    fft_inverse: Arc<dyn Fft<f64>>,
}

/// Gauss–Legendre × uniform longitude grid with `2(L+1)` rings of `4(L+1)`
/// nodes. Cheap to clone; grids are shared per band limit.
#[derive(Clone)]
pub struct S2Grid {
    inner: Arc<GridData>,
}

impl std::fmt::Debug for S2Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("S2Grid")
            .field("band_limit", &self.inner.band_limit)
            .field("n_theta", &self.inner.n_theta)
            .field("n_phi", &self.inner.n_phi)
            .finish()
    }
}

impl PartialEq for S2Grid {
    fn eq(&self, other: &Self) -> bool {
        self.inner.band_limit == other.inner.band_limit
    }
}

impl S2Grid {
    pub fn new(band_limit: usize) -> Result<Self> {
        if !(2..=MAX_DEGREE).contains(&band_limit) {
            return Err(Error::BandLimitOutOfRange(band_limit));
        }
        static CACHE: OnceLock<Mutex<HashMap<usize, S2Grid>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(g) = cache.lock().unwrap().get(&band_limit) {
            return Ok(g.clone());
        }
        let grid = Self::build(band_limit);
        cache.lock().unwrap().entry(band_limit).or_insert_with(|| grid.clone());
        Ok(grid)
    }

    fn build(band_limit: usize) -> Self {
        let n_theta = 2 * (band_limit + 1);
        let n_phi = 4 * (band_limit + 1);
        let (nodes, gl_weights) = gauss_legendre(n_theta);
        let theta: Vec<f64> = nodes.iter().map(|x| x.clamp(-1.0, 1.0).acos()).collect();
        let cos_theta = nodes.clone();
        let sin_theta: Vec<f64> = nodes.iter().map(|x| (1.0 - x * x).max(0.0).sqrt()).collect();
        let phi = (0..n_phi).map(|j| 2.0 * PI * j as f64 / n_phi as f64).collect();
        let tables = (band_limit <= TABLE_CACHE_LIMIT).then(|| {
            (0..n_theta).map(|i| ring_tables(band_limit, cos_theta[i], sin_theta[i])).collect()
        });
        let mut planner = FftPlanner::new();
        let fft_forward = planner.plan_fft_forward(n_phi);
        let fft_inverse = planner.plan_fft_inverse(n_phi);
        Self {
            inner: Arc::new(GridData {
                band_limit,
                n_theta,
                n_phi,
                theta,
                cos_theta,
                sin_theta,
                gl_weights,
                phi,
                tables,
                fft_forward,
                fft_inverse,
            }),
        }
    }

    pub fn band_limit(&self) -> usize {
        self.inner.band_limit
    }

    pub fn n_theta(&self) -> usize {
        self.inner.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.inner.n_phi
    }

    /// Total node count `n_θ · n_φ`.
    pub fn len(&self) -> usize {
        self.inner.n_theta * self.inner.n_phi
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn theta(&self, i: usize) -> f64 {
        self.inner.theta[i]
    }

    pub fn sin_theta(&self, i: usize) -> f64 {
        self.inner.sin_theta[i]
    }

    pub fn cos_theta(&self, i: usize) -> f64 {
        self.inner.cos_theta[i]
    }

    pub fn phi(&self, j: usize) -> f64 {
        self.inner.phi[j]
    }

    /// Gauss–Legendre weight of ring `i` (sums to 2).
    pub fn gl_weight(&self, i: usize) -> f64 {
        self.inner.gl_weights[i]
    }

    /// Quadrature weight of every node on ring `i`.
    pub fn ring_weight(&self, i: usize) -> f64 {
        self.inner.gl_weights[i] * 2.0 * PI / self.inner.n_phi as f64
    }

    /// Quadrature weights for all nodes in storage order (ring-major).
    pub fn weights(&self) -> Vec<f64> {
        let mut w = Vec::with_capacity(self.len());
        for i in 0..self.inner.n_theta {
            let wi = self.ring_weight(i);
            w.extend(std::iter::repeat(wi).take(self.inner.n_phi));
        }
        w
    }

    #[inline]
    pub fn node_index(&self, i: usize, j: usize) -> usize {
        i * self.inner.n_phi + j
    }

    pub fn node(&self, i: usize, j: usize) -> [f64; 3] {
        direction(self.inner.theta[i], self.inner.phi[j])
    }

    /// Unit vectors of all nodes in storage order.
    pub fn nodes(&self) -> Vec<[f64; 3]> {
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.inner.n_theta {
            for j in 0..self.inner.n_phi {
                out.push(self.node(i, j));
            }
        }
        out
    }

    /// Quadrature of node values over the unit sphere.
    pub fn integrate(&self, values: &[f64]) -> Result<f64> {
        self.check_len(values)?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("field values"));
        }
        Ok(self.integrate_unchecked(values))
    }

    pub(crate) fn integrate_unchecked(&self, values: &[f64]) -> f64 {
        let n_phi = self.inner.n_phi;
        let mut total = 0.0;
        for i in 0..self.inner.n_theta {
            let ring: f64 = values[i * n_phi..(i + 1) * n_phi].iter().sum();
            total += self.ring_weight(i) * ring;
        }
        total
    }

    fn check_len(&self, values: &[f64]) -> Result<()> {
        if values.len() != self.len() {
            return Err(Error::InvalidInput(format!(
                "field has {} values, grid has {} nodes",
                values.len(),
                self.len()
            )));
        }
        Ok(())
    }

    fn check_coeffs(&self, c: &ShCoeffs) -> Result<()> {
        if c.band_limit() != self.inner.band_limit {
            return Err(Error::BandLimitMismatch {
                grid: self.inner.band_limit,
                coeffs: c.band_limit(),
            });
        }
        Ok(())
    }

    fn with_ring_tables<R>(&self, i: usize, f: impl FnOnce(&RingTables) -> R) -> R {
        match &self.inner.tables {
            Some(t) => f(&t[i]),
            None => {
                let t = ring_tables(self.inner.band_limit, self.inner.cos_theta[i], self.inner.sin_theta[i]);
                f(&t)
            }
        }
    }

    pub fn synthesize(&self, c: &ShCoeffs, kind: Derivative) -> Result<Vec<f64>> {
        Ok(self.synthesize_many(c, &[kind])?.pop().unwrap())
    }

    /// Synthesize several derivatives of the same coefficients in one pass.
    pub fn synthesize_many(&self, c: &ShCoeffs, kinds: &[Derivative]) -> Result<Vec<Vec<f64>>> {
        self.check_coeffs(c)?;
        let (lmax, n_phi) = (self.inner.band_limit, self.inner.n_phi);
        let mut out: Vec<Vec<f64>> = kinds.iter().map(|_| vec![0.0; self.len()]).collect();
        let mut spectrum = vec![Complex64::new(0.0, 0.0); n_phi];
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.inner.fft_inverse.get_inplace_scratch_len()];
        let a = c.as_slice();
        for i in 0..self.inner.n_theta {
            self.with_ring_tables(i, |t| {
                for (k, kind) in kinds.iter().enumerate() {
                    let (to, po) = kind.orders();
                    let table = match to {
                        0 => &t.value,
                        1 => &t.d1,
                        _ => &t.d2,
                    };
                    spectrum.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
                    for m in 0..=lmax {
                        let (mut cs, mut sn) = (0.0, 0.0);
                        for l in m..=lmax {
                            let p = table[tri(l, m)];
                            let base = l * l + l;
                            cs += a[base + m] * p;
                            if m > 0 {
                                sn += a[base - m] * p;
                            }
                        }
                        if m > 0 {
                            cs *= std::f64::consts::SQRT_2;
                            sn *= std::f64::consts::SQRT_2;
                        }
                        let mf = m as f64;
                        let (ce, se) = match po {
                            0 => (cs, sn),
                            1 => (mf * sn, -mf * cs),
                            _ => (-mf * mf * cs, -mf * mf * sn),
                        };
                        spectrum[m] = Complex64::new(ce, -se);
                    }
                    self.inner.fft_inverse.process_with_scratch(&mut spectrum, &mut scratch);
                    for (j, z) in spectrum.iter().enumerate() {
                        out[k][i * n_phi + j] = z.re;
                    }
                }
            });
        }
        Ok(out)
    }

    /// Transpose of synthesis: `Σ_nodes v · ∂Y_lm` for each basis function,
    /// summed over the given `(values, derivative)` pairs. No quadrature
    /// weights are applied.
    pub fn adjoint_synthesize(&self, inputs: &[(&[f64], Derivative)]) -> Result<ShCoeffs> {
        for (v, _) in inputs {
            self.check_len(v)?;
        }
        let (lmax, n_phi) = (self.inner.band_limit, self.inner.n_phi);
        let mut out = ShCoeffs::zeros(lmax);
        let mut spectra: Vec<Vec<Complex64>> =
            inputs.iter().map(|_| vec![Complex64::new(0.0, 0.0); n_phi]).collect();
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.inner.fft_forward.get_inplace_scratch_len()];
        let a = out.as_mut_slice();
        for i in 0..self.inner.n_theta {
            for (s, (v, _)) in spectra.iter_mut().zip(inputs) {
                for (z, x) in s.iter_mut().zip(&v[i * n_phi..(i + 1) * n_phi]) {
                    *z = Complex64::new(*x, 0.0);
                }
                self.inner.fft_forward.process_with_scratch(s, &mut scratch);
            }
            self.with_ring_tables(i, |t| {
                for (s, (_, kind)) in spectra.iter().zip(inputs) {
                    let (to, po) = kind.orders();
                    let table = match to {
                        0 => &t.value,
                        1 => &t.d1,
                        _ => &t.d2,
                    };
                    for m in 0..=lmax {
                        let cs = s[m].re;
                        let sn = -s[m].im;
                        let mf = m as f64;
                        let (pc, ps) = match po {
                            0 => (cs, sn),
                            1 => (-mf * sn, mf * cs),
                            _ => (-mf * mf * cs, -mf * mf * sn),
                        };
                        let norm = if m > 0 { std::f64::consts::SQRT_2 } else { 1.0 };
                        for l in m..=lmax {
                            let p = norm * table[tri(l, m)];
                            let base = l * l + l;
                            a[base + m] += p * pc;
                            if m > 0 {
                                a[base - m] += p * ps;
                            }
                        }
                    }
                }
            });
        }
        Ok(out)
    }

    /// Project node values onto the spherical-harmonic basis by quadrature.
    pub fn analyze(&self, values: &[f64]) -> Result<ShCoeffs> {
        self.check_len(values)?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("field values"));
        }
        let n_phi = self.inner.n_phi;
        let weighted: Vec<f64> = values
            .iter()
            .enumerate()
            .map(|(k, v)| v * self.ring_weight(k / n_phi))
            .collect();
        self.adjoint_synthesize(&[(&weighted, Derivative::Value)])
    }

    /// `(∂θ f, ∂φ f)` computed in coefficient space.
    pub fn partials(&self, values: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let c = self.analyze(values)?;
        let mut d = self.synthesize_many(&c, &[Derivative::Theta, Derivative::Phi])?;
        let dphi = d.pop().unwrap();
        let dtheta = d.pop().unwrap();
        Ok((dtheta, dphi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_counts_and_weights() {
        let g = S2Grid::new(2).unwrap();
        assert_eq!((g.n_theta(), g.n_phi()), (6, 12));
        let g = S2Grid::new(8).unwrap();
        let total: f64 = g.weights().iter().sum();
        assert!((total - 4.0 * PI).abs() < 1e-12 * 4.0 * PI);
        assert!(g.weights().iter().all(|w| *w > 0.0));
    }

    #[test]
    fn band_limit_bounds() {
        assert_eq!(S2Grid::new(300).unwrap_err(), Error::BandLimitOutOfRange(300));
        assert!(S2Grid::new(1).is_err());
        assert!(S2Grid::new(256).is_ok());
    }

    #[test]
    fn integrals_of_low_modes() {
        let g = S2Grid::new(8).unwrap();
        let one = vec![1.0; g.len()];
        assert!((g.integrate(&one).unwrap() - 4.0 * PI).abs() < 1e-12);
        let y20 = g.synthesize(&ShCoeffs::single_mode(8, 2, 0, 1.0).unwrap(), Derivative::Value).unwrap();
        assert!(g.integrate(&y20).unwrap().abs() < 1e-12);
        let sq: Vec<f64> = y20.iter().map(|v| v * v).collect();
        assert!((g.integrate(&sq).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn round_trip_single_mode() {
        let g = S2Grid::new(8).unwrap();
        let c = ShCoeffs::single_mode(8, 2, 0, 1.0).unwrap();
        let back = g.analyze(&g.synthesize(&c, Derivative::Value).unwrap()).unwrap();
        assert!(back.max_abs_diff(&c) < 1e-10);
        let zero = g.analyze(&vec![0.0; g.len()]).unwrap();
        assert!(zero.as_slice().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn mismatch_and_non_finite() {
        let g = S2Grid::new(8).unwrap();
        let c = ShCoeffs::zeros(6);
        assert_eq!(
            g.synthesize(&c, Derivative::Value).unwrap_err(),
            Error::BandLimitMismatch { grid: 8, coeffs: 6 }
        );
        let mut v = vec![0.0; g.len()];
        v[3] = f64::NAN;
        assert!(matches!(g.integrate(&v), Err(Error::NonFinite(_))));
    }

    #[test]
    fn partials_of_cos_theta() {
        let g = S2Grid::new(8).unwrap();
        let f: Vec<f64> = (0..g.len()).map(|k| g.cos_theta(k / g.n_phi())).collect();
        let (dt, dp) = g.partials(&f).unwrap();
        for k in 0..g.len() {
            assert!((dt[k] + g.sin_theta(k / g.n_phi())).abs() < 1e-10);
            assert!(dp[k].abs() < 1e-10);
        }
        let (dt, dp) = g.partials(&vec![1.0; g.len()]).unwrap();
        assert!(dt.iter().chain(&dp).all(|v| v.abs() < 1e-12));
    }
}
