use serde::Serialize;

use crate::error::{Error, Result};

use super::report::report_from_fields;
use super::{curvature_fields, report, RadialSurface, UNIT_BALL_VOLUME};

/// Relative volume tolerance for treating a surface as normalized.
const NORMALIZED_TOL: f64 = 1e-8;

/// `∫(H − H̄)² − ε P`, defined on volume-normalized surfaces.
pub fn j_epsilon(s: &RadialSurface, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidInput(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let r = report(s)?;
    if ((r.volume - UNIT_BALL_VOLUME) / UNIT_BALL_VOLUME).abs() > NORMALIZED_TOL {
        return Err(Error::NotNormalized { volume: r.volume, expected: UNIT_BALL_VOLUME });
    }
    Ok(r.osc - epsilon * r.perimeter)
}

/// Reference curvature `H⁰ = 2P/(3|E|)` and the deficit `sup |H/H⁰ − 1|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CmcDeficit {
    pub h0: f64,
    pub delta: f64,
}

pub fn cmc_deficit(s: &RadialSurface) -> Result<CmcDeficit> {
    let cf = curvature_fields(s, &s.grid()?)?;
    let r = report_from_fields(s, &cf);
    let h0 = 2.0 * r.perimeter / (3.0 * r.volume);
    let delta = cf.mean.iter().map(|h| (h / h0 - 1.0).abs()).fold(0.0, f64::max);
    Ok(CmcDeficit { h0, delta })
}

/// `¼∫(H − c₀)²` for spontaneous curvature `c₀`.
pub fn canham_helfrich(s: &RadialSurface, c0: f64) -> Result<f64> {
    let cf = curvature_fields(s, &s.grid()?)?;
    let f: Vec<f64> = cf.mean.iter().map(|h| (h - c0) * (h - c0)).collect();
    Ok(0.25 * cf.integrate_area(&f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ball_values() {
        let b = RadialSurface::unit_sphere(16);
        assert!((j_epsilon(&b, 0.1).unwrap() + 0.4 * PI).abs() < 1e-9);
        assert!(j_epsilon(&b, 1e-12).unwrap().abs() < 1e-9);
        let d = cmc_deficit(&RadialSurface::sphere([0.0; 3], 0.5, 8)).unwrap();
        assert!((d.h0 - 4.0).abs() < 1e-10 && d.delta < 1e-10);
        assert!((canham_helfrich(&b, 0.0).unwrap() - 4.0 * PI).abs() < 1e-9);
        assert!(canham_helfrich(&b, 2.0).unwrap().abs() < 1e-9);
    }

    #[test]
    fn rejects_unnormalized() {
        let b = RadialSurface::sphere([0.0; 3], 2.0, 8);
        assert!(matches!(j_epsilon(&b, 0.1), Err(Error::NotNormalized { .. })));
        assert!(j_epsilon(&RadialSurface::unit_sphere(8), 1.5).is_err());
    }
}
