//! Run configurations. Each command starts from its defaults, overlays an
//! optional JSON file and then the flags given on the command line.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use curvflow::s2core::{random_band_limited, RandomModes};
use curvflow::surface::RadialSurface;

use crate::{CliError, Result};

pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn snapshot<T: Serialize>(config: &T) -> serde_json::Value {
    serde_json::to_value(config).expect("configs serialize to JSON")
}

/// How an initial surface is described on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum InitSpec {
    Sphere,
    /// `mode:l,m:amplitude`
    Mode { l: usize, m: i64, amplitude: f64 },
    /// `random:seed:l_min:l_max:amplitude`
    Random { seed: u64, l_min: usize, l_max: usize, amplitude: f64 },
    /// `balls:count:gap`, equal balls along the first axis.
    Balls { count: usize, gap: f64 },
}

impl InitSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || CliError::Config(format!("unrecognized initial condition '{text}'"));
        let parts: Vec<&str> = text.split(':').collect();
        let num = |s: &str| -> Result<f64> { s.trim().parse().map_err(|_| bad()) };
        let int = |s: &str| -> Result<usize> { s.trim().parse().map_err(|_| bad()) };
        match parts.as_slice() {
            ["sphere"] => Ok(InitSpec::Sphere),
            ["mode", lm, amp] => {
                let (l, m) = parse_mode(lm).map_err(|_| bad())?;
                Ok(InitSpec::Mode { l, m, amplitude: num(amp)? })
            }
            ["random", seed, lo, hi, amp] => Ok(InitSpec::Random {
                seed: seed.trim().parse().map_err(|_| bad())?,
                l_min: int(lo)?,
                l_max: int(hi)?,
                amplitude: num(amp)?,
            }),
            ["balls", count, gap] => Ok(InitSpec::Balls { count: int(count)?, gap: num(gap)? }),
            _ => Err(bad()),
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            InitSpec::Random { seed, .. } => Some(*seed),
            _ => None,
        }
    }

    /// A single surface centered at the origin.
    pub fn surface(&self, band_limit: usize) -> Result<RadialSurface> {
        Ok(match *self {
            InitSpec::Sphere => RadialSurface::unit_sphere(band_limit),
            InitSpec::Mode { l, m, amplitude } => RadialSurface::from_mode(band_limit, l, m, amplitude)?,
            InitSpec::Random { seed, l_min, l_max, amplitude } => RadialSurface::new(
                [0.0; 3],
                random_band_limited(seed, RandomModes::new(l_min, l_max, amplitude), band_limit)?,
            ),
            InitSpec::Balls { .. } => {
                return Err(CliError::Config("ball configurations need a multi-component command".into()))
            }
        })
    }

    /// Components of total volume `radius³·4π/3`, centered at `center`.
    pub fn components(&self, band_limit: usize, radius: f64, center: [f64; 3]) -> Result<Vec<RadialSurface>> {
        match *self {
            InitSpec::Balls { count, gap } => {
                if count == 0 || !(gap > 0.0) {
                    return Err(CliError::Config("ball configurations need count ≥ 1 and a positive gap".into()));
                }
                let r = radius / (count as f64).cbrt();
                let pitch = 2.0 * r + gap;
                let first = center[0] - 0.5 * pitch * (count - 1) as f64;
                Ok((0..count)
                    .map(|i| RadialSurface::sphere([first + pitch * i as f64, center[1], center[2]], r, band_limit))
                    .collect())
            }
            _ => Ok(vec![self.surface(band_limit)?.scaled(radius).translated(center)]),
        }
    }
}

/// `l,m` as in `--mode 2,0`.
pub fn parse_mode(text: &str) -> std::result::Result<(usize, i64), String> {
    let (l, m) = text.split_once(',').ok_or_else(|| format!("expected 'l,m', got '{text}'"))?;
    let l = l.trim().parse().map_err(|_| format!("invalid degree '{l}'"))?;
    let m = m.trim().parse().map_err(|_| format!("invalid order '{m}'"))?;
    Ok((l, m))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeomConfig {
    pub init: String,
    pub band_limit: usize,
    pub normalize: bool,
}

impl Default for GeomConfig {
    fn default() -> Self {
        Self { init: "mode:2,0:0.1".into(), band_limit: 16, normalize: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MeshConfig {
    /// `icosphere`, `torus` or `file`.
    pub kind: String,
    pub input: Option<PathBuf>,
    pub subdivisions: usize,
    pub major: f64,
    pub minor: f64,
    pub n_major: usize,
    pub n_minor: usize,
}

impl Default for MeshConfig {
    fn default() -> Self {
        Self { kind: "icosphere".into(), input: None, subdivisions: 4, major: 2.0, minor: 0.5, n_major: 48, n_minor: 24 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub n_samples: usize,
    pub seed: u64,
    pub l_min: usize,
    pub l_max: usize,
    pub amplitude: f64,
    pub delta0: f64,
    pub band_limit: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let d = curvflow::alexandrov::SweepConfig::default();
        Self {
            n_samples: d.n_samples,
            seed: d.seed,
            l_min: d.l_min,
            l_max: d.l_max,
            amplitude: d.amplitude,
            delta0: d.delta0,
            band_limit: d.band_limit,
        }
    }
}

impl From<&SweepConfig> for curvflow::alexandrov::SweepConfig {
    fn from(c: &SweepConfig) -> Self {
        Self {
            n_samples: c.n_samples,
            seed: c.seed,
            l_min: c.l_min,
            l_max: c.l_max,
            amplitude: c.amplitude,
            delta0: c.delta0,
            band_limit: c.band_limit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SharpnessConfig {
    pub l: usize,
    pub m: i64,
    pub amplitudes: Vec<f64>,
    pub p: f64,
    pub band_limit: usize,
}

impl Default for SharpnessConfig {
    fn default() -> Self {
        Self { l: 2, m: 0, amplitudes: vec![0.10, 0.05, 0.025], p: 1.25, band_limit: 16 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VpmcfConfig {
    pub init: String,
    pub normalize: bool,
    pub h: f64,
    pub t_final: f64,
    /// `mm` or `direct`.
    pub scheme: String,
    pub band_limit: usize,
    pub gradient_tol: f64,
    pub max_iterations: usize,
    pub volume_tol: f64,
    pub ledger_tol: f64,
}

impl Default for VpmcfConfig {
    fn default() -> Self {
        let mm = curvflow::vpmcf::MmConfig::default();
        Self {
            init: "mode:2,0:0.1".into(),
            normalize: true,
            h: mm.h,
            t_final: 3.0,
            scheme: "mm".into(),
            band_limit: mm.band_limit,
            gradient_tol: mm.gradient_tol,
            max_iterations: mm.max_iterations,
            volume_tol: mm.volume_tol,
            ledger_tol: 1e-8,
        }
    }
}

impl VpmcfConfig {
    pub fn mm(&self) -> curvflow::vpmcf::MmConfig {
        curvflow::vpmcf::MmConfig {
            h: self.h,
            band_limit: self.band_limit,
            gradient_tol: self.gradient_tol,
            max_iterations: self.max_iterations,
            volume_tol: self.volume_tol,
        }
    }

    pub fn scheme(&self) -> Result<curvflow::vpmcf::Scheme> {
        match self.scheme.as_str() {
            "mm" => Ok(curvflow::vpmcf::Scheme::Mm),
            "direct" => Ok(curvflow::vpmcf::Scheme::Direct),
            other => Err(CliError::Config(format!("unknown scheme '{other}' (expected mm or direct)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MsRunConfig {
    pub init: String,
    /// Radius of the ball whose volume the initial data carries.
    pub radius: f64,
    pub side: f64,
    pub resolution: usize,
    pub h: f64,
    pub t_final: f64,
    pub band_limit: usize,
    pub tolerance: f64,
    pub relative_tolerance: f64,
    pub max_iterations: usize,
    pub comparison_tol: f64,
    pub ledger_tol: f64,
    pub density_radii: Vec<f64>,
}

impl Default for MsRunConfig {
    fn default() -> Self {
        let ms = curvflow::mullins::MsConfig::default();
        Self {
            init: "mode:2,0:0.1".into(),
            radius: 1.0,
            side: 8.0,
            resolution: 128,
            h: ms.h,
            t_final: 2.0,
            band_limit: ms.band_limit,
            tolerance: ms.tolerance,
            relative_tolerance: ms.relative_tolerance,
            max_iterations: ms.max_iterations,
            comparison_tol: ms.comparison_tol,
            ledger_tol: 1e-6,
            density_radii: vec![0.1, 0.25, 0.5],
        }
    }
}

impl MsRunConfig {
    pub fn ms(&self) -> curvflow::mullins::MsConfig {
        curvflow::mullins::MsConfig {
            h: self.h,
            band_limit: self.band_limit,
            tolerance: self.tolerance,
            relative_tolerance: self.relative_tolerance,
            max_iterations: self.max_iterations,
            comparison_tol: self.comparison_tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitConfig {
    pub input: Option<PathBuf>,
    /// `perimeter_deficit` or the name of a trace column.
    pub observable: String,
    /// Component count entering the deficit.
    pub balls: usize,
    /// `trailing_half` or `all`.
    pub window: String,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self { input: None, observable: "perimeter_deficit".into(), balls: 1, window: "trailing_half".into() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_specs() {
        assert_eq!(InitSpec::parse("mode:2,0:0.1").unwrap(), InitSpec::Mode { l: 2, m: 0, amplitude: 0.1 });
        assert_eq!(
            InitSpec::parse("random:7:2:4:0.1").unwrap(),
            InitSpec::Random { seed: 7, l_min: 2, l_max: 4, amplitude: 0.1 }
        );
        assert_eq!(InitSpec::parse("balls:2:0.6").unwrap(), InitSpec::Balls { count: 2, gap: 0.6 });
        assert!(InitSpec::parse("cube").is_err());
        assert!(InitSpec::parse("mode:2:0.1").is_err());
    }

    #[test]
    fn balls_share_the_volume() {
        let comps = InitSpec::Balls { count: 2, gap: 0.6 }.components(8, 1.0, [4.0; 3]).unwrap();
        let r = 0.5f64.cbrt();
        assert!((comps[1].center[0] - comps[0].center[0] - (2.0 * r + 0.6)).abs() < 1e-12);
        assert!((comps[0].center[0] + comps[1].center[0] - 8.0).abs() < 1e-12);
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        assert!(serde_json::from_str::<VpmcfConfig>(r#"{"h": 0.02}"#).is_ok());
        assert!(serde_json::from_str::<VpmcfConfig>(r#"{"step": 0.02}"#).is_err());
    }
}
