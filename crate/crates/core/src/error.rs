use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("band limit out of range: {0} (expected 2..=256)")]
    BandLimitOutOfRange(usize),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("band limit mismatch: grid has {grid}, coefficients have {coeffs}")]
    BandLimitMismatch { grid: usize, coeffs: usize },
    #[error("degree range [{l_min}, {l_max}] includes l < 2 without override")]
    LowModes { l_min: usize, l_max: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("surface is not star-shaped (1 + w = {value:.3e} at node {node})")]
    NotStarShaped { node: usize, value: f64 },
    #[error("degenerate metric (det g = {det:.3e} at node {node})")]
    DegenerateMetric { node: usize, det: f64 },
    #[error("surface is not volume-normalized (|E| = {volume}, expected {expected})")]
    NotNormalized { volume: f64, expected: f64 },
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("component {index} has cmc deficit {deficit:.3e} above threshold {threshold:.3e}")]
    NotNearBall { index: usize, deficit: f64, threshold: f64 },
    #[error("components overlap or violate separation margin: {0}")]
    Separation(String),
    #[error("no admissible samples in sweep")]
    NoAdmissibleSamples,
    #[error("centers differ between surfaces")]
    CenterMismatch,
    #[error("optimizer did not converge after {iterations} iterations (gradient {gradient:.3e})")]
    NonConvergence { iterations: usize, gradient: f64 },
    #[error("step rejected: {0}")]
    StepRejected(String),
    #[error("observable not positive on the fitting window")]
    NonPositiveObservable,
    #[error("right-hand side has nonzero mean {mean:.3e}")]
    NonZeroMean { mean: f64 },
    #[error("occupancy masses differ: {0:.3e} vs {1:.3e}")]
    MassMismatch(f64, f64),
    #[error("geometry exceeds the torus fundamental domain")]
    OutsideDomain,
    #[error("components collide (gap {gap:.3e} below {limit:.3e})")]
    Collision { gap: f64, limit: f64 },
    #[error("trace too short: {0} entries")]
    TraceTooShort(usize),
}

impl Error {
    /// True for failures of a numerical procedure (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::StepRejected(_)
                | Error::DegenerateMetric { .. }
                | Error::NotStarShaped { .. }
                | Error::Collision { .. }
                | Error::MassMismatch(..)
                | Error::NonZeroMean { .. }
        )
    }
}
