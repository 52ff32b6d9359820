//! Gauss–Legendre grids on the sphere, real spherical-harmonic transforms
//! and the derivative operators built on them.

mod coeffs;
mod field;
mod grid;
pub(crate) mod legendre;
mod point;
mod random;

pub use coeffs::ShCoeffs;
pub use field::ScalarField;
pub use grid::{Derivative, S2Grid};
pub use point::PointJet;
pub use random::{random_band_limited, RandomModes};

/// Unit vector for colatitude `theta` and longitude `phi`.
#[inline]
pub fn direction(theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}
