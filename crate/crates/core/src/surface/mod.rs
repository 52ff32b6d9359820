//! Closed surfaces: radial graphs over the sphere with spectrally exact
//! curvature, triangle meshes for ingestion diagnostics, and the geometric
//! functionals built on them.

mod balls;
mod curvature;
mod distance;
mod functionals;
mod mesh;
mod normalize;
mod radial;
mod report;

pub use balls::{detect_ball_configuration, BallUnion, DEFAULT_CMC_THRESHOLD};
pub use curvature::{curvature_fields, CurvatureFields};
pub use distance::DistanceField;
pub use functionals::{canham_helfrich, cmc_deficit, j_epsilon, CmcDeficit};
pub use mesh::{mesh_curvatures, mesh_report, MeshCurvatures, TriMesh};
pub use radial::RadialSurface;
pub use report::{report, report_on, GeometricReport};

/// Volume of the unit ball.
pub const UNIT_BALL_VOLUME: f64 = 4.0 * std::f64::consts::PI / 3.0;

#[inline]
pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

#[inline]
pub(crate) fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub(crate) fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub(crate) fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub(crate) fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// Unit tangent pair `(t1, t2)` at the unit vector `y`, with `t1 × t2 = y`.
pub(crate) fn tangent_frame(y: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let e = if y[0].abs() < 0.6 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let t1 = cross(e, y);
    let t1 = scale(t1, 1.0 / norm(t1));
    let t2 = cross(y, t1);
    (t1, t2)
}
