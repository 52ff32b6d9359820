//! Minimizing-movement schemes for the volume-preserving mean curvature flow
//! and the Mullins–Sekerka flow, together with the geometric measurements
//! used to study their long-time behaviour near unions of balls.

pub mod alexandrov;
pub mod error;
pub mod mullins;
pub mod quadrature;
pub mod s2core;
pub mod surface;
pub mod vpmcf;

pub use error::{Error, Result};
