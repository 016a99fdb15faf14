//! Rotation-minimizing frames and rectifying-type curves in R^n.
//!
//! The crate computes moving frames along sampled or analytic curves
//! ([`framing`]), constructs and checks rectifying-type curves from RM
//! curvatures ([`rectifying`]) and classifies curves by several geometric
//! criteria ([`classify`]).

pub mod batch;
pub mod builtin;
pub mod circular_helix;
pub mod classify;
pub mod config;
pub mod curve;
pub mod error;
pub mod framing;
pub mod io;
pub mod numeric;
pub mod rectifying;
pub mod vector;

pub use config::ToleranceConfig;
pub use curve::{arclength_reparam, derivative, Curve};
pub use error::{Error, ErrorKind, Result};
pub use framing::{CurvatureField, Frame, FrameField};
pub use vector::{inner, norm, VectorN};
