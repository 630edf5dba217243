//! Isocapacitary masses of rotationally symmetric Riemannian 3-manifolds.
//!
//! The crate computes, for a metric `g = dρ² + a(ρ)² g_S²` (or its areal
//! form `f(r)⁻¹dr² + r² g_S²`), the geometry of centered spheres, normalized
//! p-capacities, the quasilocal iso-p-capacitary and isoperimetric masses,
//! Hawking masses along the weak inverse mean curvature flow, and a family
//! of numerical checks relating them.

pub mod capacity;
pub mod error;
pub mod flow;
pub mod geometry;
pub mod masses;
pub mod numerics;
pub mod profile;
pub mod specfun;

pub use error::{Error, Result};
pub use numerics::ToleranceConfig;
