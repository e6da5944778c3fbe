//! Reconstruction, mates and classification of Frenet curves in
//! three-dimensional Lie groups with a bi-invariant metric.
//!
//! The supported groups are the commutative group ℝ³, SO(3) and S³. All three
//! share one description: a Lie bracket `[u, v] = λ (u × v)` on an orthonormal
//! basis of the Lie algebra, with Lie group torsion `τ_G = λ / 2`.
//!
//! Module map:
//!
//! - [`lie_algebra`]: bracket, covariant derivative, frames, group elements, left shift
//! - [`expression`]: parser / evaluator / symbolic differentiator for `κ(s)`, `τ(s)`
//! - [`profile`]: curvature profiles and the derived apparatus (H, σ, ω, Darboux vectors)
//! - [`integrator`]: RK4 frame and position reconstruction, direction curves
//! - [`mates`]: analytic natural and conjugate mates
//! - [`analysis`]: finite-difference estimation, classification and verification

pub mod analysis;
pub mod error;
pub mod expression;
pub mod integrator;
pub mod lie_algebra;
pub mod mates;
pub mod profile;

pub use error::{Error, Result};
pub use expression::Expr;
pub use integrator::{FrameTrajectory, SampledCurve};
pub use lie_algebra::{AlgebraVector, Frame, GroupElement, GroupFamily, GroupSpec};
pub use mates::{MateApparatus, MateKind};
pub use profile::{CurvatureProfile, ScalarFn};
