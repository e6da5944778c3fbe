//! Estimation, classification and verification.
pub mod classify;
pub mod estimate;
pub mod spherical;
pub mod tolerances;
pub mod verify;

pub use classify::{classify, ClassificationReport, Verdict};
pub use estimate::{estimate_apparatus, estimate_apparatus_with, EstimatedApparatus};
pub use spherical::{left_shift_sphere_fit, spherical_check, SphereFit, SphericalCheck};
pub use tolerances::ToleranceSet;
pub use verify::{Status, TheoremId, VerificationReport, Verifier, VerifyMode};
