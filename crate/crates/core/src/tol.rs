//! Tolerances shared across the crate.
//!
//! Normals and directions are unit length, so every tolerance below is an
//! absolute distance on O(1)–O(10) coordinates.

/// Membership slack for non-strict containment.
pub const MEMBERSHIP: f64 = 1e-9;
/// Required slack for strict-interior tests.
pub const STRICT_MARGIN: f64 = 1e-9;
/// Deduplication radius for enumerated vertices.
pub const DEDUP: f64 = 1e-9;
/// `⟨a, d⟩` below this never binds a ray.
pub const DIRECTION: f64 = 1e-12;
/// Near-parallel threshold on the cross product of unit normals.
pub const PARALLEL: f64 = 1e-12;
/// Exit-parameter ties when collecting active faces.
pub const ACTIVE_FACE: f64 = 1e-9;
/// Relative tie threshold between the two endpoint exits of the denominator.
pub const ENDPOINT_TIE: f64 = 1e-12;
/// Relative tie threshold between the two candidate directions of the argmax.
pub const ARGMAX_TIE: f64 = 1e-9;
/// Structural claims checked at sweep or grid level.
pub const SWEEP: f64 = 1e-6;
