//! Maximax minimax quotient over polytopes.
//!
//! For a segment `X` and a polytope `Y` with `−X` inside the interior of `Y`,
//! [`quotient::quotient`] evaluates
//! `r(d) = max{‖x+y‖ : x+y ∈ ℝ⁺d} / min_x max_y{‖x+y‖ : x+y ∈ ℝ⁺d}`,
//! [`quotient::argmax_direction`] returns its maximizer over unit directions
//! (one of `±x2/‖x2‖`), [`sweep`] samples `r` around the plane of `X` and
//! checks the structure of the profile, and [`verify`] runs randomized
//! campaigns against brute-force oracles.

pub mod error;
pub mod examples;
pub mod instance;
pub mod lp2d;
pub mod polytope;
pub mod quotient;
pub mod ray;
pub mod sweep;
pub mod tol;
pub mod vector;
pub mod verify;

pub use error::{Error, Result};
pub use polytope::{validate_instance, HalfSpace, Polytope, Segment, ValidationReport};
pub use quotient::{argmax_direction, quotient, QuotientValue};
pub use sweep::{analyze_profile, sweep_profile, PlaneEmbedding, SweepProfile};
pub use vector::Vector;
