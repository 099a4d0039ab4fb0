//! Ray exits from a polytope.
//!
//! `λ*(x, d)` is the exit parameter of the ray from `−x` along `d`: the point
//! `y = λd − x` stays in `Y` exactly while `x + y ∈ ℝ⁺d` has length `λ`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polytope::Polytope;
use crate::tol;
use crate::vector::Vector;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RayExit {
    pub lambda: f64,
    pub point: Vector,
    /// Half-space indices attaining the exit, in index order.
    pub active_faces: BTreeSet<usize>,
}

fn check_direction(d: &Vector) -> Result<()> {
    let n = d.norm();
    if n <= f64::MIN_POSITIVE {
        return Err(Error::ZeroDirection);
    }
    if (n - 1.0).abs() > tol::MEMBERSHIP {
        return Err(Error::NonUnitDirection(n));
    }
    Ok(())
}

/// Largest `λ ≥ 0` with `origin + λ·direction ∈ P`.
pub fn ray_exit(p: &Polytope, origin: &Vector, direction: &Vector) -> Result<RayExit> {
    if origin.dim() != p.dim() || direction.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: if origin.dim() != p.dim() { origin.dim() } else { direction.dim() },
        });
    }
    check_direction(direction)?;
    if !p.contains(origin, false, tol::MEMBERSHIP) {
        return Err(Error::OriginOutside);
    }
    let candidates: Vec<(usize, f64)> = p
        .halfspaces()
        .iter()
        .enumerate()
        .filter_map(|(i, h)| {
            let rate = h.normal().dot(direction);
            (rate > tol::DIRECTION).then(|| (i, (h.slack(origin) / rate).max(0.0)))
        })
        .collect();
    let lambda = candidates
        .iter()
        .map(|&(_, l)| l)
        .fold(f64::INFINITY, f64::min);
    if !lambda.is_finite() {
        return Err(Error::NoExit);
    }
    let active_faces = candidates
        .iter()
        .filter(|&&(_, l)| l - lambda <= tol::ACTIVE_FACE)
        .map(|&(i, _)| i)
        .collect();
    Ok(RayExit {
        lambda,
        point: origin.axpy(lambda, direction),
        active_faces,
    })
}

/// `λ*(x, d)`: exit parameter of the ray from `−x` along `d`.
pub fn lambda_star(x: &Vector, d: &Vector, y: &Polytope) -> Result<f64> {
    ray_exit(y, &-x, d).map(|e| e.lambda)
}

/// `y*(x, d) = λ*(x, d)·d − x`, the unique maximizer on `∂Y`.
pub fn y_star(x: &Vector, d: &Vector, y: &Polytope) -> Result<Vector> {
    ray_exit(y, &-x, d).map(|e| e.point)
}

/// `D(d)`: distance from the origin to `∂Y` along `d`, when `0 ∈ Y`.
pub fn big_d(d: &Vector, y: &Polytope) -> Option<f64> {
    let origin = Vector::zeros(y.dim());
    if !y.contains(&origin, false, tol::MEMBERSHIP) {
        return None;
    }
    ray_exit(y, &origin, d).ok().map(|e| e.lambda)
}
