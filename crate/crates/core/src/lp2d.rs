//! Linear programs in two variables, solved by exhaustive candidate
//! enumeration.
//!
//! Every optimum of a bounded, feasible 2-variable LP sits at an
//! intersection of two constraint lines, or (when all constraint normals are
//! parallel) anywhere on a binding line, so enumerating pairwise
//! intersections plus one foot point per line is complete. Output is a pure
//! function of the input, bit for bit.

use serde::Serialize;
use thiserror::Error;

use crate::tol;
use crate::vector::cross2;

pub const MAX_CONSTRAINTS: usize = 10_000;

/// Feasibility slack on normalized constraints.
const FEASIBLE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("too many constraints: {0} > {MAX_CONSTRAINTS}")]
    TooManyConstraints(usize),
    #[error("constraint {0} has a zero or non-finite normal")]
    DegenerateConstraint(usize),
    #[error("objective is zero or non-finite")]
    DegenerateObjective,
}

/// `p·u + q·v ≤ r` with `(p, q)` of unit length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constraint {
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

/// Maximize `c_u·u + c_v·v` subject to a list of constraints.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearProgram2 {
    objective: (f64, f64),
    constraints: Vec<Constraint>,
}

impl LinearProgram2 {
    pub fn new(objective: (f64, f64)) -> Self {
        LinearProgram2 {
            objective,
            constraints: Vec::new(),
        }
    }

    /// Adds `p·u + q·v ≤ r`, normalizing `(p, q)`. A zero normal is kept as
    /// is and rejected by [`solve_lp2d`].
    pub fn constrain(&mut self, p: f64, q: f64, r: f64) -> &mut Self {
        let n = p.hypot(q);
        let c = if n > 0.0 && n.is_finite() {
            Constraint { p: p / n, q: q / n, r: r / n }
        } else {
            Constraint { p, q, r }
        };
        self.constraints.push(c);
        self
    }

    pub fn with(mut self, p: f64, q: f64, r: f64) -> Self {
        self.constrain(p, q, r);
        self
    }

    pub fn objective(&self) -> (f64, f64) {
        self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn is_feasible_point(&self, u: f64, v: f64, tol: f64) -> bool {
        self.constraints
            .iter()
            .all(|c| c.p * u + c.q * v <= c.r + tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpResult {
    pub status: LpStatus,
    pub point: Option<(f64, f64)>,
    pub value: Option<f64>,
}

impl LpResult {
    fn without_point(status: LpStatus) -> Self {
        LpResult {
            status,
            point: None,
            value: None,
        }
    }
}

pub fn solve_lp2d(lp: &LinearProgram2) -> Result<LpResult, LpError> {
    let cs = &lp.constraints;
    if cs.len() > MAX_CONSTRAINTS {
        return Err(LpError::TooManyConstraints(cs.len()));
    }
    for (i, c) in cs.iter().enumerate() {
        let n = c.p.hypot(c.q);
        if !(n > 0.5 && n.is_finite() && c.r.is_finite()) {
            return Err(LpError::DegenerateConstraint(i));
        }
    }
    let (cu, cv) = lp.objective;
    if !(cu.is_finite() && cv.is_finite()) || cu.hypot(cv) == 0.0 {
        return Err(LpError::DegenerateObjective);
    }
    if cs.is_empty() {
        return Ok(LpResult::without_point(LpStatus::Unbounded));
    }

    let feasible = |u: f64, v: f64| cs.iter().all(|c| c.p * u + c.q * v <= c.r + FEASIBLE);
    let mut candidates: Vec<(f64, f64)> = Vec::new();
    for i in 0..cs.len() {
        for j in (i + 1)..cs.len() {
            let (a, b) = (cs[i], cs[j]);
            let det = cross2((a.p, a.q), (b.p, b.q));
            if det.abs() < tol::PARALLEL {
                continue;
            }
            let u = (a.r * b.q - b.r * a.q) / det;
            let v = (a.p * b.r - b.p * a.r) / det;
            if feasible(u, v) {
                candidates.push((u, v));
            }
        }
    }
    for c in cs {
        let (u, v) = (c.p * c.r, c.q * c.r);
        if feasible(u, v) {
            candidates.push((u, v));
        }
    }
    if candidates.is_empty() {
        return Ok(LpResult::without_point(LpStatus::Infeasible));
    }

    // Unbounded iff some direction improving the objective lies in the
    // recession cone; the cone's extreme rays run along constraint lines.
    let in_cone = |w: (f64, f64)| cs.iter().all(|c| c.p * w.0 + c.q * w.1 <= tol::DIRECTION);
    let improves = |w: (f64, f64)| cu * w.0 + cv * w.1 > tol::DIRECTION;
    let mut rays = vec![(cu, cv)];
    for c in cs {
        rays.push((-c.q, c.p));
        rays.push((c.q, -c.p));
    }
    if rays.into_iter().any(|w| improves(w) && in_cone(w)) {
        return Ok(LpResult::without_point(LpStatus::Unbounded));
    }

    let value = |p: &(f64, f64)| cu * p.0 + cv * p.1;
    let best = candidates.iter().map(value).fold(f64::NEG_INFINITY, f64::max);
    let tie = 1e-12 * best.abs().max(1.0);
    let point = candidates
        .iter()
        .filter(|p| best - value(p) <= tie)
        .copied()
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)))
        .expect("nonempty candidate set");
    Ok(LpResult {
        status: LpStatus::Optimal,
        point: Some(point),
        value: Some(value(&point)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn box_lp(obj: (f64, f64)) -> LinearProgram2 {
        LinearProgram2::new(obj)
            .with(1.0, 0.0, 1.0)
            .with(-1.0, 0.0, 1.0)
            .with(0.0, 1.0, 1.0)
            .with(0.0, -1.0, 1.0)
    }

    #[test]
    fn box_optimum() {
        let r = solve_lp2d(&box_lp((1.0, 0.0))).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_eq!(r.value, Some(1.0));
        // tie along u = 1 resolves to the smallest v
        assert_eq!(r.point, Some((1.0, -1.0)));
    }

    #[test]
    fn corner_optimum() {
        let r = solve_lp2d(&box_lp((1.0, 1.0))).unwrap();
        assert_eq!(r.point, Some((1.0, 1.0)));
        assert_eq!(r.value, Some(2.0));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = LinearProgram2::new((1.0, 0.0)).with(1.0, 0.0, -1.0).with(-1.0, 0.0, -2.0);
        assert_eq!(solve_lp2d(&lp).unwrap().status, LpStatus::Infeasible);
        let lp = LinearProgram2::new((1.0, 0.0)).with(0.0, 1.0, 1.0).with(0.0, -1.0, 1.0);
        assert_eq!(solve_lp2d(&lp).unwrap().status, LpStatus::Unbounded);
        let lp = LinearProgram2::new((1.0, 0.0));
        assert_eq!(solve_lp2d(&lp).unwrap().status, LpStatus::Unbounded);
        // triangle that is empty
        let lp = LinearProgram2::new((0.0, 1.0))
            .with(-1.0, 0.0, 0.0)
            .with(0.0, -1.0, 0.0)
            .with(1.0, 1.0, -1.0);
        assert_eq!(solve_lp2d(&lp).unwrap().status, LpStatus::Infeasible);
        // wedge opening along the objective
        let lp = LinearProgram2::new((1.0, 0.0)).with(-1.0, 1.0, 0.0).with(-1.0, -1.0, 0.0);
        assert_eq!(solve_lp2d(&lp).unwrap().status, LpStatus::Unbounded);
        // same wedge, objective pointing back into the apex
        let lp = LinearProgram2::new((-1.0, 0.0)).with(-1.0, 1.0, 0.0).with(-1.0, -1.0, 0.0);
        let r = solve_lp2d(&lp).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_eq!(r.value, Some(0.0));
    }

    #[test]
    fn strip_with_parallel_objective() {
        let lp = LinearProgram2::new((0.0, 1.0)).with(0.0, 1.0, 1.0).with(0.0, -1.0, 1.0);
        let r = solve_lp2d(&lp).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_eq!(r.value, Some(1.0));
    }

    #[test]
    fn rejects_bad_input() {
        let lp = LinearProgram2::new((1.0, 0.0)).with(0.0, 0.0, 1.0);
        assert_eq!(solve_lp2d(&lp).unwrap_err(), LpError::DegenerateConstraint(0));
        assert_eq!(
            solve_lp2d(&LinearProgram2::new((0.0, 0.0)).with(1.0, 0.0, 1.0)).unwrap_err(),
            LpError::DegenerateObjective
        );
        let mut lp = LinearProgram2::new((1.0, 0.0));
        for _ in 0..=MAX_CONSTRAINTS {
            lp.constrain(1.0, 0.0, 1.0);
        }
        assert!(matches!(solve_lp2d(&lp), Err(LpError::TooManyConstraints(_))));
    }

    #[test]
    fn normalizes_constraints() {
        let lp = LinearProgram2::new((1.0, 0.0)).with(3.0, 4.0, 10.0);
        let c = lp.constraints()[0];
        assert!((c.p - 0.6).abs() < 1e-15 && (c.q - 0.8).abs() < 1e-15 && (c.r - 2.0).abs() < 1e-15);
    }
}
