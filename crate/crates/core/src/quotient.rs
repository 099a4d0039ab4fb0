//! The maximax minimax quotient
//!
//! ```text
//!            max { ‖x + y‖ : x ∈ X, y ∈ Y, x + y ∈ ℝ⁺d }
//! r(d) = ─────────────────────────────────────────────────
//!        min_{x ∈ X} max { ‖x + y‖ : y ∈ Y, x + y ∈ ℝ⁺d }
//! ```
//!
//! The numerator is a joint maximization over `(λ, t)`, where `x = x(t)` walks
//! the segment and `λ d − x(t) ∈ Y`; every face of `Y` is a linear constraint
//! in `(λ, t)`, so it is a 2-variable LP in any dimension. The inner
//! maximization of the denominator is a ray exit, and its minimum over `X`
//! sits at an endpoint, so the denominator is two ray exits.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp2d::{solve_lp2d, LinearProgram2, LpStatus};
use crate::polytope::{Polytope, Segment};
use crate::ray::{big_d, ray_exit};
use crate::tol;
use crate::vector::Vector;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Numerator {
    pub value: f64,
    pub t: f64,
    pub x: Vector,
    pub y: Vector,
    pub faces: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Denominator {
    pub value: f64,
    pub x: Vector,
    pub y: Vector,
    pub x_is_x1: bool,
    /// Both endpoints exit at the same parameter (within a relative 1e-12).
    pub tie: bool,
    pub faces: BTreeSet<usize>,
}

/// One evaluation of `r(d)` with its witnesses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuotientValue {
    pub d: Vector,
    pub n: f64,
    pub m: f64,
    pub r: f64,
    pub t_n: f64,
    pub x_n: Vector,
    pub y_n: Vector,
    pub x_m: Vector,
    pub y_m: Vector,
    pub x_m_is_x1: bool,
    pub m_tie: bool,
    pub big_d: Option<f64>,
    pub delta_n: Option<f64>,
    pub delta_m: Option<f64>,
    pub faces_n: BTreeSet<usize>,
    pub faces_m: BTreeSet<usize>,
    pub faces_d: Option<BTreeSet<usize>>,
}

fn check_instance(d: &Vector, x: &Segment, y: &Polytope) -> Result<()> {
    if x.dim() != y.dim() || d.dim() != y.dim() {
        return Err(Error::InvalidInstance("dimension mismatch".into()));
    }
    let n = d.norm();
    if n <= f64::MIN_POSITIVE {
        return Err(Error::ZeroDirection);
    }
    if (n - 1.0).abs() > tol::MEMBERSHIP {
        return Err(Error::NonUnitDirection(n));
    }
    for e in [x.x1(), x.x2()] {
        if !y.contains(&-e, true, tol::STRICT_MARGIN) {
            return Err(Error::InvalidInstance("−X is not inside the interior of Y".into()));
        }
    }
    Ok(())
}

fn exit_from(x: &Vector, d: &Vector, y: &Polytope) -> Result<(f64, Vector, BTreeSet<usize>)> {
    let e = ray_exit(y, &-x, d)?;
    Ok((e.lambda, e.point, e.active_faces))
}

pub fn numerator(d: &Vector, x: &Segment, y: &Polytope) -> Result<Numerator> {
    check_instance(d, x, y)?;
    let dir = x.direction();
    let mut lp = LinearProgram2::new((1.0, 0.0));
    for h in y.halfspaces() {
        let a = h.normal();
        let (p, q) = (a.dot(d), -a.dot(&dir));
        if p.hypot(q) <= tol::PARALLEL {
            continue;
        }
        lp.constrain(p, q, h.offset() + a.dot(x.x1()));
    }
    lp.constrain(0.0, 1.0, 1.0)
        .constrain(0.0, -1.0, 0.0)
        .constrain(-1.0, 0.0, 0.0);
    let res = solve_lp2d(&lp).map_err(|e| Error::InvalidInstance(e.to_string()))?;
    if res.status != LpStatus::Optimal {
        return Err(Error::InvalidInstance(format!("numerator LP is {:?}", res.status)));
    }
    let (_, t_lp) = res.point.expect("optimal LP has a point");
    let t_lp = if t_lp < 1e-12 {
        0.0
    } else if t_lp > 1.0 - 1e-12 {
        1.0
    } else {
        t_lp
    };

    // Re-evaluate the LP optimizer and both endpoints with exact ray exits so
    // that endpoint witnesses share arithmetic with the denominator.
    let mut best: Option<Numerator> = None;
    for t in [0.0, t_lp, 1.0] {
        let xt = x.point_at(t);
        let (lambda, yt, faces) = exit_from(&xt, d, y)?;
        let better = match &best {
            None => true,
            Some(b) => {
                let tie = tol::ENDPOINT_TIE * b.value.abs().max(1.0);
                lambda > b.value + tie || ((lambda - b.value).abs() <= tie && t < b.t)
            }
        };
        if better {
            best = Some(Numerator {
                value: lambda,
                t,
                x: xt,
                y: yt,
                faces,
            });
        }
    }
    Ok(best.expect("three candidates"))
}

pub fn denominator(d: &Vector, x: &Segment, y: &Polytope) -> Result<Denominator> {
    check_instance(d, x, y)?;
    let (l1, y1, f1) = exit_from(x.x1(), d, y)?;
    let (l2, y2, f2) = exit_from(x.x2(), d, y)?;
    let tie = (l1 - l2).abs() <= tol::ENDPOINT_TIE * l1.max(l2).max(1.0);
    Ok(if tie || l1 <= l2 {
        Denominator {
            value: l1,
            x: x.x1().clone(),
            y: y1,
            x_is_x1: true,
            tie,
            faces: f1,
        }
    } else {
        Denominator {
            value: l2,
            x: x.x2().clone(),
            y: y2,
            x_is_x1: false,
            tie,
            faces: f2,
        }
    })
}

pub fn quotient(d: &Vector, x: &Segment, y: &Polytope) -> Result<QuotientValue> {
    let num = numerator(d, x, y)?;
    let den = denominator(d, x, y)?;
    if den.value <= 0.0 {
        return Err(Error::InvalidInstance("denominator is not positive".into()));
    }
    let big = big_d(d, y);
    let faces_d = big
        .map(|_| ray_exit(y, &Vector::zeros(y.dim()), d).map(|e| e.active_faces))
        .transpose()?;
    Ok(QuotientValue {
        d: d.clone(),
        n: num.value,
        m: den.value,
        r: num.value / den.value,
        t_n: num.t,
        x_n: num.x,
        y_n: num.y,
        x_m: den.x,
        y_m: den.y,
        x_m_is_x1: den.x_is_x1,
        m_tie: den.tie,
        big_d: big,
        delta_n: big.map(|b| num.value - b),
        delta_m: big.map(|b| b - den.value),
        faces_n: num.faces,
        faces_m: den.faces,
        faces_d,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArgmaxResult {
    pub d_star: Vector,
    pub r_star: f64,
    pub r_plus: f64,
    pub r_minus: f64,
    /// `r(+u)` and `r(−u)` agree within a relative 1e-9; `d_star` is then `+u`.
    pub tie: bool,
    pub plus: QuotientValue,
    pub minus: QuotientValue,
}

/// Maximizer of `r` over unit directions: the better of `±x2/‖x2‖`.
pub fn argmax_direction(x: &Segment, y: &Polytope) -> Result<ArgmaxResult> {
    let u = x.x2().normalized()?;
    let plus = quotient(&u, x, y)?;
    let minus = quotient(&-&u, x, y)?;
    let tie = (plus.r - minus.r).abs() <= tol::ARGMAX_TIE * plus.r.max(minus.r);
    let take_plus = tie || plus.r >= minus.r;
    let star = if take_plus { &plus } else { &minus };
    Ok(ArgmaxResult {
        d_star: star.d.clone(),
        r_star: star.r,
        r_plus: plus.r,
        r_minus: minus.r,
        tie,
        plus: plus.clone(),
        minus,
    })
}

/// Brute-force evaluation of `r(d)` on grids.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleValue {
    pub r: f64,
    pub n: f64,
    pub m: f64,
    pub t_n: f64,
    pub t_m: f64,
    /// Spacing of the λ grid. Both `n` and `m` underestimate by less than one
    /// step at a fixed `t`; `n` also loses up to the variation of `λ*` over
    /// one `t` cell.
    pub lambda_step: f64,
    pub t_step: f64,
}

/// Grid oracle for `r(d)`: `grid + 1` points along `X`, and for each a scan
/// of `grid + 1` values of `λ ∈ [0, λ_box]` for membership of `λd − x` in `Y`.
///
/// Feasible `λ` along a ray from an interior point form an interval starting
/// at 0, so the largest feasible grid index is found by bisection; the result
/// is identical to a linear scan.
pub fn quotient_oracle(d: &Vector, x: &Segment, y: &Polytope, grid: usize) -> Result<OracleValue> {
    check_instance(d, x, y)?;
    if grid == 0 {
        return Err(Error::InvalidInstance("grid must be positive".into()));
    }
    let lambda_box = y.radius() + x.x1().norm().max(x.x2().norm());
    let h = lambda_box / grid as f64;
    let scan = |xt: &Vector| -> f64 {
        let start = -xt;
        let inside = |k: usize| y.contains(&start.axpy(k as f64 * h, d), false, tol::MEMBERSHIP);
        let (mut lo, mut hi) = (0usize, grid);
        if inside(hi) {
            return hi as f64 * h;
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if inside(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo as f64 * h
    };
    let (mut n, mut t_n) = (f64::NEG_INFINITY, 0.0);
    let (mut m, mut t_m) = (f64::INFINITY, 0.0);
    for k in 0..=grid {
        let t = k as f64 / grid as f64;
        let l = scan(&x.point_at(t));
        if l > n {
            n = l;
            t_n = t;
        }
        if l < m {
            m = l;
            t_m = t;
        }
    }
    if m <= 0.0 {
        return Err(Error::InvalidInstance("grid too coarse: minimax scan is zero".into()));
    }
    Ok(OracleValue {
        r: n / m,
        n,
        m,
        t_n,
        t_m,
        lambda_step: h,
        t_step: 1.0 / grid as f64,
    })
}
