//! Brute-force oracles shared by the integration tests. They only use the
//! vertex list of a polygon (never its half-spaces, ray casting or the LP
//! solver), so they are independent of the code under test.

#![allow(dead_code)]

pub type P2 = (f64, f64);

fn cross(o: P2, a: P2, b: P2) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Membership in a counterclockwise convex polygon, with a small outward
/// allowance measured as a distance.
pub fn inside(poly: &[P2], p: P2, tol: f64) -> bool {
    let n = poly.len();
    (0..n).all(|i| {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let len = ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt();
        cross(a, b, p) / len >= -tol
    })
}

/// Largest `λ` with `origin + λ·dir` in the polygon: a linear scan of
/// `points` values over `[0, lambda_max]`, then a second scan of the cell
/// after the last feasible value.
pub fn ray_oracle(poly: &[P2], origin: P2, dir: P2, lambda_max: f64, points: usize) -> f64 {
    let at = |l: f64| (origin.0 + l * dir.0, origin.1 + l * dir.1);
    let scan = |lo: f64, h: f64| {
        let mut best = lo;
        for k in 0..=points {
            let l = lo + k as f64 * h;
            if inside(poly, at(l), 0.0) {
                best = l;
            }
        }
        best
    };
    let h = lambda_max / points as f64;
    let coarse = scan(0.0, h);
    scan(coarse, h / points as f64)
}

/// Grid values of the maximax, the minimax and their ratio along `d`,
/// with `grid + 1` points on the segment and a `ray_oracle` per point.
pub fn quotient_grid(poly: &[P2], x1: P2, x2: P2, d: P2, grid: usize, points: usize) -> (f64, f64, f64) {
    let radius = poly.iter().map(|v| v.0.hypot(v.1)).fold(0.0, f64::max);
    let lambda_max = radius + x1.0.hypot(x1.1).max(x2.0.hypot(x2.1));
    let (mut n, mut m) = (f64::NEG_INFINITY, f64::INFINITY);
    for i in 0..=grid {
        let t = i as f64 / grid as f64;
        let x = (x1.0 + t * (x2.0 - x1.0), x1.1 + t * (x2.1 - x1.1));
        let l = ray_oracle(poly, (-x.0, -x.1), d, lambda_max, points);
        n = n.max(l);
        m = m.min(l);
    }
    (n, m, n / m)
}

/// `max c·z` over `{z : a_i·z ≤ b_i} ∩ [-r, r]²` (`c` a unit vector) by a
/// dense grid over the coordinate `w` across `c`. Each grid line
/// `z = u·c + w·c⊥` is clipped against every half-plane to get its largest
/// feasible `u`. That line maximum is concave in `w`, so the true maximizer
/// lies within one cell of the grid argmax, and the grid is refined there
/// until the spacing drops below `1e-9·r`.
pub fn lp_oracle(c: P2, cons: &[(f64, f64, f64)], r: f64, points: usize) -> Option<(f64, P2)> {
    let perp = (-c.1, c.0);
    let span = r * std::f64::consts::SQRT_2;
    let line_max = |w: f64| -> Option<f64> {
        let mut hi = span;
        let mut lo = -span;
        for &(p, q, b) in cons {
            let (ac, ap) = (p * c.0 + q * c.1, p * perp.0 + q * perp.1);
            let rhs = b - w * ap;
            if ac.abs() <= 1e-14 * p.hypot(q) {
                if rhs < 0.0 {
                    return None;
                }
            } else if ac > 0.0 {
                hi = hi.min(rhs / ac);
            } else {
                lo = lo.max(rhs / ac);
            }
        }
        (lo <= hi).then_some(hi)
    };
    let (mut a, mut b) = (-span, span);
    loop {
        let h = (b - a) / points as f64;
        let best = (0..=points)
            .filter_map(|k| {
                let w = a + k as f64 * h;
                line_max(w).map(|u| (u, w))
            })
            .fold(None, |acc: Option<(f64, f64)>, cur| match acc {
                Some(x) if x.0 >= cur.0 => Some(x),
                _ => Some(cur),
            })?;
        if h < 1e-9 * r {
            let (u, w) = best;
            return Some((u, (u * c.0 + w * perp.0, u * c.1 + w * perp.1)));
        }
        (a, b) = (best.1 - h, best.1 + h);
    }
}

/// `max c·z` by vertex enumeration: every pairwise intersection of
/// constraint lines is tested for feasibility and the best one kept.
/// Assumes the region is bounded (callers add a box).
pub fn lp_vertex_oracle(c: P2, cons: &[(f64, f64, f64)]) -> Option<(f64, P2)> {
    let feasible = |z: P2| cons.iter().all(|&(p, q, b)| p * z.0 + q * z.1 <= b + 1e-9 * p.hypot(q));
    let mut best: Option<(f64, P2)> = None;
    for (i, &(p1, q1, b1)) in cons.iter().enumerate() {
        for &(p2, q2, b2) in &cons[i + 1..] {
            let det = p1 * q2 - p2 * q1;
            if det.abs() < 1e-12 * p1.hypot(q1) * p2.hypot(q2) {
                continue;
            }
            let z = ((b1 * q2 - b2 * q1) / det, (p1 * b2 - p2 * b1) / det);
            if feasible(z) {
                let v = c.0 * z.0 + c.1 * z.1;
                if best.is_none_or(|b| v > b.0) {
                    best = Some((v, z));
                }
            }
        }
    }
    best
}

/// SplitMix64, for test-side randomness that does not depend on the
/// generator under test.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// A random LP whose feasible set contains the origin, boxed by `[-8, 8]²`;
/// returns the program, its raw constraints and the objective.
pub fn random_lp(rng: &mut SplitMix) -> (mmq::lp2d::LinearProgram2, Vec<(f64, f64, f64)>, (f64, f64)) {
    let a = rng.uniform(0.0, std::f64::consts::TAU);
    let c = (a.cos(), a.sin());
    let mut lp = mmq::lp2d::LinearProgram2::new(c);
    let mut raw = Vec::new();
    let m = 3 + (rng.next_u64() % 10) as usize;
    for _ in 0..m {
        let t = rng.uniform(0.0, std::f64::consts::TAU);
        let scale = rng.uniform(0.5, 4.0);
        let (p, q, b) = (scale * t.cos(), scale * t.sin(), scale * rng.uniform(0.5, 3.0));
        lp.constrain(p, q, b);
        raw.push((p, q, b));
    }
    for (p, q) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
        lp.constrain(p, q, 8.0);
        raw.push((p, q, 8.0));
    }
    (lp, raw, c)
}

pub fn vertices_2d(y: &mmq::Polytope) -> Vec<P2> {
    y.vertices().iter().map(|v| v.as_2d()).collect()
}

/// The worked hexagon, counterclockwise, written out independently of the
/// library's example module.
pub const HEXAGON: [P2; 6] = [(3.0, 0.0), (1.0, 2.0), (-1.0, 2.0), (-3.0, 0.0), (-1.0, -2.0), (1.0, -2.0)];
pub const HEX_X1: P2 = (0.0, -0.5);
pub const HEX_X2: P2 = (0.0, 1.0);
