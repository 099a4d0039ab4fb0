//! Convex polytopes in paired half-space / vertex form, the segment `X`,
//! instance validation, plane sections and segment Minkowski sums.
//!
//! Half-space normals are stored at unit length so every tolerance in
//! [`crate::tol`] is an absolute distance. In 2D the vertex list is kept
//! counterclockwise; for `n > 2` both representations must be supplied.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sweep::PlaneEmbedding;
use crate::tol;
use crate::vector::{cross2, Vector};

/// Closed half-space `⟨normal, p⟩ ≤ offset` with a unit normal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace {
    normal: Vector,
    offset: f64,
}

impl HalfSpace {
    /// Normalizes `⟨a, p⟩ ≤ b` so that `‖a‖ = 1`.
    pub fn new(normal: Vector, offset: f64) -> Result<Self> {
        if !offset.is_finite() {
            return Err(Error::NonFinite);
        }
        let n = normal.norm();
        if n <= tol::PARALLEL {
            return Err(Error::ZeroNormal);
        }
        Ok(HalfSpace {
            normal: normal.scale(1.0 / n),
            offset: offset / n,
        })
    }

    pub fn normal(&self) -> &Vector {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// `offset − ⟨normal, p⟩`; nonnegative inside.
    pub fn slack(&self, p: &Vector) -> f64 {
        self.offset - self.normal.dot(p)
    }
}

/// A compact convex polytope.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polytope {
    dim: usize,
    halfspaces: Vec<HalfSpace>,
    vertices: Vec<Vector>,
}

impl Polytope {
    /// Builds a polytope from half-spaces, recovering vertices (2D only).
    pub fn from_halfspaces(halfspaces: Vec<HalfSpace>, dim: usize) -> Result<Self> {
        if halfspaces.is_empty() {
            return Err(Error::Unbounded);
        }
        for h in &halfspaces {
            check_dim(h.normal(), dim)?;
        }
        if dim != 2 {
            return Err(Error::DimensionUnsupported(dim));
        }
        let vertices = enumerate_vertices_2d(&halfspaces);
        if vertices.is_empty() {
            // No vertex: either empty or a strip / half-plane.
            let feasible = halfspaces.iter().any(|h| {
                let foot = h.normal().scale(h.offset());
                halfspaces.iter().all(|g| g.slack(&foot) >= -tol::MEMBERSHIP)
            });
            return Err(if feasible { Error::Unbounded } else { Error::Empty });
        }
        if has_recession_2d(&halfspaces) {
            return Err(Error::Unbounded);
        }
        Ok(Polytope {
            dim,
            halfspaces,
            vertices,
        })
    }

    /// Convex hull of a 2D point set with half-spaces derived from hull edges.
    pub fn from_vertices_2d(points: &[Vector]) -> Result<Self> {
        for p in points {
            check_dim(p, 2)?;
        }
        let hull = convex_hull_2d(points);
        if hull.len() < 3 {
            return Err(Error::Degenerate);
        }
        let mut halfspaces = Vec::with_capacity(hull.len());
        for i in 0..hull.len() {
            let (px, py) = hull[i].as_2d();
            let (qx, qy) = hull[(i + 1) % hull.len()].as_2d();
            let normal = Vector::xy(qy - py, -(qx - px));
            let offset = normal.dot(&hull[i]);
            halfspaces.push(HalfSpace::new(normal, offset).map_err(|_| Error::Degenerate)?);
        }
        Ok(Polytope {
            dim: 2,
            halfspaces,
            vertices: hull,
        })
    }

    /// Builds a polytope from both representations, checking that they agree.
    ///
    /// Consistency for `n > 2` is sampled: every vertex must be feasible and
    /// tight on at least `n` half-spaces, and every coordinate axis and sign
    /// diagonal must be blocked by some face.
    pub fn from_both(halfspaces: Vec<HalfSpace>, vertices: Vec<Vector>, dim: usize) -> Result<Self> {
        if halfspaces.is_empty() || vertices.is_empty() {
            return Err(Error::Inconsistent("both representations must be nonempty".into()));
        }
        for h in &halfspaces {
            check_dim(h.normal(), dim)?;
        }
        for v in &vertices {
            check_dim(v, dim)?;
        }
        if dim == 2 {
            let from_h = Polytope::from_halfspaces(halfspaces, 2)?;
            for v in &vertices {
                if !from_h.vertices.iter().any(|w| w.dist(v) <= 1e-7) {
                    return Err(Error::Inconsistent(format!(
                        "vertex {:?} is not a vertex of the half-space set",
                        v.coords()
                    )));
                }
            }
            if from_h.vertices.len() != vertices.len() {
                return Err(Error::Inconsistent("vertex count mismatch".into()));
            }
            return Ok(from_h);
        }
        for v in &vertices {
            let tight = halfspaces
                .iter()
                .filter(|h| h.slack(v).abs() <= tol::MEMBERSHIP)
                .count();
            if halfspaces.iter().any(|h| h.slack(v) < -tol::MEMBERSHIP) {
                return Err(Error::Inconsistent(format!("vertex {:?} is infeasible", v.coords())));
            }
            if tight < dim {
                return Err(Error::Inconsistent(format!(
                    "vertex {:?} is tight on only {tight} half-spaces",
                    v.coords()
                )));
            }
        }
        let p = Polytope {
            dim,
            halfspaces,
            vertices,
        };
        for dir in probe_directions(dim) {
            let bound = p
                .halfspaces
                .iter()
                .any(|h| h.normal().dot(&dir) > tol::DIRECTION);
            if !bound {
                return Err(Error::Unbounded);
            }
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    /// Membership with slack `tol`; `strict` demands the slack on every face.
    pub fn contains(&self, p: &Vector, strict: bool, tol: f64) -> bool {
        if p.dim() != self.dim {
            return false;
        }
        let margin = if strict { tol } else { -tol };
        self.halfspaces.iter().all(|h| h.slack(p) >= margin)
    }

    /// Smallest slack over all faces (negative outside).
    pub fn min_slack(&self, p: &Vector) -> f64 {
        self.halfspaces
            .iter()
            .map(|h| h.slack(p))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn vertex_centroid(&self) -> Vector {
        let mut c = Vector::zeros(self.dim);
        for v in &self.vertices {
            c = c.axpy(1.0, v);
        }
        c.scale(1.0 / self.vertices.len() as f64)
    }

    /// Largest vertex norm.
    pub fn radius(&self) -> f64 {
        self.vertices.iter().map(Vector::norm).fold(0.0, f64::max)
    }

    /// Uniform scaling about the origin by `s > 0`.
    pub fn scaled(&self, s: f64) -> Polytope {
        Polytope {
            dim: self.dim,
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| HalfSpace {
                    normal: h.normal.clone(),
                    offset: h.offset * s,
                })
                .collect(),
            vertices: self.vertices.iter().map(|v| v.scale(s)).collect(),
        }
    }

    /// Intersection with a plane through the origin, in plane coordinates.
    pub fn section_2d(&self, plane: &PlaneEmbedding) -> Result<Polytope> {
        check_dim(plane.e1(), self.dim)?;
        if self.dim == 2 && plane.is_standard() {
            return Ok(self.clone());
        }
        let mut hs = Vec::with_capacity(self.halfspaces.len());
        for h in &self.halfspaces {
            let (u, v) = (h.normal.dot(plane.e1()), h.normal.dot(plane.e2()));
            if u.hypot(v) <= tol::PARALLEL {
                if h.offset < -tol::MEMBERSHIP {
                    return Err(Error::EmptySection);
                }
                continue;
            }
            hs.push(HalfSpace::new(Vector::xy(u, v), h.offset)?);
        }
        match Polytope::from_halfspaces(hs, 2) {
            Err(Error::Empty) => Err(Error::EmptySection),
            other => other,
        }
    }

    /// `Y + X` for a segment `X`, as the hull of the two translates of `Y`.
    pub fn minkowski_segment_2d(&self, x: &Segment) -> Result<Polytope> {
        if self.dim != 2 {
            return Err(Error::DimensionUnsupported(self.dim));
        }
        check_dim(x.x1(), 2)?;
        let pts: Vec<Vector> = self
            .vertices
            .iter()
            .flat_map(|v| [v + x.x1(), v + x.x2()])
            .collect();
        Polytope::from_vertices_2d(&pts)
    }

    /// Same polygon with its half-spaces rebuilt from the vertex cycle, so
    /// that face `i` is the edge from vertex `i` to vertex `i + 1`.
    pub fn canonical_2d(&self) -> Result<Polytope> {
        if self.dim != 2 {
            return Err(Error::DimensionUnsupported(self.dim));
        }
        Polytope::from_vertices_2d(&self.vertices)
    }
}

fn check_dim(v: &Vector, dim: usize) -> Result<()> {
    if v.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: v.dim(),
        });
    }
    Ok(())
}

/// All feasible pairwise intersections, deduplicated and sorted counterclockwise.
fn enumerate_vertices_2d(hs: &[HalfSpace]) -> Vec<Vector> {
    let mut pts: Vec<Vector> = Vec::new();
    for i in 0..hs.len() {
        for j in (i + 1)..hs.len() {
            let a = hs[i].normal().as_2d();
            let b = hs[j].normal().as_2d();
            let det = cross2(a, b);
            if det.abs() < tol::PARALLEL {
                continue;
            }
            let (bi, bj) = (hs[i].offset(), hs[j].offset());
            let p = Vector::xy((bi * b.1 - bj * a.1) / det, (a.0 * bj - b.0 * bi) / det);
            if hs.iter().all(|h| h.slack(&p) >= -tol::MEMBERSHIP) {
                pts.push(p);
            }
        }
    }
    pts.sort_by(|p, q| {
        p[0].partial_cmp(&q[0])
            .unwrap()
            .then(p[1].partial_cmp(&q[1]).unwrap())
    });
    let mut dedup: Vec<Vector> = Vec::new();
    for p in pts {
        if !dedup.iter().any(|q| q.dist(&p) <= tol::DEDUP) {
            dedup.push(p);
        }
    }
    sort_ccw(dedup)
}

fn sort_ccw(pts: Vec<Vector>) -> Vec<Vector> {
    if pts.len() < 3 {
        return pts;
    }
    let n = pts.len() as f64;
    let cx = pts.iter().map(|p| p[0]).sum::<f64>() / n;
    let cy = pts.iter().map(|p| p[1]).sum::<f64>() / n;
    let mut keyed: Vec<(f64, Vector)> = pts
        .into_iter()
        .map(|p| ((p[1] - cy).atan2(p[0] - cx), p))
        .collect();
    keyed.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    keyed.into_iter().map(|(_, p)| p).collect()
}

fn has_recession_2d(hs: &[HalfSpace]) -> bool {
    hs.iter().any(|h| {
        let w = h.normal().rot90();
        [w.clone(), -&w]
            .iter()
            .any(|w| hs.iter().all(|g| g.normal().dot(w) <= tol::DIRECTION))
    })
}

/// Andrew's monotone chain; collinear points are dropped. Output is
/// counterclockwise.
fn convex_hull_2d(points: &[Vector]) -> Vec<Vector> {
    let mut pts: Vec<(f64, f64)> = points.iter().map(Vector::as_2d).collect();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.partial_cmp(&b.1).unwrap()));
    pts.dedup_by(|a, b| (a.0 - b.0).hypot(a.1 - b.1) <= tol::DEDUP);
    if pts.len() < 3 {
        return pts.into_iter().map(|(x, y)| Vector::xy(x, y)).collect();
    }
    let scale = pts
        .iter()
        .map(|p| p.0.abs().max(p.1.abs()))
        .fold(1.0, f64::max);
    let eps = 1e-12 * scale * scale;
    let turn = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| cross2((a.0 - o.0, a.1 - o.1), (b.0 - o.0, b.1 - o.1));
    let mut lower: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && turn(lower[lower.len() - 2], lower[lower.len() - 1], p) <= eps {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && turn(upper[upper.len() - 2], upper[upper.len() - 1], p) <= eps {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower.into_iter().map(|(x, y)| Vector::xy(x, y)).collect()
}

/// Coordinate axes (both signs) and the `2ⁿ` sign diagonals.
fn probe_directions(dim: usize) -> Vec<Vector> {
    let mut out = Vec::new();
    for i in 0..dim {
        for s in [1.0, -1.0] {
            let mut c = vec![0.0; dim];
            c[i] = s;
            out.push(Vector::new(c).unwrap());
        }
    }
    if dim <= 12 {
        for mask in 0..(1usize << dim) {
            let c: Vec<f64> = (0..dim)
                .map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 })
                .collect();
            out.push(Vector::new(c).unwrap().normalized().unwrap());
        }
    }
    out
}

/// The one-dimensional polytope `X = [x1, x2]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Segment {
    x1: Vector,
    x2: Vector,
}

impl Segment {
    /// Checked constructor: distinct endpoints, `x2 ≠ 0`, and both endpoints
    /// on one line through the origin.
    pub fn new(x1: Vector, x2: Vector) -> Result<Self> {
        let s = Segment::new_unchecked(x1, x2)?;
        if s.x1.dist(&s.x2) <= tol::DEDUP {
            return Err(Error::InvalidSegment("x1 = x2".into()));
        }
        if s.x2.norm() <= tol::DEDUP {
            return Err(Error::InvalidSegment("x2 = 0".into()));
        }
        if s.collinearity_defect() > tol::MEMBERSHIP {
            return Err(Error::InvalidSegment(
                "x1 and x2 are not collinear with the origin".into(),
            ));
        }
        Ok(s)
    }

    /// Only checks that the endpoints share a dimension.
    pub fn new_unchecked(x1: Vector, x2: Vector) -> Result<Self> {
        check_dim(&x2, x1.dim())?;
        Ok(Segment { x1, x2 })
    }

    pub fn x1(&self) -> &Vector {
        &self.x1
    }

    pub fn x2(&self) -> &Vector {
        &self.x2
    }

    pub fn dim(&self) -> usize {
        self.x1.dim()
    }

    /// `x1 + t (x2 − x1)`
    pub fn point_at(&self, t: f64) -> Vector {
        self.x1.axpy(t, &(&self.x2 - &self.x1))
    }

    pub fn direction(&self) -> Vector {
        &self.x2 - &self.x1
    }

    /// Sine of the angle between `x1` and `x2` times `‖x1‖`; zero iff `x1`
    /// lies on the line spanned by `x2`.
    pub fn collinearity_defect(&self) -> f64 {
        let n2 = self.x2.norm();
        if n2 <= f64::MIN_POSITIVE {
            return 0.0;
        }
        let u = self.x2.scale(1.0 / n2);
        let along = self.x1.dot(&u);
        self.x1.axpy(-along, &u).norm()
    }

    pub fn scaled(&self, s: f64) -> Segment {
        Segment {
            x1: self.x1.scale(s),
            x2: self.x2.scale(s),
        }
    }
}

/// One named hypothesis check and its measured margin (positive = satisfied).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub margin: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Check>,
    pub checks: Vec<Check>,
    /// Set when collinearity was waived for exploration; the theorem's
    /// conclusions are then not guaranteed.
    pub inconclusive: bool,
}

impl ValidationReport {
    fn from_checks(checks: Vec<Check>, inconclusive: bool) -> Self {
        let violations: Vec<Check> = checks.iter().filter(|c| !c.passed).cloned().collect();
        ValidationReport {
            ok: violations.is_empty(),
            violations,
            checks,
            inconclusive,
        }
    }
}

pub const CHECK_NEG_X_INTERIOR: &str = "neg_x_in_interior";
pub const CHECK_FULL_DIM: &str = "y_full_dimensional";
pub const CHECK_DISTINCT: &str = "x1_ne_x2";
pub const CHECK_X2_NONZERO: &str = "x2_nonzero";
pub const CHECK_COLLINEAR: &str = "x_collinear_with_origin";

/// Checks the hypotheses under which the quotient is well defined and the
/// direction theorem applies.
pub fn validate_instance(x: &Segment, y: &Polytope) -> ValidationReport {
    validate_with(x, y, false)
}

/// Like [`validate_instance`] but with the collinearity check waived; the
/// report is marked inconclusive when that check would have failed.
pub fn validate_exploratory(x: &Segment, y: &Polytope) -> ValidationReport {
    validate_with(x, y, true)
}

fn validate_with(x: &Segment, y: &Polytope, waive_collinear: bool) -> ValidationReport {
    if x.dim() != y.dim() {
        let c = Check {
            name: "dimension".into(),
            margin: -((x.dim() as f64) - (y.dim() as f64)).abs(),
            passed: false,
        };
        return ValidationReport::from_checks(vec![c], false);
    }
    let mut checks = Vec::new();
    let interior = y.min_slack(&-x.x1()).min(y.min_slack(&-x.x2()));
    checks.push(Check {
        name: CHECK_NEG_X_INTERIOR.into(),
        margin: interior,
        passed: interior > tol::STRICT_MARGIN,
    });
    let full = if y.vertices().is_empty() {
        f64::NEG_INFINITY
    } else {
        y.min_slack(&y.vertex_centroid())
    };
    checks.push(Check {
        name: CHECK_FULL_DIM.into(),
        margin: full,
        passed: full > tol::STRICT_MARGIN,
    });
    let gap = x.x1().dist(x.x2());
    checks.push(Check {
        name: CHECK_DISTINCT.into(),
        margin: gap,
        passed: gap > tol::DEDUP,
    });
    let n2 = x.x2().norm();
    checks.push(Check {
        name: CHECK_X2_NONZERO.into(),
        margin: n2,
        passed: n2 > tol::DEDUP,
    });
    let defect = x.collinearity_defect();
    let collinear = defect <= tol::MEMBERSHIP;
    let inconclusive = waive_collinear && !collinear;
    checks.push(Check {
        name: CHECK_COLLINEAR.into(),
        margin: tol::MEMBERSHIP - defect,
        passed: collinear || waive_collinear,
    });
    ValidationReport::from_checks(checks, inconclusive)
}
