//! Direction sweeps in the plane containing `X`.
//!
//! Angles are measured clockwise from `x2`: `d(β) = cos β·e1 − sin β·e2`
//! with `e1 = x2/‖x2‖`. In plane coordinates `d(β) = (cos β, −sin β)`.
//!
//! The ray realizing `λ*(x, d)` leaves `−x` and meets `∂Y` at `λd − x`, so it
//! passes through a vertex `v` exactly when `d` points along `v + x`. Those
//! directions for `x ∈ {0, x1, x2}` are the sweep events; between events the
//! three witness rays stay on fixed faces.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polytope::{Polytope, Segment};
use crate::quotient::{quotient, QuotientValue};
use crate::ray::ray_exit;
use crate::tol;
use crate::vector::{clockwise_angle, cross2, normalize_angle, Vector};

/// Orthonormal basis of a plane through the origin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlaneEmbedding {
    e1: Vector,
    e2: Vector,
    /// β increases clockwise; always true, recorded for output consumers.
    clockwise: bool,
}

impl PlaneEmbedding {
    pub fn from_basis(e1: Vector, e2: Vector) -> Result<Self> {
        if e1.dim() != e2.dim() || e1.dim() < 2 {
            return Err(Error::InvalidPlane("basis vectors must share a dimension ≥ 2".into()));
        }
        let ok = (e1.norm() - 1.0).abs() <= 1e-12
            && (e2.norm() - 1.0).abs() <= 1e-12
            && e1.dot(&e2).abs() <= 1e-12;
        if !ok {
            return Err(Error::InvalidPlane("basis is not orthonormal".into()));
        }
        Ok(PlaneEmbedding {
            e1,
            e2,
            clockwise: true,
        })
    }

    pub fn standard_2d() -> Self {
        PlaneEmbedding {
            e1: Vector::xy(1.0, 0.0),
            e2: Vector::xy(0.0, 1.0),
            clockwise: true,
        }
    }

    /// `e1 = x2/‖x2‖`. In 2D `e2` is `e1` turned 90° counterclockwise; in
    /// higher dimensions it is `seed` (default: the first coordinate axis not
    /// parallel to `e1`) orthogonalized against `e1`.
    pub fn for_segment(x: &Segment, seed: Option<&Vector>) -> Result<Self> {
        let e1 = x.x2().normalized()?;
        if x.dim() == 2 {
            let e2 = e1.rot90();
            return PlaneEmbedding::from_basis(e1, e2);
        }
        let orth = |s: &Vector| -> Option<Vector> {
            let w = s.axpy(-s.dot(&e1), &e1);
            (w.norm() > 1e-6).then(|| w.normalized().ok()).flatten()
        };
        let e2 = match seed {
            Some(s) => {
                if s.dim() != x.dim() {
                    return Err(Error::InvalidPlane("seed dimension mismatch".into()));
                }
                orth(s).ok_or_else(|| Error::InvalidPlane("seed is parallel to x2".into()))?
            }
            None => (0..x.dim())
                .find_map(|i| {
                    let mut c = vec![0.0; x.dim()];
                    c[i] = 1.0;
                    orth(&Vector::new(c).unwrap())
                })
                .expect("some axis is not parallel to e1"),
        };
        // one more pass keeps the basis orthonormal to 1e-12
        let e2 = e2.axpy(-e2.dot(&e1), &e1).normalized()?;
        let plane = PlaneEmbedding::from_basis(e1, e2)?;
        if x.x1().axpy(-1.0, &plane.lift(plane.project(x.x1()).as_2d())).norm() > 1e-9 {
            return Err(Error::InvalidPlane("plane does not contain X".into()));
        }
        Ok(plane)
    }

    pub fn e1(&self) -> &Vector {
        &self.e1
    }

    pub fn e2(&self) -> &Vector {
        &self.e2
    }

    pub fn clockwise(&self) -> bool {
        self.clockwise
    }

    pub fn is_standard(&self) -> bool {
        self.e1 == Vector::xy(1.0, 0.0) && self.e2 == Vector::xy(0.0, 1.0)
    }

    /// Plane coordinates `(⟨p, e1⟩, ⟨p, e2⟩)`.
    pub fn project(&self, p: &Vector) -> Vector {
        Vector::xy(p.dot(&self.e1), p.dot(&self.e2))
    }

    pub fn lift(&self, (u, v): (f64, f64)) -> Vector {
        self.e1.scale(u).axpy(v, &self.e2)
    }

    /// `d(β)` in ambient coordinates.
    pub fn direction(&self, beta: f64) -> Vector {
        self.lift(plane_direction(beta))
    }
}

/// `d(β)` in plane coordinates.
pub fn plane_direction(beta: f64) -> (f64, f64) {
    (beta.cos(), -beta.sin())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum RayKind {
    /// Ray from the origin (realizes `D(d)`).
    #[serde(rename = "d-exit")]
    DExit,
    /// Ray from `−x2`, the numerator witness before `v_π`.
    #[serde(rename = "yN-ray")]
    YN,
    /// Ray from `−x1`, the denominator witness before `v_π`.
    #[serde(rename = "yM-ray")]
    YM,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepEvent {
    pub beta: f64,
    pub vertex_id: usize,
    pub ray_kind: RayKind,
}

/// `X` and `Y ∩ P` in plane coordinates, with `Y ∩ P` canonical (face `i`
/// runs from vertex `i` to vertex `i + 1`, counterclockwise).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanarInstance {
    pub plane: PlaneEmbedding,
    pub x: Segment,
    pub y: Polytope,
}

impl PlanarInstance {
    pub fn new(x: &Segment, y: &Polytope, plane: PlaneEmbedding) -> Result<Self> {
        let yp = y.section_2d(&plane)?.canonical_2d()?;
        let xp = Segment::new_unchecked(plane.project(x.x1()), plane.project(x.x2()))?;
        Ok(PlanarInstance { plane, x: xp, y: yp })
    }

    /// Plane through `X` with the default orientation.
    pub fn for_segment(x: &Segment, y: &Polytope) -> Result<Self> {
        PlanarInstance::new(x, y, PlaneEmbedding::for_segment(x, None)?)
    }

    pub fn quotient_at(&self, beta: f64) -> Result<QuotientValue> {
        let (u, v) = plane_direction(beta);
        quotient(&Vector::xy(u, v), &self.x, &self.y)
    }

    /// Vertex `i` of `Y ∩ P` in ambient coordinates.
    pub fn vertex_ambient(&self, i: usize) -> Vector {
        self.plane.lift(self.y.vertices()[i].as_2d())
    }
}

/// All vertex crossings, sorted by `β`.
pub fn event_angles(x: &Segment, yp: &Polytope) -> Vec<SweepEvent> {
    let origins = [
        (RayKind::DExit, Vector::xy(0.0, 0.0)),
        (RayKind::YN, x.x2().clone()),
        (RayKind::YM, x.x1().clone()),
    ];
    let mut events = Vec::new();
    for (i, v) in yp.vertices().iter().enumerate() {
        for (kind, xo) in &origins {
            let w = v + xo;
            if w.norm() <= 1e-12 {
                continue;
            }
            events.push(SweepEvent {
                beta: clockwise_angle(w.as_2d()),
                vertex_id: i,
                ray_kind: *kind,
            });
        }
    }
    events.sort_by(|a, b| {
        a.beta
            .total_cmp(&b.beta)
            .then(a.vertex_id.cmp(&b.vertex_id))
            .then(a.ray_kind.cmp(&b.ray_kind))
    });
    events.dedup_by(|a, b| {
        a.vertex_id == b.vertex_id && a.ray_kind == b.ray_kind && (a.beta - b.beta).abs() <= 1e-12
    });
    events
}

/// Turn angle at each vertex of a counterclockwise convex polygon.
pub fn external_angles(yp: &Polytope) -> Vec<f64> {
    let v = yp.vertices();
    let n = v.len();
    (0..n)
        .map(|i| {
            let a = &v[(i + n - 1) % n];
            let b = &v[i];
            let c = &v[(i + 1) % n];
            let e1 = (b[0] - a[0], b[1] - a[1]);
            let e2 = (c[0] - b[0], c[1] - b[1]);
            cross2(e1, e2).atan2(e1.0 * e2.0 + e1.1 * e2.1)
        })
        .collect()
}

/// The `α + β` staircase and the vertices where it passes `π` and `2π`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Staircase {
    /// Face met by the sweep at `β = 0⁺`.
    pub start_face: usize,
    /// `α + β` on the starting face.
    pub alpha0: f64,
    /// `(vertex, α + β after crossing it)` in clockwise crossing order.
    pub steps: Vec<(usize, f64)>,
    pub v_pi: usize,
    pub v_2pi: usize,
    /// Vertex whose crossing lands exactly on `π` (within 1e-9), opening a
    /// face parallel to `X` that `v_π` then closes.
    pub pi_tie: Option<usize>,
    /// Same for `2π`.
    pub two_pi_tie: Option<usize>,
}

/// Walks the faces clockwise from the one met at `β = 0⁺`, accumulating
/// external angles; `v_π` (`v_2π`) is the first vertex whose crossing lifts
/// `α + β` strictly above `π` (`2π`). A face lying at exactly `π` or `2π`
/// (within 1e-9) is therefore passed over, and the vertex closing it is
/// reported.
pub fn find_v_pi_v_2pi(yp: &Polytope, x: &Segment) -> Result<Staircase> {
    let verts = yp.vertices();
    let n = verts.len();
    let origin = Vector::xy(0.0, 0.0);
    // All rays along +e1 from points of the X line coincide, so any interior
    // point on that line identifies the starting face.
    let start = if yp.contains(&origin, true, tol::STRICT_MARGIN) {
        origin
    } else {
        x.point_at(0.5).scale(-1.0)
    };
    let exit = ray_exit(yp, &start, &Vector::xy(1.0, 0.0))?;
    let start_face = match verts.iter().position(|v| v.dist(&exit.point) <= 1e-9) {
        // exiting through vertex k: β = 0⁺ moves onto face k − 1
        Some(k) => (k + n - 1) % n,
        None => *exit.active_faces.iter().next().expect("nonempty active set"),
    };
    let a = &verts[start_face];
    let b = &verts[(start_face + 1) % n];
    let alpha0 = clockwise_angle((a[0] - b[0], a[1] - b[1]));
    let eps = external_angles(yp);
    let mut steps = Vec::with_capacity(n);
    let mut s = alpha0;
    let (mut v_pi, mut v_2pi) = (None, None);
    let (mut pi_tie, mut two_pi_tie) = (None, None);
    for k in 0..n {
        let idx = (start_face + n - k) % n;
        s += eps[idx];
        steps.push((idx, s));
        if (s - PI).abs() <= 1e-9 {
            pi_tie = Some(idx);
        }
        if (s - TAU).abs() <= 1e-9 {
            two_pi_tie = Some(idx);
        }
        if v_pi.is_none() && s > PI + 1e-9 {
            v_pi = Some(idx);
        }
        if v_2pi.is_none() && s > TAU + 1e-9 {
            v_2pi = Some(idx);
        }
    }
    Ok(Staircase {
        start_face,
        alpha0,
        steps,
        v_pi: v_pi.expect("staircase passes π"),
        v_2pi: v_2pi.expect("staircase passes 2π"),
        pi_tie,
        two_pi_tie,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSample {
    pub beta: f64,
    /// `d(β)` in ambient coordinates.
    pub d: Vector,
    pub q: QuotientValue,
    pub arc_id: usize,
    pub event_adjacent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Arc {
    pub id: usize,
    /// Open interval `(start, end)`; `end` exceeds `2π` for the arc that
    /// wraps past `β = 0`.
    pub start: f64,
    pub end: f64,
    pub r_min: f64,
    pub r_max: f64,
    /// `r` at the sample nearest the arc midpoint.
    pub r_rep: f64,
    /// Index into the profile samples of that representative.
    pub rep_sample: usize,
    /// The numerator, denominator and `D` rays all exit through one common
    /// single face at every sample of the arc.
    pub same_face: bool,
    pub sample_ids: Vec<usize>,
}

impl Arc {
    pub fn contains_beta(&self, beta: f64) -> bool {
        let b = if beta < self.start { beta + TAU } else { beta };
        b >= self.start && b < self.end
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepProfile {
    pub instance: PlanarInstance,
    pub samples: Vec<SweepSample>,
    pub events: Vec<SweepEvent>,
    pub arcs: Vec<Arc>,
    pub v_pi: usize,
    pub v_2pi: usize,
    pub staircase: Staircase,
    pub external_angles: Vec<f64>,
}

impl SweepProfile {
    pub fn v_pi_ambient(&self) -> Vector {
        self.instance.vertex_ambient(self.v_pi)
    }

    pub fn v_2pi_ambient(&self) -> Vector {
        self.instance.vertex_ambient(self.v_2pi)
    }

    pub fn max_r(&self) -> f64 {
        self.samples.iter().map(|s| s.q.r).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Distinct event angles (tolerance 1e-12).
fn arc_boundaries(events: &[SweepEvent]) -> Vec<f64> {
    let mut b: Vec<f64> = events.iter().map(|e| e.beta).collect();
    b.sort_by(f64::total_cmp);
    b.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
    if b.len() > 1 && (b[0] + TAU - b[b.len() - 1]).abs() <= 1e-12 {
        b.pop();
    }
    b
}

/// Samples `r(β)` on every event-delimited arc: `samples_per_arc` evenly
/// spaced interior points plus both ends pulled in by 1e-7 (or a quarter of
/// the arc when it is narrower).
pub fn sweep_profile(x: &Segment, y: &Polytope, plane: PlaneEmbedding, samples_per_arc: usize) -> Result<SweepProfile> {
    if samples_per_arc < 3 {
        return Err(Error::InvalidInstance("samples_per_arc must be at least 3".into()));
    }
    if x.collinearity_defect() > tol::MEMBERSHIP {
        return Err(Error::InvalidInstance("X does not lie on a line through the origin".into()));
    }
    let inst = PlanarInstance::new(x, y, plane)?;
    let events = event_angles(&inst.x, &inst.y);
    let bounds = arc_boundaries(&events);
    let staircase = find_v_pi_v_2pi(&inst.y, &inst.x)?;

    let mut plan: Vec<(f64, usize, bool)> = Vec::new();
    for (id, &start) in bounds.iter().enumerate() {
        let end = if id + 1 < bounds.len() { bounds[id + 1] } else { bounds[0] + TAU };
        let width = end - start;
        let off = (1e-7f64).min(width / 4.0);
        plan.push((start + off, id, true));
        for k in 1..=samples_per_arc {
            plan.push((start + width * k as f64 / (samples_per_arc + 1) as f64, id, false));
        }
        plan.push((end - off, id, true));
    }
    for p in &mut plan {
        p.0 = normalize_angle(p.0);
    }
    plan.sort_by(|a, b| a.0.total_cmp(&b.0));

    let samples: Vec<SweepSample> = plan
        .par_iter()
        .map(|&(beta, arc_id, event_adjacent)| {
            let q = inst.quotient_at(beta)?;
            Ok(SweepSample {
                beta,
                d: inst.plane.direction(beta),
                q,
                arc_id,
                event_adjacent,
            })
        })
        .collect::<Result<_>>()?;

    let mut arcs: Vec<Arc> = Vec::with_capacity(bounds.len());
    for (id, &start) in bounds.iter().enumerate() {
        let end = if id + 1 < bounds.len() { bounds[id + 1] } else { bounds[0] + TAU };
        arcs.push(Arc {
            id,
            start,
            end,
            r_min: f64::INFINITY,
            r_max: f64::NEG_INFINITY,
            r_rep: f64::NAN,
            rep_sample: 0,
            same_face: true,
            sample_ids: Vec::new(),
        });
    }
    for (i, s) in samples.iter().enumerate() {
        let a = &mut arcs[s.arc_id];
        a.sample_ids.push(i);
        a.r_min = a.r_min.min(s.q.r);
        a.r_max = a.r_max.max(s.q.r);
        a.same_face &= shares_single_face(&s.q);
    }
    for a in &mut arcs {
        let mid = normalize_angle(0.5 * (a.start + a.end));
        let rep = *a
            .sample_ids
            .iter()
            .min_by(|&&i, &&j| {
                circ_dist(samples[i].beta, mid).total_cmp(&circ_dist(samples[j].beta, mid))
            })
            .expect("arc has samples");
        a.rep_sample = rep;
        a.r_rep = samples[rep].q.r;
    }

    Ok(SweepProfile {
        v_pi: staircase.v_pi,
        v_2pi: staircase.v_2pi,
        external_angles: external_angles(&inst.y),
        instance: inst,
        samples,
        events,
        arcs,
        staircase,
    })
}

/// Default-plane sweep of a 2D (or plane-containing) instance.
pub fn sweep_profile_default(x: &Segment, y: &Polytope, samples_per_arc: usize) -> Result<SweepProfile> {
    sweep_profile(x, y, PlaneEmbedding::for_segment(x, None)?, samples_per_arc)
}

fn shares_single_face(q: &QuotientValue) -> bool {
    if q.faces_n.len() != 1 || q.faces_n != q.faces_m {
        return false;
    }
    match &q.faces_d {
        Some(f) => *f == q.faces_n,
        None => true,
    }
}

fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Outcome of one structural check over a profile.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaCheck {
    pub pass: bool,
    /// Smallest slack across everything checked; negative on failure.
    pub worst_margin: f64,
    /// `β` where the worst margin occurred.
    pub location_beta: Option<f64>,
}

impl LemmaCheck {
    fn new() -> Self {
        LemmaCheck {
            pass: true,
            worst_margin: f64::INFINITY,
            location_beta: None,
        }
    }

    fn record(&mut self, margin: f64, beta: f64) {
        if margin < self.worst_margin {
            self.worst_margin = margin;
            self.location_beta = Some(beta);
        }
        if margin < 0.0 {
            self.pass = false;
        }
    }

    fn fail(&mut self, beta: Option<f64>) {
        self.pass = false;
        if self.worst_margin > 0.0 {
            self.worst_margin = 0.0;
        }
        if beta.is_some() {
            self.location_beta = beta;
        }
    }

    fn finish(mut self) -> Self {
        if !self.worst_margin.is_finite() {
            self.worst_margin = 0.0;
        }
        self
    }
}

pub const CHECK_FACE_CONSTANCY: &str = "face_constancy";
pub const CHECK_MONOTONICITY: &str = "monotonicity";
pub const CHECK_LOCAL_MINIMA: &str = "local_minima_at_v_pi_v_2pi";
pub const CHECK_MAXIMA: &str = "maxima_at_0_and_pi";
pub const CHECK_WITNESSES: &str = "witness_identities";
pub const CHECK_EXTERNAL_ANGLES: &str = "external_angle_sum";

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct LemmaReport {
    pub checks: BTreeMap<String, LemmaCheck>,
}

impl LemmaReport {
    pub fn all_pass(&self) -> bool {
        self.checks.values().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> &LemmaCheck {
        &self.checks[name]
    }
}

/// Where a sample sits relative to the two crossing clusters, walking
/// clockwise from `β = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    BeforeVPi,
    VPi,
    VPiToPi,
    PiToV2Pi,
    V2Pi,
    AfterV2Pi,
}

/// Smallest circular interval `[lo, hi]` (with `hi` possibly past `2π`)
/// covering the given angles.
fn covering_interval(angles: &[f64]) -> (f64, f64) {
    let mut a: Vec<f64> = angles.to_vec();
    a.sort_by(f64::total_cmp);
    let n = a.len();
    let (mut gap, mut at) = (a[0] + TAU - a[n - 1], 0);
    for i in 1..n {
        if a[i] - a[i - 1] > gap {
            gap = a[i] - a[i - 1];
            at = i;
        }
    }
    let lo = a[at];
    let hi = if at == 0 { a[n - 1] } else { a[at - 1] + TAU };
    (lo, hi)
}

/// Closed overlap of an arc `[start, end]` with a circular interval.
fn arc_touches(arc: &Arc, (lo, hi): (f64, f64)) -> bool {
    [-TAU, 0.0, TAU].iter().any(|&s| arc.start <= hi + s + 1e-12 && lo + s <= arc.end + 1e-12)
}

/// Circular interval covering the events of `vertex`, and of the vertex
/// opening the tied face when `vertex` closes one.
fn cluster(profile: &SweepProfile, vertex: usize, tie: Option<usize>) -> (f64, f64) {
    let angles: Vec<f64> = profile
        .events
        .iter()
        .filter(|e| e.vertex_id == vertex || Some(e.vertex_id) == tie)
        .map(|e| e.beta)
        .collect();
    covering_interval(&angles)
}

/// Phase of every sample. Samples on arcs touching the `v_π` (`v_2π`)
/// cluster are `VPi` (`V2Pi`); the rest are split by `β < π` and by whether
/// the walk from `β = 0` has already met the cluster of that half-turn.
fn phases(profile: &SweepProfile) -> Vec<Phase> {
    let st = &profile.staircase;
    let c_pi = cluster(profile, profile.v_pi, st.pi_tie);
    let c_2pi = cluster(profile, profile.v_2pi, st.two_pi_tie);
    let in_pi: Vec<bool> = profile.arcs.iter().map(|a| arc_touches(a, c_pi)).collect();
    let in_2pi: Vec<bool> = profile.arcs.iter().map(|a| arc_touches(a, c_2pi)).collect();
    let (mut seen_pi, mut seen_2pi) = (false, false);
    profile
        .samples
        .iter()
        .map(|s| {
            if in_pi[s.arc_id] {
                seen_pi |= s.beta < PI;
                Phase::VPi
            } else if in_2pi[s.arc_id] {
                seen_2pi |= s.beta >= PI;
                Phase::V2Pi
            } else if s.beta < PI {
                if seen_pi {
                    Phase::VPiToPi
                } else {
                    Phase::BeforeVPi
                }
            } else if seen_2pi {
                Phase::AfterV2Pi
            } else {
                Phase::PiToV2Pi
            }
        })
        .collect()
}

/// Checks the profile against the structural claims of the direction
/// theorem's proof: face constancy, the decrease / increase pattern around
/// `v_π` and `v_2π`, the location of local minima and maxima, and the
/// endpoint witnesses away from crossings.
pub fn analyze_profile(profile: &SweepProfile) -> LemmaReport {
    let samples = &profile.samples;
    let arcs = &profile.arcs;
    let tol_rel = |r: f64| 1e-9 * r.abs().max(1.0);
    let mut checks = BTreeMap::new();

    // (1) r constant on arcs where all rays share a face
    let mut constancy = LemmaCheck::new();
    for a in arcs.iter().filter(|a| a.same_face) {
        let allowed = tol_rel(a.r_max);
        constancy.record(allowed - (a.r_max - a.r_min), normalize_angle(0.5 * (a.start + a.end)));
    }
    checks.insert(CHECK_FACE_CONSTANCY.to_string(), constancy.finish());

    let phase = phases(profile);
    let r: Vec<f64> = samples.iter().map(|s| s.q.r).collect();
    let n = r.len();

    // (2) non-increasing from 0 to the v_π cluster and from π to the v_2π
    // cluster, non-decreasing in between
    let mut mono = LemmaCheck::new();
    for i in 1..n {
        let increasing = match (phase[i - 1], phase[i]) {
            (Phase::BeforeVPi, Phase::BeforeVPi) | (Phase::PiToV2Pi, Phase::PiToV2Pi) => false,
            (Phase::VPiToPi, Phase::VPiToPi) | (Phase::AfterV2Pi, Phase::AfterV2Pi) => true,
            _ => continue,
        };
        let (a, b) = (r[i - 1], r[i]);
        let step = if increasing { b - a } else { a - b };
        mono.record(step + tol_rel(a.max(b)), samples[i].beta);
    }
    checks.insert(CHECK_MONOTONICITY.to_string(), mono.finish());

    let runs = plateaus(&r, tol_rel);
    // (3) local minima sit on the v_π / v_2π clusters, and both host one
    let mut minima = LemmaCheck::new();
    let (mut hit_pi, mut hit_2pi) = (false, false);
    for (p, depth) in extrema(&runs, true) {
        let at_pi = p.members.iter().any(|&i| phase[i] == Phase::VPi);
        let at_2pi = p.members.iter().any(|&i| phase[i] == Phase::V2Pi);
        hit_pi |= at_pi;
        hit_2pi |= at_2pi;
        let beta = samples[p.members[0]].beta;
        minima.record(if at_pi || at_2pi { depth } else { -depth }, beta);
    }
    if !hit_pi {
        minima.fail(Some(normalize_angle(cluster(profile, profile.v_pi, None).0)));
    }
    if !hit_2pi {
        minima.fail(Some(normalize_angle(cluster(profile, profile.v_2pi, None).0)));
    }
    checks.insert(CHECK_LOCAL_MINIMA.to_string(), minima.finish());

    // (4) local maxima sit on the arcs holding 0 and π, and the global
    // maximum is reached there
    let mut maxima = LemmaCheck::new();
    let on_axis = |i: usize| {
        let a = &arcs[samples[i].arc_id];
        a.contains_beta(0.0) || a.contains_beta(PI)
    };
    for (p, height) in extrema(&runs, false) {
        let ok = p.members.iter().any(|&i| on_axis(i));
        maxima.record(if ok { height } else { -height }, samples[p.members[0]].beta);
    }
    let global = profile.max_r();
    let best = (0..n).filter(|&i| on_axis(i)).map(|i| r[i]).fold(f64::NEG_INFINITY, f64::max);
    maxima.record(best - global + tol::SWEEP, 0.0);
    checks.insert(CHECK_MAXIMA.to_string(), maxima.finish());

    // (5) endpoint witnesses: the leading endpoint (farther along e1) is the
    // numerator witness before v_π and after v_2π; the roles swap between.
    let mut witnesses = LemmaCheck::new();
    let x = &profile.instance.x;
    let lead_is_x2 = x.x2()[0] >= x.x1()[0];
    for (s, ph) in samples.iter().zip(&phase) {
        let expect_lead = match ph {
            Phase::BeforeVPi | Phase::AfterV2Pi => true,
            Phase::VPiToPi | Phase::PiToV2Pi => false,
            Phase::VPi | Phase::V2Pi => continue,
        };
        if s.q.m_tie {
            continue;
        }
        let t_expected = if expect_lead == lead_is_x2 { 1.0 } else { 0.0 };
        let m_is_x1 = t_expected == 1.0;
        let miss = (s.q.t_n - t_expected).abs();
        let ok = miss <= 1e-9 && s.q.x_m_is_x1 == m_is_x1;
        witnesses.record(if ok { 1.0 } else { -miss.max(1e-9) }, s.beta);
    }
    checks.insert(CHECK_WITNESSES.to_string(), witnesses.finish());

    let mut angles = LemmaCheck::new();
    let sum: f64 = profile.external_angles.iter().sum();
    angles.record(1e-9 - (sum - TAU).abs(), 0.0);
    for &e in &profile.external_angles {
        angles.record(e.min(PI - e), 0.0);
    }
    checks.insert(CHECK_EXTERNAL_ANGLES.to_string(), angles.finish());

    LemmaReport { checks }
}

struct Plateau {
    value: f64,
    members: Vec<usize>,
}

/// Strict local minima (or maxima) among cyclic plateaus, each with its
/// depth (height) relative to the nearer neighbour.
fn extrema(runs: &[Plateau], minimum: bool) -> Vec<(&Plateau, f64)> {
    let m = runs.len();
    if m < 2 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, p) in runs.iter().enumerate() {
        let prev = runs[(i + m - 1) % m].value;
        let next = runs[(i + 1) % m].value;
        let strict = if minimum {
            p.value < prev && p.value < next
        } else {
            p.value > prev && p.value > next
        };
        if strict {
            out.push((p, (p.value - prev).abs().min((p.value - next).abs())));
        }
    }
    out
}

/// Cyclic runs of (near-)equal values.
fn plateaus(values: &[f64], tol_rel: impl Fn(f64) -> f64) -> Vec<Plateau> {
    let n = values.len();
    if n == 0 {
        return Vec::new();
    }
    let same = |a: f64, b: f64| (a - b).abs() <= tol_rel(a.max(b));
    // start at a boundary so that no run straddles the seam
    let start = (0..n).find(|&i| !same(values[i], values[(i + n - 1) % n]));
    let Some(start) = start else {
        return vec![Plateau {
            value: values[0],
            members: (0..n).collect(),
        }];
    };
    let mut out: Vec<Plateau> = Vec::new();
    for k in 0..n {
        let i = (start + k) % n;
        match out.last_mut() {
            Some(p) if same(p.value, values[i]) => p.members.push(i),
            _ => out.push(Plateau {
                value: values[i],
                members: vec![i],
            }),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::hexagon_instance;

    #[test]
    fn plane_orientation() {
        let (x, _) = hexagon_instance();
        let plane = PlaneEmbedding::for_segment(&x, None).unwrap();
        let d = plane.direction(PI / 2.0);
        assert!(d.dist(&Vector::xy(1.0, 0.0)) < 1e-15);
        let d = plane.direction(0.0);
        assert!(d.dist(&Vector::xy(0.0, 1.0)) < 1e-15);
    }

    #[test]
    fn hexagon_events() {
        let (x, y) = hexagon_instance();
        let inst = PlanarInstance::for_segment(&x, &y).unwrap();
        let ev = event_angles(&inst.x, &inst.y);
        assert_eq!(ev.len(), 18);
        assert_eq!(arc_boundaries(&ev).len(), 18);
        let right = inst
            .y
            .vertices()
            .iter()
            .position(|v| inst.plane.lift(v.as_2d()).dist(&Vector::xy(3.0, 0.0)) < 1e-12)
            .unwrap();
        let d_exit = ev
            .iter()
            .find(|e| e.vertex_id == right && e.ray_kind == RayKind::DExit)
            .unwrap();
        assert!((d_exit.beta - PI / 2.0).abs() < 1e-12);
        let via_x2 = ev
            .iter()
            .find(|e| e.vertex_id == right && e.ray_kind == RayKind::YN)
            .unwrap();
        assert!((via_x2.beta - (PI / 2.0 - (1.0f64 / 3.0).atan())).abs() < 1e-12);
    }

    #[test]
    fn hexagon_v_pi() {
        let (x, y) = hexagon_instance();
        let inst = PlanarInstance::for_segment(&x, &y).unwrap();
        let st = find_v_pi_v_2pi(&inst.y, &inst.x).unwrap();
        assert!(inst.vertex_ambient(st.v_pi).dist(&Vector::xy(3.0, 0.0)) < 1e-12);
        assert!(inst.vertex_ambient(st.v_2pi).dist(&Vector::xy(-3.0, 0.0)) < 1e-12);
        assert!((st.alpha0 - PI / 2.0).abs() < 1e-12);
        let last = st.steps.last().unwrap().1;
        assert!((last - st.alpha0 - TAU).abs() < 1e-9);
    }

    #[test]
    fn square_v_pi() {
        let y = Polytope::from_vertices_2d(&[
            Vector::xy(2.0, 2.0),
            Vector::xy(-2.0, 2.0),
            Vector::xy(-2.0, -2.0),
            Vector::xy(2.0, -2.0),
        ])
        .unwrap();
        let x = Segment::new(Vector::xy(0.0, -0.5), Vector::xy(0.0, 1.0)).unwrap();
        let inst = PlanarInstance::for_segment(&x, &y).unwrap();
        let st = find_v_pi_v_2pi(&inst.y, &inst.x).unwrap();
        // α0 = π/2 on the top face; crossing (2,2) lands exactly on π, so the
        // right face sits at π and (2,−2) is the crossing that passes it.
        assert!(inst.vertex_ambient(st.v_pi).dist(&Vector::xy(2.0, -2.0)) < 1e-12);
        assert!(inst.vertex_ambient(st.v_2pi).dist(&Vector::xy(-2.0, 2.0)) < 1e-12);
    }

    #[test]
    fn covering_interval_wraps() {
        let (lo, hi) = covering_interval(&[0.1, 6.2, 0.3]);
        assert!((lo - 6.2).abs() < 1e-15 && (hi - (0.3 + TAU)).abs() < 1e-15);
        let (lo, hi) = covering_interval(&[1.0, 1.5, 1.2]);
        assert_eq!((lo, hi), (1.0, 1.5));
    }
}
