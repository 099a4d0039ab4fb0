//! Randomized and oracle-based verification campaigns.
//!
//! Every campaign returns a [`CampaignReport`] in which each check carries a
//! signed margin: positive is slack, negative a violation. Random instances
//! come from [`random_instance`], driven by ChaCha8 seeded through
//! `SeedableRng::seed_from_u64`, so a failing seed replays bit-exactly on any
//! platform.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::{validate_instance, Polytope, Segment};
use crate::quotient::{argmax_direction, denominator, numerator};
use crate::ray::lambda_star;
use crate::sweep::{analyze_profile, sweep_profile_default, PlaneEmbedding, SweepProfile};
use crate::vector::Vector;

pub const MAX_ATTEMPTS: usize = 1000;

/// Where the origin sits relative to `X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `x1 = −s·x2` with `s > 0`: the origin lies inside `X`.
    Straddle,
    /// `x1 = c·x2` with `0.2 ≤ c ≤ 0.8`: `X` lies on one side of the origin.
    Outside,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceParams {
    pub seed: u64,
    pub n_vertices_y: usize,
    pub radius_range: (f64, f64),
    pub segment_scale: f64,
    pub asymmetry: f64,
    pub regime: Regime,
}

impl InstanceParams {
    /// Parameters drawn from `seed` itself, as used by the random campaigns.
    pub fn from_seed(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
        let lo = rng.gen_range(0.5..2.0);
        InstanceParams {
            seed,
            n_vertices_y: rng.gen_range(3..=24),
            radius_range: (lo, lo * rng.gen_range(1.05..3.0)),
            segment_scale: rng.gen_range(0.1..0.9),
            asymmetry: rng.gen_range(0.0..1.0),
            regime: if rng.gen_bool(0.5) { Regime::Straddle } else { Regime::Outside },
        }
    }

    fn check(&self) -> Result<()> {
        let (lo, hi) = self.radius_range;
        let bad = |m: &str| Err(Error::InvalidInstance(m.to_string()));
        if !(3..=24).contains(&self.n_vertices_y) {
            return bad("n_vertices_y must lie in [3, 24]");
        }
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            return bad("radius_range must be a positive, ordered pair");
        }
        if !(self.segment_scale > 0.0 && self.segment_scale < 1.0) {
            return bad("segment_scale must lie in (0, 1)");
        }
        if !(0.0..=1.0).contains(&self.asymmetry) {
            return bad("asymmetry must lie in [0, 1]");
        }
        Ok(())
    }
}

/// Fraction of its stratum an angle may wander from the stratum start.
const JITTER: f64 = 0.4;

/// Random valid instance in the plane.
///
/// `Y` is the hull of `n_vertices_y` points at sorted random angles (one
/// per equal stratum of the circle) and radii drawn from `radius_range`; with
/// `asymmetry = 0` the points come in antipodal pairs, so `Y` is centrally
/// symmetric. `X` lies on a random line through the origin and is shrunk by
/// factors of 0.9 until both `−x1` and `−x2` clear every face of `Y` by at
/// least 0.05 times the smallest vertex radius.
pub fn random_instance(params: &InstanceParams) -> Result<(Segment, Polytope)> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let (lo, hi) = params.radius_range;
    let symmetric = params.asymmetry == 0.0;
    for _ in 0..MAX_ATTEMPTS {
        // one jittered angle per equal stratum keeps every angular gap
        // below 2π·1.4/n ≤ 0.94π, so the origin stays well inside the hull
        let (count, span) = if symmetric {
            (params.n_vertices_y.div_ceil(2), PI)
        } else {
            (params.n_vertices_y, TAU)
        };
        let offset = rng.gen_range(0.0..TAU);
        let mut polar: Vec<(f64, f64)> = Vec::with_capacity(2 * count);
        for k in 0..count {
            let a = offset + span * (k as f64 + JITTER * rng.gen_range(0.0..1.0)) / count as f64;
            let r = rng.gen_range(lo..=hi);
            polar.push((a.rem_euclid(TAU), r));
            if symmetric {
                polar.push(((a + PI).rem_euclid(TAU), r));
            }
        }
        polar.sort_by(|p, q| p.0.total_cmp(&q.0));
        let points: Vec<Vector> = polar.iter().map(|(a, r)| Vector::xy(r * a.cos(), r * a.sin())).collect();
        let Ok(y) = Polytope::from_vertices_2d(&points) else { continue };

        let theta = rng.gen_range(0.0..TAU);
        let e = Vector::xy(theta.cos(), theta.sin());
        let ratio = match params.regime {
            Regime::Straddle => -(1.0 - params.asymmetry * rng.gen_range(0.0..1.0)),
            Regime::Outside => rng.gen_range(0.2..=0.8),
        };
        let r_min = y.vertices().iter().map(Vector::norm).fold(f64::INFINITY, f64::min);
        let margin = 0.05 * r_min;
        let mut len = params.segment_scale * r_min;
        let clears = |len: f64| {
            let x2 = e.scale(len);
            let x1 = x2.scale(ratio);
            y.min_slack(&-&x1).min(y.min_slack(&-&x2)) >= margin
        };
        let mut shrinks = 0;
        while !clears(len) && shrinks < 200 {
            len *= 0.9;
            shrinks += 1;
        }
        if !clears(len) {
            continue;
        }
        let x2 = e.scale(len);
        let Ok(x) = Segment::new(x2.scale(ratio), x2) else { continue };
        if validate_instance(&x, &y).ok {
            return Ok((x, y));
        }
    }
    Err(Error::GenerationFailed(MAX_ATTEMPTS))
}

/// The instance the random campaigns use for `seed`.
pub fn seeded_instance(seed: u64) -> Result<(Segment, Polytope)> {
    random_instance(&InstanceParams::from_seed(seed))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    /// Seed of the random instance, absent for a user-supplied instance.
    pub seed: Option<u64>,
    pub check: String,
    pub margin: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CampaignReport {
    pub trials: usize,
    pub evaluations: usize,
    pub failures: Vec<Failure>,
    /// Smallest margin seen per check.
    pub worst_margin: BTreeMap<String, f64>,
}

impl CampaignReport {
    pub fn single() -> Self {
        CampaignReport {
            trials: 1,
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Records one evaluation of `check`; a negative margin is a failure.
    pub fn record(&mut self, check: &str, margin: f64, detail: impl FnOnce() -> String) {
        self.evaluations += 1;
        let w = self.worst_margin.entry(check.to_string()).or_insert(f64::INFINITY);
        *w = w.min(margin);
        if !(margin >= 0.0) {
            self.failures.push(Failure {
                seed: None,
                check: check.to_string(),
                margin,
                detail: detail(),
            });
        }
    }

    fn with_seed(mut self, seed: u64) -> Self {
        for f in &mut self.failures {
            f.seed = Some(seed);
        }
        self
    }

    /// Folds `other` into `self`; merging in seed order keeps reports
    /// deterministic.
    pub fn merge(&mut self, other: CampaignReport) {
        self.trials += other.trials;
        self.evaluations += other.evaluations;
        self.failures.extend(other.failures);
        for (k, v) in other.worst_margin {
            let w = self.worst_margin.entry(k).or_insert(f64::INFINITY);
            *w = w.min(v);
        }
    }
}

/// Deliberate defects for exercising the campaigns themselves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    #[default]
    None,
    /// The denominator takes the larger endpoint exit instead of the smaller.
    DenominatorMax,
}

fn sweep_directions(x: &Segment, count: usize) -> Result<Vec<Vector>> {
    let plane = PlaneEmbedding::for_segment(x, None)?;
    Ok((0..count).map(|k| plane.direction(TAU * k as f64 / count as f64)).collect())
}

pub const CHECK_VERTEX_MINIMUM: &str = "vertex_minimum";

/// The denominator against a `grid`-point scan of `λ*` along `X`, for
/// `directions` equally spaced directions in the plane of `X`.
///
/// The scan includes both endpoints and `λ*` is concave along `X`, so the
/// scan minimum is an endpoint value and the only allowance is 1e-9.
pub fn verify_vertex_minimum(x: &Segment, y: &Polytope, directions: usize, grid: usize) -> Result<CampaignReport> {
    verify_vertex_minimum_with(x, y, directions, grid, Fault::None)
}

pub fn verify_vertex_minimum_with(x: &Segment, y: &Polytope, directions: usize, grid: usize, fault: Fault) -> Result<CampaignReport> {
    if grid < 2 {
        return Err(Error::InvalidInstance("grid needs at least 2 points".into()));
    }
    let mut report = CampaignReport::single();
    for d in sweep_directions(x, directions)? {
        let m = match fault {
            Fault::None => denominator(&d, x, y)?.value,
            Fault::DenominatorMax => lambda_star(x.x1(), &d, y)?.max(lambda_star(x.x2(), &d, y)?),
        };
        let mut scan = f64::INFINITY;
        for k in 0..grid {
            let t = k as f64 / (grid - 1) as f64;
            scan = scan.min(lambda_star(&x.point_at(t), &d, y)?);
        }
        let err = (scan - m).abs();
        report.record(CHECK_VERTEX_MINIMUM, 1e-9 - err, || {
            format!("d = {:?}: denominator {m}, grid minimum {scan}", d.coords())
        });
    }
    Ok(report)
}

pub const CHECK_SWEEP_MAX: &str = "sweep_max_le_r_star";
pub const CHECK_MAX_ARCS: &str = "max_on_arcs_at_0_and_pi";

/// Samples per arc so that a sweep totals at least `total` samples.
pub fn samples_per_arc_for(x: &Segment, y: &Polytope, total: usize) -> Result<usize> {
    let arcs = sweep_profile_default(x, y, 3)?.arcs.len();
    Ok(total.div_ceil(arcs).saturating_sub(2).max(3))
}

fn theorem_max_checks(profile: &SweepProfile, r_star: f64, report: &mut CampaignReport) {
    let max = profile.max_r();
    report.record(CHECK_SWEEP_MAX, r_star + 1e-6 - max, || {
        format!("sweep max {max} exceeds r_star {r_star}")
    });
    let on_axis = profile
        .arcs
        .iter()
        .filter(|a| a.contains_beta(0.0) || a.contains_beta(PI))
        .map(|a| a.r_max)
        .fold(f64::NEG_INFINITY, f64::max);
    report.record(CHECK_MAX_ARCS, on_axis - (max - 1e-6), || {
        format!("sweep max {max} but at most {on_axis} on the arcs holding 0 and π")
    });
}

/// Sweep maximum against the analytic `r_star`, and its location.
pub fn verify_theorem_max(x: &Segment, y: &Polytope, sweep_samples: usize) -> Result<CampaignReport> {
    let spa = samples_per_arc_for(x, y, sweep_samples)?;
    let profile = sweep_profile_default(x, y, spa)?;
    let r_star = argmax_direction(x, y)?.r_star;
    let mut report = CampaignReport::single();
    theorem_max_checks(&profile, r_star, &mut report);
    Ok(report)
}

/// Jump statistics of one series sampled on a β-grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpStats {
    pub max_jump: f64,
    pub median_jump: f64,
    pub at_beta: f64,
    /// Cells whose jump exceeds [`JUMP_FACTOR`] times the median.
    pub suspects: usize,
    /// Suspects that keep more than half their jump in a single cell after
    /// splitting into [`SUBDIVISIONS`] parts, i.e. that look discontinuous
    /// rather than steep.
    pub confirmed: usize,
    /// Largest jump outside the steep-but-continuous suspects.
    pub effective_max_jump: f64,
}

pub const JUMP_FACTOR: f64 = 50.0;
pub const SUBDIVISIONS: usize = 64;

pub const CONTINUITY_SERIES: [&str; 4] = ["lambda_x1", "lambda_x2", "numerator", "denominator"];

fn series_at(x: &Segment, y: &Polytope, d: &Vector) -> Result<[f64; 4]> {
    Ok([
        lambda_star(x.x1(), d, y)?,
        lambda_star(x.x2(), d, y)?,
        numerator(d, x, y)?.value,
        denominator(d, x, y)?.value,
    ])
}

/// Jump statistics for `λ*(x1,·)`, `λ*(x2,·)`, `N` and `M` on a β-grid of
/// the given step over the plane of `X`.
pub fn continuity_scan(x: &Segment, y: &Polytope, grid_step: f64) -> Result<BTreeMap<String, JumpStats>> {
    if !(grid_step > 0.0 && grid_step < PI) {
        return Err(Error::InvalidInstance("grid_step must lie in (0, π)".into()));
    }
    let plane = PlaneEmbedding::for_segment(x, None)?;
    let steps = (TAU / grid_step).ceil() as usize;
    let rows: Vec<[f64; 4]> = (0..=steps)
        .into_par_iter()
        .map(|k| series_at(x, y, &plane.direction(k as f64 * grid_step)))
        .collect::<Result<_>>()?;
    let mut out = BTreeMap::new();
    for (j, name) in CONTINUITY_SERIES.iter().enumerate() {
        let jumps: Vec<f64> = rows.windows(2).map(|w| (w[1][j] - w[0][j]).abs()).collect();
        let (at, max_jump) = jumps
            .iter()
            .copied()
            .enumerate()
            .fold((0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
        let mut sorted = jumps.clone();
        sorted.sort_by(f64::total_cmp);
        let median_jump = sorted[sorted.len() / 2];
        // a constant series has median 0; allow rounding-level wiggle
        let limit = JUMP_FACTOR * median_jump.max(1e-12);
        let (mut suspects, mut confirmed, mut effective) = (0, 0, 0.0f64);
        for (k, &jump) in jumps.iter().enumerate() {
            if jump <= limit {
                effective = effective.max(jump);
                continue;
            }
            suspects += 1;
            let h = grid_step / SUBDIVISIONS as f64;
            let mut prev = rows[k][j];
            let mut sub = 0.0f64;
            for i in 1..=SUBDIVISIONS {
                let v = series_at(x, y, &plane.direction(k as f64 * grid_step + i as f64 * h))?[j];
                sub = sub.max((v - prev).abs());
                prev = v;
            }
            if sub > 0.5 * jump {
                confirmed += 1;
                effective = effective.max(jump);
            }
        }
        out.insert(
            name.to_string(),
            JumpStats {
                max_jump,
                median_jump,
                at_beta: at as f64 * grid_step,
                suspects,
                confirmed,
                effective_max_jump: effective,
            },
        );
    }
    Ok(out)
}

/// Flags jumps above 50 times the median jump of their series, unless
/// subdivision shows the series is merely steep there.
pub fn verify_continuity(x: &Segment, y: &Polytope, grid_step: f64) -> Result<CampaignReport> {
    let mut report = CampaignReport::single();
    for (name, s) in continuity_scan(x, y, grid_step)? {
        let limit = JUMP_FACTOR * s.median_jump.max(1e-12);
        report.record(&format!("continuity_{name}"), limit - s.effective_max_jump, || {
            format!(
                "{} discontinuity-like jump(s), largest {} at β = {} (median {})",
                s.confirmed, s.max_jump, s.at_beta, s.median_jump
            )
        });
    }
    Ok(report)
}

/// Outcome of the brute-force direction search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaiveArgmax {
    pub d_star: Vector,
    pub beta_star: f64,
    pub r_star: f64,
    /// Spacing of the λ scan.
    pub lambda_step: f64,
    /// Smallest scanned minimax over all directions.
    pub m_min: f64,
    /// Bound on `|r_star − true maximum|` when the true maximizer is on the
    /// direction grid: `h (r + 1) / (m_min − h)` with `h` the λ spacing.
    pub bound: f64,
}

/// The search the analytic result replaces: `grid` directions in the plane
/// of `X` (including `β = 0` and `β = π`, so `grid` must be even) × `grid + 1`
/// points along `X` × a full scan of `grid + 1` values of `λ`, taking the
/// largest feasible `λ` for both the maximax and the minimax.
///
/// The maximizing `t` of the true numerator at `±x2` is an endpoint, which
/// the grid contains, so `N` and `M` are each off by at most one λ step
/// there and `r` by at most `bound`.
pub fn naive_argmax(x: &Segment, y: &Polytope, grid: usize) -> Result<NaiveArgmax> {
    if grid < 4 || !grid.is_multiple_of(2) {
        return Err(Error::InvalidInstance("naive grid must be even and at least 4".into()));
    }
    let plane = PlaneEmbedding::for_segment(x, None)?;
    let lambda_box = y.radius() + x.x1().norm().max(x.x2().norm());
    let h = lambda_box / grid as f64;
    let (mut best, mut best_k, mut m_min) = (f64::NEG_INFINITY, 0, f64::INFINITY);
    for k in 0..grid {
        let d = plane.direction(TAU * k as f64 / grid as f64);
        let (mut n, mut m) = (f64::NEG_INFINITY, f64::INFINITY);
        for i in 0..=grid {
            let start = -&x.point_at(i as f64 / grid as f64);
            let mut reach = 0.0f64;
            for j in 0..=grid {
                let l = j as f64 * h;
                if y.contains(&start.axpy(l, &d), false, crate::tol::MEMBERSHIP) {
                    reach = reach.max(l);
                }
            }
            n = n.max(reach);
            m = m.min(reach);
        }
        m_min = m_min.min(m);
        if m > 0.0 && n / m > best {
            best = n / m;
            best_k = k;
        }
    }
    if !(m_min > h) {
        return Err(Error::InvalidInstance("naive grid too coarse for this instance".into()));
    }
    let beta_star = TAU * best_k as f64 / grid as f64;
    Ok(NaiveArgmax {
        d_star: plane.direction(beta_star),
        beta_star,
        r_star: best,
        lambda_step: h,
        m_min,
        bound: h * (best + 1.0) / (m_min - h),
    })
}

/// Sizes of the campaigns run by [`verify_all`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub directions: usize,
    pub grid: usize,
    pub sweep_samples: usize,
    pub grid_step: f64,
    pub fault: Fault,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            directions: 360,
            grid: 1001,
            sweep_samples: 3600,
            grid_step: 1e-3,
            fault: Fault::None,
        }
    }
}

/// Every campaign, plus the sweep lemma checks, on one instance.
pub fn verify_all(x: &Segment, y: &Polytope, cfg: &CampaignConfig) -> Result<CampaignReport> {
    let mut report = verify_vertex_minimum_with(x, y, cfg.directions, cfg.grid, cfg.fault)?;
    let spa = samples_per_arc_for(x, y, cfg.sweep_samples)?;
    let profile = sweep_profile_default(x, y, spa)?;
    let r_star = argmax_direction(x, y)?.r_star;
    let mut sweep = CampaignReport::default();
    theorem_max_checks(&profile, r_star, &mut sweep);
    for (name, c) in analyze_profile(&profile).checks {
        sweep.record(&format!("lemma_{name}"), c.worst_margin, || {
            format!("worst at β = {:?}", c.location_beta)
        });
    }
    report.merge(sweep);
    let mut cont = verify_continuity(x, y, cfg.grid_step)?;
    cont.trials = 0;
    report.merge(cont);
    Ok(report)
}

/// [`verify_all`] on `trials` seeded instances with seeds `seed, seed+1, …`.
/// Trials run in parallel and merge in seed order. An instance that cannot
/// be generated or evaluated is itself a failure.
pub fn random_campaign(trials: usize, seed: u64, cfg: &CampaignConfig) -> CampaignReport {
    let reports: Vec<CampaignReport> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i);
            let outcome = seeded_instance(s).and_then(|(x, y)| verify_all(&x, &y, cfg));
            match outcome {
                Ok(r) => r.with_seed(s),
                Err(e) => {
                    let mut r = CampaignReport::single();
                    r.record("evaluation", -1.0, || e.to_string());
                    r.with_seed(s)
                }
            }
        })
        .collect();
    let mut total = CampaignReport::default();
    for r in reports {
        total.merge(r);
    }
    total
}
