use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use mmq::sweep::SweepProfile;

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0; // drops the sign of −0
    }
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round12(n.as_f64().expect("f64 number"));
            if let Some(r) = serde_json::Number::from_f64(x) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with every float rounded to 12 significant digits.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("report serializes");
    round_value(&mut v);
    serde_json::to_string_pretty(&v).expect("value serializes")
}

pub fn print_json<T: Serialize>(value: &T) {
    println!("{}", to_json(value));
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> std::io::Result<()> {
    std::fs::write(path, to_json(value) + "\n")
}

pub const PROFILE_HEADER: [&str; 13] = [
    "beta",
    "dx",
    "dy",
    "r",
    "N",
    "M",
    "tN",
    "xM_is_x1",
    "faceN",
    "faceM",
    "faceD",
    "arc_id",
    "is_event_adjacent",
];

fn faces<'a>(set: impl IntoIterator<Item = &'a usize>) -> String {
    set.into_iter().map(usize::to_string).collect::<Vec<_>>().join(";")
}

fn num(x: f64) -> String {
    round12(x).to_string()
}

/// One row per sample. In 2D `dx, dy` are the ambient direction; above two
/// dimensions they are its coordinates in the sweep plane.
pub fn write_profile_csv(path: &Path, profile: &SweepProfile) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(PROFILE_HEADER)?;
    let plane = &profile.instance.plane;
    for s in &profile.samples {
        let (dx, dy) = if s.d.dim() == 2 { s.d.as_2d() } else { plane.project(&s.d).as_2d() };
        let q = &s.q;
        w.write_record([
            num(s.beta),
            num(dx),
            num(dy),
            num(q.r),
            num(q.n),
            num(q.m),
            num(q.t_n),
            q.x_m_is_x1.to_string(),
            faces(&q.faces_n),
            faces(&q.faces_m),
            q.faces_d.as_ref().map(faces).unwrap_or_default(),
            s.arc_id.to_string(),
            s.event_adjacent.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
pub struct EventRecord {
    pub beta: f64,
    pub vertex: Vec<f64>,
    pub vertex_id: usize,
    pub ray_kind: mmq::sweep::RayKind,
}

pub fn event_records(profile: &SweepProfile) -> Vec<EventRecord> {
    profile
        .events
        .iter()
        .map(|e| EventRecord {
            beta: e.beta,
            vertex: profile.instance.vertex_ambient(e.vertex_id).into_coords(),
            vertex_id: e.vertex_id,
            ray_kind: e.ray_kind,
        })
        .collect()
}
