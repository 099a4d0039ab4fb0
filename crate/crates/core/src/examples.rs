//! Built-in instances.

use crate::polytope::{Polytope, Segment};
use crate::vector::Vector;

pub const HEXAGON_X1: [f64; 2] = [0.0, -0.5];
pub const HEXAGON_X2: [f64; 2] = [0.0, 1.0];
/// Counterclockwise, starting from the rightmost vertex.
pub const HEXAGON_VERTICES: [[f64; 2]; 6] = [
    [3.0, 0.0],
    [1.0, 2.0],
    [-1.0, 2.0],
    [-3.0, 0.0],
    [-1.0, -2.0],
    [1.0, -2.0],
];

/// Segment from `(0, −0.5)` to `(0, 1)` inside the hexagon with vertices
/// `(±1, ±2)` and `(±3, 0)`.
pub fn hexagon_instance() -> (Segment, Polytope) {
    let x = Segment::new(Vector::xy(HEXAGON_X1[0], HEXAGON_X1[1]), Vector::xy(HEXAGON_X2[0], HEXAGON_X2[1]))
        .expect("valid segment");
    let pts: Vec<Vector> = HEXAGON_VERTICES.iter().map(|v| Vector::xy(v[0], v[1])).collect();
    let y = Polytope::from_vertices_2d(&pts).expect("valid hexagon");
    (x, y)
}

pub const NAMES: [&str; 1] = ["hexagon"];

pub fn by_name(name: &str) -> Option<(Segment, Polytope)> {
    match name {
        "hexagon" => Some(hexagon_instance()),
        _ => None,
    }
}
