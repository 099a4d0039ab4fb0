//! Instance files.
//!
//! ```json
//! { "dimension": 2,
//!   "X": { "x1": [0, -0.5], "x2": [0, 1] },
//!   "Y": { "vertices": [[3, 0], [1, 2], ...] } }
//! ```
//!
//! `Y` may instead (or additionally) carry
//! `"halfspaces": [{"a": [...], "b": r}, ...]`; above two dimensions both
//! representations are required.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::polytope::{HalfSpace, Polytope, Segment};
use crate::vector::Vector;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("cannot read instance: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed instance: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("malformed instance: {0}")]
    Schema(String),
    #[error("invalid geometry: {0}")]
    Geometry(#[from] Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentSpec {
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfSpaceSpec {
    pub a: Vec<f64>,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub halfspaces: Option<Vec<HalfSpaceSpec>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub dimension: usize,
    #[serde(rename = "X")]
    pub x: SegmentSpec,
    #[serde(rename = "Y")]
    pub y: PolytopeSpec,
}

fn vector(coords: &[f64], dim: usize, what: &str) -> Result<Vector, InstanceError> {
    if coords.len() != dim {
        return Err(InstanceError::Schema(format!(
            "{what} has {} coordinates, expected {dim}",
            coords.len()
        )));
    }
    Ok(Vector::new(coords.to_vec())?)
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self, InstanceError> {
        InstanceFile::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    /// Builds the geometry. Collinearity of `X` with the origin is only
    /// enforced when `allow_noncollinear` is false.
    pub fn build(&self, allow_noncollinear: bool) -> Result<(Segment, Polytope), InstanceError> {
        let (x, y) = self.build_unchecked()?;
        if allow_noncollinear {
            return Ok((x, y));
        }
        Ok((Segment::new(x.x1().clone(), x.x2().clone())?, y))
    }

    /// Builds the geometry without any hypothesis check on `X`, leaving it
    /// to [`crate::polytope::validate_instance`].
    pub fn build_unchecked(&self) -> Result<(Segment, Polytope), InstanceError> {
        let n = self.dimension;
        if n < 2 {
            return Err(InstanceError::Schema("dimension must be at least 2".into()));
        }
        let x1 = vector(&self.x.x1, n, "X.x1")?;
        let x2 = vector(&self.x.x2, n, "X.x2")?;
        let x = Segment::new_unchecked(x1, x2)?;
        let vertices = self
            .y
            .vertices
            .as_ref()
            .map(|vs| vs.iter().map(|v| vector(v, n, "Y vertex")).collect::<Result<Vec<_>, _>>())
            .transpose()?;
        let halfspaces = self
            .y
            .halfspaces
            .as_ref()
            .map(|hs| {
                hs.iter()
                    .map(|h| Ok(HalfSpace::new(vector(&h.a, n, "Y half-space normal")?, h.b)?))
                    .collect::<Result<Vec<_>, InstanceError>>()
            })
            .transpose()?;
        let y = match (vertices, halfspaces) {
            (Some(v), Some(h)) => Polytope::from_both(h, v, n)?,
            (Some(v), None) if n == 2 => Polytope::from_vertices_2d(&v)?,
            (None, Some(h)) if n == 2 => Polytope::from_halfspaces(h, 2)?,
            (None, None) => {
                return Err(InstanceError::Schema("Y needs vertices or halfspaces".into()));
            }
            _ => {
                return Err(InstanceError::Schema(
                    "above two dimensions Y needs both vertices and halfspaces".into(),
                ));
            }
        };
        Ok((x, y))
    }

    /// Serializes an instance with `Y` given by its vertices (and, above two
    /// dimensions, also its half-spaces).
    pub fn from_geometry(x: &Segment, y: &Polytope) -> Self {
        let vertices = Some(y.vertices().iter().map(|v| v.coords().to_vec()).collect());
        let halfspaces = (y.dim() > 2).then(|| {
            y.halfspaces()
                .iter()
                .map(|h| HalfSpaceSpec {
                    a: h.normal().coords().to_vec(),
                    b: h.offset(),
                })
                .collect()
        });
        InstanceFile {
            dimension: y.dim(),
            x: SegmentSpec {
                x1: x.x1().coords().to_vec(),
                x2: x.x2().coords().to_vec(),
            },
            y: PolytopeSpec { vertices, halfspaces },
        }
    }
}
