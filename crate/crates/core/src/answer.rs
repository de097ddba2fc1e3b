//! The common answer record produced by every shape query.

use serde::{Deserialize, Serialize};

use crate::geom::{Circle, Point, Triangle};

/// Whether the winning object was a precomputed minimal object containing
/// the query point, or an extension with the query point on its boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Contained,
    BoundaryExtension,
}

/// Concrete placed geometry of the winning object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Geometry {
    Interval { left: f64, right: f64 },
    Square { l: f64, r: f64, b: f64, t: f64 },
    Rect { l: f64, r: f64, b: f64, t: f64 },
    Triangle { v_bl: Point, v_br: Point, v_top: Point },
    Circle { center: Point, radius: f64 },
}

impl Geometry {
    pub fn triangle(t: &Triangle) -> Geometry {
        Geometry::Triangle {
            v_bl: t.v_bl,
            v_br: t.v_br,
            v_top: t.v_top,
        }
    }

    pub fn circle(c: &Circle) -> Geometry {
        Geometry::Circle {
            center: c.center,
            radius: c.radius,
        }
    }
}

/// A localized-query answer: size of the winning object (length, side,
/// semi-perimeter or radius), its placement, and where it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryAnswer {
    pub size: f64,
    pub geometry: Geometry,
    pub provenance: Provenance,
    /// Name of the structure family that produced the winner
    /// (e.g. "contained", "stabbed-tbr", "hq-orientation-3").
    pub family: String,
}

impl QueryAnswer {
    pub fn better_of(self, other: QueryAnswer) -> QueryAnswer {
        if other.size < self.size {
            other
        } else {
            self
        }
    }
}

/// Keeps the smaller-size answer, treating `None` as +infinity.
pub fn min_answer(a: Option<QueryAnswer>, b: Option<QueryAnswer>) -> Option<QueryAnswer> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.better_of(y)),
        (x, None) => x,
        (None, y) => y,
    }
}
