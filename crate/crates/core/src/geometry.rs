//! Planar primitives: points, circles, circumcircles and disk membership.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Twice-area threshold below which three points are treated as collinear (m²).
pub const DEGENERATE_AREA_EPS: f64 = 1.0e-9;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum GeometryError {
    #[error("points are collinear or coincident (twice-area {twice_area:e} m²)")]
    Degenerate { twice_area: f64 },
}

/// Horizontal position in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn midpoint(&self, other: &Point2D) -> Point2D {
        Point2D::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point2D,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point2D, radius: f64) -> Self {
        Self { center, radius }
    }

    pub fn contains(&self, p: &Point2D) -> bool {
        distance(&self.center, p) <= self.radius
    }
}

pub fn distance(p: &Point2D, q: &Point2D) -> f64 {
    (p.x - q.x).hypot(p.y - q.y)
}

/// Circle through three non-collinear points.
///
/// The center is solved from the perpendicular bisectors in a frame
/// translated to `p1`. The radius is the largest of the three center
/// distances, so all three defining points pass a closed-disk test.
pub fn circumcircle(p1: &Point2D, p2: &Point2D, p3: &Point2D) -> Result<Circle, GeometryError> {
    let (bx, by) = (p2.x - p1.x, p2.y - p1.y);
    let (cx, cy) = (p3.x - p1.x, p3.y - p1.y);
    let cross = bx * cy - by * cx;
    if cross.is_nan() || cross.abs() < DEGENERATE_AREA_EPS {
        return Err(GeometryError::Degenerate { twice_area: cross.abs() });
    }
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let d = 2.0 * cross;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    let center = Point2D::new(p1.x + ux, p1.y + uy);
    let radius = [p1, p2, p3]
        .iter()
        .map(|p| distance(&center, p))
        .fold(0.0, f64::max);
    Ok(Circle { center, radius })
}

/// Smallest circle through two points: centered at their midpoint.
pub fn diameter_circle(p1: &Point2D, p2: &Point2D) -> Circle {
    let center = p1.midpoint(p2);
    let radius = distance(&center, p1).max(distance(&center, p2));
    Circle { center, radius }
}

/// Indices of the points inside the closed disk, in ascending order.
pub fn covered_set(center: &Point2D, radius: f64, points: &[Point2D]) -> Vec<usize> {
    points
        .iter()
        .enumerate()
        .filter(|(_, p)| distance(center, p) <= radius)
        .map(|(i, _)| i)
        .collect()
}
