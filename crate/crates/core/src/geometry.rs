//! Planar primitives used by the decomposers: validated polygons, the
//! rigid transform that puts a polygon's longest edge on the X-axis, and the
//! horizontal-line queries that drive the channel sweep.
//!
//! Every value here is immutable once built and all operations are pure.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance for coincidence, merging and boundary classification (meters).
pub const EPS_GEOM: f64 = 1e-9;

/// Tolerance used when comparing against values printed to two decimals.
pub const EPS_REPORT: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Self { x, y }
    }
}

/// Cross product of `a - o` and `b - o`; positive when `o, a, b` turn left.
pub fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Axis-aligned rectangle, closed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub min: Point,
    pub max: Point,
}

impl Rect {
    pub fn from_center(center: Point, width: f64, height: f64) -> Self {
        Self {
            min: Point::new(center.x - width / 2.0, center.y - height / 2.0),
            max: Point::new(center.x + width / 2.0, center.y + height / 2.0),
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.min.x - EPS_GEOM
            && p.x <= self.max.x + EPS_GEOM
            && p.y >= self.min.y - EPS_GEOM
            && p.y <= self.max.y + EPS_GEOM
    }
}

/// Where a point sits relative to a polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

/// A simple polygon stored counter-clockwise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polygon {
    vertices: Vec<Point>,
}

impl Polygon {
    /// Validates `vertices` and orients them counter-clockwise.
    ///
    /// Consecutive vertices closer than [`EPS_GEOM`] (including a repeated
    /// closing vertex) are collapsed. A clockwise ring is reversed while
    /// keeping its first vertex in place.
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
            return Err(GeometryError::DegeneratePolygon(format!(
                "non-finite vertex ({}, {})",
                p.x, p.y
            )));
        }
        let mut ring: Vec<Point> = Vec::with_capacity(vertices.len());
        for p in vertices {
            if ring.last().is_none_or(|q| q.distance(&p) >= EPS_GEOM) {
                ring.push(p);
            }
        }
        while ring.len() > 1 && ring[0].distance(ring.last().unwrap()) < EPS_GEOM {
            ring.pop();
        }
        if ring.len() < 3 {
            return Err(GeometryError::DegeneratePolygon(format!(
                "{} distinct vertices, need at least 3",
                ring.len()
            )));
        }
        let signed = signed_area(&ring);
        let scale = bounding_extent(&ring);
        if signed.abs() <= EPS_GEOM * scale.max(1.0) {
            return Err(GeometryError::DegeneratePolygon("zero area".into()));
        }
        if let Some((i, j)) = first_self_intersection(&ring) {
            return Err(GeometryError::DegeneratePolygon(format!(
                "edges {i} and {j} intersect"
            )));
        }
        if signed < 0.0 {
            ring[1..].reverse();
        }
        Ok(Self { vertices: ring })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1` (wrapping).
    pub fn edge(&self, i: usize) -> (Point, Point) {
        let n = self.vertices.len();
        (self.vertices[i % n], self.vertices[(i + 1) % n])
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        (0..self.vertices.len()).map(move |i| self.edge(i))
    }

    /// Shoelace area; always positive for a validated polygon.
    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn centroid(&self) -> Point {
        let a = self.area();
        let (mut cx, mut cy) = (0.0, 0.0);
        for (p, q) in self.edges() {
            let w = p.x * q.y - q.x * p.y;
            cx += (p.x + q.x) * w;
            cy += (p.y + q.y) * w;
        }
        Point::new(cx / (6.0 * a), cy / (6.0 * a))
    }

    /// Index of the longest edge, lowest index on ties.
    pub fn longest_edge(&self) -> usize {
        let mut best = 0;
        let mut best_len = f64::NEG_INFINITY;
        for (i, (a, b)) in self.edges().enumerate() {
            let len = a.distance(&b);
            if len > best_len {
                best = i;
                best_len = len;
            }
        }
        best
    }

    pub fn bounds(&self) -> Rect {
        let mut min = Point::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.vertices {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        Rect { min, max }
    }

    pub fn is_convex(&self) -> bool {
        let n = self.vertices.len();
        let scale = bounding_extent(&self.vertices).max(1.0);
        (0..n).all(|i| {
            cross(
                self.vertices[i],
                self.vertices[(i + 1) % n],
                self.vertices[(i + 2) % n],
            ) >= -EPS_GEOM * scale
        })
    }

    /// Applies `t` to every vertex. Rigid motions keep the ring valid and CCW.
    pub fn transformed(&self, t: &AffineTransform) -> Polygon {
        Polygon {
            vertices: self.vertices.iter().map(|p| t.apply(*p)).collect(),
        }
    }

    /// Every point where the line `Y = y` meets the boundary, sorted by x.
    ///
    /// An edge lying on the line contributes both endpoints; points closer
    /// than [`EPS_GEOM`] are merged.
    pub fn horizontal_intersections(&self, y: f64) -> Vec<Point> {
        let mut xs = Vec::new();
        for (a, b) in self.edges() {
            let on_a = (a.y - y).abs() <= EPS_GEOM;
            let on_b = (b.y - y).abs() <= EPS_GEOM;
            if on_a || on_b {
                if on_a {
                    xs.push(a.x);
                }
                if on_b {
                    xs.push(b.x);
                }
                continue;
            }
            if (a.y < y) != (b.y < y) {
                let t = (y - a.y) / (b.y - a.y);
                xs.push(a.x + t * (b.x - a.x));
            }
        }
        xs.sort_by(f64::total_cmp);
        xs.dedup_by(|next, kept| (*next - *kept).abs() <= EPS_GEOM);
        xs.into_iter().map(|x| Point::new(x, y)).collect()
    }

    /// Vertices with `y_b < y < y_t` (open band).
    pub fn vertices_in_band(&self, y_b: f64, y_t: f64) -> Vec<Point> {
        self.vertices
            .iter()
            .copied()
            .filter(|p| p.y > y_b + EPS_GEOM && p.y < y_t - EPS_GEOM)
            .collect()
    }

    /// Horizontal extent of the polygon inside the closed band
    /// `[y_b, y_t]`, or `None` when the band misses it.
    pub fn band_extent(&self, y_b: f64, y_t: f64) -> Option<(f64, f64)> {
        let pts = self
            .horizontal_intersections(y_b)
            .into_iter()
            .chain(self.horizontal_intersections(y_t))
            .chain(self.vertices_in_band(y_b, y_t));
        pts.fold(None, |acc, p| match acc {
            None => Some((p.x, p.x)),
            Some((lo, hi)) => Some((lo.min(p.x), hi.max(p.x))),
        })
    }

    /// Convex hull, counter-clockwise from the lowest-leftmost vertex.
    /// Collinear boundary points are dropped.
    pub fn convex_hull(&self) -> Polygon {
        let mut pts = self.vertices.clone();
        pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        let scale = bounding_extent(&pts).max(1.0);
        let tol = EPS_GEOM * scale;
        let mut lower: Vec<Point> = Vec::new();
        for &p in &pts {
            while lower.len() >= 2
                && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= tol
            {
                lower.pop();
            }
            lower.push(p);
        }
        let mut upper: Vec<Point> = Vec::new();
        for &p in pts.iter().rev() {
            while upper.len() >= 2
                && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= tol
            {
                upper.pop();
            }
            upper.push(p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        // lowest y first, then lowest x
        let start = lower
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.y.total_cmp(&b.y).then(a.x.total_cmp(&b.x)))
            .map(|(i, _)| i)
            .unwrap_or(0);
        lower.rotate_left(start);
        Polygon { vertices: lower }
    }

    /// Even-odd classification with an [`EPS_GEOM`] boundary band.
    pub fn locate(&self, pt: Point) -> Location {
        if self
            .edges()
            .any(|(a, b)| segment_distance(pt, a, b) <= EPS_GEOM)
        {
            return Location::Boundary;
        }
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.y > pt.y) != (b.y > pt.y) {
                let x = a.x + (pt.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if x > pt.x {
                    inside = !inside;
                }
            }
        }
        if inside {
            Location::Inside
        } else {
            Location::Outside
        }
    }

    /// Area of the intersection with a closed axis-aligned rectangle.
    pub fn intersection_area(&self, rect: &Rect) -> f64 {
        let mut ring = self.vertices.clone();
        // Sutherland–Hodgman against each rectangle side; valid for a
        // non-convex subject since only the area is used.
        let sides: [fn(Point, &Rect) -> f64; 4] = [
            |p, r| p.x - r.min.x,
            |p, r| r.max.x - p.x,
            |p, r| p.y - r.min.y,
            |p, r| r.max.y - p.y,
        ];
        for dist in sides {
            if ring.is_empty() {
                break;
            }
            let mut out = Vec::with_capacity(ring.len() + 4);
            for i in 0..ring.len() {
                let cur = ring[i];
                let next = ring[(i + 1) % ring.len()];
                let dc = dist(cur, rect);
                let dn = dist(next, rect);
                if dc >= 0.0 {
                    out.push(cur);
                }
                if (dc >= 0.0) != (dn >= 0.0) {
                    let t = dc / (dc - dn);
                    out.push(Point::new(
                        cur.x + t * (next.x - cur.x),
                        cur.y + t * (next.y - cur.y),
                    ));
                }
            }
            ring = out;
        }
        if ring.len() < 3 {
            0.0
        } else {
            signed_area(&ring).abs()
        }
    }
}

impl<'de> Deserialize<'de> for Polygon {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            vertices: Vec<Point>,
        }
        let raw = Raw::deserialize(de)?;
        Polygon::new(raw.vertices).map_err(serde::de::Error::custom)
    }
}

fn signed_area(ring: &[Point]) -> f64 {
    let n = ring.len();
    let twice: f64 = (0..n)
        .map(|i| {
            let (p, q) = (ring[i], ring[(i + 1) % n]);
            p.x * q.y - q.x * p.y
        })
        .sum();
    twice / 2.0
}

fn bounding_extent(ring: &[Point]) -> f64 {
    let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for p in ring {
        lo_x = lo_x.min(p.x);
        hi_x = hi_x.max(p.x);
        lo_y = lo_y.min(p.y);
        hi_y = hi_y.max(p.y);
    }
    (hi_x - lo_x).max(hi_y - lo_y)
}

fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0)
    };
    p.distance(&Point::new(a.x + t * dx, a.y + t * dy))
}

fn on_segment(p: Point, a: Point, b: Point) -> bool {
    segment_distance(p, a, b) <= EPS_GEOM
}

fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    on_segment(a, c, d) || on_segment(b, c, d) || on_segment(c, a, b) || on_segment(d, a, b)
}

fn first_self_intersection(ring: &[Point]) -> Option<(usize, usize)> {
    let n = ring.len();
    for i in 0..n {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        for j in (i + 1)..n {
            let (c, d) = (ring[j], ring[(j + 1) % n]);
            let adjacent_next = j == i + 1;
            let adjacent_wrap = i == 0 && j == n - 1;
            if adjacent_next {
                // shared vertex b == c; fold-back if the far ends land on the other edge
                if on_segment(d, a, b) || on_segment(a, c, d) {
                    return Some((i, j));
                }
            } else if adjacent_wrap {
                // shared vertex a == d
                if on_segment(c, a, b) || on_segment(b, c, d) {
                    return Some((i, j));
                }
            } else if segments_intersect(a, b, c, d) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Rotation about the origin followed by a translation:
/// `q = R(angle) * p + translation`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineTransform {
    /// Counter-clockwise rotation angle in radians.
    pub angle: f64,
    pub translation: Point,
}

impl Default for AffineTransform {
    fn default() -> Self {
        Self::identity()
    }
}

impl AffineTransform {
    pub const fn identity() -> Self {
        Self {
            angle: 0.0,
            translation: Point::new(0.0, 0.0),
        }
    }

    /// Row-major 2×2 rotation matrix.
    pub fn rotation(&self) -> [[f64; 2]; 2] {
        let (s, c) = self.angle.sin_cos();
        [[c, -s], [s, c]]
    }

    pub fn apply(&self, p: Point) -> Point {
        let [[a, b], [c, d]] = self.rotation();
        Point::new(
            a * p.x + b * p.y + self.translation.x,
            c * p.x + d * p.y + self.translation.y,
        )
    }

    pub fn invert(&self, q: Point) -> Point {
        let [[a, b], [c, d]] = self.rotation();
        let (x, y) = (q.x - self.translation.x, q.y - self.translation.y);
        // R^T
        Point::new(a * x + c * y, b * x + d * y)
    }
}

/// Rotates `p` so its longest edge lies on the X-axis with the interior
/// above it, then shifts it so that min-x and min-y are both zero.
///
/// For a convex polygon the longest edge ends up exactly on `y = 0`. The
/// returned transform maps original coordinates to normalized ones.
pub fn normalize(p: &Polygon) -> (Polygon, AffineTransform) {
    let (a, b) = p.edge(p.longest_edge());
    // CCW ring: interior lies left of a->b, so aligning a->b with +x puts it above
    let angle = -(b.y - a.y).atan2(b.x - a.x);
    let rotate = AffineTransform {
        angle,
        translation: Point::new(0.0, 0.0),
    };
    let rotated = p.transformed(&rotate);
    let bounds = rotated.bounds();
    let transform = AffineTransform {
        angle,
        translation: Point::new(-bounds.min.x, -bounds.min.y),
    };
    let mut normalized = p.transformed(&transform);
    // snap the longest edge onto the axis so the first sweep line hits it
    let k = p.longest_edge();
    let n = normalized.len();
    for idx in [k, (k + 1) % n] {
        if normalized.vertices[idx].y.abs() <= EPS_GEOM * bounds_scale(&bounds) {
            normalized.vertices[idx].y = 0.0;
        }
    }
    (normalized, transform)
}

fn bounds_scale(r: &Rect) -> f64 {
    (r.max.x - r.min.x).max(r.max.y - r.min.y).max(1.0)
}
