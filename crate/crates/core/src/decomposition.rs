//! Grid decompositions of a search polygon into camera-footprint cells.
//!
//! Two builders share one output type:
//!
//! * [`agd_decompose`] sweeps horizontal channels upward from the longest
//!   edge. Each channel gets `n = ceil(l / (√2 r))` cells whose width is
//!   shrunk by `Δ = (√2 r n − l) / n` so the row spans the channel exactly;
//!   the height then grows to `sqrt(2r² + 2√2 rΔ − Δ²)`, which keeps every
//!   cell inscribed in the footprint circle (`w² + h² = 4r²`).
//! * [`sgd_decompose`] overlays a uniform `√2 r` grid and keeps every cell
//!   that overlaps the polygon with positive area.
//!
//! Both work in the normalized frame from [`normalize`] and report centers
//! back in the caller's coordinates.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{normalize, AffineTransform, GeometryError, Point, Polygon, Rect, EPS_GEOM};

/// Slack on `l / (√2 r)` before rounding up, so spans that are whole
/// multiples of the cell edge up to float noise do not gain a cell.
const CEIL_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecompositionError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("footprint radius must be positive and finite, got {0}")]
    NonPositiveRadius(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Agd,
    Sgd,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Agd => "agd",
            Method::Sgd => "sgd",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "agd" => Ok(Method::Agd),
            "sgd" => Ok(Method::Sgd),
            other => Err(format!("unknown method `{other}` (expected agd or sgd)")),
        }
    }
}

/// How an AGD channel measures its horizontal span.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelSpan {
    /// Probe the band `[y_b, y_b + √2 r]`, i.e. the unadjusted top line.
    /// Matches the reference channel traces, but the strip between the
    /// top line and the adjusted top line is not measured, so a boundary
    /// that keeps widening there leaves thin uncovered slivers.
    #[default]
    TopLine,
    /// Measure the span over the whole adjusted band `[y_b, y_t_adj]`,
    /// re-deriving `n` and `Δ` until the band no longer widens. Every
    /// interior point is then covered.
    AdjustedBand,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AgdOptions {
    pub span: ChannelSpan,
    /// Sweep a non-convex polygon directly, using `[x_min, x_max]` even when
    /// the channel cross-section is disconnected. Off by default: non-convex
    /// inputs are decomposed via their convex hull and then pruned.
    pub direct_nonconvex: bool,
}

/// Axis-aligned (in the normalized frame) cell. `center` is in the
/// caller's original coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub center: Point,
    pub width: f64,
    pub height: f64,
}

impl Cell {
    pub fn diagonal_sq(&self) -> f64 {
        self.width * self.width + self.height * self.height
    }
}

/// Per-channel bookkeeping, in normalized coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelTrace {
    pub y_b: f64,
    pub y_t: f64,
    pub y_t_adj: f64,
    pub l: f64,
    pub n: usize,
    pub e: f64,
    pub delta: f64,
    pub x_min: f64,
    pub x_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub method: Method,
    pub r: f64,
    /// Maps original coordinates to the normalized sweep frame.
    pub transform: AffineTransform,
    pub hull_used: bool,
    /// The search area in original coordinates.
    pub polygon: Polygon,
    pub channels: Vec<ChannelTrace>,
    /// Channel-major, bottom-up, left-to-right.
    pub cells: Vec<Cell>,
}

impl Decomposition {
    pub fn centers(&self) -> Vec<Point> {
        self.cells.iter().map(|c| c.center).collect()
    }

    /// Cell rectangle in the normalized frame.
    pub fn normalized_rect(&self, cell: &Cell) -> Rect {
        Rect::from_center(self.transform.apply(cell.center), cell.width, cell.height)
    }

    /// True if `pt` (original coordinates) falls in at least one cell.
    pub fn covers(&self, pt: Point) -> bool {
        let q = self.transform.apply(pt);
        self.cells
            .iter()
            .any(|c| self.normalized_rect(c).contains(q))
    }
}

fn check_radius(r: f64) -> Result<(), DecompositionError> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(DecompositionError::NonPositiveRadius(r))
    }
}

/// Normalization shared by both methods. Non-convex inputs take their frame
/// from the hull so that every vertex lands in the first quadrant.
fn sweep_frame(p: &Polygon) -> (Polygon, AffineTransform) {
    if p.is_convex() {
        normalize(p)
    } else {
        let (_, t) = normalize(&p.convex_hull());
        (p.transformed(&t), t)
    }
}

/// Adaptive grid decomposition with default options.
pub fn agd_decompose(p: &Polygon, r: f64) -> Result<Decomposition, DecompositionError> {
    agd_decompose_with(p, r, &AgdOptions::default())
}

pub fn agd_decompose_with(
    p: &Polygon,
    r: f64,
    opts: &AgdOptions,
) -> Result<Decomposition, DecompositionError> {
    check_radius(r)?;
    let convex = p.is_convex();
    let (frame, transform) = sweep_frame(p);
    let use_hull = !convex && !opts.direct_nonconvex;
    let swept = if use_hull { frame.convex_hull() } else { frame };

    let (channels, rects) = sweep_channels(&swept, r, opts.span);
    let cells = rects
        .into_iter()
        .map(|(c, w, h)| Cell {
            center: transform.invert(c),
            width: w,
            height: h,
        })
        .collect();
    let d = Decomposition {
        method: Method::Agd,
        r,
        transform,
        hull_used: use_hull,
        polygon: p.clone(),
        channels,
        cells,
    };
    Ok(if use_hull {
        prune_outside_cells(d, p)
    } else {
        d
    })
}

struct ChannelFit {
    l: f64,
    n: usize,
    e: f64,
    delta: f64,
    height: f64,
}

fn fit_channel(l: f64, r: f64) -> ChannelFit {
    let edge = std::f64::consts::SQRT_2 * r;
    let n = ((l / edge) - CEIL_SLACK).ceil().max(1.0) as usize;
    let e = (edge * n as f64 - l).max(0.0);
    let delta = e / n as f64;
    let height = (2.0 * r * r + 2.0 * edge * delta - delta * delta).sqrt();
    ChannelFit {
        l,
        n,
        e,
        delta,
        height,
    }
}

type RawCell = (Point, f64, f64);

fn sweep_channels(p: &Polygon, r: f64, span: ChannelSpan) -> (Vec<ChannelTrace>, Vec<RawCell>) {
    let edge = std::f64::consts::SQRT_2 * r;
    let y_max = p.bounds().max.y;
    let mut y_b = 0.0;
    let mut channels = Vec::new();
    let mut cells = Vec::new();

    while y_max - y_b >= EPS_GEOM {
        let y_t = y_b + edge;
        let extent = p.band_extent(y_b, y_t);
        let (mut x_min, mut x_max) = match extent {
            Some((lo, hi)) if hi - lo >= EPS_GEOM => (lo, hi),
            // apex touching y_b: nothing to fill, skip a full cell height
            _ => {
                channels.push(ChannelTrace {
                    y_b,
                    y_t,
                    y_t_adj: y_t,
                    l: 0.0,
                    n: 0,
                    e: 0.0,
                    delta: 0.0,
                    x_min: extent.map_or(0.0, |e| e.0),
                    x_max: extent.map_or(0.0, |e| e.1),
                });
                y_b = y_t;
                continue;
            }
        };
        let mut fit = fit_channel(x_max - x_min, r);
        if span == ChannelSpan::AdjustedBand {
            // l only grows and each extra pass implies a larger n, so this ends
            while let Some((lo, hi)) = p.band_extent(y_b, y_b + fit.height) {
                if lo >= x_min - EPS_GEOM && hi <= x_max + EPS_GEOM {
                    break;
                }
                x_min = x_min.min(lo);
                x_max = x_max.max(hi);
                fit = fit_channel(x_max - x_min, r);
            }
        }
        let width = edge - fit.delta;
        let y_t_adj = y_b + fit.height;
        let cy = y_b + fit.height / 2.0;
        for k in 0..fit.n {
            let cx = x_min + width / 2.0 + k as f64 * width;
            cells.push((Point::new(cx, cy), width, fit.height));
        }
        channels.push(ChannelTrace {
            y_b,
            y_t,
            y_t_adj,
            l: fit.l,
            n: fit.n,
            e: fit.e,
            delta: fit.delta,
            x_min,
            x_max,
        });
        y_b = y_t_adj;
    }
    (channels, cells)
}

/// Standard grid: `√2 r` squares, bottom row on the longest edge, left
/// column flush with the leftmost vertex. A cell is kept when it overlaps
/// the polygon with positive area.
pub fn sgd_decompose(p: &Polygon, r: f64) -> Result<Decomposition, DecompositionError> {
    check_radius(r)?;
    let (frame, transform) = sweep_frame(p);
    let edge = std::f64::consts::SQRT_2 * r;
    let b = frame.bounds();
    let cols = (((b.max.x - b.min.x) / edge) - CEIL_SLACK).ceil().max(1.0) as usize;
    let rows = (((b.max.y - b.min.y) / edge) - CEIL_SLACK).ceil().max(1.0) as usize;
    let min_overlap = EPS_GEOM * edge;

    let mut cells = Vec::new();
    for row in 0..rows {
        for col in 0..cols {
            let center = Point::new(
                b.min.x + (col as f64 + 0.5) * edge,
                b.min.y + (row as f64 + 0.5) * edge,
            );
            let rect = Rect::from_center(center, edge, edge);
            if frame.intersection_area(&rect) > min_overlap {
                cells.push(Cell {
                    center: transform.invert(center),
                    width: edge,
                    height: edge,
                });
            }
        }
    }
    Ok(Decomposition {
        method: Method::Sgd,
        r,
        transform,
        hull_used: false,
        polygon: p.clone(),
        channels: Vec::new(),
        cells,
    })
}

/// Drops cells whose rectangle has no positive-area overlap with
/// `original`. Cells straddling the boundary are kept.
pub fn prune_outside_cells(mut d: Decomposition, original: &Polygon) -> Decomposition {
    let frame = original.transformed(&d.transform);
    let min_overlap = EPS_GEOM * std::f64::consts::SQRT_2 * d.r;
    let t = d.transform;
    d.cells.retain(|c| {
        let rect = Rect::from_center(t.apply(c.center), c.width, c.height);
        frame.intersection_area(&rect) > min_overlap
    });
    d
}

/// Coverage-time lower bound for a standard grid with `n_cells` cells:
/// `(n_cells − 1) · √2 r / v`.
pub fn sgd_lower_bound(n_cells: usize, r: f64, v: f64) -> f64 {
    n_cells.saturating_sub(1) as f64 * std::f64::consts::SQRT_2 * r / v
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn poly(pts: &[(f64, f64)]) -> Polygon {
        Polygon::new(pts.iter().copied().map(Point::from).collect()).unwrap()
    }

    fn worked() -> Polygon {
        poly(&[(0.0, 0.0), (10.0, 0.0), (12.0, 5.0), (8.0, 8.5), (2.0, 8.5)])
    }

    #[test]
    fn first_channel_of_worked_example() {
        let d = agd_decompose(&worked(), SQRT_2).unwrap();
        let c = d.channels[0];
        assert!((c.l - 10.8).abs() < 1e-12);
        assert_eq!(c.n, 6);
        assert!((c.e - 1.2).abs() < 1e-12);
        assert!((c.delta - 0.2).abs() < 1e-12);
        assert!((c.y_t_adj - 4.76f64.sqrt()).abs() < 1e-12);
        let xs: Vec<f64> = d.cells[..6].iter().map(|c| c.center.x).collect();
        for (x, want) in xs.iter().zip([0.9, 2.7, 4.5, 6.3, 8.1, 9.9]) {
            assert!((x - want).abs() < 1e-9, "{x} vs {want}");
        }
    }

    #[test]
    fn rectangle_multiple_of_edge_has_no_adjustment() {
        let r = 50.0 * SQRT_2;
        let rect = poly(&[(0.0, 0.0), (400.0, 0.0), (400.0, 200.0), (0.0, 200.0)]);
        let d = agd_decompose(&rect, r).unwrap();
        assert_eq!(d.cells.len(), 8);
        for c in &d.channels {
            assert!(c.delta.abs() < 1e-9);
        }
        for cell in &d.cells {
            assert!((cell.width - 100.0).abs() < 1e-9);
            assert!((cell.height - 100.0).abs() < 1e-9);
        }
        let s = sgd_decompose(&rect, r).unwrap();
        assert_eq!(s.cells.len(), 8);
    }

    #[test]
    fn sgd_single_cell_for_tiny_polygon() {
        let tri = poly(&[(0.0, 0.0), (1.0, 0.0), (0.5, 0.5)]);
        assert_eq!(sgd_decompose(&tri, 10.0).unwrap().cells.len(), 1);
        assert_eq!(agd_decompose(&tri, 10.0).unwrap().cells.len(), 1);
    }

    #[test]
    fn radius_must_be_positive() {
        assert_eq!(
            agd_decompose(&worked(), 0.0),
            Err(DecompositionError::NonPositiveRadius(0.0))
        );
        assert!(sgd_decompose(&worked(), -1.0).is_err());
        assert!(agd_decompose(&worked(), f64::NAN).is_err());
    }

    #[test]
    fn lower_bound_formula() {
        let r = 50.0 * SQRT_2;
        assert!((sgd_lower_bound(29, r, 12.0) - 233.333_333).abs() < 1e-5);
        assert!((sgd_lower_bound(61, r, 12.0) - 500.0).abs() < 1e-9);
        assert_eq!(sgd_lower_bound(1, r, 12.0), 0.0);
    }

    #[test]
    fn convex_input_is_not_pruned() {
        let p = worked();
        let d = agd_decompose(&p, SQRT_2).unwrap();
        let before = d.cells.len();
        assert_eq!(prune_outside_cells(d, &p).cells.len(), before);
    }

    #[test]
    fn boundary_straddling_cell_survives_pruning() {
        let p = worked();
        let mut d = agd_decompose(&p, SQRT_2).unwrap();
        // a cell centered on the left edge at y=4 reaches inside the polygon
        d.cells = vec![Cell {
            center: Point::new(2.0 * 4.0 / 8.5, 4.0),
            width: 1.0,
            height: 1.0,
        }];
        assert_eq!(prune_outside_cells(d, &p).cells.len(), 1);
    }

    #[test]
    fn l_shape_goes_through_hull() {
        let l = poly(&[
            (0.0, 0.0),
            (4.0, 0.0),
            (4.0, 1.0),
            (1.0, 1.0),
            (1.0, 4.0),
            (0.0, 4.0),
        ]);
        let d = agd_decompose(&l, SQRT_2 / 2.0).unwrap();
        assert!(d.hull_used);
        // the notch corner (3,3) is outside the L
        assert!(!d.covers(Point::new(3.0, 3.0)));
        assert!(d.covers(Point::new(0.5, 3.5)));
        assert!(d.covers(Point::new(3.5, 0.5)));
    }
}
