//! Scenario ingestion, JSON result documents and SVG rendering.
//!
//! Scenario files are JSON:
//!
//! ```json
//! {"polygon": [[0, 0], [10, 0], [12, 5], [8, 8.5], [2, 8.5]],
//!  "r": 1.4142135623730951, "v": 12,
//!  "method": "agd", "mode": "valid", "free_endpoints": false, "exact_cap": 60}
//! ```
//!
//! Only `polygon` is required. A bare WKT `POLYGON((...))` string is also
//! accepted, with every other field at its default.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomposition::{ChannelSpan, Decomposition, Method};
use crate::geometry::{GeometryError, Point, Polygon};
use crate::planner::{ArcSolution, PathPlan, PlanMode, DEFAULT_EXACT_CAP};

/// Camera footprint radius used when a scenario leaves it out: 50√2 m.
pub const DEFAULT_RADIUS: f64 = 50.0 * std::f64::consts::SQRT_2;
/// Airspeed used when a scenario leaves it out, m/s.
pub const DEFAULT_SPEED: f64 = 12.0;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid `{field}`: {message}")]
    Validation { field: String, message: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub polygon: Polygon,
    pub r: f64,
    pub v: f64,
    pub method: Method,
    pub mode: PlanMode,
    pub free_endpoints: bool,
    pub exact_cap: usize,
    pub span: ChannelSpan,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    polygon: Vec<[f64; 2]>,
    r: Option<f64>,
    v: Option<f64>,
    method: Option<Method>,
    mode: Option<PlanMode>,
    free_endpoints: Option<bool>,
    exact_cap: Option<usize>,
    span: Option<ChannelSpan>,
}

fn invalid(field: &str, message: impl Into<String>) -> IoError {
    IoError::Validation {
        field: field.to_owned(),
        message: message.into(),
    }
}

/// Parses a JSON scenario or a WKT polygon.
pub fn parse_scenario(text: &str) -> Result<Scenario, IoError> {
    let trimmed = text.trim_start();
    let raw = if trimmed.starts_with('{') {
        serde_json::from_str::<RawScenario>(text)?
    } else {
        RawScenario {
            polygon: parse_wkt_polygon(text)?,
            r: None,
            v: None,
            method: None,
            mode: None,
            free_endpoints: None,
            exact_cap: None,
            span: None,
        }
    };
    let r = raw.r.unwrap_or(DEFAULT_RADIUS);
    if !(r.is_finite() && r > 0.0) {
        return Err(invalid("r", format!("must be positive, got {r}")));
    }
    let v = raw.v.unwrap_or(DEFAULT_SPEED);
    if !(v.is_finite() && v > 0.0) {
        return Err(invalid("v", format!("must be positive, got {v}")));
    }
    let exact_cap = raw.exact_cap.unwrap_or(DEFAULT_EXACT_CAP);
    if exact_cap == 0 {
        return Err(invalid("exact_cap", "must be at least 1"));
    }
    let polygon = Polygon::new(raw.polygon.iter().map(|&[x, y]| Point::new(x, y)).collect())?;
    Ok(Scenario {
        polygon,
        r,
        v,
        method: raw.method.unwrap_or(Method::Agd),
        mode: raw.mode.unwrap_or_default(),
        free_endpoints: raw.free_endpoints.unwrap_or(false),
        exact_cap,
        span: raw.span.unwrap_or_default(),
    })
}

fn parse_wkt_polygon(text: &str) -> Result<Vec<[f64; 2]>, IoError> {
    let geom = wkt::Wkt::<f64>::from_str(text.trim()).map_err(|e| IoError::Parse {
        line: 1,
        column: 1,
        message: format!("WKT: {e}"),
    })?;
    let wkt::Wkt::Polygon(poly) = geom else {
        return Err(invalid("polygon", "WKT geometry must be a POLYGON"));
    };
    match poly.rings() {
        [] => Err(invalid("polygon", "empty POLYGON")),
        [outer] => Ok(outer.coords().iter().map(|c| [c.x, c.y]).collect()),
        _ => Err(invalid("polygon", "polygons with holes are not supported")),
    }
}

/// Pretty JSON for a decomposition. Numbers use shortest round-trip
/// formatting, so reading the document back is bit-exact.
pub fn write_decomposition(d: &Decomposition) -> String {
    serde_json::to_string_pretty(d).expect("decomposition serializes") + "\n"
}

pub fn read_decomposition(text: &str) -> Result<Decomposition, IoError> {
    Ok(serde_json::from_str(text)?)
}

/// Planner output as written by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanDocument {
    pub mode: PlanMode,
    pub optimal: bool,
    pub v: f64,
    pub t_cov: f64,
    /// Visit order over cell indices; absent when the relaxed optimum
    /// contains detached cycles.
    pub order: Option<Vec<usize>>,
    /// Arc set, present for relaxed-mode plans.
    pub arcs: Option<Vec<(usize, usize)>>,
    pub single_path: bool,
}

impl PlanDocument {
    pub fn from_path(plan: &PathPlan, v: f64) -> Self {
        Self {
            mode: plan.mode,
            optimal: plan.optimal,
            v,
            t_cov: plan.t_cov,
            order: Some(plan.order.clone()),
            arcs: None,
            single_path: true,
        }
    }

    pub fn from_arcs(sol: &ArcSolution, v: f64) -> Self {
        let order = sol.path_order();
        Self {
            mode: sol.mode,
            optimal: sol.optimal,
            v,
            t_cov: sol.t_cov,
            single_path: order.is_some(),
            order,
            arcs: Some(sol.arcs.clone()),
        }
    }
}

pub fn write_plan(plan: &PlanDocument) -> String {
    serde_json::to_string_pretty(plan).expect("plan serializes") + "\n"
}

pub fn read_plan(text: &str) -> Result<PlanDocument, IoError> {
    Ok(serde_json::from_str(text)?)
}

fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

/// Standalone SVG 1.1 drawing of the area, its cells and optionally a
/// route. World Y points up.
pub fn render_svg(d: &Decomposition, route: Option<&[usize]>) -> String {
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut grow = |p: Point| {
        lo.x = lo.x.min(p.x);
        lo.y = lo.y.min(p.y);
        hi.x = hi.x.max(p.x);
        hi.y = hi.y.max(p.y);
    };
    for p in d.polygon.vertices() {
        grow(*p);
    }
    let corners = |c: &crate::decomposition::Cell| {
        let q = d.transform.apply(c.center);
        [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)].map(|(sx, sy)| {
            d.transform.invert(Point::new(
                q.x + sx * c.width / 2.0,
                q.y + sy * c.height / 2.0,
            ))
        })
    };
    for c in &d.cells {
        for p in corners(c) {
            grow(p);
        }
    }
    let (w, h) = (hi.x - lo.x, hi.y - lo.y);
    let margin = 0.05 * w.max(h);
    let stroke = 0.003 * w.max(h);
    let view = (
        lo.x - margin,
        -(hi.y + margin),
        w + 2.0 * margin,
        h + 2.0 * margin,
    );
    let px_w = 800.0;
    let px_h = px_w * view.3 / view.2;

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">",
        num(px_w),
        num(px_h),
        num(view.0),
        num(view.1),
        num(view.2),
        num(view.3)
    );
    let _ = writeln!(
        out,
        "<title>{} decomposition, {} cells</title>",
        d.method,
        d.cells.len()
    );
    out.push_str("<g transform=\"scale(1,-1)\">\n");

    let mut outline = String::new();
    for (k, p) in d.polygon.vertices().iter().enumerate() {
        let _ = write!(
            outline,
            "{}{} {} ",
            if k == 0 { "M" } else { "L" },
            num(p.x),
            num(p.y)
        );
    }
    outline.push('Z');
    let _ = writeln!(
        out,
        "<path class=\"area\" d=\"{outline}\" fill=\"#dbe9f6\" stroke=\"#1f4e79\" stroke-width=\"{}\"/>",
        num(2.0 * stroke)
    );

    let tilt = -d.transform.angle.to_degrees();
    out.push_str("<g class=\"cells\" fill=\"none\" stroke=\"#c0392b\"");
    let _ = writeln!(out, " stroke-width=\"{}\">", num(stroke));
    for c in &d.cells {
        let _ = writeln!(
            out,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" transform=\"rotate({} {} {})\"/>",
            num(c.center.x - c.width / 2.0),
            num(c.center.y - c.height / 2.0),
            num(c.width),
            num(c.height),
            num(tilt),
            num(c.center.x),
            num(c.center.y)
        );
    }
    out.push_str("</g>\n");

    let _ = writeln!(out, "<g class=\"centers\" fill=\"#2c3e50\">");
    for c in &d.cells {
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
            num(c.center.x),
            num(c.center.y),
            num(1.5 * stroke)
        );
    }
    out.push_str("</g>\n");

    if let Some(order) = route.filter(|o| !o.is_empty() && o.iter().all(|&k| k < d.cells.len())) {
        let points: Vec<String> = order
            .iter()
            .map(|&k| {
                let c = d.cells[k].center;
                format!("{},{}", num(c.x), num(c.y))
            })
            .collect();
        let _ = writeln!(
            out,
            "<polyline class=\"route\" points=\"{}\" fill=\"none\" stroke=\"#27ae60\" stroke-width=\"{}\"/>",
            points.join(" "),
            num(1.5 * stroke)
        );
        let first = d.cells[order[0]].center;
        let last = d.cells[*order.last().unwrap()].center;
        let _ = writeln!(
            out,
            "<circle class=\"start\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#27ae60\"/>",
            num(first.x),
            num(first.y),
            num(4.0 * stroke)
        );
        let _ = writeln!(
            out,
            "<circle class=\"end\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#8e44ad\"/>",
            num(last.x),
            num(last.y),
            num(4.0 * stroke)
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}
