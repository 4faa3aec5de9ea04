//! Seeded random convex polygons for benchmarking.
//!
//! Vertices are sampled on a randomly rotated ellipse, so every sample is
//! extreme and the hull keeps them all; the result is then scaled to the
//! requested diameter.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{Point, Polygon};

#[derive(Debug, Clone, Copy)]
pub struct CorpusSpec {
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub min_diameter: f64,
    pub max_diameter: f64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        Self {
            min_vertices: 5,
            max_vertices: 12,
            min_diameter: 300.0,
            max_diameter: 1500.0,
        }
    }
}

/// Largest vertex-to-vertex distance.
pub fn diameter(p: &Polygon) -> f64 {
    let v = p.vertices();
    let mut best: f64 = 0.0;
    for i in 0..v.len() {
        for j in (i + 1)..v.len() {
            best = best.max(v[i].distance(&v[j]));
        }
    }
    best
}

pub fn random_convex_polygon<R: Rng>(rng: &mut R, spec: &CorpusSpec) -> Polygon {
    loop {
        let k = rng.gen_range(spec.min_vertices..=spec.max_vertices);
        let aspect = rng.gen_range(0.35..1.0);
        let tilt = rng.gen_range(0.0..std::f64::consts::PI);
        let (st, ct) = tilt.sin_cos();
        let mut angles: Vec<f64> = (0..k)
            .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
            .collect();
        angles.sort_by(f64::total_cmp);
        let pts: Vec<Point> = angles
            .iter()
            .map(|a| {
                let (x, y) = (a.cos(), aspect * a.sin());
                Point::new(ct * x - st * y, st * x + ct * y)
            })
            .collect();
        let Ok(raw) = Polygon::new(pts) else { continue };
        let hull = raw.convex_hull();
        if hull.len() < spec.min_vertices {
            continue;
        }
        let target = rng.gen_range(spec.min_diameter..=spec.max_diameter);
        let scale = target / diameter(&hull);
        let offset = Point::new(rng.gen_range(0.0..1000.0), rng.gen_range(0.0..1000.0));
        let scaled = hull
            .vertices()
            .iter()
            .map(|p| Point::new(p.x * scale + offset.x, p.y * scale + offset.y))
            .collect();
        if let Ok(p) = Polygon::new(scaled) {
            return p;
        }
    }
}

/// `count` polygons from one seeded stream.
pub fn corpus(seed: u64, count: usize, spec: &CorpusSpec) -> Vec<Polygon> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_convex_polygon(&mut rng, spec))
        .collect()
}
