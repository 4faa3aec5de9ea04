//! Independent oracles shared by the integration and acceptance tests.
//! Nothing here calls into the solver or clipping code it is used to check.
#![allow(dead_code)]

use covgrid::{ArcSolution, DistanceMatrix, Point, Polygon};

pub const SQRT_2: f64 = std::f64::consts::SQRT_2;

pub fn polygon(pts: &[(f64, f64)]) -> Polygon {
    Polygon::new(pts.iter().copied().map(Point::from).collect()).unwrap()
}

pub fn worked_example() -> Polygon {
    polygon(&[(0.0, 0.0), (10.0, 0.0), (12.0, 5.0), (8.0, 8.5), (2.0, 8.5)])
}

/// Tilted example polygon, coordinates given to two decimals.
pub const TILTED_V0: [(f64, f64); 5] = [
    (4.06, 6.96),
    (12.72, 11.96),
    (7.35, 19.25),
    (2.89, 18.99),
    (1.79, 14.89),
];

/// The tilted example after rotation, with its x-offset of 7.
pub const TILTED_V2: [(f64, f64); 5] = [
    (7.0, 0.0),
    (17.0, 0.0),
    (16.0, 9.0),
    (12.0, 11.0),
    (9.0, 8.0),
];

/// Reference cell centers for the tilted example, in original coordinates.
pub const TILTED_CENTERS: [(f64, f64); 24] = [
    (4.43, 8.33),
    (6.16, 9.33),
    (7.89, 10.33),
    (9.62, 11.33),
    (11.36, 12.33),
    (3.76, 10.33),
    (5.37, 11.26),
    (6.98, 12.19),
    (8.59, 13.12),
    (10.19, 14.05),
    (3.06, 12.46),
    (4.53, 13.32),
    (6.01, 14.17),
    (7.48, 15.02),
    (8.96, 15.87),
    (2.56, 14.68),
    (4.23, 15.64),
    (5.89, 16.60),
    (7.56, 17.56),
    (2.10, 16.94),
    (3.53, 17.76),
    (4.96, 18.59),
    (6.38, 19.41),
    (2.42, 20.03),
];

/// Footprint radius implied by the tilted-example centers: adjacent centers of the
/// first channel are one cell edge (√2 r) apart. The edge is read to two
/// decimals, the precision of the list.
pub fn tilted_radius() -> f64 {
    let first = &TILTED_CENTERS[..5];
    let edge = first
        .windows(2)
        .map(|w| ((w[1].0 - w[0].0).powi(2) + (w[1].1 - w[0].1).powi(2)).sqrt())
        .sum::<f64>()
        / 4.0;
    (edge * 100.0).round() / 100.0 / SQRT_2
}

/// Reference cell centers for the worked example, channel by channel.
pub const WORKED_CENTERS: [(f64, f64); 23] = [
    (0.9, 1.09),
    (2.7, 1.09),
    (4.5, 1.09),
    (6.3, 1.09),
    (8.1, 1.09),
    (9.9, 1.09),
    (1.443, 3.247),
    (3.303, 3.247),
    (5.163, 3.247),
    (7.022, 3.247),
    (8.882, 3.247),
    (10.742, 3.247),
    (1.930, 5.390),
    (3.761, 5.390),
    (5.591, 5.390),
    (7.422, 5.390),
    (9.253, 5.390),
    (11.084, 5.390),
    (2.401, 7.575),
    (4.161, 7.575),
    (5.921, 7.575),
    (7.681, 7.575),
    (9.441, 7.575),
];

/// Reference per-channel (l, n, e, Δ, y_t_adj) for the worked example.
pub const WORKED_TRACES: [(f64, usize, f64, f64, f64); 4] = [
    (10.8, 6, 1.2, 0.2, 2.181),
    (11.159, 6, 0.84, 0.14, 4.312),
    (10.985, 6, 1.014, 0.169, 6.468),
    (8.799, 5, 1.2, 0.24, 8.682),
];

/// 30° counter-clockwise rotation, as used to build V0 from the rotated set.
pub fn rotate_ccw_30(p: (f64, f64)) -> (f64, f64) {
    let (s, c) = 30f64.to_radians().sin_cos();
    (c * p.0 - s * p.1, s * p.0 + c * p.1)
}

/// Winding number of `poly` around `pt` (nonzero ⇒ inside).
pub fn winding_number(poly: &Polygon, pt: Point) -> i32 {
    let v = poly.vertices();
    let mut wn = 0;
    for i in 0..v.len() {
        let (a, b) = (v[i], v[(i + 1) % v.len()]);
        let side = (b.x - a.x) * (pt.y - a.y) - (pt.x - a.x) * (b.y - a.y);
        if a.y <= pt.y {
            if b.y > pt.y && side > 0.0 {
                wn += 1;
            }
        } else if b.y <= pt.y && side < 0.0 {
            wn -= 1;
        }
    }
    wn
}

/// Distance from `pt` to the polygon boundary.
pub fn boundary_distance(poly: &Polygon, pt: Point) -> f64 {
    poly.edges()
        .map(|(a, b)| {
            let (dx, dy) = (b.x - a.x, b.y - a.y);
            let t = (((pt.x - a.x) * dx + (pt.y - a.y) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
            pt.distance(&Point::new(a.x + t * dx, a.y + t * dy))
        })
        .fold(f64::INFINITY, f64::min)
}

/// Whether an axis-aligned box overlaps `poly` with positive area, decided
/// by sampling an `res × res` lattice of box-interior points.
pub fn raster_overlap(poly: &Polygon, min: Point, max: Point, res: usize) -> bool {
    (0..res).any(|i| {
        (0..res).any(|j| {
            let p = Point::new(
                min.x + (i as f64 + 0.5) / res as f64 * (max.x - min.x),
                min.y + (j as f64 + 0.5) / res as f64 * (max.y - min.y),
            );
            winding_number(poly, p) != 0
        })
    })
}

fn total(m: &DistanceMatrix, order: &[usize]) -> f64 {
    order.windows(2).map(|w| m.get(w[0], w[1])).sum()
}

/// Shortest path visiting all cells from 0 to n-1, by full enumeration of
/// the interior permutations. Returns coverage time.
pub fn brute_force_path(m: &DistanceMatrix) -> f64 {
    let n = m.len();
    if n == 1 {
        return 0.0;
    }
    let mut inner: Vec<usize> = (1..n - 1).collect();
    let mut best = f64::INFINITY;
    permute(&mut inner, 0, &mut |perm| {
        let mut order = Vec::with_capacity(n);
        order.push(0);
        order.extend_from_slice(perm);
        order.push(n - 1);
        best = best.min(total(m, &order));
    });
    best / m.speed()
}

fn permute(items: &mut [usize], k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Minimum of the relaxed arc model by enumerating every successor
/// assignment: node i in 0..n-1 picks a distinct successor in 1..n, no
/// self-loops, no two-cycles. Returns coverage time.
pub fn brute_force_paper(m: &DistanceMatrix) -> f64 {
    let n = m.len();
    fn rec(
        m: &DistanceMatrix,
        i: usize,
        succ: &mut Vec<usize>,
        used: &mut Vec<bool>,
        acc: f64,
        best: &mut f64,
    ) {
        let n = m.len();
        if i == n - 1 {
            *best = best.min(acc);
            return;
        }
        for j in 1..n {
            if j == i || used[j] || (j < i && succ[j] == i) {
                continue;
            }
            used[j] = true;
            succ[i] = j;
            rec(m, i + 1, succ, used, acc + m.get(i, j), best);
            succ[i] = usize::MAX;
            used[j] = false;
        }
    }
    let mut best = f64::INFINITY;
    rec(
        m,
        0,
        &mut vec![usize::MAX; n],
        &mut vec![false; n],
        0.0,
        &mut best,
    );
    best / m.speed()
}

/// Checks an arc solution against the model constraints directly.
pub fn validate_arcs(sol: &ArcSolution, m: &DistanceMatrix) -> Result<(), String> {
    let n = m.len();
    let mut indeg = vec![0usize; n];
    let mut outdeg = vec![0usize; n];
    for &(i, j) in &sol.arcs {
        if i == j {
            return Err(format!("self-loop at {i}"));
        }
        if sol.arcs.contains(&(j, i)) {
            return Err(format!("two-cycle {i} <-> {j}"));
        }
        outdeg[i] += 1;
        indeg[j] += 1;
    }
    if sol.enter[0] || sol.exit[n - 1] {
        return Err("first cell entered or last cell exited".into());
    }
    for k in 0..n {
        if indeg[k] != sol.enter[k] as usize || outdeg[k] != sol.exit[k] as usize {
            return Err(format!("degree mismatch at {k}"));
        }
    }
    let used: usize = sol.enter.iter().chain(&sol.exit).filter(|&&b| b).count();
    if n >= 2 && used < 2 * n - 2 {
        return Err(format!("only {used} indicators set"));
    }
    let t = sol.arcs.iter().map(|&(i, j)| m.get(i, j)).sum::<f64>() / m.speed();
    if (t - sol.t_cov).abs() > 1e-9 * t.max(1.0) {
        return Err(format!("t_cov {} but arcs sum to {t}", sol.t_cov));
    }
    Ok(())
}

/// Uniform random points inside `poly` by rejection from its bounding box.
pub fn interior_samples<R: rand::Rng>(poly: &Polygon, count: usize, rng: &mut R) -> Vec<Point> {
    let b = poly.bounds();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = Point::new(
            rng.gen_range(b.min.x..b.max.x),
            rng.gen_range(b.min.y..b.max.y),
        );
        if winding_number(poly, p) != 0 {
            out.push(p);
        }
    }
    out
}

pub fn random_centers<R: rand::Rng>(rng: &mut R, n: usize, extent: f64) -> Vec<Point> {
    (0..n)
        .map(|_| Point::new(rng.gen_range(0.0..extent), rng.gen_range(0.0..extent)))
        .collect()
}
