mod common;

use common::{boundary_distance, winding_number};
use covgrid::corpus::{random_convex_polygon, CorpusSpec};
use covgrid::geometry::cross;
use covgrid::{normalize, Location, Point, Polygon};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn convex_polygon() -> impl Strategy<Value = Polygon> {
    any::<u64>().prop_map(|seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_convex_polygon(&mut rng, &CorpusSpec::default())
    })
}

/// A star-shaped (generally non-convex) polygon around the origin.
fn star_polygon() -> impl Strategy<Value = Polygon> {
    prop::collection::vec(1.0f64..10.0, 5..14).prop_map(|radii| {
        let n = radii.len();
        let pts = radii
            .iter()
            .enumerate()
            .map(|(k, &rad)| {
                let a = std::f64::consts::TAU * k as f64 / n as f64;
                Point::new(rad * a.cos(), rad * a.sin())
            })
            .collect();
        Polygon::new(pts).unwrap()
    })
}

fn brute_force_hull(p: &Polygon) -> Vec<Point> {
    // a vertex is extreme iff it is not inside (or on) any triangle of others
    let v = p.vertices();
    let n = v.len();
    let inside_triangle = |q: Point, a: Point, b: Point, c: Point| {
        let (d1, d2, d3) = (cross(a, b, q), cross(b, c, q), cross(c, a, q));
        let neg = d1 < -1e-12 || d2 < -1e-12 || d3 < -1e-12;
        let pos = d1 > 1e-12 || d2 > 1e-12 || d3 > 1e-12;
        !(neg && pos)
    };
    (0..n)
        .filter(|&i| {
            !(0..n).any(|a| {
                (a + 1..n).any(|b| {
                    (b + 1..n).any(|c| {
                        a != i && b != i && c != i && inside_triangle(v[i], v[a], v[b], v[c])
                    })
                })
            })
        })
        .map(|i| v[i])
        .collect()
}

proptest! {
    #[test]
    fn normalize_round_trips(p in convex_polygon()) {
        let (q, t) = normalize(&p);
        for (a, b) in p.vertices().iter().zip(q.vertices()) {
            let back = t.invert(*b);
            prop_assert!(back.distance(a) < 1e-9 * (1.0 + a.x.abs() + a.y.abs()));
        }
    }

    #[test]
    fn normalize_is_an_isometry(p in convex_polygon()) {
        let (q, _) = normalize(&p);
        let (a, b) = (p.vertices(), q.vertices());
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                prop_assert!((a[i].distance(&a[j]) - b[i].distance(&b[j])).abs() < 1e-9 * 1500.0);
            }
        }
        prop_assert!((p.area() - q.area()).abs() < 1e-9 * p.area());
    }

    #[test]
    fn normalized_longest_edge_lies_on_x_axis(p in convex_polygon()) {
        let (q, _) = normalize(&p);
        let (a, b) = q.edge(q.longest_edge());
        prop_assert_eq!(a.y, 0.0);
        prop_assert_eq!(b.y, 0.0);
        prop_assert!(b.x > a.x);
        let bounds = q.bounds();
        prop_assert!(bounds.min.x.abs() < 1e-9 && bounds.min.y.abs() < 1e-9);
    }

    #[test]
    fn horizontal_line_meets_convex_boundary_twice(p in convex_polygon(), frac in 0.001f64..0.999) {
        let (q, _) = normalize(&p);
        let y = frac * q.bounds().max.y;
        let hits = q.horizontal_intersections(y);
        prop_assert_eq!(hits.len(), 2, "{:?}", hits);
        prop_assert!(hits[0].x < hits[1].x);
        for h in hits {
            prop_assert!(boundary_distance(&q, h) < 1e-7);
        }
    }

    #[test]
    fn hull_is_convex_and_matches_extreme_points(p in star_polygon()) {
        let hull = p.convex_hull();
        prop_assert!(hull.is_convex());
        let mut expected = brute_force_hull(&p);
        let mut got = hull.vertices().to_vec();
        let key = |a: &Point, b: &Point| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y));
        expected.sort_by(key);
        got.sort_by(key);
        prop_assert_eq!(expected, got);
        for v in p.vertices() {
            prop_assert_ne!(hull.locate(*v), Location::Outside);
        }
    }

    #[test]
    fn point_location_agrees_with_winding_number(p in star_polygon(), x in -11.0f64..11.0, y in -11.0f64..11.0) {
        let pt = Point::new(x, y);
        prop_assume!(boundary_distance(&p, pt) > 1e-6);
        let inside = winding_number(&p, pt) != 0;
        let loc = p.locate(pt);
        prop_assert_eq!(loc == Location::Inside, inside);
        prop_assert_eq!(loc == Location::Outside, !inside);
    }

    #[test]
    fn orientation_is_canonical(p in star_polygon(), reverse in any::<bool>()) {
        let mut pts = p.vertices().to_vec();
        if reverse {
            pts.reverse();
        }
        let q = Polygon::new(pts).unwrap();
        prop_assert!(q.area() > 0.0);
        prop_assert!((q.area() - p.area()).abs() < 1e-9 * p.area());
    }
}

#[test]
fn boundary_points_are_located_on_boundary() {
    let p = common::worked_example();
    for (a, b) in p.edges() {
        let mid = Point::new((a.x + b.x) / 2.0, (a.y + b.y) / 2.0);
        assert_eq!(p.locate(mid), Location::Boundary);
        assert_eq!(p.locate(a), Location::Boundary);
    }
}

#[test]
fn self_intersecting_input_is_rejected() {
    let bowtie = vec![
        Point::new(0.0, 0.0),
        Point::new(2.0, 2.0),
        Point::new(2.0, 0.0),
        Point::new(0.0, 2.0),
    ];
    assert!(Polygon::new(bowtie).is_err());
}
