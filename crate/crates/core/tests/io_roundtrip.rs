mod common;

use common::*;
use covgrid::corpus::{random_convex_polygon, CorpusSpec};
use covgrid::io::{
    parse_scenario, read_decomposition, read_plan, render_svg, write_decomposition, write_plan,
    IoError, PlanDocument,
};
use covgrid::{
    agd_decompose, distance_matrix, sgd_decompose, solve_paper_mode, solve_valid_path, SolverConfig,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn decomposition_json_is_bit_exact(seed in any::<u64>(), sgd in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_convex_polygon(&mut rng, &CorpusSpec::default());
        let d = if sgd { sgd_decompose(&p, 70.0) } else { agd_decompose(&p, 70.0) }.unwrap();
        let text = write_decomposition(&d);
        let back = read_decomposition(&text).unwrap();
        for (a, b) in d.cells.iter().zip(&back.cells) {
            prop_assert_eq!(a.center.x.to_bits(), b.center.x.to_bits());
            prop_assert_eq!(a.center.y.to_bits(), b.center.y.to_bits());
            prop_assert_eq!(a.width.to_bits(), b.width.to_bits());
            prop_assert_eq!(a.height.to_bits(), b.height.to_bits());
        }
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(write_decomposition(&back), text);
    }
}

#[test]
fn plan_documents_round_trip() {
    let d = agd_decompose(&worked_example(), SQRT_2).unwrap();
    let m = distance_matrix(&d.centers(), 12.0).unwrap();
    let cfg = SolverConfig::default();
    let valid = PlanDocument::from_path(&solve_valid_path(&m, &cfg).unwrap(), 12.0);
    let paper = PlanDocument::from_arcs(&solve_paper_mode(&m, &cfg).unwrap(), 12.0);
    for doc in [valid, paper] {
        let text = write_plan(&doc);
        assert_eq!(read_plan(&text).unwrap(), doc);
    }
}

#[test]
fn scenario_formats() {
    let json = r#"{"polygon": [[0,0],[10,0],[12,5],[8,8.5],[2,8.5]], "r": 1.4142135623730951}"#;
    let a = parse_scenario(json).unwrap();
    let b = parse_scenario("POLYGON((0 0, 10 0, 12 5, 8 8.5, 2 8.5, 0 0))").unwrap();
    assert_eq!(a.polygon, b.polygon);
    assert_eq!(a.r, SQRT_2);
    assert!((b.r - 50.0 * SQRT_2).abs() < 1e-12);
    assert_eq!(b.v, 12.0);
}

#[test]
fn scenario_errors() {
    assert!(matches!(
        parse_scenario("{\"polygon\": [[0,0],[1,0]"),
        Err(IoError::Parse { .. })
    ));
    assert!(matches!(
        parse_scenario(r#"{"polygon": [[0,0],[1,0],[0,1]], "v": -1}"#),
        Err(IoError::Validation { .. })
    ));
    assert!(matches!(
        parse_scenario(r#"{"polygon": [[0,0],[1,0],[2,0]]}"#),
        Err(IoError::Geometry(_))
    ));
    assert!(parse_scenario(r#"{"polygon": [[0,0],[1,0],[0,1]], "speed": 3}"#).is_err());
    assert!(parse_scenario("POLYGON((0 0, 4 0, 4 4, 0 4, 0 0), (1 1, 2 1, 2 2, 1 1))").is_err());
}

#[test]
fn svg_is_well_formed_with_route() {
    let d = agd_decompose(&polygon(&TILTED_V0), SQRT_2).unwrap();
    let m = distance_matrix(&d.centers(), 12.0).unwrap();
    let plan = solve_valid_path(&m, &SolverConfig::default()).unwrap();
    let svg = render_svg(&d, Some(&plan.order));
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let count = |tag: &str| doc.descendants().filter(|n| n.has_tag_name(tag)).count();
    assert_eq!(count("rect"), 24);
    assert_eq!(count("polyline"), 1);
    let route = doc
        .descendants()
        .find(|n| n.has_tag_name("polyline"))
        .unwrap();
    assert_eq!(route.attribute("points").unwrap().split(' ').count(), 24);
}
