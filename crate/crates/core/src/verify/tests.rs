use super::*;
use crate::area::area_partition;
use crate::generate;
use crate::interior::InteriorConfig;
use crate::kernel::Point;
use crate::partition::size_partition;
use crate::SizeConstraint;
use alloc::vec;
use proptest::prelude::*;

fn wsp(c: &[(f64, f64)]) -> WeaklySimplePolygon {
    WeaklySimplePolygon::new(c.iter().map(|&p| p.into()).collect())
}

fn whole(p: &Polygon) -> Piece {
    Piece::new(PieceClass::Area, WeaklySimplePolygon::new(p.vertices().to_vec()))
}

#[test]
fn polygon_as_its_own_piece() {
    let p = generate::random(25, 9);
    let rep = check_partition(&p, &[whole(&p)], 1e-9 * p.area()).unwrap();
    assert!(rep.covered_area_residual < 1e-12);
    assert_eq!(rep.max_pairwise_overlap, 0.0);
    assert!(rep.passed());
}

#[test]
fn duplicated_polygon_overlaps_fully() {
    let p = generate::random(25, 9);
    let rep = check_partition(&p, &[whole(&p), whole(&p)], 1e-9 * p.area()).unwrap();
    assert!((rep.max_pairwise_overlap - p.area()).abs() < 1e-9);
    assert!(!rep.passed());
}

#[test]
fn gaps_and_spill_are_reported() {
    let p = generate::rect(2.0, 1.0);
    let left = Piece::new(PieceClass::Area, wsp(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]));
    let rep = check_partition(&p, core::slice::from_ref(&left), 1e-9).unwrap();
    assert!((rep.uncovered_area - 1.0).abs() < 1e-12);
    let wide = Piece::new(PieceClass::Area, wsp(&[(1.0, 0.0), (3.0, 0.0), (3.0, 1.0), (1.0, 1.0)]));
    let rep = check_partition(&p, &[left, wide], 1e-9).unwrap();
    assert!((rep.outside_area - 1.0).abs() < 1e-12);
    assert!(!rep.coverage_ok());
}

#[test]
fn clockwise_piece_is_malformed() {
    let p = generate::rect(1.0, 1.0);
    let cw = Piece::new(PieceClass::Area, wsp(&[(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)]));
    let rep = check_partition(&p, &[cw], 1e-9).unwrap();
    assert_eq!(rep.malformed, vec![MalformedPiece { index: 0, reason: "clockwise" }]);
}

#[test]
fn area_partition_passes() {
    let p = generate::random(50, 21);
    let a = p.area();
    let areas = [0.1 * a, 0.25 * a, 0.3 * a, 0.35 * a];
    let pieces = area_partition(&p, &areas).unwrap();
    let rep = check_partition(&p, &pieces, 1e-9 * a).unwrap();
    assert!(rep.passed(), "{rep:?}");
}

#[test]
fn size_examples() {
    let s = SQRT_2;
    let cell = wsp(&[(0.0, 0.0), (s, 0.0), (s, s), (0.0, s)]);
    let c = check_size(SizeKind::Disk, 1.0, &cell, TOL_SIZE);
    assert!((c.measured - 1.0).abs() < 1e-15 && c.pass);
    let bar = wsp(&[(0.0, 0.0), (1.01, 0.0), (1.01, 0.1), (0.0, 0.1)]);
    let c = check_size(SizeKind::AlignedSquare, 1.0, &bar, TOL_SIZE);
    assert!((c.measured - 1.01).abs() < 1e-15 && !c.pass);
    let c = check_size(SizeKind::Perimeter, 3.0, &bar, TOL_SIZE);
    assert!((c.measured - 2.22).abs() < 1e-12 && c.pass);
}

#[test]
fn l_shape_geodesic_diameter() {
    // the far corners see each other through the reflex vertex
    let l = wsp(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)]);
    assert!((measure(SizeKind::GeodesicDiameter, &l) - 2.0 * SQRT_2).abs() < 1e-9);
    // with a deeper notch the far corners route through (1, 1)
    let u = wsp(&[(0.0, 0.0), (3.0, 0.0), (3.0, 1.0), (1.0, 1.0), (1.0, 3.0), (0.0, 3.0)]);
    let oracle = 2.0 * libm::sqrt(5.0);
    assert!((measure(SizeKind::GeodesicDiameter, &u) - oracle).abs() < 1e-9);
}

#[test]
fn lower_bound_examples() {
    let sq = generate::rect(10.0, 10.0);
    assert_eq!(lower_bound(SizeKind::Disk, 1.0, &sq), 32);
    assert_eq!(lower_bound(SizeKind::AlignedSquare, 1.0, &sq), 100);
    assert_eq!(lower_bound(SizeKind::AlignedSquare, 2.0, &sq), 25);
    let unit = generate::rect(1.0, 1.0);
    assert_eq!(lower_bound(SizeKind::Perimeter, 1.0, &unit), 13);
}

#[test]
fn structure_checks() {
    let unit = generate::rect(1.0, 1.0);
    let c = SizeConstraint::unit(SizeKind::AlignedSquare);
    let part = size_partition(&unit, c, &InteriorConfig::default_for(c.kind)).unwrap();
    let checks = check_structure(&part.boundary, &part.interior, 0.0, Some(1));
    assert!(checks.iter().all(|c| c.name != "ibi-count"));
    assert!(checks.iter().all(|c| c.pass));

    let rect = generate::rect(4.0, 3.0);
    let part = size_partition(&rect, c, &InteriorConfig::default_for(c.kind)).unwrap();
    let checks = check_structure(&part.boundary, &part.interior, 0.0, Some(12));
    let f = checks.iter().find(|c| c.name == "approximation-factor").unwrap();
    assert!(f.pass && f.rhs == 156.0);
}

#[test]
fn geodesic_structure() {
    let p = generate::scaled_to_area(&generate::random(30, 6), 8.0);
    let c = SizeConstraint::unit(SizeKind::GeodesicDiameter);
    let cfg = InteriorConfig::default_for(c.kind);
    let part = size_partition(&p, c, &cfg).unwrap();
    let checks = check_structure(&part.boundary, &part.interior, cfg.delta, None);
    assert_eq!(checks.len(), 3);
    assert!(checks.iter().all(|c| c.pass), "{checks:?}");
}

#[test]
fn full_partition_verifies() {
    let p = generate::scaled_to_area(&generate::random(20, 2), 10.0);
    for kind in [SizeKind::Disk, SizeKind::GeodesicDiameter] {
        let c = SizeConstraint::unit(kind);
        let part = size_partition(&p, c, &InteriorConfig::default_for(kind)).unwrap();
        let pieces = part.to_vec();
        let rep = verify(&p, &pieces, Some((kind, 1.0)), 1e-9 * p.area(), TOL_SIZE).unwrap();
        assert!(rep.passed(), "{kind:?} {:?} {:?}", rep.max_pairwise_overlap, rep.covered_area_residual);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn measures_scale_linearly(seed in 0u64..1000, s in 0.2f64..5.0) {
        let p = generate::random(12, seed);
        let a = WeaklySimplePolygon::new(p.vertices().to_vec());
        let b = WeaklySimplePolygon::new(p.vertices().iter().map(|&v| v * s).collect());
        for kind in SizeKind::ALL {
            let (ma, mb) = (measure(kind, &a), measure(kind, &b));
            prop_assert!((mb - s * ma).abs() <= 1e-9 * mb.max(1.0));
        }
    }

    #[test]
    fn single_piece_always_covers(seed in 0u64..1000) {
        let p = generate::random(15, seed);
        let rep = check_partition(&p, &[whole(&p)], 1e-9 * p.area()).unwrap();
        prop_assert!(rep.coverage_ok());
        let moved: Vec<Point> = p.vertices().iter().map(|&v| v + Point::new(1e-3, 0.0)).collect();
        let shifted = Piece::new(PieceClass::Area, WeaklySimplePolygon::new(moved));
        let rep = check_partition(&p, &[shifted], 1e-9 * p.area()).unwrap();
        prop_assert!(!rep.coverage_ok());
    }
}
