use super::*;
use crate::boundary::{default_start, greedy_boundary};
use crate::constraint::{containment_measure, SizeConstraint};
use crate::generate;
use crate::kernel::visibility::geodesic_diameter;

fn run(kind: SizeKind, poly: &Polygon) -> (BoundaryPartition, InteriorPartition) {
    let b = greedy_boundary(SizeConstraint::unit(kind), poly, default_start(poly)).unwrap();
    let i = interior_partition(poly, &b, &InteriorConfig::default_for(kind)).unwrap();
    (b, i)
}

fn total_area(b: &BoundaryPartition, i: &InteriorPartition) -> f64 {
    let cells = i.stats.complete as f64 - i.pieces.iter().filter(|p| p.class == PieceClass::Complete).count() as f64;
    b.pieces.iter().map(|p| p.shape.area()).sum::<f64>()
        + i.pieces.iter().map(|p| p.area()).sum::<f64>()
        + cells * i.grid.cell * i.grid.cell
}

fn fits(kind: SizeKind, p: &Piece) -> bool {
    let w = &p.shape.walk;
    let m = match kind {
        SizeKind::GeodesicDiameter => geodesic_diameter(&p.shape),
        SizeKind::Perimeter => p.shape.perimeter(),
        _ => containment_measure(kind, w),
    };
    m <= 1.0 + 1e-6
}

#[test]
fn default_configs_are_valid() {
    for kind in SizeKind::ALL {
        InteriorConfig::default_for(kind).validate(kind).unwrap();
    }
    let g = InteriorConfig::default_for(SizeKind::GeodesicDiameter);
    assert!((g.delta - 0.132_79).abs() < 1e-5);
    let bad = InteriorConfig { gamma: 1.1, ..InteriorConfig::default_for(SizeKind::AlignedSquare) };
    assert!(bad.validate(SizeKind::AlignedSquare).is_err());
    let bad = InteriorConfig { delta: 0.133, ..g };
    assert!(bad.validate(SizeKind::GeodesicDiameter).is_err());
}

#[test]
fn big_square_has_complete_disk_cells() {
    let poly = generate::rect(10.0, 10.0);
    let (b, i) = run(SizeKind::Disk, &poly);
    assert!(i.stats.complete > 0);
    // the boundary pieces reach at most one disk diameter inwards
    let inner = 10.0 - 2.0 * 2.0;
    let s = core::f64::consts::SQRT_2;
    assert!(i.stats.complete as f64 >= libm::floor(inner / s - 1.0).powi(2));
    assert!((total_area(&b, &i) - 100.0).abs() < 1e-8);
    assert_eq!(i.complete_cells().count() + i.pieces.len(), i.piece_count());
}

#[test]
fn areas_add_up_for_every_kind() {
    let poly = generate::scaled_to_area(&generate::random(30, 11), 12.0);
    for kind in SizeKind::ALL {
        let (b, i) = run(kind, &poly);
        let got = total_area(&b, &i);
        assert!((got - poly.area()).abs() <= 1e-8 * poly.area(), "{kind:?}: {got} vs {}", poly.area());
    }
}

#[test]
fn interior_pieces_fit_the_bound() {
    let poly = generate::scaled_to_area(&generate::random(25, 4), 6.0);
    for kind in SizeKind::ALL {
        let (_, i) = run(kind, &poly);
        for p in &i.pieces {
            assert!(fits(kind, p), "{kind:?} {:?} piece too large", p.class);
        }
    }
}

#[test]
fn path_kinds_produce_fragment_unions() {
    let poly = generate::scaled_to_area(&generate::random(20, 8), 4.0);
    let (_, i) = run(SizeKind::GeodesicDiameter, &poly);
    assert!(!i.fragments.is_empty());
    let delta = InteriorConfig::default_for(SizeKind::GeodesicDiameter).delta;
    for f in &i.fragments {
        assert!(f.length() <= delta * (1.0 + 1e-9));
    }
    assert!(i.pieces.iter().all(|p| p.class != PieceClass::Incomplete || i.stats.fallback_pieces > 0));
}

#[test]
fn same_seed_same_grid() {
    let poly = generate::scaled_to_area(&generate::random(15, 2), 5.0);
    let (_, a) = run(SizeKind::AlignedSquare, &poly);
    let (_, b) = run(SizeKind::AlignedSquare, &poly);
    assert_eq!(a.grid, b.grid);
    assert_eq!(a.piece_count(), b.piece_count());
}
