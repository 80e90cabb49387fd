use super::*;
use crate::constraint::containment_measure;
use crate::generate;
use crate::kernel::polygon::signed_area;
use crate::kernel::geodesic::Geodesic;
use proptest::prelude::*;

fn regular(n: usize, r: f64) -> Polygon {
    let pts = (0..n)
        .map(|i| {
            let a = 2.0 * core::f64::consts::PI * i as f64 / n as f64;
            Point::new(r * libm::cos(a), r * libm::sin(a))
        })
        .collect();
    Polygon::new(pts).unwrap()
}

fn scaled(poly: &Polygon, s: f64) -> Polygon {
    Polygon::new(poly.vertices().iter().map(|&p| p * s).collect()).unwrap()
}

fn run(kind: SizeKind, poly: &Polygon) -> BoundaryPartition {
    greedy_boundary(SizeConstraint::unit(kind), poly, default_start(poly)).unwrap()
}

#[test]
fn unit_square_is_one_aligned_piece() {
    let poly = generate::rect(1.0, 1.0);
    let part = run(SizeKind::AlignedSquare, &poly);
    assert_eq!(part.pieces.len(), 1);
    assert!((part.pieces[0].shape.area() - 1.0).abs() < 1e-12);
    assert_eq!(part.slivers, 0);
}

#[test]
fn rectangle_perimeter_first_interval() {
    let poly = generate::rect(3.0, 1.0);
    let ivs = greedy_intervals(SizeConstraint::unit(SizeKind::Perimeter), &poly, default_start(&poly)).unwrap();
    let first = &ivs[0];
    assert_eq!(first.chain[0], Point::new(0.0, 0.0));
    let end = first.chain[1];
    assert!((end.x - 0.5).abs() < 1e-9 && end.y == 0.0, "{end:?}");
    // a 3x1 rectangle has perimeter 8 and every interval is a half-unit run
    assert_eq!(ivs.len(), 16);
}

#[test]
fn disk_fits_inscribed_polygon() {
    let poly = regular(64, 0.999);
    let part = run(SizeKind::Disk, &poly);
    assert_eq!(part.pieces.len(), 1);
    assert!((part.pieces[0].shape.area() - poly.area()).abs() < 1e-9);
}

#[test]
fn intervals_tile_the_boundary() {
    let poly = generate::random(40, 3);
    for kind in SizeKind::ALL {
        let ivs = greedy_intervals(SizeConstraint::unit(kind), &poly, default_start(&poly)).unwrap();
        let a0 = poly.vertex(poly.lex_min_index());
        assert_eq!(ivs[0].chain[0], a0);
        assert_eq!(*ivs.last().unwrap().chain.last().unwrap(), a0);
        for w in ivs.windows(2) {
            assert_eq!(w[0].chain.last(), w[1].chain.first());
        }
        let total: f64 = ivs.iter().map(|iv| iv.length()).sum();
        assert!((total - poly.perimeter()).abs() < 1e-9 * poly.perimeter(), "{kind}");
    }
}

#[test]
fn estimate_matches_greedy() {
    for seed in 0..6 {
        let poly = scaled(&generate::random(30, seed), 2.0);
        for kind in SizeKind::ALL {
            let c = SizeConstraint::unit(kind);
            let a0 = default_start(&poly);
            let ivs = greedy_intervals(c, &poly, a0).unwrap();
            assert_eq!(estimate_boundary_count(c, &poly, a0).unwrap(), ivs.len(), "{kind} seed {seed}");
        }
    }
}

#[test]
fn maximal_and_feasible() {
    for seed in 0..4 {
        let poly = scaled(&generate::random(25, 10 + seed), 1.5);
        for kind in SizeKind::ALL {
            let m = ChainMeasure::new(SizeConstraint::unit(kind), &poly);
            let g = Greedy::new(&poly, &m, default_start(&poly));
            let ivs = g.intervals().unwrap();
            for iv in &ivs {
                assert!(m.feasible(&iv.chain), "{kind}");
                if g.frame.is_end(iv.end) {
                    continue;
                }
                let far = g.frame.advance(iv.end, 10.0 * g.edge_eps());
                let chain = g.frame.chain(iv.start, far);
                assert!(!m.feasible(&chain), "{kind} seed {seed}");
            }
        }
    }
}

#[test]
fn pieces_fit_the_bound() {
    for seed in 0..4 {
        let poly = scaled(&generate::random(30, 20 + seed), 2.0);
        for kind in SizeKind::ALL {
            let part = run(kind, &poly);
            let mut total = 0.0;
            for piece in &part.pieces {
                let walk = &piece.shape.walk;
                total += signed_area(walk);
                assert!(signed_area(walk) >= -1e-12);
                let size = match kind {
                    SizeKind::GeodesicDiameter => Geodesic::new(&poly).max_pairwise(walk).unwrap(),
                    SizeKind::Perimeter => piece.shape.perimeter(),
                    k => containment_measure(k, walk),
                };
                assert!(size <= 1.0 + 1e-9, "{kind} seed {seed}: {size}");
            }
            assert!(total <= poly.area() + 1e-9);
        }
    }
}

/// Largest parameter on segment `a -> b` such that the aligned box of
/// `prefix` plus the point stays within side `s`: the first of four
/// coordinate limits to bind.
fn aligned_reach(prefix: &[Point], a: Point, b: Point, s: f64) -> f64 {
    let bb = crate::kernel::BBox::of(prefix);
    let mut t: f64 = 1.0;
    let d = b - a;
    if d.x > 0.0 {
        t = t.min((bb.min.x + s - a.x) / d.x);
    }
    if d.x < 0.0 {
        t = t.min((bb.max.x - s - a.x) / d.x);
    }
    if d.y > 0.0 {
        t = t.min((bb.min.y + s - a.y) / d.y);
    }
    if d.y < 0.0 {
        t = t.min((bb.max.y - s - a.y) / d.y);
    }
    t
}

/// Largest parameter on `a -> b` keeping every prefix point within
/// distance `s`: the nearest crossing of any source's circle.
fn farthest_source_reach(prefix: &[Point], a: Point, b: Point, s: f64) -> f64 {
    let d = b - a;
    let mut t: f64 = 1.0;
    for &q in prefix {
        // |a + t d - q|^2 = s^2
        let w = a - q;
        let qa = d.dot(d);
        let qb = 2.0 * w.dot(d);
        let qc = w.dot(w) - s * s;
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 {
            continue;
        }
        let root = (-qb + libm::sqrt(disc)) / (2.0 * qa);
        if root >= 0.0 {
            t = t.min(root);
        }
    }
    t
}

/// Walk the boundary from a start point and return where the first maximal
/// interval ends, using a reach function for the extension step.
fn oracle_end(poly: &Polygon, reach: impl Fn(&[Point], Point, Point, f64) -> f64) -> Point {
    let n = poly.len();
    let s = poly.lex_min_index();
    let mut prefix = alloc::vec![poly.vertex(s)];
    for k in 0..n {
        let a = poly.vertex(s + k);
        let b = poly.vertex(s + k + 1);
        let t = reach(&prefix, a, b, 1.0);
        if t < 1.0 {
            return a.lerp(b, t.max(0.0));
        }
        prefix.push(b);
    }
    poly.vertex(s)
}

#[test]
fn aligned_square_matches_four_candidates() {
    for seed in 0..40 {
        let poly = scaled(&generate::random(20, 100 + seed), 1.0 + (seed % 5) as f64 * 0.4);
        let ivs = greedy_intervals(SizeConstraint::unit(SizeKind::AlignedSquare), &poly, default_start(&poly)).unwrap();
        let got = *ivs[0].chain.last().unwrap();
        let want = oracle_end(&poly, aligned_reach);
        assert!(got.dist(want) < 1e-8 * poly.perimeter(), "seed {seed}: {got:?} vs {want:?}");
    }
}

#[test]
fn straight_diameter_matches_farthest_source() {
    for seed in 0..40 {
        let poly = scaled(&generate::random(20, 200 + seed), 1.0 + (seed % 5) as f64 * 0.4);
        let c = SizeConstraint::unit(SizeKind::StraightDiameter);
        let ivs = greedy_intervals(c, &poly, default_start(&poly)).unwrap();
        let got = *ivs[0].chain.last().unwrap();
        let want = oracle_end(&poly, farthest_source_reach);
        assert!(got.dist(want) < 1e-8 * poly.perimeter(), "seed {seed}: {got:?} vs {want:?}");
    }
}

#[test]
fn start_inside_an_edge() {
    let poly = generate::rect(4.0, 1.0);
    let a0 = BoundaryPosition { edge: 0, t: 0.25 };
    let ivs = greedy_intervals(SizeConstraint::unit(SizeKind::AlignedSquare), &poly, a0).unwrap();
    assert_eq!(ivs[0].chain[0], Point::new(1.0, 0.0));
    assert_eq!(*ivs.last().unwrap().chain.last().unwrap(), Point::new(1.0, 0.0));
    let total: f64 = ivs.iter().map(|iv| iv.length()).sum();
    assert!((total - 10.0).abs() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn greedy_invariants(seed in 0u64..10_000, n in 5usize..30, scale in 0.5f64..4.0, k in 0usize..6) {
        let kind = SizeKind::ALL[k];
        let poly = scaled(&generate::random(n, seed), scale);
        let c = SizeConstraint::unit(kind);
        let a0 = default_start(&poly);
        let part = greedy_boundary(c, &poly, a0).unwrap();
        prop_assert_eq!(part.pieces.len(), part.intervals.len());
        prop_assert_eq!(estimate_boundary_count(c, &poly, a0).unwrap(), part.intervals.len());
        let m = ChainMeasure::new(c, &poly);
        for iv in &part.intervals {
            prop_assert!(m.feasible(&iv.chain));
        }
    }
}
