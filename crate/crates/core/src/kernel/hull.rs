//! Convex hulls and the enclosing shapes computed from them.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::{FRAC_PI_2, PI};

use super::point::Point;
use super::predicates::orient;

/// Counterclockwise convex hull with collinear points removed.
///
/// One or two distinct input points give a degenerate hull of that many
/// vertices; see [`is_degenerate`].
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.lex_cmp(b));
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(pts.len() + 1);
    for &p in pts.iter() {
        while hull.len() >= 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    if hull.len() < 2 {
        // all points collinear: keep the two extremes
        return alloc::vec![pts[0], pts[pts.len() - 1]];
    }
    hull
}

pub fn is_degenerate(hull: &[Point]) -> bool {
    hull.len() < 3
}

/// Largest pairwise distance, with the pair attaining it.
///
/// Rotating calipers over the hull; every candidate distance is evaluated with
/// [`Point::dist`], so the result equals a brute-force scan bit for bit.
pub fn diameter_pair(points: &[Point]) -> (f64, Point, Point) {
    let h = convex_hull(points);
    match h.len() {
        0 => return (0.0, Point::default(), Point::default()),
        1 => return (0.0, h[0], h[0]),
        2 => return (h[0].dist(h[1]), h[0], h[1]),
        _ => {}
    }
    let n = h.len();
    let mut best = (0.0, h[0], h[0]);
    let consider = |a: Point, b: Point, best: &mut (f64, Point, Point)| {
        let d = a.dist(b);
        if d > best.0 {
            *best = (d, a, b);
        }
    };
    let mut j = 1;
    for i in 0..n {
        let e = h[(i + 1) % n] - h[i];
        loop {
            let step = h[(j + 1) % n] - h[j % n];
            if e.cross(step) > 0.0 {
                j += 1;
            } else {
                break;
            }
        }
        for dj in 0..2 {
            let q = h[(j + dj) % n];
            consider(h[i], q, &mut best);
            consider(h[(i + 1) % n], q, &mut best);
        }
    }
    best
}

pub fn straight_diameter(points: &[Point]) -> f64 {
    diameter_pair(points).0
}

/// Axis-aligned bounding-square side: the larger bounding-box extent.
pub fn aligned_square_side(points: &[Point]) -> f64 {
    let b = super::point::BBox::of(points);
    if points.is_empty() {
        return 0.0;
    }
    b.width().max(b.height())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrientedSquare {
    pub center: Point,
    pub half_side: f64,
    /// Rotation in `[0, pi/2)`.
    pub angle: f64,
}

impl OrientedSquare {
    /// Corners, counterclockwise.
    pub fn corners(&self) -> [Point; 4] {
        let u = Point::new(libm::cos(self.angle), libm::sin(self.angle)) * self.half_side;
        let v = u.perp();
        let c = self.center;
        [c - u - v, c + u - v, c + u + v, c - u + v]
    }

    pub fn contains(&self, p: Point, eps: f64) -> bool {
        let u = Point::new(libm::cos(self.angle), libm::sin(self.angle));
        let d = p - self.center;
        libm::fabs(d.dot(u)) <= self.half_side + eps && libm::fabs(d.dot(u.perp())) <= self.half_side + eps
    }
}

/// Extents of `hull` along `u` and its perpendicular at rotation `phi`:
/// `(min_u, max_u, min_v, max_v)`.
fn extents(hull: &[Point], phi: f64) -> (f64, f64, f64, f64) {
    let u = Point::new(libm::cos(phi), libm::sin(phi));
    let v = u.perp();
    let mut e = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &p in hull {
        let a = p.dot(u);
        let b = p.dot(v);
        e.0 = e.0.min(a);
        e.1 = e.1.max(a);
        e.2 = e.2.min(b);
        e.3 = e.3.max(b);
    }
    e
}

fn longer_side(hull: &[Point], phi: f64) -> f64 {
    let (a, b, c, d) = extents(hull, phi);
    (b - a).max(d - c)
}

fn support(hull: &[Point], dir: Point) -> Point {
    let mut best = hull[0];
    for &p in &hull[1..] {
        if p.dot(dir) > best.dot(dir) {
            best = p;
        }
    }
    best
}

fn reduce_quarter(a: f64) -> f64 {
    let r = a - libm::floor(a / FRAC_PI_2) * FRAC_PI_2;
    if !(0.0..FRAC_PI_2).contains(&r) {
        0.0
    } else {
        r
    }
}

/// Smallest square over all rotations that contains `points`.
///
/// For rotation `phi` the bounding rectangle has sides `w1(phi)`, `w2(phi)`
/// and `l(phi) = max(w1, w2)`. Between caliper events both widths are concave
/// sinusoids, so the minimum of `l` lies at an event or where `w1 = w2`.
/// Returns `(angle, side, square)`.
pub fn min_square_over_rotations(points: &[Point]) -> (f64, f64, OrientedSquare) {
    let hull = convex_hull(points);
    if hull.is_empty() {
        let sq = OrientedSquare { center: Point::default(), half_side: 0.0, angle: 0.0 };
        return (0.0, 0.0, sq);
    }
    let n = hull.len();
    let mut events: Vec<f64> = Vec::with_capacity(n + 1);
    events.push(0.0);
    if n >= 2 {
        for i in 0..n {
            let e = hull[(i + 1) % n] - hull[i];
            events.push(reduce_quarter(libm::atan2(e.y, e.x)));
        }
    }
    events.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    events.dedup();
    let mut candidates: Vec<f64> = events.clone();
    for k in 0..events.len() {
        let lo = events[k];
        let hi = if k + 1 < events.len() { events[k + 1] } else { FRAC_PI_2 };
        if hi <= lo {
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let u = Point::new(libm::cos(mid), libm::sin(mid));
        let v = u.perp();
        let d1 = support(&hull, u) - support(&hull, -u);
        let d2 = support(&hull, v) - support(&hull, -v);
        let mut phi = libm::atan2(-(d1.x - d2.y), d1.y + d2.x);
        while phi < lo {
            phi += PI;
        }
        while phi >= lo + PI {
            phi -= PI;
        }
        if phi > lo && phi < hi {
            candidates.push(phi);
        }
    }
    let mut best_phi = 0.0;
    let mut best = longer_side(&hull, 0.0);
    for &phi in &candidates {
        let l = longer_side(&hull, phi);
        if l < best {
            best = l;
            best_phi = phi;
        }
    }
    let (a, b, c, d) = extents(&hull, best_phi);
    let u = Point::new(libm::cos(best_phi), libm::sin(best_phi));
    let center = u * (0.5 * (a + b)) + u.perp() * (0.5 * (c + d));
    let sq = OrientedSquare { center, half_side: 0.5 * best, angle: best_phi };
    (best_phi, best, sq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn square_with_center() {
        let h = convex_hull(&[p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0), p(0.5, 0.5)]);
        assert_eq!(h.len(), 4);
    }

    #[test]
    fn collinear_is_degenerate() {
        let h = convex_hull(&[p(1.0, 0.0), p(0.0, 0.0), p(2.0, 0.0)]);
        assert_eq!(h, vec![p(0.0, 0.0), p(2.0, 0.0)]);
        assert!(is_degenerate(&h));
    }

    #[test]
    fn diameters() {
        let sq = [p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)];
        assert_eq!(straight_diameter(&sq), 2f64.sqrt());
        assert_eq!(straight_diameter(&[p(0.0, 0.0), p(3.0, 4.0)]), 5.0);
    }

    #[test]
    fn rotated_unit_square_fits_unit_square() {
        let r = 0.5 * 2f64.sqrt();
        let pts = [p(r, 0.0), p(0.0, r), p(-r, 0.0), p(0.0, -r)];
        let (angle, side, sq) = min_square_over_rotations(&pts);
        assert!((side - 1.0).abs() < 1e-12, "{side}");
        assert!((angle - PI / 4.0).abs() < 1e-9, "{angle}");
        for q in pts {
            assert!(sq.contains(q, 1e-12));
        }
        assert!((aligned_square_side(&pts) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn needle_and_point() {
        // A segment is the diagonal of its smallest enclosing square.
        let (_, side, _) = min_square_over_rotations(&[p(0.0, 0.0), p(3.0, 0.0)]);
        assert!((side - 3.0 / 2f64.sqrt()).abs() < 1e-12);
        let (_, side, _) = min_square_over_rotations(&[p(2.0, 5.0)]);
        assert_eq!(side, 0.0);
    }

    fn brute_hull_vertices(pts: &[Point]) -> Vec<Point> {
        // A point is a hull vertex iff it is not in any closed triangle of
        // other points and not between two others on a line.
        let mut u = pts.to_vec();
        u.sort_by(|a, b| a.lex_cmp(b));
        u.dedup();
        let mut out = Vec::new();
        'next: for (i, &q) in u.iter().enumerate() {
            for a in 0..u.len() {
                for b in 0..u.len() {
                    if a == i || b == i || a == b {
                        continue;
                    }
                    if super::super::predicates::on_segment(q, u[a], u[b]) {
                        continue 'next;
                    }
                    for c in 0..u.len() {
                        if c == i || c == a || c == b {
                            continue;
                        }
                        let o1 = orient(u[a], u[b], q);
                        let o2 = orient(u[b], u[c], q);
                        let o3 = orient(u[c], u[a], q);
                        if ((o1 >= 0 && o2 >= 0 && o3 >= 0) || (o1 <= 0 && o2 <= 0 && o3 <= 0))
                            && orient(u[a], u[b], u[c]) != 0 {
                                continue 'next;
                            }
                    }
                }
            }
            out.push(q);
        }
        out
    }

    fn grid_min_side(pts: &[Point]) -> f64 {
        let h = convex_hull(pts);
        let steps = 15708; // resolution 1e-4 over [0, pi/2)
        (0..steps)
            .map(|k| longer_side(&h, k as f64 * 1e-4))
            .fold(f64::INFINITY, f64::min)
    }

    fn cloud() -> impl Strategy<Value = Vec<Point>> {
        prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 1..40)
            .prop_map(|v| v.into_iter().map(Point::from).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn hull_matches_extreme_point_filter(pts in prop::collection::vec((-5i32..5, -5i32..5), 1..25)) {
            let pts: Vec<Point> = pts.into_iter().map(|(x, y)| p(x as f64, y as f64)).collect();
            let mut h = convex_hull(&pts);
            let mut b = brute_hull_vertices(&pts);
            h.sort_by(|a, b| a.lex_cmp(b));
            b.sort_by(|a, b| a.lex_cmp(b));
            prop_assert_eq!(h, b);
        }

        #[test]
        fn hull_contains_inputs(pts in cloud()) {
            let h = convex_hull(&pts);
            if h.len() >= 3 {
                for &q in &pts {
                    for i in 0..h.len() {
                        prop_assert!(orient(h[i], h[(i + 1) % h.len()], q) >= 0);
                    }
                }
            }
        }

        #[test]
        fn diameter_equals_all_pairs(pts in cloud()) {
            let mut brute = 0.0f64;
            for a in &pts {
                for b in &pts {
                    brute = brute.max(a.dist(*b));
                }
            }
            prop_assert_eq!(straight_diameter(&pts), brute);
        }

        #[test]
        fn rotated_square_vs_angle_grid(pts in cloud()) {
            let (_, side, sq) = min_square_over_rotations(&pts);
            let grid = grid_min_side(&pts);
            prop_assert!(side <= grid + 1e-9);
            prop_assert!(side >= grid - 1e-3 * (1.0 + grid));
            prop_assert!(side <= aligned_square_side(&pts) + 1e-12);
            for &q in &pts {
                prop_assert!(sq.contains(q, 1e-9));
            }
        }
    }
}
