use alloc::vec::Vec;
use core::cmp::Ordering;

use super::point::{BBox, Point};
use super::predicates::{on_segment, orient, segment_contact, SegmentContact};
use crate::error::GeometryError;

/// Spacing of the lattice inputs are snapped to.
pub const SNAP_GRID: f64 = 1.0 / (1u64 << 30) as f64;

pub fn snap(p: Point) -> Point {
    let s = (1u64 << 30) as f64;
    Point::new(libm::round(p.x * s) / s, libm::round(p.y * s) / s)
}

/// Twice the signed area of a closed vertex loop.
pub fn signed_area2(pts: &[Point]) -> f64 {
    if pts.len() < 3 {
        return 0.0;
    }
    let o = pts[0];
    let mut s = 0.0;
    for i in 1..pts.len() - 1 {
        s += (pts[i] - o).cross(pts[i + 1] - o);
    }
    s
}

pub fn signed_area(pts: &[Point]) -> f64 {
    0.5 * signed_area2(pts)
}

/// Total length of a closed vertex loop.
pub fn loop_length(pts: &[Point]) -> f64 {
    let n = pts.len();
    (0..n).map(|i| pts[i].dist(pts[(i + 1) % n])).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Containment {
    Inside,
    Boundary,
    Outside,
}

/// Locate `q` relative to the closed loop `pts` by winding number; the
/// boundary test is exact.
pub fn locate(pts: &[Point], q: Point) -> Containment {
    let n = pts.len();
    let mut wn = 0i32;
    for i in 0..n {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        if on_segment(q, a, b) {
            return Containment::Boundary;
        }
        if a.y <= q.y {
            if b.y > q.y && orient(a, b, q) > 0 {
                wn += 1;
            }
        } else if b.y <= q.y && orient(a, b, q) < 0 {
            wn -= 1;
        }
    }
    if wn != 0 {
        Containment::Inside
    } else {
        Containment::Outside
    }
}

/// Index of the lexicographically smallest point.
pub fn lex_min_index(pts: &[Point]) -> usize {
    let mut best = 0;
    for i in 1..pts.len() {
        if pts[i].lex_cmp(&pts[best]) == Ordering::Less {
            best = i;
        }
    }
    best
}

/// Drop repeated points and vertices in the middle of straight runs, then
/// start the walk at its lexicographically smallest vertex. Fold-backs are
/// kept.
pub fn simplify_walk(mut walk: Vec<Point>) -> Vec<Point> {
    walk.dedup();
    let straight = |a: Point, b: Point, c: Point| orient(a, b, c) == 0 && (b - a).dot(c - b) > 0.0;
    let mut out: Vec<Point> = Vec::with_capacity(walk.len());
    for p in walk {
        while out.len() >= 2 && straight(out[out.len() - 2], out[out.len() - 1], p) {
            out.pop();
        }
        if out.last() != Some(&p) {
            out.push(p);
        }
    }
    while out.len() > 1 && out[0] == out[out.len() - 1] {
        out.pop();
    }
    while out.len() > 3 {
        let m = out.len();
        if straight(out[m - 2], out[m - 1], out[0]) {
            out.pop();
        } else if straight(out[m - 1], out[0], out[1]) {
            out.remove(0);
        } else {
            break;
        }
    }
    let s = lex_min_index(&out);
    out.rotate_left(s);
    out
}

/// A simple polygon with counterclockwise vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point>,
    area: f64,
}

impl Polygon {
    /// Validate and normalise `points`, snapping to [`SNAP_GRID`].
    pub fn new(points: Vec<Point>) -> Result<Self, GeometryError> {
        Self::with_snapping(points, true)
    }

    pub fn with_snapping(points: Vec<Point>, snap_input: bool) -> Result<Self, GeometryError> {
        for (index, p) in points.iter().enumerate() {
            if !p.is_finite() {
                return Err(GeometryError::NonFinite { index });
            }
        }
        let mut v: Vec<Point> = if snap_input {
            points.into_iter().map(snap).collect()
        } else {
            points
        };
        v.dedup();
        while v.len() > 1 && v[0] == v[v.len() - 1] {
            v.pop();
        }
        if v.len() < 3 {
            return Err(GeometryError::TooFewVertices(v.len()));
        }
        check_simple(&v)?;
        let mut area = signed_area(&v);
        if area == 0.0 {
            return Err(GeometryError::Degenerate);
        }
        if area < 0.0 {
            v.reverse();
            area = -area;
        }
        Ok(Polygon { vertices: v, area })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i % self.vertices.len()]
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1`.
    pub fn edge(&self, i: usize) -> (Point, Point) {
        (self.vertex(i), self.vertex(i + 1))
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn perimeter(&self) -> f64 {
        loop_length(&self.vertices)
    }

    pub fn bbox(&self) -> BBox {
        BBox::of(&self.vertices)
    }

    pub fn locate(&self, q: Point) -> Containment {
        locate(&self.vertices, q)
    }

    pub fn contains(&self, q: Point) -> bool {
        self.locate(q) != Containment::Outside
    }

    /// Interior angle at vertex `i` exceeds pi.
    pub fn is_reflex(&self, i: usize) -> bool {
        let n = self.len();
        orient(self.vertex(i + n - 1), self.vertex(i), self.vertex(i + 1)) < 0
    }

    pub fn reflex_count(&self) -> usize {
        (0..self.len()).filter(|&i| self.is_reflex(i)).count()
    }

    pub fn lex_min_index(&self) -> usize {
        lex_min_index(&self.vertices)
    }

    /// Centroid of the region.
    pub fn centroid(&self) -> Point {
        let o = self.vertices[0];
        let mut cx = 0.0;
        let mut cy = 0.0;
        let mut a2 = 0.0;
        for i in 1..self.len() - 1 {
            let p = self.vertices[i] - o;
            let q = self.vertices[i + 1] - o;
            let c = p.cross(q);
            a2 += c;
            cx += (p.x + q.x) * c;
            cy += (p.y + q.y) * c;
        }
        Point::new(o.x + cx / (3.0 * a2), o.y + cy / (3.0 * a2))
    }
}

/// Reject loops whose boundary touches itself anywhere other than at
/// shared endpoints of consecutive edges.
fn check_simple(v: &[Point]) -> Result<(), GeometryError> {
    let n = v.len();
    let mut order: Vec<usize> = (0..n).collect();
    let lo = |i: usize| v[i].x.min(v[(i + 1) % n].x);
    let hi = |i: usize| v[i].x.max(v[(i + 1) % n].x);
    order.sort_by(|&a, &b| lo(a).partial_cmp(&lo(b)).unwrap_or(Ordering::Equal));
    let mut first: Option<(usize, usize)> = None;
    for (k, &i) in order.iter().enumerate() {
        let (a, b) = (v[i], v[(i + 1) % n]);
        for &j in &order[k + 1..] {
            if lo(j) > hi(i) {
                break;
            }
            let (c, d) = (v[j], v[(j + 1) % n]);
            let bad = if (i + 1) % n == j {
                // b == c: a spike folds back along the shared line.
                on_segment(d, a, b) || on_segment(a, c, d)
            } else if (j + 1) % n == i {
                on_segment(c, a, b) || on_segment(b, c, d)
            } else {
                segment_contact(a, b, c, d) != SegmentContact::Disjoint
            };
            if bad {
                let pair = (i.min(j), i.max(j));
                if first.is_none_or(|f| pair < f) {
                    first = Some(pair);
                }
            }
        }
    }
    match first {
        None => Ok(()),
        Some((a, b)) => {
            let at = contact_point(v[a], v[(a + 1) % n], v[b], v[(b + 1) % n]);
            Err(GeometryError::SelfIntersection { a, b, at })
        }
    }
}

fn contact_point(a: Point, b: Point, c: Point, d: Point) -> Point {
    if let Some((p, t, u)) = super::predicates::line_intersection(a, b, c, d) {
        if (-1e-12..=1.0 + 1e-12).contains(&t) && (-1e-12..=1.0 + 1e-12).contains(&u) {
            return p;
        }
    }
    for q in [a, b] {
        if on_segment(q, c, d) {
            return q;
        }
    }
    for q in [c, d] {
        if on_segment(q, a, b) {
            return q;
        }
    }
    a
}

/// A closed walk of one or more vertices whose interior is a simple open
/// region, possibly with the boundary revisiting points or edges.
#[derive(Clone, Debug, PartialEq)]
pub struct WeaklySimplePolygon {
    pub walk: Vec<Point>,
}

impl WeaklySimplePolygon {
    pub fn new(walk: Vec<Point>) -> Self {
        debug_assert!(!walk.is_empty());
        WeaklySimplePolygon { walk }
    }

    pub fn len(&self) -> usize {
        self.walk.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walk.is_empty()
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.walk)
    }

    pub fn perimeter(&self) -> f64 {
        if self.walk.len() == 2 {
            return 2.0 * self.walk[0].dist(self.walk[1]);
        }
        loop_length(&self.walk)
    }

    pub fn bbox(&self) -> BBox {
        BBox::of(&self.walk)
    }

    /// True if no two edges touch except consecutive ones at their shared
    /// vertex.
    pub fn is_simple(&self) -> bool {
        let mut v = self.walk.clone();
        v.dedup();
        while v.len() > 1 && v[0] == v[v.len() - 1] {
            v.pop();
        }
        v.len() >= 3 && signed_area(&v) != 0.0 && check_simple(&v).is_ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn pts(c: &[(f64, f64)]) -> Vec<Point> {
        c.iter().map(|&p| p.into()).collect()
    }

    #[test]
    fn clockwise_is_reoriented() {
        let p = Polygon::new(pts(&[(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)])).unwrap();
        assert_eq!(p.area(), 1.0);
        assert!(signed_area(p.vertices()) > 0.0);
    }

    #[test]
    fn duplicates_removed() {
        let p = Polygon::new(pts(&[
            (0.0, 0.0),
            (1.0, 0.0),
            (1.0, 0.0),
            (1.0, 1.0),
            (0.0, 0.0),
        ]))
        .unwrap();
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn bowtie_rejected() {
        let e = Polygon::new(pts(&[(0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)])).unwrap_err();
        match e {
            GeometryError::SelfIntersection { a, b, at } => {
                assert_eq!((a, b), (0, 2));
                assert!((at.x - 0.5).abs() < 1e-12 && (at.y - 0.5).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn spike_rejected() {
        let r = Polygon::new(pts(&[(0.0, 0.0), (2.0, 0.0), (1.0, 0.0), (1.0, 1.0)]));
        assert!(matches!(r, Err(GeometryError::SelfIntersection { .. })));
    }

    #[test]
    fn too_few_and_nonfinite() {
        assert_eq!(
            Polygon::new(pts(&[(0.0, 0.0), (1.0, 0.0)])),
            Err(GeometryError::TooFewVertices(2))
        );
        assert_eq!(
            Polygon::new(pts(&[(0.0, 0.0), (f64::NAN, 0.0), (1.0, 1.0)])),
            Err(GeometryError::NonFinite { index: 1 })
        );
        assert!(Polygon::new(pts(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)])).is_err());
    }

    #[test]
    fn collinear_vertex_allowed() {
        let p = Polygon::new(pts(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (2.0, 1.0)])).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.area(), 1.0);
    }

    #[test]
    fn locate_square() {
        let p = Polygon::new(pts(&[(0.0, 0.0), (2.0, 0.0), (2.0, 2.0), (0.0, 2.0)])).unwrap();
        assert_eq!(p.locate(Point::new(1.0, 1.0)), Containment::Inside);
        assert_eq!(p.locate(Point::new(2.0, 1.0)), Containment::Boundary);
        assert_eq!(p.locate(Point::new(0.0, 0.0)), Containment::Boundary);
        assert_eq!(p.locate(Point::new(3.0, 1.0)), Containment::Outside);
        assert_eq!(p.centroid(), Point::new(1.0, 1.0));
    }

    #[test]
    fn reflex_count_of_l_shape() {
        let p = Polygon::new(pts(&[
            (0.0, 0.0),
            (2.0, 0.0),
            (2.0, 1.0),
            (1.0, 1.0),
            (1.0, 2.0),
            (0.0, 2.0),
        ]))
        .unwrap();
        assert_eq!(p.reflex_count(), 1);
        assert!(p.is_reflex(3));
    }

    #[test]
    fn weakly_simple_segment() {
        let w = WeaklySimplePolygon::new(vec![Point::new(0.0, 0.0), Point::new(3.0, 4.0)]);
        assert_eq!(w.area(), 0.0);
        assert_eq!(w.perimeter(), 10.0);
        assert!(!w.is_simple());
    }
}
