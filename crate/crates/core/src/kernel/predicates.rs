//! Exact geometric predicates.
//!
//! Orientation is evaluated with Shewchuk's adaptive-precision arithmetic, so
//! the sign is exact for every pair of finite `f64` inputs.

use core::cmp::Ordering;

use super::point::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Clockwise,
    Collinear,
    CounterClockwise,
}

impl Orientation {
    pub fn sign(self) -> i8 {
        match self {
            Orientation::Clockwise => -1,
            Orientation::Collinear => 0,
            Orientation::CounterClockwise => 1,
        }
    }
}

/// Twice the signed area of triangle `abc`, computed adaptively.
pub fn orient_det(a: Point, b: Point, c: Point) -> f64 {
    robust::orient2d(
        robust::Coord { x: a.x, y: a.y },
        robust::Coord { x: b.x, y: b.y },
        robust::Coord { x: c.x, y: c.y },
    )
}

/// Side of `c` relative to the directed line `ab`.
pub fn orientation(a: Point, b: Point, c: Point) -> Orientation {
    let d = orient_det(a, b, c);
    if d > 0.0 {
        Orientation::CounterClockwise
    } else if d < 0.0 {
        Orientation::Clockwise
    } else {
        Orientation::Collinear
    }
}

/// `+1` iff `c` is strictly left of `ab`, `-1` iff strictly right, `0` if collinear.
pub fn orient(a: Point, b: Point, c: Point) -> i8 {
    orientation(a, b, c).sign()
}

/// `d` strictly inside the circle through `a, b, c` (counterclockwise).
pub fn in_circle(a: Point, b: Point, c: Point, d: Point) -> bool {
    robust::incircle(
        robust::Coord { x: a.x, y: a.y },
        robust::Coord { x: b.x, y: b.y },
        robust::Coord { x: c.x, y: c.y },
        robust::Coord { x: d.x, y: d.y },
    ) > 0.0
}

/// `p` lies on the closed segment `ab` (exact).
pub fn on_segment(p: Point, a: Point, b: Point) -> bool {
    orient(a, b, p) == 0
        && p.x >= a.x.min(b.x)
        && p.x <= a.x.max(b.x)
        && p.y >= a.y.min(b.y)
        && p.y <= a.y.max(b.y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SegmentContact {
    Disjoint,
    /// Interiors cross at a single point.
    Proper,
    /// Touching at an endpoint or overlapping collinearly.
    Touch,
}

/// Classify how closed segments `ab` and `cd` meet.
pub fn segment_contact(a: Point, b: Point, c: Point, d: Point) -> SegmentContact {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return SegmentContact::Proper;
    }
    if (o1 == 0 && on_segment(c, a, b))
        || (o2 == 0 && on_segment(d, a, b))
        || (o3 == 0 && on_segment(a, c, d))
        || (o4 == 0 && on_segment(b, c, d))
    {
        return SegmentContact::Touch;
    }
    SegmentContact::Disjoint
}

/// Intersection point of the supporting lines of `ab` and `cd`, if not parallel.
pub fn line_intersection(a: Point, b: Point, c: Point, d: Point) -> Option<(Point, f64, f64)> {
    let r = b - a;
    let s = d - c;
    let denom = r.cross(s);
    if denom == 0.0 {
        return None;
    }
    let qp = c - a;
    let t = qp.cross(s) / denom;
    let u = qp.cross(r) / denom;
    Some((a + r * t, t, u))
}

/// Angular order of direction vectors around the origin, counterclockwise
/// starting from the positive x axis. Exact for finite inputs.
pub fn angle_cmp(u: Point, v: Point) -> Ordering {
    fn half(p: Point) -> u8 {
        // 0: angle in [0, pi), 1: angle in [pi, 2 pi)
        if p.y > 0.0 || (p.y == 0.0 && p.x > 0.0) {
            0
        } else {
            1
        }
    }
    let (hu, hv) = (half(u), half(v));
    if hu != hv {
        return hu.cmp(&hv);
    }
    match orient(Point::default(), u, v) {
        1 => Ordering::Less,
        -1 => Ordering::Greater,
        _ => u.norm_sq().partial_cmp(&v.norm_sq()).unwrap_or(Ordering::Equal),
    }
}
