//! Smallest enclosing disks and circular hulls.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::hull::convex_hull;
use super::point::Point;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disk {
    pub center: Point,
    pub radius: f64,
}

impl Disk {
    pub fn contains(&self, p: Point, eps: f64) -> bool {
        self.center.dist(p) <= self.radius + eps
    }

    fn covers(&self, p: Point) -> bool {
        self.center.dist(p) <= self.radius * (1.0 + 1e-12) + 1e-300
    }

    pub fn from_two(a: Point, b: Point) -> Disk {
        let center = a.midpoint(b);
        Disk { center, radius: center.dist(a).max(center.dist(b)) }
    }

    /// Circumscribed disk, or `None` for (nearly) collinear points.
    pub fn circumscribed(a: Point, b: Point, c: Point) -> Option<Disk> {
        let ab = b - a;
        let ac = c - a;
        let d = 2.0 * ab.cross(ac);
        let scale = ab.norm_sq().max(ac.norm_sq());
        if libm::fabs(d) <= 1e-14 * scale {
            return None;
        }
        let ux = (ac.y * ab.norm_sq() - ab.y * ac.norm_sq()) / d;
        let uy = (ab.x * ac.norm_sq() - ac.x * ab.norm_sq()) / d;
        let center = a + Point::new(ux, uy);
        let radius = center.dist(a).max(center.dist(b)).max(center.dist(c));
        Some(Disk { center, radius })
    }
}

fn disk_of_three(a: Point, b: Point, c: Point) -> Disk {
    match Disk::circumscribed(a, b, c) {
        Some(d) => d,
        None => {
            let cands = [Disk::from_two(a, b), Disk::from_two(a, c), Disk::from_two(b, c)];
            let mut best = cands[0];
            for d in cands {
                if d.radius > best.radius {
                    best = d;
                }
            }
            best
        }
    }
}

/// Smallest disk containing `points` (randomized incremental).
///
/// The insertion order is a fixed pseudo-random shuffle, so the result is
/// deterministic.
pub fn min_enclosing_disk(points: &[Point]) -> Disk {
    let mut pts: Vec<Point> = convex_hull(points);
    if pts.is_empty() {
        return Disk { center: Point::default(), radius: 0.0 };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xD15C);
    for i in (1..pts.len()).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        pts.swap(i, j);
    }
    let mut d = Disk { center: pts[0], radius: 0.0 };
    for i in 1..pts.len() {
        if d.covers(pts[i]) {
            continue;
        }
        d = Disk { center: pts[i], radius: 0.0 };
        for j in 0..i {
            if d.covers(pts[j]) {
                continue;
            }
            d = Disk::from_two(pts[i], pts[j]);
            for k in 0..j {
                if !d.covers(pts[k]) {
                    d = disk_of_three(pts[i], pts[j], pts[k]);
                }
            }
        }
    }
    d
}

/// Boundary of the intersection of all radius-`r` disks containing a point
/// set: the support vertices counterclockwise, and for each the center of
/// the arc leading to the next vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct CircularHull {
    pub radius: f64,
    pub vertices: Vec<Point>,
    pub arc_centers: Vec<Point>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Infeasible {
    pub enclosing_radius: f64,
}

/// Center of the radius-`r` circle through `a` and `b` lying left of `a -> b`.
fn arc_center(a: Point, b: Point, r: f64) -> Point {
    let m = a.midpoint(b);
    let half = 0.5 * a.dist(b);
    let h = libm::sqrt((r * r - half * half).max(0.0));
    let d = b - a;
    let len = d.norm();
    if len == 0.0 {
        return a;
    }
    m + d.perp() * (h / len)
}

pub fn circular_hull(points: &[Point], r: f64) -> Result<CircularHull, Infeasible> {
    let med = min_enclosing_disk(points);
    if med.radius > r * (1.0 + 1e-12) {
        return Err(Infeasible { enclosing_radius: med.radius });
    }
    let mut v = convex_hull(points);
    // Drop hull vertices lying inside the arc disk of their neighbours until
    // every remaining vertex is a genuine corner.
    let mut changed = v.len() > 2;
    while changed {
        changed = false;
        let mut i = 0;
        while v.len() > 2 && i < v.len() {
            let n = v.len();
            let prev = v[(i + n - 1) % n];
            let next = v[(i + 1) % n];
            let c = arc_center(prev, next, r);
            if c.dist(v[i]) <= r * (1.0 - 1e-12) {
                v.remove(i);
                changed = true;
            } else {
                i += 1;
            }
        }
    }
    let n = v.len();
    let arc_centers = match n {
        0 => Vec::new(),
        1 => alloc::vec![v[0]],
        _ => (0..n).map(|i| arc_center(v[i], v[(i + 1) % n], r)).collect(),
    };
    Ok(CircularHull { radius: r, vertices: v, arc_centers })
}
