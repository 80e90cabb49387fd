//! Test and benchmark polygon families.

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::kernel::polygon::snap;
use crate::kernel::predicates::{segment_contact, SegmentContact};
use crate::kernel::{Point, Polygon};

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// Random simple polygon on `n` uniform points in the unit square: a random
/// permutation untangled by 2-opt moves.
pub fn random(n: usize, seed: u64) -> Polygon {
    let n = n.max(3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut pts: Vec<Point> = (0..n).map(|_| snap(Point::new(unit(&mut rng), unit(&mut rng)))).collect();
        for i in (1..n).rev() {
            let j = (rng.next_u64() % (i as u64 + 1)) as usize;
            pts.swap(i, j);
        }
        untangle(&mut pts);
        if let Ok(p) = Polygon::new(pts) {
            if p.len() == n {
                return p;
            }
        }
    }
}

/// Reverse the chain between crossing edges until none cross. Each move
/// shortens the tour, so this terminates.
fn untangle(pts: &mut [Point]) {
    let n = pts.len();
    let mut budget = 64 * n * n;
    loop {
        let mut changed = false;
        for i in 0..n {
            let mut j = i + 2;
            while j < n {
                if i == 0 && j == n - 1 {
                    break;
                }
                let (a, b) = (pts[i], pts[i + 1]);
                let (c, d) = (pts[j], pts[(j + 1) % n]);
                if segment_contact(a, b, c, d) == SegmentContact::Proper {
                    pts[i + 1..=j].reverse();
                    changed = true;
                    budget = budget.saturating_sub(1);
                }
                j += 1;
            }
        }
        if !changed || budget == 0 {
            return;
        }
    }
}

/// Two-armed spiral band winding twice around the origin.
pub fn spiral(n: usize) -> Polygon {
    let m = (n / 2).max(3);
    let turns = 2.0;
    let span = 2.0 * PI * turns;
    let pitch = 1.0 / (2.0 * PI);
    let width = 0.5;
    let mut pts = Vec::with_capacity(2 * m);
    for k in 0..m {
        let t = span * k as f64 / (m - 1) as f64;
        let r = 1.0 + pitch * t;
        pts.push(Point::new(r * libm::cos(t), r * libm::sin(t)));
    }
    for k in (0..m).rev() {
        let t = span * k as f64 / (m - 1) as f64;
        let r = 1.0 + pitch * t - width;
        pts.push(Point::new(r * libm::cos(t), r * libm::sin(t)));
    }
    Polygon::new(pts).expect("spiral is simple")
}

/// Comb with `max(n / 4, 1)` unit-wide teeth of height 3.
pub fn comb(n: usize) -> Polygon {
    let t = (n / 4).max(1);
    let h = 3.0;
    let mut pts = Vec::with_capacity(4 * t);
    pts.push(Point::new(0.0, 0.0));
    pts.push(Point::new((2 * t - 1) as f64, 0.0));
    for k in (0..t).rev() {
        let x = 2.0 * k as f64;
        pts.push(Point::new(x + 1.0, h));
        pts.push(Point::new(x, h));
        if k > 0 {
            pts.push(Point::new(x, 1.0));
            pts.push(Point::new(x - 1.0, 1.0));
        }
    }
    Polygon::new(pts).expect("comb is simple")
}

/// Star with `max(n / 2, 3)` spikes and jittered radii.
pub fn star(n: usize, seed: u64) -> Polygon {
    let m = (n / 2).max(3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(2 * m);
    for k in 0..2 * m {
        let t = PI * k as f64 / m as f64;
        let r = if k % 2 == 0 { 0.8 + 0.2 * unit(&mut rng) } else { 0.25 + 0.15 * unit(&mut rng) };
        pts.push(Point::new(r * libm::cos(t), r * libm::sin(t)));
    }
    Polygon::new(pts).expect("star is simple")
}

pub fn rect(w: f64, h: f64) -> Polygon {
    Polygon::new(alloc::vec![
        Point::new(0.0, 0.0),
        Point::new(w, 0.0),
        Point::new(w, h),
        Point::new(0.0, h),
    ])
    .expect("rectangle sides must be positive")
}

/// Uniformly scale about the origin so the area becomes `area`.
pub fn scaled_to_area(p: &Polygon, area: f64) -> Polygon {
    let s = libm::sqrt(area / p.area());
    Polygon::new(p.vertices().iter().map(|&q| q * s).collect()).expect("scaling preserves simplicity")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_are_valid() {
        assert_eq!(rect(3.0, 1.0).len(), 4);
        assert_eq!(random(100, 7).len(), 100);
        assert!(spiral(40).reflex_count() >= 15);
        assert_eq!(comb(24).len(), 24);
        assert_eq!(star(20, 1).len(), 20);
    }

    #[test]
    fn deterministic() {
        assert_eq!(random(30, 5), random(30, 5));
        assert_ne!(random(30, 5), random(30, 6));
    }

    #[test]
    fn rescale() {
        let p = scaled_to_area(&star(12, 0), 7.0);
        assert!((p.area() - 7.0).abs() < 1e-6);
    }
}
