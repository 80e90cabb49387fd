//! The square grid, cell rasterization of segments, and clipping to cells.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::kernel::{BBox, Point};

pub type CellId = (i64, i64);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub origin: Point,
    pub cell: f64,
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// Successive random grid offsets in `[0, cell)^2`.
pub struct OffsetSource {
    rng: ChaCha8Rng,
}

impl OffsetSource {
    pub fn new(seed: u64) -> Self {
        OffsetSource { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn next_grid(&mut self, cell: f64) -> Grid {
        let x = unit(&mut self.rng) * cell;
        let y = unit(&mut self.rng) * cell;
        Grid { origin: Point::new(x, y), cell }
    }
}

impl Grid {
    pub fn x(&self, i: i64) -> f64 {
        self.origin.x + i as f64 * self.cell
    }

    pub fn y(&self, j: i64) -> f64 {
        self.origin.y + j as f64 * self.cell
    }

    pub fn col(&self, x: f64) -> i64 {
        libm::floor((x - self.origin.x) / self.cell) as i64
    }

    pub fn row(&self, y: f64) -> i64 {
        libm::floor((y - self.origin.y) / self.cell) as i64
    }

    pub fn cell_of(&self, p: Point) -> CellId {
        (self.col(p.x), self.row(p.y))
    }

    pub fn rect(&self, c: CellId) -> BBox {
        BBox { min: Point::new(self.x(c.0), self.y(c.1)), max: Point::new(self.x(c.0 + 1), self.y(c.1 + 1)) }
    }

    /// Corners counterclockwise from the lower left.
    pub fn corners(&self, c: CellId) -> [Point; 4] {
        let r = self.rect(c);
        [r.min, Point::new(r.max.x, r.min.y), r.max, Point::new(r.min.x, r.max.y)]
    }

    /// Distance from `v` to the nearest vertical or horizontal grid line.
    pub fn line_clearance(&self, v: Point) -> f64 {
        let fx = (v.x - self.origin.x) / self.cell;
        let fy = (v.y - self.origin.y) / self.cell;
        let dx = libm::fabs(fx - libm::round(fx));
        let dy = libm::fabs(fy - libm::round(fy));
        dx.min(dy) * self.cell
    }

    /// Every cell the segment passes within `tol` of, in no particular order.
    pub fn cells_on_segment(&self, a: Point, b: Point, tol: f64, out: &mut Vec<CellId>) {
        let (lo_x, hi_x) = (a.x.min(b.x) - tol, a.x.max(b.x) + tol);
        let i0 = self.col(lo_x);
        let i1 = self.col(hi_x);
        let dx = b.x - a.x;
        for i in i0..=i1 {
            let xa = self.x(i).max(lo_x);
            let xb = self.x(i + 1).min(hi_x);
            let (ya, yb) = if libm::fabs(dx) <= tol {
                (a.y, b.y)
            } else {
                let ta = ((xa - a.x) / dx).clamp(0.0, 1.0);
                let tb = ((xb - a.x) / dx).clamp(0.0, 1.0);
                (a.y + ta * (b.y - a.y), a.y + tb * (b.y - a.y))
            };
            let j0 = self.row(ya.min(yb) - tol);
            let j1 = self.row(ya.max(yb) + tol);
            for j in j0..=j1 {
                out.push((i, j));
            }
        }
    }

    pub fn cells_near_point(&self, p: Point, tol: f64, out: &mut Vec<CellId>) {
        for i in self.col(p.x - tol)..=self.col(p.x + tol) {
            for j in self.row(p.y - tol)..=self.row(p.y + tol) {
                out.push((i, j));
            }
        }
    }
}

#[derive(Clone, Copy)]
enum Side {
    Left(f64),
    Right(f64),
    Bottom(f64),
    Top(f64),
}

impl Side {
    fn inside(self, p: Point) -> bool {
        match self {
            Side::Left(x) => p.x >= x,
            Side::Right(x) => p.x <= x,
            Side::Bottom(y) => p.y >= y,
            Side::Top(y) => p.y <= y,
        }
    }

    /// Crossing of `a -> b` with the side line, snapped onto it.
    fn cross(self, a: Point, b: Point) -> Point {
        match self {
            Side::Left(x) | Side::Right(x) => {
                let t = (x - a.x) / (b.x - a.x);
                Point::new(x, a.y + t * (b.y - a.y))
            }
            Side::Bottom(y) | Side::Top(y) => {
                let t = (y - a.y) / (b.y - a.y);
                Point::new(a.x + t * (b.x - a.x), y)
            }
        }
    }
}

fn clip_side(poly: &[Point], side: Side) -> Vec<Point> {
    let m = poly.len();
    let mut out = Vec::with_capacity(m + 4);
    for k in 0..m {
        let a = poly[k];
        let b = poly[(k + 1) % m];
        match (side.inside(a), side.inside(b)) {
            (true, true) => out.push(b),
            (true, false) => out.push(side.cross(a, b)),
            (false, true) => {
                out.push(side.cross(a, b));
                out.push(b);
            }
            (false, false) => {}
        }
    }
    out.dedup();
    while out.len() > 1 && out[0] == out[out.len() - 1] {
        out.pop();
    }
    out
}

/// Sutherland-Hodgman clip of a closed loop to a horizontal strip. Parts
/// outside collapse onto the strip boundary, so winding numbers inside the
/// strip are preserved.
pub fn clip_to_strip(poly: &[Point], y0: f64, y1: f64) -> Vec<Point> {
    let p = clip_side(poly, Side::Bottom(y0));
    clip_side(&p, Side::Top(y1))
}

pub fn clip_to_columns(poly: &[Point], x0: f64, x1: f64) -> Vec<Point> {
    let p = clip_side(poly, Side::Left(x0));
    clip_side(&p, Side::Right(x1))
}

pub fn clip_to_rect(poly: &[Point], r: &BBox) -> Vec<Point> {
    clip_to_columns(&clip_to_strip(poly, r.min.y, r.max.y), r.min.x, r.max.x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::polygon::signed_area;
    use crate::generate;
    use alloc::vec;

    #[test]
    fn clip_preserves_area_inside() {
        let p = generate::random(30, 5);
        let g = Grid { origin: Point::new(0.013, 0.029), cell: 0.1 };
        let mut total = 0.0;
        for i in -1..12 {
            for j in -1..12 {
                total += signed_area(&clip_to_rect(p.vertices(), &g.rect((i, j))));
            }
        }
        assert!((total - p.area()).abs() < 1e-12);
    }

    #[test]
    fn segment_cells_cover_samples() {
        let g = Grid { origin: Point::new(0.3, -0.2), cell: 0.7 };
        let a = Point::new(-1.3, 2.2);
        let b = Point::new(4.1, -3.05);
        let mut cells = Vec::new();
        g.cells_on_segment(a, b, 1e-9, &mut cells);
        for k in 0..=1000 {
            let p = a.lerp(b, k as f64 / 1000.0);
            assert!(cells.contains(&g.cell_of(p)));
        }
        let mut v = Vec::new();
        g.cells_on_segment(Point::new(1.2, 0.0), Point::new(1.2, 3.0), 1e-9, &mut v);
        assert!(v.iter().all(|c| c.0 == g.col(1.2)));
    }

    #[test]
    fn clearance() {
        let g = Grid { origin: Point::new(0.5, 0.5), cell: 1.0 };
        assert_eq!(g.line_clearance(Point::new(2.5, 3.25)), 0.0);
        assert!((g.line_clearance(Point::new(2.75, 3.0)) - 0.25).abs() < 1e-15);
        let sq = vec![Point::new(0.0, 0.0), Point::new(2.0, 0.0), Point::new(2.0, 2.0), Point::new(0.0, 2.0)];
        let c = clip_to_rect(&sq, &g.rect((0, 0)));
        assert_eq!(signed_area(&c), 1.0);
    }
}
