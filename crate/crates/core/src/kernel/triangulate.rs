//! Ear-clipping triangulation of simple polygons.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use super::point::Point;
use super::polygon::Polygon;
use super::predicates::orient;

/// Triangles over the polygon's vertex indices, each counterclockwise.
///
/// `neighbors[t][k]` is the triangle across edge `(tri[k], tri[k + 1])`, or
/// `None` if that edge lies on the polygon boundary.
#[derive(Clone, Debug)]
pub struct Triangulation {
    pub points: Vec<Point>,
    pub triangles: Vec<[usize; 3]>,
    pub neighbors: Vec<[Option<usize>; 3]>,
}

impl Triangulation {
    pub fn corners(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.points[a], self.points[b], self.points[c]]
    }

    pub fn area(&self, t: usize) -> f64 {
        let [a, b, c] = self.corners(t);
        0.5 * (b - a).cross(c - a)
    }

    /// Number of dual-tree edges (interior diagonals).
    pub fn diagonal_count(&self) -> usize {
        self.neighbors.iter().flatten().filter(|n| n.is_some()).count() / 2
    }

    /// Closed point-in-triangle test; exact.
    pub fn triangle_contains(&self, t: usize, q: Point) -> bool {
        let [a, b, c] = self.corners(t);
        orient(a, b, q) >= 0 && orient(b, c, q) >= 0 && orient(c, a, q) >= 0
    }

    /// A triangle containing `q`, or failing that the one nearest to it.
    pub fn locate(&self, q: Point) -> usize {
        if let Some(t) = (0..self.triangles.len()).find(|&t| self.triangle_contains(t, q)) {
            return t;
        }
        let mut best = (f64::INFINITY, 0);
        for t in 0..self.triangles.len() {
            let [a, b, c] = self.corners(t);
            let d = seg_dist(q, a, b).min(seg_dist(q, b, c)).min(seg_dist(q, c, a));
            if d < best.0 {
                best = (d, t);
            }
        }
        best.1
    }
}

pub(crate) fn seg_dist(q: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let l = ab.norm_sq();
    if l == 0.0 {
        return q.dist(a);
    }
    let t = ((q - a).dot(ab) / l).clamp(0.0, 1.0);
    q.dist(a + ab * t)
}

fn in_closed_triangle(a: Point, b: Point, c: Point, q: Point) -> bool {
    orient(a, b, q) >= 0 && orient(b, c, q) >= 0 && orient(c, a, q) >= 0
}

pub fn triangulate(poly: &Polygon) -> Triangulation {
    triangulate_points(poly.vertices())
}

/// Triangulate a counterclockwise simple vertex loop.
pub fn triangulate_points(pts: &[Point]) -> Triangulation {
    let n = pts.len();
    let mut prev: Vec<usize> = (0..n).map(|i| (i + n - 1) % n).collect();
    let mut next: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let mut alive = vec![true; n];
    let mut triangles = Vec::with_capacity(n.saturating_sub(2));

    let turn = |prev: &[usize], next: &[usize], i: usize| orient(pts[prev[i]], pts[i], pts[next[i]]);
    let is_ear = |prev: &[usize], next: &[usize], alive: &[bool], i: usize| -> bool {
        let (p, q) = (prev[i], next[i]);
        let (a, b, c) = (pts[p], pts[i], pts[q]);
        if orient(a, b, c) <= 0 {
            return false;
        }
        let mut j = next[q];
        while j != p {
            // convex vertices cannot be the only ones blocking an ear
            if alive[j] && turn(prev, next, j) <= 0 {
                let r = pts[j];
                if r != a && r != b && r != c && in_closed_triangle(a, b, c, r) {
                    return false;
                }
            }
            j = next[j];
        }
        true
    };

    let mut ear: Vec<bool> = (0..n).map(|i| n > 3 && is_ear(&prev, &next, &alive, i)).collect();
    let mut remaining = n;
    let mut cursor = 0;
    while remaining > 3 {
        let mut found = None;
        let mut i = cursor;
        for _ in 0..remaining {
            if ear[i] {
                found = Some(i);
                break;
            }
            i = next[i];
        }
        let i = match found {
            Some(i) => i,
            None => {
                // Degenerate input: fall back to clipping a straight vertex,
                // else any convex one.
                let mut j = cursor;
                let mut pick = None;
                for _ in 0..remaining {
                    if turn(&prev, &next, j) == 0 {
                        pick = Some(j);
                        break;
                    }
                    j = next[j];
                }
                pick.unwrap_or_else(|| {
                    let mut j = cursor;
                    for _ in 0..remaining {
                        if turn(&prev, &next, j) > 0 {
                            return j;
                        }
                        j = next[j];
                    }
                    cursor
                })
            }
        };
        let (p, q) = (prev[i], next[i]);
        triangles.push([p, i, q]);
        alive[i] = false;
        ear[i] = false;
        next[p] = q;
        prev[q] = p;
        remaining -= 1;
        if remaining > 3 {
            ear[p] = is_ear(&prev, &next, &alive, p);
            ear[q] = is_ear(&prev, &next, &alive, q);
        }
        cursor = q;
    }
    if remaining == 3 {
        let i = cursor;
        triangles.push([prev[i], i, next[i]]);
    }

    let neighbors = dual_adjacency(&triangles);
    Triangulation { points: pts.to_vec(), triangles, neighbors }
}

pub(crate) fn dual_adjacency(triangles: &[[usize; 3]]) -> Vec<[Option<usize>; 3]> {
    let mut edge: HashMap<(usize, usize), (usize, usize)> = HashMap::with_capacity(triangles.len() * 3);
    let mut neighbors = vec![[None; 3]; triangles.len()];
    for (t, tri) in triangles.iter().enumerate() {
        for k in 0..3 {
            let (u, v) = (tri[k], tri[(k + 1) % 3]);
            if let Some(&(s, m)) = edge.get(&(v, u)) {
                neighbors[t][k] = Some(s);
                neighbors[s][m] = Some(t);
            } else {
                edge.insert((u, v), (t, k));
            }
        }
    }
    neighbors
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::kernel::polygon::signed_area;
    use alloc::collections::VecDeque;
    use proptest::prelude::*;

    fn poly(c: &[(f64, f64)]) -> Polygon {
        Polygon::new(c.iter().map(|&p| p.into()).collect()).unwrap()
    }

    fn dual_is_tree(t: &Triangulation) -> bool {
        let m = t.triangles.len();
        if t.diagonal_count() != m - 1 {
            return false;
        }
        let mut seen = vec![false; m];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for v in t.neighbors[u].iter().flatten() {
                if !seen[*v] {
                    seen[*v] = true;
                    queue.push_back(*v);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    fn check(p: &Polygon) {
        let t = triangulate(p);
        assert_eq!(t.triangles.len(), p.len() - 2);
        let sum: f64 = (0..t.triangles.len()).map(|i| t.area(i)).sum();
        assert!((sum - p.area()).abs() <= 1e-9 * p.area(), "{sum} vs {}", p.area());
        for i in 0..t.triangles.len() {
            assert!(t.area(i) >= 0.0);
        }
        assert!(dual_is_tree(&t));
    }

    #[test]
    fn small_cases() {
        let tri = poly(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        let t = triangulate(&tri);
        assert_eq!(t.triangles.len(), 1);
        assert_eq!(t.diagonal_count(), 0);
        let quad = poly(&[(0.0, 0.0), (2.0, 0.0), (3.0, 2.0), (0.0, 1.0)]);
        let t = triangulate(&quad);
        assert_eq!(t.triangles.len(), 2);
        assert_eq!(t.diagonal_count(), 1);
    }

    #[test]
    fn collinear_vertices_get_real_triangles() {
        let p = poly(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (2.0, 1.0), (2.0, 2.0), (1.0, 1.0)]);
        check(&p);
        let t = triangulate(&p);
        for i in 0..t.triangles.len() {
            assert!(t.area(i) > 0.0);
        }
    }

    #[test]
    fn shape_families() {
        check(&generate::spiral(40));
        check(&generate::comb(24));
        check(&generate::star(30, 3));
        for seed in 0..20 {
            check(&generate::random(10, seed));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn areas_sum_to_polygon(n in 3usize..200, seed in any::<u64>()) {
            let p = generate::random(n, seed);
            let t = triangulate(&p);
            prop_assert_eq!(t.triangles.len(), p.len() - 2);
            let sum: f64 = (0..t.triangles.len()).map(|i| t.area(i)).sum();
            prop_assert!((sum - signed_area(p.vertices())).abs() <= 1e-9 * p.area());
            prop_assert!(dual_is_tree(&t));
        }
    }
}
