//! Shortest paths inside a simple polygon via the funnel algorithm.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::point::Point;
use super::polygon::{Containment, Polygon};
use super::predicates::{on_segment, orient};
use super::triangulate::{seg_dist, triangulate, Triangulation};
use crate::error::GeometryError;

#[derive(Clone, Debug, PartialEq)]
pub struct ShortestPath {
    pub waypoints: Vec<Point>,
    /// Polygon vertex index of each waypoint, `None` for the endpoints
    /// unless they coincide with a vertex reached as a funnel apex.
    pub corners: Vec<Option<usize>>,
    pub length: f64,
}

impl ShortestPath {
    fn from_points(waypoints: Vec<Point>, corners: Vec<Option<usize>>) -> Self {
        let length = waypoints.windows(2).map(|w| w[0].dist(w[1])).sum();
        ShortestPath { waypoints, corners, length }
    }
}

/// Predecessors and geodesic distances from one source to every corner.
#[derive(Clone, Debug, PartialEq)]
pub struct ShortestPathTree {
    pub source: Point,
    /// Predecessor of corner `i` on the path from the source; `None` means
    /// the source itself.
    pub parent: Vec<Option<usize>>,
    pub dist: Vec<f64>,
}

/// A polygon prepared for repeated shortest-path queries.
#[derive(Clone, Debug)]
pub struct Geodesic {
    poly: Polygon,
    tri: Triangulation,
    /// One triangle incident to each vertex.
    vertex_tri: Vec<usize>,
    tol: f64,
}

struct Portal {
    left: Point,
    right: Point,
    left_id: Option<usize>,
    right_id: Option<usize>,
}

impl Geodesic {
    pub fn new(poly: &Polygon) -> Self {
        let tri = triangulate(poly);
        let mut vertex_tri = vec![0; poly.len()];
        for (t, corners) in tri.triangles.iter().enumerate() {
            for &v in corners {
                vertex_tri[v] = t;
            }
        }
        let tol = 1e-9 * poly.bbox().diagonal();
        Geodesic { poly: poly.clone(), tri, vertex_tri, tol }
    }

    pub fn polygon(&self) -> &Polygon {
        &self.poly
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.tri
    }

    fn check_inside(&self, p: Point) -> Result<(), GeometryError> {
        if self.poly.locate(p) != Containment::Outside {
            return Ok(());
        }
        let n = self.poly.len();
        let d = (0..n)
            .map(|i| {
                let (a, b) = self.poly.edge(i);
                seg_dist(p, a, b)
            })
            .fold(f64::INFINITY, f64::min);
        if d <= self.tol {
            Ok(())
        } else {
            Err(GeometryError::OutsidePolygon(p))
        }
    }

    fn locate(&self, p: Point) -> usize {
        let v = self.poly.vertices();
        if let Some(i) = v.iter().position(|&q| q == p) {
            return self.vertex_tri[i];
        }
        self.tri.locate(p)
    }

    /// BFS parents over the dual tree rooted at `root`.
    fn dual_parents(&self, root: usize) -> Vec<Option<usize>> {
        let m = self.tri.triangles.len();
        let mut parent = vec![None; m];
        let mut seen = vec![false; m];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for v in self.tri.neighbors[u].iter().flatten() {
                if !seen[*v] {
                    seen[*v] = true;
                    parent[*v] = Some(u);
                    queue.push_back(*v);
                }
            }
        }
        parent
    }

    fn portals(&self, s: Point, t: Point, sleeve: &[usize]) -> Vec<Portal> {
        let mut portals = Vec::with_capacity(sleeve.len() + 1);
        portals.push(Portal { left: s, right: s, left_id: None, right_id: None });
        for w in sleeve.windows(2) {
            let (a, b) = (w[0], w[1]);
            let k = (0..3).find(|&k| self.tri.neighbors[a][k] == Some(b)).expect("sleeve is connected");
            let tri = self.tri.triangles[a];
            let (l, r) = (tri[(k + 1) % 3], tri[k]);
            portals.push(Portal {
                left: self.tri.points[l],
                right: self.tri.points[r],
                left_id: Some(l),
                right_id: Some(r),
            });
        }
        portals.push(Portal { left: t, right: t, left_id: None, right_id: None });
        portals
    }

    pub fn path(&self, s: Point, t: Point) -> Result<ShortestPath, GeometryError> {
        self.check_inside(s)?;
        self.check_inside(t)?;
        if s == t {
            return Ok(ShortestPath::from_points(vec![s], vec![None]));
        }
        let ts = self.locate(s);
        let tt = if self.tri.triangle_contains(ts, t) { ts } else { self.locate(t) };
        let parent = self.dual_parents(ts);
        Ok(self.path_with(s, t, tt, &parent))
    }

    fn path_with(&self, s: Point, t: Point, tt: usize, parent: &[Option<usize>]) -> ShortestPath {
        let mut sleeve = vec![tt];
        let mut cur = tt;
        while let Some(p) = parent[cur] {
            sleeve.push(p);
            cur = p;
        }
        sleeve.reverse();
        let portals = self.portals(s, t, &sleeve);
        funnel(&portals, self.poly.vertices())
    }

    pub fn distance(&self, s: Point, t: Point) -> Result<f64, GeometryError> {
        Ok(self.path(s, t)?.length)
    }

    pub fn tree(&self, source: Point) -> Result<ShortestPathTree, GeometryError> {
        self.check_inside(source)?;
        let n = self.poly.len();
        let root = self.locate(source);
        let parents = self.dual_parents(root);
        let mut parent = vec![None; n];
        let mut dist = vec![0.0; n];
        for c in 0..n {
            let target = self.poly.vertex(c);
            if target == source {
                continue;
            }
            let tt = if self.tri.triangle_contains(root, target) { root } else { self.vertex_tri[c] };
            let p = self.path_with(source, target, tt, &parents);
            dist[c] = p.length;
            let k = p.corners.len();
            parent[c] = if k >= 2 { p.corners[k - 2] } else { None };
        }
        Ok(ShortestPathTree { source, parent, dist })
    }

    /// Largest geodesic distance between two corners, which is the geodesic
    /// diameter of the polygon.
    pub fn diameter(&self) -> f64 {
        let n = self.poly.len();
        let mut best = 0.0f64;
        for c in 0..n {
            let tree = self.tree(self.poly.vertex(c)).expect("corners lie in the polygon");
            for d in &tree.dist[c + 1..] {
                best = best.max(*d);
            }
        }
        best
    }

    /// Geodesic distances from `a` to each of `pts`, sharing one dual search.
    pub fn distances_from(&self, a: Point, pts: &[Point]) -> Result<Vec<f64>, GeometryError> {
        self.check_inside(a)?;
        let root = self.locate(a);
        let parents = self.dual_parents(root);
        pts.iter()
            .map(|&b| {
                if a == b {
                    return Ok(0.0);
                }
                self.check_inside(b)?;
                let tb = if self.tri.triangle_contains(root, b) { root } else { self.locate(b) };
                Ok(self.path_with(a, b, tb, &parents).length)
            })
            .collect()
    }

    /// Largest geodesic distance among the given points of the polygon.
    pub fn max_pairwise(&self, pts: &[Point]) -> Result<f64, GeometryError> {
        let mut best = 0.0f64;
        for (i, &a) in pts.iter().enumerate() {
            self.check_inside(a)?;
            let root = self.locate(a);
            let parents = self.dual_parents(root);
            for &b in &pts[i + 1..] {
                if a == b {
                    continue;
                }
                let tb = if self.tri.triangle_contains(root, b) { root } else { self.locate(b) };
                best = best.max(self.path_with(a, b, tb, &parents).length);
            }
        }
        Ok(best)
    }
}

/// Simple stupid funnel over the portal sequence.
fn funnel(portals: &[Portal], verts: &[Point]) -> ShortestPath {
    let first = &portals[0];
    let mut pts = vec![first.left];
    let mut ids: Vec<Option<usize>> = vec![None];
    let (mut apex, mut left, mut right) = (first.left, first.left, first.right);
    let (mut left_i, mut right_i) = (0usize, 0usize);
    let (mut left_id, mut right_id) = (first.left_id, first.right_id);
    let mut i = 1;
    while i < portals.len() {
        let p = &portals[i];
        if p.right != right && orient(apex, right, p.right) >= 0 {
            if apex == right || apex == left || orient(apex, left, p.right) < 0 {
                right = p.right;
                right_i = i;
                right_id = p.right_id;
            } else {
                apex = left;
                let apex_i = left_i;
                push(&mut pts, &mut ids, apex, left_id);
                right = apex;
                right_i = apex_i;
                right_id = left_id;
                i = apex_i + 1;
                continue;
            }
        }
        if p.left != left && orient(apex, left, p.left) <= 0 {
            if apex == left || apex == right || orient(apex, right, p.left) > 0 {
                left = p.left;
                left_i = i;
                left_id = p.left_id;
            } else {
                apex = right;
                let apex_i = right_i;
                push(&mut pts, &mut ids, apex, right_id);
                left = apex;
                left_i = apex_i;
                left_id = right_id;
                i = apex_i + 1;
                continue;
            }
        }
        i += 1;
    }
    let last = &portals[portals.len() - 1];
    push(&mut pts, &mut ids, last.left, last.left_id);
    // endpoints that coincide with a corner keep its index
    for (k, q) in pts.iter().enumerate() {
        if ids[k].is_none() {
            ids[k] = verts.iter().position(|v| v == q);
        }
    }
    thread_corners(&mut pts, &mut ids, portals);
    ShortestPath::from_points(pts, ids)
}

/// Insert the sleeve corners a path grazes, so every corner the path
/// touches appears as a waypoint.
fn thread_corners(pts: &mut Vec<Point>, ids: &mut Vec<Option<usize>>, portals: &[Portal]) {
    let mut cand: Vec<(Point, usize)> = Vec::new();
    for p in &portals[1..portals.len() - 1] {
        for (q, id) in [(p.left, p.left_id), (p.right, p.right_id)] {
            if let Some(id) = id {
                if !cand.iter().any(|c| c.1 == id) {
                    cand.push((q, id));
                }
            }
        }
    }
    let mut out_p = vec![pts[0]];
    let mut out_i = vec![ids[0]];
    for k in 1..pts.len() {
        let (a, b) = (pts[k - 1], pts[k]);
        let mut on: Vec<(f64, Point, usize)> = cand
            .iter()
            .filter(|(q, _)| *q != a && *q != b && on_segment(*q, a, b))
            .map(|&(q, id)| (q.dist_sq(a), q, id))
            .collect();
        on.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap_or(core::cmp::Ordering::Equal));
        for (_, q, id) in on {
            out_p.push(q);
            out_i.push(Some(id));
        }
        out_p.push(b);
        out_i.push(ids[k]);
    }
    *pts = out_p;
    *ids = out_i;
}

fn push(pts: &mut Vec<Point>, ids: &mut Vec<Option<usize>>, p: Point, id: Option<usize>) {
    if pts.last() != Some(&p) {
        pts.push(p);
        ids.push(id);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::kernel::hull::straight_diameter;

    fn l_shape() -> Polygon {
        Polygon::new(
            [(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)]
                .iter()
                .map(|&p| p.into())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn convex_is_straight() {
        let p = generate::rect(3.0, 1.0);
        let g = Geodesic::new(&p);
        let path = g.path(Point::new(0.1, 0.1), Point::new(2.9, 0.9)).unwrap();
        assert_eq!(path.waypoints.len(), 2);
        assert!((g.diameter() - libm::sqrt(10.0)).abs() < 1e-12);
    }

    #[test]
    fn l_shape_bends_at_reflex_corner() {
        // Dyadic coordinates make s, (1, 1) and t exactly collinear; with
        // 1.9 and 0.1 rounding nudges the segment off the corner.
        let p = l_shape();
        let g = Geodesic::new(&p);
        let (s, t) = (Point::new(1.875, 0.125), Point::new(0.125, 1.875));
        let path = g.path(s, t).unwrap();
        assert_eq!(path.waypoints, alloc::vec![s, Point::new(1.0, 1.0), t]);
        assert!((path.length - s.dist(t)).abs() < 1e-12);

        let path = g.path(Point::new(1.9, 0.5), Point::new(0.5, 1.9)).unwrap();
        assert_eq!(path.waypoints[1], Point::new(1.0, 1.0));
        let near = g.path(Point::new(1.9, 0.1), Point::new(0.1, 1.9)).unwrap();
        assert!((near.length - 1.8 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn tree_predecessors() {
        let p = l_shape();
        let g = Geodesic::new(&p);
        let t = g.tree(Point::new(1.875, 0.125)).unwrap();
        let far = p.vertices().iter().position(|&q| q == Point::new(0.0, 2.0)).unwrap();
        let reflex = p.vertices().iter().position(|&q| q == Point::new(1.0, 1.0)).unwrap();
        assert_eq!(t.parent[far], Some(reflex));

        let sq = generate::rect(1.0, 1.0);
        let t = Geodesic::new(&sq).tree(Point::new(0.5, 0.5)).unwrap();
        assert!(t.parent.iter().all(|p| p.is_none()), "{t:?}");
    }

    #[test]
    fn degenerate_and_outside() {
        let g = Geodesic::new(&l_shape());
        let q = Point::new(0.5, 0.5);
        assert_eq!(g.path(q, q).unwrap().length, 0.0);
        assert!(g.path(q, Point::new(1.5, 1.5)).is_err());
    }

    #[test]
    fn triangle_from_vertex() {
        let p = Polygon::new(alloc::vec![Point::new(0.0, 0.0), Point::new(4.0, 0.0), Point::new(0.0, 3.0)]).unwrap();
        let t = Geodesic::new(&p).tree(Point::new(0.0, 0.0)).unwrap();
        let mut d = t.dist.clone();
        d.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(d, alloc::vec![0.0, 3.0, 4.0]);
    }

    #[test]
    fn convex_diameter_is_straight() {
        let hex: Vec<Point> = (0..6)
            .map(|k| {
                let t = core::f64::consts::PI * k as f64 / 3.0;
                Point::new(libm::cos(t), libm::sin(t))
            })
            .collect();
        let p = Polygon::new(hex.clone()).unwrap();
        let d = Geodesic::new(&p).diameter();
        assert!((d - straight_diameter(p.vertices())).abs() < 1e-9);
    }
}
