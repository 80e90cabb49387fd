//! Visibility graphs of closed walks.
//!
//! Works for weakly simple regions: repeated vertices become separate nodes
//! at the same coordinates joined by zero-cost links, and contacts that only
//! graze the boundary do not block sight lines.

use alloc::vec;
use alloc::vec::Vec;

use super::geodesic::{Geodesic, ShortestPath};
use super::point::Point;
use super::polygon::{locate, Containment, Polygon, WeaklySimplePolygon};
use super::predicates::{on_segment, orient, segment_contact, SegmentContact};

#[derive(Clone, Debug)]
pub struct VisibilityGraph {
    pub nodes: Vec<Point>,
    /// Number of leading nodes that are walk vertices.
    pub walk_len: usize,
    adj: Vec<Vec<(usize, f64)>>,
}

/// Interior wedge of one walk occurrence: the region lies counterclockwise
/// from the outgoing edge to the incoming one.
#[derive(Clone, Copy, Debug)]
struct Wedge {
    at: Point,
    out: Point,
    back: Point,
    /// Only meaningful when `out` and `back` point the same way: the tip of
    /// a crack (full turn) rather than of a needle (zero angle).
    full: bool,
}

impl Wedge {
    fn contains(&self, b: Point) -> bool {
        let (p, q, r) = (self.at, self.out, self.back);
        let turn = orient(p, q, r);
        if turn > 0 {
            orient(p, q, b) >= 0 && orient(p, r, b) <= 0
        } else if turn < 0 {
            !(orient(p, r, b) > 0 && orient(p, q, b) < 0)
        } else if (q - p).dot(r - p) < 0.0 {
            orient(p, q, b) >= 0
        } else if self.full {
            true
        } else {
            orient(p, q, b) == 0 && (q - p).dot(b - p) > 0.0
        }
    }

    fn shares_ray(&self, other: &Wedge) -> bool {
        let same = |u: Point, v: Point| orient(self.at, u, v) == 0 && (u - self.at).dot(v - self.at) > 0.0;
        [self.out, self.back].iter().any(|&u| same(u, other.out) || same(u, other.back))
    }
}

fn wedges(walk: &[Point]) -> Vec<Option<Wedge>> {
    let m = walk.len();
    let scale = super::point::BBox::of(walk).diagonal();
    (0..m)
        .map(|i| {
            let at = walk[i];
            let out = (1..m).map(|k| walk[(i + k) % m]).find(|&q| q != at)?;
            let back = (1..m).map(|k| walk[(i + m - k) % m]).find(|&q| q != at)?;
            let mut w = Wedge { at, out, back, full: false };
            if m > 2 && orient(at, out, back) == 0 && (out - at).dot(back - at) > 0.0 {
                let d = out - at;
                let probe = at + d * (1e-7 * scale / d.norm().max(1e-300)) + d.perp() * (1e-9 * scale / d.norm().max(1e-300));
                w.full = locate(walk, probe) == Containment::Inside;
            }
            Some(w)
        })
        .collect()
}

fn sees(walk: &[Point], a: Point, b: Point) -> bool {
    let m = walk.len();
    if m == 1 {
        return false;
    }
    for i in 0..m {
        let (c, d) = (walk[i], walk[(i + 1) % m]);
        if c != d && segment_contact(a, b, c, d) == SegmentContact::Proper {
            return false;
        }
    }
    // a vertex strictly inside the segment splits it into two hops
    for &w in walk {
        if w != a && w != b && on_segment(w, a, b) {
            return false;
        }
    }
    for i in 0..m {
        let (c, d) = (walk[i], walk[(i + 1) % m]);
        if on_segment(a, c, d) && on_segment(b, c, d) {
            return true;
        }
    }
    if m == 2 {
        return false;
    }
    locate(walk, a.midpoint(b)) != Containment::Outside
}

impl VisibilityGraph {
    pub fn new(walk: &[Point], extra: &[Point]) -> Self {
        let mut nodes: Vec<Point> = walk.to_vec();
        nodes.extend_from_slice(extra);
        let m = walk.len();
        let wedge = wedges(walk);
        let k = nodes.len();
        let mut adj = vec![Vec::new(); k];
        let in_wedge = |u: usize, b: Point| u >= m || wedge[u].is_none_or(|w| w.contains(b));
        for u in 0..k {
            for v in u + 1..k {
                let (a, b) = (nodes[u], nodes[v]);
                let w = if a == b {
                    let split = match (u < m, v < m) {
                        (true, true) => match (wedge[u], wedge[v]) {
                            (Some(x), Some(y)) => x.shares_ray(&y),
                            _ => false,
                        },
                        _ => false,
                    };
                    (!split).then_some(0.0)
                } else if in_wedge(u, b) && in_wedge(v, a) && sees(walk, a, b) {
                    Some(a.dist(b))
                } else {
                    None
                };
                if let Some(w) = w {
                    adj[u].push((v, w));
                    adj[v].push((u, w));
                }
            }
        }
        VisibilityGraph { nodes, walk_len: walk.len(), adj }
    }

    /// Single-source distances and predecessors (dense Dijkstra).
    pub fn dijkstra(&self, src: usize) -> (Vec<f64>, Vec<Option<usize>>) {
        let k = self.nodes.len();
        let mut dist = vec![f64::INFINITY; k];
        let mut prev = vec![None; k];
        let mut done = vec![false; k];
        dist[src] = 0.0;
        for _ in 0..k {
            let mut u = None;
            for i in 0..k {
                if !done[i] && dist[i].is_finite() && u.is_none_or(|j: usize| dist[i] < dist[j]) {
                    u = Some(i);
                }
            }
            let Some(u) = u else { break };
            done[u] = true;
            for &(v, w) in &self.adj[u] {
                let d = dist[u] + w;
                if d < dist[v] {
                    dist[v] = d;
                    prev[v] = Some(u);
                }
            }
        }
        (dist, prev)
    }

    pub fn path_between(&self, s: usize, t: usize) -> Option<ShortestPath> {
        let (dist, prev) = self.dijkstra(s);
        if !dist[t].is_finite() {
            return None;
        }
        let mut chain = vec![t];
        let mut cur = t;
        while let Some(p) = prev[cur] {
            chain.push(p);
            cur = p;
        }
        chain.reverse();
        let mut waypoints: Vec<Point> = Vec::with_capacity(chain.len());
        let mut corners = Vec::with_capacity(chain.len());
        for &c in &chain {
            if waypoints.last() != Some(&self.nodes[c]) {
                waypoints.push(self.nodes[c]);
                corners.push((c < self.walk_len).then_some(c));
            }
        }
        Some(ShortestPath { waypoints, corners, length: dist[t] })
    }
}

/// Shortest path inside the region bounded by `walk`.
pub fn walk_path(walk: &[Point], s: Point, t: Point) -> Option<ShortestPath> {
    let g = VisibilityGraph::new(walk, &[s, t]);
    let m = walk.len();
    g.path_between(m, m + 1)
}

/// Largest geodesic distance between two walk vertices.
pub fn walk_diameter(walk: &[Point]) -> f64 {
    let g = VisibilityGraph::new(walk, &[]);
    let mut best = 0.0f64;
    for u in 0..walk.len() {
        let (d, _) = g.dijkstra(u);
        for x in d {
            if x.is_finite() {
                best = best.max(x);
            }
        }
    }
    best
}

/// Geodesic diameter of a weakly simple polygon: the funnel route when the
/// walk is simple, the visibility graph otherwise.
pub fn geodesic_diameter(piece: &WeaklySimplePolygon) -> f64 {
    if piece.is_simple() {
        if let Ok(p) = Polygon::with_snapping(piece.walk.clone(), false) {
            return Geodesic::new(&p).diameter();
        }
    }
    if piece.walk.len() <= 2 {
        return match piece.walk.len() {
            2 => piece.walk[0].dist(piece.walk[1]),
            _ => 0.0,
        };
    }
    walk_diameter(&piece.walk)
}

/// True if the walk turns consistently: every corner is a left turn or straight.
pub fn is_convex_walk(walk: &[Point]) -> bool {
    let m = walk.len();
    (0..m).all(|i| orient(walk[(i + m - 1) % m], walk[i], walk[(i + 1) % m]) >= 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use proptest::prelude::*;

    fn pts(c: &[(f64, f64)]) -> Vec<Point> {
        c.iter().map(|&p| p.into()).collect()
    }

    #[test]
    fn l_shape_oracle() {
        let l = pts(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)]);
        let p = walk_path(&l, Point::new(1.875, 0.125), Point::new(0.125, 1.875)).unwrap();
        assert_eq!(p.waypoints.len(), 3);
        let d = walk_diameter(&l);
        // (2, 0) to (0, 2) around the corner
        assert!((d - 2.0 * libm::sqrt(2.0)).abs() < 1e-12);
    }

    #[test]
    fn slit_blocks_crossing() {
        // unit square with a crack from the bottom edge up to (0.5, 0.8)
        let w = pts(&[
            (0.0, 0.0),
            (0.5, 0.0),
            (0.5, 0.8),
            (0.5, 0.0),
            (1.0, 0.0),
            (1.0, 1.0),
            (0.0, 1.0),
        ]);
        let p = walk_path(&w, Point::new(0.25, 0.1), Point::new(0.75, 0.1)).unwrap();
        assert!(p.waypoints.contains(&Point::new(0.5, 0.8)), "{p:?}");
        let expect = 2.0 * Point::new(0.25, 0.1).dist(Point::new(0.5, 0.8));
        assert!((p.length - expect).abs() < 1e-12);
        let wsp = WeaklySimplePolygon::new(w);
        assert!(!wsp.is_simple());
        assert!(geodesic_diameter(&wsp) > libm::sqrt(2.0));
    }

    #[test]
    fn segment_walk() {
        let w = WeaklySimplePolygon::new(pts(&[(0.0, 0.0), (3.0, 4.0)]));
        assert_eq!(geodesic_diameter(&w), 5.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn funnel_matches_visibility(n in 4usize..30, seed in any::<u64>(), a in 0usize..1000, b in 0usize..1000) {
            let poly = generate::random(n, seed);
            let g = Geodesic::new(&poly);
            let tri = g.triangulation();
            // interior sample points: triangle centroids
            let ta = a % tri.triangles.len();
            let tb = b % tri.triangles.len();
            let [p0, p1, p2] = tri.corners(ta);
            let s = (p0 + p1 + p2) * (1.0 / 3.0);
            let [q0, q1, q2] = tri.corners(tb);
            let t = (q0 + q1 + q2) * (1.0 / 3.0);
            let funnel = g.path(s, t).unwrap();
            let oracle = walk_path(poly.vertices(), s, t).unwrap();
            prop_assert!((funnel.length - oracle.length).abs() <= 1e-9 * (1.0 + oracle.length));
            let diam = g.diameter();
            let vd = walk_diameter(poly.vertices());
            prop_assert!((diam - vd).abs() <= 1e-9 * (1.0 + vd));
        }

        #[test]
        fn tree_matches_per_corner_paths(n in 4usize..25, seed in any::<u64>()) {
            let poly = generate::random(n, seed);
            let g = Geodesic::new(&poly);
            let src = poly.vertex(0).midpoint(poly.vertex(1));
            let tree = g.tree(src).unwrap();
            let vg = VisibilityGraph::new(poly.vertices(), &[src]);
            let (d, _) = vg.dijkstra(poly.len());
            for c in 0..poly.len() {
                prop_assert!((tree.dist[c] - d[c]).abs() <= 1e-9 * (1.0 + d[c]));
            }
        }
    }
}
