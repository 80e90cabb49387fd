//! Exact area partition: pieces of prescribed areas cut from a Hamiltonian
//! walk through the median refinement of a triangulation.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::error::PartitionError;
use crate::kernel::polygon::{lex_min_index, simplify_walk};
use crate::kernel::triangulate::triangulate;
use crate::kernel::{Point, Polygon, WeaklySimplePolygon};
use crate::piece::{Piece, PieceClass};

/// Requested areas below this fraction of the polygon area are rejected.
pub const MIN_AREA_FRACTION: f64 = 1e-12;
/// Relative slack allowed between the requested total and the polygon area.
pub const AREA_SUM_TOL: f64 = 1e-9;

/// One triangle of the refined triangulation as seen by the Hamiltonian
/// walk: it is entered through edge `apex-entry` and left through
/// `apex-exit`; `entry-exit` is the free edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycleTriangle {
    pub apex: usize,
    pub entry: usize,
    pub exit: usize,
    /// Free edge on the polygon boundary (otherwise it lies on the wall).
    pub free_on_boundary: bool,
}

#[derive(Clone, Debug)]
pub struct SteinerTriangulation {
    /// Polygon vertices first, then the added midpoints and centroids.
    pub points: Vec<Point>,
    pub polygon_vertices: usize,
    /// Triangles in walk order; consecutive ones share an edge, cyclically.
    pub cycle: Vec<CycleTriangle>,
    /// Edges between points not on the polygon boundary.
    pub wall: Vec<(usize, usize)>,
    pub on_boundary: Vec<bool>,
}

impl SteinerTriangulation {
    pub fn steiner_count(&self) -> usize {
        self.points.len() - self.polygon_vertices
    }

    pub fn corners(&self, t: &CycleTriangle) -> [Point; 3] {
        [self.points[t.apex], self.points[t.entry], self.points[t.exit]]
    }

    pub fn triangle_area(&self, t: &CycleTriangle) -> f64 {
        tri_area(self.points[t.apex], self.points[t.entry], self.points[t.exit])
    }
}

fn tri_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * libm::fabs((b - a).cross(c - a))
}

pub fn steiner_triangulate(poly: &Polygon) -> SteinerTriangulation {
    let n = poly.len();
    let tri = triangulate(poly);
    let mut points: Vec<Point> = poly.vertices().to_vec();
    let mut on_boundary = vec![true; n];
    let mut mids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut mid = |a: usize, b: usize, points: &mut Vec<Point>, on_boundary: &mut Vec<bool>| {
        let key = (a.min(b), a.max(b));
        *mids.entry(key).or_insert_with(|| {
            points.push(points[a].midpoint(points[b]));
            let boundary = (key.1 - key.0 == 1) || (key.0 == 0 && key.1 == n - 1);
            on_boundary.push(boundary);
            points.len() - 1
        })
    };
    // midpoints of polygon edges first so their ids follow the boundary
    for i in 0..n {
        mid(i, (i + 1) % n, &mut points, &mut on_boundary);
    }
    let mut centroid = Vec::with_capacity(tri.triangles.len());
    for t in 0..tri.triangles.len() {
        let [a, b, c] = tri.corners(t);
        points.push(Point::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0));
        on_boundary.push(false);
        centroid.push(points.len() - 1);
    }
    let mut wall = Vec::new();
    for (t, nb) in tri.neighbors.iter().enumerate() {
        let ids = tri.triangles[t];
        for k in 0..3 {
            if nb[k].is_some() {
                let m = mid(ids[k], ids[(k + 1) % 3], &mut points, &mut on_boundary);
                wall.push((centroid[t], m));
            }
        }
    }

    // triangle holding the directed polygon edge (i-1) -> i, with i's slot
    let mut first_at = vec![(usize::MAX, 0); n];
    for (t, ids) in tri.triangles.iter().enumerate() {
        for k in 0..3 {
            let (u, v) = (ids[k], ids[(k + 1) % 3]);
            if (u + 1) % n == v {
                first_at[v] = (t, (k + 1) % 3);
            }
        }
    }

    let mut cycle = Vec::with_capacity(6 * n);
    let start = lex_min_index(poly.vertices());
    for step in 0..n {
        let v = (start + step) % n;
        let (mut t, mut j) = first_at[v];
        let mut guard = 0;
        loop {
            let ids = tri.triangles[t];
            let g = centroid[t];
            let q = ids[(j + 1) % 3];
            let p = ids[(j + 2) % 3];
            let first = p == (v + n - 1) % n;
            let m_p = mids[&(v.min(p), v.max(p))];
            let m_q = mids[&(v.min(q), v.max(q))];
            let last = tri.neighbors[t][j].is_none();
            cycle.push(if first {
                CycleTriangle { apex: g, entry: m_p, exit: v, free_on_boundary: true }
            } else {
                CycleTriangle { apex: v, entry: m_p, exit: g, free_on_boundary: false }
            });
            cycle.push(if last {
                CycleTriangle { apex: g, entry: v, exit: m_q, free_on_boundary: true }
            } else {
                CycleTriangle { apex: v, entry: g, exit: m_q, free_on_boundary: false }
            });
            if last {
                break;
            }
            let nt = tri.neighbors[t][j].unwrap();
            let nj = (0..3).find(|&k| tri.triangles[nt][k] == v).expect("neighbour shares the vertex");
            t = nt;
            j = nj;
            guard += 1;
            debug_assert!(guard <= n, "fan walk did not terminate");
        }
    }
    SteinerTriangulation { points, polygon_vertices: n, cycle, wall, on_boundary }
}

/// Cut the triangle `apex, entry, exit` by a segment from `apex` to the
/// point `q` on `entry-exit` such that triangle `apex, entry, q` has area
/// `target`.
pub fn cut_triangle(tri: [Point; 3], target: f64) -> Result<(Point, [Point; 3], [Point; 3]), PartitionError> {
    let [apex, entry, exit] = tri;
    let area = tri_area(apex, entry, exit);
    if !(target >= 0.0 && target <= area) {
        return Err(PartitionError::BadAreas("cut target outside the triangle area"));
    }
    let q = if target == area {
        exit
    } else if area == 0.0 || target == 0.0 {
        entry
    } else {
        entry.lerp(exit, target / area)
    };
    Ok((q, [apex, entry, q], [apex, q, exit]))
}

/// Check and reconcile a requested area list against the polygon area.
pub fn reconcile_areas(poly_area: f64, areas: &[f64]) -> Result<Vec<f64>, PartitionError> {
    if areas.is_empty() {
        return Err(PartitionError::BadAreas("no areas given"));
    }
    for &a in areas {
        if !a.is_finite() || a <= 0.0 {
            return Err(PartitionError::BadAreas("areas must be positive and finite"));
        }
        if a < MIN_AREA_FRACTION * poly_area {
            return Err(PartitionError::BadAreas("area too small relative to the polygon"));
        }
    }
    let sum: f64 = areas.iter().sum();
    if libm::fabs(sum - poly_area) > AREA_SUM_TOL * poly_area {
        return Err(PartitionError::AreaMismatch { got: sum, expected: poly_area });
    }
    let mut out = areas.to_vec();
    let k = out.len();
    let head: f64 = out[..k - 1].iter().sum();
    out[k - 1] = poly_area - head;
    if out[k - 1] <= 0.0 {
        return Err(PartitionError::BadAreas("last area vanishes after reconciliation"));
    }
    Ok(out)
}

/// Partition `poly` into pieces with the given areas, in walk order.
pub fn area_partition(poly: &Polygon, areas: &[f64]) -> Result<Vec<Piece>, PartitionError> {
    let areas = reconcile_areas(poly.area(), areas)?;
    let mut st = steiner_triangulate(poly);
    let k = areas.len();
    let m = st.cycle.len();
    let mut next = 0;
    let mut partial: Option<CycleTriangle> = None;
    let mut pieces = Vec::with_capacity(k);
    for (i, &target) in areas.iter().enumerate() {
        let mut tris: Vec<[usize; 3]> = Vec::new();
        if i + 1 == k {
            tris.extend(partial.take().map(|t| [t.apex, t.entry, t.exit]));
            tris.extend(st.cycle[next..].iter().map(|t| [t.apex, t.entry, t.exit]));
            next = m;
        } else {
            let mut acc = 0.0;
            loop {
                let t = match partial.take() {
                    Some(t) => t,
                    None if next < m => {
                        next += 1;
                        st.cycle[next - 1]
                    }
                    None => break,
                };
                let ta = st.triangle_area(&t);
                if acc + ta < target {
                    tris.push([t.apex, t.entry, t.exit]);
                    acc += ta;
                    continue;
                }
                let need = (target - acc).clamp(0.0, ta);
                if need >= ta {
                    tris.push([t.apex, t.entry, t.exit]);
                } else if need <= 0.0 {
                    partial = Some(t);
                } else {
                    let (q, _, _) = cut_triangle(st.corners(&t), need)?;
                    st.points.push(q);
                    st.on_boundary.push(t.free_on_boundary);
                    let qi = st.points.len() - 1;
                    tris.push([t.apex, t.entry, qi]);
                    partial = Some(CycleTriangle { entry: qi, ..t });
                }
                break;
            }
        }
        if tris.is_empty() {
            return Err(PartitionError::Construction("area walk ran out of triangles"));
        }
        let walk = union_boundary(&st.points, &tris)?;
        pieces.push(Piece::new(PieceClass::Area, WeaklySimplePolygon::new(walk)));
    }
    Ok(pieces)
}

/// Boundary walk of a union of triangles that forms a weakly simple region.
pub(crate) fn union_boundary(points: &[Point], tris: &[[usize; 3]]) -> Result<Vec<Point>, PartitionError> {
    let mut count: HashMap<(usize, usize), i32> = HashMap::new();
    for &[a, b, c] in tris {
        let s = (points[b] - points[a]).cross(points[c] - points[a]);
        let loop_ = if s < 0.0 { [a, c, b] } else { [a, b, c] };
        for k in 0..3 {
            let (u, v) = (loop_[k], loop_[(k + 1) % 3]);
            if let Some(c) = count.get_mut(&(v, u)) {
                *c -= 1;
                if *c == 0 {
                    count.remove(&(v, u));
                }
            } else {
                *count.entry((u, v)).or_insert(0) += 1;
            }
        }
    }
    let mut outgoing: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut remaining = 0;
    for (&(u, v), &c) in &count {
        for _ in 0..c {
            outgoing.entry(u).or_default().push(v);
            remaining += 1;
        }
    }
    if remaining == 0 {
        return Err(PartitionError::Construction("piece has no boundary"));
    }
    let start = *outgoing.keys().min_by(|&&a, &&b| points[a].lex_cmp(&points[b]).then(a.cmp(&b))).unwrap();
    let mut walk_ids = vec![start];
    let mut prev: Option<usize> = None;
    let mut cur = start;
    while remaining > 0 {
        let outs = outgoing.get_mut(&cur).ok_or(PartitionError::Construction("open piece boundary"))?;
        if outs.is_empty() {
            return Err(PartitionError::Construction("open piece boundary"));
        }
        let pick = match prev {
            Some(p) if outs.len() > 1 => first_clockwise(points, points[p], points[cur], outs),
            _ => 0,
        };
        let nxt = outs.swap_remove(pick);
        remaining -= 1;
        prev = Some(cur);
        cur = nxt;
        if cur == start && remaining > 0 && outgoing.get(&start).is_none_or(|o| o.is_empty()) {
            return Err(PartitionError::Construction("piece is not connected"));
        }
        walk_ids.push(cur);
    }
    if cur != start {
        return Err(PartitionError::Construction("open piece boundary"));
    }
    walk_ids.pop();
    let walk: Vec<Point> = walk_ids.iter().map(|&i| points[i]).collect();
    Ok(simplify_walk(walk))
}

/// Among outgoing neighbours of `at`, the first one clockwise from the
/// direction back to `from`.
fn first_clockwise(points: &[Point], from: Point, at: Point, outs: &[usize]) -> usize {
    let back = from - at;
    let base = libm::atan2(back.y, back.x);
    let mut best = (f64::INFINITY, 0);
    for (k, &o) in outs.iter().enumerate() {
        let d = points[o] - at;
        let mut cw = base - libm::atan2(d.y, d.x);
        while cw <= 0.0 {
            cw += 2.0 * core::f64::consts::PI;
        }
        if cw < best.0 {
            best = (cw, k);
        }
    }
    best.1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::kernel::polygon::signed_area;
    use proptest::prelude::*;
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tri(c: &[(f64, f64)]) -> Polygon {
        Polygon::new(c.iter().map(|&p| p.into()).collect()).unwrap()
    }

    fn random_areas(total: f64, k: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w: Vec<f64> = (0..k).map(|_| 0.05 + (rng.next_u32() as f64 / u32::MAX as f64)).collect();
        let s: f64 = w.iter().sum();
        w.iter().map(|x| x / s * total).collect()
    }

    #[test]
    fn triangle_counts() {
        let t = steiner_triangulate(&tri(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]));
        assert_eq!(t.cycle.len(), 6);
        assert_eq!(t.steiner_count(), 4);
        let q = steiner_triangulate(&generate::rect(2.0, 1.0));
        assert_eq!(q.cycle.len(), 12);
        assert_eq!(q.steiner_count(), 7);
    }

    #[test]
    fn sixths_have_equal_area() {
        let t = steiner_triangulate(&tri(&[(0.0, 0.0), (3.0, 0.0), (1.0, 2.0)]));
        for c in &t.cycle {
            assert!((t.triangle_area(c) - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn cut_examples() {
        let t = [Point::new(0.0, 1.0), Point::new(0.0, 0.0), Point::new(1.0, 0.0)];
        let (q, near, far) = cut_triangle(t, 0.25).unwrap();
        assert_eq!(q, Point::new(0.5, 0.0));
        assert_eq!(tri_area(near[0], near[1], near[2]), 0.25);
        assert_eq!(tri_area(far[0], far[1], far[2]), 0.25);
        assert_eq!(cut_triangle(t, 0.0).unwrap().0, t[1]);
        assert_eq!(cut_triangle(t, 0.5).unwrap().0, t[2]);
        assert!(cut_triangle(t, 0.6).is_err());
    }

    #[test]
    fn square_halves_and_identity() {
        let sq = generate::rect(1.0, 1.0);
        let p = area_partition(&sq, &[0.5, 0.5]).unwrap();
        assert_eq!(p.len(), 2);
        for piece in &p {
            assert!((piece.area() - 0.5).abs() < 1e-12);
        }
        let r = generate::rect(2.0, 1.0);
        let one = area_partition(&r, &[2.0]).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].shape.walk, r.vertices().to_vec());
    }

    #[test]
    fn area_list_errors() {
        let sq = generate::rect(1.0, 1.0);
        assert!(matches!(area_partition(&sq, &[0.5, 0.4]), Err(PartitionError::AreaMismatch { .. })));
        assert!(area_partition(&sq, &[1.0, 0.0]).is_err());
        assert!(area_partition(&sq, &[]).is_err());
        // a residual inside the tolerance is absorbed by the last area
        let p = area_partition(&sq, &[0.5, 0.5 + 1e-12]).unwrap();
        assert!((p[1].area() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn exact_hit_at_triangle_boundary() {
        // every refined triangle of this square has area 1/12
        let sq = generate::rect(1.0, 1.0);
        let p = area_partition(&sq, &[2.0 / 12.0, 10.0 / 12.0]).unwrap();
        assert!((p[0].area() - 2.0 / 12.0).abs() < 1e-15);
        assert_eq!(p[0].shape.len(), 4);
    }

    #[test]
    fn random_fifty_gon() {
        let poly = generate::random(50, 11);
        let areas = random_areas(poly.area(), 7, 3);
        let pieces = area_partition(&poly, &areas).unwrap();
        assert_eq!(pieces.len(), 7);
        for (p, a) in pieces.iter().zip(&areas) {
            let shoelace = signed_area(&p.shape.walk);
            assert!((shoelace - a).abs() <= 1e-9 * a.max(1.0), "{shoelace} vs {a}");
        }
    }

    fn wall_is_tree(t: &SteinerTriangulation) -> bool {
        let wall_vertices: Vec<usize> = (0..t.points.len()).filter(|&i| !t.on_boundary[i]).collect();
        if t.wall.len() + 1 != wall_vertices.len() {
            return false;
        }
        let mut parent: HashMap<usize, usize> = wall_vertices.iter().map(|&v| (v, v)).collect();
        fn find(p: &mut HashMap<usize, usize>, x: usize) -> usize {
            let mut r = x;
            while p[&r] != r {
                r = p[&r];
            }
            p.insert(x, r);
            r
        }
        for &(a, b) in &t.wall {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent.insert(ra, rb);
        }
        true
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]

        #[test]
        fn refinement_invariants(n in 3usize..60, seed in any::<u64>()) {
            let poly = generate::random(n, seed);
            let t = steiner_triangulate(&poly);
            prop_assert_eq!(t.cycle.len(), 6 * n - 12);
            prop_assert_eq!(t.steiner_count(), 3 * n - 5);
            prop_assert!(wall_is_tree(&t));
            let total: f64 = t.cycle.iter().map(|c| t.triangle_area(c)).sum();
            prop_assert!((total - poly.area()).abs() <= 1e-9 * poly.area());
            for i in 0..t.cycle.len() {
                let a = t.cycle[i];
                let b = t.cycle[(i + 1) % t.cycle.len()];
                // exit edge of one is the entry edge of the next
                let ea = [a.apex.min(a.exit), a.apex.max(a.exit)];
                let eb = [b.apex.min(b.entry), b.apex.max(b.entry)];
                prop_assert_eq!(ea, eb);
                let free = [a.entry, a.exit];
                let on = t.on_boundary[free[0]] && t.on_boundary[free[1]];
                prop_assert_eq!(on, a.free_on_boundary);
            }
        }

        #[test]
        fn pieces_have_requested_areas(n in 4usize..80, k in 1usize..20, seed in any::<u64>()) {
            let poly = generate::random(n, seed);
            let areas = random_areas(poly.area(), k, seed ^ 0xA5);
            let pieces = area_partition(&poly, &areas).unwrap();
            prop_assert_eq!(pieces.len(), k);
            for (p, a) in pieces.iter().zip(&areas) {
                prop_assert!((p.area() - a).abs() <= 1e-9 * a.max(1.0));
            }
        }
    }
}
