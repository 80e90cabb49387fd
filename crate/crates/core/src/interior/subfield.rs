//! Splitting a field into subfields along shortest paths to its anchor, and
//! gluing subfields into pieces per fragment.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::kernel::overlay::{OverlayBuilder, Owner, UNBOUNDED};
use crate::kernel::polygon::{signed_area, simplify_walk};
use crate::kernel::triangulate::seg_dist;
use crate::kernel::visibility::VisibilityGraph;
use crate::kernel::{BBox, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeLabel {
    /// Part of a side of the field's cell.
    Cell,
    Fragment(usize),
    Other,
}

/// A field boundary with one label per edge (edge `k` runs from point `k`
/// to point `k + 1`) and a flag per point marking where cuts start.
#[derive(Clone, Debug)]
pub struct LabeledWalk {
    pub points: Vec<Point>,
    pub labels: Vec<EdgeLabel>,
    pub cut: Vec<bool>,
}

fn on_side(a: Point, b: Point, r: &BBox, tol: f64) -> bool {
    let same = |u: f64, v: f64, s: f64| libm::fabs(u - s) <= tol && libm::fabs(v - s) <= tol;
    same(a.x, b.x, r.min.x) || same(a.x, b.x, r.max.x) || same(a.y, b.y, r.min.y) || same(a.y, b.y, r.max.y)
}

/// Label the edges of a field walk, inserting fragment endpoints that fall
/// inside edges so every fragment change happens at a walk point.
pub fn label_walk(
    walk: &[Point],
    rect: &BBox,
    fragments: &[(usize, &[Point])],
    endpoints: &[Point],
    tol: f64,
) -> LabeledWalk {
    let m = walk.len();
    let mut points = Vec::with_capacity(m + endpoints.len());
    for k in 0..m {
        let a = walk[k];
        let b = walk[(k + 1) % m];
        points.push(a);
        if on_side(a, b, rect, tol) {
            continue;
        }
        let d = b - a;
        let l2 = d.norm_sq();
        if l2 == 0.0 {
            continue;
        }
        let mut inner: Vec<(f64, Point)> = endpoints
            .iter()
            .filter(|&&q| seg_dist(q, a, b) <= tol)
            .map(|&q| ((q - a).dot(d) / l2, q))
            .filter(|&(t, q)| t > 0.0 && t < 1.0 && q.dist(a) > tol && q.dist(b) > tol)
            .collect();
        inner.sort_by(|x, y| x.0.total_cmp(&y.0));
        inner.dedup_by(|x, y| x.1.dist(y.1) <= tol);
        points.extend(inner.into_iter().map(|x| x.1));
    }
    let n = points.len();
    let mut labels = Vec::with_capacity(n);
    for k in 0..n {
        let a = points[k];
        let b = points[(k + 1) % n];
        if on_side(a, b, rect, tol) {
            labels.push(EdgeLabel::Cell);
            continue;
        }
        let mid = a.midpoint(b);
        let mut best: Option<(f64, usize)> = None;
        for &(id, chain) in fragments {
            for w in chain.windows(2) {
                let dd = seg_dist(mid, w[0], w[1]);
                if dd <= tol && best.is_none_or(|(x, _)| dd < x) {
                    best = Some((dd, id));
                }
            }
        }
        labels.push(best.map_or(EdgeLabel::Other, |(_, id)| EdgeLabel::Fragment(id)));
    }
    let corners = [rect.min, Point::new(rect.max.x, rect.min.y), rect.max, Point::new(rect.min.x, rect.max.y)];
    let cut = points
        .iter()
        .map(|&p| corners.iter().chain(endpoints.iter()).any(|&c| c.dist(p) <= tol))
        .collect();
    LabeledWalk { points, labels, cut }
}

#[derive(Clone, Debug)]
pub struct SubfieldPart {
    pub walk: Vec<Point>,
    /// A cell side appears on the boundary.
    pub edge: bool,
    pub fragment: Option<usize>,
}

fn next_fragment(labels: &[EdgeLabel], from: usize) -> Option<usize> {
    let n = labels.len();
    (0..n).map(|s| labels[(from + s) % n]).find_map(|l| match l {
        EdgeLabel::Fragment(f) => Some(f),
        _ => None,
    })
}

/// Cut the field along shortest paths from every cut point to the anchor
/// (point 0) and return the pieces between consecutive cut points. `None`
/// if some cut point cannot reach the anchor.
pub fn split_field(lw: &LabeledWalk, min_area: f64) -> Option<Vec<SubfieldPart>> {
    let m = lw.points.len();
    let vg = VisibilityGraph::new(&lw.points, &[]);
    let (dist, prev) = vg.dijkstra(0);
    let mut cuts: Vec<usize> = (0..m).filter(|&k| k == 0 || lw.cut[k]).collect();
    cuts.dedup();
    if cuts.iter().any(|&k| !dist[k].is_finite()) {
        return None;
    }
    let path = |k: usize| {
        let mut p = vec![k];
        let mut c = k;
        while let Some(u) = prev[c] {
            p.push(u);
            c = u;
        }
        p
    };
    let mut out = Vec::new();
    let c = cuts.len();
    for s in 0..c {
        let ka = cuts[s];
        let kb = cuts[(s + 1) % c];
        let span = if c == 1 { m } else { (kb + m - ka) % m };
        let mut walk: Vec<Point> = (0..=span).map(|t| lw.points[(ka + t) % m]).collect();
        let pa = path(ka);
        let pb = path(kb);
        let in_a: BTreeSet<usize> = pa.iter().copied().collect();
        let jb = pb.iter().position(|u| in_a.contains(u)).unwrap_or(pb.len() - 1);
        let q = pb[jb];
        let ja = pa.iter().position(|&u| u == q).unwrap_or(pa.len() - 1);
        for &u in &pb[1..=jb] {
            walk.push(vg.nodes[u]);
        }
        for &u in pa[1..ja.max(1)].iter().rev() {
            walk.push(vg.nodes[u]);
        }
        let walk = simplify_walk(walk);
        if walk.len() < 3 || signed_area(&walk) <= min_area {
            continue;
        }
        let section: Vec<usize> = (0..span).map(|t| (ka + t) % m).collect();
        let last_cell = section.iter().rev().find(|&&e| lw.labels[e] == EdgeLabel::Cell);
        let (edge, fragment) = match last_cell {
            Some(&e) => (true, next_fragment(&lw.labels, e + 1)),
            None => {
                let own = section.iter().find_map(|&e| match lw.labels[e] {
                    EdgeLabel::Fragment(f) => Some(f),
                    _ => None,
                });
                (false, own.or_else(|| next_fragment(&lw.labels, (ka + span) % m)))
            }
        };
        out.push(SubfieldPart { walk, edge, fragment });
    }
    Some(out)
}

/// Union of subfields as one weakly simple walk, or `None` if they do not
/// form a single patch even with the fragment added.
pub fn glue(parts: &[&[Point]], fragment: &[Point]) -> Option<Vec<Point>> {
    if parts.len() == 1 {
        return Some(parts[0].to_vec());
    }
    for with_fragment in [false, true] {
        let mut b = OverlayBuilder::new();
        for (k, p) in parts.iter().enumerate() {
            b.add_loop(k as Owner, p);
        }
        let frag_owner = parts.len() as Owner;
        if with_fragment {
            b.add_polyline(frag_owner, fragment);
        }
        let Ok(sub) = b.build() else { continue };
        let region: Vec<bool> = (0..sub.face_count())
            .map(|f| f != UNBOUNDED && sub.faces[f].winding.iter().any(|&(o, w)| o != frag_owner && w > 0))
            .collect();
        let extra: Vec<usize> = if with_fragment {
            (0..sub.edges.len()).filter(|&e| sub.edge_has_owner(e, frag_owner)).collect()
        } else {
            Vec::new()
        };
        if let Ok(w) = sub.boundary_walk(&region, &extra) {
            return Some(simplify_walk(w));
        }
    }
    None
}
