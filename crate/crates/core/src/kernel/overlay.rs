//! Planar overlay of polylines and closed loops as a half-edge structure.
//!
//! Input vertices within a small tolerance are merged, segments are split at
//! nearby vertices and at proper crossings, duplicate edges are merged with
//! their owners recorded, and every face gets the winding number of each
//! closed loop owner around it.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use hashbrown::{HashMap, HashSet};

use super::point::{BBox, Point};
use super::polygon::{lex_min_index, locate, signed_area, Containment};
use super::predicates::{angle_cmp, line_intersection, orient, segment_contact, SegmentContact};

pub type Owner = u32;

const MAX_SPLIT_PASSES: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OverlayError {
    /// Crossings kept reappearing after repeated splitting.
    Unstable,
    /// The region handed to [`PlanarSubdivision::boundary_walk`] is not a
    /// single disk-like patch.
    NotSimplyConnected,
    /// Windings disagree across faces; the arrangement is inconsistent.
    Inconsistent,
}

#[derive(Clone, Copy, Debug)]
struct InputSeg {
    a: Point,
    b: Point,
    owner: Owner,
    closed: bool,
}

/// Collects input chains before building the subdivision.
#[derive(Clone, Debug, Default)]
pub struct OverlayBuilder {
    segs: Vec<InputSeg>,
}

impl OverlayBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// A closed loop. Counterclockwise loops contribute winding +1 inside.
    pub fn add_loop(&mut self, owner: Owner, pts: &[Point]) {
        let n = pts.len();
        if n < 2 {
            return;
        }
        for i in 0..n {
            self.push(pts[i], pts[(i + 1) % n], owner, true);
        }
    }

    /// An open chain; it splits faces but carries no winding.
    pub fn add_polyline(&mut self, owner: Owner, pts: &[Point]) {
        for w in pts.windows(2) {
            self.push(w[0], w[1], owner, false);
        }
    }

    pub fn add_segment(&mut self, owner: Owner, a: Point, b: Point) {
        self.push(a, b, owner, false);
    }

    fn push(&mut self, a: Point, b: Point, owner: Owner, closed: bool) {
        if a != b {
            self.segs.push(InputSeg { a, b, owner, closed });
        }
    }

    pub fn build(self) -> Result<PlanarSubdivision, OverlayError> {
        build(self.segs)
    }
}

#[derive(Clone, Debug)]
pub struct EdgeOwner {
    pub owner: Owner,
    /// Net traversals from the lower to the higher vertex id, closed loops only.
    pub net: i32,
    pub count: u32,
}

#[derive(Clone, Debug)]
pub struct Edge {
    /// Vertex ids with `v[0] < v[1]`; half-edge `2e` runs `v[0] -> v[1]`.
    pub v: [usize; 2],
    pub owners: Vec<EdgeOwner>,
}

#[derive(Clone, Debug)]
pub struct Face {
    /// Cycle bounding the face from outside; `None` for the unbounded face.
    pub outer: Option<usize>,
    pub holes: Vec<usize>,
    pub area: f64,
    /// Nonzero windings, sorted by owner.
    pub winding: Vec<(Owner, i32)>,
}

#[derive(Clone, Debug)]
pub struct Cycle {
    pub half_edges: Vec<usize>,
    pub area: f64,
}

#[derive(Clone, Debug)]
pub struct PlanarSubdivision {
    pub vertices: Vec<Point>,
    pub edges: Vec<Edge>,
    /// Outgoing half-edges per vertex in counterclockwise order.
    pub out: Vec<Vec<usize>>,
    pos: Vec<usize>,
    pub next: Vec<usize>,
    pub face_of: Vec<usize>,
    pub cycles: Vec<Cycle>,
    pub faces: Vec<Face>,
    pub components: usize,
    pub tol: f64,
}

pub const UNBOUNDED: usize = 0;

/// Spatial hash over square cells.
struct Buckets {
    h: f64,
    map: HashMap<(i64, i64), Vec<usize>>,
}

impl Buckets {
    fn new(h: f64) -> Self {
        Buckets { h, map: HashMap::new() }
    }

    fn key(&self, p: Point) -> (i64, i64) {
        (libm::floor(p.x / self.h) as i64, libm::floor(p.y / self.h) as i64)
    }

    fn insert_box(&mut self, b: &BBox, id: usize) {
        let (x0, y0) = self.key(b.min);
        let (x1, y1) = self.key(b.max);
        for x in x0..=x1 {
            for y in y0..=y1 {
                self.map.entry((x, y)).or_default().push(id);
            }
        }
    }
}

/// Merges points closer than `tol`.
struct VertexPool {
    pts: Vec<Point>,
    buckets: Buckets,
    tol: f64,
}

impl VertexPool {
    fn insert(&mut self, p: Point) -> usize {
        let (kx, ky) = self.buckets.key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.buckets.map.get(&(kx + dx, ky + dy)) {
                    for &i in ids {
                        if self.pts[i].dist(p) <= self.tol {
                            return i;
                        }
                    }
                }
            }
        }
        let id = self.pts.len();
        self.pts.push(p);
        self.buckets.map.entry((kx, ky)).or_default().push(id);
        id
    }
}

fn param(a: Point, b: Point, p: Point) -> f64 {
    let d = b - a;
    (p - a).dot(d) / d.norm_sq()
}

fn build(segs: Vec<InputSeg>) -> Result<PlanarSubdivision, OverlayError> {
    let mut bbox = BBox::empty();
    for s in &segs {
        bbox.include(s.a);
        bbox.include(s.b);
    }
    let diag = if segs.is_empty() { 1.0 } else { bbox.diagonal().max(f64::MIN_POSITIVE) };
    let tol = 1e-12 * diag;
    let mut pool = VertexPool { pts: Vec::new(), buckets: Buckets::new(tol.max(1e-300) * 4.0), tol };
    let mut chains: Vec<Vec<usize>> = segs.iter().map(|s| vec![pool.insert(s.a), pool.insert(s.b)]).collect();

    let mut stable = false;
    for _ in 0..MAX_SPLIT_PASSES {
        let inserted = split_pass(&segs, &mut chains, &mut pool, diag);
        if !inserted {
            stable = true;
            break;
        }
    }
    if !stable {
        return Err(OverlayError::Unstable);
    }

    // deduplicate edges
    let mut edge_ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut edges: Vec<Edge> = Vec::new();
    for (s, chain) in segs.iter().zip(&chains) {
        for w in chain.windows(2) {
            let (u, v) = (w[0], w[1]);
            if u == v {
                continue;
            }
            let key = (u.min(v), u.max(v));
            let e = *edge_ids.entry(key).or_insert_with(|| {
                edges.push(Edge { v: [key.0, key.1], owners: Vec::new() });
                edges.len() - 1
            });
            let dir = if s.closed { if u < v { 1 } else { -1 } } else { 0 };
            match edges[e].owners.iter_mut().find(|o| o.owner == s.owner) {
                Some(o) => {
                    o.net += dir;
                    o.count += 1;
                }
                None => edges[e].owners.push(EdgeOwner { owner: s.owner, net: dir, count: 1 }),
            }
        }
    }
    for e in &mut edges {
        e.owners.sort_by_key(|o| o.owner);
    }
    assemble(pool.pts, edges, tol)
}

/// One round of splitting at nearby vertices and proper crossings; returns
/// whether anything changed.
fn split_pass(segs: &[InputSeg], chains: &mut [Vec<usize>], pool: &mut VertexPool, diag: f64) -> bool {
    let mut subs: Vec<(usize, usize, usize)> = Vec::new(); // (seg, u, v)
    let mut total = 0.0;
    for (s, chain) in chains.iter().enumerate() {
        for w in chain.windows(2) {
            if w[0] != w[1] {
                subs.push((s, w[0], w[1]));
                total += pool.pts[w[0]].dist(pool.pts[w[1]]);
            }
        }
    }
    if subs.is_empty() {
        return false;
    }
    let h = (total / subs.len() as f64).max(diag * 1e-4);
    let mut grid = Buckets::new(h);
    for (i, &(_, u, v)) in subs.iter().enumerate() {
        let mut b = BBox::of(&[pool.pts[u], pool.pts[v]]);
        b.min = b.min - Point::new(pool.tol, pool.tol);
        b.max = b.max + Point::new(pool.tol, pool.tol);
        grid.insert_box(&b, i);
    }
    let mut inserts: Vec<Vec<usize>> = vec![Vec::new(); segs.len()];
    let tol = pool.tol;

    // proper crossings
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let mut cells: Vec<&Vec<usize>> = grid.map.values().collect();
    cells.sort_by_key(|c| c.first().copied());
    let mut crossings: Vec<(usize, usize, Point)> = Vec::new();
    for ids in cells {
        for (k, &i) in ids.iter().enumerate() {
            for &j in &ids[k + 1..] {
                let (si, ui, vi) = subs[i];
                let (sj, uj, vj) = subs[j];
                if ui == uj || ui == vj || vi == uj || vi == vj {
                    continue;
                }
                if !seen.insert((i.min(j), i.max(j))) {
                    continue;
                }
                let (a, b, c, d) = (pool.pts[ui], pool.pts[vi], pool.pts[uj], pool.pts[vj]);
                // near-collinear overlaps are left to the vertex snapping below
                let sd = super::triangulate::seg_dist;
                let touching = sd(c, a, b) <= tol || sd(d, a, b) <= tol || sd(a, c, d) <= tol || sd(b, c, d) <= tol;
                if !touching && segment_contact(a, b, c, d) == SegmentContact::Proper {
                    let p = match line_intersection(a, b, c, d) {
                        Some((p, _, _)) => p,
                        None => a.midpoint(b),
                    };
                    crossings.push((si, sj, p));
                }
            }
        }
    }
    for (si, sj, p) in crossings {
        let v = pool.insert(p);
        inserts[si].push(v);
        inserts[sj].push(v);
    }

    // vertices lying on (or within tolerance of) a subsegment interior
    for v in 0..pool.pts.len() {
        let p = pool.pts[v];
        let key = grid.key(p);
        if let Some(ids) = grid.map.get(&key) {
            for &i in ids {
                let (s, u, w) = subs[i];
                if v == u || v == w {
                    continue;
                }
                let (a, b) = (pool.pts[u], pool.pts[w]);
                let t = param(a, b, p);
                if t <= 0.0 || t >= 1.0 {
                    continue;
                }
                let on = orient(a, b, p) == 0 || super::triangulate::seg_dist(p, a, b) <= tol;
                if on {
                    inserts[s].push(v);
                }
            }
        }
    }

    let mut changed = false;
    for (s, extra) in inserts.into_iter().enumerate() {
        if extra.is_empty() {
            continue;
        }
        let (a, b) = (segs[s].a, segs[s].b);
        let chain = &mut chains[s];
        let before = chain.len();
        let first = chain[0];
        let last = chain[chain.len() - 1];
        let mut mids: Vec<usize> = chain[1..chain.len() - 1].to_vec();
        for v in extra {
            if v != first && v != last && !mids.contains(&v) {
                mids.push(v);
            }
        }
        mids.sort_by(|&x, &y| {
            param(a, b, pool.pts[x]).partial_cmp(&param(a, b, pool.pts[y])).unwrap_or(Ordering::Equal)
        });
        let mut rebuilt = Vec::with_capacity(mids.len() + 2);
        rebuilt.push(first);
        rebuilt.extend(mids);
        rebuilt.push(last);
        if rebuilt.len() != before {
            changed = true;
        }
        *chain = rebuilt;
    }
    changed
}

fn assemble(vertices: Vec<Point>, edges: Vec<Edge>, tol: f64) -> Result<PlanarSubdivision, OverlayError> {
    let nv = vertices.len();
    let nh = edges.len() * 2;
    let origin = |h: usize| if h.is_multiple_of(2) { edges[h / 2].v[0] } else { edges[h / 2].v[1] };
    let dest = |h: usize| origin(h ^ 1);
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for h in 0..nh {
        out[origin(h)].push(h);
    }
    for (v, list) in out.iter_mut().enumerate() {
        let o = vertices[v];
        list.sort_by(|&a, &b| angle_cmp(vertices[dest(a)] - o, vertices[dest(b)] - o));
    }
    let mut pos = vec![0; nh];
    for list in &out {
        for (k, &h) in list.iter().enumerate() {
            pos[h] = k;
        }
    }
    let mut next = vec![0; nh];
    for h in 0..nh {
        let t = h ^ 1;
        let list = &out[origin(t)];
        next[h] = list[(pos[t] + list.len() - 1) % list.len()];
    }

    // cycles
    let mut cycle_of = vec![usize::MAX; nh];
    let mut cycles: Vec<Cycle> = Vec::new();
    for h0 in 0..nh {
        if cycle_of[h0] != usize::MAX {
            continue;
        }
        let id = cycles.len();
        let mut hs = Vec::new();
        let mut h = h0;
        loop {
            cycle_of[h] = id;
            hs.push(h);
            h = next[h];
            if h == h0 {
                break;
            }
        }
        let pts: Vec<Point> = hs.iter().map(|&h| vertices[origin(h)]).collect();
        cycles.push(Cycle { half_edges: hs, area: signed_area(&pts) });
    }

    // connected components
    let mut comp = vec![usize::MAX; nv];
    let mut ncomp = 0;
    for s in 0..nv {
        if comp[s] != usize::MAX || out[s].is_empty() {
            continue;
        }
        let mut queue = VecDeque::from([s]);
        comp[s] = ncomp;
        while let Some(u) = queue.pop_front() {
            for &h in &out[u] {
                let w = dest(h);
                if comp[w] == usize::MAX {
                    comp[w] = ncomp;
                    queue.push_back(w);
                }
            }
        }
        ncomp += 1;
    }
    let mut lowest: Vec<Option<usize>> = vec![None; ncomp];
    for v in 0..nv {
        if comp[v] == usize::MAX {
            continue;
        }
        let c = comp[v];
        if lowest[c].is_none_or(|u| vertices[v].lex_cmp(&vertices[u]) == Ordering::Less) {
            lowest[c] = Some(v);
        }
    }
    let mut outer_cycle = vec![false; cycles.len()];
    let mut comp_outer = vec![0; ncomp];
    for c in 0..ncomp {
        let v = lowest[c].expect("component has a vertex");
        let h = top_edge(&vertices, &out[v], v, &dest);
        let cy = cycle_of[h];
        outer_cycle[cy] = true;
        comp_outer[c] = cy;
    }

    // faces: the unbounded face, then one per inner cycle
    let mut faces = vec![Face { outer: None, holes: Vec::new(), area: 0.0, winding: Vec::new() }];
    let mut face_of_cycle = vec![UNBOUNDED; cycles.len()];
    for (cy, is_outer) in outer_cycle.iter().enumerate() {
        if !is_outer {
            face_of_cycle[cy] = faces.len();
            faces.push(Face { outer: Some(cy), holes: Vec::new(), area: cycles[cy].area, winding: Vec::new() });
        }
    }
    let cycle_comp = |cy: usize| comp[origin(cycles[cy].half_edges[0])];
    let cycle_pts = |cy: usize| -> Vec<Point> { cycles[cy].half_edges.iter().map(|&h| vertices[origin(h)]).collect() };
    let cycle_boxes: Vec<BBox> = (0..cycles.len()).map(|cy| BBox::of(&cycle_pts(cy))).collect();
    for c in 0..ncomp {
        let p = vertices[lowest[c].unwrap()];
        let mut best: Option<(f64, usize)> = None;
        for (cy, is_outer) in outer_cycle.iter().enumerate() {
            if *is_outer || cycle_comp(cy) == c || !cycle_boxes[cy].contains(p, 0.0) {
                continue;
            }
            let a = cycles[cy].area;
            if best.is_some_and(|(ba, _)| ba <= a) {
                continue;
            }
            if locate(&cycle_pts(cy), p) == Containment::Inside {
                best = Some((a, cy));
            }
        }
        let f = best.map_or(UNBOUNDED, |(_, cy)| face_of_cycle[cy]);
        face_of_cycle[comp_outer[c]] = f;
        faces[f].holes.push(comp_outer[c]);
        faces[f].area += cycles[comp_outer[c]].area;
    }
    let face_of: Vec<usize> = (0..nh).map(|h| face_of_cycle[cycle_of[h]]).collect();

    let mut sub = PlanarSubdivision {
        vertices,
        edges,
        out,
        pos,
        next,
        face_of,
        cycles,
        faces,
        components: ncomp,
        tol,
    };
    sub.compute_windings()?;
    Ok(sub)
}

/// Outgoing half-edge at the lowest vertex `v` with the largest angle; its
/// left side is the outside of the component.
fn top_edge(vertices: &[Point], out: &[usize], v: usize, dest: &dyn Fn(usize) -> usize) -> usize {
    let o = vertices[v];
    let mut best = out[0];
    for &h in &out[1..] {
        let s = orient(o, vertices[dest(best)], vertices[dest(h)]);
        if s > 0 || (s == 0 && vertices[dest(h)].dist_sq(o) < vertices[dest(best)].dist_sq(o)) {
            best = h;
        }
    }
    best
}

fn add_winding(w: &mut Vec<(Owner, i32)>, owner: Owner, delta: i32) {
    if delta == 0 {
        return;
    }
    match w.binary_search_by_key(&owner, |x| x.0) {
        Ok(i) => {
            w[i].1 += delta;
            if w[i].1 == 0 {
                w.remove(i);
            }
        }
        Err(i) => w.insert(i, (owner, delta)),
    }
}

impl PlanarSubdivision {
    pub fn origin(&self, h: usize) -> usize {
        let e = &self.edges[h / 2];
        e.v[h % 2]
    }

    pub fn dest(&self, h: usize) -> usize {
        self.origin(h ^ 1)
    }

    pub fn twin(h: usize) -> usize {
        h ^ 1
    }

    pub fn half_edge_count(&self) -> usize {
        self.edges.len() * 2
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn winding(&self, f: usize, owner: Owner) -> i32 {
        let w = &self.faces[f].winding;
        match w.binary_search_by_key(&owner, |x| x.0) {
            Ok(i) => w[i].1,
            Err(_) => 0,
        }
    }

    pub fn cycle_points(&self, cy: usize) -> Vec<Point> {
        self.cycles[cy].half_edges.iter().map(|&h| self.vertices[self.origin(h)]).collect()
    }

    /// Bounded faces adjacent across each edge, as `(left face of 2e, right face)`.
    pub fn edge_faces(&self, e: usize) -> (usize, usize) {
        (self.face_of[2 * e], self.face_of[2 * e + 1])
    }

    pub fn edge_has_owner(&self, e: usize, owner: Owner) -> bool {
        self.edges[e].owners.iter().any(|o| o.owner == owner)
    }

    fn compute_windings(&mut self) -> Result<(), OverlayError> {
        let nf = self.faces.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nf];
        for h in 0..self.half_edge_count() {
            adj[self.face_of[h]].push(h);
        }
        let mut done = vec![false; nf];
        done[UNBOUNDED] = true;
        let mut queue = VecDeque::from([UNBOUNDED]);
        while let Some(f) = queue.pop_front() {
            for &h in &adj[f] {
                let g = self.face_of[h ^ 1];
                let mut w = self.faces[f].winding.clone();
                let sign = if h % 2 == 0 { -1 } else { 1 };
                for o in &self.edges[h / 2].owners {
                    add_winding(&mut w, o.owner, sign * o.net);
                }
                if done[g] {
                    if self.faces[g].winding != w {
                        return Err(OverlayError::Inconsistent);
                    }
                    continue;
                }
                done[g] = true;
                self.faces[g].winding = w;
                queue.push_back(g);
            }
        }
        Ok(())
    }

    /// Counterclockwise boundary walk of the union of `region` faces plus
    /// `extra` edges hanging off it.
    pub fn boundary_walk(&self, region: &[bool], extra: &[usize]) -> Result<Vec<Point>, OverlayError> {
        let ne = self.edges.len();
        let mut in_h = vec![false; ne];
        let mut count = 0;
        for e in 0..ne {
            let (a, b) = self.edge_faces(e);
            if region[a] != region[b] {
                in_h[e] = true;
                count += 1;
            }
        }
        for &e in extra {
            if !in_h[e] {
                in_h[e] = true;
                count += 1;
            }
        }
        if count == 0 {
            return Err(OverlayError::NotSimplyConnected);
        }
        let mut start_v: Option<usize> = None;
        for e in 0..ne {
            if in_h[e] {
                for v in self.edges[e].v {
                    if start_v.is_none_or(|u| self.vertices[v].lex_cmp(&self.vertices[u]) == Ordering::Less) {
                        start_v = Some(v);
                    }
                }
            }
        }
        let v0 = start_v.unwrap();
        let h_out: Vec<usize> = self.out[v0].iter().copied().filter(|&h| in_h[h / 2]).collect();
        let h0 = top_edge(&self.vertices, &h_out, v0, &|h| self.dest(h));
        let mut visited = vec![0u8; ne];
        let mut walk: Vec<Point> = Vec::new();
        let mut h = h0;
        let limit = 2 * count + 2;
        for _ in 0..limit {
            visited[h / 2] += 1;
            walk.push(self.vertices[self.origin(h)]);
            // clockwise-next H edge around the destination
            let v = self.dest(h);
            let list = &self.out[v];
            let mut k = self.pos[h ^ 1];
            loop {
                k = (k + list.len() - 1) % list.len();
                if in_h[list[k] / 2] {
                    break;
                }
            }
            h = list[k];
            if h == h0 {
                break;
            }
        }
        if h != h0 {
            return Err(OverlayError::NotSimplyConnected);
        }
        for e in 0..ne {
            if in_h[e] && visited[e] == 0 {
                return Err(OverlayError::NotSimplyConnected);
            }
        }
        // the outer face of H was traced clockwise; the region lies inside
        walk.reverse();
        let k = lex_min_index(&walk);
        walk.rotate_left(k);
        Ok(walk)
    }
}
