//! Greedy cover of the polygon boundary by maximal intervals, one boundary
//! piece per interval.

mod pieces;

pub use pieces::{build_pieces, BoundaryPiece, Construction};

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::constraint::{containment_measure, push_point, ChainMeasure, SizeConstraint, SizeKind};
use crate::error::PartitionError;
use crate::kernel::{Point, Polygon};

/// Arc-length tolerance of the maximal-interval search, relative to the
/// perimeter.
pub const EDGE_EPS_REL: f64 = 1e-9;

/// Relative shrink applied when rounding puts a closed-form trivial step
/// just over the bound.
const LIMIT_SHRINK: f64 = 1e-14;

/// A point on the boundary: edge index and parameter along that edge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryPosition {
    pub edge: usize,
    pub t: f64,
}

impl BoundaryPosition {
    pub fn vertex(i: usize) -> Self {
        BoundaryPosition { edge: i, t: 0.0 }
    }
}

/// Position within a [`BoundaryFrame`]: segment index and parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cursor {
    pub seg: usize,
    pub t: f64,
}

impl Cursor {
    fn cmp(&self, other: &Cursor) -> Ordering {
        self.seg.cmp(&other.seg).then(self.t.partial_cmp(&other.t).unwrap_or(Ordering::Equal))
    }
}

/// The boundary cut open at the start point `a0` and walked once
/// counterclockwise. Stops are `a0`, every polygon vertex, and `a0` again.
#[derive(Clone, Debug)]
pub struct BoundaryFrame {
    stops: Vec<Point>,
    edge: Vec<usize>,
    /// Parameters of each segment's ends along its polygon edge.
    span: Vec<(f64, f64)>,
    cum: Vec<f64>,
    n: usize,
}

impl BoundaryFrame {
    pub fn new(poly: &Polygon, a0: BoundaryPosition) -> Self {
        let n = poly.len();
        let e0 = a0.edge % n;
        let t0 = a0.t;
        let mut stops = Vec::with_capacity(n + 2);
        let mut edge = Vec::with_capacity(n + 1);
        let mut span = Vec::with_capacity(n + 1);
        if t0 == 0.0 {
            for k in 0..=n {
                stops.push(poly.vertex(e0 + k));
            }
            for k in 0..n {
                edge.push((e0 + k) % n);
                span.push((0.0, 1.0));
            }
        } else {
            let (a, b) = poly.edge(e0);
            let p0 = a.lerp(b, t0);
            stops.push(p0);
            for k in 1..=n {
                stops.push(poly.vertex(e0 + k));
            }
            stops.push(p0);
            edge.push(e0);
            span.push((t0, 1.0));
            for k in 1..n {
                edge.push((e0 + k) % n);
                span.push((0.0, 1.0));
            }
            edge.push(e0);
            span.push((0.0, t0));
        }
        let mut cum = vec![0.0];
        for w in stops.windows(2) {
            cum.push(cum[cum.len() - 1] + w[0].dist(w[1]));
        }
        BoundaryFrame { stops, edge, span, cum, n }
    }

    pub fn segments(&self) -> usize {
        self.stops.len() - 1
    }

    pub fn perimeter(&self) -> f64 {
        self.cum[self.cum.len() - 1]
    }

    pub fn start(&self) -> Cursor {
        Cursor { seg: 0, t: 0.0 }
    }

    pub fn end(&self) -> Cursor {
        Cursor { seg: self.segments(), t: 0.0 }
    }

    pub fn is_end(&self, c: Cursor) -> bool {
        c.seg >= self.segments()
    }

    pub fn stop(&self, j: usize) -> Point {
        self.stops[j]
    }

    pub fn segment_length(&self, seg: usize) -> f64 {
        self.cum[seg + 1] - self.cum[seg]
    }

    pub fn point(&self, c: Cursor) -> Point {
        if c.t == 0.0 || self.is_end(c) {
            self.stops[c.seg.min(self.segments())]
        } else if c.t == 1.0 {
            self.stops[c.seg + 1]
        } else {
            self.stops[c.seg].lerp(self.stops[c.seg + 1], c.t)
        }
    }

    /// Arc length from `a0`.
    pub fn arc(&self, c: Cursor) -> f64 {
        if self.is_end(c) {
            return self.perimeter();
        }
        self.cum[c.seg] + c.t * self.segment_length(c.seg)
    }

    pub fn position(&self, c: Cursor) -> BoundaryPosition {
        let c = if self.is_end(c) { Cursor { seg: self.segments() - 1, t: 1.0 } } else { c };
        let (lo, hi) = self.span[c.seg];
        let t = lo + c.t * (hi - lo);
        let e = self.edge[c.seg];
        if t >= 1.0 {
            BoundaryPosition { edge: (e + 1) % self.n, t: 0.0 }
        } else {
            BoundaryPosition { edge: e, t }
        }
    }

    /// Points of the boundary between two cursors, `a` before `b`.
    pub fn chain(&self, a: Cursor, b: Cursor) -> Vec<Point> {
        let mut out = vec![self.point(a)];
        let last = b.seg.min(self.segments());
        for j in a.seg + 1..=last {
            push_point(&mut out, self.stops[j]);
        }
        push_point(&mut out, self.point(b));
        if out.len() == 1 && a.cmp(&b) == Ordering::Less {
            // a full loop from a stop back to itself
            out.push(out[0]);
        }
        out
    }

    /// Move `dist` forward along the boundary, stopping at the end.
    pub fn advance(&self, c: Cursor, dist: f64) -> Cursor {
        let target = self.arc(c) + dist;
        if target >= self.perimeter() {
            return self.end();
        }
        let mut seg = c.seg;
        while seg + 1 < self.segments() && self.cum[seg + 1] <= target {
            seg += 1;
        }
        let len = self.segment_length(seg);
        let t = if len > 0.0 { ((target - self.cum[seg]) / len).clamp(0.0, 1.0) } else { 0.0 };
        if t >= 1.0 {
            Cursor { seg: seg + 1, t: 0.0 }
        } else {
            Cursor { seg, t }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryInterval {
    pub start: Cursor,
    pub end: Cursor,
    pub start_pos: BoundaryPosition,
    pub end_pos: BoundaryPosition,
    /// The boundary from start to end, including both endpoints.
    pub chain: Vec<Point>,
}

impl BoundaryInterval {
    /// No polygon corner strictly inside the interval.
    pub fn is_trivial(&self) -> bool {
        self.chain.len() <= 2
    }

    pub fn length(&self) -> f64 {
        self.chain.windows(2).map(|w| w[0].dist(w[1])).sum()
    }
}

enum Step {
    /// `count` trivial intervals of equal parameter length `dt` on the
    /// current segment.
    Trivial { count: usize, dt: f64 },
    Interval { end: Cursor },
}

/// Finds maximal intervals one after another.
pub struct Greedy<'a> {
    pub frame: BoundaryFrame,
    pub measure: &'a ChainMeasure,
    eps: f64,
}

impl<'a> Greedy<'a> {
    pub fn new(poly: &Polygon, measure: &'a ChainMeasure, a0: BoundaryPosition) -> Self {
        let frame = BoundaryFrame::new(poly, a0);
        let eps = EDGE_EPS_REL * frame.perimeter();
        Greedy { frame, measure, eps }
    }

    pub fn edge_eps(&self) -> f64 {
        self.eps
    }

    fn constraint(&self) -> SizeConstraint {
        self.measure.constraint
    }

    /// Measure of the boundary between two points of one edge.
    fn segment_ok(&self, a: Point, b: Point) -> bool {
        let c = self.constraint();
        let size = match c.kind {
            SizeKind::GeodesicDiameter => a.dist(b),
            SizeKind::Perimeter => 2.0 * a.dist(b),
            kind => containment_measure(kind, &[a, b]),
        };
        size <= c.bound
    }

    fn step(&self, c: Cursor) -> Result<Step, PartitionError> {
        let f = &self.frame;
        let p1 = f.point(c);
        let p2 = f.stop(c.seg + 1);
        if !self.segment_ok(p1, p2) {
            let rem = p1.dist(p2);
            let s = f.stop(c.seg);
            let len = f.segment_length(c.seg);
            let b = self.constraint();
            let mut lim = b.kind.segment_limit(b.bound, p2 - s);
            loop {
                let dt = lim / len;
                let at = |k: usize| s.lerp(p2, c.t + k as f64 * dt);
                let mut count = (libm::ceil(rem / lim) as usize).saturating_sub(1).max(1);
                while !self.segment_ok(at(count), p2) {
                    count += 1;
                }
                while count > 1 && self.segment_ok(at(count - 1), p2) {
                    count -= 1;
                }
                if (1..=count).all(|k| self.segment_ok(at(k - 1), at(k))) {
                    return Ok(Step::Trivial { count, dt });
                }
                lim *= 1.0 - LIMIT_SHRINK;
            }
        }
        let mut probe = Probe::new(self.measure, f, c);
        let total = probe.q.len();
        // gallop over corners, then binary search
        let mut good = 0;
        let mut bad = None;
        let mut stride = 1;
        while good + 1 < total {
            let i = (good + stride).min(total - 1);
            if probe.prefix_ok(i) {
                good = i;
                stride *= 2;
            } else {
                bad = Some(i);
                break;
            }
        }
        let Some(mut hi) = bad else {
            return Ok(Step::Interval { end: f.end() });
        };
        while hi - good > 1 {
            let mid = (good + hi) / 2;
            if probe.prefix_ok(mid) {
                good = mid;
            } else {
                hi = mid;
            }
        }
        // extend along the segment that starts at corner `good`
        let seg = if good == 0 { c.seg } else { c.seg + good };
        let len = f.segment_length(seg);
        let mut lo = if good == 0 { c.t } else { 0.0 };
        let mut up = 1.0;
        let mut iters = 0;
        while (up - lo) * len > 0.5 * self.eps && iters < 200 {
            let mid = 0.5 * (lo + up);
            let p = f.point(Cursor { seg, t: mid });
            if probe.extended_ok(good, p) {
                lo = mid;
            } else {
                up = mid;
            }
            iters += 1;
        }
        let end = Cursor { seg, t: lo };
        if end.cmp(&c) != Ordering::Greater {
            return Err(PartitionError::Construction("maximal interval made no progress"));
        }
        Ok(Step::Interval { end })
    }

    fn make_interval(&self, a: Cursor, b: Cursor) -> BoundaryInterval {
        BoundaryInterval {
            start: a,
            end: b,
            start_pos: self.frame.position(a),
            end_pos: self.frame.position(b),
            chain: self.frame.chain(a, b),
        }
    }

    /// All intervals, tiling the boundary from `a0` back to `a0`.
    pub fn intervals(&self) -> Result<Vec<BoundaryInterval>, PartitionError> {
        let mut out = Vec::new();
        let mut c = self.frame.start();
        while !self.frame.is_end(c) {
            match self.step(c)? {
                Step::Trivial { count, dt } => {
                    for k in 1..=count {
                        let next = Cursor { seg: c.seg, t: c.t + k as f64 * dt };
                        let prev = Cursor { seg: c.seg, t: c.t + (k - 1) as f64 * dt };
                        out.push(self.make_interval(prev, next));
                    }
                    c = Cursor { seg: c.seg, t: c.t + count as f64 * dt };
                }
                Step::Interval { end } => {
                    out.push(self.make_interval(c, end));
                    c = end;
                }
            }
        }
        Ok(out)
    }

    /// Number of intervals, with runs of trivial intervals counted in one
    /// step each.
    pub fn count(&self) -> Result<usize, PartitionError> {
        let mut total = 0;
        let mut c = self.frame.start();
        while !self.frame.is_end(c) {
            match self.step(c)? {
                Step::Trivial { count, dt } => {
                    total += count;
                    c = Cursor { seg: c.seg, t: c.t + count as f64 * dt };
                }
                Step::Interval { end } => {
                    total += 1;
                    c = end;
                }
            }
        }
        Ok(total)
    }
}

/// Incremental feasibility tests for prefixes `q[0..=i]` of the corners
/// ahead of a start point, and for such a prefix extended by one point.
struct Probe<'a> {
    m: &'a ChainMeasure,
    q: Vec<Point>,
    /// Geodesic kind: largest distance from `q[i]` to an earlier corner.
    row_max: Vec<Option<f64>>,
    /// Perimeter kind: chain length up to `q[i]`.
    cum: Vec<f64>,
}

impl<'a> Probe<'a> {
    fn new(m: &'a ChainMeasure, f: &BoundaryFrame, c: Cursor) -> Self {
        let mut q = vec![f.point(c)];
        for j in c.seg + 1..=f.segments() {
            q.push(f.stop(j));
        }
        let mut cum = vec![0.0];
        for w in q.windows(2) {
            cum.push(cum[cum.len() - 1] + w[0].dist(w[1]));
        }
        let row_max = vec![None; q.len()];
        Probe { m, q, row_max, cum }
    }

    fn geodesic_row(&mut self, i: usize) -> f64 {
        if let Some(v) = self.row_max[i] {
            return v;
        }
        let g = self.m.geodesic().unwrap();
        let d = g.distances_from(self.q[i], &self.q[..i]).expect("corners lie on the boundary");
        let v = d.into_iter().fold(0.0, f64::max);
        self.row_max[i] = Some(v);
        v
    }

    fn prefix_ok(&mut self, i: usize) -> bool {
        let b = self.m.constraint.bound;
        match self.m.constraint.kind {
            SizeKind::GeodesicDiameter => (1..=i).all(|k| self.geodesic_row(k) <= b),
            SizeKind::Perimeter => {
                let g = self.m.geodesic().unwrap();
                let close = g.distance(self.q[0], self.q[i]).expect("corners lie on the boundary");
                self.cum[i] + close <= b
            }
            _ => self.m.feasible(&self.q[..=i]),
        }
    }

    /// Assumes `prefix_ok(i)` already holds.
    fn extended_ok(&mut self, i: usize, p: Point) -> bool {
        let b = self.m.constraint.bound;
        match self.m.constraint.kind {
            SizeKind::GeodesicDiameter => {
                let g = self.m.geodesic().unwrap();
                let d = g.distances_from(p, &self.q[..=i]).expect("point lies on the boundary");
                d.into_iter().all(|x| x <= b)
            }
            SizeKind::Perimeter => {
                let g = self.m.geodesic().unwrap();
                let close = g.distance(self.q[0], p).expect("point lies on the boundary");
                self.cum[i] + self.q[i].dist(p) + close <= b
            }
            _ => {
                let mut chain = self.q[..=i].to_vec();
                push_point(&mut chain, p);
                self.m.feasible(&chain)
            }
        }
    }
}

/// Default start: the lexicographically smallest vertex.
pub fn default_start(poly: &Polygon) -> BoundaryPosition {
    BoundaryPosition::vertex(poly.lex_min_index())
}

#[derive(Clone, Debug)]
pub struct BoundaryPartition {
    pub constraint: SizeConstraint,
    pub a0: BoundaryPosition,
    pub intervals: Vec<BoundaryInterval>,
    pub pieces: Vec<BoundaryPiece>,
    /// Non-trivial blow-up pieces that came out with zero area.
    pub slivers: usize,
}

pub fn greedy_intervals(
    constraint: SizeConstraint,
    poly: &Polygon,
    a0: BoundaryPosition,
) -> Result<Vec<BoundaryInterval>, PartitionError> {
    let m = ChainMeasure::new(constraint, poly);
    Greedy::new(poly, &m, a0).intervals()
}

pub fn greedy_boundary(
    constraint: SizeConstraint,
    poly: &Polygon,
    a0: BoundaryPosition,
) -> Result<BoundaryPartition, PartitionError> {
    let m = ChainMeasure::new(constraint, poly);
    let intervals = Greedy::new(poly, &m, a0).intervals()?;
    let (pieces, slivers) = build_pieces(constraint.kind, poly, &intervals, m.geodesic())?;
    Ok(BoundaryPartition { constraint, a0, intervals, pieces, slivers })
}

/// Number of boundary pieces the greedy produces, without building them.
pub fn estimate_boundary_count(
    constraint: SizeConstraint,
    poly: &Polygon,
    a0: BoundaryPosition,
) -> Result<usize, PartitionError> {
    let m = ChainMeasure::new(constraint, poly);
    Greedy::new(poly, &m, a0).count()
}

#[cfg(test)]
mod tests;
