//! Fields: the parts of each grid cell inside the polygon and outside every
//! boundary piece.
//!
//! Cells crossed by the polygon or piece boundaries are handled one at a time
//! with a small overlay of clipped loops. Every other cell is either entirely
//! free or entirely covered, which a scanline through the cell centres of
//! each row decides.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use super::grid::{clip_to_columns, clip_to_strip, CellId, Grid};
use crate::kernel::overlay::{OverlayBuilder, Owner, UNBOUNDED};
use crate::kernel::polygon::{signed_area, simplify_walk};
use crate::kernel::{Point, Polygon};

/// Something went wrong that a different grid offset should avoid.
#[derive(Debug)]
pub struct Degenerate;

#[derive(Clone, Debug, Default)]
pub struct DirtyCell {
    pub polygon: bool,
    pub pieces: Vec<u32>,
    pub fragments: Vec<u32>,
    pub endpoints: Vec<Point>,
}

/// A run of free cells `start..end` in one row, each a full square piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompleteRun {
    pub row: i64,
    pub start: i64,
    pub end: i64,
}

impl CompleteRun {
    pub fn len(&self) -> usize {
        (self.end - self.start) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }
}

#[derive(Clone, Debug)]
pub struct RawField {
    pub cell: CellId,
    pub walk: Vec<Point>,
    pub area: f64,
}

pub struct CellMap {
    pub cells: HashMap<CellId, DirtyCell>,
    pub tol: f64,
}

impl CellMap {
    pub fn new(grid: &Grid) -> Self {
        CellMap { cells: HashMap::new(), tol: 1e-9 * grid.cell }
    }

    fn touch(&mut self, grid: &Grid, a: Point, b: Point, mut f: impl FnMut(&mut DirtyCell)) {
        let mut ids = Vec::new();
        grid.cells_on_segment(a, b, self.tol, &mut ids);
        for id in ids {
            f(self.cells.entry(id).or_default());
        }
    }

    pub fn add_polygon(&mut self, grid: &Grid, poly: &Polygon) {
        let n = poly.len();
        for i in 0..n {
            let (a, b) = poly.edge(i);
            self.touch(grid, a, b, |c| c.polygon = true);
        }
    }

    pub fn add_piece(&mut self, grid: &Grid, id: u32, walk: &[Point]) {
        let m = walk.len();
        for k in 0..m {
            self.touch(grid, walk[k], walk[(k + 1) % m], |c| {
                if c.pieces.last() != Some(&id) && !c.pieces.contains(&id) {
                    c.pieces.push(id);
                }
            });
        }
    }

    pub fn add_fragment(&mut self, grid: &Grid, id: u32, chain: &[Point]) {
        for w in chain.windows(2) {
            self.touch(grid, w[0], w[1], |c| {
                if !c.fragments.contains(&id) {
                    c.fragments.push(id);
                }
            });
        }
        for p in [chain[0], chain[chain.len() - 1]] {
            let mut ids = Vec::new();
            grid.cells_near_point(p, self.tol, &mut ids);
            for id in ids {
                let c = self.cells.entry(id).or_default();
                if !c.endpoints.contains(&p) {
                    c.endpoints.push(p);
                }
            }
        }
    }
}

struct Crossing {
    x: f64,
    poly: i32,
    cover: i32,
}

/// Windings along the horizontal line through a row's cell centres.
struct RowLine {
    xs: Vec<Crossing>,
}

impl RowLine {
    /// (polygon winding, piece cover) just right of each crossing.
    fn state_at(&self, x: f64) -> (i32, i32) {
        let mut wp = 0;
        let mut cv = 0;
        for c in &self.xs {
            if c.x > x {
                break;
            }
            wp += c.poly;
            cv += c.cover;
        }
        (wp, cv)
    }
}

fn crossings_at(y: f64, edges: &[(Point, Point, bool)], ids: &[usize]) -> RowLine {
    let mut xs: Vec<Crossing> = Vec::with_capacity(ids.len());
    for &k in ids {
        let (a, b, is_poly) = edges[k];
        // counterclockwise loops cross downwards on their left side
        let (lo, hi, dir) = if a.y < b.y { (a, b, -1) } else { (b, a, 1) };
        if !(lo.y <= y && y < hi.y) {
            continue;
        }
        let t = (y - lo.y) / (hi.y - lo.y);
        let x = lo.x + t * (hi.x - lo.x);
        if is_poly {
            xs.push(Crossing { x, poly: dir, cover: 0 });
        } else {
            xs.push(Crossing { x, poly: 0, cover: dir });
        }
    }
    xs.sort_by(|a, b| a.x.total_cmp(&b.x));
    RowLine { xs }
}

/// Complete runs over clean cells and the fields of every dirty cell.
pub fn build_fields(
    grid: &Grid,
    poly: &Polygon,
    pieces: &[&[Point]],
    map: &CellMap,
) -> Result<(Vec<CompleteRun>, Vec<RawField>), Degenerate> {
    let bb = poly.bbox();
    let r0 = grid.row(bb.min.y);
    let r1 = grid.row(bb.max.y);

    // all boundary edges, bucketed by the rows whose centre line they span
    let mut edges: Vec<(Point, Point, bool)> = Vec::new();
    for i in 0..poly.len() {
        let (a, b) = poly.edge(i);
        edges.push((a, b, true));
    }
    for w in pieces {
        let m = w.len();
        for k in 0..m {
            edges.push((w[k], w[(k + 1) % m], false));
        }
    }
    let mut by_row: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (k, &(a, b, _)) in edges.iter().enumerate() {
        let lo = a.y.min(b.y);
        let hi = a.y.max(b.y);
        // rows whose centre y_c satisfies lo <= y_c < hi
        let j0 = libm::ceil((lo - grid.origin.y) / grid.cell - 0.5) as i64;
        let j1 = libm::ceil((hi - grid.origin.y) / grid.cell - 0.5) as i64 - 1;
        for j in j0.max(r0)..=j1.min(r1) {
            by_row.entry(j).or_default().push(k);
        }
    }
    let mut dirty_rows: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
    for &(i, j) in map.cells.keys() {
        dirty_rows.entry(j).or_default().push(i);
    }
    for v in dirty_rows.values_mut() {
        v.sort_unstable();
    }

    let mut runs = Vec::new();
    let mut fields = Vec::new();
    let empty: Vec<usize> = Vec::new();
    let no_dirty: Vec<i64> = Vec::new();
    for j in r0..=r1 {
        let yc = grid.y(j) + 0.5 * grid.cell;
        let line = crossings_at(yc, &edges, by_row.get(&j).unwrap_or(&empty));
        let dirty = dirty_rows.get(&j).unwrap_or(&no_dirty);
        free_runs(grid, j, &line, dirty, &mut runs);
        if dirty.is_empty() {
            continue;
        }
        let y0 = grid.y(j);
        let y1 = grid.y(j + 1);
        let strip = clip_to_strip(poly.vertices(), y0, y1);
        for &i in dirty {
            let cell = &map.cells[&(i, j)];
            cell_fields(grid, (i, j), cell, &strip, pieces, &line, &mut fields)?;
        }
    }
    Ok((runs, fields))
}

fn free_runs(grid: &Grid, j: i64, line: &RowLine, dirty: &[i64], out: &mut Vec<CompleteRun>) {
    let mut wp = 0;
    let mut cv = 0;
    for k in 0..line.xs.len() {
        wp += line.xs[k].poly;
        cv += line.xs[k].cover;
        if wp != 1 || cv != 0 || k + 1 == line.xs.len() {
            continue;
        }
        let xa = line.xs[k].x;
        let xb = line.xs[k + 1].x;
        // cells whose centre lies strictly between the crossings
        let i0 = libm::floor((xa - grid.origin.x) / grid.cell - 0.5) as i64 + 1;
        let i1 = libm::ceil((xb - grid.origin.x) / grid.cell - 0.5) as i64 - 1;
        if i1 < i0 {
            continue;
        }
        let lo = dirty.partition_point(|&d| d < i0);
        let mut start = i0;
        for &d in dirty[lo..].iter().take_while(|&&d| d <= i1) {
            if d > start {
                out.push(CompleteRun { row: j, start, end: d });
            }
            start = d + 1;
        }
        if start <= i1 {
            out.push(CompleteRun { row: j, start, end: i1 + 1 });
        }
    }
}

const CELL: Owner = 0;
const POLY: Owner = 1;

fn cell_fields(
    grid: &Grid,
    id: CellId,
    cell: &DirtyCell,
    strip: &[Point],
    pieces: &[&[Point]],
    line: &RowLine,
    out: &mut Vec<RawField>,
) -> Result<(), Degenerate> {
    let rect = grid.rect(id);
    let corners = grid.corners(id);
    let p_loop = if cell.polygon {
        clip_to_columns(strip, rect.min.x, rect.max.x)
    } else {
        let (wp, _) = line.state_at(0.5 * (rect.min.x + rect.max.x));
        if wp != 1 {
            return Ok(());
        }
        corners.to_vec()
    };
    let cell_area = grid.cell * grid.cell;
    if p_loop.len() < 3 || signed_area(&p_loop) <= 1e-12 * cell_area {
        return Ok(());
    }
    let mut b = OverlayBuilder::new();
    b.add_loop(CELL, &corners);
    b.add_loop(POLY, &p_loop);
    let mut covered = 0.0;
    for &k in &cell.pieces {
        let c = super::grid::clip_to_rect(pieces[k as usize], &rect);
        if c.len() >= 3 {
            let a = signed_area(&c);
            if a > 0.0 {
                covered += a;
                b.add_loop(2 + k, &c);
            }
        }
    }
    let p_area = signed_area(&p_loop);
    if covered >= p_area * (1.0 - 1e-12) {
        return Ok(());
    }
    let sub = b.build().map_err(|_| Degenerate)?;
    let nf = sub.face_count();
    let is_field: Vec<bool> = (0..nf)
        .map(|f| {
            f != UNBOUNDED
                && sub.winding(f, CELL) == 1
                && sub.winding(f, POLY) == 1
                && sub.faces[f].winding.iter().all(|&(o, w)| o <= POLY || w == 0)
        })
        .collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nf];
    for e in 0..sub.edges.len() {
        let (f, g) = sub.edge_faces(e);
        if is_field[f] && is_field[g] && f != g {
            adj[f].push(g);
            adj[g].push(f);
        }
    }
    let mut seen = vec![false; nf];
    for f0 in 0..nf {
        if !is_field[f0] || seen[f0] {
            continue;
        }
        let mut region = vec![false; nf];
        let mut stack = vec![f0];
        seen[f0] = true;
        let mut area = 0.0;
        while let Some(f) = stack.pop() {
            region[f] = true;
            area += sub.faces[f].area;
            for &g in &adj[f] {
                if !seen[g] {
                    seen[g] = true;
                    stack.push(g);
                }
            }
        }
        if area <= 1e-12 * cell_area {
            continue;
        }
        let walk = sub.boundary_walk(&region, &[]).map_err(|_| Degenerate)?;
        out.push(RawField { cell: id, walk: simplify_walk(walk), area });
    }
    Ok(())
}
