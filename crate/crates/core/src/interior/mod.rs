//! Interior pieces: a square grid over the part of the polygon left
//! uncovered by the boundary pieces.

pub mod fields;
pub mod grid;
pub mod ibi;
pub mod subfield;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

pub use fields::CompleteRun;
pub use grid::{CellId, Grid};
pub use ibi::{Fragment, InteriorBoundaryInterval};

use crate::boundary::BoundaryPartition;
use crate::constraint::SizeKind;
use crate::error::PartitionError;
use crate::kernel::polygon::signed_area;
use crate::kernel::visibility::is_convex_walk;
use crate::kernel::{Point, Polygon, WeaklySimplePolygon};
use crate::piece::{Piece, PieceClass};
use fields::{build_fields, CellMap, Degenerate, RawField};
use grid::OffsetSource;
use subfield::{glue, label_walk, split_field, EdgeLabel};

pub const DEFAULT_SEED: u64 = 0x5EED;
pub const MAX_GRID_ATTEMPTS: usize = 8;

const SQRT_2: f64 = core::f64::consts::SQRT_2;
const GEODESIC_GAMMA: f64 = 0.127;
const PERIMETER_GAMMA: f64 = 0.00490;
const PERIMETER_DELTA: f64 = 0.00243;

/// Grid cell size and fragment length for a unit bound; both scale with the
/// actual bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InteriorConfig {
    pub gamma: f64,
    /// Only used by the geodesic diameter and perimeter kinds.
    pub delta: f64,
    pub seed: u64,
}

impl InteriorConfig {
    pub fn default_for(kind: SizeKind) -> Self {
        let (gamma, delta) = match kind {
            SizeKind::AlignedSquare | SizeKind::RotatedSquare => (1.0, 0.0),
            SizeKind::Disk => (SQRT_2, 0.0),
            SizeKind::StraightDiameter => (1.0 / SQRT_2, 0.0),
            SizeKind::GeodesicDiameter => (GEODESIC_GAMMA, 1.0 - 2.0 * (2.0 + SQRT_2) * GEODESIC_GAMMA),
            SizeKind::Perimeter => (PERIMETER_GAMMA, PERIMETER_DELTA),
        };
        InteriorConfig { gamma, delta, seed: DEFAULT_SEED }
    }

    /// Cells must satisfy the bound on their own, and for the two path
    /// kinds the glued pieces must too.
    pub fn validate(&self, kind: SizeKind) -> Result<(), PartitionError> {
        let g = self.gamma;
        let d = self.delta;
        if !(g.is_finite() && g > 0.0) {
            return Err(PartitionError::BadConfig("gamma must be positive"));
        }
        let slack = 1e-12;
        let ok = match kind {
            SizeKind::AlignedSquare | SizeKind::RotatedSquare => g <= 1.0 + slack,
            SizeKind::Disk => g <= SQRT_2 + slack,
            SizeKind::StraightDiameter => g <= 1.0 / SQRT_2 + slack,
            SizeKind::GeodesicDiameter => d > 0.0 && 2.0 * (2.0 + SQRT_2) * g + d <= 1.0 + slack,
            SizeKind::Perimeter => d > 0.0 && d <= g && 24.0 * d + 192.0 * g <= 1.0 + slack,
        };
        if ok {
            Ok(())
        } else {
            Err(PartitionError::BadConfig("gamma/delta violate the size bound for this kind"))
        }
    }
}

/// Non-complete field of one cell.
#[derive(Clone, Debug)]
pub struct Field {
    pub cell: CellId,
    pub shape: WeaklySimplePolygon,
    /// A cell side appears on the boundary (an edge piece, otherwise a chip).
    pub edge: bool,
    pub trivial: bool,
}

#[derive(Clone, Debug)]
pub struct Subfield {
    pub field: usize,
    pub shape: WeaklySimplePolygon,
    pub edge: bool,
    pub fragment: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct InteriorStats {
    pub grid_attempts: usize,
    pub complete: usize,
    pub edge_pieces: usize,
    pub chip_pieces: usize,
    pub trivial_fields: usize,
    pub nontrivial_fields: usize,
    pub subfields: usize,
    /// Pieces emitted per subfield or per field because gluing or cutting
    /// failed.
    pub fallback_pieces: usize,
}

#[derive(Clone, Debug)]
pub struct InteriorPartition {
    pub grid: Grid,
    /// Everything except the full cells listed in `runs`.
    pub pieces: Vec<Piece>,
    pub runs: Vec<CompleteRun>,
    pub fields: Vec<Field>,
    pub ibis: Vec<InteriorBoundaryInterval>,
    pub fragments: Vec<Fragment>,
    pub subfields: Vec<Subfield>,
    pub stats: InteriorStats,
}

impl InteriorPartition {
    pub fn piece_count(&self) -> usize {
        self.pieces.len() + self.runs.iter().map(|r| r.len()).sum::<usize>()
    }

    pub fn complete_cells(&self) -> impl Iterator<Item = Piece> + '_ {
        let g = self.grid;
        self.runs.iter().flat_map(move |r| {
            (r.start..r.end).map(move |i| {
                Piece::new(PieceClass::Complete, WeaklySimplePolygon::new(g.corners((i, r.row)).to_vec()))
            })
        })
    }

    /// All pieces, full cells last.
    pub fn all_pieces(&self) -> impl Iterator<Item = Piece> + '_ {
        self.pieces.iter().cloned().chain(self.complete_cells())
    }
}

pub fn interior_partition(
    poly: &Polygon,
    boundary: &BoundaryPartition,
    config: &InteriorConfig,
) -> Result<InteriorPartition, PartitionError> {
    let kind = boundary.constraint.kind;
    config.validate(kind)?;
    let bound = boundary.constraint.bound;
    let shapes: Vec<WeaklySimplePolygon> = boundary.pieces.iter().map(|p| p.shape.clone()).collect();
    let ibis = ibi::compute_ibis(poly, &shapes)?;
    let fragments = if kind.uses_blowup() { Vec::new() } else { ibi::split_fragments(&ibis, config.delta * bound) };

    let mut offsets = OffsetSource::new(config.seed);
    for attempt in 1..=MAX_GRID_ATTEMPTS {
        let grid = offsets.next_grid(config.gamma * bound);
        if grid_touches_vertices(&grid, poly, &shapes) {
            continue;
        }
        match build(kind, &grid, poly, &shapes, &fragments) {
            Ok(mut part) => {
                part.stats.grid_attempts = attempt;
                part.ibis = ibis;
                part.fragments = fragments;
                return Ok(part);
            }
            Err(Degenerate) => continue,
        }
    }
    Err(PartitionError::Construction("no grid offset in general position"))
}

fn grid_touches_vertices(grid: &Grid, poly: &Polygon, shapes: &[WeaklySimplePolygon]) -> bool {
    let tol = 1e-9 * grid.cell;
    poly.vertices().iter().chain(shapes.iter().flat_map(|s| s.walk.iter())).any(|&v| grid.line_clearance(v) <= tol)
}

fn build(
    kind: SizeKind,
    grid: &Grid,
    poly: &Polygon,
    shapes: &[WeaklySimplePolygon],
    fragments: &[Fragment],
) -> Result<InteriorPartition, Degenerate> {
    let mut map = CellMap::new(grid);
    map.add_polygon(grid, poly);
    let covering: Vec<&[Point]> = shapes.iter().map(|s| s.walk.as_slice()).collect();
    for (k, s) in shapes.iter().enumerate() {
        if signed_area(&s.walk) > 0.0 {
            map.add_piece(grid, k as u32, &s.walk);
        }
    }
    for (k, f) in fragments.iter().enumerate() {
        map.add_fragment(grid, k as u32, &f.chain);
    }
    // pieces of zero area cover nothing
    let covering: Vec<&[Point]> =
        covering.into_iter().map(|w| if signed_area(w) > 0.0 { w } else { &w[..0] }).collect();
    let (runs, raw) = build_fields(grid, poly, &covering, &map)?;

    let mut stats = InteriorStats { complete: runs.iter().map(|r| r.len()).sum(), ..Default::default() };
    let cell_area = grid.cell * grid.cell;
    let mut pieces = Vec::new();
    let mut fields = Vec::new();
    let mut subfields: Vec<Subfield> = Vec::new();
    for RawField { cell, walk, area } in raw {
        if area >= cell_area * (1.0 - 1e-9) && walk.len() == 4 {
            stats.complete += 1;
            pieces.push(Piece::new(PieceClass::Complete, WeaklySimplePolygon::new(grid.corners(cell).to_vec())));
            continue;
        }
        let rect = grid.rect(cell);
        let tol = map.tol;
        let edge = touches_cell_side(&walk, &rect, tol);
        let trivial = is_convex_walk(&walk);
        let fid = fields.len();
        fields.push(Field { cell, shape: WeaklySimplePolygon::new(walk.clone()), edge, trivial });
        if kind.uses_blowup() {
            if edge {
                stats.edge_pieces += 1;
            } else {
                stats.chip_pieces += 1;
            }
            pieces.push(Piece::new(PieceClass::Incomplete, WeaklySimplePolygon::new(walk)));
            continue;
        }
        if trivial {
            stats.trivial_fields += 1;
            pieces.push(Piece::new(PieceClass::TrivialField, WeaklySimplePolygon::new(walk)));
            continue;
        }
        stats.nontrivial_fields += 1;
        let dc = &map.cells[&cell];
        let frags: Vec<(usize, &[Point])> =
            dc.fragments.iter().map(|&k| (k as usize, fragments[k as usize].chain.as_slice())).collect();
        let lw = label_walk(&walk, &rect, &frags, &dc.endpoints, tol);
        let has_fragment = lw.labels.iter().any(|l| matches!(l, EdgeLabel::Fragment(_)));
        let parts = if has_fragment { split_field(&lw, 1e-12 * cell_area) } else { None };
        match parts {
            Some(parts) => {
                for p in parts {
                    subfields.push(Subfield {
                        field: fid,
                        shape: WeaklySimplePolygon::new(p.walk),
                        edge: p.edge,
                        fragment: p.fragment,
                    });
                }
            }
            None => {
                stats.fallback_pieces += 1;
                pieces.push(Piece::new(PieceClass::Incomplete, WeaklySimplePolygon::new(walk)));
            }
        }
    }
    stats.subfields = subfields.len();

    // one piece per fragment that received subfields
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, s) in subfields.iter().enumerate() {
        match s.fragment {
            Some(f) => groups.entry(f).or_default().push(k),
            None => {
                stats.fallback_pieces += 1;
                pieces.push(Piece::new(PieceClass::FragmentUnion, s.shape.clone()));
            }
        }
    }
    for (f, members) in groups {
        let parts: Vec<&[Point]> = members.iter().map(|&k| subfields[k].shape.walk.as_slice()).collect();
        match glue(&parts, &fragments[f].chain) {
            Some(w) => pieces.push(Piece::new(PieceClass::FragmentUnion, WeaklySimplePolygon::new(w))),
            None => {
                stats.fallback_pieces += parts.len();
                for p in parts {
                    pieces.push(Piece::new(PieceClass::FragmentUnion, WeaklySimplePolygon::new(p.to_vec())));
                }
            }
        }
    }

    Ok(InteriorPartition {
        grid: *grid,
        pieces,
        runs,
        fields,
        ibis: Vec::new(),
        fragments: Vec::new(),
        subfields,
        stats,
    })
}

fn touches_cell_side(walk: &[Point], r: &crate::kernel::BBox, tol: f64) -> bool {
    let m = walk.len();
    let on = |u: f64, v: f64, s: f64| libm::fabs(u - s) <= tol && libm::fabs(v - s) <= tol;
    (0..m).any(|k| {
        let (a, b) = (walk[k], walk[(k + 1) % m]);
        a != b && (on(a.x, b.x, r.min.x) || on(a.x, b.x, r.max.x) || on(a.y, b.y, r.min.y) || on(a.y, b.y, r.max.y))
    })
}

#[cfg(test)]
mod tests;
