//! Certification of finished partitions from their geometry alone.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::boundary::BoundaryPartition;
use crate::constraint::{containment_measure, SizeKind};
use crate::error::PartitionError;
use crate::interior::InteriorPartition;
use crate::kernel::overlay::{OverlayBuilder, Owner, UNBOUNDED};
use crate::kernel::polygon::signed_area;
use crate::kernel::visibility::geodesic_diameter;
use crate::kernel::{Polygon, WeaklySimplePolygon};
use crate::piece::{Piece, PieceClass};

pub const TOL_AREA_REL: f64 = 1e-9;
pub const TOL_SIZE: f64 = 1e-6;

const SQRT_2: f64 = core::f64::consts::SQRT_2;
const PI: f64 = core::f64::consts::PI;

/// Worst-case ratio to the optimum proven for each kind.
pub fn approximation_factor(kind: SizeKind) -> f64 {
    match kind {
        SizeKind::AlignedSquare => 13.0,
        SizeKind::RotatedSquare => 21.0,
        SizeKind::Disk | SizeKind::StraightDiameter => 20.0 + PI / 2.0,
        SizeKind::GeodesicDiameter => 72.0,
        SizeKind::Perimeter => 3728.0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SizeCheck {
    pub measured: f64,
    pub pass: bool,
}

/// Bounding-square side, minimum rotated square side, enclosing disk
/// radius, straight diameter, geodesic diameter or perimeter of the piece.
pub fn measure(kind: SizeKind, piece: &WeaklySimplePolygon) -> f64 {
    match kind {
        SizeKind::GeodesicDiameter => geodesic_diameter(piece),
        SizeKind::Perimeter => piece.perimeter(),
        k => containment_measure(k, &piece.walk),
    }
}

pub fn check_size(kind: SizeKind, bound: f64, piece: &WeaklySimplePolygon, tol_size: f64) -> SizeCheck {
    let measured = measure(kind, piece);
    SizeCheck { measured, pass: measured <= bound * (1.0 + tol_size) }
}

/// Pieces needed by any partition, from the largest area a single piece can
/// have.
pub fn lower_bound(kind: SizeKind, bound: f64, poly: &Polygon) -> u64 {
    let a = poly.area() / (bound * bound);
    let x = match kind {
        SizeKind::Disk => a / PI,
        SizeKind::StraightDiameter | SizeKind::GeodesicDiameter => 4.0 * a / PI,
        SizeKind::AlignedSquare | SizeKind::RotatedSquare => a,
        SizeKind::Perimeter => 4.0 * PI * a,
    };
    // the square kinds hit integers exactly on grids
    libm::ceil(x * (1.0 - 1e-12)) as u64
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl BoundCheck {
    pub fn new(name: &'static str, lhs: f64, rhs: f64) -> Self {
        BoundCheck { name, lhs, rhs, pass: lhs <= rhs }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MalformedPiece {
    pub index: usize,
    pub reason: &'static str,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerificationReport {
    pub piece_count: usize,
    /// |area(P) - sum of piece areas|.
    pub covered_area_residual: f64,
    pub max_pairwise_overlap: f64,
    /// Area inside P covered by no piece.
    pub uncovered_area: f64,
    /// Piece area outside P.
    pub outside_area: f64,
    pub tol_area: f64,
    pub malformed: Vec<MalformedPiece>,
    pub counts: BTreeMap<PieceClass, usize>,
    /// One entry per piece when a size kind was checked.
    pub sizes: Vec<SizeCheck>,
    pub max_measured: f64,
    pub lower_bound: Option<u64>,
    pub bound_checks: Vec<BoundCheck>,
}

impl VerificationReport {
    pub fn coverage_ok(&self) -> bool {
        self.malformed.is_empty()
            && self.covered_area_residual <= self.tol_area
            && self.max_pairwise_overlap <= self.tol_area
            && self.uncovered_area <= self.tol_area
            && self.outside_area <= self.tol_area
    }

    pub fn sizes_ok(&self) -> bool {
        self.sizes.iter().all(|s| s.pass)
    }

    pub fn passed(&self) -> bool {
        self.coverage_ok() && self.sizes_ok() && self.bound_checks.iter().all(|c| c.pass)
    }
}

fn malformed(shape: &WeaklySimplePolygon) -> Option<&'static str> {
    let w = &shape.walk;
    if w.len() < 2 {
        return Some("fewer than two vertices");
    }
    if w.iter().any(|p| !(p.x.is_finite() && p.y.is_finite())) {
        return Some("non-finite coordinate");
    }
    // pieces lying on the polygon boundary have zero area up to rounding
    let d = shape.bbox().diagonal();
    if signed_area(w) < -1e-12 * d * d {
        return Some("clockwise");
    }
    None
}

const POLY: Owner = 0;

/// Coverage and disjointness of `pieces` against `poly` in one overlay.
pub fn check_partition(poly: &Polygon, pieces: &[Piece], tol_area: f64) -> Result<VerificationReport, PartitionError> {
    let mut rep = VerificationReport { piece_count: pieces.len(), tol_area, ..Default::default() };
    let mut b = OverlayBuilder::new();
    b.add_loop(POLY, poly.vertices());
    let mut sum = 0.0;
    for (i, p) in pieces.iter().enumerate() {
        *rep.counts.entry(p.class).or_default() += 1;
        if let Some(reason) = malformed(&p.shape) {
            rep.malformed.push(MalformedPiece { index: i, reason });
            continue;
        }
        sum += p.area();
        b.add_loop(1 + i as Owner, &p.shape.walk);
    }
    rep.covered_area_residual = libm::fabs(poly.area() - sum);
    let sub = b.build().map_err(|_| PartitionError::Construction("verification overlay failed"))?;

    let mut pair: HashMap<(Owner, Owner), f64> = HashMap::new();
    for (f, face) in sub.faces.iter().enumerate() {
        if f == UNBOUNDED || face.area <= 0.0 {
            continue;
        }
        let inside = sub.winding(f, POLY) == 1;
        let mut here: Vec<(Owner, i32)> =
            face.winding.iter().copied().filter(|&(o, w)| o != POLY && w != 0).collect();
        let depth: i32 = here.iter().map(|x| x.1).sum();
        if depth == 0 && inside {
            rep.uncovered_area += face.area;
        }
        if depth > 0 && !inside {
            rep.outside_area += face.area * depth as f64;
        }
        // a piece covering itself twice overlaps with itself
        for &(o, w) in &here {
            if w > 1 {
                *pair.entry((o, o)).or_default() += face.area;
            }
        }
        here.sort_unstable();
        for x in 0..here.len() {
            for y in x + 1..here.len() {
                *pair.entry((here[x].0, here[y].0)).or_default() += face.area;
            }
        }
    }
    rep.max_pairwise_overlap = pair.values().copied().fold(0.0, f64::max);
    Ok(rep)
}

/// Adds per-piece size checks and the lower bound to a report.
pub fn check_sizes(
    rep: &mut VerificationReport,
    poly: &Polygon,
    pieces: &[Piece],
    kind: SizeKind,
    bound: f64,
    tol_size: f64,
) {
    rep.sizes = pieces.iter().map(|p| check_size(kind, bound, &p.shape, tol_size)).collect();
    rep.max_measured = rep.sizes.iter().map(|s| s.measured).fold(0.0, f64::max);
    rep.lower_bound = Some(lower_bound(kind, bound, poly));
}

/// Everything: coverage, sizes when a kind is given, and the lower bound.
pub fn verify(
    poly: &Polygon,
    pieces: &[Piece],
    kind: Option<(SizeKind, f64)>,
    tol_area: f64,
    tol_size: f64,
) -> Result<VerificationReport, PartitionError> {
    let mut rep = check_partition(poly, pieces, tol_area)?;
    if let Some((k, b)) = kind {
        check_sizes(&mut rep, poly, pieces, k, b, tol_size);
    }
    Ok(rep)
}

/// Counting surrogates for the interior analysis, plus the approximation
/// factor against a known partition of `upper` pieces when one is supplied.
pub fn check_structure(
    boundary: &BoundaryPartition,
    interior: &InteriorPartition,
    delta: f64,
    upper: Option<u64>,
) -> Vec<BoundCheck> {
    let kind = boundary.constraint.kind;
    let bound = boundary.constraint.bound;
    let mut out = Vec::new();
    let q = boundary.pieces.len();
    if q >= 3 {
        out.push(BoundCheck::new("ibi-count", interior.ibis.len() as f64, 3.0 * q as f64 - 6.0));
    }
    if !kind.uses_blowup() {
        let total: f64 = interior.ibis.iter().map(|i| i.length()).sum();
        let rhs = interior.ibis.len() as f64 + total / (delta * bound);
        out.push(BoundCheck::new("fragment-count", interior.fragments.len() as f64, rhs));
    }
    if kind == SizeKind::GeodesicDiameter {
        let worst = interior.subfields.iter().map(|s| geodesic_diameter(&s.shape)).fold(0.0, f64::max);
        let rhs = (2.0 + SQRT_2) * interior.grid.cell + TOL_SIZE * bound;
        out.push(BoundCheck::new("subfield-geodesic-diameter", worst, rhs));
    }
    if let Some(u) = upper {
        let total = (q + interior.piece_count()) as f64;
        out.push(BoundCheck::new("approximation-factor", total, approximation_factor(kind) * u as f64));
    }
    out
}

#[cfg(test)]
mod tests;
