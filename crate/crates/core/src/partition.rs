//! End-to-end size-constrained partitions and piece-count estimates.

use alloc::vec::Vec;

use crate::boundary::{default_start, estimate_boundary_count, greedy_boundary, BoundaryPartition};
use crate::constraint::{SizeConstraint, SizeKind};
use crate::error::PartitionError;
use crate::interior::{interior_partition, InteriorConfig, InteriorPartition};
use crate::kernel::Polygon;
use crate::piece::{Piece, PieceClass};
use crate::verify::lower_bound;

#[derive(Clone, Debug)]
pub struct SizePartition {
    pub constraint: SizeConstraint,
    pub config: InteriorConfig,
    pub boundary: BoundaryPartition,
    pub interior: InteriorPartition,
}

impl SizePartition {
    pub fn piece_count(&self) -> usize {
        self.boundary.pieces.len() + self.interior.piece_count()
    }

    /// Boundary pieces in construction order, then interior pieces.
    pub fn pieces(&self) -> impl Iterator<Item = Piece> + '_ {
        self.boundary
            .pieces
            .iter()
            .map(|p| Piece::new(PieceClass::Boundary, p.shape.clone()))
            .chain(self.interior.all_pieces())
    }

    pub fn to_vec(&self) -> Vec<Piece> {
        self.pieces().collect()
    }
}

pub fn size_partition(
    poly: &Polygon,
    constraint: SizeConstraint,
    config: &InteriorConfig,
) -> Result<SizePartition, PartitionError> {
    config.validate(constraint.kind)?;
    let boundary = greedy_boundary(constraint, poly, default_start(poly))?;
    let interior = interior_partition(poly, &boundary, config)?;
    Ok(SizePartition { constraint, config: *config, boundary, interior })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Estimate {
    /// Number of greedy boundary intervals.
    pub boundary: usize,
    pub estimate: u64,
    pub lower_bound: u64,
    /// The estimate counts an actual interior construction rather than
    /// applying a proven multiplier.
    pub constructed: bool,
}

/// Upper bound on the pieces the construction emits. The path kinds have no
/// closed-form multiplier and run the interior construction instead.
pub fn estimate(
    poly: &Polygon,
    constraint: SizeConstraint,
    config: &InteriorConfig,
) -> Result<Estimate, PartitionError> {
    let kind = constraint.kind;
    let lb = lower_bound(kind, constraint.bound, poly);
    let xb = estimate_boundary_count(constraint, poly, default_start(poly))?;
    let x = xb as f64;
    let multiplied = |m: f64| Some(libm::ceil(m * x) as u64);
    let closed = match kind {
        SizeKind::AlignedSquare => multiplied(13.0 / 2.0),
        SizeKind::RotatedSquare => multiplied(21.0 / 2.0),
        SizeKind::Disk | SizeKind::StraightDiameter => multiplied(10.0 + core::f64::consts::PI / 4.0),
        SizeKind::GeodesicDiameter | SizeKind::Perimeter => None,
    };
    let (estimate, constructed) = match closed {
        Some(e) => (e, false),
        None => {
            config.validate(kind)?;
            let boundary = greedy_boundary(constraint, poly, default_start(poly))?;
            let interior = interior_partition(poly, &boundary, config)?;
            ((boundary.pieces.len() + interior.piece_count()) as u64, true)
        }
    };
    Ok(Estimate { boundary: xb, estimate, lower_bound: lb, constructed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    #[test]
    fn unit_square_estimate() {
        let p = generate::rect(1.0, 1.0);
        let c = SizeConstraint::unit(SizeKind::AlignedSquare);
        let cfg = InteriorConfig::default_for(SizeKind::AlignedSquare);
        let e = estimate(&p, c, &cfg).unwrap();
        assert_eq!(e.boundary, 1);
        assert_eq!(e.estimate, 7);
        assert_eq!(e.lower_bound, 1);
        assert_eq!(size_partition(&p, c, &cfg).unwrap().piece_count(), 1);
    }

    #[test]
    fn estimates_cover_constructions() {
        for seed in 0..6 {
            let p = generate::scaled_to_area(&generate::random(30, seed), 25.0);
            for kind in SizeKind::ALL {
                let c = SizeConstraint::unit(kind);
                let cfg = InteriorConfig::default_for(kind);
                let e = estimate(&p, c, &cfg).unwrap();
                let n = size_partition(&p, c, &cfg).unwrap().piece_count() as u64;
                assert!(e.estimate >= n, "{kind:?} seed {seed}: {} < {n}", e.estimate);
                assert!(e.estimate >= e.lower_bound);
            }
        }
    }
}
