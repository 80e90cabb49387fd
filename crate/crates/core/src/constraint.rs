//! The six size constraints and how a boundary chain is measured against them.

use alloc::vec::Vec;
use core::fmt;

use crate::error::PartitionError;
use crate::kernel::disk::min_enclosing_disk;
use crate::kernel::geodesic::Geodesic;
use crate::kernel::hull::{aligned_square_side, min_square_over_rotations, straight_diameter};
use crate::kernel::{Point, Polygon};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SizeKind {
    AlignedSquare,
    RotatedSquare,
    Disk,
    StraightDiameter,
    GeodesicDiameter,
    Perimeter,
}

impl SizeKind {
    pub const ALL: [SizeKind; 6] = [
        SizeKind::AlignedSquare,
        SizeKind::RotatedSquare,
        SizeKind::Disk,
        SizeKind::StraightDiameter,
        SizeKind::GeodesicDiameter,
        SizeKind::Perimeter,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SizeKind::AlignedSquare => "aligned-square",
            SizeKind::RotatedSquare => "rotated-square",
            SizeKind::Disk => "disk",
            SizeKind::StraightDiameter => "straight-diameter",
            SizeKind::GeodesicDiameter => "geodesic-diameter",
            SizeKind::Perimeter => "perimeter",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    /// Boundary pieces come from blowing intervals up inside their hulls.
    pub fn uses_blowup(self) -> bool {
        !matches!(self, SizeKind::GeodesicDiameter | SizeKind::Perimeter)
    }

    /// Longest straight segment with direction `d` satisfying the bound.
    pub fn segment_limit(self, bound: f64, d: Point) -> f64 {
        match self {
            SizeKind::AlignedSquare => {
                let len = d.norm();
                let m = libm::fabs(d.x).max(libm::fabs(d.y));
                if m == 0.0 {
                    bound
                } else {
                    bound * len / m
                }
            }
            SizeKind::RotatedSquare => bound * core::f64::consts::SQRT_2,
            SizeKind::Disk => 2.0 * bound,
            SizeKind::StraightDiameter | SizeKind::GeodesicDiameter => bound,
            SizeKind::Perimeter => bound / 2.0,
        }
    }
}

impl fmt::Display for SizeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SizeConstraint {
    pub kind: SizeKind,
    pub bound: f64,
}

impl SizeConstraint {
    pub fn new(kind: SizeKind, bound: f64) -> Result<Self, PartitionError> {
        if !(bound.is_finite() && bound > 0.0) {
            return Err(PartitionError::BadBound(bound));
        }
        Ok(SizeConstraint { kind, bound })
    }

    pub fn unit(kind: SizeKind) -> Self {
        SizeConstraint { kind, bound: 1.0 }
    }
}

/// Size of the smallest shape of the given kind containing the points; only
/// meaningful for the four containment kinds.
pub fn containment_measure(kind: SizeKind, pts: &[Point]) -> f64 {
    match kind {
        SizeKind::AlignedSquare => aligned_square_side(pts),
        SizeKind::RotatedSquare => min_square_over_rotations(pts).1,
        SizeKind::Disk => min_enclosing_disk(pts).radius,
        SizeKind::StraightDiameter => straight_diameter(pts),
        SizeKind::GeodesicDiameter | SizeKind::Perimeter => {
            unreachable!("{} is not a containment kind", kind.name())
        }
    }
}

/// Measures a boundary chain of one polygon against a constraint.
#[derive(Clone, Debug)]
pub struct ChainMeasure {
    pub constraint: SizeConstraint,
    geo: Option<Geodesic>,
}

impl ChainMeasure {
    pub fn new(constraint: SizeConstraint, poly: &Polygon) -> Self {
        let geo = (!constraint.kind.uses_blowup()).then(|| Geodesic::new(poly));
        ChainMeasure { constraint, geo }
    }

    pub fn geodesic(&self) -> Option<&Geodesic> {
        self.geo.as_ref()
    }

    /// Size of the best piece covering the chain. For the two path kinds the
    /// piece is the region between the chain and the shortest path joining
    /// its ends; that region is geodesically convex in the polygon and its
    /// diameter is attained at chain points.
    pub fn measure(&self, chain: &[Point]) -> f64 {
        match self.constraint.kind {
            SizeKind::GeodesicDiameter => {
                let g = self.geo.as_ref().unwrap();
                g.max_pairwise(chain).expect("chain lies on the polygon boundary")
            }
            SizeKind::Perimeter => {
                let g = self.geo.as_ref().unwrap();
                let open: f64 = chain.windows(2).map(|w| w[0].dist(w[1])).sum();
                let close = g
                    .distance(chain[0], chain[chain.len() - 1])
                    .expect("chain lies on the polygon boundary");
                open + close
            }
            kind => containment_measure(kind, chain),
        }
    }

    pub fn feasible(&self, chain: &[Point]) -> bool {
        self.measure(chain) <= self.constraint.bound
    }
}

/// Collect chain points, skipping immediate repeats.
pub(crate) fn push_point(chain: &mut Vec<Point>, p: Point) {
    if chain.last() != Some(&p) {
        chain.push(p);
    }
}
