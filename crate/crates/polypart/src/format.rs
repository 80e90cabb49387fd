//! JSON files read and written by the command line tool.
//!
//! Coordinates go through `serde_json`'s shortest round-trip float
//! formatting, so a written partition reads back bit for bit.

use std::collections::BTreeMap;

use polypart_core::verify::VerificationReport;
use polypart_core::{GeometryError, Piece, PieceClass, Point, Polygon, WeaklySimplePolygon};
use serde::{Deserialize, Serialize};

pub type Xy = [f64; 2];

pub fn to_xy(pts: &[Point]) -> Vec<Xy> {
    pts.iter().map(|p| [p.x, p.y]).collect()
}

pub fn from_xy(pts: &[Xy]) -> Vec<Point> {
    pts.iter().map(|&[x, y]| Point::new(x, y)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolygonFile {
    pub polygon: Vec<Xy>,
}

/// An input polygon as given and whether it had to be reversed.
pub struct InputPolygon {
    pub polygon: Polygon,
    pub reoriented: bool,
}

impl PolygonFile {
    pub fn new(p: &Polygon) -> Self {
        PolygonFile { polygon: to_xy(p.vertices()) }
    }

    /// Input coordinates are used as given, without snapping.
    pub fn to_polygon(&self) -> Result<InputPolygon, GeometryError> {
        let pts = from_xy(&self.polygon);
        let reoriented = polypart_core::kernel::polygon::signed_area(&pts) < 0.0;
        let polygon = Polygon::with_snapping(pts, false)?;
        Ok(InputPolygon { polygon, reoriented })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PieceRecord {
    pub class: String,
    pub vertices: Vec<Xy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measured_size: Option<f64>,
}

impl PieceRecord {
    pub fn new(p: &Piece, measured_size: Option<f64>) -> Self {
        PieceRecord { class: p.class.name().to_string(), vertices: to_xy(&p.shape.walk), measured_size }
    }

    pub fn to_piece(&self) -> Option<Piece> {
        let class = PieceClass::parse(&self.class)?;
        Some(Piece::new(class, WeaklySimplePolygon::new(from_xy(&self.vertices))))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GridRecord {
    pub origin: Xy,
    pub cell: f64,
    pub attempts: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub piece_count: usize,
    pub counts: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_intervals: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slivers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimate: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridRecord>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub interior: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheckRecord {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MalformedRecord {
    pub index: usize,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub passed: bool,
    pub covered_area_residual: f64,
    pub max_pairwise_overlap: f64,
    pub uncovered_area: f64,
    pub outside_area: f64,
    pub tol_area: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_size: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_measured_size: Option<f64>,
    /// Indices of pieces over the size bound.
    pub oversized: Vec<usize>,
    pub malformed: Vec<MalformedRecord>,
    pub counts: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<u64>,
    pub bound_checks: Vec<BoundCheckRecord>,
}

impl ReportRecord {
    pub fn new(r: &VerificationReport, tol_size: Option<f64>) -> Self {
        ReportRecord {
            passed: r.passed(),
            covered_area_residual: r.covered_area_residual,
            max_pairwise_overlap: r.max_pairwise_overlap,
            uncovered_area: r.uncovered_area,
            outside_area: r.outside_area,
            tol_area: r.tol_area,
            tol_size,
            max_measured_size: (!r.sizes.is_empty()).then_some(r.max_measured),
            oversized: r.sizes.iter().enumerate().filter(|(_, s)| !s.pass).map(|(i, _)| i).collect(),
            malformed: r
                .malformed
                .iter()
                .map(|m| MalformedRecord { index: m.index, reason: m.reason.to_string() })
                .collect(),
            counts: r.counts.iter().map(|(c, &n)| (c.name().to_string(), n)).collect(),
            lower_bound: r.lower_bound,
            bound_checks: r
                .bound_checks
                .iter()
                .map(|c| BoundCheckRecord { name: c.name.to_string(), lhs: c.lhs, rhs: c.rhs, pass: c.pass })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionFile {
    /// A size kind name or `area`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub areas: Option<Vec<f64>>,
    pub polygon: Vec<Xy>,
    pub pieces: Vec<PieceRecord>,
    pub meta: Meta,
    pub report: ReportRecord,
}

impl PartitionFile {
    pub fn pieces(&self) -> Result<Vec<Piece>, String> {
        self.pieces
            .iter()
            .enumerate()
            .map(|(i, r)| r.to_piece().ok_or_else(|| format!("piece {i} has unknown class {:?}", r.class)))
            .collect()
    }
}
