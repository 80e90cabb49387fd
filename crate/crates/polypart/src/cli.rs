//! The `polypart` command line.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use polypart_core::area::area_partition;
use polypart_core::interior::{InteriorConfig, DEFAULT_SEED};
use polypart_core::verify::{check_sizes, check_structure, lower_bound, verify, TOL_AREA_REL, TOL_SIZE};
use polypart_core::{
    estimate, generate, size_partition, PartitionError, Piece, Polygon, SizeConstraint, SizeKind,
};
use thiserror::Error;

use crate::format::{GridRecord, Meta, PartitionFile, PieceRecord, PolygonFile, ReportRecord};
use crate::svg;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_CONFIG: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Verification(_) => EXIT_VERIFY,
            CliError::Config(_) => EXIT_CONFIG,
        }
    }
}

impl From<PartitionError> for CliError {
    fn from(e: PartitionError) -> Self {
        match e {
            PartitionError::Geometry(g) => CliError::Input(g.to_string()),
            PartitionError::Construction(_) => CliError::Verification(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "polypart", version, about = "Partition simple polygons into bounded-size or fixed-area pieces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Partition a polygon and verify the result.
    Partition(PartitionArgs),
    /// Upper bound on the piece count, and a lower bound for any partition.
    Estimate(EstimateArgs),
    /// Re-check a partition file.
    Verify(VerifyArgs),
    /// Write a test polygon.
    Generate(GenerateArgs),
    /// Draw a partition file as SVG.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Args)]
pub struct JobArgs {
    /// aligned-square, rotated-square, disk, straight-diameter,
    /// geodesic-diameter, perimeter or area.
    #[arg(long = "type", value_name = "KIND")]
    pub kind: String,
    /// Piece areas for `--type area`, comma separated; they must sum to the
    /// polygon area.
    #[arg(long, value_delimiter = ',', value_name = "A,B,...")]
    pub areas: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub bound: f64,
    /// Seed for the interior grid offset.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Grid cell size per unit bound (geodesic-diameter and perimeter only).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Fragment length per unit bound (geodesic-diameter and perimeter only).
    #[arg(long)]
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct TolArgs {
    /// Area tolerance relative to the polygon area.
    #[arg(long, default_value_t = TOL_AREA_REL)]
    pub tol_area: f64,
    /// Relative slack on the size bound.
    #[arg(long, default_value_t = TOL_SIZE)]
    pub tol_size: f64,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    /// Polygon JSON: {"polygon": [[x, y], ...]}.
    pub input: PathBuf,
    #[command(flatten)]
    pub job: JobArgs,
    #[command(flatten)]
    pub tol: TolArgs,
    /// Partition JSON destination; stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub job: JobArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Partition JSON as written by `partition`.
    pub partition: PathBuf,
    #[command(flatten)]
    pub tol: TolArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Family {
    Random,
    Spiral,
    Comb,
    Star,
    Rect,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum, default_value_t = Family::Random)]
    pub family: Family,
    #[arg(short, long, default_value_t = 20)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1.0)]
    pub width: f64,
    #[arg(long, default_value_t = 1.0)]
    pub height: f64,
    /// Rescale the result to this area.
    #[arg(long)]
    pub area: Option<f64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    pub partition: PathBuf,
    /// Pixels per unit.
    #[arg(long, default_value_t = svg::DEFAULT_SCALE)]
    pub scale: f64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

pub enum Job {
    Area(Vec<f64>),
    Size(SizeConstraint, InteriorConfig),
}

impl JobArgs {
    pub fn job(&self) -> Result<Job, CliError> {
        if self.kind == "area" {
            if self.areas.is_empty() {
                return Err(CliError::Config("--type area needs --areas".into()));
            }
            if self.gamma.is_some() || self.delta.is_some() {
                return Err(CliError::Config("--gamma/--delta do not apply to area partitions".into()));
            }
            return Ok(Job::Area(self.areas.clone()));
        }
        let kind = SizeKind::parse(&self.kind)
            .ok_or_else(|| CliError::Config(format!("unknown --type {:?}", self.kind)))?;
        if !self.areas.is_empty() {
            return Err(CliError::Config("--areas only applies to --type area".into()));
        }
        if kind.uses_blowup() && (self.gamma.is_some() || self.delta.is_some()) {
            return Err(CliError::Config(format!("--gamma/--delta do not apply to {}", kind.name())));
        }
        let constraint = SizeConstraint::new(kind, self.bound)?;
        let mut config = InteriorConfig::default_for(kind);
        config.seed = self.seed;
        if let Some(g) = self.gamma {
            config.gamma = g;
        }
        if let Some(d) = self.delta {
            config.delta = d;
        }
        config.validate(kind)?;
        Ok(Job::Size(constraint, config))
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::Input(e.to_string()))
        }
    }
}

pub fn read_polygon(path: &Path) -> Result<Polygon, CliError> {
    let f: PolygonFile =
        serde_json::from_str(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let p = f.to_polygon().map_err(|e| CliError::Input(e.to_string()))?;
    if p.reoriented {
        eprintln!("warning: polygon was clockwise and has been reversed");
    }
    Ok(p.polygon)
}

pub fn read_partition(path: &Path) -> Result<PartitionFile, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Runs the job and verifies it; the file is returned even when
/// verification fails so it can still be written out.
pub fn partition(poly: &Polygon, job: &Job, tol: &TolArgs) -> Result<(PartitionFile, Vec<Piece>), CliError> {
    let tol_area = tol.tol_area * poly.area();
    let polygon = PolygonFile::new(poly).polygon;
    match job {
        Job::Area(areas) => {
            let pieces = area_partition(poly, areas)?;
            let rep = verify(poly, &pieces, None, tol_area, tol.tol_size)?;
            let meta = Meta { piece_count: pieces.len(), counts: ReportRecord::new(&rep, None).counts, ..Meta::default() };
            let file = PartitionFile {
                kind: "area".into(),
                bound: None,
                areas: Some(areas.clone()),
                polygon,
                pieces: pieces.iter().map(|p| PieceRecord::new(p, None)).collect(),
                meta,
                report: ReportRecord::new(&rep, None),
            };
            Ok((file, pieces))
        }
        Job::Size(c, config) => {
            let sp = size_partition(poly, *c, config)?;
            let pieces = sp.to_vec();
            let mut rep = verify(poly, &pieces, None, tol_area, tol.tol_size)?;
            check_sizes(&mut rep, poly, &pieces, c.kind, c.bound, tol.tol_size);
            rep.bound_checks = check_structure(&sp.boundary, &sp.interior, config.delta, None);
            let est = if c.kind.uses_blowup() {
                estimate(poly, *c, config)?.estimate
            } else {
                sp.piece_count() as u64
            };
            let report = ReportRecord::new(&rep, Some(tol.tol_size));
            let st = &sp.interior.stats;
            let interior = [
                ("complete", st.complete),
                ("edge_pieces", st.edge_pieces),
                ("chip_pieces", st.chip_pieces),
                ("trivial_fields", st.trivial_fields),
                ("nontrivial_fields", st.nontrivial_fields),
                ("subfields", st.subfields),
                ("fallback_pieces", st.fallback_pieces),
                ("ibis", sp.interior.ibis.len()),
                ("fragments", sp.interior.fragments.len()),
            ]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
            let g = sp.interior.grid;
            let meta = Meta {
                piece_count: pieces.len(),
                counts: report.counts.clone(),
                boundary_intervals: Some(sp.boundary.intervals.len()),
                slivers: Some(sp.boundary.slivers),
                estimate: Some(est),
                lower_bound: Some(lower_bound(c.kind, c.bound, poly)),
                gamma: Some(config.gamma),
                delta: (!c.kind.uses_blowup()).then_some(config.delta),
                seed: Some(config.seed),
                grid: Some(GridRecord { origin: [g.origin.x, g.origin.y], cell: g.cell, attempts: st.grid_attempts }),
                interior,
            };
            let records = pieces.iter().zip(&rep.sizes).map(|(p, s)| PieceRecord::new(p, Some(s.measured))).collect();
            let file = PartitionFile {
                kind: c.kind.name().into(),
                bound: Some(c.bound),
                areas: None,
                polygon,
                pieces: records,
                meta,
                report,
            };
            Ok((file, pieces))
        }
    }
}

fn cmd_partition(a: &PartitionArgs) -> Result<(), CliError> {
    let poly = read_polygon(&a.input)?;
    let job = a.job.job()?;
    let (file, pieces) = partition(&poly, &job, &a.tol)?;
    let text = serde_json::to_string(&file).expect("partition serializes");
    write_out(a.output.as_deref(), &(text + "\n"))?;
    if let Some(p) = &a.svg {
        write_out(Some(p), &svg::render(poly.vertices(), &pieces, svg::DEFAULT_SCALE))?;
    }
    if !file.report.passed {
        return Err(CliError::Verification(summary(&file.report)));
    }
    Ok(())
}

fn summary(r: &ReportRecord) -> String {
    let mut parts = Vec::new();
    if !r.malformed.is_empty() {
        parts.push(format!("{} malformed pieces", r.malformed.len()));
    }
    if r.covered_area_residual > r.tol_area {
        parts.push(format!("area residual {:e}", r.covered_area_residual));
    }
    if r.max_pairwise_overlap > r.tol_area {
        parts.push(format!("overlap {:e}", r.max_pairwise_overlap));
    }
    if r.uncovered_area > r.tol_area {
        parts.push(format!("uncovered {:e}", r.uncovered_area));
    }
    if r.outside_area > r.tol_area {
        parts.push(format!("outside {:e}", r.outside_area));
    }
    if !r.oversized.is_empty() {
        parts.push(format!("{} pieces over the bound", r.oversized.len()));
    }
    for c in r.bound_checks.iter().filter(|c| !c.pass) {
        parts.push(format!("{} {} > {}", c.name, c.lhs, c.rhs));
    }
    parts.join(", ")
}

fn cmd_estimate(a: &EstimateArgs) -> Result<(), CliError> {
    let poly = read_polygon(&a.input)?;
    let Job::Size(c, config) = a.job.job()? else {
        return Err(CliError::Config("estimates need a size kind".into()));
    };
    let e = estimate(&poly, c, &config)?;
    let v = serde_json::json!({
        "kind": c.kind.name(),
        "bound": c.bound,
        "boundary_intervals": e.boundary,
        "estimate": e.estimate,
        "lower_bound": e.lower_bound,
        "constructed": e.constructed,
    });
    write_out(None, &(v.to_string() + "\n"))
}

fn cmd_verify(a: &VerifyArgs) -> Result<(), CliError> {
    let file = read_partition(&a.partition)?;
    let poly = PolygonFile { polygon: file.polygon.clone() }
        .to_polygon()
        .map_err(|e| CliError::Input(e.to_string()))?
        .polygon;
    let pieces = file.pieces().map_err(CliError::Input)?;
    let size = match file.kind.as_str() {
        "area" => None,
        k => {
            let kind = SizeKind::parse(k).ok_or_else(|| CliError::Input(format!("unknown kind {k:?}")))?;
            Some((kind, file.bound.unwrap_or(1.0)))
        }
    };
    let rep = verify(&poly, &pieces, size, a.tol.tol_area * poly.area(), a.tol.tol_size)?;
    let record = ReportRecord::new(&rep, size.map(|_| a.tol.tol_size));
    write_out(None, &(serde_json::to_string(&record).expect("report serializes") + "\n"))?;
    if !record.passed {
        return Err(CliError::Verification(summary(&record)));
    }
    Ok(())
}

fn cmd_generate(a: &GenerateArgs) -> Result<(), CliError> {
    if a.n < 3 && !matches!(a.family, Family::Rect) {
        return Err(CliError::Config("-n must be at least 3".into()));
    }
    let p = match a.family {
        Family::Random => generate::random(a.n, a.seed),
        Family::Spiral => generate::spiral(a.n),
        Family::Comb => generate::comb(a.n),
        Family::Star => generate::star(a.n, a.seed),
        Family::Rect => {
            if !(a.width > 0.0 && a.height > 0.0 && a.width.is_finite() && a.height.is_finite()) {
                return Err(CliError::Config("rectangle sides must be positive".into()));
            }
            generate::rect(a.width, a.height)
        }
    };
    let p = match a.area {
        Some(x) if x > 0.0 && x.is_finite() => generate::scaled_to_area(&p, x),
        Some(_) => return Err(CliError::Config("--area must be positive".into())),
        None => p,
    };
    let text = serde_json::to_string(&PolygonFile::new(&p)).expect("polygon serializes");
    write_out(a.output.as_deref(), &(text + "\n"))
}

fn cmd_render(a: &RenderArgs) -> Result<(), CliError> {
    let file = read_partition(&a.partition)?;
    let pieces = file.pieces().map_err(CliError::Input)?;
    if !(a.scale > 0.0 && a.scale.is_finite()) {
        return Err(CliError::Config("--scale must be positive".into()));
    }
    let poly = crate::format::from_xy(&file.polygon);
    write_out(a.output.as_deref(), &svg::render(&poly, &pieces, a.scale))
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Partition(a) => cmd_partition(a),
        Command::Estimate(a) => cmd_estimate(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Render(a) => cmd_render(a),
    }
}

/// Parse the process arguments, run, and return the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
