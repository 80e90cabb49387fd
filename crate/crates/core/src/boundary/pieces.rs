//! Turning boundary intervals into pieces.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::BoundaryInterval;
use crate::constraint::SizeKind;
use crate::error::PartitionError;
use crate::kernel::geodesic::Geodesic;
use crate::kernel::overlay::{OverlayBuilder, Owner, UNBOUNDED};
use crate::kernel::polygon::simplify_walk;
use crate::kernel::{convex_hull, Point, Polygon, WeaklySimplePolygon};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    /// Part of the polygon inside the interval's convex hull, reached from
    /// the interval.
    BlowUp,
    /// Region between the interval and the shortest path joining its ends.
    ShortestPathEnclosure,
    /// The interval itself, a straight piece of one edge.
    TrivialSegment,
}

#[derive(Clone, Debug)]
pub struct BoundaryPiece {
    pub shape: WeaklySimplePolygon,
    pub interval: usize,
    pub construction: Construction,
    pub hull: Option<Vec<Point>>,
}

const POLY_OWNER: Owner = 0;

fn hull_owner(i: usize) -> Owner {
    1 + 2 * i as Owner
}

fn chain_owner(i: usize) -> Owner {
    2 + 2 * i as Owner
}

/// Pieces in interval order, plus the number of non-trivial blow-up pieces
/// that ended up with zero area.
pub fn build_pieces(
    kind: SizeKind,
    poly: &Polygon,
    intervals: &[BoundaryInterval],
    geo: Option<&Geodesic>,
) -> Result<(Vec<BoundaryPiece>, usize), PartitionError> {
    if kind.uses_blowup() {
        blow_up(poly, intervals)
    } else {
        let g = geo.ok_or(PartitionError::Construction("geodesic data missing"))?;
        enclosures(g, intervals).map(|p| (p, 0))
    }
}

fn trivial_piece(i: usize, iv: &BoundaryInterval) -> BoundaryPiece {
    BoundaryPiece {
        shape: WeaklySimplePolygon::new(simplify_walk(iv.chain.clone())),
        interval: i,
        construction: Construction::TrivialSegment,
        hull: None,
    }
}

fn enclosures(g: &Geodesic, intervals: &[BoundaryInterval]) -> Result<Vec<BoundaryPiece>, PartitionError> {
    let mut out = Vec::with_capacity(intervals.len());
    for (i, iv) in intervals.iter().enumerate() {
        if iv.is_trivial() {
            out.push(trivial_piece(i, iv));
            continue;
        }
        let a = iv.chain[0];
        let b = iv.chain[iv.chain.len() - 1];
        let mut walk = iv.chain.clone();
        if a != b {
            let path = g.path(b, a)?;
            let k = path.waypoints.len();
            walk.extend_from_slice(&path.waypoints[1..k - 1]);
        }
        out.push(BoundaryPiece {
            shape: WeaklySimplePolygon::new(simplify_walk(walk)),
            interval: i,
            construction: Construction::ShortestPathEnclosure,
            hull: None,
        });
    }
    Ok(out)
}

fn blow_up(poly: &Polygon, intervals: &[BoundaryInterval]) -> Result<(Vec<BoundaryPiece>, usize), PartitionError> {
    let mut b = OverlayBuilder::new();
    b.add_loop(POLY_OWNER, poly.vertices());
    let mut hulls: Vec<Option<Vec<Point>>> = Vec::with_capacity(intervals.len());
    for (i, iv) in intervals.iter().enumerate() {
        if iv.is_trivial() {
            hulls.push(None);
            continue;
        }
        let h = convex_hull(&iv.chain);
        b.add_loop(hull_owner(i), &h);
        b.add_polyline(chain_owner(i), &iv.chain);
        hulls.push(Some(h));
    }
    let sub = b.build().map_err(|_| PartitionError::Construction("boundary overlay failed"))?;

    let nf = sub.face_count();
    let mut face_edges: Vec<Vec<usize>> = vec![Vec::new(); nf];
    for h in 0..sub.half_edge_count() {
        face_edges[sub.face_of[h]].push(h);
    }
    let mut chain_edges: Vec<Vec<usize>> = vec![Vec::new(); intervals.len()];
    for (e, edge) in sub.edges.iter().enumerate() {
        for o in &edge.owners {
            if o.owner != POLY_OWNER && o.owner % 2 == 0 {
                chain_edges[(o.owner / 2 - 1) as usize].push(e);
            }
        }
    }

    let inside_p = |f: usize| f != UNBOUNDED && sub.winding(f, POLY_OWNER) == 1;
    let mut assigned = vec![false; nf];
    let mut pieces = Vec::with_capacity(intervals.len());
    let mut slivers = 0;
    for (i, iv) in intervals.iter().enumerate() {
        let Some(hull) = hulls[i].take() else {
            pieces.push(trivial_piece(i, iv));
            continue;
        };
        let ho = hull_owner(i);
        let mut region = vec![false; nf];
        let mut queue = VecDeque::new();
        for &e in &chain_edges[i] {
            let (f0, f1) = sub.edge_faces(e);
            for f in [f0, f1] {
                if inside_p(f) && sub.winding(f, ho) == 1 && !assigned[f] && !region[f] {
                    region[f] = true;
                    queue.push_back(f);
                }
            }
        }
        while let Some(f) = queue.pop_front() {
            for &h in &face_edges[f] {
                let e = h / 2;
                if sub.edge_has_owner(e, POLY_OWNER) || sub.edge_has_owner(e, ho) {
                    continue;
                }
                let g = sub.face_of[h ^ 1];
                if g == UNBOUNDED || region[g] || assigned[g] {
                    continue;
                }
                region[g] = true;
                queue.push_back(g);
            }
        }
        let area: f64 = (0..nf).filter(|&f| region[f]).map(|f| sub.faces[f].area).sum();
        if area == 0.0 {
            slivers += 1;
        }
        let walk = sub
            .boundary_walk(&region, &chain_edges[i])
            .map_err(|_| PartitionError::Construction("blow-up piece is not a single patch"))?;
        for f in 0..nf {
            assigned[f] |= region[f];
        }
        pieces.push(BoundaryPiece {
            shape: WeaklySimplePolygon::new(simplify_walk(walk)),
            interval: i,
            construction: Construction::BlowUp,
            hull: Some(hull),
        });
    }
    Ok((pieces, slivers))
}
