//! Interior boundary intervals and their fragments.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::error::PartitionError;
use crate::kernel::overlay::{OverlayBuilder, Owner, PlanarSubdivision, UNBOUNDED};
use crate::kernel::{Point, Polygon, WeaklySimplePolygon};

/// A maximal part of one boundary piece's boundary that faces the uncovered
/// interior and touches no other boundary piece except at its ends.
#[derive(Clone, Debug, PartialEq)]
pub struct InteriorBoundaryInterval {
    pub piece: usize,
    /// Traversed with the uncovered region on the right.
    pub chain: Vec<Point>,
}

impl InteriorBoundaryInterval {
    pub fn length(&self) -> f64 {
        chain_length(&self.chain)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fragment {
    pub ibi: usize,
    pub chain: Vec<Point>,
}

impl Fragment {
    pub fn length(&self) -> f64 {
        chain_length(&self.chain)
    }
}

pub fn chain_length(c: &[Point]) -> f64 {
    c.windows(2).map(|w| w[0].dist(w[1])).sum()
}

const POLY: Owner = 0;

fn piece_owner(i: usize) -> Owner {
    1 + i as Owner
}

/// Faces inside the polygon and outside every piece.
fn free_faces(sub: &PlanarSubdivision) -> Vec<bool> {
    sub.faces
        .iter()
        .enumerate()
        .map(|(f, face)| {
            f != UNBOUNDED
                && face.winding.iter().all(|&(o, w)| if o == POLY { w == 1 } else { w == 0 })
                && face.winding.iter().any(|&(o, w)| o == POLY && w == 1)
        })
        .collect()
}

pub fn compute_ibis(
    poly: &Polygon,
    pieces: &[WeaklySimplePolygon],
) -> Result<Vec<InteriorBoundaryInterval>, PartitionError> {
    let mut b = OverlayBuilder::new();
    b.add_loop(POLY, poly.vertices());
    for (i, p) in pieces.iter().enumerate() {
        b.add_loop(piece_owner(i), &p.walk);
    }
    let sub = b.build().map_err(|_| PartitionError::Construction("boundary piece overlay failed"))?;
    let free = free_faces(&sub);

    // directed edges per piece, uncovered side on the right
    let mut per_piece: Vec<Vec<(usize, usize)>> = vec![Vec::new(); pieces.len()];
    for (e, edge) in sub.edges.iter().enumerate() {
        let (left, right) = sub.edge_faces(e);
        if free[left] == free[right] {
            continue;
        }
        let (u, v) = if free[left] { (edge.v[1], edge.v[0]) } else { (edge.v[0], edge.v[1]) };
        for o in &edge.owners {
            if o.owner != POLY {
                per_piece[(o.owner - 1) as usize].push((u, v));
            }
        }
    }

    // vertices where something other than the piece itself arrives
    let mut foreign: HashMap<usize, Vec<Owner>> = HashMap::new();
    for edge in &sub.edges {
        for o in &edge.owners {
            for v in edge.v {
                let list = foreign.entry(v).or_default();
                if !list.contains(&o.owner) {
                    list.push(o.owner);
                }
            }
        }
    }
    let touched_by_other = |v: usize, me: Owner| foreign.get(&v).is_some_and(|l| l.iter().any(|&o| o != me));

    let mut out = Vec::new();
    for (i, edges) in per_piece.iter().enumerate() {
        if edges.is_empty() {
            continue;
        }
        let me = piece_owner(i);
        let mut outgoing: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut indeg: HashMap<usize, usize> = HashMap::new();
        for (k, &(u, v)) in edges.iter().enumerate() {
            outgoing.entry(u).or_default().push(k);
            *indeg.entry(v).or_default() += 1;
        }
        let is_break = |v: usize| {
            touched_by_other(v, me)
                || indeg.get(&v).copied().unwrap_or(0) != 1
                || outgoing.get(&v).map_or(0, |l| l.len()) != 1
        };
        let mut used = vec![false; edges.len()];
        let mut starts: Vec<usize> = (0..edges.len()).filter(|&k| is_break(edges[k].0)).collect();
        // closed loops without a break get one from their lex-min vertex
        starts.extend(0..edges.len());
        for s in starts {
            if used[s] {
                continue;
            }
            let mut chain = vec![sub.vertices[edges[s].0]];
            let mut k = s;
            loop {
                used[k] = true;
                let v = edges[k].1;
                chain.push(sub.vertices[v]);
                if is_break(v) {
                    break;
                }
                let next = outgoing[&v][0];
                if used[next] {
                    break;
                }
                k = next;
            }
            out.push(InteriorBoundaryInterval { piece: i, chain });
        }
    }
    Ok(out)
}

/// Cut each interval into the fewest pieces of length at most `delta`,
/// splitting every time a prefix of length `delta` has been traversed.
pub fn split_fragments(ibis: &[InteriorBoundaryInterval], delta: f64) -> Vec<Fragment> {
    let mut out = Vec::new();
    for (k, ibi) in ibis.iter().enumerate() {
        let total = ibi.length();
        let count = fragment_count(total, delta);
        let mut cur = vec![ibi.chain[0]];
        let mut pos = 0.0;
        let mut made = 0;
        for w in ibi.chain.windows(2) {
            let (a, b) = (w[0], w[1]);
            let len = a.dist(b);
            while made + 1 < count && (made + 1) as f64 * delta < pos + len {
                let p = a.lerp(b, ((made + 1) as f64 * delta - pos) / len);
                cur.push(p);
                out.push(Fragment { ibi: k, chain: core::mem::replace(&mut cur, vec![p]) });
                made += 1;
            }
            if cur.last() != Some(&b) {
                cur.push(b);
            }
            pos += len;
        }
        out.push(Fragment { ibi: k, chain: cur });
    }
    out
}

pub fn fragment_count(length: f64, delta: f64) -> usize {
    let q = length / delta;
    let c = libm::ceil(q - 1e-9 * q.max(1.0));
    (c as usize).max(1)
}
