//! Static SVG pictures of partitions.

use std::fmt::Write;

use polypart_core::kernel::BBox;
use polypart_core::{Piece, PieceClass, Point};

pub const DEFAULT_SCALE: f64 = 100.0;

pub fn class_color(c: PieceClass) -> &'static str {
    match c {
        PieceClass::Area => "#8ecae6",
        PieceClass::Boundary => "#f4a261",
        PieceClass::Complete => "#a8dadc",
        PieceClass::Incomplete => "#e9c46a",
        PieceClass::TrivialField => "#b5e48c",
        PieceClass::FragmentUnion => "#cdb4db",
    }
}

fn path_data(pts: &[Point], bb: &BBox, scale: f64, margin: f64, out: &mut String) {
    for (k, p) in pts.iter().enumerate() {
        let x = (p.x - bb.min.x) * scale + margin;
        // SVG y grows downwards
        let y = (bb.max.y - p.y) * scale + margin;
        let _ = write!(out, "{}{:.3} {:.3} ", if k == 0 { 'M' } else { 'L' }, x, y);
    }
    out.push('Z');
}

/// One `<path>` per piece in input order, then the polygon outline.
pub fn render(polygon: &[Point], pieces: &[Piece], scale: f64) -> String {
    let bb = BBox::of(polygon);
    let margin = 10.0;
    let w = bb.width() * scale + 2.0 * margin;
    let h = bb.height() * scale + 2.0 * margin;
    let stroke = 0.5;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.3}" height="{h:.3}" viewBox="0 0 {w:.3} {h:.3}">"#
    );
    for p in pieces {
        let mut d = String::new();
        path_data(&p.shape.walk, &bb, scale, margin, &mut d);
        let _ = writeln!(
            s,
            r##"<path class="{}" d="{d}" fill="{}" stroke="#333333" stroke-width="{stroke}"/>"##,
            p.class.name(),
            class_color(p.class)
        );
    }
    let mut d = String::new();
    path_data(polygon, &bb, scale, margin, &mut d);
    let d = d.replace(['M', 'L', 'Z'], "");
    let _ = writeln!(s, r##"<polygon points="{}" fill="none" stroke="#000000" stroke-width="1.5"/>"##, d.trim());
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use polypart_core::WeaklySimplePolygon;

    #[test]
    fn one_path_per_piece() {
        let sq = vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(1.0, 1.0), Point::new(0.0, 1.0)];
        let one = vec![Piece::new(PieceClass::Boundary, WeaklySimplePolygon::new(sq.clone()))];
        let svg = render(&sq, &one, DEFAULT_SCALE);
        assert_eq!(svg.matches("<path").count(), 1);
        assert!(svg.contains(class_color(PieceClass::Boundary)));
        assert!(svg.contains(r#"width="120.000""#));
        assert_eq!(svg, render(&sq, &one, DEFAULT_SCALE));
    }

    #[test]
    fn palette_is_distinct() {
        let mut c: Vec<_> = PieceClass::ALL.iter().map(|&k| class_color(k)).collect();
        c.sort();
        c.dedup();
        assert_eq!(c.len(), PieceClass::ALL.len());
    }
}
