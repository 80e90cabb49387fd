use core::fmt;

use crate::kernel::WeaklySimplePolygon;

/// How a piece was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PieceClass {
    Area,
    Boundary,
    Complete,
    Incomplete,
    TrivialField,
    FragmentUnion,
}

impl PieceClass {
    pub const ALL: [PieceClass; 6] = [
        PieceClass::Area,
        PieceClass::Boundary,
        PieceClass::Complete,
        PieceClass::Incomplete,
        PieceClass::TrivialField,
        PieceClass::FragmentUnion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PieceClass::Area => "area",
            PieceClass::Boundary => "boundary",
            PieceClass::Complete => "complete",
            PieceClass::Incomplete => "incomplete",
            PieceClass::TrivialField => "trivial-field",
            PieceClass::FragmentUnion => "fragment-union",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }
}

impl fmt::Display for PieceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Piece {
    pub class: PieceClass,
    pub shape: WeaklySimplePolygon,
}

impl Piece {
    pub fn new(class: PieceClass, shape: WeaklySimplePolygon) -> Self {
        Piece { class, shape }
    }

    pub fn area(&self) -> f64 {
        self.shape.area()
    }
}
