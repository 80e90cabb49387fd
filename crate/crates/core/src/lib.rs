#![no_std]

extern crate alloc;

pub mod area;
pub mod boundary;
pub mod constraint;
pub mod error;
pub mod generate;
pub mod interior;
pub mod kernel;
pub mod partition;
pub mod piece;
pub mod verify;

pub use error::{GeometryError, PartitionError};
pub use kernel::{Point, Polygon, WeaklySimplePolygon};
pub use constraint::{SizeConstraint, SizeKind};
pub use piece::{Piece, PieceClass};
pub use partition::{estimate, size_partition, Estimate, SizePartition};
