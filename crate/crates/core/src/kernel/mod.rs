//! Geometric primitives shared by every partition algorithm.

pub mod disk;
pub mod geodesic;
pub mod hull;
pub mod overlay;
pub mod point;
pub mod triangulate;
pub mod visibility;
pub mod polygon;
pub mod predicates;

pub use disk::{min_enclosing_disk, Disk};
pub use hull::{convex_hull, straight_diameter, OrientedSquare};
pub use point::{BBox, Point};
pub use polygon::{Containment, Polygon, WeaklySimplePolygon};
pub use predicates::{orient, Orientation};
