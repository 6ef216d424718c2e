//! Integration domains: oriented paths, linear homotopies between paths,
//! plane regions and solids bounded by graphs.

mod homotopy;
mod path;
mod region;
mod solid;

pub use homotopy::{homotopy_at, Homotopy};
pub use path::{CurveSegment, Path, Segment, JOIN_TOL};
pub use region::{boundary_of, Region2D};
pub use solid::{faces_of, Axis, Face, Solid3D};
pub(crate) use solid::eval_planar;
