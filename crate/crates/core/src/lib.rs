//! Moduli spaces of polygons in 3-space and their stable-polygon
//! compactifications.

pub mod cli;
pub mod cone_atlas;
pub mod error;
pub mod exact_chambers;
pub mod partition;
pub mod polygon_realize;
pub mod stable_core;
pub mod strata_cohomology;
pub mod rational;
pub mod subset;

pub use error::{Error, Result};
pub use exact_chambers::{EpsilonAssignment, LengthVector, WallIndex};
pub use subset::Subset;
