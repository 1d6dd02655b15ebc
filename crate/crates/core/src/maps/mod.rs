//! Closed-form building blocks: geodesic, straight and circular slit maps,
//! and the maps that open the first curve and close the last one.

pub mod circular;
pub mod geodesic;
pub mod initial;
pub mod slit;
pub mod terminal;

pub use circular::CircularSlitParams;
pub use geodesic::{GeodesicBranch, GeodesicParams};
pub use initial::InitialMap;
pub use slit::{SlitParams, SlitSide};
pub use terminal::{Sector, TerminalMap};
