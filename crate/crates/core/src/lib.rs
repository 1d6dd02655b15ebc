//! Numerical conformal mapping onto Jordan domains through prescribed
//! boundary points.
//!
//! The crate builds a conformal map `φ` from a domain `Ω_c` onto the upper
//! half-plane (and, after normalization, onto the unit disc) as a composition
//! of elementary slit maps. Three constructions are provided:
//!
//! - the **geodesic** algorithm, composing circular-arc slit maps written with
//!   Möbius transforms, squares and square roots;
//! - the **slit** algorithm, using straight slits whose unzipping maps are
//!   inverted numerically by Newton's method;
//! - the **zipper** algorithm, consuming the data two points at a time with
//!   circular slits.
//!
//! Besides the maps themselves the crate offers conformal welding, the
//! geometric certificates (disc-chains, diamonds, pacmen, spacing and
//! quasicircle constants) under which the geodesic construction is known to
//! converge, and plain-text file formats used by the `zipmap` CLI.
//!
//! All math is generic over [`Real`] (`f32`/`f64`); the aliases at the crate
//! root fix the scalar to `f64`.

pub mod chain;
pub mod complex;
pub mod error;
pub mod io;
pub mod maps;
pub mod newton;
pub mod pipeline;
pub mod scalar;

pub use error::{Result, ZipError};
pub use scalar::Real;

pub use complex::{
    circle_through, hausdorff_distance, real_axis_second_intersection, spherical_distance,
    winding_sign, CircleOrLine, ExtendedComplex, Metric, Mobius, Polyline,
};
pub use newton::{NewtonConfig, RegionLabel};
pub use pipeline::{BranchPolicy, MapPipeline, MapStep, Variant, WeldingSpec};

/// `f64` complex number.
pub type C64 = num_complex::Complex<f64>;
/// Point of the Riemann sphere over `f64`.
pub type Ext64 = ExtendedComplex<f64>;
/// Möbius transform over `f64`.
pub type Mobius64 = Mobius<f64>;
/// Polyline over `f64`.
pub type Polyline64 = Polyline<f64>;
/// Map pipeline over `f64`.
pub type Pipeline = MapPipeline<f64>;
/// Disc-chain over `f64`.
pub type DiscChain64 = chain::DiscChain<f64>;
