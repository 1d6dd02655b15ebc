//! Extended complex arithmetic, Möbius transforms, branch-managed roots and
//! the small amount of plane geometry the rest of the crate relies on.

mod branch;
mod extended;
pub(crate) mod geometry;
mod mobius;
mod polyline;

pub use branch::{arg_upper, log_branch, pow_branch, sqrt_right, sqrt_upper, Branch};
pub(crate) use branch::{expm1, log1p};
pub use extended::ExtendedComplex;
pub use geometry::{
    circle_through, real_axis_second_intersection, signed_area2, spherical_distance, winding_sign,
    CircleOrLine,
};
pub use mobius::Mobius;
pub(crate) use mobius::{pole_map, pole_map_inv};
pub use polyline::{hausdorff_distance, Metric, Polyline};
