//! Geometric certificates for the geodesic construction: disc-chains,
//! diamonds and pacmen, and the constants measuring how regular a set of
//! data points is.

mod diamond;
mod discs;
mod metrics;
mod whitney;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::scalar::Real;

pub use diamond::{curve_in_diamonds, diamond_chain, pacman_condition, Diamond, Pacman};
pub use discs::{curve_in_chain, polygon_disc_chain, tangency_points, validate_disc_chain};
pub use metrics::{
    mesh_size, neighborhood_separation_check, quasicircle_constant, spacing_constant, tangent_deviation,
    turning_angle_check,
};
pub use whitney::whitney_disc_chain;

/// Default constant `C₁` in the pacman radius `C₁|z_{k+1} − z_k|/ε²`.
pub const DEFAULT_C1: f64 = 8.0;
/// Default threshold `ε₀` below which the pacman certificate is meaningful.
pub const DEFAULT_EPS0: f64 = 0.1;
/// Default relative slack used when comparing distances in a chain.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// An open disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disc<T> {
    pub center: Complex<T>,
    pub radius: T,
}

impl<T: Real> Disc<T> {
    pub fn new(center: Complex<T>, radius: T) -> Self {
        Disc { center, radius }
    }
}

/// Sequence of pairwise disjoint discs, each tangent to the next.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscChain<T> {
    pub discs: Vec<Disc<T>>,
    /// Whether the last disc is tangent to the first.
    pub closed: bool,
    /// Relative slack, multiplied by the chain's diameter.
    pub tolerance: T,
}

impl<T: Real> DiscChain<T> {
    pub fn new(discs: Vec<Disc<T>>, closed: bool) -> Self {
        DiscChain { discs, closed, tolerance: T::lit(DEFAULT_TOLERANCE) }
    }

    pub fn len(&self) -> usize {
        self.discs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.discs.is_empty()
    }

    /// Diameter of the union of the discs' bounding boxes.
    pub fn scale(&self) -> T {
        let mut lo = Complex::new(T::infinity(), T::infinity());
        let mut hi = Complex::new(T::neg_infinity(), T::neg_infinity());
        for d in &self.discs {
            lo.re = lo.re.min(d.center.re - d.radius);
            lo.im = lo.im.min(d.center.im - d.radius);
            hi.re = hi.re.max(d.center.re + d.radius);
            hi.im = hi.im.max(d.center.im + d.radius);
        }
        if self.discs.is_empty() {
            T::one()
        } else {
            (hi - lo).norm()
        }
    }

    /// Number of tangencies: one per consecutive pair, wrapping if closed.
    pub fn links(&self) -> usize {
        match self.discs.len() {
            0 => 0,
            n if self.closed => n,
            n => n - 1,
        }
    }
}

/// What a [`Violation`] is about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// Two discs overlap; magnitude is the overlap depth.
    Overlap,
    /// Consecutive discs are not tangent; magnitude is the signed gap.
    Gap,
    /// A diamond meets a pacman; magnitude is the penetration depth.
    PacmanIntersection,
    /// The polygon turns too sharply; magnitude is the turning angle.
    TurningAngle,
    /// A curve point lies outside the cover; magnitude is its distance to it.
    NotContained,
    /// The curve re-enters a neighborhood; magnitude is the distance of the
    /// re-entering segment from the center.
    Fold,
    /// A radius is not positive or a center is not finite.
    Degenerate,
}

/// One failed check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub indices: Vec<usize>,
    pub magnitude: f64,
}

/// Outcome of a validator: `ok` exactly when `violations` is empty.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ChainReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ChainReport {
    pub fn from_violations(violations: Vec<Violation>) -> Self {
        ChainReport { ok: violations.is_empty(), violations }
    }

    pub(crate) fn push<T: Real>(&mut self, kind: ViolationKind, indices: Vec<usize>, magnitude: T) {
        self.violations.push(Violation { kind, indices, magnitude: magnitude.as_f64() });
        self.ok = false;
    }

    /// Combine two reports.
    pub fn merge(mut self, other: ChainReport) -> Self {
        self.violations.extend(other.violations);
        self.ok = self.violations.is_empty();
        self
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

pub(crate) fn ok_report() -> ChainReport {
    ChainReport { ok: true, violations: Vec::new() }
}
