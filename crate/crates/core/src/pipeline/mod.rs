//! Composition of elementary maps into a conformal map of a whole domain.

mod boundary;
mod build;
mod eval;
mod step;
mod welding;

use crate::complex::{ExtendedComplex, Mobius};
use crate::error::{Result, ZipError};
use crate::newton::NewtonConfig;
use crate::scalar::Real;

pub use step::{MapStep, Renorm};
pub use welding::WeldingSpec;

/// Which construction produced a pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Geodesic,
    Slit,
    Zipper,
    Welding,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Geodesic => "geodesic",
            Variant::Slit => "slit",
            Variant::Zipper => "zipper",
            Variant::Welding => "welding",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "geodesic" => Some(Variant::Geodesic),
            "slit" => Some(Variant::Slit),
            "zipper" => Some(Variant::Zipper),
            "welding" => Some(Variant::Welding),
            _ => None,
        }
    }
}

/// How multivalued steps pick their branch during forward evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum BranchPolicy<T> {
    /// Points of the interior of the computed domain, mapped into `ℍ`.
    #[default]
    Interior,
    /// Points of the complement, mapped into the lower half-plane.
    Exterior,
    /// Analytic continuation across the boundary: branches are chosen by
    /// continuity along the segment from `seed` to the point.
    Extension { seed: Option<ExtendedComplex<T>> },
}

/// Boundary parameters of a data point after the full composition.
///
/// For closed curves `interior` is the prevertex seen from inside the
/// domain and `exterior` the one seen from the complement (in the lower
/// half-plane picture). For arcs and weldings the two entries are the
/// left and right sides of the curve; they coincide at single points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prevertex<T> {
    pub interior: ExtendedComplex<T>,
    pub exterior: ExtendedComplex<T>,
}

impl<T: Real> Prevertex<T> {
    pub fn single(v: ExtendedComplex<T>) -> Self {
        Prevertex { interior: v, exterior: v }
    }
}

/// A conformal map built as a composition of [`MapStep`]s.
#[derive(Debug, Clone, PartialEq)]
pub struct MapPipeline<T> {
    pub variant: Variant,
    pub steps: Vec<MapStep<T>>,
    pub data_points: Vec<ExtendedComplex<T>>,
    pub prevertices: Vec<Prevertex<T>>,
    /// `+1` when the data run counterclockwise around the domain.
    pub orientation: i32,
    /// `false` for arcs through `∞` and for weldings.
    pub bounded: bool,
    pub newton: NewtonConfig<T>,
}

impl<T: Real> MapPipeline<T> {
    /// Whether the last step sends the half-plane onto the disc.
    pub fn is_normalized(&self) -> bool {
        matches!(self.steps.last(), Some(MapStep::MobiusNormalize(_)))
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Replace the Newton settings used by slit steps.
    pub fn with_newton(mut self, cfg: NewtonConfig<T>) -> Result<Self> {
        cfg.validate()?;
        self.newton = cfg;
        Ok(self)
    }

    pub(crate) fn data_index(&self, z: ExtendedComplex<T>) -> Option<usize> {
        self.data_points.iter().position(|&p| p == z)
    }

    /// Append a Möbius map of `ℍ` onto the unit disc sending the image of
    /// `interior` to `0` and the data point `boundary_fix` to `1`.
    pub fn normalize_to_disc(
        &self,
        interior: num_complex::Complex<T>,
        boundary_fix: num_complex::Complex<T>,
    ) -> Result<Self> {
        if self.is_normalized() {
            return Err(ZipError::Precondition("pipeline is already normalized".into()));
        }
        let w0 = self
            .eval_forward(interior.into(), BranchPolicy::Interior)?
            .finite()
            .filter(|w| w.im > T::zero())
            .ok_or_else(|| ZipError::Domain(format!("{interior} does not map into the upper half-plane")))?;
        let fix = match self.data_index(boundary_fix.into()) {
            Some(j) => self.prevertices[j].interior,
            None => {
                let v = self.eval_forward(boundary_fix.into(), BranchPolicy::Interior)?;
                match v {
                    ExtendedComplex::Finite(w) => ExtendedComplex::real(w.re),
                    inf => inf,
                }
            }
        };
        let m = Mobius::half_plane_to_disc(w0, fix)?;
        let mut out = self.clone();
        for pv in &mut out.prevertices {
            pv.interior = m.apply(pv.interior);
            pv.exterior = m.apply(pv.exterior);
        }
        out.steps.push(MapStep::MobiusNormalize(m));
        Ok(out)
    }
}
