use num_complex::Complex;

use crate::complex::{pole_map, pole_map_inv, sqrt_upper, ExtendedComplex, Mobius};
use crate::error::{Result, ZipError};
use crate::maps::{
    CircularSlitParams, GeodesicBranch, GeodesicParams, InitialMap, SlitParams, SlitSide,
    TerminalMap,
};
use crate::newton::NewtonConfig;
use crate::scalar::Real;

/// One elementary map of a composition. `forward` carries the current
/// domain towards the half-plane; `inverse` goes back.
#[derive(Debug, Clone, PartialEq)]
pub enum MapStep<T> {
    Initial(InitialMap<T>),
    /// `f_a` followed by a [`Renorm`].
    GeodesicSlit { map: GeodesicParams<T>, renorm: Renorm<T> },
    StraightSlit(SlitParams<T>),
    /// `h_{a,c}` followed by a [`Renorm`].
    CircularSlit { map: CircularSlitParams<T>, renorm: Renorm<T> },
    Terminal(TerminalMap<T>),
    /// Möbius map of the half-plane onto the disc.
    MobiusNormalize(Mobius<T>),
    /// Welding of `[y, 0]` to `[0, x]`: the inverse direction is
    /// `(z − x)^p (z − y)^{1−p}` with `p = x/(x − y)`.
    WeldSlit { x: T, y: T },
    /// Closing map of a welding: the inverse direction is `z²`.
    SqrtUpper,
}

/// Real Möbius map `w ↦ w/((1 − w/pole)·scale)` applied after a slit map.
///
/// `pole` is the image of `∞`, so the composite fixes `∞`; `scale` keeps the
/// freshly opened segment at unit size. Both preserve `ℍ` and `0`, so the
/// unzipped arcs are unchanged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Renorm<T> {
    pub pole: Option<T>,
    pub scale: T,
}

impl<T: Real> Renorm<T> {
    pub fn identity() -> Self {
        Renorm { pole: None, scale: T::one() }
    }

    pub fn apply(&self, w: ExtendedComplex<T>) -> ExtendedComplex<T> {
        match w {
            ExtendedComplex::Infinity => match self.pole {
                Some(p) => ExtendedComplex::real(-p / self.scale),
                None => ExtendedComplex::Infinity,
            },
            ExtendedComplex::Finite(w) => match pole_map(w, self.pole) {
                ExtendedComplex::Finite(u) => ExtendedComplex::Finite(u / self.scale),
                inf => inf,
            },
        }
    }

    pub fn invert(&self, u: ExtendedComplex<T>) -> ExtendedComplex<T> {
        match u {
            ExtendedComplex::Finite(u) => pole_map_inv(ExtendedComplex::Finite(u * self.scale), self.pole),
            inf => pole_map_inv(inf, self.pole),
        }
    }

    fn real(&self, x: T) -> T {
        self.apply(ExtendedComplex::real(x)).finite().map_or(T::infinity(), |w| w.re)
    }

    /// Renormalization fixing `∞` given `s = f(∞)`, scaled so that the base
    /// split `(l, r)` has unit half-width.
    fn fixing(s: ExtendedComplex<T>, l: T, r: T) -> Self {
        let pole = s.finite().map(|s| s.re);
        let partial = Renorm { pole, scale: T::one() };
        let width = (partial.real(r) - partial.real(l)) / (T::one() + T::one());
        Renorm { pole, scale: if width > T::zero() && width.is_finite() { width } else { T::one() } }
    }
}

impl<T: Real> MapStep<T> {
    /// Short tag used in documents and diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            MapStep::Initial(InitialMap::Geodesic { .. }) => "initial_geodesic",
            MapStep::Initial(InitialMap::Zipper { .. }) => "initial_zipper",
            MapStep::Initial(InitialMap::Unbounded { .. }) => "initial_unbounded",
            MapStep::GeodesicSlit { .. } => "geodesic_slit",
            MapStep::StraightSlit(_) => "straight_slit",
            MapStep::CircularSlit { .. } => "circular_slit",
            MapStep::Terminal(t) if t.theta == T::FRAC_PI_2() => "terminal_geodesic",
            MapStep::Terminal(_) => "terminal_zipper",
            MapStep::MobiusNormalize(_) => "mobius_normalize",
            MapStep::WeldSlit { .. } => "weld_slit",
            MapStep::SqrtUpper => "sqrt_upper",
        }
    }

    /// Geodesic step for the tip `a`, renormalized to fix `∞`.
    pub fn geodesic(a: Complex<T>) -> Result<Self> {
        let map = GeodesicParams::new(a)?;
        let renorm = Renorm::fixing(map.forward(ExtendedComplex::Infinity), -map.c, map.c);
        Ok(MapStep::GeodesicSlit { map, renorm })
    }

    /// Circular step for the tip `a` and intermediate point `c`,
    /// renormalized to fix `∞`.
    pub fn circular(a: Complex<T>, c: Complex<T>, cfg: &NewtonConfig<T>) -> Result<Self> {
        let map = CircularSlitParams::new(a, c)?;
        let s = map.forward(ExtendedComplex::Infinity, cfg)?;
        let renorm = Renorm::fixing(s, map.inner.p - T::one(), map.inner.p);
        Ok(MapStep::CircularSlit { map, renorm })
    }

    pub(crate) fn weld_params(x: T, y: T) -> Result<SlitParams<T>> {
        SlitParams::unnormalized(x / (x - y))
    }

    pub fn forward(
        &self,
        z: ExtendedComplex<T>,
        exterior: bool,
        cfg: &NewtonConfig<T>,
    ) -> Result<ExtendedComplex<T>> {
        Ok(match self {
            MapStep::Initial(m) => m.forward(z),
            MapStep::GeodesicSlit { map, renorm } => refix(z, renorm, |z| Ok(map.forward(z)))?,
            MapStep::StraightSlit(s) => s.inverse(z, cfg)?,
            MapStep::CircularSlit { map, renorm } => refix(z, renorm, |z| map.forward(z, cfg))?,
            MapStep::Terminal(t) => t.forward(z, exterior)?,
            MapStep::MobiusNormalize(m) => m.apply(z),
            MapStep::WeldSlit { x, y } => {
                let sp = Self::weld_params(*x, *y)?;
                let width = *x - *y;
                match z {
                    ExtendedComplex::Infinity => ExtendedComplex::Infinity,
                    ExtendedComplex::Finite(w) => {
                        let u = sp.inverse(ExtendedComplex::Finite(w / width), cfg)?;
                        u.finite().map_or(ExtendedComplex::Infinity, |u| (u * width).into())
                    }
                }
            }
            MapStep::SqrtUpper => match z {
                ExtendedComplex::Infinity => ExtendedComplex::Infinity,
                ExtendedComplex::Finite(w) => ExtendedComplex::Finite(sqrt_upper(w)),
            },
        })
    }

    pub fn inverse(&self, w: ExtendedComplex<T>, exterior: bool) -> Result<ExtendedComplex<T>> {
        Ok(match self {
            MapStep::Initial(m) => m.inverse(w),
            MapStep::GeodesicSlit { map, renorm } => {
                map.inverse(renorm.invert(w), GeodesicBranch::Standard)
            }
            MapStep::StraightSlit(s) => s.forward(w),
            MapStep::CircularSlit { map, renorm } => map.inverse(renorm.invert(w)),
            MapStep::Terminal(t) => t.inverse(w, exterior)?,
            MapStep::MobiusNormalize(m) => m.inverse()?.apply(w),
            MapStep::WeldSlit { x, y } => {
                let sp = Self::weld_params(*x, *y)?;
                let width = *x - *y;
                match w {
                    ExtendedComplex::Infinity => ExtendedComplex::Infinity,
                    // The welded endpoints meet at 0; `y/(x − y)` need not
                    // round to `p − 1`, and the map is steep there.
                    ExtendedComplex::Finite(z) if z.im.is_zero() && (z.re == *x || z.re == *y) => {
                        ExtendedComplex::Finite(Complex::new(T::zero(), T::zero()))
                    }
                    ExtendedComplex::Finite(z) => {
                        ExtendedComplex::Finite(sp.unnormalized_at(z / width) * width)
                    }
                }
            }
            MapStep::SqrtUpper => match w {
                ExtendedComplex::Infinity => ExtendedComplex::Infinity,
                ExtendedComplex::Finite(z) => ExtendedComplex::Finite(z * z),
            },
        })
    }

    /// Images `(left, right)` of the two sides of the base point `0` of a slit
    /// step. `None` for steps that do not open a slit at `0`.
    pub(crate) fn split_base(&self) -> Option<(T, T)> {
        match self {
            MapStep::GeodesicSlit { map, renorm } => Some((renorm.real(-map.c), renorm.real(map.c))),
            MapStep::StraightSlit(s) => Some((s.p - T::one(), s.p)),
            MapStep::CircularSlit { map, renorm } => {
                Some((renorm.real(map.inner.p - T::one()), renorm.real(map.inner.p)))
            }
            MapStep::WeldSlit { x, y } => Some((*y, *x)),
            _ => None,
        }
    }

    /// For a circular slit step, the two preimages of its intermediate point.
    pub(crate) fn split_intermediate(&self) -> Result<Option<(T, T)>> {
        let MapStep::CircularSlit { map: h, renorm } = self else { return Ok(None) };
        let lc = h
            .straighten(ExtendedComplex::Finite(h.c))
            .finite()
            .ok_or(ZipError::TangentArc)?;
        let r = (lc / h.d).re * h.d.norm();
        let left = h.inner.inverse_on_slit(r, SlitSide::Left)?;
        let right = h.inner.inverse_on_slit(r, SlitSide::Right)?;
        Ok(Some((renorm.real(left), renorm.real(right))))
    }

    /// Both candidate images of `z` for continuity tracking. Single-valued
    /// steps return one candidate.
    pub(crate) fn forward_candidates(
        &self,
        z: Complex<T>,
        exterior: bool,
        cfg: &NewtonConfig<T>,
    ) -> Result<Vec<ExtendedComplex<T>>> {
        Ok(match self {
            MapStep::Initial(m) => {
                let w = m.forward(z.into());
                match w {
                    ExtendedComplex::Finite(w) => vec![w.into(), (-w).into()],
                    inf => vec![inf],
                }
            }
            MapStep::GeodesicSlit { map, renorm } => match map.straighten(z.into()) {
                ExtendedComplex::Infinity => vec![ExtendedComplex::Infinity],
                ExtendedComplex::Finite(m) => {
                    let r = sqrt_upper(m * m + map.c * map.c);
                    vec![renorm.apply(r.into()), renorm.apply((-r).into())]
                }
            },
            MapStep::SqrtUpper => {
                let r = sqrt_upper(z);
                vec![r.into(), (-r).into()]
            }
            MapStep::Terminal(t) => {
                let w = t.forward(z.into(), exterior)?;
                match w {
                    ExtendedComplex::Finite(w) => {
                        // Other branches of the power differ by e^{2πik·exponent}.
                        let k = t.exponent(if exterior { t.sector.other() } else { t.sector });
                        let rot = Complex::from_polar(T::one(), T::TAU() * k);
                        vec![w.into(), (w * rot).into(), (w / rot).into()]
                    }
                    inf => vec![inf],
                }
            }
            other => vec![other.forward(z.into(), exterior, cfg)?],
        })
    }
}

/// Apply `f` and then `renorm`, keeping `∞` fixed.
fn refix<T: Real, F>(z: ExtendedComplex<T>, renorm: &Renorm<T>, f: F) -> Result<ExtendedComplex<T>>
where
    F: FnOnce(ExtendedComplex<T>) -> Result<ExtendedComplex<T>>,
{
    if renorm.pole.is_some() && z.is_infinite() {
        return Ok(ExtendedComplex::Infinity);
    }
    Ok(renorm.apply(f(z)?))
}
