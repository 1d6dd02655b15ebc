use num_complex::Complex;

use crate::complex::{sqrt_right, sqrt_upper, ExtendedComplex, Mobius};
use crate::error::{Result, ZipError};
use crate::scalar::{lit, Real};

/// The first map of a construction, opening an initial curve onto `ℝ`.
///
/// Points on the left of the initial curve (in the direction of travel)
/// open onto the negative axis, points on the right onto the positive axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialMap<T> {
    /// `i √((z − z₁)/(z − z₀))`: the complement of the segment `[z₀, z₁]`.
    Geodesic { z0: Complex<T>, z1: Complex<T> },
    /// `√((z − z₂)(z₁ − z₀)/((z − z₀)(z₁ − z₂)))` with the cut along `[0, ∞)`:
    /// the complement of the circular arc through `z₀, z₁, z₂`.
    Zipper { z0: Complex<T>, z1: Complex<T>, z2: Complex<T> },
    /// `√(ē (z − z₁))` with `e = (z₁ − z₂)/|z₁ − z₂|`: the complement of the
    /// ray from `z₁` to `∞` pointing away from `z₂`.
    Unbounded { z1: Complex<T>, z2: Complex<T> },
}

fn distinct<T: Real>(pts: &[Complex<T>]) -> Result<()> {
    let scale = pts.iter().map(|z| z.norm()).fold(T::one(), T::max);
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            if (a - b).norm() <= lit::<T>(1e-14) * scale {
                return Err(ZipError::DegenerateInput("coincident initial points".into()));
            }
        }
    }
    Ok(())
}

impl<T: Real> InitialMap<T> {
    pub fn geodesic(z0: Complex<T>, z1: Complex<T>) -> Result<Self> {
        distinct(&[z0, z1])?;
        Ok(InitialMap::Geodesic { z0, z1 })
    }

    pub fn zipper(z0: Complex<T>, z1: Complex<T>, z2: Complex<T>) -> Result<Self> {
        distinct(&[z0, z1, z2])?;
        Ok(InitialMap::Zipper { z0, z1, z2 })
    }

    pub fn unbounded(z1: Complex<T>, z2: Complex<T>) -> Result<Self> {
        distinct(&[z1, z2])?;
        Ok(InitialMap::Unbounded { z1, z2 })
    }

    fn zipper_mobius(z0: Complex<T>, z1: Complex<T>, z2: Complex<T>) -> Mobius<T> {
        // (z − z₂)(z₁ − z₀) / ((z − z₀)(z₁ − z₂))
        let k = z1 - z0;
        let l = z1 - z2;
        Mobius { a: k, b: -z2 * k, c: l, d: -z0 * l }
    }

    fn direction(z1: Complex<T>, z2: Complex<T>) -> Complex<T> {
        let e = z1 - z2;
        e / e.norm()
    }

    pub fn forward(&self, z: ExtendedComplex<T>) -> ExtendedComplex<T> {
        let i = Complex::new(T::zero(), T::one());
        match *self {
            InitialMap::Geodesic { z0, z1 } => match z {
                ExtendedComplex::Infinity => ExtendedComplex::Finite(i),
                ExtendedComplex::Finite(z) => {
                    match ExtendedComplex::ratio(z - z1, z - z0) {
                        ExtendedComplex::Infinity => ExtendedComplex::Infinity,
                        ExtendedComplex::Finite(r) => ExtendedComplex::Finite(i * sqrt_right(r)),
                    }
                }
            },
            InitialMap::Zipper { z0, z1, z2 } => {
                match Self::zipper_mobius(z0, z1, z2).apply(z) {
                    ExtendedComplex::Infinity => ExtendedComplex::Infinity,
                    ExtendedComplex::Finite(r) => ExtendedComplex::Finite(sqrt_upper(r)),
                }
            }
            InitialMap::Unbounded { z1, z2 } => match z {
                ExtendedComplex::Infinity => ExtendedComplex::Infinity,
                ExtendedComplex::Finite(z) => {
                    let e = Self::direction(z1, z2);
                    ExtendedComplex::Finite(sqrt_upper(e.conj() * (z - z1)))
                }
            },
        }
    }

    pub fn inverse(&self, w: ExtendedComplex<T>) -> ExtendedComplex<T> {
        match *self {
            InitialMap::Geodesic { z0, z1 } => match w {
                ExtendedComplex::Infinity => ExtendedComplex::Finite(z0),
                ExtendedComplex::Finite(w) => {
                    let w2 = w * w;
                    ExtendedComplex::ratio(z1 + w2 * z0, w2 + T::one())
                }
            },
            InitialMap::Zipper { z0, z1, z2 } => {
                let m = Self::zipper_mobius(z0, z1, z2);
                let inv = Mobius { a: m.d, b: -m.b, c: -m.c, d: m.a };
                match w {
                    ExtendedComplex::Infinity => inv.apply(ExtendedComplex::Infinity),
                    ExtendedComplex::Finite(w) => inv.apply(ExtendedComplex::Finite(w * w)),
                }
            }
            InitialMap::Unbounded { z1, z2 } => match w {
                ExtendedComplex::Infinity => ExtendedComplex::Infinity,
                ExtendedComplex::Finite(w) => {
                    ExtendedComplex::Finite(z1 + Self::direction(z1, z2) * w * w)
                }
            },
        }
    }
}
