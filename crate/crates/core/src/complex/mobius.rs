use num_complex::Complex;

use super::ExtendedComplex;
use crate::error::{Result, ZipError};
use crate::scalar::{lit, Real};

/// The linear fractional transform `z ↦ (az + b)/(cz + d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
    pub c: Complex<T>,
    pub d: Complex<T>,
}

impl<T: Real> Mobius<T> {
    /// Builds the transform, rejecting `ad − bc ≈ 0`.
    pub fn new(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Result<Self> {
        let m = Mobius { a, b, c, d };
        m.check()?;
        Ok(m)
    }

    pub fn identity() -> Self {
        let one = Complex::new(T::one(), T::zero());
        let zero = Complex::new(T::zero(), T::zero());
        Mobius { a: one, b: zero, c: zero, d: one }
    }

    /// `z ↦ z/(1 − z/b)`; the identity when `b = ∞`.
    ///
    /// For real `b` this preserves the upper half-plane and sends `b` to `∞`.
    pub fn pole_at(b: ExtendedComplex<T>) -> Self {
        match b {
            ExtendedComplex::Infinity => Self::identity(),
            ExtendedComplex::Finite(b) => {
                let one = Complex::new(T::one(), T::zero());
                Mobius {
                    a: one,
                    b: Complex::new(T::zero(), T::zero()),
                    c: -one / b,
                    d: one,
                }
            }
        }
    }

    pub fn determinant(&self) -> Complex<T> {
        self.a * self.d - self.b * self.c
    }

    fn check(&self) -> Result<()> {
        let scale = (self.a.norm() * self.d.norm()).max(self.b.norm() * self.c.norm());
        let det = self.determinant().norm();
        let finite = [self.a, self.b, self.c, self.d]
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite || !(det > lit::<T>(1e-14) * scale) || scale.is_zero() {
            return Err(ZipError::InvalidTransform(format!(
                "degenerate Möbius transform (|ad - bc| = {det})"
            )));
        }
        Ok(())
    }

    /// Evaluates on the sphere: `∞ ↦ a/c`, `−d/c ↦ ∞`.
    pub fn apply(&self, z: ExtendedComplex<T>) -> ExtendedComplex<T> {
        match z {
            ExtendedComplex::Infinity => ExtendedComplex::ratio(self.a, self.c),
            ExtendedComplex::Finite(z) => {
                ExtendedComplex::ratio(self.a * z + self.b, self.c * z + self.d)
            }
        }
    }

    /// Checked evaluation: fails for a degenerate transform.
    pub fn try_apply(&self, z: ExtendedComplex<T>) -> Result<ExtendedComplex<T>> {
        self.check()?;
        Ok(self.apply(z))
    }

    pub fn inverse(&self) -> Result<Self> {
        self.check()?;
        Ok(Mobius { a: self.d, b: -self.b, c: -self.c, d: self.a })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Mobius {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    /// The Cayley-type map of the upper half-plane onto the unit disc with
    /// `w0 ↦ 0` and the boundary point `fix ↦ 1`.
    pub fn half_plane_to_disc(w0: Complex<T>, fix: ExtendedComplex<T>) -> Result<Self> {
        if !(w0.im > T::zero()) {
            return Err(ZipError::Domain(
                "centre of the disc normalization must lie in the upper half-plane".into(),
            ));
        }
        let one = Complex::new(T::one(), T::zero());
        let lambda = match fix {
            ExtendedComplex::Infinity => one,
            ExtendedComplex::Finite(x) => (x - w0.conj()) / (x - w0),
        };
        Mobius::new(lambda, -lambda * w0, one, -w0.conj())
    }
}

/// `f_a`-style shorthand used by the slit maps: `z/(1 − z/b)` on finite input.
pub(crate) fn pole_map<T: Real>(z: Complex<T>, b: Option<T>) -> ExtendedComplex<T> {
    match b {
        None => ExtendedComplex::Finite(z),
        Some(b) => {
            let den = Complex::new(T::one(), T::zero()) - z / b;
            ExtendedComplex::ratio(z, den)
        }
    }
}

/// Inverse of [`pole_map`]: `u/(1 + u/b)`.
pub(crate) fn pole_map_inv<T: Real>(u: ExtendedComplex<T>, b: Option<T>) -> ExtendedComplex<T> {
    match (u, b) {
        (u, None) => u,
        (ExtendedComplex::Infinity, Some(b)) => ExtendedComplex::real(b),
        (ExtendedComplex::Finite(u), Some(b)) => {
            ExtendedComplex::ratio(u, Complex::new(T::one(), T::zero()) + u / b)
        }
    }
}
