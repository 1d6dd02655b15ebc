use num_complex::Complex;

use crate::complex::{arg_upper, pole_map, pole_map_inv, pow_branch, Branch, ExtendedComplex};
use crate::error::{Result, ZipError};
use crate::scalar::{lit, Real};

/// Which of the two sectors cut from `ℍ` by the ray `arg m = θ` is opened.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    /// `0 < arg m < θ`, adjacent to the positive axis.
    First,
    /// `θ < arg m < π`, adjacent to the negative axis.
    Second,
}

impl Sector {
    pub fn other(self) -> Self {
        match self {
            Sector::First => Sector::Second,
            Sector::Second => Sector::First,
        }
    }
}

/// The closing map: `m = z/(1 − z/ζ)` sends the final arc from `0` to `ζ`
/// onto the ray `arg m = θ`, and a power opens the chosen sector onto `ℍ`.
///
/// With `θ = π/2` (a geodesic closing arc) this is `±m²`. `zeta = None`
/// stands for `ζ = ∞`, where `m = z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TerminalMap<T> {
    pub zeta: Option<T>,
    pub theta: T,
    pub sector: Sector,
}

impl<T: Real> TerminalMap<T> {
    /// Geodesic closing arc (the half circle orthogonal to `ℝ` on `[0, ζ]`).
    /// `sign = +1` opens the sector next to the positive axis, giving `+m²`.
    pub fn geodesic(zeta: Option<T>, sign: i32) -> Result<Self> {
        let sector = if sign > 0 { Sector::First } else { Sector::Second };
        Self::new(zeta, T::FRAC_PI_2(), sector)
    }

    /// Circular closing arc through `0`, `ζ_prev` and `ζ`.
    pub fn zipper(zeta: Option<T>, zeta_prev: Complex<T>, sector: Sector) -> Result<Self> {
        let m = pole_map(zeta_prev, Self::checked_zeta(zeta)?)
            .finite()
            .ok_or(ZipError::TangentArc)?;
        Self::new(zeta, arg_upper(m), sector)
    }

    pub fn new(zeta: Option<T>, theta: T, sector: Sector) -> Result<Self> {
        let zeta = Self::checked_zeta(zeta)?;
        let eps = lit::<T>(1e-12);
        if !(theta > eps && theta < T::PI() - eps) {
            return Err(ZipError::TangentArc);
        }
        Ok(TerminalMap { zeta, theta, sector })
    }

    fn checked_zeta(zeta: Option<T>) -> Result<Option<T>> {
        if zeta.is_some_and(|z| z.is_zero() || !z.is_finite()) {
            return Err(ZipError::Domain("terminal map needs a finite nonzero ζ".into()));
        }
        Ok(zeta)
    }

    /// Exponent sending the sector's opening angle to `π`.
    pub fn exponent(&self, sector: Sector) -> T {
        match sector {
            Sector::First => T::PI() / self.theta,
            Sector::Second => T::PI() / (T::PI() - self.theta),
        }
    }

    fn open(&self, m: Complex<T>, sector: Sector) -> Result<Complex<T>> {
        let k = self.exponent(sector);
        if m.im.is_zero() {
            // Real points stay real: the sector's own edge on ℝ maps to the
            // matching half-axis.
            let r = m.re.abs().powf(k);
            return Ok(match sector {
                Sector::First if m.re >= T::zero() => Complex::new(r, T::zero()),
                Sector::Second if m.re <= T::zero() => Complex::new(-r, T::zero()),
                Sector::First => Complex::from_polar(r, k * T::PI()),
                Sector::Second => Complex::from_polar(r, -k * self.theta),
            });
        }
        match sector {
            Sector::First => pow_branch(m, k, Branch::Upper),
            Sector::Second => {
                let rot = Complex::from_polar(T::one(), -self.theta);
                pow_branch(rot * m, k, Branch::Upper)
            }
        }
    }

    fn close(&self, w: Complex<T>, sector: Sector) -> Result<Complex<T>> {
        let k = T::one() / self.exponent(sector);
        if w.im.is_zero() {
            let r = w.re.abs().powf(k);
            return Ok(match (sector, w.re >= T::zero()) {
                (Sector::First, true) => Complex::new(r, T::zero()),
                (Sector::First, false) => Complex::from_polar(r, self.theta),
                (Sector::Second, true) => Complex::from_polar(r, self.theta),
                (Sector::Second, false) => Complex::new(-r, T::zero()),
            });
        }
        let root = pow_branch(w, k, Branch::Upper)?;
        Ok(match sector {
            Sector::First => root,
            Sector::Second => Complex::from_polar(T::one(), self.theta) * root,
        })
    }

    /// Forward map of the interior (`exterior = false`) onto `ℍ`, or of the
    /// exterior onto the lower half-plane.
    pub fn forward(&self, z: ExtendedComplex<T>, exterior: bool) -> Result<ExtendedComplex<T>> {
        let m = match z {
            ExtendedComplex::Infinity => match self.zeta {
                Some(zeta) => Complex::new(-zeta, T::zero()),
                None => return Ok(ExtendedComplex::Infinity),
            },
            ExtendedComplex::Finite(z) => match pole_map(z, self.zeta) {
                ExtendedComplex::Infinity => return Ok(ExtendedComplex::Infinity),
                ExtendedComplex::Finite(m) => m,
            },
        };
        if m.re.is_zero() && m.im.is_zero() {
            return Ok(ExtendedComplex::zero());
        }
        Ok(ExtendedComplex::Finite(if exterior {
            -self.open(m, self.sector.other())?
        } else {
            self.open(m, self.sector)?
        }))
    }

    pub fn inverse(&self, w: ExtendedComplex<T>, exterior: bool) -> Result<ExtendedComplex<T>> {
        let w = match w {
            ExtendedComplex::Infinity => {
                return Ok(self.zeta.map_or(ExtendedComplex::Infinity, ExtendedComplex::real))
            }
            ExtendedComplex::Finite(w) => w,
        };
        if w.re.is_zero() && w.im.is_zero() {
            return Ok(ExtendedComplex::zero());
        }
        let m = if exterior {
            self.close(-w, self.sector.other())?
        } else {
            self.close(w, self.sector)?
        };
        Ok(pole_map_inv(ExtendedComplex::Finite(m), self.zeta))
    }
}
