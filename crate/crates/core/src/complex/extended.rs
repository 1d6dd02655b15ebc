use std::fmt;

use num_complex::Complex;

use crate::scalar::Real;

/// A point of the Riemann sphere: a finite complex number or `∞`.
///
/// `∞` is a tag, never an IEEE infinity; arithmetic never sees it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedComplex<T> {
    Finite(Complex<T>),
    Infinity,
}

impl<T: Real> ExtendedComplex<T> {
    pub fn new(re: T, im: T) -> Self {
        ExtendedComplex::Finite(Complex::new(re, im))
    }

    pub fn real(x: T) -> Self {
        ExtendedComplex::Finite(Complex::new(x, T::zero()))
    }

    pub fn zero() -> Self {
        Self::real(T::zero())
    }

    /// Wraps `z`, mapping non-finite input (overflow, NaN) to `∞`.
    pub fn from_complex(z: Complex<T>) -> Self {
        if z.re.is_finite() && z.im.is_finite() {
            ExtendedComplex::Finite(z)
        } else {
            ExtendedComplex::Infinity
        }
    }

    /// `num / den` on the sphere; a zero denominator gives `∞`.
    pub fn ratio(num: Complex<T>, den: Complex<T>) -> Self {
        if den.re.is_zero() && den.im.is_zero() {
            ExtendedComplex::Infinity
        } else {
            Self::from_complex(num / den)
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedComplex::Infinity)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_infinite()
    }

    pub fn finite(&self) -> Option<Complex<T>> {
        match *self {
            ExtendedComplex::Finite(z) => Some(z),
            ExtendedComplex::Infinity => None,
        }
    }

    /// Imaginary part; `0` for `∞` (which lies on the extended real line).
    pub fn im(&self) -> T {
        self.finite().map_or(T::zero(), |z| z.im)
    }

    /// Modulus, `+inf` for `∞`.
    pub fn norm(&self) -> T {
        self.finite().map_or(T::infinity(), |z| z.norm())
    }

    pub fn conj(&self) -> Self {
        match *self {
            ExtendedComplex::Finite(z) => ExtendedComplex::Finite(z.conj()),
            ExtendedComplex::Infinity => ExtendedComplex::Infinity,
        }
    }

    pub fn neg(&self) -> Self {
        match *self {
            ExtendedComplex::Finite(z) => ExtendedComplex::Finite(-z),
            ExtendedComplex::Infinity => ExtendedComplex::Infinity,
        }
    }

    /// Casts between scalar types.
    pub fn cast<U: Real>(&self) -> ExtendedComplex<U> {
        match *self {
            ExtendedComplex::Finite(z) => {
                ExtendedComplex::Finite(Complex::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64())))
            }
            ExtendedComplex::Infinity => ExtendedComplex::Infinity,
        }
    }
}

impl<T: Real> From<Complex<T>> for ExtendedComplex<T> {
    fn from(z: Complex<T>) -> Self {
        Self::from_complex(z)
    }
}

impl<T: Real> fmt::Display for ExtendedComplex<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedComplex::Finite(z) => write!(f, "{}{:+}i", z.re, z.im),
            ExtendedComplex::Infinity => write!(f, "inf"),
        }
    }
}
