use num_complex::Complex;

use crate::complex::{pole_map, pole_map_inv, sqrt_upper, ExtendedComplex};
use crate::error::{Result, ZipError};
use crate::scalar::Real;

/// Parameters of the geodesic slit map `f_a`, which unzips the arc of the
/// circle orthogonal to `ℝ` running from `0` to the tip `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicParams<T> {
    pub a: Complex<T>,
    /// `|a|²/Re a`, absent (`∞`) when `Re a = 0`.
    pub b: Option<T>,
    /// `|a|²/Im a`.
    pub c: T,
}

/// Which square root the inverse of `f_a` takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GeodesicBranch {
    #[default]
    Standard,
    Reflected,
}

impl<T: Real> GeodesicParams<T> {
    pub fn new(a: Complex<T>) -> Result<Self> {
        if !(a.im > T::zero()) || !a.re.is_finite() || !a.im.is_finite() {
            return Err(ZipError::Domain(format!(
                "geodesic tip must lie in the upper half-plane (got {a})"
            )));
        }
        let n2 = a.norm_sqr();
        let b = if a.re.is_zero() { None } else { Some(n2 / a.re) };
        Ok(GeodesicParams { a, b, c: n2 / a.im })
    }

    /// The pre-square coordinate `z/(1 − z/b)`.
    pub(crate) fn straighten(&self, z: ExtendedComplex<T>) -> ExtendedComplex<T> {
        match (z, self.b) {
            (ExtendedComplex::Infinity, None) => ExtendedComplex::Infinity,
            (ExtendedComplex::Infinity, Some(b)) => ExtendedComplex::real(-b),
            (ExtendedComplex::Finite(z), b) => pole_map(z, b),
        }
    }

    /// `f_a(z) = √((z/(1 − z/b))² + c²)` with values in the closed upper
    /// half-plane. Real input maps to real output with the sign of `z/(1 − z/b)`.
    pub fn forward(&self, z: ExtendedComplex<T>) -> ExtendedComplex<T> {
        match self.straighten(z) {
            ExtendedComplex::Infinity => ExtendedComplex::Infinity,
            ExtendedComplex::Finite(m) => ExtendedComplex::Finite(self.forward_straight(m)),
        }
    }

    pub(crate) fn forward_straight(&self, m: Complex<T>) -> Complex<T> {
        let c2 = self.c * self.c;
        if m.im.is_zero() {
            let r = (m.re * m.re + c2).sqrt();
            let r = if m.re.is_sign_negative() { -r } else { r };
            return Complex::new(r, T::zero());
        }
        sqrt_upper(m * m + c2)
    }

    /// Inverse of `f_a`. On the real axis, `|w| > c` gives a real preimage of
    /// the same sign and `|w| ≤ c` lands on the arc.
    pub fn inverse(&self, w: ExtendedComplex<T>, branch: GeodesicBranch) -> ExtendedComplex<T> {
        let u = match w {
            ExtendedComplex::Infinity => return pole_map_inv(ExtendedComplex::Infinity, self.b),
            ExtendedComplex::Finite(w) => self.unsquare(w),
        };
        let u = match branch {
            GeodesicBranch::Standard => u,
            GeodesicBranch::Reflected => -u,
        };
        pole_map_inv(ExtendedComplex::Finite(u), self.b)
    }

    pub(crate) fn unsquare(&self, w: Complex<T>) -> Complex<T> {
        let c = self.c;
        if w.im.is_zero() {
            let x = w.re;
            return if x.abs() > c {
                let r = ((x - c) * (x + c)).sqrt();
                Complex::new(if x < T::zero() { -r } else { r }, T::zero())
            } else {
                Complex::new(T::zero(), ((c - x) * (c + x)).sqrt())
            };
        }
        sqrt_upper((w - c) * (w + c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn fin(z: ExtendedComplex<f64>) -> Complex<f64> {
        z.finite().expect("finite value")
    }

    #[test]
    fn forward_examples() {
        let g = GeodesicParams::new(c(0.0, 1.0)).unwrap();
        assert!(g.b.is_none() && g.c == 1.0);
        assert!(fin(g.forward(c(0.0, 1.0).into())).norm() < 1e-15);
        assert!((fin(g.forward(c(1.0, 0.0).into())) - c(2f64.sqrt(), 0.0)).norm() < 1e-15);

        let g = GeodesicParams::new(c(1.0, 1.0)).unwrap();
        assert_eq!(g.b, Some(2.0));
        assert_eq!(g.c, 2.0);
        // ∞ lands on the negative axis: z/(1 − z/2) sends ∞ to −2.
        let w = fin(g.forward(ExtendedComplex::Infinity));
        assert!((w - c(-8f64.sqrt(), 0.0)).norm() < 1e-15);
        assert!(fin(g.forward(c(1.0, 1.0).into())).norm() < 1e-14);
    }

    #[test]
    fn inverse_examples() {
        let g = GeodesicParams::new(c(0.0, 1.0)).unwrap();
        let z = fin(g.inverse(ExtendedComplex::zero(), GeodesicBranch::Standard));
        assert!((z - c(0.0, 1.0)).norm() < 1e-15);
        let z = fin(g.inverse(c(2f64.sqrt(), 0.0).into(), GeodesicBranch::Standard));
        assert!((z - c(1.0, 0.0)).norm() < 1e-15);
        let z = fin(g.inverse(c(-(2f64.sqrt()), 0.0).into(), GeodesicBranch::Standard));
        assert!((z - c(-1.0, 0.0)).norm() < 1e-15);
        let g = GeodesicParams::new(c(1.0, 1.0)).unwrap();
        assert_eq!(g.inverse(ExtendedComplex::Infinity, GeodesicBranch::Standard), ExtendedComplex::real(2.0));
    }

    #[test]
    fn slit_sides_unzip_to_opposite_intervals() {
        let g = GeodesicParams::new(c(0.3, 0.8)).unwrap();
        let left = fin(g.inverse(c(-0.5 * g.c, 0.0).into(), GeodesicBranch::Standard));
        let right = fin(g.inverse(c(0.5 * g.c, 0.0).into(), GeodesicBranch::Standard));
        // Both land on the same arc.
        assert!(left.im > 0.0 && right.im > 0.0);
        assert!((left - right).norm() < 1e-15);
    }

    #[test]
    fn round_trip_on_random_samples() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let a = c(rng.gen_range(-3.0..3.0), rng.gen_range(0.05..3.0));
            let g = GeodesicParams::new(a).unwrap();
            let w = c(rng.gen_range(-5.0..5.0), rng.gen_range(1e-6..5.0));
            let z = g.inverse(w.into(), GeodesicBranch::Standard);
            let back = fin(g.forward(z));
            assert!((back - w).norm() <= 1e-12 * w.norm().max(g.c), "a={a} w={w}");
            assert!(fin(z).im > 0.0);
        }
    }

    #[test]
    fn half_plane_preservation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..1000 {
            let a = c(rng.gen_range(-3.0..3.0), rng.gen_range(0.05..3.0));
            let g = GeodesicParams::new(a).unwrap();
            let z = c(rng.gen_range(-5.0..5.0), rng.gen_range(0.0..5.0));
            if let Some(w) = g.forward(z.into()).finite() {
                assert!(w.im > -1e-12 * w.norm().max(1.0));
            }
        }
    }

    #[test]
    fn reflected_branch_negates_root() {
        let g = GeodesicParams::new(c(0.0, 1.0)).unwrap();
        let w = c(0.3, 0.4);
        let s = fin(g.inverse(w.into(), GeodesicBranch::Standard));
        let r = fin(g.inverse(w.into(), GeodesicBranch::Reflected));
        assert!((s + r).norm() < 1e-15);
    }
}
