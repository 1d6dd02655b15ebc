use num_complex::Complex;

use crate::complex::{arg_upper, log_branch, Branch, ExtendedComplex};
use crate::error::{Result, ZipError};
use crate::newton::{self, NewtonConfig};
use crate::scalar::{lit, Real};

/// Parameters of the straight slit map
/// `g_a(z) = C (z − p)^p (z + 1 − p)^{1−p}`, which sends `ℍ` onto `ℍ`
/// minus the segment from `0` to `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlitParams<T> {
    pub a: Complex<T>,
    /// `arg a / π`, in `(0, 1)`.
    pub p: T,
    /// `|a| / |L|`.
    pub scale: T,
    /// `|L| = p^p (1 − p)^{1−p}`, the slit length of the unnormalized map.
    pub slit_length: T,
}

/// Which side of the slit a boundary point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlitSide {
    /// The side facing the positive real axis; its preimages lie in `[0, p]`.
    Right,
    /// The side facing the negative real axis; preimages in `[p − 1, 0]`.
    Left,
}

impl<T: Real> SlitParams<T> {
    pub fn new(a: Complex<T>) -> Result<Self> {
        if !(a.im > T::zero()) || !a.re.is_finite() || !a.im.is_finite() {
            return Err(ZipError::Domain(format!(
                "slit tip must lie in the upper half-plane (got {a})"
            )));
        }
        let p = a.im.atan2(a.re) / T::PI();
        let q = T::one() - p;
        let slit_length = (p * p.ln() + q * q.ln()).exp();
        Ok(SlitParams { a, p, scale: a.norm() / slit_length, slit_length })
    }

    /// Slit map with `|L| = 1`-style normalization dropped: `C = 1`, tip at
    /// `|L| e^{iπp}`.
    pub fn unnormalized(p: T) -> Result<Self> {
        if !(p > T::zero() && p < T::one()) {
            return Err(ZipError::Domain(format!("slit exponent must lie in (0, 1) (got {p})")));
        }
        let q = T::one() - p;
        let slit_length = (p * p.ln() + q * q.ln()).exp();
        let a = Complex::from_polar(slit_length, p * T::PI());
        Ok(SlitParams { a, p, scale: T::one(), slit_length })
    }

    /// Tip of the unnormalized slit, `|L| e^{iπp}`.
    pub fn tip_unnormalized(&self) -> Complex<T> {
        Complex::from_polar(self.slit_length, self.p * T::PI())
    }

    /// `g_a(z)`.
    pub fn forward(&self, z: ExtendedComplex<T>) -> ExtendedComplex<T> {
        match z {
            ExtendedComplex::Infinity => ExtendedComplex::Infinity,
            ExtendedComplex::Finite(z) => ExtendedComplex::Finite(self.unnormalized_at(z) * self.scale),
        }
    }

    /// `f(z) = (z − p)^p (z + 1 − p)^{1−p}`, continuous on the closed upper
    /// half-plane.
    pub fn unnormalized_at(&self, z: Complex<T>) -> Complex<T> {
        let p = self.p;
        let q = T::one() - p;
        if z.im.is_zero() {
            return self.real_unnormalized(z.re);
        }
        if z.norm() < lit::<T>(0.5) * p.min(q) {
            return newton::tip_form(z, p, self.slit_length);
        }
        let e = log_branch(z - p, Branch::Upper) * p + log_branch(z + q, Branch::Upper) * q;
        e.exp()
    }

    /// `f` on the real line: real outside `[p − 1, p]`, on the slit inside.
    fn real_unnormalized(&self, x: T) -> Complex<T> {
        let p = self.p;
        let q = T::one() - p;
        if x >= p {
            let m = if x == p { T::zero() } else { ((x - p).ln() * p + (x + q).ln() * q).exp() };
            Complex::new(m, T::zero())
        } else if x <= -q {
            let m = if x == -q { T::zero() } else { ((p - x).ln() * p + (-q - x).ln() * q).exp() };
            Complex::new(-m, T::zero())
        } else {
            let m = ((p - x).ln() * p + (x + q).ln() * q).exp();
            Complex::from_polar(m, p * T::PI())
        }
    }

    /// `f'(z) = f(z) z / ((z − p)(z + 1 − p))`.
    pub fn unnormalized_derivative(&self, z: Complex<T>, fz: Complex<T>) -> Complex<T> {
        let p = self.p;
        fz * z / ((z - p) * (z + (T::one() - p)))
    }

    /// `g_a⁻¹(w)` by Newton's method. `w = 0` returns `p` and the tip `a`
    /// returns `0` exactly.
    pub fn inverse(&self, w: ExtendedComplex<T>, cfg: &NewtonConfig<T>) -> Result<ExtendedComplex<T>> {
        match w {
            ExtendedComplex::Infinity => Ok(ExtendedComplex::Infinity),
            ExtendedComplex::Finite(w) if w == self.a => Ok(ExtendedComplex::zero()),
            ExtendedComplex::Finite(w) => {
                newton::slit_inverse(w / self.scale, self, cfg).map(ExtendedComplex::Finite)
            }
        }
    }

    /// Preimage of a point on the slit at distance `r` from `0`, on the given side.
    pub fn inverse_on_slit(&self, r: T, side: SlitSide) -> Result<T> {
        newton::slit_side_preimage(r / self.scale, self, side)
    }

    /// Preimage of `w`, resolving `w = 0` to `p` or `p − 1` by side.
    pub fn inverse_sided(
        &self,
        w: ExtendedComplex<T>,
        side: SlitSide,
        cfg: &NewtonConfig<T>,
    ) -> Result<ExtendedComplex<T>> {
        if let ExtendedComplex::Finite(z) = w {
            if z.re.is_zero() && z.im.is_zero() {
                let x = match side {
                    SlitSide::Right => self.p,
                    SlitSide::Left => self.p - T::one(),
                };
                return Ok(ExtendedComplex::real(x));
            }
        }
        self.inverse(w, cfg)
    }

    /// Whether `w` lies on the slit (within a relative tolerance).
    pub fn on_slit(&self, w: Complex<T>) -> bool {
        let tol = lit::<T>(1e-12);
        let r = w.norm();
        r <= self.a.norm() * (T::one() + tol)
            && (arg_upper(w) - self.p * T::PI()).abs() * r <= tol * self.a.norm()
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
        z.finite().unwrap()
    }

    #[test]
    fn base_points_and_tip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let a = c(rng.gen_range(-2.0..2.0), rng.gen_range(0.05..2.0));
            let s = SlitParams::new(a).unwrap();
            assert!(fin(s.forward(ExtendedComplex::real(s.p))).norm() == 0.0);
            assert!(fin(s.forward(ExtendedComplex::real(s.p - 1.0))).norm() == 0.0);
            let tip = fin(s.forward(ExtendedComplex::zero()));
            assert!((tip - a).norm() < 1e-12 * a.norm(), "a={a} tip={tip}");
            let tip = fin(s.forward(c(0.0, 1e-300).into()));
            assert!((tip - a).norm() < 1e-12 * a.norm());
            assert!(s.slit_length >= 0.5 && s.slit_length <= 1.0);
        }
    }

    #[test]
    fn half_case_matches_closed_form() {
        let s = SlitParams::new(c(0.0, 0.5)).unwrap();
        assert!((s.p - 0.5).abs() < 1e-16);
        assert!((s.scale - 1.0).abs() < 1e-15);
        let g = fin(s.forward(c(0.0, 1.0).into()));
        assert!((g - c(0.0, 1.25f64.sqrt())).norm() < 1e-14);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(22);
        for _ in 0..1000 {
            let z = c(rng.gen_range(-3.0..3.0), rng.gen_range(0.0..3.0));
            let exact = crate::complex::sqrt_upper(z * z - 0.25);
            let exact = if z.im == 0.0 && z.re.abs() > 0.5 {
                c(z.re.signum() * (z.re * z.re - 0.25).sqrt(), 0.0)
            } else {
                exact
            };
            assert!((fin(s.forward(z.into())) - exact).norm() < 1e-13 * exact.norm().max(1.0), "z={z}");
        }
    }

    #[test]
    fn maps_upper_half_plane_into_itself() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..1000 {
            let a = c(rng.gen_range(-2.0..2.0), rng.gen_range(0.05..2.0));
            let s = SlitParams::new(a).unwrap();
            let z = c(rng.gen_range(-4.0..4.0), rng.gen_range(0.0..4.0));
            let w = fin(s.forward(z.into()));
            assert!(w.im > -1e-12 * w.norm().max(1.0));
            let x = rng.gen_range(-4.0..4.0);
            if x > s.p || x < s.p - 1.0 {
                assert_eq!(fin(s.forward(ExtendedComplex::real(x))).im, 0.0);
            }
        }
    }

    #[test]
    fn large_z_asymptotics() {
        let s = SlitParams::new(c(0.4, 0.9)).unwrap();
        for &r in &[150.0, 1e3, 1e5] {
            for k in 0..8 {
                let z = Complex::from_polar(r, 0.1 + 0.35 * k as f64);
                let ratio = fin(s.forward(z.into())) / (z * s.scale);
                assert!((ratio - 1.0).norm() < 10.0 / r);
            }
        }
    }
}
