//! Branch-managed square roots, logarithms and fractional powers.

use num_complex::Complex;

use crate::error::{Result, ZipError};
use crate::scalar::{lit, Real};

/// Which half-plane a fractional power is continuous on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Principal branch, `arg ∈ (−π, π]`, continuous on the right half-plane.
    Principal,
    /// `arg ∈ (−π/2, 3π/2]`, continuous on the closed upper half-plane; the
    /// negative real axis has argument `π`.
    Upper,
}

/// Square root with `−π/2 < arg ≤ π/2` (the usual library convention).
///
/// Signed zeros in the imaginary part are honoured, so `−4 − 0i ↦ −2i`.
#[inline]
pub fn sqrt_right<T: Real>(z: Complex<T>) -> Complex<T> {
    z.sqrt()
}

/// Square root with `0 ≤ arg < π`, i.e. cut along `[0, ∞)`, mapping
/// `ℂ∖[0, ∞)` onto the upper half-plane.
#[inline]
pub fn sqrt_upper<T: Real>(z: Complex<T>) -> Complex<T> {
    Complex::new(T::zero(), T::one()) * sqrt_right(-z)
}

/// Argument in `(−π/2, 3π/2]`.
#[inline]
pub fn arg_upper<T: Real>(z: Complex<T>) -> T {
    let a = z.im.atan2(z.re);
    if a <= -T::FRAC_PI_2() {
        a + T::PI() + T::PI()
    } else {
        a
    }
}

/// Logarithm on the selected branch.
#[inline]
pub fn log_branch<T: Real>(z: Complex<T>, branch: Branch) -> Complex<T> {
    match branch {
        Branch::Principal => z.ln(),
        Branch::Upper => Complex::new(z.norm().ln(), arg_upper(z)),
    }
}

/// `exp(q · log z)` on the selected branch.
///
/// `z = 0` returns `0` for `q > 0` and a domain error otherwise.
pub fn pow_branch<T: Real>(z: Complex<T>, q: T, branch: Branch) -> Result<Complex<T>> {
    if z.re.is_zero() && z.im.is_zero() {
        return if q > T::zero() {
            Ok(Complex::new(T::zero(), T::zero()))
        } else {
            Err(ZipError::Domain(format!("0 raised to non-positive power {q}")))
        };
    }
    Ok((log_branch(z, branch) * q).exp())
}

/// `exp(z) − 1` without cancellation for small `z`.
pub(crate) fn expm1<T: Real>(z: Complex<T>) -> Complex<T> {
    let (s, c) = z.im.sin_cos();
    let half = (z.im / lit(2.0)).sin();
    let re = z.re.exp_m1() * c - lit::<T>(2.0) * half * half;
    Complex::new(re, z.re.exp() * s)
}

/// Principal `log(1 + z)` without cancellation for small `z`.
pub(crate) fn log1p<T: Real>(z: Complex<T>) -> Complex<T> {
    let two = lit::<T>(2.0);
    let re = (two * z.re + z.re * z.re + z.im * z.im).ln_1p() / two;
    let w = Complex::new(T::one() + z.re, z.im);
    Complex::new(re, w.im.atan2(w.re))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn sqrt_right_examples() {
        assert_eq!(sqrt_right(c(4.0, 0.0)), c(2.0, 0.0));
        assert_eq!(sqrt_right(c(-1.0, 0.0)), c(0.0, 1.0));
        let r = sqrt_right(c(-4.0, -1e-300));
        assert!((r - c(0.0, -2.0)).norm() < 1e-12);
    }

    #[test]
    fn sqrt_right_squares_back() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10_000 {
            let z = c(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
            let r = sqrt_right(z);
            assert!((r * r - z).norm() <= 1e-14 * z.norm().max(1e-300) * 4.0);
            assert!(r.re >= 0.0);
        }
    }

    #[test]
    fn sqrt_upper_lands_in_upper_half_plane() {
        assert!((sqrt_upper(c(-1.0, 0.0)) - c(0.0, 1.0)).norm() < 1e-15);
        let r = sqrt_upper(c(1.0, 1e-9));
        assert!(r.im >= 0.0 && r.re > 0.0);
        let r = sqrt_upper(c(1.0, -1e-9));
        assert!(r.re < 0.0);
    }

    #[test]
    fn pow_branch_examples() {
        let r = pow_branch(c(0.0, 1.0), 2.0, Branch::Upper).unwrap();
        assert!((r - c(-1.0, 0.0)).norm() < 1e-15);
        let r = pow_branch(c(-1.0, 0.0), 0.5, Branch::Upper).unwrap();
        assert!((r - c(0.0, 1.0)).norm() < 1e-15);
        let r = pow_branch(c(-1.0, -0.0), 0.5, Branch::Upper).unwrap();
        assert!((r - c(0.0, 1.0)).norm() < 1e-15);
        assert!(pow_branch(c(0.0, 0.0), -1.0, Branch::Upper).is_err());
        assert_eq!(pow_branch(c(0.0, 0.0), 0.5, Branch::Upper).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn pow_branch_matches_log_space_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let z = c(rng.gen_range(-5.0..5.0), rng.gen_range(1e-3..5.0));
            let q: f64 = rng.gen_range(0.01..0.99);
            let a = pow_branch(z, q, Branch::Upper).unwrap();
            let b = pow_branch(z, 1.0 - q, Branch::Upper).unwrap();
            // In the upper half-plane both factors have arguments summing to arg z.
            let prod = a * b;
            assert!((prod - z).norm() < 1e-13 * z.norm().max(1.0));
            let theta = z.im.atan2(z.re);
            assert!((a.arg() - q * theta).abs() < 1e-13);
        }
    }

    #[test]
    fn expm1_and_log1p_are_accurate_near_zero() {
        let z = c(1e-10, -2e-10);
        assert!((expm1(z) - z).norm() < 1e-19);
        assert!((log1p(z) - z).norm() < 1e-19);
        let z = c(0.3, 0.7);
        assert!((expm1(z) - (z.exp() - 1.0)).norm() < 1e-15);
        assert!((log1p(z) - (z + 1.0).ln()).norm() < 1e-15);
    }
}
