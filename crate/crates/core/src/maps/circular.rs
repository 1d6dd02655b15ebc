use num_complex::Complex;

use super::slit::SlitParams;
use crate::complex::{
    circle_through, pole_map, pole_map_inv, real_axis_second_intersection, CircleOrLine,
    ExtendedComplex,
};
use crate::error::{Result, ZipError};
use crate::newton::NewtonConfig;
use crate::scalar::{lit, Real};

/// The circular slit map `h_{a,c} = g_d⁻¹ ∘ ℓ`, unzipping the arc of the
/// circle through `0`, `c` and `a` from `0` to the tip `a`.
///
/// `ℓ(z) = z/(1 − z/b)` sends the circle to a line, `b` being the circle's
/// second real point, and `d = ℓ(a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircularSlitParams<T> {
    pub a: Complex<T>,
    pub c: Complex<T>,
    pub b: Option<T>,
    pub d: Complex<T>,
    pub inner: SlitParams<T>,
}

impl<T: Real> CircularSlitParams<T> {
    pub fn new(a: Complex<T>, c: Complex<T>) -> Result<Self> {
        if !(a.im > T::zero() && c.im > T::zero()) {
            return Err(ZipError::Domain("circular slit points must lie in the upper half-plane".into()));
        }
        let zero = Complex::new(T::zero(), T::zero());
        let circle = circle_through(zero, c, a)?;
        if let CircleOrLine::Circle { center, radius } = circle {
            if center.re.abs() <= lit::<T>(1e-12) * radius {
                return Err(ZipError::TangentArc);
            }
        }
        let b = match real_axis_second_intersection(&circle)? {
            ExtendedComplex::Infinity => None,
            ExtendedComplex::Finite(b) => Some(b.re),
        };
        let d = pole_map(a, b).finite().ok_or(ZipError::TangentArc)?;
        let lc = pole_map(c, b).finite().ok_or(ZipError::TangentArc)?;
        let ratio = lc / d;
        let on_segment = ratio.re > T::zero()
            && ratio.re < T::one()
            && ratio.im.abs() <= lit::<T>(1e-8) * ratio.re.max(T::one());
        if !on_segment || !(d.im > T::zero()) {
            return Err(ZipError::Domain(
                "intermediate point does not lie on the arc from 0 to the tip".into(),
            ));
        }
        Ok(CircularSlitParams { a, c, b, d, inner: SlitParams::new(d)? })
    }

    /// `h(z) = g_d⁻¹(ℓ(z))`, by Newton's method.
    pub fn forward(&self, z: ExtendedComplex<T>, cfg: &NewtonConfig<T>) -> Result<ExtendedComplex<T>> {
        if z == ExtendedComplex::Finite(self.a) {
            return Ok(ExtendedComplex::zero());
        }
        self.inner.inverse(self.straighten(z), cfg)
    }

    /// `h⁻¹(w) = ℓ⁻¹(g_d(w))`, in closed form.
    pub fn inverse(&self, w: ExtendedComplex<T>) -> ExtendedComplex<T> {
        pole_map_inv(self.inner.forward(w), self.b)
    }

    pub fn straighten(&self, z: ExtendedComplex<T>) -> ExtendedComplex<T> {
        match (z, self.b) {
            (ExtendedComplex::Infinity, None) => ExtendedComplex::Infinity,
            (ExtendedComplex::Infinity, Some(b)) => ExtendedComplex::real(-b),
            (ExtendedComplex::Finite(z), b) => pole_map(z, b),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn tip_maps_to_zero() {
        let h = CircularSlitParams::new(c(0.5, 1.0), c(0.1, 0.5)).unwrap();
        let w = h.forward(c(0.5, 1.0).into(), &NewtonConfig::default()).unwrap();
        assert!(w.norm() < 1e-10);
    }

    #[test]
    fn collinear_points_reduce_to_slit() {
        let a = c(1.0, 2.0);
        let h = CircularSlitParams::new(a, a * 0.4).unwrap();
        assert!(h.b.is_none());
        assert_eq!(h.d, a);
        let z = c(0.3, 0.7);
        let direct = h.inner.forward(z.into());
        assert_eq!(h.inverse(z.into()), direct);
    }

    #[test]
    fn rejects_tangent_and_out_of_order_arcs() {
        // Circle centred on the imaginary axis is tangent to ℝ at 0.
        let err = CircularSlitParams::new(c(1.0, 1.0), c(-1.0, 1.0)).unwrap_err();
        assert_eq!(err, ZipError::TangentArc);
        // c beyond the tip along the same line.
        assert!(CircularSlitParams::new(c(1.0, 1.0), c(2.0, 2.0)).is_err());
    }

    #[test]
    fn round_trip_on_random_samples() {
        let cfg = NewtonConfig::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        let h = CircularSlitParams::new(c(0.6, 0.9), c(0.1, 0.4)).unwrap();
        for _ in 0..100 {
            let z = c(rng.gen_range(-3.0..3.0), rng.gen_range(0.01..3.0));
            let w = h.forward(z.into(), &cfg).unwrap();
            let back = h.inverse(w).finite().unwrap();
            assert!((back - z).norm() < 1e-10 * z.norm().max(1.0), "z={z} back={back}");
        }
    }
}
