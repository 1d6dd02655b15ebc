use num_complex::Complex;

use super::MapPipeline;
use crate::complex::{ExtendedComplex, Polyline};
use crate::error::{Result, ZipError};
use crate::scalar::{lit, Real};

impl<T: Real> MapPipeline<T> {
    /// Angle parameter of a boundary point: `2·atan(x)` on `ℝ ∪ {∞}`, the
    /// argument on the unit circle after normalization.
    fn boundary_angle(&self, v: ExtendedComplex<T>) -> T {
        match v {
            ExtendedComplex::Infinity => T::PI(),
            ExtendedComplex::Finite(z) if self.is_normalized() => z.im.atan2(z.re),
            ExtendedComplex::Finite(z) => lit::<T>(2.0) * z.re.atan(),
        }
    }

    fn boundary_point(&self, t: T) -> ExtendedComplex<T> {
        if self.is_normalized() {
            return Complex::from_polar(T::one(), t).into();
        }
        let half = t * lit(0.5);
        if half.cos().abs() <= T::epsilon() {
            ExtendedComplex::Infinity
        } else {
            ExtendedComplex::real(half.tan())
        }
    }

    /// Sample the computed boundary curve: the data points in order, with
    /// `samples_per_arc − 1` images of intermediate boundary parameters
    /// between consecutive ones.
    pub fn boundary_sample(&self, samples_per_arc: usize) -> Result<Polyline<T>> {
        if samples_per_arc == 0 {
            return Err(ZipError::Precondition("samples_per_arc must be at least 1".into()));
        }
        let n = self.data_points.len();
        let dir = if self.orientation > 0 { T::one() } else { -T::one() };
        let arcs = if self.bounded { n } else { n - 1 };
        let mut points = Vec::with_capacity(arcs * samples_per_arc + 1);
        for j in 0..arcs {
            points.push(self.data_points[j]);
            let ta = self.boundary_angle(self.prevertices[j].interior);
            let tb = self.boundary_angle(self.prevertices[(j + 1) % n].interior);
            let mut span = (dir * (tb - ta)) % T::TAU();
            if span < T::zero() {
                span = span + T::TAU();
            }
            for k in 1..samples_per_arc {
                let t = ta + dir * span * lit(k as f64 / samples_per_arc as f64);
                points.push(self.eval_inverse(self.boundary_point(t))?);
            }
        }
        if !self.bounded {
            points.push(self.data_points[n - 1]);
        }
        Polyline::new(points, self.bounded)
    }
}
