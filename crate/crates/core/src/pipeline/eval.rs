use num_complex::Complex;

use super::{BranchPolicy, MapPipeline, MapStep};
use crate::complex::ExtendedComplex;
use crate::error::{Result, ZipError};
use crate::scalar::{lit, Real};

/// Substeps used when continuing branches along a segment.
const EXTENSION_SUBSTEPS: usize = 64;

impl<T: Real> MapPipeline<T> {
    /// Apply the composition to `z`.
    ///
    /// Data points return their recorded prevertex, so boundary
    /// correspondence is exact.
    pub fn eval_forward(&self, z: ExtendedComplex<T>, policy: BranchPolicy<T>) -> Result<ExtendedComplex<T>> {
        match policy {
            BranchPolicy::Interior | BranchPolicy::Exterior => {
                let exterior = matches!(policy, BranchPolicy::Exterior);
                if let Some(j) = self.data_index(z) {
                    let pv = &self.prevertices[j];
                    return Ok(if exterior { pv.exterior } else { pv.interior });
                }
                self.forward_from(z, exterior, |_, _| Ok(()))
            }
            BranchPolicy::Extension { seed: None } => {
                if let Some(j) = self.data_index(z) {
                    return Ok(self.prevertices[j].interior);
                }
                self.forward_from(z, false, |k, v| {
                    let tol = lit::<T>(1e-12) * v.norm().max(T::one());
                    if v.im() < -tol {
                        return Err(ZipError::AmbiguousBranch(format!(
                            "step {k} receives a point below the real axis; supply a seed"
                        )));
                    }
                    Ok(())
                })
            }
            BranchPolicy::Extension { seed: Some(seed) } => self.extend(seed, z),
        }
    }

    fn forward_from<F>(&self, z: ExtendedComplex<T>, exterior: bool, mut check: F) -> Result<ExtendedComplex<T>>
    where
        F: FnMut(usize, &ExtendedComplex<T>) -> Result<()>,
    {
        let mut v = z;
        for (k, step) in self.steps.iter().enumerate() {
            if k > 0 {
                check(k, &v)?;
                if !matches!(step, MapStep::MobiusNormalize(_)) {
                    v = clamp(v, false);
                }
            }
            v = step
                .forward(v, exterior, &self.newton)
                .map_err(|e| ZipError::StepFailure { step: k, source: Box::new(e) })?;
        }
        Ok(v)
    }

    /// Apply the inverse composition to `w` in the closed upper half-plane
    /// (or the closed disc after normalization).
    pub fn eval_inverse(&self, w: ExtendedComplex<T>) -> Result<ExtendedComplex<T>> {
        self.eval_inverse_with(w, BranchPolicy::Interior)
    }

    /// As [`eval_inverse`](Self::eval_inverse); the exterior policy inverts
    /// the complement map from the lower half-plane.
    pub fn eval_inverse_with(&self, w: ExtendedComplex<T>, policy: BranchPolicy<T>) -> Result<ExtendedComplex<T>> {
        let exterior = matches!(policy, BranchPolicy::Exterior);
        let mut v = w;
        for step in self.steps.iter().rev() {
            v = match step {
                MapStep::MobiusNormalize(_) => v,
                MapStep::Terminal(_) => clamp(v, exterior),
                _ => clamp(v, false),
            };
            v = step.inverse(v, exterior)?;
        }
        Ok(v)
    }

    /// Branch-continued evaluation along the segment from `seed` to `z`.
    fn extend(&self, seed: ExtendedComplex<T>, z: ExtendedComplex<T>) -> Result<ExtendedComplex<T>> {
        let (Some(s), Some(target)) = (seed.finite(), z.finite()) else {
            return Err(ZipError::AmbiguousBranch("extension needs finite seed and target".into()));
        };
        // Values after every step at the seed.
        let mut trail = Vec::with_capacity(self.steps.len());
        let mut v = ExtendedComplex::Finite(s);
        for (k, step) in self.steps.iter().enumerate() {
            v = step
                .forward(v, false, &self.newton)
                .map_err(|e| ZipError::StepFailure { step: k, source: Box::new(e) })?;
            trail.push(v);
        }
        for i in 1..=EXTENSION_SUBSTEPS {
            let t = lit::<T>(i as f64 / EXTENSION_SUBSTEPS as f64);
            let u = s + (target - s) * t;
            let mut x = ExtendedComplex::Finite(u);
            for (k, step) in self.steps.iter().enumerate() {
                x = self.continue_step(step, x, trail[k])?;
                trail[k] = x;
            }
        }
        Ok(trail.last().copied().unwrap_or(z))
    }

    fn continue_step(
        &self,
        step: &MapStep<T>,
        x: ExtendedComplex<T>,
        prev: ExtendedComplex<T>,
    ) -> Result<ExtendedComplex<T>> {
        let ExtendedComplex::Finite(xz) = x else {
            return step.forward(x, false, &self.newton);
        };
        match step {
            MapStep::StraightSlit(_) | MapStep::CircularSlit { .. } | MapStep::WeldSlit { .. } => {
                let Some(start) = prev.finite() else {
                    return step.forward(x, false, &self.newton);
                };
                self.newton_continue(step, xz, start)
            }
            _ => {
                let candidates = step.forward_candidates(xz, false, &self.newton)?;
                let pick = candidates
                    .into_iter()
                    .min_by(|a, b| {
                        let da = distance(a, &prev);
                        let db = distance(b, &prev);
                        da.partial_cmp(&db).unwrap_or(std::cmp::Ordering::Equal)
                    })
                    .expect("at least one candidate");
                Ok(pick)
            }
        }
    }

    /// Solve `step⁻¹(y) = x` by Newton's method from `start`.
    fn newton_continue(&self, step: &MapStep<T>, x: Complex<T>, start: Complex<T>) -> Result<ExtendedComplex<T>> {
        let inv = |y: Complex<T>| -> Result<Complex<T>> {
            step.inverse(y.into(), false)?
                .finite()
                .ok_or_else(|| ZipError::AmbiguousBranch("continuation hit a pole".into()))
        };
        let mut y = start;
        let scale = x.norm().max(T::one());
        for _ in 0..self.newton.max_iter {
            let r = inv(y)? - x;
            if r.norm() <= self.newton.tol * scale {
                return Ok(y.into());
            }
            let h = lit::<T>(1e-7) * y.norm().max(lit(1e-3));
            let d = (inv(y + h)? - inv(y - h)?) / (h + h);
            let step_len = r / d;
            y = y - step_len;
        }
        let r = (inv(y)? - x).norm();
        if r <= lit::<T>(1e-9) * scale {
            Ok(y.into())
        } else {
            Err(ZipError::AmbiguousBranch(format!("branch continuation stalled (residual {:e})", r.as_f64())))
        }
    }
}

/// Push rounding residue back onto the closed upper (or lower) half-plane.
fn clamp<T: Real>(v: ExtendedComplex<T>, lower: bool) -> ExtendedComplex<T> {
    match v {
        ExtendedComplex::Finite(z) if (z.im < T::zero()) != lower && !z.im.is_zero() => {
            ExtendedComplex::Finite(Complex::new(z.re, T::zero()))
        }
        other => other,
    }
}

fn distance<T: Real>(a: &ExtendedComplex<T>, b: &ExtendedComplex<T>) -> T {
    match (a, b) {
        (ExtendedComplex::Finite(a), ExtendedComplex::Finite(b)) => (a - b).norm(),
        (ExtendedComplex::Infinity, ExtendedComplex::Infinity) => T::zero(),
        _ => T::infinity(),
    }
}
