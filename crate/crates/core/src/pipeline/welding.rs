use super::{MapPipeline, MapStep, Prevertex, Variant};
use crate::complex::ExtendedComplex;
use crate::error::{Result, ZipError};
use crate::newton::NewtonConfig;
use crate::scalar::Real;

/// Welding data: `x₁ < … < x_n` positive and `y_n < … < y₁ < 0`. The
/// welded map identifies each `x_j` with `y_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeldingSpec<T> {
    pub x: Vec<T>,
    pub y: Vec<T>,
}

impl<T: Real> WeldingSpec<T> {
    pub fn new(x: Vec<T>, y: Vec<T>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(ZipError::InvalidWelding("x and y differ in length".into()));
        }
        if x.is_empty() {
            return Err(ZipError::InvalidWelding("at least one pair is needed".into()));
        }
        if !x.iter().chain(&y).all(|v| v.is_finite()) {
            return Err(ZipError::InvalidWelding("non-finite value".into()));
        }
        if !(x[0] > T::zero()) || x.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(ZipError::InvalidWelding("x must be positive and increasing".into()));
        }
        if !(y[0] < T::zero()) || y.windows(2).any(|w| !(w[0] > w[1])) {
            return Err(ZipError::InvalidWelding("y must be negative and decreasing".into()));
        }
        Ok(WeldingSpec { x, y })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

fn real_of<T: Real>(v: ExtendedComplex<T>) -> Result<T> {
    v.finite()
        .map(|z| z.re)
        .ok_or_else(|| ZipError::InvalidWelding("welding point sent to ∞".into()))
}

impl<T: Real> MapPipeline<T> {
    /// Conformal welding: a map `φ` of `ℍ` onto the complement of a curve
    /// with `φ(x_j) = φ(y_j)`, available as [`eval_inverse`](Self::eval_inverse).
    pub fn weld_build(spec: &WeldingSpec<T>) -> Result<Self> {
        let spec = WeldingSpec::new(spec.x.clone(), spec.y.clone())?;
        let cfg = NewtonConfig::default();
        let mut xs = spec.x.clone();
        let mut ys = spec.y.clone();
        let mut welds = Vec::with_capacity(spec.len());
        for j in 0..spec.len() {
            let step = MapStep::WeldSlit { x: xs[j], y: ys[j] };
            for i in j + 1..spec.len() {
                xs[i] = real_of(step.inverse(ExtendedComplex::real(xs[i]), false)?)?;
                ys[i] = real_of(step.inverse(ExtendedComplex::real(ys[i]), false)?)?;
            }
            welds.push(step);
        }
        let mut steps = vec![MapStep::SqrtUpper];
        steps.extend(welds.into_iter().rev());
        let prevertices: Vec<Prevertex<T>> = spec
            .x
            .iter()
            .zip(&spec.y)
            .map(|(&x, &y)| Prevertex { interior: ExtendedComplex::real(x), exterior: ExtendedComplex::real(y) })
            .collect();
        let mut p = MapPipeline {
            variant: Variant::Welding,
            steps,
            data_points: Vec::new(),
            prevertices,
            orientation: 1,
            bounded: false,
            newton: cfg,
        };
        p.data_points = p
            .prevertices
            .iter()
            .map(|pv| p.eval_inverse(pv.interior))
            .collect::<Result<_>>()?;
        Ok(p)
    }
}
