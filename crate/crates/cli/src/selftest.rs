//! The inverted ellipse `f(z) = rz/(1 + (rz)²)`, whose Riemann map from the
//! disc is known exactly.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use num_complex::Complex;
use zipmap::{Ext64, NewtonConfig, Pipeline, Variant, ZipError};

pub struct Outcome {
    pub build_seconds: f64,
    pub max_error: f64,
}

pub fn inverted_ellipse(n: usize, r: f64) -> Vec<Ext64> {
    (0..n)
        .map(|j| {
            let u = Complex::from_polar(r, TAU * j as f64 / n as f64);
            (u / (1.0 + u * u)).into()
        })
        .collect()
}

/// Build the map for `n` points, normalize it so that `0 ↦ 0` and the first
/// data point `↦ 1`, and measure how far the prevertex angles are from the
/// equally spaced angles of the exact map.
pub fn run(variant: Variant, n: usize, r: f64, cfg: NewtonConfig<f64>) -> Result<Outcome, ZipError> {
    let points = inverted_ellipse(n, r);
    let start = Instant::now();
    let p = Pipeline::build(variant, &points, cfg)?;
    let build_seconds = start.elapsed().as_secs_f64();
    let first = points[0].finite().expect("finite data");
    let p = p.normalize_to_disc(Complex::new(0.0, 0.0), first)?;
    let mut max_error: f64 = 0.0;
    for (j, v) in p.prevertices.iter().enumerate() {
        let v = v.interior.finite().ok_or_else(|| ZipError::Domain("prevertex at ∞".into()))?;
        let e = v.im.atan2(v.re) - TAU * j as f64 / n as f64;
        max_error = max_error.max(((e + PI).rem_euclid(TAU) - PI).abs());
    }
    Ok(Outcome { build_seconds, max_error })
}

/// Error bound the self-test must beat.
pub fn threshold(variant: Variant, n: usize) -> f64 {
    match (variant, n) {
        (_, n) if n < 500 => 1e-2,
        (_, n) if n < 10_000 => 1e-3,
        (Variant::Zipper, _) => 1e-6,
        _ => 5e-6,
    }
}
