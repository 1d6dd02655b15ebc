use num_complex::Complex;

use super::geometry::point_segment_distance;
use super::{spherical_distance, ExtendedComplex};
use crate::error::{Result, ZipError};
use crate::scalar::{lit, Real};

/// An ordered list of points, optionally closed.
///
/// Only the endpoints of an open polyline may be `∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline<T> {
    pub points: Vec<ExtendedComplex<T>>,
    pub closed: bool,
}

/// Distance used by [`hausdorff_distance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Euclidean,
    /// Chordal distance on the Riemann sphere.
    Spherical,
}

impl<T: Real> Polyline<T> {
    pub fn new(points: Vec<ExtendedComplex<T>>, closed: bool) -> Result<Self> {
        if points.len() < 2 {
            return Err(ZipError::TooFewPoints { need: 2, got: points.len() });
        }
        let n = points.len();
        for (i, w) in points.windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(ZipError::DegenerateInput(format!(
                    "consecutive points {i} and {} coincide",
                    i + 1
                )));
            }
        }
        let interior_inf = points
            .iter()
            .enumerate()
            .any(|(i, p)| p.is_infinite() && (closed || (i != 0 && i != n - 1)));
        if interior_inf {
            return Err(ZipError::DegenerateInput("∞ allowed only at an open endpoint".into()));
        }
        Ok(Polyline { points, closed })
    }

    /// Closed or open polyline through finite points.
    pub fn from_complex(points: &[Complex<T>], closed: bool) -> Result<Self> {
        Self::new(points.iter().map(|&z| ExtendedComplex::Finite(z)).collect(), closed)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The finite points, in order.
    pub fn finite_points(&self) -> Vec<Complex<T>> {
        self.points.iter().filter_map(|p| p.finite()).collect()
    }

    /// Segments between consecutive points, wrapping when closed.
    pub fn segments(&self) -> impl Iterator<Item = (ExtendedComplex<T>, ExtendedComplex<T>)> + '_ {
        let n = self.points.len();
        let count = if self.closed { n } else { n - 1 };
        (0..count).map(move |i| (self.points[i], self.points[(i + 1) % n]))
    }

    fn finite_segments(&self) -> Vec<(Complex<T>, Complex<T>)> {
        self.segments()
            .filter_map(|(a, b)| Some((a.finite()?, b.finite()?)))
            .collect()
    }

    fn has_infinity(&self) -> bool {
        self.points.iter().any(|p| p.is_infinite())
    }

    pub fn diameter(&self) -> T {
        let pts = self.finite_points();
        let mut d = T::zero();
        for (i, a) in pts.iter().enumerate() {
            for b in &pts[i + 1..] {
                d = d.max((a - b).norm());
            }
        }
        d
    }
}

fn distance_to_segments<T: Real>(z: Complex<T>, segs: &[(Complex<T>, Complex<T>)]) -> T {
    segs.iter()
        .map(|&(a, b)| point_segment_distance(z, a, b))
        .fold(T::infinity(), T::min)
}

/// `sup_{a ∈ A} dist(a, B)` over segments: coarse sampling of each segment
/// followed by golden-section refinement around the worst sample.
fn directed_euclidean<T: Real>(
    a: &[(Complex<T>, Complex<T>)],
    b: &[(Complex<T>, Complex<T>)],
) -> T {
    const COARSE: usize = 8;
    let mut worst = T::zero();
    for &(p, q) in a {
        let at = |t: T| distance_to_segments(p + (q - p) * t, b);
        let step = T::one() / lit::<T>(COARSE as f64);
        let samples: Vec<T> = (0..=COARSE).map(|k| at(step * lit::<T>(k as f64))).collect();
        let (kmax, &dmax) = samples
            .iter()
            .enumerate()
            .fold((0, &T::zero()), |acc, (k, d)| if *d > *acc.1 { (k, d) } else { acc });
        worst = worst.max(dmax);
        let lo = step * lit::<T>(kmax.saturating_sub(1) as f64);
        let hi = (step * lit::<T>((kmax + 1) as f64)).min(T::one());
        worst = worst.max(golden_max(at, lo, hi));
    }
    worst
}

fn golden_max<T: Real>(f: impl Fn(T) -> T, mut lo: T, mut hi: T) -> T {
    let g = lit::<T>(0.618_033_988_749_894_8);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..40 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    f1.max(f2)
}

/// Points along the polyline, `per_segment` per segment, for chordal sampling.
fn densify<T: Real>(line: &Polyline<T>, per_segment: usize) -> Vec<ExtendedComplex<T>> {
    let mut out = Vec::new();
    for (a, b) in line.segments() {
        match (a.finite(), b.finite()) {
            (Some(p), Some(q)) => {
                for k in 0..per_segment {
                    let t = lit::<T>(k as f64) / lit::<T>(per_segment as f64);
                    out.push(ExtendedComplex::Finite(p + (q - p) * t));
                }
            }
            // A ray to ∞: sample geometrically outward from the finite end.
            (Some(p), None) | (None, Some(p)) => {
                let dir = if a.is_infinite() {
                    line.points.get(1).and_then(|x| x.finite()).map(|x| p - x)
                } else {
                    None
                };
                let dir = dir.unwrap_or_else(|| Complex::new(T::one(), T::zero()));
                let unit = dir / dir.norm().max(lit(1e-300));
                for k in 0..per_segment {
                    let s = lit::<T>(2.0).powf(lit::<T>(k as f64) * lit(40.0) / lit(per_segment as f64)) - T::one();
                    out.push(ExtendedComplex::Finite(p + unit * s));
                }
            }
            (None, None) => {}
        }
    }
    if let Some(last) = line.points.last() {
        out.push(*last);
    }
    if let Some(first) = line.points.first() {
        out.push(*first);
    }
    out
}

/// Symmetric Hausdorff distance between two polylines as point sets.
///
/// The Euclidean metric is computed on segments with point-to-segment
/// projections; the spherical metric samples both polylines densely.
pub fn hausdorff_distance<T: Real>(a: &Polyline<T>, b: &Polyline<T>, metric: Metric) -> T {
    match metric {
        Metric::Euclidean => {
            if a.has_infinity() != b.has_infinity() {
                return T::infinity();
            }
            let (sa, sb) = (a.finite_segments(), b.finite_segments());
            if sa.is_empty() || sb.is_empty() {
                return if a.points == b.points { T::zero() } else { T::infinity() };
            }
            directed_euclidean(&sa, &sb).max(directed_euclidean(&sb, &sa))
        }
        Metric::Spherical => {
            let per = 64;
            let (pa, pb) = (densify(a, per), densify(b, per));
            let directed = |x: &[ExtendedComplex<T>], y: &[ExtendedComplex<T>]| {
                x.iter()
                    .map(|p| {
                        y.iter()
                            .map(|q| spherical_distance(*p, *q))
                            .fold(T::infinity(), T::min)
                    })
                    .fold(T::zero(), T::max)
            };
            directed(&pa, &pb).max(directed(&pb, &pa))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    fn line(pts: &[(f64, f64)], closed: bool) -> Polyline<f64> {
        let pts: Vec<_> = pts.iter().map(|&(x, y)| Complex::new(x, y)).collect();
        Polyline::from_complex(&pts, closed).unwrap()
    }

    fn ngon(n: usize) -> Polyline<f64> {
        let pts: Vec<_> = (0..n)
            .map(|k| Complex::from_polar(1.0, 2.0 * PI * k as f64 / n as f64))
            .collect();
        Polyline::from_complex(&pts, true).unwrap()
    }

    #[test]
    fn hausdorff_examples() {
        let a = line(&[(0.0, 0.0), (1.0, 0.0)], false);
        assert_eq!(hausdorff_distance(&a, &a, Metric::Euclidean), 0.0);
        let b = line(&[(0.0, 0.5), (1.0, 0.5)], false);
        assert!((hausdorff_distance(&a, &b, Metric::Euclidean) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn hausdorff_is_segment_based() {
        // A vertex-only computation would report 0.5 here.
        let a = line(&[(0.0, 0.0), (2.0, 0.0)], false);
        let b = line(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)], false);
        let d = hausdorff_distance(&a, &b, Metric::Euclidean);
        assert!((d - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ngon_against_sampled_circle() {
        let n = 12;
        let circle = ngon(10_000);
        let d = hausdorff_distance(&ngon(n), &circle, Metric::Euclidean);
        let bound = 1.0 - (PI / n as f64).cos();
        // Brute-force oracle: sample both sets as points.
        let oracle = {
            let poly = ngon(n).finite_points();
            let mut worst: f64 = 0.0;
            for k in 0..10_000 {
                let z = Complex::from_polar(1.0, 2.0 * PI * k as f64 / 10_000.0);
                let dz = (0..n)
                    .map(|i| point_segment_distance(z, poly[i], poly[(i + 1) % n]))
                    .fold(f64::INFINITY, f64::min);
                worst = worst.max(dz);
            }
            worst
        };
        assert!(d <= bound + 1e-6);
        assert!((d - oracle).abs() < 1e-6);
    }

    #[test]
    fn hausdorff_symmetric_and_triangle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let rand_line = |rng: &mut rand_chacha::ChaCha8Rng| {
            let n = rng.gen_range(2..8);
            let pts: Vec<_> = (0..n)
                .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            line(&pts, false)
        };
        for _ in 0..50 {
            let (a, b, c) = (rand_line(&mut rng), rand_line(&mut rng), rand_line(&mut rng));
            let ab = hausdorff_distance(&a, &b, Metric::Euclidean);
            let ba = hausdorff_distance(&b, &a, Metric::Euclidean);
            let bc = hausdorff_distance(&b, &c, Metric::Euclidean);
            let ac = hausdorff_distance(&a, &c, Metric::Euclidean);
            assert!((ab - ba).abs() < 1e-12);
            assert!(ac <= ab + bc + 1e-12);
        }
    }

    #[test]
    fn spherical_hausdorff_is_bounded() {
        let a = ngon(16);
        let b = line(&[(5.0, 5.0), (6.0, 5.0)], false);
        let d = hausdorff_distance(&a, &b, Metric::Spherical);
        assert!(d > 0.0 && d <= 2.0);
        assert!(hausdorff_distance(&a, &a, Metric::Spherical) < 1e-12);
    }

    #[test]
    fn rejects_bad_polylines() {
        assert!(Polyline::<f64>::new(vec![ExtendedComplex::zero()], false).is_err());
        let z = ExtendedComplex::zero();
        assert!(Polyline::new(vec![z, z], false).is_err());
        let inf = ExtendedComplex::Infinity;
        assert!(Polyline::new(vec![inf, z, ExtendedComplex::real(1.0)], false).is_ok());
        assert!(Polyline::new(vec![inf, z, ExtendedComplex::real(1.0)], true).is_err());
    }
}
