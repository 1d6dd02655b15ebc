use num_complex::Complex;

use super::ExtendedComplex;
use crate::error::{Result, ZipError};
use crate::scalar::{lit, Real};

/// A generalized circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CircleOrLine<T> {
    Circle { center: Complex<T>, radius: T },
    /// Line through `point` with unit `direction`.
    Line { point: Complex<T>, direction: Complex<T> },
}

impl<T: Real> CircleOrLine<T> {
    /// Distance from `z` to the circle or line.
    pub fn distance(&self, z: Complex<T>) -> T {
        match *self {
            CircleOrLine::Circle { center, radius } => ((z - center).norm() - radius).abs(),
            CircleOrLine::Line { point, direction } => ((z - point) * direction.conj()).im.abs(),
        }
    }
}

/// Relative tolerance separating true degeneracy from rounding noise.
pub(crate) fn degeneracy_tol<T: Real>() -> T {
    lit(1e-12)
}

/// The unique circle (or line, when collinear) through three distinct points.
pub fn circle_through<T: Real>(
    p1: Complex<T>,
    p2: Complex<T>,
    p3: Complex<T>,
) -> Result<CircleOrLine<T>> {
    let d12 = (p2 - p1).norm();
    let d13 = (p3 - p1).norm();
    let d23 = (p3 - p2).norm();
    let diam = d12.max(d13).max(d23);
    let tiny = degeneracy_tol::<T>() * diam;
    if !(d12 > tiny && d13 > tiny && d23 > tiny) {
        return Err(ZipError::DegenerateInput("coincident points".into()));
    }
    let u = p2 - p1;
    let v = p3 - p1;
    let cross = (u.conj() * v).im;
    if cross.abs() <= degeneracy_tol::<T>() * diam * diam {
        let dir = if d13 >= d12 { v / d13 } else { u / d12 };
        return Ok(CircleOrLine::Line { point: p1, direction: dir });
    }
    // Circumcentre relative to p1.
    let two = lit::<T>(2.0);
    let uu = u.norm_sqr();
    let vv = v.norm_sqr();
    let cx = (v.im * uu - u.im * vv) / (two * cross);
    let cy = (u.re * vv - v.re * uu) / (two * cross);
    let rel = Complex::new(cx, cy);
    Ok(CircleOrLine::Circle { center: p1 + rel, radius: rel.norm() })
}

/// For a circle or line through 0, the other point where it meets the
/// real axis (`∞` for tangency or a non-horizontal line).
pub fn real_axis_second_intersection<T: Real>(c: &CircleOrLine<T>) -> Result<ExtendedComplex<T>> {
    match *c {
        CircleOrLine::Circle { center, radius } => {
            if (center.norm() - radius).abs() > lit::<T>(1e-9) * radius {
                return Err(ZipError::Precondition("circle does not pass through 0".into()));
            }
            if center.re.abs() <= degeneracy_tol::<T>() * radius {
                Ok(ExtendedComplex::Infinity)
            } else {
                Ok(ExtendedComplex::real(center.re + center.re))
            }
        }
        CircleOrLine::Line { point, direction } => {
            let scale = point.norm().max(T::one());
            if (point * direction.conj()).im.abs() > lit::<T>(1e-9) * scale {
                return Err(ZipError::Precondition("line does not pass through 0".into()));
            }
            if direction.im.abs() <= degeneracy_tol::<T>() {
                Err(ZipError::DegenerateInput("line coincides with the real axis".into()))
            } else {
                Ok(ExtendedComplex::Infinity)
            }
        }
    }
}

/// Chordal distance `2|z − w| / √((1 + |z|²)(1 + |w|²))`, in `[0, 2]`.
pub fn spherical_distance<T: Real>(z: ExtendedComplex<T>, w: ExtendedComplex<T>) -> T {
    let two = lit::<T>(2.0);
    match (z, w) {
        (ExtendedComplex::Infinity, ExtendedComplex::Infinity) => T::zero(),
        (ExtendedComplex::Finite(a), ExtendedComplex::Infinity)
        | (ExtendedComplex::Infinity, ExtendedComplex::Finite(a)) => {
            two / (T::one() + a.norm_sqr()).sqrt()
        }
        (ExtendedComplex::Finite(a), ExtendedComplex::Finite(b)) => {
            let d = two * (a - b).norm()
                / ((T::one() + a.norm_sqr()).sqrt() * (T::one() + b.norm_sqr()).sqrt());
            d.min(two)
        }
    }
}

/// Winding direction of a closed polygon about an interior point: `+1` for
/// counterclockwise, `−1` for clockwise.
pub fn winding_sign<T: Real>(points: &[Complex<T>], interior: Complex<T>) -> Result<i32> {
    if points.len() < 3 {
        return Err(ZipError::TooFewPoints { need: 3, got: points.len() });
    }
    let n = points.len();
    let diam = points
        .iter()
        .map(|p| (p - points[0]).norm())
        .fold(T::zero(), T::max);
    let mut total = T::zero();
    for i in 0..n {
        let a = points[i] - interior;
        let b = points[(i + 1) % n] - interior;
        let seg = b - a;
        // Distance from the interior point to the segment.
        let t = if seg.norm_sqr() > T::zero() {
            (-(a * seg.conj()).re / seg.norm_sqr()).max(T::zero()).min(T::one())
        } else {
            T::zero()
        };
        if (a + seg * t).norm() <= degeneracy_tol::<T>() * diam {
            return Err(ZipError::DegenerateInput("interior point lies on the polygon".into()));
        }
        total = total + (b / a).arg();
    }
    if total.abs() < T::PI() {
        return Err(ZipError::DegenerateInput("point is not enclosed by the polygon".into()));
    }
    Ok(if total > T::zero() { 1 } else { -1 })
}

/// Twice the signed area of a closed polygon (positive when counterclockwise).
pub fn signed_area2<T: Real>(points: &[Complex<T>]) -> T {
    let n = points.len();
    (0..n).fold(T::zero(), |acc, i| {
        let a = points[i];
        let b = points[(i + 1) % n];
        acc + (a.re * b.im - a.im * b.re)
    })
}

/// Closest point to `p` on the segment `[a, b]`, as the parameter `t ∈ [0, 1]`.
pub(crate) fn project_to_segment<T: Real>(p: Complex<T>, a: Complex<T>, b: Complex<T>) -> T {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 <= T::zero() {
        return T::zero();
    }
    (((p - a) * d.conj()).re / len2).max(T::zero()).min(T::one())
}

/// Euclidean distance from `p` to the segment `[a, b]`.
pub(crate) fn point_segment_distance<T: Real>(p: Complex<T>, a: Complex<T>, b: Complex<T>) -> T {
    let t = project_to_segment(p, a, b);
    (p - (a + (b - a) * t)).norm()
}

/// Whether the closed segments `[a, b]` and `[c, d]` intersect.
pub(crate) fn segments_intersect<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    c: Complex<T>,
    d: Complex<T>,
) -> bool {
    let orient = |p: Complex<T>, q: Complex<T>, r: Complex<T>| ((q - p).conj() * (r - p)).im;
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    let zero = T::zero();
    if ((o1 > zero && o2 < zero) || (o1 < zero && o2 > zero))
        && ((o3 > zero && o4 < zero) || (o3 < zero && o4 > zero))
    {
        return true;
    }
    let on = |p: Complex<T>, q: Complex<T>, r: Complex<T>, o: T| {
        o == zero && point_segment_distance(r, p, q) == zero
    };
    on(a, b, c, o1) || on(a, b, d, o2) || on(c, d, a, o3) || on(c, d, b, o4)
}

/// Even-odd point-in-polygon test.
pub(crate) fn point_in_polygon<T: Real>(poly: &[Complex<T>], p: Complex<T>) -> bool {
    let n = poly.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (poly[i], poly[j]);
        if (a.im > p.im) != (b.im > p.im) {
            let x = a.re + (p.im - a.im) * (b.re - a.re) / (b.im - a.im);
            if p.re < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn circle_through_examples() {
        match circle_through(c(0.0, 0.0), c(2.0, 0.0), c(0.0, 1.0)).unwrap() {
            CircleOrLine::Circle { center, radius } => {
                assert!((center - c(1.0, 0.5)).norm() < 1e-15);
                assert!((radius - 1.25f64.sqrt()).abs() < 1e-15);
            }
            other => panic!("expected circle, got {other:?}"),
        }
        match circle_through(c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)).unwrap() {
            CircleOrLine::Line { point, direction } => {
                assert_eq!(point, c(0.0, 0.0));
                assert!((direction - c(1.0, 0.0)).norm() < 1e-15);
            }
            other => panic!("expected line, got {other:?}"),
        }
        match circle_through(c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)).unwrap() {
            CircleOrLine::Circle { center, radius } => {
                assert!(center.norm() < 1e-15);
                assert!((radius - 1.0).abs() < 1e-15);
            }
            other => panic!("expected circle, got {other:?}"),
        }
        assert!(circle_through(c(1.0, 1.0), c(1.0, 1.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn circle_through_passes_through_inputs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let p: Vec<_> = (0..3)
                .map(|_| c(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)))
                .collect();
            let circ = circle_through(p[0], p[1], p[2]).unwrap();
            let scale = p.iter().map(|z| z.norm()).fold(1.0, f64::max);
            if let CircleOrLine::Circle { radius, .. } = circ {
                for z in &p {
                    assert!(circ.distance(*z) <= 1e-12 * radius.max(scale));
                }
            }
        }
    }

    #[test]
    fn second_intersection_examples() {
        let circ = circle_through(c(0.0, 0.0), c(2.0, 0.0), c(0.0, 1.0)).unwrap();
        let b = real_axis_second_intersection(&circ).unwrap();
        assert!((b.finite().unwrap() - c(2.0, 0.0)).norm() < 1e-14);
        let tangent = CircleOrLine::Circle { center: c(0.0, 1.0), radius: 1.0 };
        assert!(real_axis_second_intersection(&tangent).unwrap().is_infinite());
        let vertical = CircleOrLine::Line { point: c(0.0, 0.0), direction: c(0.0, 1.0) };
        assert!(real_axis_second_intersection(&vertical).unwrap().is_infinite());
        let off = CircleOrLine::Circle { center: c(3.0, 0.0), radius: 1.0 };
        assert!(matches!(real_axis_second_intersection(&off), Err(ZipError::Precondition(_))));
    }

    #[test]
    fn spherical_distance_examples() {
        let zero = ExtendedComplex::<f64>::zero();
        assert_eq!(spherical_distance(zero, ExtendedComplex::Infinity), 2.0);
        assert_eq!(spherical_distance(zero, zero), 0.0);
        let d = spherical_distance(ExtendedComplex::new(1.0, 0.0), ExtendedComplex::new(0.0, 1.0));
        assert!((d - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn spherical_distance_is_euclidean_near_origin() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let z = c(rng.gen_range(-1e-4..1e-4), rng.gen_range(-1e-4..1e-4));
            let w = c(rng.gen_range(-1e-4..1e-4), rng.gen_range(-1e-4..1e-4));
            let s = spherical_distance(z.into(), w.into());
            assert!(s <= 2.0);
            assert!((s / (2.0 * (z - w).norm()) - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn winding_examples() {
        let sq = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        assert_eq!(winding_sign(&sq, c(0.0, 0.0)).unwrap(), 1);
        let rev: Vec<_> = sq.iter().rev().copied().collect();
        assert_eq!(winding_sign(&rev, c(0.0, 0.0)).unwrap(), -1);
        assert!(winding_sign(&sq, c(0.5, 0.5)).is_err());
    }

    #[test]
    fn winding_agrees_with_shoelace_on_star_polygons() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let n = rng.gen_range(3..20);
            let mut pts: Vec<_> = (0..n)
                .map(|k| {
                    let t = std::f64::consts::TAU * (k as f64) / (n as f64);
                    c(t.cos(), t.sin()) * rng.gen_range(0.3..2.0)
                })
                .collect();
            if rng.gen_bool(0.5) {
                pts.reverse();
            }
            let expected = if signed_area2(&pts) > 0.0 { 1 } else { -1 };
            assert_eq!(winding_sign(&pts, c(0.0, 0.0)).unwrap(), expected);
        }
    }
}
