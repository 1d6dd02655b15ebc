use num_complex::Complex;

use super::{ok_report, ChainReport, ViolationKind};
use crate::complex::geometry::point_segment_distance;
use crate::complex::{ExtendedComplex, Polyline};
use crate::error::{Result, ZipError};
use crate::scalar::{lit, Real};

/// Relative margin that keeps boundary points out of the open sets.
const OPEN_MARGIN: f64 = 1e-12;

/// Open rhombus with opposite vertices `a` and `b` and interior angle
/// `2·half_angle` at both. When `b = ∞` it is the sector of half-angle
/// `half_angle` with apex `a` around the direction `axis`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diamond<T> {
    pub a: Complex<T>,
    pub b: ExtendedComplex<T>,
    pub half_angle: T,
    /// Unit vector from `a` towards `b`.
    pub axis: Complex<T>,
}

impl<T: Real> Diamond<T> {
    pub fn new(a: Complex<T>, b: Complex<T>, half_angle: T) -> Result<Self> {
        check_angle(half_angle)?;
        let d = b - a;
        if !(d.norm() > T::zero()) {
            return Err(ZipError::DegenerateInput("diamond vertices coincide".into()));
        }
        Ok(Diamond { a, b: b.into(), half_angle, axis: d / d.norm() })
    }

    pub fn sector(apex: Complex<T>, direction: Complex<T>, half_angle: T) -> Result<Self> {
        check_angle(half_angle)?;
        if !(direction.norm() > T::zero()) {
            return Err(ZipError::DegenerateInput("sector direction is zero".into()));
        }
        Ok(Diamond { a: apex, b: ExtendedComplex::Infinity, half_angle, axis: direction / direction.norm() })
    }

    /// Membership in the open rhombus or sector.
    pub fn contains(&self, z: ExtendedComplex<T>) -> bool {
        let Some(z) = z.finite() else { return false };
        let limit = self.half_angle * (T::one() - lit(OPEN_MARGIN));
        let at_a = (z - self.a) * self.axis.conj();
        if at_a.norm().is_zero() || at_a.arg().abs() >= limit {
            return false;
        }
        match self.b {
            ExtendedComplex::Infinity => true,
            ExtendedComplex::Finite(b) => {
                let at_b = -(z - b) * self.axis.conj();
                !at_b.norm().is_zero() && at_b.arg().abs() < limit
            }
        }
    }

    /// Vertices of the closure as a convex polygon; a sector is cut off so
    /// that it still contains the part within `reach` of its apex.
    pub fn polygon(&self, reach: T) -> Vec<Complex<T>> {
        let half = self.half_angle;
        match self.b {
            ExtendedComplex::Finite(b) => {
                let len = (b - self.a).norm();
                let mid = (self.a + b) * lit::<T>(0.5);
                let h = self.axis * Complex::<T>::i() * (half.tan() * len * lit(0.5));
                vec![self.a, mid - h, b, mid + h]
            }
            ExtendedComplex::Infinity => {
                let far = reach / half.cos();
                vec![
                    self.a,
                    self.a + self.axis * Complex::from_polar(far, -half),
                    self.a + self.axis * Complex::from_polar(far, half),
                ]
            }
        }
    }

    /// Distance from `z` to the closed diamond.
    fn distance(&self, z: Complex<T>) -> T {
        let poly = self.polygon((z - self.a).norm() + T::one());
        convex_distance(&poly, z)
    }
}

fn check_angle<T: Real>(half_angle: T) -> Result<()> {
    if half_angle > T::zero() && half_angle < T::FRAC_PI_2() {
        Ok(())
    } else {
        Err(ZipError::Precondition("half angle must lie in (0, π/2)".into()))
    }
}

/// The disc `B(center, radius)` with the closed sector of half-angle
/// `half_opening` around the direction `rotation` removed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pacman<T> {
    pub center: Complex<T>,
    pub radius: T,
    pub half_opening: T,
    pub rotation: Complex<T>,
}

impl<T: Real> Pacman<T> {
    pub fn new(center: Complex<T>, radius: T, half_opening: T, rotation: Complex<T>) -> Result<Self> {
        check_angle(half_opening)?;
        if !(radius > T::zero()) || !(rotation.norm() > T::zero()) {
            return Err(ZipError::DegenerateInput("pacman needs a positive radius and a rotation".into()));
        }
        Ok(Pacman { center, radius, half_opening, rotation: rotation / rotation.norm() })
    }

    pub fn contains(&self, z: ExtendedComplex<T>) -> bool {
        let Some(z) = z.finite() else { return false };
        let w = (z - self.center) * self.rotation.conj();
        w.norm() < self.radius && w.arg().abs() > self.half_opening
    }

    /// How far the diamond reaches into the pacman: the radius minus the
    /// distance from the center to `d ∩ (ℂ ∖ mouth)`, or `None` when they
    /// are disjoint.
    pub fn penetration(&self, d: &Diamond<T>) -> Option<T> {
        let reach = (self.center - d.a).norm() + self.radius;
        let poly = d.polygon(reach);
        let area_floor = lit::<T>(1e-24) * reach * reach;
        let mut best: Option<T> = None;
        for sign in [T::one(), -T::one()] {
            // Open half-plane bounding the mouth on one side.
            let edge = self.rotation * Complex::from_polar(T::one(), sign * self.half_opening);
            let side = |z: Complex<T>| sign * ((z - self.center) * edge.conj()).im;
            let clipped = clip(&poly, side);
            if clipped.len() < 3 || polygon_area(&clipped) <= area_floor {
                continue;
            }
            let depth = self.radius - convex_distance(&clipped, self.center);
            if depth > lit::<T>(OPEN_MARGIN) * self.radius {
                best = Some(best.map_or(depth, |b: T| b.max(depth)));
            }
        }
        best
    }
}

/// Keep the part of a convex polygon where `side ≥ 0`.
fn clip<T: Real>(poly: &[Complex<T>], side: impl Fn(Complex<T>) -> T) -> Vec<Complex<T>> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let (p, q) = (poly[i], poly[(i + 1) % n]);
        let (sp, sq) = (side(p), side(q));
        if sp >= T::zero() {
            out.push(p);
        }
        if (sp >= T::zero()) != (sq >= T::zero()) {
            let t = sp / (sp - sq);
            out.push(p + (q - p) * t);
        }
    }
    out
}

fn polygon_area<T: Real>(poly: &[Complex<T>]) -> T {
    let n = poly.len();
    let twice = (0..n).fold(T::zero(), |acc, i| {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        acc + (a.re * b.im - a.im * b.re)
    });
    twice.abs() * lit(0.5)
}

/// Distance from `z` to a convex polygon (zero inside).
fn convex_distance<T: Real>(poly: &[Complex<T>], z: Complex<T>) -> T {
    let n = poly.len();
    let mut sign = 0i8;
    let mut inside = true;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        let cross = ((b - a).conj() * (z - a)).im;
        let s = if cross > T::zero() { 1 } else if cross < T::zero() { -1 } else { 0 };
        if s != 0 {
            if sign != 0 && s != sign {
                inside = false;
                break;
            }
            sign = s;
        }
    }
    if inside {
        return T::zero();
    }
    (0..n)
        .map(|i| point_segment_distance(z, poly[i], poly[(i + 1) % n]))
        .fold(T::infinity(), T::min)
}

/// Diamonds `D(z_j, z_{j+1})` along the points. A leading `∞` gives the
/// sector at `z₁` opening away from `z₂`.
pub fn diamond_chain<T: Real>(points: &[ExtendedComplex<T>], eps: T) -> Result<Vec<Diamond<T>>> {
    let mut out = Vec::with_capacity(points.len().saturating_sub(1));
    for j in 0..points.len().saturating_sub(1) {
        let d = match (points[j], points[j + 1]) {
            (ExtendedComplex::Infinity, ExtendedComplex::Finite(b)) if j == 0 => {
                let next = points
                    .get(2)
                    .and_then(|p| p.finite())
                    .ok_or_else(|| ZipError::Precondition("a leading ∞ needs two finite points after it".into()))?;
                Diamond::sector(b, b - next, eps)?
            }
            (ExtendedComplex::Finite(a), ExtendedComplex::Finite(b)) => Diamond::new(a, b, eps)?,
            _ => return Err(ZipError::Precondition("only the first point may be ∞".into())),
        };
        out.push(d);
    }
    Ok(out)
}

/// Check that no pacman `P_k` meets an earlier diamond `D(z_j, z_{j+1})`,
/// `j ≤ k − 2`. `P_k` is centered at `z_k` with radius
/// `c1·|z_{k+1} − z_k|/ε²` and its mouth pointing back along `z_k − z_{k+1}`.
pub fn pacman_condition<T: Real>(points: &[ExtendedComplex<T>], eps: T, c1: T) -> Result<ChainReport> {
    let diamonds = diamond_chain(points, eps)?;
    let mut report = ok_report();
    let n = points.len();
    for k in 2..n.saturating_sub(1) {
        let (Some(zk), Some(next)) = (points[k].finite(), points[k + 1].finite()) else {
            continue;
        };
        let step = (next - zk).norm();
        let pac = Pacman::new(zk, c1 * step / (eps * eps), eps, zk - next)?;
        for (j, d) in diamonds.iter().enumerate().take(k - 1) {
            if let ExtendedComplex::Finite(b) = d.b {
                let half = (b - d.a).norm() * lit::<T>(0.5);
                if ((d.a + b) * lit::<T>(0.5) - zk).norm() - half >= pac.radius {
                    continue;
                }
            }
            if let Some(depth) = pac.penetration(d) {
                report.push(ViolationKind::PacmanIntersection, vec![k, j], depth);
            }
        }
    }
    Ok(report)
}

/// Whether every point of `curve` lies in the closure of the union of the
/// diamonds, with slack `1e−9` times the curve's diameter.
pub fn curve_in_diamonds<T: Real>(curve: &Polyline<T>, diamonds: &[Diamond<T>]) -> ChainReport {
    let slack = lit::<T>(super::DEFAULT_TOLERANCE) * curve.diameter().max(T::min_positive_value());
    let mut report = ok_report();
    for (i, p) in curve.points.iter().enumerate() {
        let Some(z) = p.finite() else { continue };
        let out = diamonds.iter().map(|d| d.distance(z)).fold(T::infinity(), T::min);
        if out > slack {
            report.push(ViolationKind::NotContained, vec![i], out);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn ext(z: Complex<f64>) -> ExtendedComplex<f64> {
        z.into()
    }

    #[test]
    fn rhombus_membership() {
        let eps = 0.3;
        let d = Diamond::new(c(0.0, 0.0), c(2.0, 0.0), eps).unwrap();
        assert!(d.contains(ext(c(1.0, 0.0))));
        assert!(!d.contains(ext(c(0.0, 0.0))));
        assert!(!d.contains(ext(c(1.0, eps.tan()))));
        assert!(d.contains(ext(c(1.0, 0.99 * eps.tan()))));
        assert!(!d.contains(ExtendedComplex::Infinity));
    }

    #[test]
    fn sector_membership() {
        let d = Diamond::sector(c(1.0, 0.0), c(-1.0, 0.0), 0.2).unwrap();
        assert!(d.contains(ext(c(-100.0, 5.0))));
        assert!(!d.contains(ext(c(-100.0, 30.0))));
        assert!(!d.contains(ext(c(2.0, 0.0))));
    }

    #[test]
    fn pacman_membership() {
        let p = Pacman::new(c(0.0, 0.0), 1.0, 0.2, c(-1.0, 0.0)).unwrap();
        assert!(!p.contains(ext(c(-0.5, 0.0))));
        assert!(p.contains(ext(c(0.5, 0.0))));
        assert!(p.contains(ext(c(-0.5, 0.5))));
        assert!(!p.contains(ext(c(2.0, 0.0))));
    }

    fn line(n: usize) -> Vec<ExtendedComplex<f64>> {
        std::iter::once(ExtendedComplex::Infinity)
            .chain((1..=n).map(|k| ext(c(k as f64, 0.0))))
            .collect()
    }

    #[test]
    fn collinear_points_pass() {
        for eps in [0.05, 0.1, 0.5, 1.2] {
            assert!(pacman_condition(&line(20), eps, 8.0).unwrap().ok, "eps = {eps}");
        }
    }

    #[test]
    fn two_points_pass_vacuously() {
        let pts = [ext(c(0.0, 0.0)), ext(c(1.0, 0.0))];
        assert!(pacman_condition(&pts, 0.1, 8.0).unwrap().ok);
    }

    #[test]
    fn hairpin_fails_at_the_fold() {
        let mut pts: Vec<_> = (0..10).map(|k| ext(c(k as f64, 0.0))).collect();
        pts.extend((0..10).map(|k| ext(c(9.0 - k as f64, 0.5))));
        let r = pacman_condition(&pts, 0.1, 8.0).unwrap();
        assert!(!r.ok);
        assert!(r.violations.iter().any(|v| v.indices[0] >= 10));
    }

    /// Dense sampling of the pacman against point membership in the diamond.
    fn sampled_intersection(p: &Pacman<f64>, d: &Diamond<f64>) -> bool {
        let n = 400;
        (1..n).any(|i| {
            (0..n).any(|k| {
                let r = p.radius * i as f64 / n as f64;
                let t = std::f64::consts::TAU * k as f64 / n as f64;
                let z = p.center + p.rotation * Complex::from_polar(r, t);
                p.contains(ext(z)) && d.contains(ext(z))
            })
        })
    }

    #[test]
    fn exact_test_agrees_with_sampling() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let mut agree = 0;
        let trials = 200;
        for _ in 0..trials {
            let p = Pacman::new(
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                rng.gen_range(0.5..2.0),
                rng.gen_range(0.1..1.0),
                Complex::from_polar(1.0, rng.gen_range(0.0..6.28)),
            )
            .unwrap();
            let a = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let b = a + Complex::from_polar(rng.gen_range(0.2..1.5), rng.gen_range(0.0..6.28));
            let d = Diamond::new(a, b, rng.gen_range(0.05..0.6)).unwrap();
            if p.penetration(&d).is_some() == sampled_intersection(&p, &d) {
                agree += 1;
            }
        }
        // Sampling misses slivers thinner than its resolution, so allow a
        // handful of disagreements in that direction only.
        assert!(agree >= trials - 4, "{agree}/{trials}");
    }

    #[test]
    fn curve_inside_diamonds() {
        let pts: Vec<_> = (0..4).map(|k| ext(c(k as f64, 0.0))).collect();
        let ds = diamond_chain(&pts, 0.2).unwrap();
        let inside = Polyline::from_complex(&[c(0.0, 0.0), c(0.5, 0.05), c(1.0, 0.0), c(2.5, -0.1)], false).unwrap();
        assert!(curve_in_diamonds(&inside, &ds).ok);
        let outside = Polyline::from_complex(&[c(0.0, 0.0), c(0.5, 0.5)], false).unwrap();
        assert_eq!(curve_in_diamonds(&outside, &ds).violations[0].indices, vec![1]);
    }
}
