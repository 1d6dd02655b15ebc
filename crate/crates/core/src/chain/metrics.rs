use num_complex::Complex;

use super::{ok_report, ChainReport, ViolationKind};
use crate::complex::geometry::point_segment_distance;
use crate::complex::Polyline;
use crate::error::{Result, ZipError};
use crate::scalar::{lit, Real};

/// Report every interior point where the polygon turns by `ε/10` or more.
pub fn turning_angle_check<T: Real>(points: &[Complex<T>], eps: T) -> ChainReport {
    let bound = eps / lit(10.0);
    let mut report = ok_report();
    for k in 1..points.len().saturating_sub(1) {
        let turn = ((points[k + 1] - points[k]) / (points[k] - points[k - 1])).arg().abs();
        if !(turn < bound) {
            report.push(ViolationKind::TurningAngle, vec![k], turn);
        }
    }
    report
}

/// Smallest `D ≥ 1` with `1/D ≤ |z_k − z_{k−1}| / |z_k − z_{k+1}| ≤ D` for
/// every interior point.
pub fn spacing_constant<T: Real>(points: &[Complex<T>]) -> Result<T> {
    if points.len() < 3 {
        return Err(ZipError::TooFewPoints { need: 3, got: points.len() });
    }
    let gaps: Vec<T> = points.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    if let Some(k) = gaps.iter().position(|g| !(*g > T::zero())) {
        return Err(ZipError::DegenerateInput(format!("points {k} and {} coincide", k + 1)));
    }
    Ok(gaps
        .windows(2)
        .map(|g| {
            let r = g[0] / g[1];
            r.max(r.recip())
        })
        .fold(T::one(), T::max))
}

/// Largest gap between consecutive points, wrapping when `closed`.
pub fn mesh_size<T: Real>(points: &[Complex<T>], closed: bool) -> T {
    let n = points.len();
    let links = if closed && n > 2 { n } else { n.saturating_sub(1) };
    (0..links)
        .map(|k| (points[(k + 1) % n] - points[k]).norm())
        .fold(T::zero(), T::max)
}

/// Brute-force three-point constant of a closed polygon.
///
/// The polygon is first inverted about one of its vertices, turning it into
/// an arc through `∞`; the ratio `(|w₁ − w| + |w − w₂|)/|w₁ − w₂|` is then
/// maximized over vertex triples with `w` on the bounded subarc. The result
/// is the smallest maximum over four evenly spaced choices of the vertex.
/// When a pole needs more than `max_triples` triples, every `s`-th vertex
/// is used instead.
pub fn quasicircle_constant<T: Real>(curve: &Polyline<T>, max_triples: usize) -> T {
    let v = curve.finite_points();
    let n = v.len();
    if n < 4 {
        return T::one();
    }
    let poles: Vec<usize> = {
        let mut p: Vec<usize> = (0..4).map(|q| q * n / 4).collect();
        p.dedup();
        p
    };
    poles
        .into_iter()
        .map(|p| {
            let m = n - 1;
            let budget = max_triples.max(1) as f64;
            let full = (m as f64).powi(3) / 6.0;
            let stride = if full <= budget { 1 } else { (full / budget).cbrt().ceil() as usize };
            let w: Vec<Complex<T>> = (1..n)
                .step_by(stride)
                .map(|i| (v[(p + i) % n] - v[p]).inv())
                .collect();
            three_point_max(&w)
        })
        .fold(T::infinity(), T::min)
}

/// Maximum of the three-point ratio over `i < l < j`.
fn three_point_max<T: Real>(w: &[Complex<T>]) -> T {
    let m = w.len();
    let dist: Vec<Vec<T>> = (0..m).map(|i| (0..m).map(|j| (w[i] - w[j]).norm()).collect()).collect();
    let mut best = T::one();
    for i in 0..m {
        for j in i + 2..m {
            let base = dist[i][j];
            if !(base > T::zero()) {
                return T::infinity();
            }
            for l in i + 1..j {
                let r = (dist[i][l] + dist[l][j]) / base;
                if r > best {
                    best = r;
                }
            }
        }
    }
    best
}

/// Estimated unit tangents at the points of one arc, from quadratic
/// interpolation in the chord-length parameter.
fn arc_tangents<T: Real>(p: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = p.len();
    let unit = |z: Complex<T>| z / z.norm();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let c = i.clamp(1, n - 2);
        let (a, b, d) = (p[c - 1], p[c], p[c + 1]);
        let (h1, h2) = ((b - a).norm(), (d - b).norm());
        let (s1, s2) = ((b - a) / h1, (d - b) / h2);
        // Derivative of the interpolating parabola at the requested node.
        let t = if i == c {
            (s1 * h2 + s2 * h1) / (h1 + h2)
        } else if i < c {
            (s1 * (h1 + h1 + h2) - s2 * h1) / (h1 + h2)
        } else {
            (s2 * (h2 + h2 + h1) - s1 * h2) / (h1 + h2)
        };
        out.push(unit(t));
    }
    out
}

/// Largest angle between the sampled tangent and the reference direction
/// of its arc.
///
/// `curve` holds `samples_per_arc` points per arc starting at each data
/// point, as produced by [`MapPipeline::boundary_sample`](crate::MapPipeline::boundary_sample).
/// Arcs whose reference is `None` are skipped.
pub fn tangent_deviation<T: Real>(
    curve: &Polyline<T>,
    reference: &[Option<Complex<T>>],
    samples_per_arc: usize,
) -> Result<T> {
    if samples_per_arc < 8 {
        return Err(ZipError::Precondition("at least 8 samples per arc are needed for stable tangents".into()));
    }
    let arcs = reference.len();
    let expected = arcs * samples_per_arc + usize::from(!curve.closed);
    if curve.points.len() != expected {
        return Err(ZipError::Precondition(format!(
            "curve has {} points, expected {expected} for {arcs} arcs",
            curve.points.len()
        )));
    }
    let n = curve.points.len();
    let mut worst = T::zero();
    for (j, dir) in reference.iter().enumerate() {
        let Some(dir) = dir else { continue };
        let pts: Vec<Complex<T>> = (0..=samples_per_arc)
            .filter_map(|i| curve.points[(j * samples_per_arc + i) % n].finite())
            .collect();
        if pts.len() < 3 {
            continue;
        }
        for t in arc_tangents(&pts) {
            worst = worst.max((t * dir.conj()).arg().abs());
        }
    }
    Ok(worst)
}

/// For each point, check that the closed polygon through the points meets
/// `B(z_k, factor·|z_{k+1} − z_k|)` in a single subarc. A fold is reported
/// with the nearest segment outside the subarc through `z_k`.
pub fn neighborhood_separation_check<T: Real>(points: &[Complex<T>], factor: T) -> ChainReport {
    let n = points.len();
    let mut report = ok_report();
    if n < 3 {
        return report;
    }
    for k in 0..n {
        let z = points[k];
        let r = factor * (points[(k + 1) % n] - z).norm();
        if !(r > T::zero()) {
            continue;
        }
        // Segment `i` joins points `i` and `i + 1`.
        let inside = |i: usize| (points[i % n] - z).norm() < r;
        let mut ahead = 0;
        while ahead < n && inside(k + ahead + 1) {
            ahead += 1;
        }
        let mut behind = 0;
        while behind < n && inside(k + n - behind - 1) {
            behind += 1;
        }
        // Segments k − behind − 1 ..= k + ahead form the subarc through z_k.
        let run = ahead + behind + 2;
        if run >= n {
            continue;
        }
        let nearest = (ahead + 1..n - behind - 1)
            .map(|off| {
                let i = (k + off) % n;
                (i, point_segment_distance(z, points[i], points[(i + 1) % n]))
            })
            .filter(|&(_, d)| d < r)
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        if let Some((i, d)) = nearest {
            report.push(ViolationKind::Fold, vec![k, i], d);
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn circle(n: usize) -> Vec<Complex<f64>> {
        (0..n).map(|k| Complex::from_polar(1.0, TAU * k as f64 / n as f64)).collect()
    }

    #[test]
    fn turning_angles() {
        let line: Vec<_> = (0..5).map(|k| c(k as f64, 0.0)).collect();
        assert!(turning_angle_check(&line, 0.1).ok);
        let corner = [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0)];
        let r = turning_angle_check(&corner, 0.1);
        assert!((r.violations[0].magnitude - PI / 2.0).abs() < 1e-12);
        let arc: Vec<_> = (0..6).map(|k| Complex::from_polar(1.0, 0.009 * k as f64)).collect();
        assert!(turning_angle_check(&arc, 0.1).ok);
        let arc: Vec<_> = (0..6).map(|k| Complex::from_polar(1.0, 0.011 * k as f64)).collect();
        assert!(!turning_angle_check(&arc, 0.1).ok);
    }

    #[test]
    fn spacing() {
        let even: Vec<_> = (0..5).map(|k| c(k as f64, 0.0)).collect();
        assert_eq!(spacing_constant(&even).unwrap(), 1.0);
        let alt = [c(0.0, 0.0), c(1.0, 0.0), c(3.0, 0.0), c(4.0, 0.0), c(6.0, 0.0)];
        assert!((spacing_constant(&alt).unwrap() - 2.0).abs() < 1e-15);
        let q: f64 = 1.3;
        let geo: Vec<_> = (0..6).map(|k| c((q.powi(k) - 1.0) / (q - 1.0), 0.0)).collect();
        assert!((spacing_constant(&geo).unwrap() - q).abs() < 1e-12);
        assert!(spacing_constant(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn mesh() {
        let pts: Vec<_> = (0..=10).map(|k| c(k as f64 * 0.1, 0.0)).collect();
        assert!((mesh_size(&pts, false) - 0.1).abs() < 1e-12);
        assert_eq!(mesh_size(&[c(0.0, 0.0), c(3.0, 4.0)], false), 5.0);
        let d = TAU / 12.0;
        assert!((mesh_size(&circle(12), true) - 2.0 * (d / 2.0).sin()).abs() < 1e-12);
    }

    #[test]
    fn quasicircle_of_circles() {
        let mut last = f64::INFINITY;
        for n in [16, 64, 256] {
            let k = quasicircle_constant(&Polyline::from_complex(&circle(n), true).unwrap(), 10_000_000);
            assert!(k >= 1.0 && k < 1.01, "n = {n}: {k}");
            assert!(k <= last + 1e-9);
            last = k;
        }
    }

    fn square(per_side: usize) -> Polyline<f64> {
        let corners = [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)];
        let pts: Vec<_> = (0..4)
            .flat_map(|s| {
                let (a, b) = (corners[s], corners[(s + 1) % 4]);
                (0..per_side).map(move |i| a + (b - a) * (i as f64 / per_side as f64))
            })
            .collect();
        Polyline::from_complex(&pts, true).unwrap()
    }

    #[test]
    fn quasicircle_of_square_is_stable() {
        let coarse = quasicircle_constant(&square(32), 10_000_000);
        let fine = quasicircle_constant(&square(64), 10_000_000);
        assert!(coarse > 1.05);
        assert!((coarse - fine).abs() / fine < 0.01, "{coarse} vs {fine}");
    }

    #[test]
    fn folded_curve_has_large_constant() {
        let pts = [c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(1.0, 1e-3), c(0.5, 1e-3)];
        let k = quasicircle_constant(&Polyline::from_complex(&pts, true).unwrap(), 1000);
        assert!(k > 10.0, "{k}");
    }

    #[test]
    fn tangents_of_straight_and_circular_arcs() {
        let m = 16;
        let line: Vec<_> = (0..=m).map(|k| c(k as f64 / m as f64, 0.0)).collect();
        let poly = Polyline::from_complex(&line, false).unwrap();
        assert!(tangent_deviation(&poly, &[Some(c(1.0, 0.0))], m).unwrap() < 1e-12);

        let beta: f64 = 0.3;
        let arc: Vec<_> = (0..=m)
            .map(|k| Complex::from_polar(1.0, -beta + 2.0 * beta * k as f64 / m as f64))
            .collect();
        let poly = Polyline::from_complex(&arc, false).unwrap();
        let dev = tangent_deviation(&poly, &[Some(c(0.0, 1.0))], m).unwrap();
        assert!((dev - beta).abs() < 1e-3, "{dev}");
        assert!(tangent_deviation(&poly, &[Some(c(0.0, 1.0))], 4).is_err());
    }

    #[test]
    fn separation() {
        assert!(neighborhood_separation_check(&circle(100), 5.0).ok);
        let pinch: Vec<_> = (0..40)
            .map(|k| {
                let z = Complex::from_polar(1.0, TAU * k as f64 / 40.0);
                let w = 0.95 * z;
                w / (c(1.0, 0.0) + w * w)
            })
            .collect();
        let r = neighborhood_separation_check(&pinch, 5.0);
        assert!(!r.ok);
        assert!(r.violations.iter().any(|v| pinch[v.indices[0]].norm() < 2.0));
        assert!(neighborhood_separation_check(&pinch, 0.0).ok);
    }
}
