use num_complex::Complex;

use super::{ok_report, ChainReport, Disc, DiscChain, ViolationKind};
use crate::complex::geometry::{point_segment_distance, segments_intersect};
use crate::complex::Polyline;
use crate::error::{Result, ZipError};
use crate::scalar::{lit, Real};

/// Share of the distance to other segments a radius may use.
const CLEARANCE: f64 = 0.49;
/// Equal-radius runs longer than this are split in two.
const MAX_RUN: usize = 8;

/// Check disjointness and consecutive tangency.
///
/// Overlaps are reported with their depth, missing tangencies with the
/// (positive) gap between the circles.
pub fn validate_disc_chain<T: Real>(chain: &DiscChain<T>) -> ChainReport {
    let mut report = ok_report();
    let n = chain.discs.len();
    if n < 2 {
        report.push(ViolationKind::Degenerate, Vec::new(), T::zero());
        return report;
    }
    for (i, d) in chain.discs.iter().enumerate() {
        if !(d.radius > T::zero()) || !d.radius.is_finite() || !d.center.re.is_finite() || !d.center.im.is_finite() {
            report.push(ViolationKind::Degenerate, vec![i], d.radius);
        }
    }
    if !report.ok {
        return report;
    }
    let slack = chain.tolerance * chain.scale();

    // Sweep over the discs sorted by their leftmost point.
    let mut order: Vec<usize> = (0..n).collect();
    let left = |i: usize| chain.discs[i].center.re - chain.discs[i].radius;
    order.sort_by(|&a, &b| left(a).partial_cmp(&left(b)).unwrap_or(std::cmp::Ordering::Equal));
    let mut overlaps = Vec::new();
    for (pos, &i) in order.iter().enumerate() {
        let di = chain.discs[i];
        let right = di.center.re + di.radius;
        for &j in &order[pos + 1..] {
            if left(j) > right + slack {
                break;
            }
            let dj = chain.discs[j];
            let depth = di.radius + dj.radius - (di.center - dj.center).norm();
            if depth > slack {
                overlaps.push((i.min(j), i.max(j), depth));
            }
        }
    }
    overlaps.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    for (i, j, depth) in overlaps {
        report.push(ViolationKind::Overlap, vec![i, j], depth);
    }

    for i in 0..chain.links() {
        let j = (i + 1) % n;
        let (a, b) = (chain.discs[i], chain.discs[j]);
        let gap = (a.center - b.center).norm() - (a.radius + b.radius);
        if gap > slack {
            report.push(ViolationKind::Gap, vec![i, j], gap);
        }
    }
    report
}

/// Points where consecutive circles touch, wrapping if the chain is closed.
pub fn tangency_points<T: Real>(chain: &DiscChain<T>) -> Result<Vec<Complex<T>>> {
    let report = validate_disc_chain(chain);
    if !report.ok {
        return Err(ZipError::InfeasibleChain(format!(
            "chain fails validation with {} violation(s)",
            report.violations.len()
        )));
    }
    let n = chain.discs.len();
    Ok((0..chain.links())
        .map(|i| {
            let (a, b) = (chain.discs[i], chain.discs[(i + 1) % n]);
            let d = b.center - a.center;
            a.center + d * (a.radius / d.norm())
        })
        .collect())
}

/// Whether every point of `curve` lies in the closure of the union of the
/// discs, up to the chain's slack.
pub fn curve_in_chain<T: Real>(curve: &Polyline<T>, chain: &DiscChain<T>) -> ChainReport {
    let slack = chain.tolerance * chain.scale();
    let mut report = ok_report();
    for (i, p) in curve.points.iter().enumerate() {
        let Some(z) = p.finite() else { continue };
        let out = chain
            .discs
            .iter()
            .map(|d| (z - d.center).norm() - d.radius)
            .fold(T::infinity(), T::min);
        if out > slack {
            report.push(ViolationKind::NotContained, vec![i], out);
        }
    }
    report
}

/// Distance between two non-crossing segments.
fn segment_distance<T: Real>(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> T {
    if segments_intersect(a, b, c, d) {
        return T::zero();
    }
    point_segment_distance(a, c, d)
        .min(point_segment_distance(b, c, d))
        .min(point_segment_distance(c, a, b))
        .min(point_segment_distance(d, a, b))
}

/// Closed disc-chain covering a simple polygon: one disc per vertex and
/// tangent runs of discs centered along every edge, with radii at most `eps`.
pub fn polygon_disc_chain<T: Real>(polygon: &Polyline<T>, eps: T) -> Result<DiscChain<T>> {
    if !(eps > T::zero()) || !eps.is_finite() {
        return Err(ZipError::Precondition("eps must be positive".into()));
    }
    if !polygon.closed || polygon.points.iter().any(|p| p.is_infinite()) {
        return Err(ZipError::Precondition("a closed polygon of finite points is required".into()));
    }
    let v = polygon.finite_points();
    let n = v.len();
    if n < 3 {
        return Err(ZipError::TooFewPoints { need: 3, got: n });
    }
    let seg = |k: usize| (v[k], v[(k + 1) % n]);
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                continue;
            }
            let (a, b) = seg(i);
            let (c, d) = seg(j);
            if segments_intersect(a, b, c, d) {
                return Err(ZipError::Precondition(format!("polygon edges {i} and {j} cross")));
            }
        }
    }
    let clearance = lit::<T>(CLEARANCE);
    let tiny = lit::<T>(1e-12) * polygon.diameter();

    let rho: Vec<T> = (0..n)
        .map(|k| {
            let prev = (v[k] - v[(k + n - 1) % n]).norm();
            let next = (v[(k + 1) % n] - v[k]).norm();
            let far = (0..n)
                .filter(|&j| j != k && (j + 1) % n != k)
                .map(|j| point_segment_distance(v[k], seg(j).0, seg(j).1))
                .fold(T::infinity(), T::min);
            eps.min(prev / lit(3.0)).min(next / lit(3.0)).min(far * clearance)
        })
        .collect();
    if let Some(k) = rho.iter().position(|&r| !(r > tiny)) {
        return Err(ZipError::InfeasibleChain(format!("no room for a disc at vertex {k}")));
    }

    let mut discs = Vec::new();
    for k in 0..n {
        discs.push(Disc::new(v[k], rho[k]));
        let (a, b) = seg(k);
        let len = (b - a).norm();
        let u = (b - a) / len;
        let others: Vec<(Complex<T>, Complex<T>)> = (0..n).filter(|&j| j != k).map(seg).collect();
        let ctx = EdgeFill { a, u, eps, clearance, tiny, others: &others };
        ctx.fill(rho[k], len - rho[(k + 1) % n], 0, &mut discs)
            .map_err(|_| ZipError::InfeasibleChain(format!("edge {k} is too close to another edge")))?;
    }
    Ok(DiscChain::new(discs, true))
}

struct EdgeFill<'a, T> {
    a: Complex<T>,
    u: Complex<T>,
    eps: T,
    clearance: T,
    tiny: T,
    others: &'a [(Complex<T>, Complex<T>)],
}

impl<T: Real> EdgeFill<'_, T> {
    /// Cover the parameter interval `[s, t]` of the edge with tangent discs.
    fn fill(&self, s: T, t: T, depth: usize, out: &mut Vec<Disc<T>>) -> Result<(), ()> {
        let len = t - s;
        if !(len > T::zero()) {
            return Ok(());
        }
        let (p, q) = (self.a + self.u * s, self.a + self.u * t);
        let room = self
            .others
            .iter()
            .map(|&(c, d)| segment_distance(p, q, c, d))
            .fold(T::infinity(), T::min);
        let r_max = self.eps.min(room * self.clearance);
        if !(r_max > self.tiny) {
            return Err(());
        }
        let m = (len / (r_max + r_max)).ceil().to_usize().unwrap_or(usize::MAX).max(1);
        if m > MAX_RUN && depth < 60 {
            let mid = (s + t) * lit(0.5);
            self.fill(s, mid, depth + 1, out)?;
            return self.fill(mid, t, depth + 1, out);
        }
        let r = len / lit::<T>(2.0 * m as f64);
        for i in 0..m {
            let c = s + r * lit::<T>(2.0 * i as f64 + 1.0);
            out.push(Disc::new(self.a + self.u * c, r));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn chain(discs: &[(f64, f64, f64)], closed: bool) -> DiscChain<f64> {
        DiscChain::new(discs.iter().map(|&(x, y, r)| Disc::new(c(x, y), r)).collect(), closed)
    }

    fn hexagon() -> DiscChain<f64> {
        let discs = (0..6)
            .map(|k| Disc::new(Complex::from_polar(2.0, k as f64 * std::f64::consts::PI / 3.0), 1.0))
            .collect();
        DiscChain::new(discs, true)
    }

    #[test]
    fn tangent_pair_is_valid() {
        assert!(validate_disc_chain(&chain(&[(0.0, 0.0, 1.0), (2.0, 0.0, 1.0)], false)).ok);
    }

    #[test]
    fn overlapping_pair_reports_depth() {
        let r = validate_disc_chain(&chain(&[(0.0, 0.0, 1.0), (1.9, 0.0, 1.0)], false));
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].kind, ViolationKind::Overlap);
        assert!((r.violations[0].magnitude - 0.1).abs() < 1e-12);
    }

    #[test]
    fn gap_is_reported() {
        let r = validate_disc_chain(&chain(&[(0.0, 0.0, 1.0), (2.5, 0.0, 1.0)], false));
        assert_eq!(r.count(ViolationKind::Gap), 1);
        assert!((r.violations[0].magnitude - 0.5).abs() < 1e-12);
    }

    #[test]
    fn hexagonal_ring_closes() {
        let ring = hexagon();
        assert!(validate_disc_chain(&ring).ok);
        let pts = tangency_points(&ring).unwrap();
        assert_eq!(pts.len(), 6);
        for k in 0..6 {
            let d1 = (pts[k] - pts[(k + 1) % 6]).norm();
            let d0 = (pts[k] - pts[(k + 5) % 6]).norm();
            assert!((d1 - d0).abs() < 1e-12);
        }
    }

    #[test]
    fn tangency_along_segment() {
        let pts = tangency_points(&chain(&[(0.0, 0.0, 1.0), (3.0, 0.0, 2.0)], false)).unwrap();
        assert!((pts[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(tangency_points(&chain(&[(0.0, 0.0, 1.0), (1.0, 0.0, 1.0)], false)).is_err());
    }

    #[test]
    fn square_chain_validates() {
        let sq = Polyline::from_complex(&[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)], true).unwrap();
        let ch = polygon_disc_chain(&sq, 0.05).unwrap();
        assert!(validate_disc_chain(&ch).ok);
        assert!(ch.discs.iter().all(|d| d.radius <= 0.05 + 1e-15));
        for d in &ch.discs {
            let on = (0..4).any(|k| {
                let (a, b) = (sq.finite_points()[k], sq.finite_points()[(k + 1) % 4]);
                point_segment_distance(d.center, a, b) < 1e-14
            });
            assert!(on);
        }
        let pts = Polyline::from_complex(&tangency_points(&ch).unwrap(), true).unwrap();
        assert!(curve_in_chain(&pts, &ch).ok);
    }

    #[test]
    fn sharp_spike_still_validates() {
        let tri = Polyline::from_complex(&[c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.01)], true).unwrap();
        let ch = polygon_disc_chain(&tri, 0.1).unwrap();
        assert!(validate_disc_chain(&ch).ok);
    }

    #[test]
    fn oversized_eps_is_clipped() {
        let sq = Polyline::from_complex(&[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)], true).unwrap();
        let ch = polygon_disc_chain(&sq, 10.0).unwrap();
        assert!(validate_disc_chain(&ch).ok);
    }

    #[test]
    fn escaping_curve_is_flagged() {
        let ch = chain(&[(0.0, 0.0, 1.0), (2.0, 0.0, 1.0)], false);
        let curve = Polyline::from_complex(&[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.8)], false).unwrap();
        let r = curve_in_chain(&curve, &ch);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].indices, vec![2]);
    }
}
