//! Inversion of the straight slit map by Newton's method.
//!
//! The closed upper half-plane (in the coordinates of the unnormalized map
//! `f(z) = (z − p)^p (z + 1 − p)^{1−p}`) is split into four regions. Far from
//! the slit Newton runs on `f(z)/w − 1`, rescaled so that the iterate stays
//! near `1`. Near the tip the square root `√(w − w_tip)` opens the region up,
//! and near the base the powers `w^{1/p}` and `w^{1/(1−p)}` straighten the
//! angles between the slit and the real axis.

use num_complex::Complex;

use crate::complex::{expm1, log1p, log_branch, sqrt_right, Branch};
use crate::error::{Result, ZipError};
use crate::maps::slit::{SlitParams, SlitSide};
use crate::scalar::{lit, Real};

/// Tolerances and region thresholds for the slit-map inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig<T> {
    /// Target for `|f(z) − w| / max(|w|, |L|)`.
    pub tol: T,
    pub max_iter: usize,
    /// Points with `|w| ≥ far_threshold · |L|` are treated as far field.
    pub far_threshold: T,
    /// Points with `|w − w_tip| < tip_fraction · Im w_tip` use the tip iteration.
    pub tip_fraction: T,
}

impl<T: Real> Default for NewtonConfig<T> {
    fn default() -> Self {
        NewtonConfig {
            tol: lit(1e-13),
            max_iter: 30,
            far_threshold: lit(9.0 / 8.0),
            tip_fraction: lit(0.25),
        }
    }
}

impl<T: Real> NewtonConfig<T> {
    pub fn with_tol(tol: T) -> Result<Self> {
        let cfg = NewtonConfig { tol, ..Self::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > T::zero() && self.tol < lit(1e-6)) {
            return Err(ZipError::Precondition(format!(
                "Newton tolerance must lie in (0, 1e-6) (got {})",
                self.tol
            )));
        }
        if self.max_iter < 8 {
            return Err(ZipError::Precondition(format!(
                "Newton iteration cap must be at least 8 (got {})",
                self.max_iter
            )));
        }
        Ok(())
    }
}

/// The four iteration regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionLabel {
    Far,
    Tip,
    SectorP,
    SectorQ,
}

impl RegionLabel {
    const LADDER: [RegionLabel; 4] =
        [RegionLabel::Far, RegionLabel::Tip, RegionLabel::SectorP, RegionLabel::SectorQ];
}

/// Classifies `w` (unnormalized coordinates). Ties go to the far field,
/// then to the tip.
pub fn classify_region<T: Real>(w: Complex<T>, sp: &SlitParams<T>, cfg: &NewtonConfig<T>) -> Result<RegionLabel> {
    if w.re.is_zero() && w.im.is_zero() {
        return Err(ZipError::Domain(
            "w = 0 is a base point of the slit with preimages p and p - 1".into(),
        ));
    }
    if w.norm() >= cfg.far_threshold * sp.slit_length {
        return Ok(RegionLabel::Far);
    }
    let tip = sp.tip_unnormalized();
    if (w - tip).norm() < cfg.tip_fraction * tip.im {
        return Ok(RegionLabel::Tip);
    }
    let arg = w.im.atan2(w.re);
    if arg < sp.p * T::PI() {
        Ok(RegionLabel::SectorP)
    } else {
        Ok(RegionLabel::SectorQ)
    }
}

/// Result of a single Newton run.
#[derive(Debug, Clone)]
pub struct NewtonTrace<T> {
    pub z: Complex<T>,
    pub region: RegionLabel,
    /// Relative residual `|f(z_k) − w| / max(|w|, |L|)` before each step and after the last.
    pub residuals: Vec<T>,
}

/// `f` near `z = 0`, written around the tip value `e^{iπp}|L|` to avoid
/// cancellation.
pub(crate) fn tip_form<T: Real>(z: Complex<T>, p: T, slit_length: T) -> Complex<T> {
    let q = T::one() - p;
    let e = log1p(-z / p) * p + log1p(z / q) * q;
    Complex::from_polar(slit_length, p * T::PI()) * e.exp()
}

/// `E(z)/z²` where `E(z) = p log(1 − z/p) + (1 − p) log(1 + z/(1 − p))`.
fn tip_exponent_over_z2<T: Real>(z: Complex<T>, p: T) -> Complex<T> {
    let q = T::one() - p;
    if z.norm() < lit::<T>(0.1) * p.min(q) {
        // E = Σ_{k≥2} z^k/k · ((−1)^{k+1} q^{1−k} − p^{1−k})
        let mut sum = Complex::new(T::zero(), T::zero());
        let mut zk = Complex::new(T::one(), T::zero());
        let mut qk = T::one() / q;
        let mut pk = T::one() / p;
        for k in 2..24 {
            let sign = if k % 2 == 0 { -T::one() } else { T::one() };
            sum = sum + zk * ((sign * qk - pk) / lit::<T>(k as f64));
            zk = zk * z;
            qk = qk / q;
            pk = pk / p;
        }
        sum
    } else {
        (log1p(-z / p) * p + log1p(z / q) * q) / (z * z)
    }
}

/// `(e^E − 1)/E`, stable for small `E`.
fn expm1_ratio<T: Real>(e: Complex<T>) -> Complex<T> {
    if e.norm() < lit::<T>(1e-4) {
        let one = Complex::new(T::one(), T::zero());
        let c = |x: f64| Complex::new(lit::<T>(x), T::zero());
        one + e * (c(0.5) + e * (c(1.0 / 6.0) + e * c(1.0 / 24.0)))
    } else {
        expm1(e) / e
    }
}

struct Problem<'a, T> {
    sp: &'a SlitParams<T>,
    w: Complex<T>,
    cfg: &'a NewtonConfig<T>,
}

impl<T: Real> Problem<'_, T> {
    fn scale(&self) -> T {
        self.w.norm().max(self.sp.slit_length)
    }

    fn residual(&self, z: Complex<T>) -> T {
        (self.sp.unnormalized_at(z) - self.w).norm() / self.scale()
    }

    /// Generic Newton loop on `G(z) = t`, `G` and `G'` supplied together.
    fn iterate(
        &self,
        region: RegionLabel,
        mut z: Complex<T>,
        damped: bool,
        g: impl Fn(Complex<T>) -> (Complex<T>, Complex<T>),
        t: Complex<T>,
    ) -> NewtonTrace<T> {
        let half = lit::<T>(0.5);
        let mut residuals = vec![self.residual(z)];
        let mut polished = false;
        for k in 0..self.cfg.max_iter {
            let (gz, dg) = g(z);
            let mut step = (gz - t) / dg;
            if !(step.re.is_finite() && step.im.is_finite()) {
                break;
            }
            if damped && k == 0 && step.norm() > half {
                step = step * (half / step.norm());
            }
            let next = z - step;
            let r_next = self.residual(next);
            let r_prev = *residuals.last().unwrap();
            if polished && r_next >= r_prev {
                break;
            }
            z = next;
            residuals.push(r_next);
            if r_next <= self.cfg.tol {
                if polished || r_next == T::zero() {
                    break;
                }
                polished = true;
            }
        }
        NewtonTrace { z, region, residuals }
    }

    fn far(&self) -> NewtonTrace<T> {
        let p = self.sp.p;
        let q = T::one() - p;
        let w = self.w;
        let two = lit::<T>(2.0);
        let three = lit::<T>(3.0);
        let z0 = w + (two * p - T::one()) + Complex::new(p * q, T::zero()) / (w * two)
            + Complex::new((T::one() - two * p) * p * q, T::zero()) / (w * w * three);
        self.far_from(z0)
    }

    fn far_from(&self, z0: Complex<T>) -> NewtonTrace<T> {
        let p = self.sp.p;
        let q = T::one() - p;
        let w = self.w;
        let one = Complex::new(T::one(), T::zero());
        let g = |z: Complex<T>| {
            let a = z - p;
            let b = z + q;
            let ratio = (log_branch(a / w, Branch::Principal) * p
                + log_branch(b / w, Branch::Principal) * q)
                .exp();
            let d = ratio * (Complex::new(p, T::zero()) / a + Complex::new(q, T::zero()) / b);
            (ratio - one, d)
        };
        self.iterate(RegionLabel::Far, z0, false, g, Complex::new(T::zero(), T::zero()))
    }

    fn tip(&self) -> NewtonTrace<T> {
        let sp = self.sp;
        let p = sp.p;
        let q = T::one() - p;
        let len = sp.slit_length;
        let rot = Complex::from_polar(T::one(), -p * T::PI());
        let t = -sqrt_right(rot * (self.w - sp.tip_unnormalized()));
        let s = (len / (two::<T>() * p * q)).sqrt();
        let i = Complex::new(T::zero(), T::one());
        let z0 = -i * t / s;
        let g = |z: Complex<T>| {
            let e2 = tip_exponent_over_z2(z, p);
            let e = e2 * z * z;
            // u/z² with u = e^{−iπp} f − |L|
            let u_over_z2 = e2 * expm1_ratio(e) * len;
            let g_over_z = i * sqrt_right(-u_over_z2);
            let fz = sp.unnormalized_at(z);
            let d = rot * fz / (g_over_z * (z - p) * (z + q) * two::<T>());
            (g_over_z * z, d)
        };
        self.iterate(RegionLabel::Tip, z0, false, g, t)
    }

    fn sector_p(&self) -> Result<NewtonTrace<T>> {
        let p = self.sp.p;
        let q = T::one() - p;
        let t = (log_branch(self.w, Branch::Upper) / p).exp();
        let expo = q / p;
        let g = |z: Complex<T>| {
            let b = z + q;
            let bp = (log_branch(b, Branch::Principal) * expo).exp();
            let gz = (z - p) * bp;
            let d = bp * (Complex::new(T::one(), T::zero()) + (z - p) * expo / b);
            (gz, d)
        };
        Ok(self.iterate(RegionLabel::SectorP, t + p, true, g, t))
    }

    fn sector_q(&self) -> Result<NewtonTrace<T>> {
        let p = self.sp.p;
        let q = T::one() - p;
        let rot = Complex::from_polar(T::one(), -p * T::PI());
        let t = (log_branch(rot * self.w, Branch::Upper) / q).exp();
        let expo = p / q;
        let g = |z: Complex<T>| {
            let a = Complex::new(p, T::zero()) - z;
            let ap = (log_branch(a, Branch::Principal) * expo).exp();
            let gz = (z + q) * ap;
            let d = ap * (Complex::new(T::one(), T::zero()) - (z + q) * expo / a);
            (gz, d)
        };
        Ok(self.iterate(RegionLabel::SectorQ, t - q, true, g, t))
    }

    fn run(&self, region: RegionLabel) -> Result<NewtonTrace<T>> {
        match region {
            RegionLabel::Far => Ok(self.far()),
            RegionLabel::Tip => Ok(self.tip()),
            RegionLabel::SectorP => self.sector_p(),
            RegionLabel::SectorQ => self.sector_q(),
        }
    }

    fn accepted(&self, trace: &NewtonTrace<T>) -> bool {
        let z = trace.z;
        let scale = self.scale();
        z.re.is_finite()
            && z.im.is_finite()
            && z.im >= -lit::<T>(1e-9) * z.norm().max(T::one())
            && (self.sp.unnormalized_at(z) - self.w).norm() <= self.cfg.tol * scale
    }
}

fn two<T: Real>() -> T {
    lit(2.0)
}

/// Runs the iteration for one named region without falling back.
pub fn newton_region<T: Real>(
    w: Complex<T>,
    sp: &SlitParams<T>,
    cfg: &NewtonConfig<T>,
    region: RegionLabel,
) -> Result<NewtonTrace<T>> {
    let problem = Problem { sp, w, cfg };
    let trace = problem.run(region)?;
    if problem.accepted(&trace) {
        Ok(trace)
    } else {
        Err(non_convergence(&trace, cfg))
    }
}

/// Far-field iteration; see [`newton_region`].
pub fn newton_far<T: Real>(w: Complex<T>, sp: &SlitParams<T>, cfg: &NewtonConfig<T>) -> Result<NewtonTrace<T>> {
    newton_region(w, sp, cfg, RegionLabel::Far)
}

/// Far-field iteration started at `z0` instead of the built-in guess. The
/// trace is returned whether or not the tolerance was reached.
pub fn newton_far_from<T: Real>(w: Complex<T>, sp: &SlitParams<T>, cfg: &NewtonConfig<T>, z0: Complex<T>) -> NewtonTrace<T> {
    Problem { sp, w, cfg }.far_from(z0)
}

/// Tip iteration; see [`newton_region`].
pub fn newton_tip<T: Real>(w: Complex<T>, sp: &SlitParams<T>, cfg: &NewtonConfig<T>) -> Result<NewtonTrace<T>> {
    newton_region(w, sp, cfg, RegionLabel::Tip)
}

/// Base-sector iteration, `which` being [`RegionLabel::SectorP`] or [`RegionLabel::SectorQ`].
pub fn newton_sector<T: Real>(
    w: Complex<T>,
    sp: &SlitParams<T>,
    cfg: &NewtonConfig<T>,
    which: RegionLabel,
) -> Result<NewtonTrace<T>> {
    if !matches!(which, RegionLabel::SectorP | RegionLabel::SectorQ) {
        return Err(ZipError::Precondition("newton_sector needs a sector label".into()));
    }
    newton_region(w, sp, cfg, which)
}

fn non_convergence<T: Real>(trace: &NewtonTrace<T>, cfg: &NewtonConfig<T>) -> ZipError {
    let residual = trace.residuals.last().map_or(f64::NAN, |r| r.as_f64());
    ZipError::NonConvergence {
        region: trace.region,
        residual,
        iterations: (trace.residuals.len() - 1).min(cfg.max_iter),
    }
}

/// Inverse of the unnormalized slit map at `w` in the closed upper half-plane.
///
/// Real `w` takes a safeguarded one-dimensional path. `w = 0` returns `p`.
pub fn slit_inverse<T: Real>(w: Complex<T>, sp: &SlitParams<T>, cfg: &NewtonConfig<T>) -> Result<Complex<T>> {
    if w.im.is_zero() {
        return real_preimage(w.re, sp).map(|x| Complex::new(x, T::zero()));
    }
    let designated = classify_region(w, sp, cfg)?;
    let problem = Problem { sp, w, cfg };
    let first = problem.run(designated)?;
    if problem.accepted(&first) {
        return Ok(first.z);
    }
    let mut best = first;
    for region in RegionLabel::LADDER {
        if region == designated {
            continue;
        }
        let trace = problem.run(region)?;
        if problem.accepted(&trace) {
            return Ok(trace.z);
        }
        if trace.residuals.last() < best.residuals.last() {
            best = trace;
        }
    }
    let mut err = non_convergence(&best, cfg);
    if let ZipError::NonConvergence { region, .. } = &mut err {
        *region = designated;
    }
    Err(err)
}

/// Real preimage of a real value: `x > p` for `w > 0`, `x < p − 1` for `w < 0`.
fn real_preimage<T: Real>(w: T, sp: &SlitParams<T>) -> Result<T> {
    let p = sp.p;
    let q = T::one() - p;
    if w.is_zero() {
        return Ok(p);
    }
    // With x = p + s (or x = p − 1 − s), f = s^α (s + 1)^β; solve in σ = ln s.
    let (alpha, beta) = if w > T::zero() { (p, q) } else { (q, p) };
    let sigma = solve_log_monotone(w.abs().ln(), alpha, beta)?;
    let s = sigma.exp();
    Ok(if w > T::zero() { p + s } else { -q - s })
}

fn softplus<T: Real>(x: T) -> T {
    if x > lit(30.0) {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Solves `α σ + β log(1 + e^σ) = target`. The left side is increasing and
/// convex in σ, so Newton converges from any start once it is right of the
/// root; bisection keeps it honest otherwise.
fn solve_log_monotone<T: Real>(target: T, alpha: T, beta: T) -> Result<T> {
    let h = |s: T| alpha * s + beta * softplus(s) - target;
    let dh = |s: T| {
        let sig = if s > T::zero() {
            T::one() / (T::one() + (-s).exp())
        } else {
            let e = s.exp();
            e / (T::one() + e)
        };
        alpha + beta * sig
    };
    // h(target) ≥ 0 since softplus ≥ 0 and α + β = 1 when target ≥ 0;
    // h(target / α) ≥ 0 in general.
    let mut hi = if target >= T::zero() { target } else { target / alpha };
    let mut lo = target - lit::<T>(1.0);
    while h(lo) > T::zero() {
        lo = lo - (lo.abs() + T::one());
    }
    while h(hi) < T::zero() {
        hi = hi + (hi.abs() + T::one());
    }
    let mut s = hi;
    for _ in 0..200 {
        let v = h(s);
        if v.is_zero() {
            return Ok(s);
        }
        if v > T::zero() {
            hi = s;
        } else {
            lo = s;
        }
        let mut next = s - v / dh(s);
        if !(next > lo && next < hi) {
            next = (lo + hi) * lit(0.5);
        }
        if (next - s).abs() <= lit::<T>(4.0) * T::epsilon() * s.abs().max(T::one()) {
            return Ok(next);
        }
        s = next;
    }
    Err(ZipError::NonConvergence {
        region: RegionLabel::SectorP,
        residual: h(s).abs().as_f64(),
        iterations: 200,
    })
}

/// Preimage in `(p − 1, p)` of the slit point at distance `r` from `0`
/// (unnormalized units): solves `(p − x)^p (x + 1 − p)^{1−p} = r`.
pub fn slit_side_preimage<T: Real>(r: T, sp: &SlitParams<T>, side: SlitSide) -> Result<T> {
    let p = sp.p;
    let q = T::one() - p;
    let len = sp.slit_length;
    if !(r >= T::zero()) || r > len * (T::one() + lit(1e-12)) {
        return Err(ZipError::Domain(format!("{r} is not on the slit of length {len}")));
    }
    if r >= len {
        return Ok(T::zero());
    }
    if r.is_zero() {
        return Ok(match side {
            SlitSide::Right => p,
            SlitSide::Left => -q,
        });
    }
    let logf = |x: T| (p - x).ln() * p + (x + q).ln() * q;
    let target = r.ln();
    // log f is concave on (p − 1, p) with its maximum at 0; bisect then polish.
    let (mut lo, mut hi) = match side {
        SlitSide::Right => (T::zero(), p),
        SlitSide::Left => (-q, T::zero()),
    };
    for _ in 0..200 {
        let mid = (lo + hi) * lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        let above = logf(mid) > target;
        match (side, above) {
            (SlitSide::Right, true) | (SlitSide::Left, false) => lo = mid,
            _ => hi = mid,
        }
    }
    Ok((lo + hi) * lit(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::sqrt_upper;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn half() -> SlitParams<f64> {
        SlitParams::unnormalized(0.5).unwrap()
    }

    #[test]
    fn classification_examples() {
        let cfg = NewtonConfig::default();
        let sp = half();
        assert!((sp.slit_length - 0.5).abs() < 1e-16);
        assert_eq!(classify_region(c(0.0, 1.0), &sp, &cfg).unwrap(), RegionLabel::Far);
        assert_eq!(classify_region(sp.tip_unnormalized(), &sp, &cfg).unwrap(), RegionLabel::Tip);
        let w = Complex::from_polar(0.1, std::f64::consts::FRAC_PI_4);
        assert_eq!(classify_region(w, &sp, &cfg).unwrap(), RegionLabel::SectorP);
        let w = Complex::from_polar(0.1, 3.0 * std::f64::consts::FRAC_PI_4);
        assert_eq!(classify_region(w, &sp, &cfg).unwrap(), RegionLabel::SectorQ);
        assert!(classify_region(c(0.0, 0.0), &sp, &cfg).is_err());
    }

    #[test]
    fn half_case_examples() {
        let cfg = NewtonConfig::default();
        let sp = half();
        let exact = |w: Complex<f64>| sqrt_upper(w * w + 0.25);
        for w in [c(0.0, 2.0), c(1e-6, 0.49), Complex::from_polar(0.1, 0.25 * std::f64::consts::PI)] {
            let z = slit_inverse(w, &sp, &cfg).unwrap();
            assert!((z - exact(w)).norm() < 1e-12, "w={w} z={z}");
        }
        assert!((slit_inverse(c(0.0, 2.0), &sp, &cfg).unwrap() - c(0.0, 3.75f64.sqrt())).norm() < 1e-12);
        let z = slit_inverse(sp.tip_unnormalized(), &sp, &cfg).unwrap();
        assert!(z.norm() < 1e-12);
    }

    #[test]
    fn tip_recovers_small_preimage() {
        let cfg = NewtonConfig::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..100 {
            let sp = SlitParams::unnormalized(rng.gen_range(0.05..0.95)).unwrap();
            let z_star = c(0.0, 1e-3);
            let w = sp.unnormalized_at(z_star);
            let z = newton_tip(w, &sp, &cfg).unwrap().z;
            assert!((z - z_star).norm() < 1e-9 * 1e-3 + 1e-14, "p={} z={z}", sp.p);
        }
    }

    #[test]
    fn real_axis_preimages() {
        let cfg = NewtonConfig::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(32);
        for _ in 0..200 {
            let sp = SlitParams::unnormalized(rng.gen_range(0.05..0.95)).unwrap();
            let s: f64 = rng.gen_range(1e-4..10.0);
            for x_star in [sp.p + s, sp.p - 1.0 - s] {
                let w = sp.unnormalized_at(c(x_star, 0.0));
                assert_eq!(w.im, 0.0);
                let x = slit_inverse(w, &sp, &cfg).unwrap();
                assert_eq!(x.im, 0.0);
                assert!((x.re - x_star).abs() < 1e-13 * x_star.abs().max(1.0), "p={} x*={x_star} x={x}", sp.p);
            }
        }
    }

    #[test]
    fn slit_side_preimages_land_on_the_slit() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(33);
        for _ in 0..200 {
            let sp = SlitParams::unnormalized(rng.gen_range(0.05..0.95)).unwrap();
            let x_star = rng.gen_range(sp.p - 1.0..sp.p) * 0.999;
            let r = sp.unnormalized_at(c(x_star, 0.0)).norm();
            let side = if x_star > 0.0 { SlitSide::Right } else { SlitSide::Left };
            let x = slit_side_preimage(r, &sp, side).unwrap();
            // Near x = 0 the map is quadratic, so only √ε accuracy is available there.
            let tol = 1e-13 / (x_star.abs() + 1e-7);
            assert!((x - x_star).abs() < tol.max(1e-13), "p={} x*={x_star} x={x}", sp.p);
        }
    }

    #[test]
    fn forward_generated_round_trip() {
        let cfg = NewtonConfig::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(34);
        for _ in 0..1000 {
            let sp = SlitParams::unnormalized(rng.gen_range(0.05..0.95)).unwrap();
            let z_star = c(rng.gen_range(-3.0..3.0), rng.gen_range(1e-6..3.0));
            let w = sp.unnormalized_at(z_star);
            let z = slit_inverse(w, &sp, &cfg).unwrap();
            assert!((z - z_star).norm() < 1e-10 * z_star.norm().max(1.0), "p={} z*={z_star} z={z}", sp.p);
        }
    }

    #[test]
    fn config_validation() {
        assert!(NewtonConfig::<f64>::with_tol(1e-13).is_ok());
        assert!(NewtonConfig::<f64>::with_tol(1e-3).is_err());
        let cfg = NewtonConfig::<f64> { max_iter: 4, ..Default::default() };
        assert!(cfg.validate().is_err());
    }
}
