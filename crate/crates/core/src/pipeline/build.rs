use num_complex::Complex;

use super::{MapPipeline, MapStep, Prevertex, Variant};
use crate::complex::{pole_map, signed_area2, ExtendedComplex};
use crate::error::{Result, ZipError};
use crate::maps::{InitialMap, Sector, SlitParams, TerminalMap};
use crate::newton::NewtonConfig;
use crate::scalar::{lit, Real};

/// State of a data point while the composition is assembled.
#[derive(Debug, Clone, Copy)]
enum Track<T> {
    /// Not yet reached: an interior point of the current half-plane.
    Pending(Complex<T>),
    /// On the boundary as a single point.
    Single(ExtendedComplex<T>),
    /// On the boundary with distinct left and right sides.
    Split(ExtendedComplex<T>, ExtendedComplex<T>),
}

struct Builder<T> {
    steps: Vec<MapStep<T>>,
    tracks: Vec<Track<T>>,
    cfg: NewtonConfig<T>,
}

fn is_zero<T: Real>(v: &ExtendedComplex<T>) -> bool {
    matches!(v, ExtendedComplex::Finite(z) if z.re.is_zero() && z.im.is_zero())
}

impl<T: Real> Builder<T> {
    fn new(initial: InitialMap<T>, points: &[ExtendedComplex<T>], cfg: NewtonConfig<T>) -> Self {
        let tracks = points
            .iter()
            .map(|&z| match initial.forward(z) {
                ExtendedComplex::Finite(w) => Track::Pending(w),
                inf => Track::Single(inf),
            })
            .collect();
        Builder { steps: vec![MapStep::Initial(initial)], tracks, cfg }
    }

    /// The image of data point `k`, checked to lie inside `ℍ`.
    fn pending(&self, k: usize) -> Result<Complex<T>> {
        match self.tracks[k] {
            Track::Pending(z) if z.im > lit::<T>(1e-10) * z.norm() => Ok(z),
            Track::Pending(z) => Err(ZipError::OutOfOrder { index: k, imag: z.im.as_f64() }),
            _ => Err(ZipError::OutOfOrder { index: k, imag: 0.0 }),
        }
    }

    /// Append `step`, pushing every tracked point through it. `tip` becomes
    /// the new zero; `mid` is a point lying on the slit itself.
    fn push(&mut self, step: MapStep<T>, tip: usize, mid: Option<usize>) -> Result<()> {
        let index = self.steps.len();
        let wrap = |e: ZipError| ZipError::StepFailure { step: index, source: Box::new(e) };
        let fwd = |v: ExtendedComplex<T>| step.forward(v, false, &self.cfg).map_err(wrap);
        let base = step.split_base();
        let mid_split = step.split_intermediate().map_err(wrap)?;
        let mut next = Vec::with_capacity(self.tracks.len());
        for (j, t) in self.tracks.iter().enumerate() {
            let n = if j == tip {
                Track::Single(ExtendedComplex::zero())
            } else if Some(j) == mid {
                let (l, r) = mid_split.expect("circular step carries an intermediate point");
                Track::Split(ExtendedComplex::real(l), ExtendedComplex::real(r))
            } else {
                match *t {
                    Track::Pending(z) => match fwd(z.into())? {
                        ExtendedComplex::Finite(w) => Track::Pending(w),
                        inf => Track::Single(inf),
                    },
                    Track::Single(v) if is_zero(&v) && base.is_some() => {
                        let (l, r) = base.unwrap();
                        Track::Split(ExtendedComplex::real(l), ExtendedComplex::real(r))
                    }
                    Track::Single(v) => Track::Single(snap(fwd(v)?)),
                    Track::Split(l, r) => Track::Split(snap(fwd(l)?), snap(fwd(r)?)),
                }
            };
            next.push(n);
        }
        self.tracks = next;
        self.steps.push(step);
        Ok(())
    }

    fn real_image(&self, k: usize) -> Result<Option<T>> {
        match self.tracks[k] {
            Track::Single(ExtendedComplex::Finite(z)) => Ok(Some(z.re)),
            Track::Single(ExtendedComplex::Infinity) => Ok(None),
            _ => Err(ZipError::DegenerateInput(format!(
                "data point {k} has no finite real image before the closing map"
            ))),
        }
    }

    /// Close a bounded construction with `terminal` and record prevertices.
    fn finish_bounded(
        mut self,
        variant: Variant,
        terminal: TerminalMap<T>,
        points: Vec<ExtendedComplex<T>>,
        orientation: i32,
    ) -> Result<MapPipeline<T>> {
        let index = self.steps.len();
        let wrap = |e: ZipError| ZipError::StepFailure { step: index, source: Box::new(e) };
        let at = |v: ExtendedComplex<T>, exterior: bool| terminal.forward(v, exterior).map_err(wrap);
        let mut prevertices = Vec::with_capacity(points.len());
        for t in &self.tracks {
            let pv = match *t {
                Track::Single(v) => Prevertex { interior: at(v, false)?, exterior: at(v, true)? },
                Track::Split(l, r) => {
                    let (inside, outside) = if orientation > 0 { (l, r) } else { (r, l) };
                    Prevertex { interior: snap(at(inside, false)?), exterior: snap(at(outside, true)?) }
                }
                // A point on the closing arc itself.
                Track::Pending(z) => Prevertex {
                    interior: snap(at(z.into(), false)?),
                    exterior: snap(at(z.into(), true)?),
                },
            };
            prevertices.push(pv);
        }
        self.steps.push(MapStep::Terminal(terminal));
        Ok(MapPipeline {
            variant,
            steps: self.steps,
            data_points: points,
            prevertices,
            orientation,
            bounded: true,
            newton: self.cfg,
        })
    }

    fn finish_unbounded(self, variant: Variant, points: Vec<ExtendedComplex<T>>) -> MapPipeline<T> {
        let prevertices = self
            .tracks
            .iter()
            .map(|t| match *t {
                Track::Single(v) => Prevertex::single(v),
                Track::Split(l, r) => Prevertex { interior: l, exterior: r },
                Track::Pending(z) => Prevertex::single(z.into()),
            })
            .collect();
        MapPipeline {
            variant,
            steps: self.steps,
            data_points: points,
            prevertices,
            orientation: 1,
            bounded: false,
            newton: self.cfg,
        }
    }
}

/// Boundary values are real; drop rounding residue in the imaginary part.
fn snap<T: Real>(v: ExtendedComplex<T>) -> ExtendedComplex<T> {
    match v {
        ExtendedComplex::Finite(z) => ExtendedComplex::real(z.re),
        inf => inf,
    }
}

/// Checks shared by all builders. Returns the finite points and whether
/// the first point is `∞`.
fn check_points<T: Real>(points: &[ExtendedComplex<T>], need: usize) -> Result<(Vec<Complex<T>>, bool)> {
    if points.len() < need {
        return Err(ZipError::TooFewPoints { need, got: points.len() });
    }
    let unbounded = points[0].is_infinite();
    let finite: Vec<Complex<T>> = points[usize::from(unbounded)..]
        .iter()
        .map(|p| {
            p.finite()
                .ok_or_else(|| ZipError::Precondition("only the first point may be ∞".into()))
        })
        .collect::<Result<_>>()?;
    let scale = finite.iter().map(|z| z.norm()).fold(T::zero(), T::max).max(T::min_positive_value());
    let n = finite.len();
    let pairs = if unbounded { n - 1 } else { n };
    for i in 0..pairs {
        let (a, b) = (finite[i], finite[(i + 1) % n]);
        if (a - b).norm() <= lit::<T>(1e-14) * scale {
            return Err(ZipError::DegenerateInput(format!("points {i} and {} coincide", (i + 1) % n)));
        }
    }
    Ok((finite, unbounded))
}

fn orientation_of<T: Real>(points: &[Complex<T>]) -> Result<i32> {
    let area = signed_area2(points);
    let scale = points.iter().map(|z| z.norm_sqr()).fold(T::zero(), T::max);
    if area.abs() <= lit::<T>(1e-14) * scale {
        return Err(ZipError::DegenerateInput("data points enclose no area".into()));
    }
    Ok(if area > T::zero() { 1 } else { -1 })
}

#[derive(Clone, Copy)]
enum SlitKind {
    Geodesic,
    Straight,
}

fn build_one_point<T: Real>(
    points: &[ExtendedComplex<T>],
    kind: SlitKind,
    cfg: NewtonConfig<T>,
) -> Result<MapPipeline<T>> {
    cfg.validate()?;
    let (finite, unbounded) = check_points(points, 3)?;
    let variant = match kind {
        SlitKind::Geodesic => Variant::Geodesic,
        SlitKind::Straight => Variant::Slit,
    };
    let initial = if unbounded {
        InitialMap::unbounded(finite[0], finite[1])?
    } else {
        InitialMap::geodesic(finite[0], finite[1])?
    };
    let mut b = Builder::new(initial, points, cfg);
    // The first welded point sits at 0 exactly.
    b.tracks[1] = Track::Single(ExtendedComplex::zero());
    if !unbounded {
        b.tracks[0] = Track::Single(ExtendedComplex::Infinity);
    }
    for k in 2..points.len() {
        let zeta = b.pending(k)?;
        let step = match kind {
            SlitKind::Geodesic => MapStep::geodesic(zeta)?,
            SlitKind::Straight => MapStep::StraightSlit(SlitParams::new(zeta)?),
        };
        b.push(step, k, None)?;
    }
    if unbounded {
        return Ok(b.finish_unbounded(variant, points.to_vec()));
    }
    let orientation = orientation_of(&finite)?;
    let zeta = b.real_image(0)?;
    let terminal = TerminalMap::geodesic(zeta, -orientation)?;
    b.finish_bounded(variant, terminal, points.to_vec(), orientation)
}

impl<T: Real> MapPipeline<T> {
    /// The geodesic algorithm. A leading `∞` builds the map of the
    /// complement of an arc from `∞` through the remaining points.
    pub fn build_geodesic(points: &[ExtendedComplex<T>]) -> Result<Self> {
        Self::build_geodesic_with(points, NewtonConfig::default())
    }

    pub fn build_geodesic_with(points: &[ExtendedComplex<T>], cfg: NewtonConfig<T>) -> Result<Self> {
        build_one_point(points, SlitKind::Geodesic, cfg)
    }

    /// The slit algorithm: straight slits inverted by Newton's method.
    pub fn build_slit(points: &[ExtendedComplex<T>]) -> Result<Self> {
        Self::build_slit_with(points, NewtonConfig::default())
    }

    pub fn build_slit_with(points: &[ExtendedComplex<T>], cfg: NewtonConfig<T>) -> Result<Self> {
        build_one_point(points, SlitKind::Straight, cfg)
    }

    /// The zipper algorithm: circular slits through pairs of points.
    pub fn build_zipper(points: &[ExtendedComplex<T>]) -> Result<Self> {
        Self::build_zipper_with(points, NewtonConfig::default())
    }

    pub fn build_zipper_with(points: &[ExtendedComplex<T>], cfg: NewtonConfig<T>) -> Result<Self> {
        cfg.validate()?;
        if points.len() % 2 == 1 {
            return Err(ZipError::OddPointCount(points.len()));
        }
        let (finite, unbounded) = check_points(points, 4)?;
        if unbounded {
            return Err(ZipError::Precondition("the zipper algorithm needs finite data".into()));
        }
        let mut b = Builder::new(InitialMap::zipper(finite[0], finite[1], finite[2])?, points, cfg);
        b.tracks[0] = Track::Single(ExtendedComplex::Infinity);
        b.tracks[1] = Track::Split(ExtendedComplex::real(-T::one()), ExtendedComplex::real(T::one()));
        b.tracks[2] = Track::Single(ExtendedComplex::zero());
        let last = points.len() - 1;
        for k in 2..=last / 2 {
            let c = b.pending(2 * k - 1)?;
            let a = b.pending(2 * k)?;
            let step = MapStep::circular(a, c, &b.cfg)?;
            b.push(step, 2 * k, Some(2 * k - 1))?;
        }
        let orientation = orientation_of(&finite)?;
        let zeta = b.real_image(0)?;
        let prev = b.pending(last)?;
        let sector = if orientation > 0 { Sector::Second } else { Sector::First };
        if pole_map(prev, zeta).is_infinite() {
            return Err(ZipError::TangentArc);
        }
        let terminal = TerminalMap::zipper(zeta, prev, sector)?;
        b.finish_bounded(Variant::Zipper, terminal, points.to_vec(), orientation)
    }

    /// Build with the named construction.
    pub fn build(variant: Variant, points: &[ExtendedComplex<T>], cfg: NewtonConfig<T>) -> Result<Self> {
        match variant {
            Variant::Geodesic => Self::build_geodesic_with(points, cfg),
            Variant::Slit => Self::build_slit_with(points, cfg),
            Variant::Zipper => Self::build_zipper_with(points, cfg),
            Variant::Welding => Err(ZipError::Precondition(
                "welding pipelines are built from a welding spec".into(),
            )),
        }
    }
}
