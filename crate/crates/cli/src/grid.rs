use std::f64::consts::TAU;
use std::fmt::Write as _;

use clap::ValueEnum;
use num_complex::Complex;
use zipmap::{Ext64, Pipeline, Polyline, ZipError, C64};

#[derive(Clone, Copy, ValueEnum)]
pub enum GridKind {
    Polar,
    Cartesian,
}

pub struct GridSpec {
    pub kind: GridKind,
    pub rings: usize,
    pub rays: usize,
    pub geometric: bool,
    pub samples: usize,
}

/// A labelled polyline in the domain of the map.
pub struct GridCurve {
    pub label: String,
    pub points: Vec<C64>,
}

fn ring_radius(k: usize, spec: &GridSpec) -> f64 {
    if spec.geometric {
        1.0 - 0.5f64.powi(k as i32)
    } else {
        k as f64 / (spec.rings + 1) as f64
    }
}

/// Curves of the disc grid, before mapping.
fn disc_grid(spec: &GridSpec) -> Vec<(String, Vec<C64>)> {
    let m = spec.samples.max(2);
    let lerp = |i: usize| i as f64 / (m - 1) as f64;
    let mut out = Vec::new();
    match spec.kind {
        GridKind::Polar => {
            for k in 1..=spec.rings {
                let r = ring_radius(k, spec);
                let pts = (0..=m).map(|i| Complex::from_polar(r, TAU * i as f64 / m as f64)).collect();
                out.push((format!("ring{k}"), pts));
            }
            for j in 0..spec.rays {
                let t = TAU * j as f64 / spec.rays as f64;
                let pts = (0..m).map(|i| Complex::from_polar(lerp(i), t)).collect();
                out.push((format!("ray{j}"), pts));
            }
        }
        GridKind::Cartesian => {
            let line = |k: usize, count: usize, vertical: bool| {
                let x = -1.0 + 2.0 * k as f64 / (count + 1) as f64;
                let h = (1.0 - x * x).sqrt();
                (0..m)
                    .map(|i| {
                        let y = -h + 2.0 * h * lerp(i);
                        if vertical { Complex::new(x, y) } else { Complex::new(y, x) }
                    })
                    .collect()
            };
            for k in 1..=spec.rings {
                out.push((format!("vertical{k}"), line(k, spec.rings, true)));
            }
            for k in 1..=spec.rays {
                out.push((format!("horizontal{k}"), line(k, spec.rays, false)));
            }
        }
    }
    out
}

/// Images of the grid curves under the inverse map; points sent to `∞`
/// are dropped.
pub fn grid_images(p: &Pipeline, spec: &GridSpec) -> Result<Vec<GridCurve>, ZipError> {
    disc_grid(spec)
        .into_iter()
        .map(|(label, pts)| {
            let points = pts
                .into_iter()
                .map(|w| p.eval_inverse(w.into()))
                .filter_map(|r| match r {
                    Ok(Ext64::Finite(z)) => Some(Ok(z)),
                    Ok(Ext64::Infinity) => None,
                    Err(e) => Some(Err(e)),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(GridCurve { label, points })
        })
        .collect()
}

pub fn to_csv(curves: &[GridCurve]) -> String {
    let mut s = String::from("# curve,re,im\n");
    for c in curves {
        for z in &c.points {
            let _ = writeln!(s, "{},{},{}", c.label, zipmap::io::format_real(z.re), zipmap::io::format_real(z.im));
        }
    }
    s
}

fn path_data(runs: &[Vec<C64>], map: impl Fn(C64) -> (f64, f64)) -> String {
    let mut d = String::new();
    for run in runs.iter().filter(|r| r.len() > 1) {
        for (i, &z) in run.iter().enumerate() {
            let (x, y) = map(z);
            let _ = write!(d, "{}{x:.3} {y:.3} ", if i == 0 { "M" } else { "L" });
        }
    }
    d.trim_end().to_string()
}

/// SVG drawing of the grid images together with the boundary.
pub fn to_svg(curves: &[GridCurve], boundary: &Polyline<f64>) -> String {
    // Finite stretches of the boundary, closed up when the curve is.
    let mut runs: Vec<Vec<C64>> = vec![Vec::new()];
    for z in &boundary.points {
        match z.finite() {
            Some(z) => runs.last_mut().expect("at least one run").push(z),
            None => runs.push(Vec::new()),
        }
    }
    if boundary.closed {
        if let Some(first) = boundary.points.first().and_then(|z| z.finite()) {
            runs.last_mut().expect("at least one run").push(first);
        }
    }
    let all = runs.iter().flatten().chain(curves.iter().flat_map(|c| &c.points));
    let (mut lo, mut hi) = (Complex::new(f64::INFINITY, f64::INFINITY), Complex::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for z in all {
        lo = Complex::new(lo.re.min(z.re), lo.im.min(z.im));
        hi = Complex::new(hi.re.max(z.re), hi.im.max(z.im));
    }
    let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-300);
    let size = 800.0;
    let margin = 10.0;
    let scale = (size - 2.0 * margin) / span;
    let map = |z: C64| (margin + (z.re - lo.re) * scale, margin + (hi.im - z.im) * scale);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    for c in curves {
        let _ = writeln!(
            s,
            r##"<path id="{}" d="{}" fill="none" stroke="#4a78b0" stroke-width="0.6"/>"##,
            c.label,
            path_data(std::slice::from_ref(&c.points), map)
        );
    }
    let _ = writeln!(
        s,
        r##"<path id="boundary" d="{}" fill="none" stroke="#000000" stroke-width="1.2"/>"##,
        path_data(&runs, map)
    );
    s.push_str("</svg>\n");
    s
}
