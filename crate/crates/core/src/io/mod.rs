//! Plain-text formats: point and boundary CSV files, disc lists, and the
//! JSON pipeline document.

mod document;

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex;

use crate::chain::{Disc, DiscChain};
use crate::complex::{ExtendedComplex, Polyline};
use crate::error::{Result, ZipError};
use crate::scalar::Real;

pub use document::{pipeline_from_json, pipeline_to_json};

/// Shortest decimal that parses back to the same value.
pub fn format_real<T: Real>(x: T) -> String {
    let x = x.as_f64();
    let a = x.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn format_point<T: Real>(z: ExtendedComplex<T>) -> String {
    match z {
        ExtendedComplex::Infinity => "inf,inf".to_string(),
        ExtendedComplex::Finite(z) => format!("{},{}", format_real(z.re), format_real(z.im)),
    }
}

fn parse_real<T: Real>(field: &str, line: usize) -> Result<T> {
    let x: f64 = field
        .trim()
        .parse()
        .map_err(|_| ZipError::Format(format!("line {line}: cannot parse {:?} as a number", field.trim())))?;
    if !x.is_finite() {
        return Err(ZipError::Format(format!("line {line}: non-finite value {:?}", field.trim())));
    }
    Ok(T::lit(x))
}

fn is_inf(field: &str) -> bool {
    field.trim().eq_ignore_ascii_case("inf")
}

/// Non-comment lines with their 1-based line numbers.
fn rows(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        (!l.is_empty() && !l.starts_with('#')).then(|| (i + 1, l.split(',').collect()))
    })
}

fn parse_point<T: Real>(fields: &[&str], line: usize) -> Result<ExtendedComplex<T>> {
    match fields {
        [f] if is_inf(f) => Ok(ExtendedComplex::Infinity),
        [a, b] if is_inf(a) && is_inf(b) => Ok(ExtendedComplex::Infinity),
        [a, b] => Ok(Complex::new(parse_real(a, line)?, parse_real(b, line)?).into()),
        _ => Err(ZipError::Format(format!("line {line}: expected `re,im`, found {} field(s)", fields.len()))),
    }
}

/// Parse a points file: one `re,im` pair per line, `#` comments, and `inf`
/// allowed as the first point.
pub fn parse_points<T: Real>(text: &str) -> Result<Vec<ExtendedComplex<T>>> {
    let mut out = Vec::new();
    for (line, fields) in rows(text) {
        let z = parse_point(&fields, line)?;
        if z.is_infinite() && !out.is_empty() {
            return Err(ZipError::Format(format!("line {line}: only the first point may be inf")));
        }
        out.push(z);
    }
    if out.len() < 2 {
        return Err(ZipError::Format(format!("a points file needs at least 2 rows (found {})", out.len())));
    }
    Ok(out)
}

/// Inverse of [`parse_points`].
pub fn format_points<T: Real>(points: &[ExtendedComplex<T>]) -> String {
    let mut s = String::from("# re,im\n");
    for &z in points {
        let _ = writeln!(s, "{}", format_point(z));
    }
    s
}

/// A sampled boundary as `re,im,is_datapoint` rows.
pub fn format_boundary<T: Real>(curve: &Polyline<T>, is_data: &[bool]) -> String {
    let mut s = String::from("# re,im,is_datapoint\n");
    for (i, &z) in curve.points.iter().enumerate() {
        let flag = u8::from(is_data.get(i).copied().unwrap_or(false));
        let _ = writeln!(s, "{},{flag}", format_point(z));
    }
    s
}

/// Inverse of [`format_boundary`].
pub fn parse_boundary<T: Real>(text: &str) -> Result<(Vec<ExtendedComplex<T>>, Vec<bool>)> {
    let mut points = Vec::new();
    let mut flags = Vec::new();
    for (line, fields) in rows(text) {
        let [a, b, f] = fields[..] else {
            return Err(ZipError::Format(format!("line {line}: expected `re,im,is_datapoint`")));
        };
        points.push(parse_point(&[a, b], line)?);
        flags.push(match f.trim() {
            "0" => false,
            "1" => true,
            other => return Err(ZipError::Format(format!("line {line}: flag must be 0 or 1, found {other:?}"))),
        });
    }
    Ok((points, flags))
}

/// Parse a disc list: one `center_re,center_im,radius` row per disc.
pub fn parse_discs<T: Real>(text: &str, closed: bool) -> Result<DiscChain<T>> {
    let mut discs = Vec::new();
    for (line, fields) in rows(text) {
        let [x, y, r] = fields[..] else {
            return Err(ZipError::Format(format!("line {line}: expected `re,im,radius`")));
        };
        discs.push(Disc::new(Complex::new(parse_real(x, line)?, parse_real(y, line)?), parse_real(r, line)?));
    }
    Ok(DiscChain::new(discs, closed))
}

/// Inverse of [`parse_discs`].
pub fn format_discs<T: Real>(chain: &DiscChain<T>) -> String {
    let mut s = String::from("# re,im,radius\n");
    for d in &chain.discs {
        let _ = writeln!(s, "{},{},{}", format_real(d.center.re), format_real(d.center.im), format_real(d.radius));
    }
    s
}

/// Read a file to a string, reporting the path on failure.
pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| ZipError::Format(format!("{}: {e}", path.display())))
}

/// Write a string to a file, reporting the path on failure.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| ZipError::Format(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ExtendedComplex<f64> {
        Complex::new(re, im).into()
    }

    #[test]
    fn points_round_trip() {
        let pts = vec![ExtendedComplex::Infinity, c(0.1, -2.5e-17), c(1e20, 3.0), c(-0.0, 1.0 / 3.0)];
        let text = format_points(&pts);
        let back: Vec<ExtendedComplex<f64>> = parse_points(&text).unwrap();
        assert_eq!(back, pts);
        assert_eq!(format_points(&back), text);
    }

    #[test]
    fn comments_and_inf_token() {
        let text = "# header\ninf\n\n0, 1\n# note\n2,3\n";
        let pts: Vec<ExtendedComplex<f64>> = parse_points(text).unwrap();
        assert_eq!(pts, vec![ExtendedComplex::Infinity, c(0.0, 1.0), c(2.0, 3.0)]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_points::<f64>("0,0\n1,x\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = parse_points::<f64>("0,0\n1,1\ninf\n").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        assert!(parse_points::<f64>("# only\n1,2\n").is_err());
        assert!(parse_points::<f64>("1,2,3\n4,5\n").unwrap_err().to_string().contains("line 1"));
    }

    #[test]
    fn boundary_round_trip() {
        let curve = Polyline::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)], true).unwrap();
        let text = format_boundary(&curve, &[true, false, true]);
        let (pts, flags) = parse_boundary::<f64>(&text).unwrap();
        assert_eq!(pts, curve.points);
        assert_eq!(flags, vec![true, false, true]);
    }

    #[test]
    fn discs_round_trip() {
        let chain = parse_discs::<f64>("0,0,1\n2,0,1\n", false).unwrap();
        assert_eq!(chain.len(), 2);
        assert_eq!(parse_discs::<f64>(&format_discs(&chain), false).unwrap(), chain);
    }
}
