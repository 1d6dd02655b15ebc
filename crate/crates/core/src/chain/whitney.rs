use std::collections::{HashMap, HashSet, VecDeque};

use num_complex::Complex;

use super::{Disc, DiscChain};
use crate::complex::geometry::{point_in_polygon, segments_intersect};
use crate::complex::Polyline;
use crate::error::{Result, ZipError};
use crate::scalar::{lit, Real};

type Cell = (i64, i64);

/// Disc-chain from a dyadic decomposition of a polygon inside `[0, 1]²`.
///
/// The cells of side `2⁻ⁿ` whose doubled square lies in the polygon are
/// collected; their edge-connected component containing `z0` is the domain
/// `Ω_n`. Discs of radius `2⁻ⁿ/2` are placed at the vertices of the outer
/// boundary of `Ω_n`, so consecutive discs touch at edge midpoints.
///
/// Holes of `Ω_n` are ignored, and cells meeting the rest of `Ω_n` only at a
/// corner are dropped so that the boundary walk never revisits a vertex.
pub fn whitney_disc_chain<T: Real>(domain: &Polyline<T>, n: u32, z0: Complex<T>) -> Result<DiscChain<T>> {
    if !domain.closed || domain.points.iter().any(|p| p.is_infinite()) {
        return Err(ZipError::Precondition("a closed polygon of finite points is required".into()));
    }
    let poly = domain.finite_points();
    if poly.len() < 3 {
        return Err(ZipError::TooFewPoints { need: 3, got: poly.len() });
    }
    let unit = |x: T| x >= T::zero() && x <= T::one();
    if !poly.iter().all(|p| unit(p.re) && unit(p.im)) {
        return Err(ZipError::Precondition("polygon must lie in the unit square".into()));
    }
    if !(1..=30).contains(&n) {
        return Err(ZipError::Precondition("subdivision level must be between 1 and 30".into()));
    }
    if !point_in_polygon(&poly, z0) {
        return Err(ZipError::Domain(format!("{z0} is not inside the polygon")));
    }
    let side = 1i64 << n;
    let h = T::one() / lit::<T>(side as f64);

    let good: HashSet<Cell> = (0..side)
        .flat_map(|i| (0..side).map(move |j| (i, j)))
        .filter(|&(i, j)| doubled_inside(&poly, i, j, h))
        .collect();
    let start = (
        (z0.re / h).floor().to_i64().unwrap_or(0).clamp(0, side - 1),
        (z0.im / h).floor().to_i64().unwrap_or(0).clamp(0, side - 1),
    );
    if !good.contains(&start) {
        return Err(ZipError::InfeasibleChain(format!(
            "no dyadic square of level {n} around {z0} has its double inside the polygon"
        )));
    }
    let mut cells = component(&good, start);
    loop {
        let pinches = pinch_cells(&cells, start);
        if pinches.is_empty() {
            break;
        }
        for c in pinches {
            cells.remove(&c);
        }
        cells = component(&cells, start);
    }

    let vertices = outer_boundary(&cells);
    let r = h * lit(0.5);
    let discs = vertices
        .into_iter()
        .map(|(i, j)| Disc::new(Complex::new(lit::<T>(i as f64) * h, lit::<T>(j as f64) * h), r))
        .collect();
    Ok(DiscChain::new(discs, true))
}

/// Whether the square of side `2h` concentric with cell `(i, j)` lies in the
/// polygon.
fn doubled_inside<T: Real>(poly: &[Complex<T>], i: i64, j: i64, h: T) -> bool {
    let lo = |k: i64| (lit::<T>(k as f64) - lit(0.5)) * h;
    let hi = |k: i64| (lit::<T>(k as f64) + lit(1.5)) * h;
    let corners = [
        Complex::new(lo(i), lo(j)),
        Complex::new(hi(i), lo(j)),
        Complex::new(hi(i), hi(j)),
        Complex::new(lo(i), hi(j)),
    ];
    if !corners.iter().all(|&c| point_in_polygon(poly, c)) {
        return false;
    }
    let m = poly.len();
    (0..m).all(|e| {
        let (a, b) = (poly[e], poly[(e + 1) % m]);
        let inside_box = |p: Complex<T>| p.re >= lo(i) && p.re <= hi(i) && p.im >= lo(j) && p.im <= hi(j);
        !inside_box(a) && (0..4).all(|s| !segments_intersect(a, b, corners[s], corners[(s + 1) % 4]))
    })
}

fn component(cells: &HashSet<Cell>, start: Cell) -> HashSet<Cell> {
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some((i, j)) = queue.pop_front() {
        for nb in [(i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)] {
            if cells.contains(&nb) && seen.insert(nb) {
                queue.push_back(nb);
            }
        }
    }
    seen
}

/// For every grid vertex where two cells of the set meet diagonally and the
/// other two are missing, one of the two cells (never `keep`).
fn pinch_cells(cells: &HashSet<Cell>, keep: Cell) -> Vec<Cell> {
    let degree = |c: Cell| {
        [(1, 0), (-1, 0), (0, 1), (0, -1)]
            .iter()
            .filter(|(di, dj)| cells.contains(&(c.0 + di, c.1 + dj)))
            .count()
    };
    let mut out = HashSet::new();
    for &(i, j) in cells {
        // Vertex (i + 1, j + 1): cells (i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1).
        let ne = (i + 1, j + 1);
        let (e, n) = ((i + 1, j), (i, j + 1));
        if cells.contains(&ne) && !cells.contains(&e) && !cells.contains(&n) {
            out.insert(pick((i, j), ne, keep, degree));
        }
        // Vertex (i + 1, j): cells (i, j), (i + 1, j − 1).
        let se = (i + 1, j - 1);
        let (e, s) = ((i + 1, j), (i, j - 1));
        if cells.contains(&se) && !cells.contains(&e) && !cells.contains(&s) {
            out.insert(pick((i, j), se, keep, degree));
        }
    }
    let mut out: Vec<Cell> = out.into_iter().collect();
    out.sort_unstable();
    out
}

fn pick(a: Cell, b: Cell, keep: Cell, degree: impl Fn(Cell) -> usize) -> Cell {
    if a == keep {
        b
    } else if b == keep || degree(a) < degree(b) || (degree(a) == degree(b) && a < b) {
        a
    } else {
        b
    }
}

/// Vertices of the outer boundary of a pinch-free edge-connected set of
/// cells, counterclockwise.
fn outer_boundary(cells: &HashSet<Cell>) -> Vec<Cell> {
    // Directed boundary edges with the cell on their left.
    let mut next: HashMap<Cell, Cell> = HashMap::new();
    for &(i, j) in cells {
        if !cells.contains(&(i, j - 1)) {
            next.insert((i, j), (i + 1, j));
        }
        if !cells.contains(&(i + 1, j)) {
            next.insert((i + 1, j), (i + 1, j + 1));
        }
        if !cells.contains(&(i, j + 1)) {
            next.insert((i + 1, j + 1), (i, j + 1));
        }
        if !cells.contains(&(i - 1, j)) {
            next.insert((i, j + 1), (i, j));
        }
    }
    let start = *cells.iter().min_by_key(|&&(i, j)| (j, i)).expect("nonempty cell set");
    let mut out = vec![start];
    let mut v = next[&start];
    while v != start {
        out.push(v);
        v = next[&v];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::validate_disc_chain;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn square(margin: f64) -> Polyline<f64> {
        let (a, b) = (margin, 1.0 - margin);
        Polyline::from_complex(&[c(a, a), c(b, a), c(b, b), c(a, b)], true).unwrap()
    }

    #[test]
    fn shrunk_square_gives_square_ring() {
        let ch = whitney_disc_chain(&square(0.1), 3, c(0.5, 0.5)).unwrap();
        assert!(validate_disc_chain(&ch).ok);
        assert!(ch.discs.iter().all(|d| d.radius == 1.0 / 16.0));
        let xs: Vec<f64> = ch.discs.iter().map(|d| d.center.re).collect();
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        // Cells 2..=5 survive, so the ring spans [1/4, 3/4].
        assert_eq!((lo, hi), (0.25, 0.75));
        assert_eq!(ch.len(), 16);
    }

    #[test]
    fn l_shape_validates_across_levels() {
        let l = Polyline::from_complex(
            &[c(0.05, 0.05), c(0.95, 0.05), c(0.95, 0.4), c(0.4, 0.4), c(0.4, 0.95), c(0.05, 0.95)],
            true,
        )
        .unwrap();
        for n in 3..=6 {
            let ch = whitney_disc_chain(&l, n, c(0.2, 0.2)).unwrap();
            assert!(validate_disc_chain(&ch).ok, "n = {n}");
        }
    }

    #[test]
    fn diagonal_contact_is_removed() {
        let cells: HashSet<Cell> = [(0, 0), (1, 0), (0, 1), (2, 1), (2, 2)].into_iter().collect();
        let comp = component(&cells, (0, 0));
        assert_eq!(comp.len(), 3);
        let cells: HashSet<Cell> = [(0, 0), (1, 1)].into_iter().collect();
        assert_eq!(pinch_cells(&cells, (0, 0)), vec![(1, 1)]);
    }

    #[test]
    fn errors() {
        assert!(matches!(whitney_disc_chain(&square(0.1), 3, c(0.01, 0.5)), Err(ZipError::Domain(_))));
        assert!(matches!(whitney_disc_chain(&square(0.1), 1, c(0.5, 0.5)), Err(ZipError::InfeasibleChain(_))));
        let big = Polyline::from_complex(&[c(0.0, 0.0), c(2.0, 0.0), c(0.0, 2.0)], true).unwrap();
        assert!(whitney_disc_chain(&big, 3, c(0.2, 0.2)).is_err());
    }
}
