//! Convex geometry of the spin-1 ⊗ spin-j state triangle.
//!
//! States are drawn in the raw `(α_{j-1}, α_j)` plane; the third
//! coefficient follows from the trace condition. Internally the predicates
//! run in normalized coordinates (block trace weights), which differ from
//! the raw chart by a positive diagonal scaling and therefore preserve
//! every orientation test.

use std::fmt;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::ri_state::{raw_prefactors, NormalizedCoords};

const SNAP: f64 = 1e-12;

/// A point of the raw `(α_{j-1}, α_j)` chart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point2<T: Real> {
    pub x: T,
    pub y: T,
}

impl<T: Real> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn from_normalized(n: usize, c: NormalizedCoords<T>) -> Self {
        let pre = raw_prefactors::<T>(n);
        Self::new(c.lo * pre[0], c.mid * pre[1])
    }

    /// Normalized coordinates; not validated against the simplex.
    pub fn to_normalized(self, n: usize) -> (T, T) {
        let pre = raw_prefactors::<T>(n);
        (self.x / pre[0], self.y / pre[1])
    }

    pub fn distance(self, other: Self) -> T {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }
}

/// Region of the state triangle selecting the closed-form branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    /// The PPT polygon ADA′E (separable for odd N).
    Separable,
    TriangleADH,
    PolygonAHBF,
    PolygonAFCE,
    /// Spin-1 ⊗ spin-1 counterparts of the three entangled regions.
    TriangleABD,
    TriangleABC,
    TriangleACE,
    /// Spin-1/2 ⊗ spin-j states below / above the separability threshold.
    SeparableInterval,
    Entangled,
}

impl Region {
    pub fn tag(self) -> &'static str {
        match self {
            Region::Separable => "SEPARABLE_ADA'E",
            Region::TriangleADH => "TRI_A'DH",
            Region::PolygonAHBF => "POLY_A'HBF",
            Region::PolygonAFCE => "POLY_A'FCE",
            Region::TriangleABD => "TRI_A'BD",
            Region::TriangleABC => "TRI_A'BC",
            Region::TriangleACE => "TRI_A'CE",
            Region::SeparableInterval => "SEPARABLE",
            Region::Entangled => "ENTANGLED",
        }
    }

    pub fn is_separable(self) -> bool {
        matches!(self, Region::Separable | Region::SeparableInterval)
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

fn check_n(n: usize, min: usize) -> Result<f64> {
    if n < min {
        return Err(Error::OutOfRange(format!("N must be >= {min}, got {n}")));
    }
    Ok(n as f64)
}

fn vec3<T: Real>(v: [f64; 3]) -> [T; 3] {
    v.map(T::lit)
}

/// Vertices `A, B, C` of the state triangle as raw α-vectors.
pub fn simplex_vertices<T: Real>(n: usize) -> Result<[[T; 3]; 3]> {
    let nf = check_n(n, 3)?;
    let s3 = 3.0_f64.sqrt();
    Ok([
        vec3([0.0, 0.0, (3.0 * nf / (nf + 2.0)).sqrt()]),
        vec3([(3.0 * nf / (nf - 2.0)).sqrt(), 0.0, 0.0]),
        vec3([0.0, s3, 0.0]),
    ])
}

/// Images `A′, B′, C′` of the triangle vertices under the partial time
/// reversal, as raw α-vectors.
pub fn ppt_image_vertices<T: Real>(n: usize) -> Result<[[T; 3]; 3]> {
    let nf = check_n(n, 3)?;
    let s3 = 3.0_f64.sqrt();
    let a = [
        (3.0 * (nf - 2.0) / nf).sqrt(),
        2.0 * s3 / (nf + 1.0),
        2.0 / (nf + 1.0) * (3.0 / (nf * (nf + 2.0))).sqrt(),
    ];
    let b = [
        2.0 / (nf - 1.0) * (3.0 / (nf * (nf - 2.0))).sqrt(),
        -2.0 * s3 / (nf - 1.0),
        (3.0 * (nf + 2.0) / nf).sqrt(),
    ];
    let c = [
        -2.0 / (nf - 1.0) * (3.0 * (nf - 2.0) / nf).sqrt(),
        s3 * (nf * nf - 5.0) / (nf * nf - 1.0),
        2.0 / (nf + 1.0) * (3.0 * (nf + 2.0) / nf).sqrt(),
    ];
    Ok([vec3(a), vec3(b), vec3(c)])
}

/// The PPT polygon `A, D, A′, E` in raw coordinates, counterclockwise.
pub fn ppt_polygon<T: Real>(n: usize) -> Result<[Point2<T>; 4]> {
    let nf = check_n(n, 3)?;
    let s3 = 3.0_f64.sqrt();
    let p = |x: f64, y: f64| Point2::new(T::lit(x), T::lit(y));
    Ok([
        p(0.0, 0.0),
        p((nf - 1.0) / 2.0 * (3.0 / (nf * (nf - 2.0))).sqrt(), 0.0),
        p((3.0 * (nf - 2.0) / nf).sqrt(), 2.0 * s3 / (nf + 1.0)),
        p(0.0, s3 * (nf - 1.0) / (nf + 1.0)),
    ])
}

/// Landmarks `F` (on BC), `G` and `H` (on BD) in raw coordinates.
///
/// Defined for `N >= 4`; at `N = 3` they collapse onto the triangle
/// vertices (`F = C`, `G = H = B`).
pub fn landmark_points<T: Real>(n: usize) -> Result<(Point2<T>, Point2<T>, Point2<T>)> {
    let nf = check_n(n, 4)?;
    let s3 = 3.0_f64.sqrt();
    let n2m5 = nf * nf - 5.0;
    let p = |x: f64, y: f64| Point2::new(T::lit(x), T::lit(y));
    let f = p(
        (nf - 3.0) / (nf - 1.0) * (3.0 * nf / (nf - 2.0)).sqrt(),
        2.0 * s3 / (nf - 1.0),
    );
    let g = p(
        (nf - 1.0).powi(2) * (nf + 3.0) / (2.0 * n2m5) * (3.0 / (nf * (nf - 2.0))).sqrt(),
        0.0,
    );
    let h = p(
        (nf + 3.0) * (nf - 1.0) / n2m5 * (3.0 * (nf - 2.0) / nf).sqrt(),
        0.0,
    );
    Ok((f, g, h))
}

/// All landmarks in normalized coordinates. Rational in `N`, so these are
/// what the classifier and the closed forms use.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Chart<T: Real> {
    pub a: (T, T),
    pub b: (T, T),
    pub c: (T, T),
    pub d: (T, T),
    pub a_prime: (T, T),
    pub e: (T, T),
    pub f: (T, T),
    pub g: (T, T),
    pub h: (T, T),
}

impl<T: Real> Chart<T> {
    pub fn new(n: usize) -> Result<Self> {
        let nf = check_n(n, 3)?;
        let t = |x: f64, y: f64| (T::lit(x), T::lit(y));
        let n2m5 = nf * nf - 5.0;
        Ok(Self {
            a: t(0.0, 0.0),
            b: t(1.0, 0.0),
            c: t(0.0, 1.0),
            d: t((nf - 1.0) / (2.0 * nf), 0.0),
            a_prime: t((nf - 2.0) / nf, 2.0 / (nf + 1.0)),
            e: t(0.0, (nf - 1.0) / (nf + 1.0)),
            f: t((nf - 3.0) / (nf - 1.0), 2.0 / (nf - 1.0)),
            g: t((nf - 1.0).powi(2) * (nf + 3.0) / (2.0 * nf * n2m5), 0.0),
            h: t((nf - 2.0) * (nf + 3.0) * (nf - 1.0) / (nf * n2m5), 0.0),
        })
    }

    pub fn polygon(&self) -> [(T, T); 4] {
        [self.a, self.d, self.a_prime, self.e]
    }
}

/// `(b - o) × (p - o)`; positive when `p` is left of `o → b`.
pub(crate) fn cross<T: Real>(o: (T, T), b: (T, T), p: (T, T)) -> T {
    (b.0 - o.0) * (p.1 - o.1) - (b.1 - o.1) * (p.0 - o.0)
}

/// Membership in a counterclockwise convex polygon, boundary included.
pub(crate) fn in_convex_polygon<T: Real>(poly: &[(T, T)], p: (T, T), tol: T) -> bool {
    (0..poly.len()).all(|i| cross(poly[i], poly[(i + 1) % poly.len()], p) >= -tol)
}

/// Whether the state lies in the PPT polygon ADA′E.
pub fn in_ppt_polygon<T: Real>(n: usize, coords: NormalizedCoords<T>) -> Result<bool> {
    let chart = Chart::<T>::new(n)?;
    Ok(in_convex_polygon(
        &chart.polygon(),
        (coords.lo, coords.mid),
        T::slack(SNAP),
    ))
}

/// Region containing the state. Shared boundaries go to the first match in
/// the order separable, A′FCE, A′HBF, A′DH.
pub fn classify_region<T: Real>(n: usize, coords: NormalizedCoords<T>) -> Result<Region> {
    let chart = Chart::<T>::new(n)?;
    let tol = T::slack(SNAP);
    let p = (coords.lo, coords.mid);
    if p.0 < -tol || p.1 < -tol || p.0 + p.1 > T::one() + tol {
        return Err(Error::OutsideSimplex {
            x: p.0.as_f64(),
            y: p.1.as_f64(),
        });
    }
    if in_convex_polygon(&chart.polygon(), p, tol) {
        return Ok(Region::Separable);
    }
    let three = n == 3;
    // For N = 3 the landmarks F and H coincide with C and B.
    let (f, h) = if three {
        (chart.c, chart.b)
    } else {
        (chart.f, chart.h)
    };
    let ap = chart.a_prime;
    if cross(ap, chart.e, p) < T::zero() && cross(ap, f, p) >= -tol {
        return Ok(if three {
            Region::TriangleACE
        } else {
            Region::PolygonAFCE
        });
    }
    if cross(chart.d, ap, p) < T::zero() && cross(ap, h, p) < -tol {
        return Ok(if three {
            Region::TriangleABD
        } else {
            Region::TriangleADH
        });
    }
    Ok(if three {
        Region::TriangleABC
    } else {
        Region::PolygonAHBF
    })
}

fn shoelace<T: Real>(pts: &[Point2<T>]) -> T {
    let n = pts.len();
    let twice = (0..n).fold(T::zero(), |s, i| {
        let (a, b) = (pts[i], pts[(i + 1) % n]);
        s + a.x * b.y - b.x * a.y
    });
    twice.abs() / T::lit(2.0)
}

/// `area(ADA′E) / area(ABC)` in the raw chart.
pub fn polygon_area_ratio<T: Real>(n: usize) -> Result<T> {
    let poly = ppt_polygon::<T>(n)?;
    let [_, b, c] = simplex_vertices::<T>(n)?;
    let tri = [
        Point2::new(T::zero(), T::zero()),
        Point2::new(b[0], b[1]),
        Point2::new(c[0], c[1]),
    ];
    Ok(shoelace(&poly) / shoelace(&tri))
}
