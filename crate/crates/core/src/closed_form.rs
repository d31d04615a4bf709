//! Closed-form relative entropy of entanglement.
//!
//! * spin-1/2 ⊗ spin-j: one-parameter family, piecewise in the singlet-side
//!   weight `p`;
//! * spin-1 ⊗ spin-1: four regions of the state triangle;
//! * spin-1 ⊗ spin-j, integer j (odd N): four regions, two of them with a
//!   minimizer given by a quadratic root;
//! * spin-1 ⊗ spin-j, half-integer j (even N): the same expressions give the
//!   PPT-relative entropy `E_Γ`, a lower bound on `E_r`.
//!
//! Values are in nats. Every result carries the minimizing PPT state so that
//! `value == kl_alpha(state, minimizer)` can be checked independently.

use std::fmt;

use log::warn;

use crate::angular_momentum::Spin;
use crate::error::{Error, Result};
use crate::geometry::{classify_region, Chart, Point2, Region};
use crate::real::Real;
use crate::ri_state::{
    make_ri_state, normalized_to_raw, raw_to_normalized, NormalizedCoords, RiState,
};

/// Which minimum the value represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measure {
    /// Minimum over separable states.
    RelativeEntropy,
    /// Minimum over PPT states; a lower bound on the relative entropy of
    /// entanglement and an upper bound on distillable entanglement.
    PptRelativeEntropy,
}

impl Measure {
    pub fn label(self) -> &'static str {
        match self {
            Measure::RelativeEntropy => "E_r",
            Measure::PptRelativeEntropy => "E_Gamma",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootKind {
    /// Minimizer `P` on edge EA′, parametrized by `a`.
    A,
    /// Minimizer `Q` on edge DA′, parametrized by `b`.
    B,
}

/// Intermediate quantities of the quadratic-root branches.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootAux<T: Real> {
    pub kind: RootKind,
    /// The root `a` or `b`.
    pub root: T,
    /// The linear coefficient `t1` or `t2`.
    pub t: T,
    /// `P` or `Q` in raw coordinates.
    pub minimizer_point: Point2<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReeResult<T: Real> {
    pub value: T,
    pub measure: Measure,
    pub region: Region,
    pub minimizer: RiState<T>,
    pub aux: Option<RootAux<T>>,
}

/// `p ln(arg)` with `0 ln(·) = 0`.
fn plog<T: Real>(p: T, arg: T) -> T {
    if p <= T::zero() {
        T::zero()
    } else if arg <= T::zero() {
        T::INFINITY
    } else {
        p * arg.ln()
    }
}

/// Spin-1/2 ⊗ spin-j state whose `J = j - 1/2` block carries weight `p`.
pub fn two_by_n_state<T: Real>(j: Spin, p: T) -> Result<RiState<T>> {
    RiState::from_probabilities(Spin::HALF, j, &[p, T::one() - p])
}

/// Relative entropy of entanglement of the spin-1/2 ⊗ spin-j state with
/// `J = j - 1/2` weight `p`. Separable iff `p <= 2j/(2j+1)`.
pub fn ree_2xn<T: Real>(j: Spin, p: T) -> Result<ReeResult<T>> {
    if j.twice() < 1 {
        return Err(Error::OutOfRange("spin-1/2 ⊗ spin-j needs j >= 1/2".into()));
    }
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::OutOfRange(format!("p = {p} outside [0, 1]")));
    }
    let tj = T::lit(f64::from(j.twice()));
    let threshold = tj / (tj + T::one());
    let state = two_by_n_state(j, p)?;
    if p <= threshold {
        return Ok(ReeResult {
            value: T::zero(),
            measure: Measure::RelativeEntropy,
            region: Region::SeparableInterval,
            minimizer: state,
            aux: None,
        });
    }
    let q = T::one() - p;
    let value = plog(p, (tj + T::one()) / tj * p) + plog(q, (tj + T::one()) * q);
    Ok(ReeResult {
        value,
        measure: Measure::RelativeEntropy,
        region: Region::Entangled,
        minimizer: two_by_n_state(j, threshold)?,
        aux: None,
    })
}

/// Spin-1 ⊗ spin-1.
pub fn ree_3x3<T: Real>(coords: NormalizedCoords<T>) -> Result<ReeResult<T>> {
    three_by_n(3, coords, Measure::RelativeEntropy)
}

/// Spin-1 ⊗ spin-j with integer `j > 1`, i.e. odd `N = 2j + 1 >= 5`.
pub fn ree_3xn_odd<T: Real>(n: usize, coords: NormalizedCoords<T>) -> Result<ReeResult<T>> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(Error::OutOfRange(format!(
            "odd-N closed form needs odd N >= 5, got {n}"
        )));
    }
    three_by_n(n, coords, Measure::RelativeEntropy)
}

/// PPT-relative entropy of spin-1 ⊗ spin-j with half-integer `j`, i.e.
/// even `N >= 4`.
pub fn e_gamma_3xn_even<T: Real>(n: usize, coords: NormalizedCoords<T>) -> Result<ReeResult<T>> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::OutOfRange(format!(
            "E_Gamma closed form needs even N >= 4, got {n}"
        )));
    }
    three_by_n(n, coords, Measure::PptRelativeEntropy)
}

/// Routes an α-vector to the closed form of its family.
pub fn ree_dispatch<T: Real>(j1: Spin, j2: Spin, alphas: &[T]) -> Result<ReeResult<T>> {
    let state = make_ri_state(j1, j2, alphas)?;
    ree_for_state(&state)
}

pub fn ree_for_state<T: Real>(state: &RiState<T>) -> Result<ReeResult<T>> {
    let (j1, j2) = (state.j1(), state.j2());
    match j1 {
        Spin::HALF => ree_2xn(j2, state.probabilities()[0]),
        Spin::ONE => {
            let n = j2.dim();
            let coords = raw_to_normalized(state)?;
            match n {
                3 => ree_3x3(coords),
                _ if n % 2 == 1 => ree_3xn_odd(n, coords),
                _ => e_gamma_3xn_even(n, coords),
            }
        }
        _ => Err(Error::Unsupported {
            j1: j1.to_string(),
            j2: j2.to_string(),
            reason: "closed forms exist only for j1 = 1/2 and j1 = 1; \
                     use the numerical oracle for other families"
                .into(),
        }),
    }
}

fn three_by_n<T: Real>(
    n: usize,
    coords: NormalizedCoords<T>,
    measure: Measure,
) -> Result<ReeResult<T>> {
    let region = classify_region(n, coords)?;
    let branch = evaluate_branch(n, coords, region)?;
    Ok(ReeResult {
        value: branch.value,
        measure,
        region,
        minimizer: normalized_to_raw(n, branch.minimizer)?,
        aux: branch.aux,
    })
}

/// Value and minimizer of a single branch, independent of where the point
/// actually lies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Branch<T: Real> {
    pub value: T,
    pub minimizer: NormalizedCoords<T>,
    pub aux: Option<RootAux<T>>,
}

/// Evaluates the formula attached to `region` at `coords`.
///
/// The state does not have to lie in `region`; this is what boundary
/// continuity checks compare across neighbouring regions. Regions must
/// match the family (`N = 3` uses the triangle variants).
pub fn evaluate_branch<T: Real>(
    n: usize,
    coords: NormalizedCoords<T>,
    region: Region,
) -> Result<Branch<T>> {
    let chart = Chart::<T>::new(n)?;
    let (x, y, z) = (coords.lo, coords.mid, coords.hi());
    let one = T::one();
    let lit = T::lit;
    let nc = |lo: T, mid: T| NormalizedCoords::new(lo, mid);
    let ap = nc(chart.a_prime.0, chart.a_prime.1)?;
    let wrong = || {
        Err(Error::OutOfRange(format!(
            "region {region} does not belong to the N = {n} family"
        )))
    };
    match (n == 3, region) {
        (_, Region::Separable) => Ok(Branch {
            value: T::zero(),
            minimizer: coords,
            aux: None,
        }),
        (true, Region::TriangleACE) => {
            let value = plog(one - y, lit(2.0) * (one - y)) + plog(y, lit(2.0) * y);
            // Line from C through the state, cut at EA′ (α̂_1 = 1/2). At C
            // itself every point of EA′ is optimal; E is reported.
            let qx = if one - y > T::EPSILON {
                x / (lit(2.0) * (one - y))
            } else {
                T::zero()
            };
            Ok(Branch {
                value,
                minimizer: nc(qx, lit(0.5))?,
                aux: None,
            })
        }
        (true, Region::TriangleABD) => {
            let value = plog(x, lit(3.0) * x) + plog(one - x, lit(1.5) * (one - x));
            // Line from B through the state, cut at DA′ (α̂_0 = 1/3).
            let qy = if one - x > T::EPSILON {
                lit(2.0) * y / (lit(3.0) * (one - x))
            } else {
                T::zero()
            };
            Ok(Branch {
                value,
                minimizer: nc(lit(1.0 / 3.0), qy)?,
                aux: None,
            })
        }
        (true, Region::TriangleABC) => {
            let value = plog(x, lit(3.0) * x) + plog(y, lit(2.0) * y) + plog(z, lit(6.0) * z);
            Ok(Branch {
                value,
                minimizer: ap,
                aux: None,
            })
        }
        (false, Region::PolygonAHBF) => {
            let nf = lit(n as f64);
            let two = lit(2.0);
            let value = plog(x, nf / (nf - two) * x)
                + plog(y, (nf + one) / two * y)
                + plog(z, nf * (nf + one) / two * z);
            Ok(Branch {
                value,
                minimizer: ap,
                aux: None,
            })
        }
        (false, Region::PolygonAFCE) => branch_a(n, coords),
        (false, Region::TriangleADH) => branch_b(n, coords),
        _ => wrong(),
    }
}

const DISCRIMINANT_TOL: f64 = 1e-9;
const SEGMENT_TOL: f64 = 1e-9;

fn checked_sqrt<T: Real>(disc: T, scale: T) -> Result<T> {
    if disc >= T::zero() {
        return Ok(disc.sqrt());
    }
    let rel = T::slack(DISCRIMINANT_TOL) * scale.max(T::one());
    if disc >= -rel {
        Ok(T::zero())
    } else {
        Err(Error::Discriminant(disc.as_f64()))
    }
}

/// Picks the preferred root when it lies in `[lo, hi]`, otherwise the other
/// one (with a warning), otherwise the preferred root clamped.
fn select_root<T: Real>(preferred: T, other: T, lo: T, hi: T, what: &str) -> T {
    let tol = T::slack(SEGMENT_TOL);
    let inside = |r: T| r >= lo - tol && r <= hi + tol;
    if inside(preferred) {
        preferred
    } else if inside(other) {
        warn!("{what}: printed root {preferred} leaves its segment, using {other}");
        other
    } else {
        warn!("{what}: neither root lies on the segment, clamping {preferred}");
        preferred.max(lo).min(hi)
    }
}

/// A′FCE: minimizer `P` on edge EA′.
fn branch_a<T: Real>(n: usize, coords: NormalizedCoords<T>) -> Result<Branch<T>> {
    let lit = T::lit;
    let one = T::one();
    let nf = lit(n as f64);
    let (x, y, z) = (coords.lo, coords.mid, coords.hi());
    let nm1_sq = (nf - one).powi(2);
    let nn3 = nf * (nf - lit(3.0));

    let t1 = (nf + one) * y - nn3 * x - nm1_sq;
    let disc = checked_sqrt(t1 * t1 - lit(4.0) * nm1_sq * nn3 * x, t1 * t1)?;
    let two_a = lit(2.0) * nm1_sq;
    let a_hi = (nf - lit(3.0)) / (nf - one);
    let a = select_root(
        (-t1 - disc) / two_a,
        (-t1 + disc) / two_a,
        T::zero(),
        a_hi,
        "A'FCE",
    );

    let value = plog(x, nn3 * x / ((nf - one) * (nf - lit(2.0)) * a))
        + plog(y, (nf + one) * y / ((nf - one) * (one - a)))
        + plog(
            z,
            nf * (nf + one) * (nf - lit(3.0)) * z / (lit(2.0) * (nn3 - nm1_sq * a)),
        );
    let px = (nf - lit(2.0)) * (nf - one) * a / nn3;
    let py = (nf - one) / (nf + one) * (one - a);
    let p = NormalizedCoords::new(px, py)?;
    Ok(Branch {
        value,
        minimizer: p,
        aux: Some(RootAux {
            kind: RootKind::A,
            root: a,
            t: t1,
            minimizer_point: Point2::from_normalized(n, p),
        }),
    })
}

/// A′DH: minimizer `Q` on edge DA′.
fn branch_b<T: Real>(n: usize, coords: NormalizedCoords<T>) -> Result<Branch<T>> {
    let lit = T::lit;
    let one = T::one();
    let nf = lit(n as f64);
    let (x, y, z) = (coords.lo, coords.mid, coords.hi());
    let n2m5 = nf * nf - lit(5.0);
    let n3m1 = (nf + lit(3.0)) * (nf - one);
    let nm1_sq = (nf - one).powi(2);

    let t2 = (nf + lit(3.0)) * nm1_sq
        + lit(2.0) * nf * n2m5 * x
        + (nf + one).powi(2) * (nf - lit(3.0)) * y;
    let disc = checked_sqrt(
        t2 * t2 - lit(8.0) * nf * n2m5 * nm1_sq * (nf + lit(3.0)) * x,
        t2 * t2,
    )?;
    let den = lit(4.0) * nf * n2m5;
    let chart = Chart::<T>::new(n)?;
    let b = select_root(
        (t2 + disc) / den,
        (t2 - disc) / den,
        chart.g.0,
        chart.h.0,
        "A'DH",
    );

    let qy_num = lit(4.0) * nf * n2m5 * b - lit(2.0) * (nf + lit(3.0)) * nm1_sq;
    let qy_den = (nf * nf - one) * (nf * nf - lit(9.0));
    let value = plog(x, n3m1 * x / (n2m5 * b))
        + plog(y, qy_den * y / qy_num)
        + plog(z, (nf + one) * (nf - lit(3.0)) * z / (n2m5 * (one - b)));
    let q = NormalizedCoords::new(n2m5 * b / n3m1, (qy_num / qy_den).max(T::zero()))?;
    Ok(Branch {
        value,
        minimizer: q,
        aux: Some(RootAux {
            kind: RootKind::B,
            root: b,
            t: t2,
            minimizer_point: Point2::from_normalized(n, q),
        }),
    })
}
