//! Brute-force numerical checks for the closed forms.
//!
//! The relative entropy of an RI state reduces to a classical KL divergence
//! minimized over a convex set of RI states: an interval for spin-1/2 ⊗
//! spin-j and the PPT polygon for spin-1 ⊗ spin-j. The minimizers here know
//! nothing about the closed forms beyond that feasible set.
//!
//! Polygon search runs in two stages. A barycentric grid over the state
//! triangle locates a coarse optimum; then, for states outside the polygon,
//! every edge is searched by golden section. KL is convex in its second
//! argument, so its restriction to an edge is convex and the edge search
//! is exact up to the coordinate tolerance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::angular_momentum::{partial_time_reversal, Spin};
use crate::closed_form::{e_gamma_3xn_even, ree_2xn, ree_3x3, ree_3xn_odd};
use crate::error::{Error, Result};
use crate::geometry::{cross, in_convex_polygon, ppt_polygon, Point2};
use crate::real::Real;
use crate::ri_state::{kl_probabilities, NormalizedCoords, RiState};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleOptions {
    /// Subdivisions per side of the barycentric grid.
    pub grid: usize,
    /// Coordinate tolerance of the golden-section stage.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            grid: 200,
            tolerance: 1e-10,
            max_iterations: 200,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OptimumPoint<T: Real> {
    /// Singlet-side weight `p*` of the spin-1/2 ⊗ spin-j minimizer.
    Interval(T),
    /// Raw chart point of the spin-1 ⊗ spin-j minimizer.
    Plane(Point2<T>),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinimizationReport<T: Real> {
    pub optimum_value: T,
    pub optimum_point: OptimumPoint<T>,
    pub iterations: usize,
    pub final_box_size: T,
    pub converged: bool,
}

struct Golden<T> {
    x: T,
    fx: T,
    iterations: usize,
    width: T,
}

/// Golden-section search of a convex function on `[lo, hi]`; `+inf` is an
/// ordinary value that loses every comparison. Endpoints are compared too.
fn golden<T: Real>(f: impl Fn(T) -> T, lo: T, hi: T, tol: T, max_iter: usize) -> Golden<T> {
    let r = T::lit(INV_PHI);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut iterations = 0;
    while b - a > tol && iterations < max_iter {
        iterations += 1;
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let mid = (a + b) / T::lit(2.0);
    let mut best = (mid, f(mid));
    for x in [c, d, lo, hi] {
        let fx = f(x);
        if fx < best.1 {
            best = (x, fx);
        }
    }
    Golden {
        x: best.0,
        fx: best.1,
        iterations,
        width: b - a,
    }
}

/// Minimizes the two-outcome KL over `p* ∈ [0, 2j/(2j+1)]`.
pub fn minimize_kl_over_interval<T: Real>(j: Spin, p: T) -> Result<MinimizationReport<T>> {
    minimize_kl_over_interval_with(j, p, &OracleOptions::default())
}

pub fn minimize_kl_over_interval_with<T: Real>(
    j: Spin,
    p: T,
    opts: &OracleOptions,
) -> Result<MinimizationReport<T>> {
    if j.twice() < 1 {
        return Err(Error::OutOfRange("spin-1/2 ⊗ spin-j needs j >= 1/2".into()));
    }
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::OutOfRange(format!("p = {p} outside [0, 1]")));
    }
    let tj = T::lit(f64::from(j.twice()));
    let hi = tj / (tj + T::one());
    if p <= hi {
        return Ok(MinimizationReport {
            optimum_value: T::zero(),
            optimum_point: OptimumPoint::Interval(p),
            iterations: 0,
            final_box_size: T::zero(),
            converged: true,
        });
    }
    let target = [p, T::one() - p];
    let tol = T::slack(opts.tolerance);
    let g = golden(
        |q| kl_probabilities(&target, &[q, T::one() - q]),
        T::zero(),
        hi,
        tol,
        opts.max_iterations,
    );
    Ok(MinimizationReport {
        optimum_value: g.fx,
        optimum_point: OptimumPoint::Interval(g.x),
        iterations: g.iterations,
        final_box_size: g.width,
        converged: g.width <= tol,
    })
}

/// Minimizes the three-term KL over the PPT polygon ADA′E of the family.
pub fn minimize_kl_ppt<T: Real>(
    n: usize,
    coords: NormalizedCoords<T>,
) -> Result<MinimizationReport<T>> {
    let polygon = ppt_polygon::<T>(n)?;
    minimize_kl_over_polygon(n, coords, &polygon)
}

/// Minimizes the three-term KL over a convex polygon given in raw chart
/// coordinates.
pub fn minimize_kl_over_polygon<T: Real>(
    n: usize,
    coords: NormalizedCoords<T>,
    polygon: &[Point2<T>],
) -> Result<MinimizationReport<T>> {
    minimize_kl_over_polygon_with(n, coords, polygon, &OracleOptions::default())
}

pub fn minimize_kl_over_polygon_with<T: Real>(
    n: usize,
    coords: NormalizedCoords<T>,
    polygon: &[Point2<T>],
    opts: &OracleOptions,
) -> Result<MinimizationReport<T>> {
    let poly = convex_normalized(n, polygon)?;
    let state = (coords.lo, coords.mid);
    let target = coords.probabilities();
    let objective = |q: (T, T)| kl_probabilities(&target, &[q.0, q.1, T::one() - q.0 - q.1]);
    let to_point = |q: (T, T)| -> Result<OptimumPoint<T>> {
        let c = NormalizedCoords::new(q.0, q.1)?;
        Ok(OptimumPoint::Plane(Point2::from_normalized(n, c)))
    };

    if in_convex_polygon(&poly, state, T::slack(1e-12)) {
        return Ok(MinimizationReport {
            optimum_value: T::zero(),
            optimum_point: to_point(state)?,
            iterations: 0,
            final_box_size: T::zero(),
            converged: true,
        });
    }

    let grid = opts.grid.max(1);
    let step = T::one() / T::lit(grid as f64);
    let cells: Vec<(usize, usize)> = (0..=grid)
        .flat_map(|i| (0..=grid - i).map(move |k| (i, k)))
        .collect();
    let values: Vec<Option<((T, T), T)>> = cells
        .par_iter()
        .map(|&(i, k)| {
            let q = (T::lit(i as f64) * step, T::lit(k as f64) * step);
            in_convex_polygon(&poly, q, T::slack(1e-12)).then(|| (q, objective(q)))
        })
        .collect();
    // Cells are in lexicographic order; the first strict minimum wins.
    let mut best: Option<((T, T), T)> = None;
    for (q, v) in values.into_iter().flatten() {
        if best.is_none_or(|b| v < b.1) {
            best = Some((q, v));
        }
    }

    let tol = T::slack(opts.tolerance);
    let mut iterations = 0;
    let mut box_size = T::zero();
    let mut converged = true;
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        let len = ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt();
        if len <= T::EPSILON {
            continue;
        }
        let at = |s: T| (a.0 + s * (b.0 - a.0), a.1 + s * (b.1 - a.1));
        let g = golden(
            |s| objective(at(s)),
            T::zero(),
            T::one(),
            tol / len,
            opts.max_iterations,
        );
        iterations += g.iterations;
        let width = g.width * len;
        box_size = box_size.max(width);
        converged &= width <= tol;
        if best.is_none_or(|b| g.fx < b.1) {
            best = Some((at(g.x), g.fx));
        }
    }

    let (q, value) =
        best.ok_or_else(|| Error::NoConvergence("polygon holds no feasible point".into()))?;
    if !value.is_finite_value() {
        return Err(Error::NoConvergence(
            "objective is infinite on the whole polygon".into(),
        ));
    }
    Ok(MinimizationReport {
        optimum_value: value,
        optimum_point: to_point((q.0.max(T::zero()), q.1.max(T::zero())))?,
        iterations,
        final_box_size: box_size,
        converged,
    })
}

/// Polygon vertices in normalized coordinates, counter-clockwise.
fn convex_normalized<T: Real>(n: usize, polygon: &[Point2<T>]) -> Result<Vec<(T, T)>> {
    if polygon.len() < 3 {
        return Err(Error::OutOfRange(
            "polygon needs at least three vertices".into(),
        ));
    }
    let mut poly: Vec<(T, T)> = polygon.iter().map(|p| p.to_normalized(n)).collect();
    let m = poly.len();
    let area = (0..m).fold(T::zero(), |s, i| {
        let (a, b) = (poly[i], poly[(i + 1) % m]);
        s + a.0 * b.1 - b.0 * a.1
    });
    if area.abs() <= T::slack(1e-14) {
        return Err(Error::OutOfRange("degenerate polygon".into()));
    }
    if area < T::zero() {
        poly.reverse();
    }
    let tol = T::slack(1e-12);
    let convex = (0..m).all(|i| cross(poly[i], poly[(i + 1) % m], poly[(i + 2) % m]) >= -tol);
    if !convex {
        return Err(Error::OutOfRange("polygon is not convex".into()));
    }
    Ok(poly)
}

/// Smallest eigenvalue of the partially time-reversed density matrix; at
/// least `-1e-10` exactly for PPT states.
pub fn ppt_min_eigenvalue<T: Real>(state: &RiState<T>) -> T {
    partial_time_reversal(&state.to_density())
        .expect("RI density matrices carry their tensor factors")
        .min_eigenvalue()
}

/// Families with a closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    TwoByN { j: Spin },
    ThreeByThree,
    ThreeByNOdd { n: usize },
    ThreeByNEven { n: usize },
}

impl Family {
    /// Spin-1 ⊗ spin-j family with `N = 2j + 1`.
    pub fn three_by(n: usize) -> Result<Self> {
        let family = match n {
            3 => Family::ThreeByThree,
            _ if n % 2 == 1 => Family::ThreeByNOdd { n },
            _ => Family::ThreeByNEven { n },
        };
        family.validate()?;
        Ok(family)
    }

    fn validate(self) -> Result<()> {
        match self {
            Family::TwoByN { j } if j.twice() < 1 => {
                Err(Error::OutOfRange("spin-1/2 ⊗ spin-j needs j >= 1/2".into()))
            }
            Family::ThreeByNOdd { n } if n < 5 || n % 2 == 0 => Err(Error::OutOfRange(format!(
                "odd family needs odd N >= 5, got {n}"
            ))),
            Family::ThreeByNEven { n } if n < 4 || n % 2 == 1 => Err(Error::OutOfRange(format!(
                "even family needs even N >= 4, got {n}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn spins(self) -> (Spin, Spin) {
        match self {
            Family::TwoByN { j } => (Spin::HALF, j),
            Family::ThreeByThree => (Spin::ONE, Spin::ONE),
            Family::ThreeByNOdd { n } | Family::ThreeByNEven { n } => {
                (Spin::ONE, Spin::from_twice(n as u32 - 1))
            }
        }
    }

    pub fn label(self) -> String {
        match self {
            Family::TwoByN { j } => format!("2x{}", j.dim()),
            Family::ThreeByThree => "3x3".into(),
            Family::ThreeByNOdd { n } | Family::ThreeByNEven { n } => format!("3x{n}"),
        }
    }

    fn outcomes(self) -> usize {
        match self {
            Family::TwoByN { .. } => 2,
            _ => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifySummary<T: Real> {
    pub family: Family,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: T,
    pub max_abs_diff: T,
    /// Block trace weights of the worst sample.
    pub worst_state: Vec<T>,
    pub worst_closed: T,
    pub worst_oracle: T,
    pub passed: bool,
}

/// Uniform point of the probability simplex from sorted uniform spacings.
pub fn sample_simplex<R: Rng + ?Sized>(rng: &mut R, k: usize) -> Vec<f64> {
    let mut cuts: Vec<f64> = (0..k.saturating_sub(1))
        .map(|_| rng.random::<f64>())
        .collect();
    cuts.sort_by(f64::total_cmp);
    let mut out = Vec::with_capacity(k);
    let mut prev = 0.0;
    for c in cuts {
        out.push(c - prev);
        prev = c;
    }
    out.push(1.0 - prev);
    out
}

/// Closed form against oracle at one state, as `(closed, oracle)`.
pub fn compare_at<T: Real>(family: Family, probs: &[T]) -> Result<(T, T)> {
    match family {
        Family::TwoByN { j } => {
            let closed = ree_2xn(j, probs[0])?.value;
            let oracle = minimize_kl_over_interval(j, probs[0])?.optimum_value;
            Ok((closed, oracle))
        }
        Family::ThreeByThree | Family::ThreeByNOdd { .. } | Family::ThreeByNEven { .. } => {
            let n = family.spins().1.dim();
            let coords = NormalizedCoords::new(probs[0], probs[1])?;
            let closed = match family {
                Family::ThreeByThree => ree_3x3(coords)?,
                Family::ThreeByNOdd { n } => ree_3xn_odd(n, coords)?,
                _ => e_gamma_3xn_even(n, coords)?,
            }
            .value;
            let oracle = minimize_kl_ppt(n, coords)?.optimum_value;
            Ok((closed, oracle))
        }
    }
}

/// Compares closed form and oracle on `samples` uniform random states.
pub fn verify_closed_form<T: Real>(
    family: Family,
    samples: usize,
    seed: u64,
    tol: T,
) -> Result<VerifySummary<T>> {
    family.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states: Vec<Vec<T>> = (0..samples)
        .map(|_| {
            sample_simplex(&mut rng, family.outcomes())
                .into_iter()
                .map(T::lit)
                .collect()
        })
        .collect();
    let results: Vec<Result<(T, T)>> = states.par_iter().map(|p| compare_at(family, p)).collect();

    let mut summary = VerifySummary {
        family,
        samples,
        seed,
        tolerance: tol,
        max_abs_diff: T::zero(),
        worst_state: Vec::new(),
        worst_closed: T::zero(),
        worst_oracle: T::zero(),
        passed: true,
    };
    let mut first = true;
    for (state, result) in states.into_iter().zip(results) {
        let (closed, oracle) = result?;
        let diff = (closed - oracle).abs();
        if first || diff > summary.max_abs_diff || !diff.is_finite_value() {
            first = false;
            summary.max_abs_diff = diff;
            summary.worst_state = state;
            summary.worst_closed = closed;
            summary.worst_oracle = oracle;
        }
    }
    summary.passed = summary.max_abs_diff <= tol && summary.max_abs_diff.is_finite_value();
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Chart;

    fn nc(x: f64, y: f64) -> NormalizedCoords<f64> {
        NormalizedCoords::new(x, y).unwrap()
    }

    #[test]
    fn interval_examples() {
        let r = minimize_kl_over_interval(Spin::HALF, 0.3).unwrap();
        assert_eq!(r.optimum_value, 0.0);
        assert_eq!(r.optimum_point, OptimumPoint::Interval(0.3));
        let r = minimize_kl_over_interval(Spin::HALF, 1.0).unwrap();
        assert!((r.optimum_value - 2.0_f64.ln()).abs() < 1e-12);
        let OptimumPoint::Interval(q) = r.optimum_point else {
            panic!()
        };
        assert!((q - 0.5).abs() < 1e-9);
        assert!(r.converged && r.final_box_size <= 1e-10);
        // j = 1, p = 0.95 by hand: the minimizer sits at 2/3.
        let r = minimize_kl_over_interval(Spin::ONE, 0.95).unwrap();
        let by_hand = 0.95 * (0.95_f64 / (2.0 / 3.0)).ln() + 0.05 * (0.05_f64 / (1.0 / 3.0)).ln();
        assert!((r.optimum_value - by_hand).abs() < 1e-12);
        assert!(minimize_kl_over_interval(Spin::ONE, -0.1).is_err());
    }

    #[test]
    fn polygon_examples() {
        let r = minimize_kl_ppt(5, nc(0.3, 0.3)).unwrap();
        assert_eq!(r.optimum_value, 0.0);

        let r = minimize_kl_ppt(3, nc(0.0, 1.0)).unwrap();
        assert!((r.optimum_value - 2.0_f64.ln()).abs() < 1e-10);
        let OptimumPoint::Plane(p) = r.optimum_point else {
            panic!()
        };
        let (x, y) = p.to_normalized(3);
        assert!((y - 0.5).abs() < 1e-8 && x <= 1.0 / 3.0 + 1e-8);

        let r = minimize_kl_ppt(5, nc(1.0, 0.0)).unwrap();
        assert!((r.optimum_value - (5.0_f64 / 3.0).ln()).abs() < 1e-10);
        let OptimumPoint::Plane(p) = r.optimum_point else {
            panic!()
        };
        let (x, y) = p.to_normalized(5);
        assert!((x - 0.6).abs() < 1e-6 && (y - 1.0 / 3.0).abs() < 1e-6);
        assert!(r.converged);
    }

    #[test]
    fn polygon_input_checks() {
        let tri = [
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(2.0, 0.0),
        ];
        assert!(minimize_kl_over_polygon(5, nc(0.9, 0.0), &tri).is_err());
        let mut poly = ppt_polygon::<f64>(5).unwrap().to_vec();
        poly.reverse();
        let r = minimize_kl_over_polygon(5, nc(1.0, 0.0), &poly).unwrap();
        assert!((r.optimum_value - (5.0_f64 / 3.0).ln()).abs() < 1e-10);
    }

    #[test]
    fn ppt_eigenvalue_examples() {
        let mixed = RiState::<f64>::maximally_mixed(Spin::ONE, Spin::TWO).unwrap();
        assert!(ppt_min_eigenvalue(&mixed) > 0.0);
        let half = RiState::<f64>::from_probabilities(Spin::HALF, Spin::HALF, &[0.5, 0.5]).unwrap();
        assert!(ppt_min_eigenvalue(&half).abs() < 1e-9);
        for n in [3usize, 4, 5] {
            let b = crate::ri_state::normalized_to_raw(n, nc(1.0, 0.0)).unwrap();
            assert!(ppt_min_eigenvalue(&b) < -1e-3);
        }
    }

    #[test]
    fn ppt_matches_polygon_for_two_by_n() {
        for t in 1..5u32 {
            let j = Spin::from_twice(t);
            let thr = f64::from(t) / f64::from(t + 1);
            for p in [thr - 0.05, thr + 0.05] {
                let s = RiState::<f64>::from_probabilities(Spin::HALF, j, &[p, 1.0 - p]).unwrap();
                assert_eq!(ppt_min_eigenvalue(&s) >= -1e-10, p <= thr);
            }
        }
    }

    #[test]
    fn sampler_stays_on_simplex() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let p = sample_simplex(&mut rng, 3);
            assert!(p.iter().all(|&v| v >= 0.0));
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn verify_small_batches() {
        for family in [
            Family::TwoByN {
                j: Spin::THREE_HALVES,
            },
            Family::ThreeByThree,
            Family::ThreeByNOdd { n: 5 },
            Family::ThreeByNEven { n: 6 },
        ] {
            let s = verify_closed_form(family, 40, 1, 1e-6).unwrap();
            assert!(s.passed, "{family:?}: {}", s.max_abs_diff);
        }
        let a = verify_closed_form::<f64>(Family::ThreeByThree, 20, 9, 1e-6).unwrap();
        let b = verify_closed_form::<f64>(Family::ThreeByThree, 20, 9, 1e-6).unwrap();
        assert_eq!(a, b);
        assert!(verify_closed_form::<f64>(Family::ThreeByNOdd { n: 4 }, 1, 0, 1e-6).is_err());
        assert_eq!(Family::three_by(7).unwrap(), Family::ThreeByNOdd { n: 7 });
        assert!(Chart::<f64>::new(2).is_err());
    }
}
