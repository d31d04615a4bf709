//! Rotationally invariant states in the projector representation
//!
//! ```text
//! ρ = (N1 N2)^(-1/2) Σ_J α_J (2J+1)^(-1/2) P_J
//! ```
//!
//! An RI state is fully described by one coefficient `α_J` per total spin
//! block. The trace weight of block `J` is `p_J = sqrt((2J+1)/(N1 N2)) α_J`,
//! so the `p_J` form a probability vector and relative entropies between
//! RI states reduce to classical KL divergences of these vectors.

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex;

use crate::angular_momentum::{projector, Spin};
use crate::dense::DenseOperator;
use crate::error::{Error, Result};
use crate::real::{xlogx, xlogx_over, Real};

const NEGATIVE_SLACK: f64 = 1e-12;
const NORM_TOL: f64 = 1e-10;
const RENORM_TOL: f64 = 1e-8;

/// Coefficients `α_J`, one per `J ∈ {j2 - j1, ..., j1 + j2}` (ascending).
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaVector<T: Real> {
    j1: Spin,
    j2: Spin,
    alphas: Vec<T>,
}

/// A validated RI state.
#[derive(Clone, Debug, PartialEq)]
pub struct RiState<T: Real> {
    coeffs: AlphaVector<T>,
    renormalized: bool,
}

/// Barycentric weights `(α̂_{j-1}, α̂_j)` of a spin-1 ⊗ spin-j state, i.e.
/// the trace weights of the `J = j-1` and `J = j` blocks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalizedCoords<T: Real> {
    pub lo: T,
    pub mid: T,
}

fn total_spins(j1: Spin, j2: Spin) -> Vec<Spin> {
    Spin::coupled_range(j1, j2).collect()
}

/// `sqrt((2J+1) / (N1 N2))` for every block, ascending in `J`.
pub fn block_weights<T: Real>(j1: Spin, j2: Spin) -> Vec<T> {
    let n = (j1.dim() * j2.dim()) as f64;
    total_spins(j1, j2)
        .into_iter()
        .map(|t| T::lit((t.dim() as f64 / n).sqrt()))
        .collect()
}

impl<T: Real> AlphaVector<T> {
    pub fn j1(&self) -> Spin {
        self.j1
    }

    pub fn j2(&self) -> Spin {
        self.j2
    }

    pub fn alphas(&self) -> &[T] {
        &self.alphas
    }

    pub fn totals(&self) -> Vec<Spin> {
        total_spins(self.j1, self.j2)
    }

    /// Trace weights `p_J`.
    pub fn probabilities(&self) -> Vec<T> {
        block_weights::<T>(self.j1, self.j2)
            .into_iter()
            .zip(&self.alphas)
            .map(|(w, &a)| w * a)
            .collect()
    }

    /// Eigenvalue of the dense state on block `J`: `α_J / sqrt(N1 N2 (2J+1))`.
    pub fn block_eigenvalues(&self) -> Vec<T> {
        let n = (self.j1.dim() * self.j2.dim()) as f64;
        self.totals()
            .into_iter()
            .zip(&self.alphas)
            .map(|(t, &a)| a / T::lit((n * t.dim() as f64).sqrt()))
            .collect()
    }
}

impl<T: Real> RiState<T> {
    pub fn coeffs(&self) -> &AlphaVector<T> {
        &self.coeffs
    }

    pub fn alphas(&self) -> &[T] {
        &self.coeffs.alphas
    }

    pub fn j1(&self) -> Spin {
        self.coeffs.j1
    }

    pub fn j2(&self) -> Spin {
        self.coeffs.j2
    }

    pub fn dim(&self) -> usize {
        self.coeffs.j1.dim() * self.coeffs.j2.dim()
    }

    /// True when construction rescaled the input to restore unit trace.
    pub fn renormalized(&self) -> bool {
        self.renormalized
    }

    pub fn probabilities(&self) -> Vec<T> {
        self.coeffs.probabilities()
    }

    /// Builds a state from block trace weights `p_J`.
    pub fn from_probabilities(j1: Spin, j2: Spin, probs: &[T]) -> Result<Self> {
        let w = block_weights::<T>(j1, j2);
        if probs.len() != w.len() {
            return Err(Error::InvalidAlpha(format!(
                "expected {} block weights, got {}",
                w.len(),
                probs.len()
            )));
        }
        let alphas: Vec<T> = probs.iter().zip(&w).map(|(&p, &w)| p / w).collect();
        make_ri_state(j1, j2, &alphas)
    }

    /// `I / (N1 N2)`.
    pub fn maximally_mixed(j1: Spin, j2: Spin) -> Result<Self> {
        let alphas = block_weights::<T>(j1, j2);
        make_ri_state(j1, j2, &alphas)
    }

    /// Dense form `Σ_J α_J / sqrt(N1 N2 (2J+1)) P_J`.
    pub fn to_density(&self) -> DenseOperator<T> {
        let (j1, j2) = (self.j1(), self.j2());
        let dim = self.dim();
        let mut acc = DMatrix::<Complex<T>>::zeros(dim, dim);
        for (t, ev) in self
            .coeffs
            .totals()
            .into_iter()
            .zip(self.coeffs.block_eigenvalues())
        {
            if ev == T::zero() {
                continue;
            }
            let p = projector::<T>(j1, j2, t).expect("total spin from the coupled range");
            acc += p.into_matrix().map(|z| z * ev);
        }
        DenseOperator::bipartite(acc, j1.dim(), j2.dim()).expect("consistent dims")
    }
}

/// Validates `alphas` against positivity and unit trace.
///
/// Entries in `[-1e-12, 0)` are clamped to zero and a trace off by less than
/// `1e-8` is rescaled (reported by [`RiState::renormalized`]).
pub fn make_ri_state<T: Real>(j1: Spin, j2: Spin, alphas: &[T]) -> Result<RiState<T>> {
    if j1 > j2 {
        return Err(Error::InvalidAlpha(format!(
            "spins must be ordered j1 <= j2, got j1={j1}, j2={j2}"
        )));
    }
    let expected = j1.twice() as usize + 1;
    if alphas.len() != expected {
        return Err(Error::InvalidAlpha(format!(
            "expected {expected} coefficients for j1={j1}, j2={j2}, got {}",
            alphas.len()
        )));
    }
    let slack = T::slack(NEGATIVE_SLACK);
    let mut clean = Vec::with_capacity(alphas.len());
    for (k, &a) in alphas.iter().enumerate() {
        if !a.is_finite_value() {
            return Err(Error::InvalidAlpha(format!("alpha[{k}] is not finite")));
        }
        if a < -slack {
            return Err(Error::InvalidAlpha(format!("alpha[{k}] = {a} is negative")));
        }
        clean.push(if a < T::zero() { T::zero() } else { a });
    }
    let trace = block_weights::<T>(j1, j2)
        .iter()
        .zip(&clean)
        .fold(T::zero(), |s, (&w, &a)| s + w * a);
    let dev = (trace - T::one()).abs();
    let mut renormalized = false;
    if dev > T::slack(NORM_TOL) {
        if dev >= T::slack(RENORM_TOL) {
            return Err(Error::InvalidAlpha(format!(
                "normalization violated: trace = {trace}"
            )));
        }
        for a in &mut clean {
            *a /= trace;
        }
        renormalized = true;
    }
    Ok(RiState {
        coeffs: AlphaVector {
            j1,
            j2,
            alphas: clean,
        },
        renormalized,
    })
}

/// Projects a density matrix onto the RI family:
/// `Σ_J tr(P_J op) / (2J+1) P_J`.
pub fn twirl<T: Real>(op: &DenseOperator<T>, j1: Spin, j2: Spin) -> Result<RiState<T>> {
    let dim = j1.dim() * j2.dim();
    if op.dim() != dim {
        return Err(Error::Dimension(format!(
            "operator has dim {}, spins need {dim}",
            op.dim()
        )));
    }
    let tr = op.trace();
    if (tr.re - T::one()).abs() > T::slack(NORM_TOL) || tr.im.abs() > T::slack(NORM_TOL) {
        return Err(Error::NotDensity(format!("trace {} != 1", tr.re)));
    }
    RiState::from_probabilities(j1, j2, &block_traces(op, j1, j2))
}

fn block_traces<T: Real>(op: &DenseOperator<T>, j1: Spin, j2: Spin) -> Vec<T> {
    total_spins(j1, j2)
        .into_iter()
        .map(|t| {
            let p = projector::<T>(j1, j2, t).expect("total spin from the coupled range");
            // tr(P op) = Σ_ij P_ij op_ji
            p.matrix()
                .iter()
                .zip(op.matrix().transpose().iter())
                .fold(T::zero(), |s, (a, b)| s + (*a * *b).re)
        })
        .collect()
}

/// Block coefficients `α_J` of the RI part of any operator, without
/// positivity or trace checks; used for images under non-positive maps.
pub fn block_alphas<T: Real>(op: &DenseOperator<T>, j1: Spin, j2: Spin) -> Result<Vec<T>> {
    let dim = j1.dim() * j2.dim();
    if op.dim() != dim {
        return Err(Error::Dimension(format!(
            "operator has dim {}, spins need {dim}",
            op.dim()
        )));
    }
    Ok(block_traces(op, j1, j2)
        .into_iter()
        .zip(block_weights::<T>(j1, j2))
        .map(|(p, w)| p / w)
        .collect())
}

/// Relative entropy between RI states:
/// `Σ_J sqrt((2J+1)/(N1 N2)) α_J (ln α_J - ln α*_J)`, with `0 ln 0 = 0` and
/// `+inf` whenever `α_J > 0 = α*_J`.
pub fn kl_alpha<T: Real>(rho: &RiState<T>, sigma: &RiState<T>) -> Result<T> {
    if rho.j1() != sigma.j1() || rho.j2() != sigma.j2() {
        return Err(Error::SpinMismatch(
            format!("{}, {}", rho.j1(), rho.j2()),
            format!("{}, {}", sigma.j1(), sigma.j2()),
        ));
    }
    Ok(kl_probabilities(
        &rho.probabilities(),
        &sigma.probabilities(),
    ))
}

/// Classical KL divergence `Σ p ln(p/q)` with the same conventions.
pub fn kl_probabilities<T: Real>(p: &[T], q: &[T]) -> T {
    p.iter()
        .zip(q)
        .fold(T::zero(), |s, (&a, &b)| s + xlogx_over(a, b))
}

/// `S(a‖b) = tr(a ln a - a ln b)` through Hermitian eigen-decompositions.
/// Returns `+inf` when the support of `a` is not contained in that of `b`.
pub fn quantum_relative_entropy<T: Real>(a: &DenseOperator<T>, b: &DenseOperator<T>) -> Result<T> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension(format!("{} vs {}", a.dim(), b.dim())));
    }
    let tol = T::slack(NORM_TOL);
    a.check_density(tol)?;
    b.check_density(tol)?;
    let zero_cut = T::slack(1e-12);
    let sa = a.hermitian_spectrum();
    let sb = b.hermitian_spectrum();
    let mut entropy_term = T::zero();
    let mut cross_term = T::zero();
    for (i, &lam) in sa.values.iter().enumerate() {
        if lam <= zero_cut {
            continue;
        }
        entropy_term += xlogx(lam);
        let ai = sa.vectors.column(i);
        for (j, &mu) in sb.values.iter().enumerate() {
            let overlap = ai.dotc(&sb.vectors.column(j)).modulus_squared();
            let weight = lam * overlap;
            if mu <= zero_cut {
                if weight > zero_cut {
                    return Ok(T::INFINITY);
                }
                continue;
            }
            cross_term += weight * mu.ln();
        }
    }
    let s = entropy_term - cross_term;
    Ok(if s < T::zero() && s > -tol {
        T::zero()
    } else {
        s
    })
}

impl<T: Real> NormalizedCoords<T> {
    /// Validates `lo, mid >= 0` and `lo + mid <= 1` up to `1e-10`, clamping
    /// the slack away.
    pub fn new(lo: T, mid: T) -> Result<Self> {
        let tol = T::slack(NORM_TOL);
        let outside = || Error::OutsideSimplex {
            x: lo.as_f64(),
            y: mid.as_f64(),
        };
        if !lo.is_finite_value() || !mid.is_finite_value() {
            return Err(outside());
        }
        if lo < -tol || mid < -tol || lo + mid > T::one() + tol {
            return Err(outside());
        }
        let mut lo = lo.max(T::zero());
        let mut mid = mid.max(T::zero());
        let s = lo + mid;
        if s > T::one() {
            lo /= s;
            mid /= s;
        }
        Ok(Self { lo, mid })
    }

    /// Trace weight of the `J = j+1` block.
    pub fn hi(&self) -> T {
        (T::one() - self.lo - self.mid).max(T::zero())
    }

    pub fn probabilities(&self) -> [T; 3] {
        [self.lo, self.mid, self.hi()]
    }
}

/// `(sqrt(3N/(N-2)), sqrt(3), sqrt(3N/(N+2)))`: raw α per unit of trace
/// weight for `J = j-1, j, j+1` of a spin-1 ⊗ spin-j system.
pub fn raw_prefactors<T: Real>(n: usize) -> [T; 3] {
    let nf = n as f64;
    [
        T::lit((3.0 * nf / (nf - 2.0)).sqrt()),
        T::lit(3.0_f64.sqrt()),
        T::lit((3.0 * nf / (nf + 2.0)).sqrt()),
    ]
}

pub fn raw_to_normalized<T: Real>(state: &RiState<T>) -> Result<NormalizedCoords<T>> {
    if state.j1() != Spin::ONE {
        return Err(Error::OutOfRange(format!(
            "normalized coordinates need j1 = 1, got {}",
            state.j1()
        )));
    }
    let p = state.probabilities();
    NormalizedCoords::new(p[0], p[1])
}

/// Spin-1 ⊗ spin-j state with `N = 2j + 1` at the given coordinates.
pub fn normalized_to_raw<T: Real>(n: usize, coords: NormalizedCoords<T>) -> Result<RiState<T>> {
    if n < 3 {
        return Err(Error::OutOfRange(format!("N must be >= 3, got {n}")));
    }
    RiState::from_probabilities(Spin::ONE, Spin::from_dim(n)?, &coords.probabilities())
}
