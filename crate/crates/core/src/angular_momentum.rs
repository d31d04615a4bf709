//! Angular-momentum coupling: spins, Clebsch-Gordan coefficients,
//! total-J projectors, the π rotation about y and the partial time reversal.
//!
//! Spins and magnetic numbers are carried as twice their value so that
//! half-integers stay exact. Phases follow Condon-Shortley.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dense::DenseOperator;
use crate::error::{Error, Result};
use crate::real::Real;

/// A spin quantum number `j`, stored as `2j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Spin(u32);

impl Spin {
    pub const ZERO: Spin = Spin(0);
    pub const HALF: Spin = Spin(1);
    pub const ONE: Spin = Spin(2);
    pub const THREE_HALVES: Spin = Spin(3);
    pub const TWO: Spin = Spin(4);

    pub const fn from_twice(twice_j: u32) -> Self {
        Spin(twice_j)
    }

    /// Spin whose multiplet has dimension `n = 2j + 1`.
    pub fn from_dim(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange("multiplet dimension must be >= 1".into()));
        }
        Ok(Spin((n - 1) as u32))
    }

    pub const fn twice(self) -> u32 {
        self.0
    }

    pub const fn dim(self) -> usize {
        self.0 as usize + 1
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0.is_multiple_of(2)
    }

    /// Twice the allowed magnetic numbers, descending from `+2j`.
    pub fn twice_magnetic(self) -> impl Iterator<Item = i32> + Clone {
        let t = self.0 as i32;
        (0..=t).map(move |k| t - 2 * k)
    }

    pub fn check_magnetic(self, twice_m: i32) -> Result<()> {
        let t = self.0 as i32;
        if twice_m.abs() > t || (t - twice_m) % 2 != 0 {
            return Err(Error::InvalidMagnetic {
                twice_j: self.0,
                twice_m,
            });
        }
        Ok(())
    }

    /// Allowed total spins `|j1 - j2| ..= j1 + j2`, ascending.
    pub fn coupled_range(j1: Spin, j2: Spin) -> impl Iterator<Item = Spin> {
        let lo = j1.0.abs_diff(j2.0);
        let hi = j1.0 + j2.0;
        (lo..=hi).step_by(2).map(Spin)
    }

    pub fn couples(j1: Spin, j2: Spin, total: Spin) -> bool {
        let lo = j1.0.abs_diff(j2.0);
        let hi = j1.0 + j2.0;
        total.0 >= lo && total.0 <= hi && (hi - total.0).is_multiple_of(2)
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for Spin {
    type Err = Error;

    /// Accepts `n/d` fractions and decimals, as long as the value is an
    /// exact non-negative multiple of 1/2.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("'{s}' is not a non-negative multiple of 1/2"));
        if let Some((num, den)) = s.split_once('/') {
            let num: u64 = num.trim().parse().map_err(|_| bad())?;
            let den: u64 = den.trim().parse().map_err(|_| bad())?;
            if den == 0 || !(2 * num).is_multiple_of(den) {
                return Err(bad());
            }
            return u32::try_from(2 * num / den).map(Spin).map_err(|_| bad());
        }
        let v: f64 = s.parse().map_err(|_| bad())?;
        let twice = 2.0 * v;
        if !twice.is_finite() || twice < 0.0 || twice.fract() != 0.0 || twice > f64::from(u32::MAX)
        {
            return Err(bad());
        }
        Ok(Spin(twice as u32))
    }
}

fn factorial(n: i64) -> BigInt {
    debug_assert!(n >= 0);
    (2..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Exact `(sign, CG²)` by the Racah sum; `None` when a selection rule
/// forces zero.
fn clebsch_gordan_squared(
    j1: Spin,
    tm1: i32,
    j2: Spin,
    tm2: i32,
    total: Spin,
    tm: i32,
) -> Result<Option<(bool, BigRational)>> {
    j1.check_magnetic(tm1)?;
    j2.check_magnetic(tm2)?;
    total.check_magnetic(tm)?;
    if tm != tm1 + tm2 || !Spin::couples(j1, j2, total) {
        return Ok(None);
    }
    let (a, b, c) = (j1.0 as i64, j2.0 as i64, total.0 as i64);
    let (m1, m2, m) = (tm1 as i64, tm2 as i64, tm as i64);
    // All of these are integers once the selection rules hold.
    let h = |x: i64| {
        debug_assert!(x % 2 == 0);
        x / 2
    };
    let mut pre = BigRational::from_integer(
        BigInt::from(c + 1)
            * factorial(h(c + a - b))
            * factorial(h(c - a + b))
            * factorial(h(a + b - c)),
    ) / BigRational::from_integer(factorial(h(a + b + c) + 1));
    pre *= BigRational::from_integer(
        factorial(h(c + m))
            * factorial(h(c - m))
            * factorial(h(a - m1))
            * factorial(h(a + m1))
            * factorial(h(b - m2))
            * factorial(h(b + m2)),
    );

    let kmin = 0.max(h(b - c - m1)).max(h(a - c + m2));
    let kmax = h(a + b - c).min(h(a - m1)).min(h(b + m2));
    let mut sum = BigRational::zero();
    for k in kmin..=kmax {
        let den = factorial(k)
            * factorial(h(a + b - c) - k)
            * factorial(h(a - m1) - k)
            * factorial(h(b + m2) - k)
            * factorial(h(c - b + m1) + k)
            * factorial(h(c - a - m2) + k);
        let term = BigRational::new(BigInt::one(), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return Ok(Some((true, BigRational::zero())));
    }
    let positive = sum.is_positive();
    Ok(Some((positive, pre * &sum * &sum)))
}

/// `⟨j1 m1; j2 m2 | J M⟩` in the Condon-Shortley convention. Magnetic
/// numbers are passed as `2m`.
pub fn clebsch_gordan<T: Real>(
    j1: Spin,
    twice_m1: i32,
    j2: Spin,
    twice_m2: i32,
    total: Spin,
    twice_m: i32,
) -> Result<T> {
    match clebsch_gordan_squared(j1, twice_m1, j2, twice_m2, total, twice_m)? {
        None => Ok(T::zero()),
        Some((positive, sq)) => {
            let mag = sq.to_f64().expect("finite rational").sqrt();
            Ok(T::lit(if positive { mag } else { -mag }))
        }
    }
}

/// `|J M⟩` expanded in the product basis of `C^N1 ⊗ C^N2`.
pub fn coupled_basis_vector<T: Real>(
    j1: Spin,
    j2: Spin,
    total: Spin,
    twice_m: i32,
) -> Result<DVector<Complex<T>>> {
    check_coupling(j1, j2, total)?;
    total.check_magnetic(twice_m)?;
    let n2 = j2.dim();
    let mut v = DVector::zeros(j1.dim() * n2);
    for (a, tm1) in j1.twice_magnetic().enumerate() {
        let tm2 = twice_m - tm1;
        if j2.check_magnetic(tm2).is_err() {
            continue;
        }
        let b = ((j2.0 as i32 - tm2) / 2) as usize;
        let c = clebsch_gordan::<T>(j1, tm1, j2, tm2, total, twice_m)?;
        v[a * n2 + b] = Complex::new(c, T::zero());
    }
    Ok(v)
}

fn check_coupling(j1: Spin, j2: Spin, total: Spin) -> Result<()> {
    if Spin::couples(j1, j2, total) {
        Ok(())
    } else {
        Err(Error::CouplingRange {
            twice_j1: j1.0,
            twice_j2: j2.0,
            twice_total: total.0,
        })
    }
}

/// `P_J = Σ_M |J M⟩⟨J M|` on `C^N1 ⊗ C^N2`.
pub fn projector<T: Real>(j1: Spin, j2: Spin, total: Spin) -> Result<DenseOperator<T>> {
    check_coupling(j1, j2, total)?;
    let dim = j1.dim() * j2.dim();
    let mut acc = DMatrix::<Complex<T>>::zeros(dim, dim);
    for tm in total.twice_magnetic() {
        let v = coupled_basis_vector::<T>(j1, j2, total, tm)?;
        acc += &v * v.adjoint();
    }
    DenseOperator::bipartite(acc, j1.dim(), j2.dim())
}

/// Phase convention for the π rotation about y.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RotationPhase {
    /// `V[m', m] = (-1)^(j-m) δ(m', -m)`, the Wigner d-matrix at π.
    #[default]
    JMinusM,
    /// `V[m', m] = (-1)^(j+m) δ(m', -m)`.
    JPlusM,
}

/// Wigner d-matrix of spin `j` at angle π (Condon-Shortley).
pub fn rotation_y_pi<T: Real>(j: Spin) -> DenseOperator<T> {
    rotation_y_pi_with(j, RotationPhase::JMinusM)
}

pub fn rotation_y_pi_with<T: Real>(j: Spin, phase: RotationPhase) -> DenseOperator<T> {
    let n = j.dim();
    let t = j.0 as i32;
    let mut v = DMatrix::<Complex<T>>::zeros(n, n);
    for (col, tm) in j.twice_magnetic().enumerate() {
        let row = n - 1 - col;
        let exponent = match phase {
            RotationPhase::JMinusM => (t - tm) / 2,
            RotationPhase::JPlusM => (t + tm) / 2,
        };
        let sign = if exponent % 2 == 0 {
            T::one()
        } else {
            -T::one()
        };
        v[(row, col)] = Complex::new(sign, T::zero());
    }
    DenseOperator::new(v).expect("square")
}

/// `ϑ₂ = I ⊗ ϑ` with `ϑ B = V Bᵀ V†` acting on the second factor.
pub fn partial_time_reversal<T: Real>(op: &DenseOperator<T>) -> Result<DenseOperator<T>> {
    partial_time_reversal_with(op, RotationPhase::JMinusM)
}

pub fn partial_time_reversal_with<T: Real>(
    op: &DenseOperator<T>,
    phase: RotationPhase,
) -> Result<DenseOperator<T>> {
    let (n1, n2) = op
        .factors()
        .ok_or_else(|| Error::Dimension("partial time reversal needs factor dims".into()))?;
    if n1 * n2 != op.dim() {
        return Err(Error::Dimension("inconsistent factor dims".into()));
    }
    let v = rotation_y_pi_with::<T>(Spin::from_dim(n2)?, phase).into_matrix();
    let vd = v.adjoint();
    let m = op.matrix();
    let mut out = DMatrix::<Complex<T>>::zeros(op.dim(), op.dim());
    for a in 0..n1 {
        for c in 0..n1 {
            let block = m.view((a * n2, c * n2), (n2, n2));
            let image = &v * block.transpose() * &vd;
            out.view_mut((a * n2, c * n2), (n2, n2)).copy_from(&image);
        }
    }
    DenseOperator::bipartite(out, n1, n2)
}

/// The Hermitian spin operators `(J_x, J_y, J_z)` of spin `j`, in the
/// descending-m basis.
pub fn spin_matrices<T: Real>(j: Spin) -> [DMatrix<Complex<T>>; 3] {
    let n = j.dim();
    let jj = j.value();
    let mut jp = DMatrix::<Complex<T>>::zeros(n, n);
    let mut jz = DMatrix::<Complex<T>>::zeros(n, n);
    let ms: Vec<f64> = j.twice_magnetic().map(|t| f64::from(t) / 2.0).collect();
    for (k, &m) in ms.iter().enumerate() {
        jz[(k, k)] = Complex::new(T::lit(m), T::zero());
        // J+ |m⟩ = sqrt(j(j+1) - m(m+1)) |m+1⟩, and |m+1⟩ sits one row up.
        if k > 0 {
            let c = (jj * (jj + 1.0) - m * (m + 1.0)).sqrt();
            jp[(k - 1, k)] = Complex::new(T::lit(c), T::zero());
        }
    }
    let jm = jp.adjoint();
    let half = T::lit(0.5);
    let jx = (&jp + &jm).map(|z| z * half);
    let jy = (&jp - &jm).map(|z| z * Complex::new(T::zero(), -half));
    [jx, jy, jz]
}
