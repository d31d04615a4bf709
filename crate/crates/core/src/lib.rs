//! Relative entropy of entanglement for rotationally invariant states of
//! two spins.
//!
//! A rotationally invariant (RI) state of spins `j1 ⊗ j2` is a mixture of
//! the projectors onto total spin `J`. Its relative entropy of entanglement
//! reduces to a classical KL divergence over block weights, minimized over
//! the separable (or PPT) RI states. This crate provides:
//!
//! * exact Clebsch-Gordan coefficients, total-spin projectors and the
//!   partial time reversal used as PPT test ([`angular_momentum`]);
//! * RI states, twirling and relative entropies ([`ri_state`]);
//! * the geometry of the spin-1 ⊗ spin-j state triangle ([`geometry`]);
//! * closed forms for spin-1/2 ⊗ spin-j and spin-1 ⊗ spin-j
//!   ([`closed_form`]);
//! * an independent numerical minimizer to check them ([`oracle`]).
//!
//! Everything is generic over the scalar ([`Real`], implemented for `f32`
//! and `f64`); the `*64` aliases fix `f64`.
//!
//! ```
//! use ri_entropy::{ree_3x3, NormalizedCoords64};
//!
//! // Pure J = 1 state of two spin-1 particles.
//! let r = ree_3x3(NormalizedCoords64::new(0.0, 1.0).unwrap()).unwrap();
//! assert!((r.value - 2f64.ln()).abs() < 1e-15);
//! ```

pub mod angular_momentum;
pub mod closed_form;
pub mod dense;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod real;
pub mod ri_state;

pub use angular_momentum::{
    clebsch_gordan, coupled_basis_vector, partial_time_reversal, partial_time_reversal_with,
    projector, rotation_y_pi, rotation_y_pi_with, spin_matrices, RotationPhase, Spin,
};
pub use closed_form::{
    e_gamma_3xn_even, evaluate_branch, ree_2xn, ree_3x3, ree_3xn_odd, ree_dispatch, ree_for_state,
    Branch, Measure, ReeResult, RootAux, RootKind,
};
pub use dense::{DenseOperator, HermitianSpectrum};
pub use error::{Error, Result};
pub use geometry::{
    classify_region, in_ppt_polygon, landmark_points, polygon_area_ratio, ppt_image_vertices,
    ppt_polygon, simplex_vertices, Point2, Region,
};
pub use oracle::{
    minimize_kl_over_interval, minimize_kl_over_polygon, minimize_kl_ppt, ppt_min_eigenvalue,
    verify_closed_form, Family, MinimizationReport, OptimumPoint, OracleOptions, VerifySummary,
};
pub use real::Real;
pub use ri_state::{
    block_alphas, kl_alpha, kl_probabilities, make_ri_state, normalized_to_raw,
    quantum_relative_entropy, raw_to_normalized, twirl, AlphaVector, NormalizedCoords, RiState,
};

pub type DenseOperator64 = DenseOperator<f64>;
pub type RiState64 = RiState<f64>;
pub type AlphaVector64 = AlphaVector<f64>;
pub type NormalizedCoords64 = NormalizedCoords<f64>;
pub type Point64 = Point2<f64>;
pub type ReeResult64 = ReeResult<f64>;
pub type MinimizationReport64 = MinimizationReport<f64>;
pub type VerifySummary64 = VerifySummary<f64>;
