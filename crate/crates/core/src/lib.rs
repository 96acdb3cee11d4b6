//! Spectrum, metric construction, phase classification, and time evolution
//! for a dissipative three-level Λ-type atom.
//!
//! The two lower levels |1⟩ and |3⟩ couple to a common upper level |2⟩
//! through pump and coupling fields; every level decays. After removing the
//! average decay and the optical phases, the dynamics are governed by a
//! time-independent non-Hermitian Hamiltonian that is pseudo-Hermitian, and —
//! on two-photon resonance with matched couplings — PT-symmetric. Its
//! spectrum is real below the gain/loss threshold `2v² > γ_pt²` (unbroken
//! phase), complex-conjugate above it (broken phase), and degenerate at the
//! exceptional point in between.
//!
//! Module map:
//! - [`linalg3`]: exact 3×3 complex kernel (adjugate inverse, cubic solver).
//! - [`model`]: physical parameters and Hamiltonian construction in the lab,
//!   effective, and PT-reduced descriptions, plus the symmetry predicates.
//! - [`spectral`]: closed-form eigensystem, similarity matrix, metric
//!   `η = (DD†)⁻¹`, and phase classification.
//! - [`evolve`]: analytic propagator `U = I + bH + cH²`, closed-form
//!   ground-state solution, frame transformations, populations.
//! - [`oracle`]: fixed-step RK4 integration of both the effective and the
//!   time-dependent lab equations, and a characteristic-polynomial
//!   eigenvalue oracle — independent ground truth for everything analytic.

pub mod evolve;
pub mod linalg3;
pub mod model;
pub mod oracle;
pub mod spectral;

pub use evolve::{
    closed_form_b_ground, evolve_b, modal_coefficients, propagator, to_effective_frame,
    to_lab_frame, EvolveError, Frame, ModalCoefficients, ParamsSnapshot, Trajectory,
};
pub use linalg3::{cubic_roots, CMat3, CVec3, Linalg3Error, C64};
pub use model::{
    build_effective_hamiltonian, build_lab_hamiltonian, build_pt_hamiltonian, is_pseudo_hermitian,
    parity_operator, pt_commutator_norm, EffectiveParams, ModelError, PtParams, SystemParams,
};
pub use oracle::{char_poly_eigen_oracle, rk4_effective, rk4_lab, IntegratorConfig, OracleError};
pub use spectral::{
    classify_regime, classify_regime_default, eigenvalues, eigenvalues_for, eigenvectors, metric,
    similarity_matrix, verify_metric_orthonormality, Regime, SpectralData, SpectralError,
};
