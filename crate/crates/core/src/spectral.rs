//! Closed-form eigensystem of the PT Hamiltonian, similarity matrix, metric
//! construction, and phase classification.
//!
//! The spectrum is `{0, +E, -E}` with `E = sqrt(2v² - γ_pt²)`: real in the
//! unbroken phase, imaginary in the broken phase, degenerate at the
//! exceptional point `2v² = γ_pt²` where the eigenvectors coalesce and the
//! matrix stops being diagonalizable. Eigenvectors keep their explicit `1/E`
//! normalization (rather than unit norm) so the similarity matrix and the
//! metric `η = (DD†)⁻¹` come out in the closed form the rest of the crate is
//! cross-checked against; a different column scaling would simply produce an
//! equally valid, different metric.

use std::fmt;

use thiserror::Error;

use crate::linalg3::{c64, CMat3, CVec3, Linalg3Error, C64};
use crate::model::{build_pt_hamiltonian, PtParams};

/// Default relative half-width of the exceptional-point band:
/// `|2v² - γ_pt²| <= EP_TOL_REL * max(v², γ_pt²)` classifies as EP.
pub const EP_TOL_REL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    /// Eigenvectors (and everything downstream of them) are undefined where
    /// the spectrum degenerates.
    #[error("exceptional point: discriminant 2v² - γ_pt² = {discriminant:.3e} within tolerance of zero")]
    ExceptionalPoint { discriminant: f64 },
    #[error(transparent)]
    Linalg(#[from] Linalg3Error),
}

/// PT phase of a parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Real spectrum, positive-definite metric: `2v² > γ_pt²`.
    Unbroken,
    /// Complex-conjugate eigenvalue pair: `2v² < γ_pt²`.
    Broken,
    /// Coalesced spectrum and eigenvectors: `2v² = γ_pt²` within tolerance.
    ExceptionalPoint,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self {
            Regime::Unbroken => "Unbroken",
            Regime::Broken => "Broken",
            Regime::ExceptionalPoint => "ExceptionalPoint",
        };
        f.write_str(tag)
    }
}

/// Absolute exceptional-point tolerance at this parameter scale.
pub fn default_ep_tol(q: &PtParams) -> f64 {
    EP_TOL_REL * (q.v() * q.v()).max(q.gamma_pt() * q.gamma_pt())
}

/// Classify from the raw discriminant `2v² - γ_pt²` with an absolute
/// tolerance `ep_tol` around zero.
pub fn classify_discriminant(discriminant: f64, ep_tol: f64) -> Regime {
    if discriminant > ep_tol {
        Regime::Unbroken
    } else if discriminant < -ep_tol {
        Regime::Broken
    } else {
        Regime::ExceptionalPoint
    }
}

pub fn classify_regime(q: &PtParams, ep_tol: f64) -> Regime {
    classify_discriminant(q.discriminant(), ep_tol)
}

/// [`classify_regime`] with the scale-invariant default tolerance.
pub fn classify_regime_default(q: &PtParams) -> Regime {
    classify_regime(q, default_ep_tol(q))
}

/// Eigenvalues `(0, +E, -E)` for raw `(γ_pt, v)`, with
/// `E = sqrt(2v² - γ_pt²)` continued to `i·sqrt(γ_pt² - 2v²)` past the
/// threshold (`e_plus` carries the positive imaginary part there).
///
/// Total in both parameters — `v = 0` is allowed here, unlike in
/// [`PtParams`], so threshold sweeps can include the uncoupled column.
pub fn eigenvalues_for(gamma_pt: f64, v: f64) -> (C64, C64, C64) {
    let disc = 2.0 * v * v - gamma_pt * gamma_pt;
    let e = if disc >= 0.0 {
        c64(disc.sqrt(), 0.0)
    } else {
        c64(0.0, (-disc).sqrt())
    };
    (c64(0.0, 0.0), e, -e)
}

/// Eigenvalues `(0, +E, -E)` of the PT Hamiltonian.
pub fn eigenvalues(q: &PtParams) -> (C64, C64, C64) {
    eigenvalues_for(q.gamma_pt(), q.v())
}

fn nonzero_eigenvalue(q: &PtParams) -> Result<C64, SpectralError> {
    if classify_regime_default(q) == Regime::ExceptionalPoint {
        return Err(SpectralError::ExceptionalPoint {
            discriminant: q.discriminant(),
        });
    }
    Ok(eigenvalues(q).1)
}

/// The three eigenvectors, in eigenvalue order `(+E, -E, 0)`:
///
/// ```text
/// φ₁ = ((E-iγ)²/(2v), E-iγ, v) / E
/// φ₂ = ((E+iγ)²/(2v), -(E+iγ), v) / E
/// φ₃ = (-v, -iγ, v) / E
/// ```
///
/// Fails at the exceptional point, where `1/E` blows up and the vectors
/// coalesce.
pub fn eigenvectors(q: &PtParams) -> Result<[CVec3; 3], SpectralError> {
    let e = nonzero_eigenvalue(q)?;
    let gamma = c64(0.0, q.gamma_pt());
    let v = c64(q.v(), 0.0);
    let inv_e = c64(1.0, 0.0) / e;
    let a_minus = e - gamma; // E - iγ
    let a_plus = e + gamma; // E + iγ
    let phi1 = CVec3::new(a_minus * a_minus / (v * 2.0), a_minus, v) * inv_e;
    let phi2 = CVec3::new(a_plus * a_plus / (v * 2.0), -a_plus, v) * inv_e;
    let phi3 = CVec3::new(-v, -gamma, v) * inv_e;
    Ok([phi1, phi2, phi3])
}

/// Similarity matrix with the eigenvectors as columns `(φ₁|φ₂|φ₃)`, so that
/// `D⁻¹ H D = diag(E, -E, 0)`.
pub fn similarity_matrix(q: &PtParams) -> Result<CMat3, SpectralError> {
    Ok(CMat3::from_columns(eigenvectors(q)?))
}

/// Metric `η = (D D†)⁻¹`.
///
/// Hermitian positive definite in the unbroken phase, where it makes the
/// eigenvectors orthonormal (`⟨φ_m|η|φ_n⟩ = δ_mn`) and intertwines `H` with
/// `H†`. Computable in the broken phase too, but there it no longer
/// witnesses pseudo-Hermiticity — parity does.
pub fn metric(d: &CMat3) -> Result<CMat3, SpectralError> {
    Ok((*d * d.adjoint()).inverse()?)
}

/// Max-entry deviation `max |D† η D - I|` from metric orthonormality.
pub fn verify_metric_orthonormality(eta: &CMat3, d: &CMat3) -> f64 {
    (d.adjoint() * *eta * *d - CMat3::identity()).max_abs()
}

/// The fully assembled eigensystem of one parameter point.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub e0: C64,
    pub e_plus: C64,
    pub e_minus: C64,
    /// Eigenvectors in eigenvalue order `(+E, -E, 0)`.
    pub eigvecs: [CVec3; 3],
    /// Columns are `eigvecs`.
    pub d_matrix: CMat3,
    /// `(D D†)⁻¹`.
    pub eta: CMat3,
    pub regime: Regime,
    pub discriminant: f64,
}

impl SpectralData {
    /// Runs the whole closed-form pipeline; fails at the exceptional point or
    /// if the similarity matrix turns out numerically singular.
    pub fn compute(q: &PtParams) -> Result<Self, SpectralError> {
        let regime = classify_regime_default(q);
        if regime == Regime::ExceptionalPoint {
            return Err(SpectralError::ExceptionalPoint {
                discriminant: q.discriminant(),
            });
        }
        let (e0, e_plus, e_minus) = eigenvalues(q);
        let eigvecs = eigenvectors(q)?;
        let d_matrix = CMat3::from_columns(eigvecs);
        let eta = metric(&d_matrix)?;
        Ok(Self {
            e0,
            e_plus,
            e_minus,
            eigvecs,
            d_matrix,
            eta,
            regime,
            discriminant: q.discriminant(),
        })
    }

    /// Residual `max |D⁻¹ H D - diag(E, -E, 0)|` of the diagonalization.
    pub fn diagonalization_residual(&self, q: &PtParams) -> Result<f64, SpectralError> {
        let h = build_pt_hamiltonian(q);
        let d_inv = self.d_matrix.inverse().map_err(SpectralError::from)?;
        let lambda = CMat3::from_diag(self.e_plus, self.e_minus, self.e0);
        Ok((d_inv * h * self.d_matrix - lambda).max_abs())
    }
}
