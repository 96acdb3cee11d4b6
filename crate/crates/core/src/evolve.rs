//! Analytic time evolution of the effective-frame amplitudes and the
//! transformation back to lab-frame amplitudes.
//!
//! The PT Hamiltonian satisfies `H³ = E²H` with `E² = 2v² - γ_pt²`, so its
//! propagator truncates exactly:
//!
//! ```text
//! U(t) = exp(-iHt/ħ) = I - i·sin(Et/ħ)/E · H + (cos(Et/ħ) - 1)/E² · H²
//! ```
//!
//! Evaluated with complex `E`, the same expression covers the broken phase
//! (where sin/cos turn into sinh/cosh growth) and, through the removable
//! `E → 0` limits, the exceptional point (where `U = I - iHt/ħ - H²t²/2ħ²`
//! exactly, since `H³ = 0` there).

use std::fmt;

use thiserror::Error;

use crate::linalg3::{c64, CMat3, CVec3, C64};
use crate::model::{EffectiveParams, ModelError, PtParams, SystemParams};
use crate::spectral::{eigenvalues, similarity_matrix, SpectralError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvolveError {
    #[error("frame mismatch: expected {expected}, found {found}")]
    FrameMismatch { expected: Frame, found: Frame },
    #[error("invalid time grid: {0}")]
    InvalidTimeGrid(String),
    #[error("non-finite amplitude at grid index {index}")]
    NonFiniteAmplitude { index: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Which amplitudes a trajectory stores.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    /// Effective-frame amplitudes `(b₁, b₂, b₃)` — average decay and optical
    /// phases removed.
    EffectiveB,
    /// Lab-frame amplitudes `(C₁, C₂, C₃)`.
    LabC,
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Frame::EffectiveB => "effective_b",
            Frame::LabC => "lab_c",
        })
    }
}

/// Provenance of a trajectory: which parameter set generated it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamsSnapshot {
    Pt(PtParams),
    System(SystemParams),
}

/// A time grid plus per-time amplitude triples, tagged with the frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    amplitudes: Vec<CVec3>,
    frame: Frame,
    params: ParamsSnapshot,
}

impl Trajectory {
    /// Validates that times are strictly increasing, lengths match, and all
    /// amplitudes are finite.
    pub fn new(
        times: Vec<f64>,
        amplitudes: Vec<CVec3>,
        frame: Frame,
        params: ParamsSnapshot,
    ) -> Result<Self, EvolveError> {
        if times.is_empty() {
            return Err(EvolveError::InvalidTimeGrid("empty grid".into()));
        }
        if times.len() != amplitudes.len() {
            return Err(EvolveError::InvalidTimeGrid(format!(
                "{} times vs {} amplitude triples",
                times.len(),
                amplitudes.len()
            )));
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(EvolveError::InvalidTimeGrid("non-finite time".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(EvolveError::InvalidTimeGrid(
                "times must be strictly increasing".into(),
            ));
        }
        if let Some(index) = amplitudes.iter().position(|a| !a.is_finite()) {
            return Err(EvolveError::NonFiniteAmplitude { index });
        }
        Ok(Self {
            times,
            amplitudes,
            frame,
            params,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn amplitudes(&self) -> &[CVec3] {
        &self.amplitudes
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn params(&self) -> &ParamsSnapshot {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Per-level populations `|amplitude_i(t)|²` along the grid.
    pub fn populations(&self) -> Vec<[f64; 3]> {
        self.amplitudes.iter().map(|a| a.abs_sq()).collect()
    }
}

/// `sin(z)/z` with the removable singularity filled by its series.
fn sinc_z(z: C64) -> C64 {
    if z.norm() < 1e-4 {
        let z2 = z * z;
        c64(1.0, 0.0) - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

/// `(cos(z) - 1)/z²`, evaluated as `-sin²(z/2)/2·(2/z)²` to avoid the
/// cancellation in `cos(z) - 1` at small `|z|`.
fn cos_m1_over_z2(z: C64) -> C64 {
    let s = sinc_z(z / 2.0);
    s * s * (-0.5)
}

/// Scalar coefficients `(b, c)` of `U = I + b·H + c·H²` at time `t`.
fn propagator_coefficients(q: &PtParams, t: f64) -> (C64, C64) {
    let tau = t / q.hbar();
    let (_, e_plus, _) = eigenvalues(q);
    let theta = e_plus * tau;
    let b = c64(0.0, -1.0) * tau * sinc_z(theta);
    let c = cos_m1_over_z2(theta) * (tau * tau);
    (b, c)
}

/// Exact propagator `U(t) = exp(-iHt/ħ)` of the PT Hamiltonian, valid in
/// both phases and at the exceptional point; `U(0) = I` exactly.
pub fn propagator(q: &PtParams, t: f64) -> CMat3 {
    let h = crate::model::build_pt_hamiltonian(q);
    let (b, c) = propagator_coefficients(q, t);
    CMat3::identity() + h * b + (h * h) * c
}

/// Evolve an effective-frame initial state over a strictly increasing time
/// grid: `amplitudes[k] = U(times[k]) · b0`.
pub fn evolve_b(q: &PtParams, b0: &CVec3, times: &[f64]) -> Result<Trajectory, EvolveError> {
    let amplitudes = times.iter().map(|&t| propagator(q, t).mul_vec(b0)).collect();
    Trajectory::new(
        times.to_vec(),
        amplitudes,
        Frame::EffectiveB,
        ParamsSnapshot::Pt(*q),
    )
}

/// Coefficients of an effective-frame state in the eigenbasis at `t = 0`.
///
/// The first coefficient multiplies the `+E` mode (time factor `e^{-iEt/ħ}`),
/// the second the `-E` mode (`e^{+iEt/ħ}`), the third the stationary zero
/// mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModalCoefficients {
    pub c1: C64,
    pub c2: C64,
    pub c3: C64,
}

impl ModalCoefficients {
    /// Rebuild the effective-frame amplitudes at time `t` from the modal
    /// decomposition: `b(t) = D · (c1·e^{-iEt/ħ}, c2·e^{+iEt/ħ}, c3)`.
    pub fn reconstruct(&self, q: &PtParams, t: f64) -> Result<CVec3, SpectralError> {
        let d = similarity_matrix(q)?;
        let (_, e_plus, _) = eigenvalues(q);
        let phase = c64(0.0, -1.0) * e_plus * (t / q.hbar());
        let rotated = CVec3::new(self.c1 * phase.exp(), self.c2 * (-phase).exp(), self.c3);
        Ok(d.mul_vec(&rotated))
    }
}

/// Decompose an effective-frame state onto the eigenbasis: `D⁻¹ · b0`.
pub fn modal_coefficients(q: &PtParams, b0: &CVec3) -> Result<ModalCoefficients, EvolveError> {
    let d = similarity_matrix(q)?;
    let d_inv = d.inverse().map_err(SpectralError::from)?;
    let c = d_inv.mul_vec(b0);
    Ok(ModalCoefficients {
        c1: c[0],
        c2: c[1],
        c3: c[2],
    })
}

/// Closed-form effective-frame amplitudes for a ground-state start
/// `b(0) = (1, 0, 0)`:
///
/// ```text
/// b₁(t) = v²/E² + (v²-γ²)/E² · cos(Et/ħ) - γ/E · sin(Et/ħ)
/// b₂(t) = -i v/E · sin(Et/ħ) - i γv/E² · (cos(Et/ħ) - 1)
/// b₃(t) = v²/E² · (cos(Et/ħ) - 1)
/// ```
///
/// written through `sin(θ)/θ` and `(cos(θ)-1)/θ²` so the expressions stay
/// finite through the exceptional point, and carried over to the broken
/// phase by complex `E` (no separate cosh/sinh path). Agrees with
/// `propagator(q, t) · (1,0,0)ᵀ` to machine precision by construction.
pub fn closed_form_b_ground(q: &PtParams, t: f64) -> CVec3 {
    let gamma = q.gamma_pt();
    let v = q.v();
    let tau = t / q.hbar();
    let (_, e_plus, _) = eigenvalues(q);
    let theta = e_plus * tau;
    let sc = sinc_z(theta); // sin(θ)/θ  =  ħ/(Et)·sin(Et/ħ)
    let cm = cos_m1_over_z2(theta); // (cos(θ)-1)/θ²
    let tau2 = tau * tau;
    let b1 = c64(1.0, 0.0) + cm * (tau2 * (v * v - gamma * gamma)) - sc * (tau * gamma);
    let b2 = sc * c64(0.0, -v * tau) + cm * c64(0.0, -gamma * v * tau2);
    let b3 = cm * (tau2 * v * v);
    CVec3::new(b1, b2, b3)
}

/// Unit-magnitude lab-frame phase factors `(e^{-iω₁t}, e^{-i(ω₁+ω_p)t},
/// e^{-i(ω₁+ω_p-ω_c)t})` of the frame transformation.
fn lab_phases(p: &SystemParams, t: f64) -> [C64; 3] {
    [
        C64::from_polar(1.0, -p.omega1 * t),
        C64::from_polar(1.0, -(p.omega1 + p.omega_p) * t),
        C64::from_polar(1.0, -(p.omega1 + p.omega_p - p.omega_c) * t),
    ]
}

fn check_frame_transform_preconditions(p: &SystemParams) -> Result<(), EvolveError> {
    let eff = EffectiveParams::from_system(p)?;
    if eff.resonance_imposed() {
        return Err(ModelError::ResonanceMismatch {
            mismatch: p.resonance_mismatch(),
        }
        .into());
    }
    Ok(())
}

/// Map effective-frame amplitudes to lab-frame amplitudes:
/// `C_k(t) = b_k(t) · e^{-γ₂t/ħ} · phase_k(t)`, so
/// `|C_k| = |b_k| · e^{-γ₂t/ħ}` independent of the phase convention.
pub fn to_lab_frame(traj: &Trajectory, p: &SystemParams) -> Result<Trajectory, EvolveError> {
    if traj.frame != Frame::EffectiveB {
        return Err(EvolveError::FrameMismatch {
            expected: Frame::EffectiveB,
            found: traj.frame,
        });
    }
    check_frame_transform_preconditions(p)?;
    let amplitudes = traj
        .times
        .iter()
        .zip(&traj.amplitudes)
        .map(|(&t, b)| {
            let envelope = (-p.gamma2 * t / p.hbar).exp();
            let phases = lab_phases(p, t);
            CVec3::new(
                b[0] * phases[0] * envelope,
                b[1] * phases[1] * envelope,
                b[2] * phases[2] * envelope,
            )
        })
        .collect();
    Trajectory::new(
        traj.times.clone(),
        amplitudes,
        Frame::LabC,
        ParamsSnapshot::System(*p),
    )
}

/// Inverse of [`to_lab_frame`]: strips the decay envelope and the optical
/// phases off lab-frame amplitudes.
pub fn to_effective_frame(traj: &Trajectory, p: &SystemParams) -> Result<Trajectory, EvolveError> {
    if traj.frame != Frame::LabC {
        return Err(EvolveError::FrameMismatch {
            expected: Frame::LabC,
            found: traj.frame,
        });
    }
    check_frame_transform_preconditions(p)?;
    let amplitudes = traj
        .times
        .iter()
        .zip(&traj.amplitudes)
        .map(|(&t, c)| {
            let envelope = (p.gamma2 * t / p.hbar).exp();
            let phases = lab_phases(p, t);
            CVec3::new(
                c[0] * phases[0].conj() * envelope,
                c[1] * phases[1].conj() * envelope,
                c[2] * phases[2].conj() * envelope,
            )
        })
        .collect();
    Trajectory::new(
        traj.times.clone(),
        amplitudes,
        Frame::EffectiveB,
        ParamsSnapshot::Pt(match traj.params {
            ParamsSnapshot::Pt(q) => q,
            ParamsSnapshot::System(_) => {
                let eff = EffectiveParams::from_system(p)?;
                eff.pt_params()?
            }
        }),
    )
}
