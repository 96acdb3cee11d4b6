//! Physical parameters and Hamiltonian construction.
//!
//! Three levels of description of the same Λ system:
//!
//! 1. lab frame — time-dependent, rotating-wave couplings, diagonal decays;
//! 2. effective frame — time-independent after removing the average decay
//!    `γ₂ = (γ₁+γ₃)/2` and the optical phases;
//! 3. PT form — the effective Hamiltonian on two-photon resonance (`Δ = 0`)
//!    with matched couplings (`v_p = v_c`), which commutes with the combined
//!    parity (|1⟩↔|3⟩ exchange) and time-reversal (conjugation) operation.
//!
//! Parity is represented by the anti-diagonal level-exchange matrix — the
//! unique involutive permutation under which the PT form commutes with PT;
//! time reversal acts as entry-wise complex conjugation.

use thiserror::Error;

use crate::linalg3::{c64, CMat3, Linalg3Error, C64};

/// Relative tolerance for the `γ₂ = (γ₁+γ₃)/2` reduction condition and the
/// `Δ = 0`, `v_p = v_c` PT conditions.
pub const PARAM_TOL_REL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameter `{field}`: {message}")]
    InvalidParams {
        field: &'static str,
        message: String,
    },
    /// The reduction to a time-independent effective Hamiltonian requires the
    /// middle-level decay to be the average of the outer ones.
    #[error("gamma2 = {gamma2} violates the reduction condition (required (gamma1+gamma3)/2 = {required})")]
    LambdaReductionViolated { gamma2: f64, required: f64 },
    /// Zero (or negative) common coupling: the PT form degenerates to a
    /// diagonal decay matrix.
    #[error("degenerate coupling: v = {v} (must be > 0)")]
    DegenerateCoupling { v: f64 },
    /// Effective parameters that do not satisfy the PT conditions.
    #[error("not PT-reducible: detuning = {detuning:.3e}, coupling mismatch = {coupling_mismatch:.3e}")]
    NotPtReducible {
        detuning: f64,
        coupling_mismatch: f64,
    },
    /// Frame transformation requested for a system whose two-photon resonance
    /// assumption does not hold.
    #[error("resonance mismatch: omega23 - omega_c = {mismatch:.3e}")]
    ResonanceMismatch { mismatch: f64 },
}

/// Full lab-frame inputs: decay rates, level eigenfrequencies, field
/// frequencies, coupling strengths, and the action scale.
///
/// Decay rates `gamma*` carry energy units (inverse time when `hbar = 1`),
/// frequencies `omega*` rad/time, couplings `v_p`/`v_c` energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: f64,
    /// Pump field frequency (drives |1⟩–|2⟩).
    pub omega_p: f64,
    /// Coupling field frequency (drives |2⟩–|3⟩).
    pub omega_c: f64,
    /// Pump coupling strength (real).
    pub v_p: f64,
    /// Coupling-field strength (real).
    pub v_c: f64,
    pub hbar: f64,
}

impl SystemParams {
    /// Checks finiteness, sign constraints, and the `γ₂ = (γ₁+γ₃)/2`
    /// reduction condition.
    pub fn validate(&self) -> Result<(), ModelError> {
        let fields = [
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("gamma3", self.gamma3),
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("omega3", self.omega3),
            ("omega_p", self.omega_p),
            ("omega_c", self.omega_c),
            ("v_p", self.v_p),
            ("v_c", self.v_c),
            ("hbar", self.hbar),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(ModelError::InvalidParams {
                    field: name,
                    message: format!("non-finite value {value}"),
                });
            }
        }
        for (name, value) in [
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("gamma3", self.gamma3),
        ] {
            if value < 0.0 {
                return Err(ModelError::InvalidParams {
                    field: name,
                    message: format!("decay rate must be >= 0, got {value}"),
                });
            }
        }
        if self.hbar <= 0.0 {
            return Err(ModelError::InvalidParams {
                field: "hbar",
                message: format!("must be > 0, got {}", self.hbar),
            });
        }
        let required = (self.gamma1 + self.gamma3) / 2.0;
        let tol = PARAM_TOL_REL * self.gamma1.max(self.gamma3).max(1.0);
        if (self.gamma2 - required).abs() > tol {
            return Err(ModelError::LambdaReductionViolated {
                gamma2: self.gamma2,
                required,
            });
        }
        Ok(())
    }

    /// Effective gain/loss parameter `(γ₁ - γ₃)/2`.
    pub fn gamma_pt(&self) -> f64 {
        (self.gamma1 - self.gamma3) / 2.0
    }

    /// Pump detuning `Δ = ω₂₁ - ω_p`.
    pub fn detuning(&self) -> f64 {
        (self.omega2 - self.omega1) - self.omega_p
    }

    /// Deviation from the two-photon resonance assumption, `ω₂₃ - ω_c`.
    pub fn resonance_mismatch(&self) -> f64 {
        (self.omega2 - self.omega3) - self.omega_c
    }
}

/// Parameters of the time-independent effective Hamiltonian, derivable only
/// from a validated [`SystemParams`] so that `gamma_pt` can never drift out
/// of sync with the decay rates that define it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveParams {
    gamma_pt: f64,
    detuning: f64,
    v_p: f64,
    v_c: f64,
    hbar: f64,
    resonance_imposed: bool,
}

impl EffectiveParams {
    pub fn from_system(p: &SystemParams) -> Result<Self, ModelError> {
        p.validate()?;
        let mismatch = p.resonance_mismatch();
        let omega_scale = p
            .omega2
            .abs()
            .max(p.omega3.abs())
            .max(p.omega_c.abs())
            .max(1.0);
        Ok(Self {
            gamma_pt: p.gamma_pt(),
            detuning: p.detuning(),
            v_p: p.v_p,
            v_c: p.v_c,
            hbar: p.hbar,
            resonance_imposed: mismatch.abs() > PARAM_TOL_REL * omega_scale,
        })
    }

    pub fn gamma_pt(&self) -> f64 {
        self.gamma_pt
    }

    /// Pump detuning `Δ = ω₂₁ - ω_p` (rad/time; the Hamiltonian carries `ħΔ`).
    pub fn detuning(&self) -> f64 {
        self.detuning
    }

    pub fn v_p(&self) -> f64 {
        self.v_p
    }

    pub fn v_c(&self) -> f64 {
        self.v_c
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Whether the construction had to impose `ω₂₃ = ω_c` rather than finding
    /// it satisfied exactly.
    pub fn resonance_imposed(&self) -> bool {
        self.resonance_imposed
    }

    /// Reduce to the two-parameter PT form; requires `Δ = 0` and `v_p = v_c`
    /// within [`PARAM_TOL_REL`].
    pub fn pt_params(&self) -> Result<PtParams, ModelError> {
        let coupling_scale = self.v_p.abs().max(self.v_c.abs()).max(1.0);
        let detuning_scale = coupling_scale / self.hbar;
        let mismatch = (self.v_p - self.v_c).abs();
        if self.detuning.abs() > PARAM_TOL_REL * detuning_scale
            || mismatch > PARAM_TOL_REL * coupling_scale
        {
            return Err(ModelError::NotPtReducible {
                detuning: self.detuning,
                coupling_mismatch: mismatch,
            });
        }
        PtParams::new(self.gamma_pt, (self.v_p + self.v_c) / 2.0, self.hbar)
    }
}

/// The two free parameters of the PT-symmetric form: gain/loss `γ_pt` and the
/// common coupling `v > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtParams {
    gamma_pt: f64,
    v: f64,
    hbar: f64,
}

impl PtParams {
    pub fn new(gamma_pt: f64, v: f64, hbar: f64) -> Result<Self, ModelError> {
        if !gamma_pt.is_finite() {
            return Err(ModelError::InvalidParams {
                field: "gamma_pt",
                message: format!("non-finite value {gamma_pt}"),
            });
        }
        if !hbar.is_finite() || hbar <= 0.0 {
            return Err(ModelError::InvalidParams {
                field: "hbar",
                message: format!("must be finite and > 0, got {hbar}"),
            });
        }
        if !v.is_finite() || v <= 0.0 {
            return Err(ModelError::DegenerateCoupling { v });
        }
        Ok(Self { gamma_pt, v, hbar })
    }

    pub fn gamma_pt(&self) -> f64 {
        self.gamma_pt
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// `2v² - γ_pt²`: positive in the unbroken phase, negative in the broken
    /// phase, zero at the exceptional point.
    pub fn discriminant(&self) -> f64 {
        2.0 * self.v * self.v - self.gamma_pt * self.gamma_pt
    }
}

/// Time-dependent lab-frame Hamiltonian.
///
/// Diagonal `-iγ_k + ħω_k`; rotating-wave couplings
/// `V₁₂(t) = v_p e^{+iω_p t}`, `V₂₁(t) = v_p e^{-iω_p t}`,
/// `V₂₃(t) = v_c e^{-iω_c t}`, `V₃₂(t) = v_c e^{+iω_c t}`; the |1⟩–|3⟩
/// transition is dipole-forbidden, so the corner entries stay zero.
pub fn build_lab_hamiltonian(p: &SystemParams, t: f64) -> Result<CMat3, ModelError> {
    p.validate()?;
    let mut h = CMat3::zeros();
    h[(0, 0)] = c64(p.hbar * p.omega1, -p.gamma1);
    h[(1, 1)] = c64(p.hbar * p.omega2, -p.gamma2);
    h[(2, 2)] = c64(p.hbar * p.omega3, -p.gamma3);
    let pump_phase = C64::from_polar(1.0, p.omega_p * t);
    let coupling_phase = C64::from_polar(1.0, p.omega_c * t);
    h[(0, 1)] = pump_phase * p.v_p;
    h[(1, 0)] = pump_phase.conj() * p.v_p;
    h[(1, 2)] = coupling_phase.conj() * p.v_c;
    h[(2, 1)] = coupling_phase * p.v_c;
    Ok(h)
}

/// Time-independent effective Hamiltonian
/// `[[-iγ_pt, v_p, 0], [v_p, ħΔ, v_c], [0, v_c, iγ_pt + ħΔ]]`
/// (real couplings, so the conjugated slots collapse).
pub fn build_effective_hamiltonian(e: &EffectiveParams) -> CMat3 {
    let hbar_delta = e.hbar * e.detuning;
    let mut h = CMat3::zeros();
    h[(0, 0)] = c64(0.0, -e.gamma_pt);
    h[(0, 1)] = c64(e.v_p, 0.0);
    h[(1, 0)] = c64(e.v_p, 0.0);
    h[(1, 1)] = c64(hbar_delta, 0.0);
    h[(1, 2)] = c64(e.v_c, 0.0);
    h[(2, 1)] = c64(e.v_c, 0.0);
    h[(2, 2)] = c64(hbar_delta, e.gamma_pt);
    h
}

/// The PT-symmetric form `[[-iγ_pt, v, 0], [v, 0, v], [0, v, iγ_pt]]`.
pub fn build_pt_hamiltonian(q: &PtParams) -> CMat3 {
    let mut h = CMat3::zeros();
    h[(0, 0)] = c64(0.0, -q.gamma_pt);
    h[(0, 1)] = c64(q.v, 0.0);
    h[(1, 0)] = c64(q.v, 0.0);
    h[(1, 2)] = c64(q.v, 0.0);
    h[(2, 1)] = c64(q.v, 0.0);
    h[(2, 2)] = c64(0.0, q.gamma_pt);
    h
}

/// Level-exchange parity: `P|1⟩ = |3⟩`, `P|2⟩ = |2⟩`, `P|3⟩ = |1⟩`; `P² = I`.
pub fn parity_operator() -> CMat3 {
    let mut p = CMat3::zeros();
    p[(0, 2)] = c64(1.0, 0.0);
    p[(1, 1)] = c64(1.0, 0.0);
    p[(2, 0)] = c64(1.0, 0.0);
    p
}

/// Max-entry magnitude of the commutator of `h` with the antilinear PT
/// operation `v ↦ P·conj(v)`, realized as `max |H·P - P·H̄|`.
///
/// Zero (to roundoff) exactly when the detuning vanishes and the two
/// couplings match; `max(|ħΔ|, |v_p - v_c|)` otherwise.
pub fn pt_commutator_norm(h: &CMat3) -> f64 {
    let p = parity_operator();
    (*h * p - p * h.conj()).max_abs()
}

/// Pseudo-Hermiticity test `η H η⁻¹ = H†` within `tol · max|H|`.
pub fn is_pseudo_hermitian(h: &CMat3, eta: &CMat3, tol: f64) -> Result<bool, Linalg3Error> {
    Ok(pseudo_hermiticity_deviation(h, eta)? <= tol * h.max_abs())
}

/// Max-entry magnitude of `η H η⁻¹ - H†` (the quantity bounded by
/// [`is_pseudo_hermitian`]).
pub fn pseudo_hermiticity_deviation(h: &CMat3, eta: &CMat3) -> Result<f64, Linalg3Error> {
    let eta_inv = eta.inverse()?;
    Ok((*eta * *h * eta_inv - h.adjoint()).max_abs())
}
