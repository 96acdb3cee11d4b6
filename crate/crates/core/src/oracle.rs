//! Independent numerical ground truth: fixed-step RK4 integration of the
//! effective-frame and lab-frame Schrödinger equations, plus a
//! characteristic-polynomial eigenvalue oracle.
//!
//! Everything analytic in this crate is arbitrated against these routines,
//! so they deliberately share no code with the closed forms: the integrators
//! step the raw ODEs `iħ ẏ = H y`, the eigenvalue oracle goes through trace,
//! second invariant, and determinant into the cubic solver. Fixed stepping
//! (rather than adaptive) keeps convergence-order measurements deterministic.

use thiserror::Error;

use crate::evolve::{EvolveError, Frame, ParamsSnapshot, Trajectory};
use crate::linalg3::{cubic_roots, CMat3, CVec3, Linalg3Error, C64};
use crate::model::{build_lab_hamiltonian, build_pt_hamiltonian, ModelError, PtParams, SystemParams};

/// Amplitude magnitude at which an integration aborts; converts the silent
/// overflow of a broken-phase runaway into a typed error.
pub const OVERFLOW_GUARD: f64 = 1e12;

#[derive(Debug, Error)]
pub enum OracleError {
    /// An amplitude exceeded [`OVERFLOW_GUARD`] during integration.
    #[error("amplitude overflow at t = {t}: |y| = {magnitude:.3e}")]
    StepOverflow { t: f64, magnitude: f64 },
    #[error("invalid integrator config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Evolve(#[from] EvolveError),
    #[error(transparent)]
    Linalg(#[from] Linalg3Error),
}

/// Fixed-step integration parameters.
///
/// For agreement with analytic solutions at the 1e-8 level, keep
/// `dt · max(|E|, γ₂, ω-scale)/ħ <= 0.01` — see [`IntegratorConfig::recommended_dt`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_end: f64,
    /// Store every k-th step (the final step is always stored).
    pub record_stride: usize,
}

impl IntegratorConfig {
    pub fn new(dt: f64, t_end: f64, record_stride: usize) -> Result<Self, OracleError> {
        let cfg = Self {
            dt,
            t_end,
            record_stride,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(OracleError::InvalidConfig(format!(
                "dt must be finite and > 0, got {}",
                self.dt
            )));
        }
        if !self.t_end.is_finite() || self.t_end <= 0.0 {
            return Err(OracleError::InvalidConfig(format!(
                "t_end must be finite and > 0, got {}",
                self.t_end
            )));
        }
        if self.dt > self.t_end {
            return Err(OracleError::InvalidConfig(format!(
                "dt = {} exceeds t_end = {}",
                self.dt, self.t_end
            )));
        }
        if self.record_stride == 0 {
            return Err(OracleError::InvalidConfig(
                "record_stride must be >= 1".into(),
            ));
        }
        Ok(())
    }

    /// Step size satisfying the accuracy guidance `dt·rate/ħ = 0.01` for the
    /// fastest rate present (|E|, γ₂, or the largest optical frequency).
    pub fn recommended_dt(max_rate: f64, hbar: f64) -> f64 {
        0.01 * hbar / max_rate
    }

    /// Number of whole steps covering `[0, t_end]`.
    pub fn n_steps(&self) -> usize {
        ((self.t_end / self.dt).round() as usize).max(1)
    }

    /// The recorded time grid `k·dt` for `k % record_stride == 0`, plus the
    /// final step.
    pub fn record_times(&self) -> Vec<f64> {
        let n = self.n_steps();
        (0..=n)
            .filter(|&k| k % self.record_stride == 0 || k == n)
            .map(|k| k as f64 * self.dt)
            .collect()
    }
}

/// One classical RK4 step of `ẏ = f(t, y)` with `f = -(i/ħ) H(t) y`.
fn rk4_step<H: Fn(f64) -> CMat3>(h_of_t: &H, hbar: f64, t: f64, dt: f64, y: &CVec3) -> CVec3 {
    let minus_i_over_hbar = C64::new(0.0, -1.0 / hbar);
    let f = |time: f64, state: &CVec3| h_of_t(time).mul_vec(state) * minus_i_over_hbar;
    let k1 = f(t, y);
    let k2 = f(t + dt / 2.0, &(*y + k1 * (dt / 2.0)));
    let k3 = f(t + dt / 2.0, &(*y + k2 * (dt / 2.0)));
    let k4 = f(t + dt, &(*y + k3 * dt));
    *y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0)
}

fn rk4_run<H: Fn(f64) -> CMat3>(
    h_of_t: H,
    hbar: f64,
    y0: CVec3,
    cfg: &IntegratorConfig,
    frame: Frame,
    params: ParamsSnapshot,
) -> Result<Trajectory, OracleError> {
    cfg.validate()?;
    let n = cfg.n_steps();
    let mut times = Vec::new();
    let mut amplitudes = Vec::new();
    let mut y = y0;
    for k in 0..=n {
        let t = k as f64 * cfg.dt;
        let magnitude = y.max_abs();
        if !magnitude.is_finite() || magnitude > OVERFLOW_GUARD {
            return Err(OracleError::StepOverflow { t, magnitude });
        }
        if k % cfg.record_stride == 0 || k == n {
            times.push(t);
            amplitudes.push(y);
        }
        if k < n {
            y = rk4_step(&h_of_t, hbar, t, cfg.dt, &y);
        }
    }
    Ok(Trajectory::new(times, amplitudes, frame, params)?)
}

/// RK4 integration of the effective-frame equation `iħ ḃ = H_pt b`.
pub fn rk4_effective(
    q: &PtParams,
    b0: &CVec3,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, OracleError> {
    let h = build_pt_hamiltonian(q);
    rk4_run(
        move |_| h,
        q.hbar(),
        *b0,
        cfg,
        Frame::EffectiveB,
        ParamsSnapshot::Pt(*q),
    )
}

/// RK4 integration of the time-dependent lab-frame equation
/// `iħ Ċ = H_lab(t) C`, evaluating the Hamiltonian at the substage times.
pub fn rk4_lab(
    p: &SystemParams,
    c0: &CVec3,
    cfg: &IntegratorConfig,
) -> Result<Trajectory, OracleError> {
    p.validate()?;
    let params = *p;
    rk4_run(
        move |t| {
            // validated above; reconstruction per substage cannot fail
            build_lab_hamiltonian(&params, t).expect("validated params")
        },
        p.hbar,
        *c0,
        cfg,
        Frame::LabC,
        ParamsSnapshot::System(*p),
    )
}

/// Eigenvalues of an arbitrary 3×3 matrix through its characteristic
/// polynomial `λ³ - tr(H)λ² + inv₂(H)λ - det(H)`, solved by [`cubic_roots`].
pub fn char_poly_eigen_oracle(h: &CMat3) -> Result<[C64; 3], Linalg3Error> {
    cubic_roots(-h.trace(), h.second_invariant(), -h.det())
}
