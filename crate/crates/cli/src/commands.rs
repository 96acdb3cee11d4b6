//! The spectrum, evolve, sweep, and fig2 subcommands.

use std::path::Path;

use lambda_pt_core::evolve::{evolve_b, to_lab_frame, EvolveError, Trajectory};
use lambda_pt_core::linalg3::{CVec3, C64};
use lambda_pt_core::model::SystemParams;
use lambda_pt_core::oracle::IntegratorConfig;
use lambda_pt_core::spectral::{
    classify_discriminant, eigenvalues_for, verify_metric_orthonormality, Regime, SpectralData,
    EP_TOL_REL,
};
use rayon::prelude::*;

use crate::config::{InitialCondition, RunConfig, SweepParameter};
use crate::output::{Cell, OutputFormat, Table};
use crate::CliError;

fn map_evolve_err(e: EvolveError) -> CliError {
    match e {
        EvolveError::NonFiniteAmplitude { .. } => CliError::Overflow(e.to_string()),
        other => CliError::Config(other.to_string()),
    }
}

/// Eigenvalues, regime, discriminant, metric entries, and the orthonormality
/// deviation of one parameter point. At an exceptional point the metric
/// columns are omitted and the command exits with the dedicated code.
pub fn cmd_spectrum(
    cfg: &RunConfig,
    format: OutputFormat,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let q = cfg.resolve_pt()?;
    let ep_tol = cfg.ep_tol_rel.unwrap_or(EP_TOL_REL)
        * (q.v() * q.v()).max(q.gamma_pt() * q.gamma_pt());
    let regime = classify_discriminant(q.discriminant(), ep_tol);
    let (e0, e_plus, e_minus) = eigenvalues_for(q.gamma_pt(), q.v());

    let base_columns = vec![
        "e0_re".to_string(),
        "e0_im".to_string(),
        "e_plus_re".to_string(),
        "e_plus_im".to_string(),
        "e_minus_re".to_string(),
        "e_minus_im".to_string(),
        "regime".to_string(),
        "discriminant".to_string(),
    ];
    let base_cells = |regime: Regime| -> Vec<Cell> {
        vec![
            e0.re.into(),
            e0.im.into(),
            e_plus.re.into(),
            e_plus.im.into(),
            e_minus.re.into(),
            e_minus.im.into(),
            regime.to_string().into(),
            q.discriminant().into(),
        ]
    };

    if regime == Regime::ExceptionalPoint {
        let mut table = Table::new(base_columns);
        table.push_row(base_cells(regime));
        table.emit(format, out)?;
        return Err(CliError::ExceptionalPoint(format!(
            "exceptional point at gamma_pt = {}, v = {}: eigenvectors coalesce, metric omitted",
            q.gamma_pt(),
            q.v()
        )));
    }

    let data = SpectralData::compute(&q).map_err(|e| CliError::Config(e.to_string()))?;
    let mut columns = base_columns;
    for i in 0..3 {
        for j in 0..3 {
            columns.push(format!("eta{i}{j}_re"));
            columns.push(format!("eta{i}{j}_im"));
        }
    }
    columns.push("orthonormality_dev".to_string());

    let mut row = base_cells(regime);
    for i in 0..3 {
        for j in 0..3 {
            row.push(data.eta[(i, j)].re.into());
            row.push(data.eta[(i, j)].im.into());
        }
    }
    row.push(verify_metric_orthonormality(&data.eta, &data.d_matrix).into());

    let mut table = Table::new(columns);
    table.push_row(row);
    table.emit(format, out)
}

fn initial_state(initial: &InitialCondition) -> CVec3 {
    match initial {
        InitialCondition::Ground => CVec3::basis(0),
        InitialCondition::Custom(pairs) => CVec3::new(
            C64::new(pairs[0][0], pairs[0][1]),
            C64::new(pairs[1][0], pairs[1][1]),
            C64::new(pairs[2][0], pairs[2][1]),
        ),
    }
}

fn push_trajectory_rows(table: &mut Table, traj: &Trajectory) {
    let frame = traj.frame().to_string();
    for (k, &t) in traj.times().iter().enumerate() {
        let a = traj.amplitudes()[k];
        let pops = a.abs_sq();
        table.push_row(vec![
            t.into(),
            a[0].re.into(),
            a[0].im.into(),
            a[1].re.into(),
            a[1].im.into(),
            a[2].re.into(),
            a[2].im.into(),
            pops[0].into(),
            pops[1].into(),
            pops[2].into(),
            frame.clone().into(),
        ]);
    }
}

/// Analytic time series of amplitudes and populations; effective frame
/// always, lab frame additionally when a `system` section is given.
pub fn cmd_evolve(
    cfg: &RunConfig,
    format: OutputFormat,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let q = cfg.resolve_pt()?;
    let integrator = cfg.require_integrator()?;
    let grid = IntegratorConfig::new(integrator.dt, integrator.t_end, integrator.record_stride)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let times = grid.record_times();
    let b0 = initial_state(&cfg.initial);

    let traj = evolve_b(&q, &b0, &times).map_err(map_evolve_err)?;
    let mut table = Table::new(vec![
        "t", "re_b1", "im_b1", "re_b2", "im_b2", "re_b3", "im_b3", "pop1", "pop2", "pop3",
        "frame",
    ]);
    push_trajectory_rows(&mut table, &traj);

    if let Some(system) = &cfg.system {
        let lab = to_lab_frame(&traj, &system.to_params()).map_err(map_evolve_err)?;
        push_trajectory_rows(&mut table, &lab);
    }
    table.emit(format, out)
}

/// Threshold sweep: one row per grid point with the swept parameter value,
/// the `+E` eigenvalue, and the regime tag. Rows are independent, so they
/// are computed in parallel (`LAMBDA_PT_THREADS` caps the pool).
pub fn cmd_sweep(cfg: &RunConfig, format: OutputFormat, out: Option<&Path>) -> Result<(), CliError> {
    let sweep = cfg.require_sweep()?;
    if sweep.points < 2 {
        return Err(CliError::Config(format!(
            "sweep.points must be >= 2, got {}",
            sweep.points
        )));
    }
    if !sweep.start.is_finite() || !sweep.stop.is_finite() || sweep.stop <= sweep.start {
        return Err(CliError::Config(format!(
            "sweep range [{}, {}] must be finite and increasing",
            sweep.start, sweep.stop
        )));
    }
    let pt = cfg
        .pt
        .as_ref()
        .ok_or_else(|| CliError::Config("sweep requires a `pt` section".into()))?;
    let fixed = match sweep.parameter {
        SweepParameter::V => pt.gamma_pt.ok_or_else(|| {
            CliError::Config("sweeping v requires pt.gamma_pt".into())
        })?,
        SweepParameter::GammaPt => pt
            .v
            .ok_or_else(|| CliError::Config("sweeping gamma_pt requires pt.v".into()))?,
    };
    let ep_tol_rel = cfg.ep_tol_rel.unwrap_or(EP_TOL_REL);

    let threads = std::env::var("LAMBDA_PT_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;

    let step = (sweep.stop - sweep.start) / (sweep.points - 1) as f64;
    let rows: Vec<(f64, f64, f64, Regime)> = pool.install(|| {
        (0..sweep.points)
            .into_par_iter()
            .map(|k| {
                let value = sweep.start + k as f64 * step;
                let (gamma_pt, v) = match sweep.parameter {
                    SweepParameter::V => (fixed, value),
                    SweepParameter::GammaPt => (value, fixed),
                };
                let (_, e_plus, _) = eigenvalues_for(gamma_pt, v);
                let disc = 2.0 * v * v - gamma_pt * gamma_pt;
                let tol = ep_tol_rel * (v * v).max(gamma_pt * gamma_pt);
                (value, e_plus.re, e_plus.im, classify_discriminant(disc, tol))
            })
            .collect()
    });

    let mut table = Table::new(vec![
        sweep.parameter.name(),
        "re_e_plus",
        "im_e_plus",
        "regime",
    ]);
    for (value, re, im, regime) in rows {
        table.push_row(vec![
            value.into(),
            re.into(),
            im.into(),
            regime.to_string().into(),
        ]);
    }
    table.emit(format, out)
}

/// Weak-decay demo system: gamma_pt = 0.0005, v = 0.025.
pub fn fig2a_system() -> SystemParams {
    SystemParams {
        gamma1: 0.002,
        gamma2: 0.0015,
        gamma3: 0.001,
        omega1: 1.0,
        omega2: 1.5,
        omega3: 0.8,
        omega_p: 0.5,
        omega_c: 0.7,
        v_p: 0.025,
        v_c: 0.025,
        hbar: 1.0,
    }
}

/// Strong-decay demo system: gamma_pt = 0.005, v = 0.25.
pub fn fig2b_system() -> SystemParams {
    SystemParams {
        gamma1: 0.02,
        gamma2: 0.015,
        gamma3: 0.01,
        v_p: 0.25,
        v_c: 0.25,
        ..fig2a_system()
    }
}

fn population_table(p: &SystemParams, t_end: f64, samples: usize) -> Result<Table, CliError> {
    let q = lambda_pt_core::model::EffectiveParams::from_system(p)
        .and_then(|e| e.pt_params())
        .map_err(|e| CliError::Config(e.to_string()))?;
    let times: Vec<f64> = (0..samples)
        .map(|k| k as f64 * t_end / (samples - 1) as f64)
        .collect();
    let traj = evolve_b(&q, &CVec3::basis(0), &times).map_err(map_evolve_err)?;
    let lab = to_lab_frame(&traj, p).map_err(map_evolve_err)?;
    let mut table = Table::new(vec!["t", "pop1", "pop2", "pop3"]);
    for (k, &t) in lab.times().iter().enumerate() {
        let pops = lab.amplitudes()[k].abs_sq();
        table.push_row(vec![t.into(), pops[0].into(), pops[1].into(), pops[2].into()]);
    }
    Ok(table)
}

/// Write the two bundled lab-frame population datasets, `fig2a.csv`
/// (weak decay, t in [0, 1500]) and `fig2b.csv` (strong decay, t in
/// [0, 150]), 4096 samples each, into the output directory.
pub fn cmd_fig2(out_dir: Option<&Path>) -> Result<(), CliError> {
    let dir = out_dir.unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", dir.display())))?;
    for (name, system, t_end) in [
        ("fig2a.csv", fig2a_system(), 1500.0),
        ("fig2b.csv", fig2b_system(), 150.0),
    ] {
        let table = population_table(&system, t_end, 4096)?;
        let path = dir.join(name);
        std::fs::write(&path, table.to_csv())
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}
