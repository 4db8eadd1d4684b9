//! Propagation of the pair-state amplitudes and the observables plotted
//! against rescaled time.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonians::{Frame, FrameGenerator, Mat2};
use crate::io::{csv_err, csv_writer, fmt_num};
use crate::numerics::{integrate, unwrap_phase, Generator, IntegratorConfig};
use crate::params::{DecayRates, DriveParams, TwoLevelState};

/// Adds `-(i/2) diag(gamma_g, gamma_e)` to a Hermitian generator.
pub struct Conditional<G> {
    pub inner: G,
    pub gamma_g: f64,
    pub gamma_e: f64,
}

impl<G> Conditional<G> {
    pub fn new(inner: G, decay: Option<&DecayRates>) -> Self {
        let (gamma_g, gamma_e) = decay.map_or((0.0, 0.0), |d| (d.gamma_g, d.gamma_e));
        Conditional {
            inner,
            gamma_g,
            gamma_e,
        }
    }
}

impl<G: Generator<2>> Generator<2> for Conditional<G> {
    fn hamiltonian(&self, t: f64) -> Mat2 {
        let mut h = self.inner.hamiltonian(t);
        h[0][0] -= Complex64::new(0.0, 0.5 * self.gamma_g);
        h[1][1] -= Complex64::new(0.0, 0.5 * self.gamma_e);
        h
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub p_g: f64,
    pub p_e: f64,
    /// Unwrapped `arg <g|psi(t)>`.
    pub phase_g: f64,
    pub norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub rows: Vec<TrajectoryRow>,
    pub final_state: TwoLevelState,
}

impl Trajectory {
    pub fn duration(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.t) - self.rows.first().map_or(0.0, |r| r.t)
    }

    pub fn times(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.t).collect()
    }

    pub fn p_e(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.p_e).collect()
    }

    /// Columns `t, p_g, p_e, phase_g_over_pi, norm`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv_writer(w);
        wr.write_record(["t", "p_g", "p_e", "phase_g_over_pi", "norm"])
            .map_err(csv_err)?;
        for r in &self.rows {
            wr.write_record([
                fmt_num(r.t),
                fmt_num(r.p_g),
                fmt_num(r.p_e),
                fmt_num(r.phase_g / PI),
                fmt_num(r.norm),
            ])
            .map_err(csv_err)?;
        }
        wr.flush().map_err(csv_err)
    }
}

/// Integrator defaults resolving both the drive and the exchange:
/// at least 200 samples per drive period and per `2pi / V_DD`.
pub fn default_config(p: &DriveParams) -> IntegratorConfig {
    let finest = p.drive_period().min(2.0 * PI / p.v_dd);
    IntegratorConfig {
        sample_interval: finest / 200.0,
        max_step: finest / 20.0,
        ..IntegratorConfig::default()
    }
}

fn check_units(p: &DriveParams, decay: Option<&DecayRates>) -> Result<()> {
    if let Some(d) = decay {
        p.units.check(d.units, "decay rates")?;
    }
    Ok(())
}

fn check_duration(duration: f64) -> Result<()> {
    if duration > 0.0 && duration.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            "duration",
            format!("must be > 0, got {duration}"),
        ))
    }
}

/// Integrates `i dpsi/dt = [H_frame(t) - (i/2) diag(gamma_g, gamma_e)] psi`
/// from `t = 0` and records a row per sample interval.
pub fn propagate(
    p: &DriveParams,
    frame: Frame,
    decay: Option<&DecayRates>,
    y0: TwoLevelState,
    duration: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    check_duration(duration)?;
    check_units(p, decay)?;
    let gen = Conditional::new(FrameGenerator::new(*p, frame)?, decay);
    let sol = integrate(&gen, y0.as_array(), 0.0, duration, cfg)?;

    let raw: Vec<f64> = sol.samples.iter().map(|s| s.y[0].arg()).collect();
    let phase = unwrap_phase(&raw);
    let rows = sol
        .samples
        .iter()
        .zip(phase)
        .map(|(s, phase_g)| {
            let p_g = s.y[0].norm_sqr();
            let p_e = s.y[1].norm_sqr();
            TrajectoryRow {
                t: s.t,
                p_g,
                p_e,
                phase_g,
                norm: p_g + p_e,
            }
        })
        .collect();
    Ok(Trajectory {
        rows,
        final_state: TwoLevelState::from_array(sol.final_state),
    })
}

/// Final state only; the path shared by the gate and the sweeps.
pub fn evolve(
    p: &DriveParams,
    frame: Frame,
    decay: Option<&DecayRates>,
    y0: TwoLevelState,
    duration: f64,
    cfg: &IntegratorConfig,
) -> Result<TwoLevelState> {
    check_duration(duration)?;
    check_units(p, decay)?;
    let gen = Conditional::new(FrameGenerator::new(*p, frame)?, decay);
    let cfg = cfg.with_sample_interval(duration);
    let sol = integrate(&gen, y0.as_array(), 0.0, duration, &cfg)?;
    Ok(TwoLevelState::from_array(sol.final_state))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleMetrics {
    pub p_g_final: f64,
    pub phase_final: f64,
    /// Last upward crossing of `P_g = 0.99`, or the duration if none.
    pub t_return: f64,
}

impl CycleMetrics {
    /// Distance of the final phase from `pi`, modulo `2pi`.
    pub fn phase_error(&self) -> f64 {
        crate::numerics::wrap_to_pi(self.phase_final - PI).abs()
    }
}

const RETURN_THRESHOLD: f64 = 0.99;

pub fn cycle_metrics(traj: &Trajectory) -> Result<CycleMetrics> {
    let first = traj
        .rows
        .first()
        .ok_or_else(|| Error::Precondition("empty trajectory".into()))?;
    if first.p_g <= 0.999 {
        return Err(Error::Precondition(format!(
            "trajectory must start in |g>, P_g(0) = {}",
            first.p_g
        )));
    }
    let last = traj.rows.last().unwrap_or(first);
    let mut t_return = last.t;
    let mut crossed = false;
    for w in traj.rows.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a.p_g < RETURN_THRESHOLD && b.p_g >= RETURN_THRESHOLD {
            let frac = (RETURN_THRESHOLD - a.p_g) / (b.p_g - a.p_g);
            t_return = a.t + frac * (b.t - a.t);
            crossed = true;
        }
    }
    if !crossed {
        t_return = last.t;
    }
    Ok(CycleMetrics {
        p_g_final: last.p_g,
        phase_final: last.phase_g,
        t_return,
    })
}
