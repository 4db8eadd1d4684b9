//! Robustness scans, regime labels, the Stark-field mapping and Rabi
//! frequency extraction.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::gate::{run_cz_adiabatic, run_cz_coherent, run_cz_lzs, AdiabaticPulse, GateResult};
use crate::io::{csv_err, csv_writer, fmt_num};
use crate::numerics::IntegratorConfig;
use crate::params::{DecayRates, DriveParams, UnitSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Fidelity,
    PGFinal,
    PhaseOverPi,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Fidelity, Metric::PGFinal, Metric::PhaseOverPi];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Fidelity => "fidelity",
            Metric::PGFinal => "p_g_final",
            Metric::PhaseOverPi => "phase_over_pi",
        }
    }

    /// Phase is `arg(c_g)` mapped to `[0, 2pi)`, so values near `pi` stay
    /// continuous from cell to cell.
    pub fn of(self, r: &GateResult) -> f64 {
        let c_g: Complex64 = r.pair_amplitude();
        match self {
            Metric::Fidelity => r.fidelity,
            Metric::PGFinal => c_g.norm_sqr(),
            Metric::PhaseOverPi => c_g.arg().rem_euclid(2.0 * PI) / PI,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

/// Dense scan result. `data` is row-major over `(axis1, axis2)`; missing
/// cells hold `NaN`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub metric: Metric,
    pub data: Vec<f64>,
    pub metadata: serde_json::Value,
}

#[derive(Serialize, Deserialize)]
struct GridRecord {
    axis1: Axis,
    axis2: Option<Axis>,
    metric: Metric,
    data: Vec<Option<f64>>,
    metadata: serde_json::Value,
}

impl Serialize for SweepGrid {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GridRecord {
            axis1: self.axis1.clone(),
            axis2: self.axis2.clone(),
            metric: self.metric,
            data: self
                .data
                .iter()
                .map(|&x| (!x.is_nan()).then_some(x))
                .collect(),
            metadata: self.metadata.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SweepGrid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = GridRecord::deserialize(d)?;
        Ok(SweepGrid {
            axis1: r.axis1,
            axis2: r.axis2,
            metric: r.metric,
            data: r.data.into_iter().map(|x| x.unwrap_or(f64::NAN)).collect(),
            metadata: r.metadata,
        })
    }
}

impl SweepGrid {
    pub fn shape(&self) -> (usize, usize) {
        (
            self.axis1.values.len(),
            self.axis2.as_ref().map_or(1, |a| a.values.len()),
        )
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (_, m) = self.shape();
        self.data[i * m + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let (_, m) = self.shape();
        &self.data[i * m..(i + 1) * m]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        let (n, _) = self.shape();
        (0..n).map(|i| self.get(i, j)).collect()
    }

    pub fn missing_cells(&self) -> usize {
        self.data.iter().filter(|x| x.is_nan()).count()
    }

    /// Finite values only.
    pub fn min(&self) -> f64 {
        self.data
            .iter()
            .copied()
            .filter(|x| !x.is_nan())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.data
            .iter()
            .copied()
            .filter(|x| !x.is_nan())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// 1D: two columns `(axis1, metric)`. 2D: a header row of `axis2`
    /// values, then one row per `axis1` value. Comment lines record the
    /// metric and the missing-cell sentinel.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# metric={}", self.metric.name()).map_err(csv_err)?;
        writeln!(w, "# missing=NaN").map_err(csv_err)?;
        let mut wr = csv_writer(w);
        match &self.axis2 {
            None => {
                wr.write_record([self.axis1.name.as_str(), self.metric.name()])
                    .map_err(csv_err)?;
                for (x, v) in self.axis1.values.iter().zip(&self.data) {
                    wr.write_record([fmt_num(*x), fmt_num(*v)])
                        .map_err(csv_err)?;
                }
            }
            Some(ax2) => {
                let mut head = vec![format!("{}\\{}", self.axis1.name, ax2.name)];
                head.extend(ax2.values.iter().map(|&v| fmt_num(v)));
                wr.write_record(&head).map_err(csv_err)?;
                for (i, x) in self.axis1.values.iter().enumerate() {
                    let mut rec = vec![fmt_num(*x)];
                    rec.extend(self.row(i).iter().map(|&v| fmt_num(v)));
                    wr.write_record(&rec).map_err(csv_err)?;
                }
            }
        }
        wr.flush().map_err(csv_err)
    }
}

/// Gate protocol whose timing is scanned.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "snake_case")]
pub enum GateScheme {
    Lzs {
        params: DriveParams,
        duration: f64,
    },
    Coherent {
        v_dd: f64,
        units: UnitSystem,
        duration: f64,
    },
    Adiabatic {
        pulse: AdiabaticPulse,
        v_dd: f64,
    },
}

impl GateScheme {
    pub fn name(&self) -> &'static str {
        match self {
            GateScheme::Lzs { .. } => "lzs",
            GateScheme::Coherent { .. } => "coherent",
            GateScheme::Adiabatic { .. } => "adiabatic",
        }
    }

    /// Runs the gate with every duration multiplied by `scale`.
    pub fn run(
        &self,
        decay: Option<&DecayRates>,
        scale: f64,
        cfg: &IntegratorConfig,
    ) -> Result<GateResult> {
        match self {
            GateScheme::Lzs { params, duration } => {
                run_cz_lzs(params, decay, duration * scale, cfg)
            }
            GateScheme::Coherent {
                v_dd,
                units,
                duration,
            } => run_cz_coherent(*v_dd, *units, decay, duration * scale, cfg),
            GateScheme::Adiabatic { pulse, v_dd } => {
                run_cz_adiabatic(&pulse.with_duration_scale(scale)?, *v_dd, decay, cfg)
            }
        }
    }
}

fn cell<T>(r: Result<T>, what: impl FnOnce() -> String) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            log::warn!("cell {} failed: {e}", what());
            None
        }
    }
}

fn grids_from(
    results: &[Option<GateResult>],
    axis1: Axis,
    axis2: Option<Axis>,
    metrics: &[Metric],
    metadata: serde_json::Value,
) -> Vec<SweepGrid> {
    metrics
        .iter()
        .map(|&m| SweepGrid {
            axis1: axis1.clone(),
            axis2: axis2.clone(),
            metric: m,
            data: results
                .iter()
                .map(|r| r.as_ref().map_or(f64::NAN, |g| m.of(g)))
                .collect(),
            metadata: metadata.clone(),
        })
        .collect()
}

pub const TIME_AXIS: &str = "dT/T";

/// Gate metrics at durations `T (1 + Delta)`, one grid per metric.
pub fn scan_time_deviation_metrics(
    scheme: &GateScheme,
    decay: Option<&DecayRates>,
    deviations: &[f64],
    metrics: &[Metric],
    cfg: &IntegratorConfig,
) -> Result<Vec<SweepGrid>> {
    cfg.validate()?;
    if deviations.is_empty() {
        return Err(Error::invalid("deviations", "must not be empty"));
    }
    if let Some(d) = deviations.iter().find(|d| !(d.abs() < 0.5)) {
        return Err(Error::invalid(
            "deviations",
            format!("{d} is outside (-0.5, 0.5)"),
        ));
    }
    let results: Vec<Option<GateResult>> = deviations
        .par_iter()
        .map(|&d| {
            cell(scheme.run(decay, 1.0 + d, cfg), || {
                format!("{TIME_AXIS}={d}")
            })
        })
        .collect();
    let metadata = serde_json::json!({
        "scan": "time_deviation",
        "scheme": scheme,
        "decay": decay,
        "integrator": cfg,
    });
    let axis = Axis {
        name: TIME_AXIS.into(),
        values: deviations.to_vec(),
    };
    Ok(grids_from(&results, axis, None, metrics, metadata))
}

pub fn scan_time_deviation(
    scheme: &GateScheme,
    decay: Option<&DecayRates>,
    deviations: &[f64],
    metric: Metric,
    cfg: &IntegratorConfig,
) -> Result<SweepGrid> {
    let mut v = scan_time_deviation_metrics(scheme, decay, deviations, &[metric], cfg)?;
    Ok(v.remove(0))
}

/// Fractional drive-parameter deviation for 2D maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Deviation {
    Amplitude,
    Detuning,
    Frequency,
    Phase,
}

impl Deviation {
    pub fn name(self) -> &'static str {
        match self {
            Deviation::Amplitude => "dA/A",
            Deviation::Detuning => "ddelta0/delta0",
            Deviation::Frequency => "domega/omega",
            Deviation::Phase => "dphi/pi",
        }
    }

    /// `Phase` shifts `phi` by `x pi`; the others scale by `1 + x`.
    pub fn apply(self, p: &mut DriveParams, x: f64) {
        match self {
            Deviation::Amplitude => p.a *= 1.0 + x,
            Deviation::Detuning => p.delta0 *= 1.0 + x,
            Deviation::Frequency => p.omega *= 1.0 + x,
            Deviation::Phase => p.phi += x * PI,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridAxis {
    pub deviation: Deviation,
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl GridAxis {
    pub fn new(deviation: Deviation, min: f64, max: f64, points: usize) -> Self {
        GridAxis {
            deviation,
            min,
            max,
            points,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::invalid(
                "points",
                format!("resolution must be >= 2, got {}", self.points),
            ));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::invalid("min/max", "need finite min < max"));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.max
                } else {
                    self.min + step * i as f64
                }
            })
            .collect()
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.points - 1) as f64
    }
}

/// LZS gate over a grid of two drive-parameter deviations at fixed
/// duration, one grid per metric.
pub fn scan_2d_metrics(
    base: &DriveParams,
    duration: f64,
    decay: Option<&DecayRates>,
    axes: [GridAxis; 2],
    metrics: &[Metric],
    cfg: &IntegratorConfig,
) -> Result<Vec<SweepGrid>> {
    base.validate()?;
    cfg.validate()?;
    for a in &axes {
        a.validate()?;
    }
    if axes[0].deviation == axes[1].deviation {
        return Err(Error::invalid(
            "axes",
            "the two axes must scan different parameters",
        ));
    }
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(Error::invalid("duration", "must be > 0"));
    }
    let (v1, v2) = (axes[0].values(), axes[1].values());
    let cells: Vec<(f64, f64)> = v1
        .iter()
        .flat_map(|&x| v2.iter().map(move |&y| (x, y)))
        .collect();
    let results: Vec<Option<GateResult>> = cells
        .par_iter()
        .map(|&(x, y)| {
            let mut p = *base;
            axes[0].deviation.apply(&mut p, x);
            axes[1].deviation.apply(&mut p, y);
            let r = p
                .validate()
                .and_then(|_| run_cz_lzs(&p, decay, duration, cfg));
            cell(r, || {
                format!(
                    "{}={x}, {}={y}",
                    axes[0].deviation.name(),
                    axes[1].deviation.name()
                )
            })
        })
        .collect();
    let metadata = serde_json::json!({
        "scan": "grid_2d",
        "scheme": GateScheme::Lzs { params: *base, duration },
        "axes": axes,
        "decay": decay,
        "integrator": cfg,
    });
    let axis = |a: &GridAxis, v: Vec<f64>| Axis {
        name: a.deviation.name().into(),
        values: v,
    };
    Ok(grids_from(
        &results,
        axis(&axes[0], v1),
        Some(axis(&axes[1], v2)),
        metrics,
        metadata,
    ))
}

pub fn scan_2d(
    base: &DriveParams,
    duration: f64,
    decay: Option<&DecayRates>,
    axes: [GridAxis; 2],
    metric: Metric,
    cfg: &IntegratorConfig,
) -> Result<SweepGrid> {
    let mut v = scan_2d_metrics(base, duration, decay, axes, &[metric], cfg)?;
    Ok(v.remove(0))
}

/// Positions of interior local maxima of `values` above `threshold`.
/// Plateaus report their first cell.
pub fn find_ridges(positions: &[f64], values: &[f64], threshold: f64) -> Vec<f64> {
    let n = values.len().min(positions.len());
    let mut out = Vec::new();
    for i in 1..n.saturating_sub(1) {
        let v = values[i];
        if v.is_nan() || v < threshold {
            continue;
        }
        if v > values[i - 1] && v >= values[i + 1] {
            out.push(positions[i]);
        }
    }
    out
}

/// Mean spacing of consecutive ridge positions.
pub fn ridge_spacing(ridges: &[f64]) -> Option<f64> {
    if ridges.len() < 2 {
        return None;
    }
    Some((ridges[ridges.len() - 1] - ridges[0]) / (ridges.len() - 1) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Weak,
    Strong,
    Intermediate,
    Other,
}

/// Weak driving: `A < E_q / WEAK_DIVISOR`.
pub const WEAK_DIVISOR: f64 = 5.0;
/// Strong driving: `A - delta0 > STRONG_MARGIN V_DD`.
pub const STRONG_MARGIN: f64 = 3.0;

pub fn classify_regime(p: &DriveParams) -> Regime {
    let e_q = p.delta0.hypot(p.v_dd);
    let a = p.a.abs();
    if a < e_q / WEAK_DIVISOR {
        Regime::Weak
    } else if a - p.delta0 > STRONG_MARGIN * p.v_dd {
        Regime::Strong
    } else if (a - p.delta0).abs() <= STRONG_MARGIN * p.v_dd {
        Regime::Intermediate
    } else {
        Regime::Other
    }
}

/// Composite field `E = e_dc + e_rf cos(omega t)` acting through the
/// combined polarizability `kappa` (rad/us per (V/cm)^2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarkField {
    pub e_dc: f64,
    pub e_rf: f64,
    pub kappa: f64,
    pub delta0_bare: f64,
}

/// Above this `e_rf / e_dc` the quadratic expansion is unreliable.
pub const STARK_RATIO_WARN: f64 = 0.3;

impl StarkField {
    pub fn validate(&self) -> Result<()> {
        if !(self.e_dc > 0.0 && self.e_dc.is_finite()) {
            return Err(Error::invalid("e_dc", "must be > 0"));
        }
        if !(self.e_rf >= 0.0 && self.e_rf.is_finite()) {
            return Err(Error::invalid("e_rf", "must be >= 0"));
        }
        if !(self.kappa.is_finite() && self.delta0_bare.is_finite()) {
            return Err(Error::invalid("kappa/delta0_bare", "must be finite"));
        }
        Ok(())
    }

    /// Field that places the Stark-shifted defect on the `m`-photon
    /// resonance `delta0' = m omega` with `A' / delta0' = ratio`.
    pub fn back_solved(m: u32, omega: f64, ratio: f64, e_dc: f64, rf_over_dc: f64) -> Result<Self> {
        if m == 0 || !(rf_over_dc > 0.0) || !(ratio > 0.0) {
            return Err(Error::invalid("m/ratio/rf_over_dc", "must all be > 0"));
        }
        let shifted = m as f64 * omega;
        let kappa = ratio * shifted / (2.0 * rf_over_dc * e_dc * e_dc);
        let f = StarkField {
            e_dc,
            e_rf: rf_over_dc * e_dc,
            kappa,
            delta0_bare: shifted - kappa * e_dc * e_dc,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn shifted_defect(&self) -> f64 {
        self.delta0_bare + self.kappa * self.e_dc * self.e_dc
    }

    pub fn rf_amplitude(&self) -> f64 {
        2.0 * self.kappa * self.e_rf * self.e_dc
    }
}

/// Maps the field onto `delta(t) ~ delta0' + A' cos(omega t)`.
pub fn stark_to_drive(
    f: &StarkField,
    omega: f64,
    v_dd: f64,
    units: UnitSystem,
) -> Result<DriveParams> {
    f.validate()?;
    if f.e_rf / f.e_dc > STARK_RATIO_WARN {
        log::warn!(
            "e_rf/e_dc = {:.3} exceeds {STARK_RATIO_WARN}; weak-rf expansion is unreliable",
            f.e_rf / f.e_dc
        );
    }
    DriveParams::new(v_dd, f.rf_amplitude(), f.shifted_defect(), omega, units)
}

/// Angular frequency of the full `P_e` cycle from the spacing of its
/// peaks. Peaks are the maxima of excursions above 75% of the observed
/// range, separated by returns below 25%.
pub fn extract_rabi_frequency(traj: &Trajectory) -> Result<f64> {
    let p_e = traj.p_e();
    let lo = p_e.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = p_e.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(hi - lo > 1e-6) {
        return Err(Error::TooFewPeaks { found: 0 });
    }
    let (low, high) = (lo + 0.25 * (hi - lo), lo + 0.75 * (hi - lo));
    let mut peaks = Vec::new();
    let mut current: Option<(f64, f64)> = None;
    let mut armed = true;
    for r in &traj.rows {
        if armed && r.p_e >= high {
            match current {
                Some((v, _)) if v >= r.p_e => {}
                _ => current = Some((r.p_e, r.t)),
            }
        }
        if r.p_e < low {
            if let Some((_, t)) = current.take() {
                peaks.push(t);
            }
            armed = true;
        }
    }
    // An excursion still open at the end is not a confirmed peak.
    if peaks.len() < 3 {
        return Err(Error::TooFewPeaks { found: peaks.len() });
    }
    let span = peaks[peaks.len() - 1] - peaks[0];
    Ok(2.0 * PI * (peaks.len() - 1) as f64 / span)
}
