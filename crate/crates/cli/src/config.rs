//! Experiment description: one TOML document per run.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use lzs_core::gate::AdiabaticPulse;
use lzs_core::hamiltonians::Frame;
use lzs_core::numerics::{IntegratorConfig, Method};
use lzs_core::params::{
    decay_from_lifetimes, DecayRates, DriveParams, PhysicalChannel, UnitSystem,
};
use lzs_core::presets::{self, Preset, PresetBody};
use lzs_core::sweeps::{GateScheme, GridAxis, Metric};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Trajectory,
    Spectrum,
    Gate,
    TimeScan,
    #[serde(rename = "grid_2d")]
    Grid2d,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    Lzs,
    Coherent,
    Adiabatic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameKind {
    Lab,
    Rotated,
    Interaction,
    Floquet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecayMode {
    #[serde(rename = "off")]
    Off,
    #[serde(rename = "pair")]
    Pair,
    #[serde(rename = "pair+single")]
    PairSingle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    pub v_dd: Option<f64>,
    pub a: Option<f64>,
    pub delta0: Option<f64>,
    pub omega: Option<f64>,
    pub phi: Option<f64>,
    pub units: Option<UnitSystem>,
    /// Frequencies given as `f / 2pi` in MHz; implies microsecond units.
    #[serde(default)]
    pub mhz: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    pub label: Option<String>,
    pub c3: Option<f64>,
    pub r: Option<f64>,
    pub geometric_prefactor: Option<f64>,
    pub lifetimes: Option<[f64; 4]>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSpec {
    pub s1: Option<f64>,
    pub s2: Option<f64>,
    pub total_t: Option<f64>,
    pub t1: Option<f64>,
    pub t2: Option<f64>,
    pub units: Option<UnitSystem>,
    /// Sweep rates given as `s / 2pi` (MHz/us, MHz/us^5).
    #[serde(default)]
    pub mhz: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSpec {
    pub method: Option<Method>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_step: Option<f64>,
    pub sample_interval: Option<f64>,
    /// Fixed step for `method = "rk4"`.
    pub step: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
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
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: PathBuf,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Kind,
    pub preset: Option<String>,
    pub scheme: Option<SchemeKind>,
    pub frame: Option<FrameKind>,
    /// Harmonic cutoff for `frame = "floquet"`.
    pub cutoff: Option<usize>,
    pub decay: Option<DecayMode>,
    pub duration: Option<f64>,
    /// Duration as `V_DD T / 2pi`.
    pub cycles: Option<f64>,
    #[serde(default)]
    pub params: ParamsSpec,
    pub channel: Option<ChannelSpec>,
    pub pulse: Option<PulseSpec>,
    #[serde(default)]
    pub integrator: IntegratorSpec,
    /// Spectrum time window.
    pub times: Option<Range>,
    /// Fractional timing deviations for `time_scan`.
    pub deviations: Option<Range>,
    /// Two axes for `grid_2d`.
    pub axes: Option<Vec<GridAxis>>,
    pub metrics: Option<Vec<Metric>>,
    pub output: OutputSpec,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::validation("config", e.message().to_string()))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut cfg = Self::from_toml(&text)?;
        if cfg.output.path.is_relative() {
            let base = path.parent().unwrap_or(Path::new("."));
            cfg.output.path = base.join(&cfg.output.path);
        }
        Ok(cfg)
    }
}

/// Fully specified experiment; `to_config` gives the equivalent explicit
/// document.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    pub kind: Kind,
    pub scheme: SchemeKind,
    pub frame: Frame,
    pub decay_mode: DecayMode,
    pub params: Option<DriveParams>,
    pub duration: Option<f64>,
    pub channel: Option<PhysicalChannel>,
    pub pulse: Option<AdiabaticPulse>,
    /// Pair coupling for the coherent and adiabatic schemes.
    pub v_dd: Option<f64>,
    pub units: UnitSystem,
    pub integrator: IntegratorConfig,
    pub times: Option<Range>,
    pub deviations: Option<Range>,
    pub axes: Option<[GridAxis; 2]>,
    pub metrics: Vec<Metric>,
    pub output: PathBuf,
    pub format: Format,
}

fn need<T>(v: Option<T>, path: &str, why: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::validation(path, format!("missing ({why})")))
}

fn resolve_params(
    cfg: &ExperimentConfig,
    preset: Option<&Preset>,
    needed: bool,
) -> CliResult<Option<DriveParams>> {
    let base = preset.and_then(Preset::params);
    let s = &cfg.params;
    let any = s.v_dd.is_some()
        || s.a.is_some()
        || s.delta0.is_some()
        || s.omega.is_some()
        || s.phi.is_some();
    if base.is_none() && !any && !needed {
        return Ok(None);
    }
    let scale = if s.mhz { 2.0 * PI } else { 1.0 };
    let why = "no preset supplies it";
    let pick = |v: Option<f64>, b: Option<f64>, name: &str| -> CliResult<f64> {
        match v {
            Some(x) => Ok(x * scale),
            None => need(b, &format!("params.{name}"), why),
        }
    };
    let v_dd = match (s.v_dd, base) {
        (None, None) => 1.0,
        _ => pick(s.v_dd, base.map(|p| p.v_dd), "v_dd")?,
    };
    let units = if s.mhz {
        UnitSystem::Microsecond
    } else {
        s.units
            .or(base.map(|p| p.units))
            .unwrap_or(UnitSystem::Rescaled)
    };
    let p = DriveParams {
        v_dd,
        a: pick(s.a, base.map(|p| p.a), "a")?,
        delta0: pick(s.delta0, base.map(|p| p.delta0), "delta0")?,
        omega: pick(s.omega, base.map(|p| p.omega), "omega")?,
        phi: s.phi.or(base.map(|p| p.phi)).unwrap_or(0.0),
        units,
    };
    p.validate().map_err(|e| CliError::from_core("params", e))?;
    Ok(Some(p))
}

fn resolve_channel(
    cfg: &ExperimentConfig,
    preset: Option<&Preset>,
) -> CliResult<Option<PhysicalChannel>> {
    let base = preset.and_then(|p| p.channel().cloned());
    let Some(spec) = &cfg.channel else {
        return Ok(base);
    };
    let why = "no preset channel supplies it";
    let b = base.as_ref();
    let ch = PhysicalChannel {
        label: spec
            .label
            .clone()
            .or(b.map(|c| c.label.clone()))
            .unwrap_or_else(|| "custom".into()),
        c3: need(spec.c3.or(b.map(|c| c.c3)), "channel.c3", why)?,
        r: need(spec.r.or(b.map(|c| c.r)), "channel.r", why)?,
        geometric_prefactor: spec
            .geometric_prefactor
            .or(b.map(|c| c.geometric_prefactor))
            .unwrap_or(lzs_core::params::CALIBRATED_GEOMETRIC_PREFACTOR),
        lifetimes: need(
            spec.lifetimes.or(b.map(|c| c.lifetimes)),
            "channel.lifetimes",
            why,
        )?,
    };
    ch.validate()
        .map_err(|e| CliError::from_core("channel", e))?;
    Ok(Some(ch))
}

fn resolve_pulse(
    cfg: &ExperimentConfig,
    preset: Option<&Preset>,
) -> CliResult<Option<AdiabaticPulse>> {
    let base = match preset.map(|p| &p.body) {
        Some(PresetBody::Adiabatic { pulse, .. }) => Some(*pulse),
        _ => None,
    };
    let Some(spec) = &cfg.pulse else {
        return Ok(base);
    };
    let scale = if spec.mhz { 2.0 * PI } else { 1.0 };
    let b = base.as_ref();
    let why = "no adiabatic preset supplies it";
    let total_t = need(spec.total_t.or(b.map(|p| p.total_t)), "pulse.total_t", why)?;
    let pulse = AdiabaticPulse {
        s1: need(
            spec.s1.map(|x| x * scale).or(b.map(|p| p.s1)),
            "pulse.s1",
            why,
        )?,
        s2: need(
            spec.s2.map(|x| x * scale).or(b.map(|p| p.s2)),
            "pulse.s2",
            why,
        )?,
        total_t,
        t1: spec.t1.or(b.map(|p| p.t1)).unwrap_or(total_t / 4.0),
        t2: spec.t2.or(b.map(|p| p.t2)).unwrap_or(3.0 * total_t / 4.0),
        units: spec
            .units
            .or(b.map(|p| p.units))
            .unwrap_or(UnitSystem::Microsecond),
    };
    pulse
        .validate()
        .map_err(|e| CliError::from_core("pulse", e))?;
    Ok(Some(pulse))
}

/// `v_dd` and units alone, for schemes that ignore the drive.
fn resolve_coupling(
    cfg: &ExperimentConfig,
    preset: Option<&Preset>,
    fallback_units: Option<UnitSystem>,
) -> CliResult<(f64, UnitSystem)> {
    let s = &cfg.params;
    let base = preset.and_then(Preset::params);
    let adiabatic_v = match preset.map(|p| &p.body) {
        Some(PresetBody::Adiabatic { v_dd, .. }) => Some(*v_dd),
        _ => None,
    };
    let scale = if s.mhz { 2.0 * PI } else { 1.0 };
    let v_dd = match s.v_dd {
        Some(v) => v * scale,
        None => need(
            base.map(|p| p.v_dd).or(adiabatic_v),
            "params.v_dd",
            "no preset supplies it",
        )?,
    };
    if !(v_dd > 0.0 && v_dd.is_finite()) {
        return Err(CliError::validation(
            "params.v_dd",
            format!("must be > 0, got {v_dd}"),
        ));
    }
    let units = if s.mhz {
        UnitSystem::Microsecond
    } else {
        s.units
            .or(fallback_units)
            .or(base.map(|p| p.units))
            .unwrap_or(UnitSystem::Rescaled)
    };
    if s.a.is_some() || s.delta0.is_some() || s.omega.is_some() || s.phi.is_some() {
        log::warn!("params.a/delta0/omega/phi are ignored by this scheme");
    }
    Ok((v_dd, units))
}

fn resolve_frame(cfg: &ExperimentConfig) -> CliResult<Frame> {
    Ok(match cfg.frame.unwrap_or(FrameKind::Lab) {
        FrameKind::Lab => Frame::Lab,
        FrameKind::Rotated => Frame::Rotated,
        FrameKind::Interaction => Frame::Interaction,
        FrameKind::Floquet => {
            let n = need(cfg.cutoff, "cutoff", "required for frame = \"floquet\"")?;
            if n == 0 {
                return Err(CliError::validation("cutoff", "must be >= 1"));
            }
            Frame::FloquetTruncated(n)
        }
    })
}

fn resolve_integrator(
    spec: &IntegratorSpec,
    reference: &DriveParams,
) -> CliResult<IntegratorConfig> {
    let mut c = lzs_core::dynamics::default_config(reference);
    if let Some(m) = spec.method {
        c.method = m;
    }
    if c.method == Method::Rk4 {
        c.max_step = need(
            spec.step.or(spec.max_step),
            "integrator.step",
            "required for method = \"rk4\"",
        )?;
    }
    c.rel_tol = spec.rel_tol.unwrap_or(c.rel_tol);
    c.abs_tol = spec.abs_tol.unwrap_or(c.abs_tol);
    c.max_step = spec.max_step.unwrap_or(c.max_step);
    c.sample_interval = spec.sample_interval.unwrap_or(c.sample_interval);
    c.validate()
        .map_err(|e| CliError::from_core("integrator", e))?;
    Ok(c)
}

fn infer_format(out: &OutputSpec) -> CliResult<Format> {
    if let Some(f) = out.format {
        return Ok(f);
    }
    match out.path.extension().and_then(|e| e.to_str()) {
        Some("csv") => Ok(Format::Csv),
        Some("json") => Ok(Format::Json),
        _ => Err(CliError::validation(
            "output.format",
            "missing and not inferable from the output extension (.csv or .json)",
        )),
    }
}

fn check_range(r: Range, path: &str) -> CliResult<Range> {
    if r.points < 1 || !r.min.is_finite() || !r.max.is_finite() || r.max < r.min {
        return Err(CliError::validation(
            path,
            "need finite min <= max and points >= 1",
        ));
    }
    Ok(r)
}

pub fn resolve(cfg: &ExperimentConfig) -> CliResult<Resolved> {
    let preset = match &cfg.preset {
        Some(name) => Some(presets::find(name).ok_or_else(|| {
            CliError::validation(
                "preset",
                format!(
                    "unknown preset `{name}`; known: {}",
                    presets::names().join(", ")
                ),
            )
        })?),
        None => None,
    };
    let preset = preset.as_ref();
    let is_adiabatic_preset = matches!(preset.map(|p| &p.body), Some(PresetBody::Adiabatic { .. }));
    let gate_like = matches!(cfg.kind, Kind::Gate | Kind::TimeScan);
    if cfg.scheme.is_some() && !gate_like {
        return Err(CliError::validation(
            "scheme",
            "only used by kind = \"gate\" or \"time_scan\"",
        ));
    }
    let scheme = match cfg.scheme {
        Some(s) => s,
        None if gate_like && is_adiabatic_preset => SchemeKind::Adiabatic,
        None => SchemeKind::Lzs,
    };
    if is_adiabatic_preset && scheme != SchemeKind::Adiabatic {
        return Err(CliError::validation(
            "preset",
            "adiabatic presets only support kind = \"gate\" or \"time_scan\" with the adiabatic scheme",
        ));
    }
    if cfg.pulse.is_some() && scheme != SchemeKind::Adiabatic {
        return Err(CliError::validation(
            "pulse",
            "only used by scheme = \"adiabatic\"",
        ));
    }

    let (params, pulse, v_dd, units) = match scheme {
        SchemeKind::Lzs => {
            let p = resolve_params(cfg, preset, true)?.expect("params required");
            (Some(p), None, None, p.units)
        }
        SchemeKind::Coherent => {
            let (v, u) = resolve_coupling(cfg, preset, None)?;
            (None, None, Some(v), u)
        }
        SchemeKind::Adiabatic => {
            let pulse = need(
                resolve_pulse(cfg, preset)?,
                "pulse",
                "required for scheme = \"adiabatic\"",
            )?;
            let (v, u) = resolve_coupling(cfg, preset, Some(pulse.units))?;
            pulse
                .units
                .check(u, "params.units")
                .map_err(|e| CliError::from_core("params.units", e))?;
            (None, Some(pulse), Some(v), u)
        }
    };

    let channel = resolve_channel(cfg, preset)?;
    let decay_mode = cfg.decay.unwrap_or(DecayMode::Off);
    if decay_mode != DecayMode::Off {
        let ch = channel.as_ref().ok_or_else(|| {
            CliError::validation(
                "channel",
                "decay needs channel lifetimes (preset or [channel])",
            )
        })?;
        if matches!(cfg.kind, Kind::Spectrum) {
            return Err(CliError::validation(
                "decay",
                "not used by kind = \"spectrum\"",
            ));
        }
        units
            .check(decay_from_lifetimes(ch).units, "channel lifetimes")
            .map_err(|e| CliError::from_core("params.units", e))?;
    }

    let cycle_time = 2.0 * PI / v_dd.or(params.map(|p| p.v_dd)).expect("coupling resolved");
    let duration = match (cfg.kind, scheme) {
        (Kind::Spectrum, _) | (_, SchemeKind::Adiabatic) => {
            if cfg.duration.is_some() || cfg.cycles.is_some() {
                return Err(CliError::validation(
                    "duration",
                    "not used here (spectra use `times`, adiabatic pulses use `pulse.total_t`)",
                ));
            }
            None
        }
        _ => {
            let d = match (cfg.duration, cfg.cycles) {
                (Some(_), Some(_)) => {
                    return Err(CliError::validation(
                        "duration",
                        "give either `duration` or `cycles`, not both",
                    ))
                }
                (Some(d), None) => Some(d),
                (None, Some(c)) => Some(c * cycle_time),
                (None, None) if scheme == SchemeKind::Coherent => Some(cycle_time),
                (None, None) => preset.and_then(Preset::duration),
            };
            let d = need(
                d,
                "duration",
                "no preset supplies it; set `duration` or `cycles`",
            )?;
            if !(d > 0.0 && d.is_finite()) {
                return Err(CliError::validation(
                    "duration",
                    format!("must be > 0, got {d}"),
                ));
            }
            Some(d)
        }
    };

    let times = match cfg.kind {
        Kind::Spectrum => {
            let p = params.expect("params resolved");
            let r = cfg.times.unwrap_or(Range {
                min: 0.0,
                max: 2.0 * p.drive_period(),
                points: 1001,
            });
            let r = check_range(r, "times")?;
            if r.points < 2 || r.max <= r.min {
                return Err(CliError::validation(
                    "times",
                    "need max > min and points >= 2",
                ));
            }
            Some(r)
        }
        _ => None,
    };
    let deviations = match cfg.kind {
        Kind::TimeScan => {
            let r = check_range(
                need(
                    cfg.deviations,
                    "deviations",
                    "required for kind = \"time_scan\"",
                )?,
                "deviations",
            )?;
            if r.values().iter().any(|d| !(d.abs() < 0.5)) {
                return Err(CliError::validation(
                    "deviations",
                    "values must lie in (-0.5, 0.5)",
                ));
            }
            Some(r)
        }
        _ => None,
    };
    let axes = match cfg.kind {
        Kind::Grid2d => {
            if scheme != SchemeKind::Lzs {
                return Err(CliError::validation(
                    "scheme",
                    "grid_2d scans the LZS drive only",
                ));
            }
            let a = need(cfg.axes.clone(), "axes", "required for kind = \"grid_2d\"")?;
            let [a1, a2]: [GridAxis; 2] = a
                .try_into()
                .map_err(|_| CliError::validation("axes", "exactly two axes are required"))?;
            for (i, ax) in [a1, a2].iter().enumerate() {
                ax.validate()
                    .map_err(|e| CliError::from_core(&format!("axes[{i}]"), e))?;
            }
            if a1.deviation == a2.deviation {
                return Err(CliError::validation(
                    "axes",
                    "the two axes must scan different parameters",
                ));
            }
            Some([a1, a2])
        }
        _ => None,
    };
    let metrics = match cfg.kind {
        Kind::TimeScan | Kind::Grid2d => {
            let m = cfg
                .metrics
                .clone()
                .unwrap_or_else(|| vec![Metric::Fidelity]);
            if m.is_empty() {
                return Err(CliError::validation("metrics", "must not be empty"));
            }
            m
        }
        _ => Vec::new(),
    };

    let frame = resolve_frame(cfg)?;
    if cfg.frame.is_some() && !matches!(cfg.kind, Kind::Trajectory) {
        return Err(CliError::validation(
            "frame",
            "only used by kind = \"trajectory\"",
        ));
    }
    let reference = params.unwrap_or_else(|| {
        let v = v_dd.expect("coupling resolved");
        DriveParams {
            v_dd: v,
            a: 0.0,
            delta0: 0.0,
            omega: v,
            phi: 0.0,
            units,
        }
    });
    let integrator = resolve_integrator(&cfg.integrator, &reference)?;

    Ok(Resolved {
        kind: cfg.kind,
        scheme,
        frame,
        decay_mode,
        params,
        duration,
        channel,
        pulse,
        v_dd,
        units,
        integrator,
        times,
        deviations,
        axes,
        metrics,
        output: cfg.output.path.clone(),
        format: infer_format(&cfg.output)?,
    })
}

impl Resolved {
    pub fn decay(&self) -> Option<DecayRates> {
        let ch = self.channel.as_ref()?;
        match self.decay_mode {
            DecayMode::Off => None,
            DecayMode::Pair => Some(decay_from_lifetimes(ch)),
            DecayMode::PairSingle => Some(decay_from_lifetimes(ch).with_single_atom(ch)),
        }
    }

    pub fn gate_scheme(&self) -> Option<GateScheme> {
        Some(match self.scheme {
            SchemeKind::Lzs => GateScheme::Lzs {
                params: self.params?,
                duration: self.duration?,
            },
            SchemeKind::Coherent => GateScheme::Coherent {
                v_dd: self.v_dd?,
                units: self.units,
                duration: self.duration?,
            },
            SchemeKind::Adiabatic => GateScheme::Adiabatic {
                pulse: self.pulse?,
                v_dd: self.v_dd?,
            },
        })
    }

    /// Explicit, preset-free document that resolves to `self`.
    pub fn to_config(&self) -> ExperimentConfig {
        let gate_like = matches!(self.kind, Kind::Gate | Kind::TimeScan);
        let params = match self.params {
            Some(p) => ParamsSpec {
                v_dd: Some(p.v_dd),
                a: Some(p.a),
                delta0: Some(p.delta0),
                omega: Some(p.omega),
                phi: Some(p.phi),
                units: Some(p.units),
                mhz: false,
            },
            None => ParamsSpec {
                v_dd: self.v_dd,
                units: Some(self.units),
                ..Default::default()
            },
        };
        let (frame, cutoff) = match self.frame {
            Frame::Lab => (FrameKind::Lab, None),
            Frame::Rotated => (FrameKind::Rotated, None),
            Frame::Interaction => (FrameKind::Interaction, None),
            Frame::FloquetTruncated(n) => (FrameKind::Floquet, Some(n)),
        };
        let c = &self.integrator;
        ExperimentConfig {
            kind: self.kind,
            preset: None,
            scheme: gate_like.then_some(self.scheme),
            frame: matches!(self.kind, Kind::Trajectory).then_some(frame),
            cutoff,
            decay: Some(self.decay_mode),
            duration: self.duration,
            cycles: None,
            params,
            channel: self.channel.as_ref().map(|ch| ChannelSpec {
                label: Some(ch.label.clone()),
                c3: Some(ch.c3),
                r: Some(ch.r),
                geometric_prefactor: Some(ch.geometric_prefactor),
                lifetimes: Some(ch.lifetimes),
            }),
            pulse: self.pulse.map(|p| PulseSpec {
                s1: Some(p.s1),
                s2: Some(p.s2),
                total_t: Some(p.total_t),
                t1: Some(p.t1),
                t2: Some(p.t2),
                units: Some(p.units),
                mhz: false,
            }),
            integrator: IntegratorSpec {
                method: Some(c.method),
                rel_tol: Some(c.rel_tol),
                abs_tol: Some(c.abs_tol),
                max_step: Some(c.max_step),
                sample_interval: Some(c.sample_interval),
                step: None,
            },
            times: self.times,
            deviations: self.deviations,
            axes: self.axes.map(|a| a.to_vec()),
            metrics: (!self.metrics.is_empty()).then(|| self.metrics.clone()),
            output: OutputSpec {
                path: self.output.clone(),
                format: Some(self.format),
            },
        }
    }
}
