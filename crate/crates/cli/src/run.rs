//! Executes a resolved experiment and writes its outputs.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use lzs_core::dynamics::{propagate, Trajectory};
use lzs_core::gate::GateResult;
use lzs_core::hamiltonians::{spectrum_series, SpectralPoint};
use lzs_core::io::{fmt_num, write_json};
use lzs_core::params::TwoLevelState;
use lzs_core::sweeps::{scan_2d_metrics, scan_time_deviation_metrics, SweepGrid};
use serde::Serialize;
use serde_json::json;

use crate::config::{ExperimentConfig, Format, Kind, Resolved};
use crate::error::{CliError, CliResult};

/// What a run produced, for the terminal summary.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub outputs: Vec<PathBuf>,
    pub summary: serde_json::Value,
    /// Cells whose integration failed; these are written as NaN.
    pub missing_cells: usize,
}

#[derive(Serialize)]
struct Meta<'a> {
    version: &'static str,
    wall_time_s: f64,
    outputs: Vec<String>,
    summary: &'a serde_json::Value,
    config: ExperimentConfig,
}

/// Writes through a temporary file in the target directory so a crash never
/// leaves a truncated output behind.
fn write_atomic(path: &Path, fill: impl FnOnce(&mut dyn Write) -> CliResult<()>) -> CliResult<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    {
        let mut w = std::io::BufWriter::new(tmp.as_file_mut());
        fill(&mut w)?;
        w.flush().map_err(|e| CliError::io(path, e))?;
    }
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

fn core_io(path: &Path) -> impl Fn(lzs_core::Error) -> CliError + '_ {
    move |e| CliError::io(path, e)
}

fn write_trajectory(path: &Path, format: Format, traj: &Trajectory) -> CliResult<()> {
    write_atomic(path, |w| match format {
        Format::Csv => traj.write_csv(w).map_err(core_io(path)),
        Format::Json => write_json(w, traj).map_err(core_io(path)),
    })
}

fn write_spectrum(path: &Path, format: Format, pts: &[SpectralPoint]) -> CliResult<()> {
    write_atomic(path, |w| match format {
        Format::Csv => {
            let io = |e: std::io::Error| CliError::io(path, e);
            writeln!(w, "t,e_plus,e_minus").map_err(io)?;
            for p in pts {
                writeln!(
                    w,
                    "{},{},{}",
                    fmt_num(p.t),
                    fmt_num(p.e_plus),
                    fmt_num(p.e_minus)
                )
                .map_err(io)?;
            }
            Ok(())
        }
        Format::Json => write_json(w, &pts).map_err(core_io(path)),
    })
}

fn write_gate(path: &Path, format: Format, g: &GateResult) -> CliResult<()> {
    write_atomic(path, |w| match format {
        Format::Csv => {
            let io = |e: std::io::Error| CliError::io(path, e);
            writeln!(w, "branch,re,im,abs").map_err(io)?;
            for (name, a) in ["00", "01", "10", "11"].iter().zip(g.amplitudes()) {
                writeln!(
                    w,
                    "{name},{},{},{}",
                    fmt_num(a.re),
                    fmt_num(a.im),
                    fmt_num(a.norm())
                )
                .map_err(io)?;
            }
            writeln!(
                w,
                "fidelity,{},0,{}",
                fmt_num(g.fidelity),
                fmt_num(g.fidelity)
            )
            .map_err(io)
        }
        Format::Json => write_json(w, g).map_err(core_io(path)),
    })
}

fn write_grid(path: &Path, format: Format, grid: &SweepGrid) -> CliResult<()> {
    write_atomic(path, |w| match format {
        Format::Csv => grid.write_csv(w).map_err(core_io(path)),
        Format::Json => write_json(w, grid).map_err(core_io(path)),
    })
}

/// `out.csv` becomes `out.fidelity.csv` when several metrics are written.
fn metric_path(base: &Path, metric: &str) -> PathBuf {
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let name = match base.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{stem}.{metric}.{ext}"),
        None => format!("{stem}.{metric}"),
    };
    base.with_file_name(name)
}

pub fn meta_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn write_grids(
    r: &Resolved,
    grids: &[SweepGrid],
) -> CliResult<(Vec<PathBuf>, serde_json::Value, usize)> {
    let mut outputs = Vec::new();
    let mut summary = serde_json::Map::new();
    let mut missing = 0;
    for g in grids {
        let path = if grids.len() == 1 {
            r.output.clone()
        } else {
            metric_path(&r.output, g.metric.name())
        };
        write_grid(&path, r.format, g)?;
        outputs.push(path);
        missing = missing.max(g.missing_cells());
        summary.insert(
            g.metric.name().to_string(),
            json!({ "min": finite_or_null(g.min()), "max": finite_or_null(g.max()) }),
        );
    }
    summary.insert("missing_cells".into(), json!(missing));
    Ok((outputs, serde_json::Value::Object(summary), missing))
}

fn finite_or_null(x: f64) -> serde_json::Value {
    if x.is_finite() {
        json!(x)
    } else {
        serde_json::Value::Null
    }
}

fn gate_summary(g: &GateResult) -> serde_json::Value {
    json!({
        "fidelity": g.fidelity,
        "p_00": g.amp_00.norm_sqr(),
        "p_11": g.amp_11.norm_sqr(),
        "pair_phase_over_pi": g.pair_amplitude().arg() / std::f64::consts::PI,
    })
}

/// Runs `r`, writes its outputs and the `<output>.meta.json` sidecar.
///
/// Failed sweep cells still produce files; the caller sees them through
/// `RunReport::missing_cells`.
pub fn run_resolved(r: &Resolved) -> CliResult<RunReport> {
    let start = Instant::now();
    let decay = r.decay();
    let cfg = &r.integrator;
    let num = |e| CliError::from_core("run", e);

    let (outputs, summary, missing_cells) = match r.kind {
        Kind::Trajectory => {
            let p = r.params.expect("trajectory params");
            let traj = propagate(
                &p,
                r.frame,
                decay.as_ref(),
                TwoLevelState::ground(),
                r.duration.expect("trajectory duration"),
                cfg,
            )
            .map_err(num)?;
            write_trajectory(&r.output, r.format, &traj)?;
            let last = traj.rows.last().expect("non-empty trajectory");
            let summary = json!({
                "samples": traj.rows.len(),
                "p_g_final": last.p_g,
                "phase_g_final_over_pi": last.phase_g,
                "norm_final": last.norm,
            });
            (vec![r.output.clone()], summary, 0)
        }
        Kind::Spectrum => {
            let p = r.params.expect("spectrum params");
            let t = r.times.expect("spectrum window");
            let pts = spectrum_series(&p, t.min, t.max, t.points);
            write_spectrum(&r.output, r.format, &pts)?;
            let gap = pts
                .iter()
                .map(SpectralPoint::gap)
                .fold(f64::INFINITY, f64::min);
            (
                vec![r.output.clone()],
                json!({ "points": pts.len(), "min_gap": gap }),
                0,
            )
        }
        Kind::Gate => {
            let scheme = r.gate_scheme().expect("gate scheme");
            let g = scheme.run(decay.as_ref(), 1.0, cfg).map_err(num)?;
            write_gate(&r.output, r.format, &g)?;
            (vec![r.output.clone()], gate_summary(&g), 0)
        }
        Kind::TimeScan => {
            let scheme = r.gate_scheme().expect("gate scheme");
            let devs = r.deviations.expect("deviations").values();
            let grids =
                scan_time_deviation_metrics(&scheme, decay.as_ref(), &devs, &r.metrics, cfg)
                    .map_err(num)?;
            write_grids(r, &grids)?
        }
        Kind::Grid2d => {
            let p = r.params.expect("grid params");
            let grids = scan_2d_metrics(
                &p,
                r.duration.expect("grid duration"),
                decay.as_ref(),
                r.axes.expect("grid axes"),
                &r.metrics,
                cfg,
            )
            .map_err(num)?;
            write_grids(r, &grids)?
        }
    };

    let meta = Meta {
        version: env!("CARGO_PKG_VERSION"),
        wall_time_s: start.elapsed().as_secs_f64(),
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        summary: &summary,
        config: r.to_config(),
    };
    let mpath = meta_path(&r.output);
    write_atomic(&mpath, |w| write_json(w, &meta).map_err(core_io(&mpath)))?;

    Ok(RunReport {
        outputs,
        summary,
        missing_cells,
    })
}

/// Loads, resolves and runs the config at `path`.
pub fn run_file(path: &Path) -> CliResult<RunReport> {
    let cfg = ExperimentConfig::load(path)?;
    let r = crate::config::resolve(&cfg)?;
    let report = run_resolved(&r)?;
    if report.missing_cells > 0 {
        return Err(CliError::Numerical(format!(
            "{} sweep cell(s) failed to integrate; written as NaN",
            report.missing_cells
        )));
    }
    Ok(report)
}

/// Reads back the config stored in a sidecar.
pub fn config_from_meta(path: &Path) -> CliResult<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let v: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::validation("meta", e.to_string()))?;
    serde_json::from_value(v["config"].clone())
        .map_err(|e| CliError::validation("meta.config", e.to_string()))
}
