//! Browser bindings. Every entry point returns a flat `f64` buffer with a
//! fixed row stride so the page can draw without any parsing.
//!
//! Parameters are in rescaled units (`V_DD = 1`).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use lzs_core::dynamics::{default_config, propagate};
use lzs_core::hamiltonians::{spectrum_series, Frame};
use lzs_core::params::{DriveParams, TwoLevelState};
use lzs_core::sweeps::{scan_time_deviation, GateScheme, Metric};
use wasm_bindgen::prelude::*;

pub const TRAJECTORY_STRIDE: usize = 4;
pub const SPECTRUM_STRIDE: usize = 3;
pub const SCAN_STRIDE: usize = 3;

const MAX_POINTS: usize = 20_000;

fn params(a: f64, delta0: f64, omega: f64, phi_over_pi: f64) -> Result<DriveParams, String> {
    DriveParams::rescaled(a, delta0, omega)
        .map(|p| p.with_phase(phi_over_pi * std::f64::consts::PI))
        .map_err(|e| e.to_string())
}

fn frame_from_code(code: u32) -> Result<Frame, String> {
    match code {
        0 => Ok(Frame::Lab),
        1 => Ok(Frame::Rotated),
        2 => Ok(Frame::Interaction),
        _ => Err(format!("unknown frame code {code}")),
    }
}

/// Rows of `(t, p_g, p_e, phase_g / pi)` starting from the ground state.
pub fn trajectory_rows(
    a: f64,
    delta0: f64,
    omega: f64,
    phi_over_pi: f64,
    cycles: f64,
    frame: u32,
) -> Result<Vec<f64>, String> {
    let p = params(a, delta0, omega, phi_over_pi)?;
    let duration = p.duration_for_cycles(cycles);
    let mut cfg = default_config(&p);
    cfg.sample_interval = cfg.sample_interval.max(duration / MAX_POINTS as f64);
    let traj = propagate(
        &p,
        frame_from_code(frame)?,
        None,
        TwoLevelState::ground(),
        duration,
        &cfg,
    )
    .map_err(|e| e.to_string())?;
    Ok(traj
        .rows
        .iter()
        .flat_map(|r| [r.t, r.p_g, r.p_e, r.phase_g])
        .collect())
}

/// Rows of `(t, E+, E-)` over `[0, periods * 2pi/omega]`.
pub fn spectrum_rows(
    a: f64,
    delta0: f64,
    omega: f64,
    periods: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    let p = params(a, delta0, omega, 0.0)?;
    if !(periods > 0.0) || !(2..=MAX_POINTS).contains(&points) {
        return Err("need periods > 0 and 2 <= points <= 20000".into());
    }
    Ok(spectrum_series(&p, 0.0, periods * p.drive_period(), points)
        .iter()
        .flat_map(|s| [s.t, s.e_plus, s.e_minus])
        .collect())
}

/// Rows of `(dT/T, F_lzs, F_coherent)`: CZ fidelity of the driven gate and of
/// a resonant 2pi pulse under the same fractional timing error.
pub fn time_scan_rows(
    a: f64,
    delta0: f64,
    omega: f64,
    cycles: f64,
    max_dev: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    let p = params(a, delta0, omega, 0.0)?;
    if !(max_dev > 0.0 && max_dev < 0.5) || !(2..=401).contains(&points) {
        return Err("need 0 < max_dev < 0.5 and 2 <= points <= 401".into());
    }
    let devs: Vec<f64> = (0..points)
        .map(|i| -max_dev + 2.0 * max_dev * i as f64 / (points - 1) as f64)
        .collect();
    let cfg = default_config(&p);
    let lzs = GateScheme::Lzs {
        params: p,
        duration: p.duration_for_cycles(cycles),
    };
    let coherent = GateScheme::Coherent {
        v_dd: p.v_dd,
        units: p.units,
        duration: p.duration_for_cycles(1.0),
    };
    let f = scan_time_deviation(&lzs, None, &devs, Metric::Fidelity, &cfg)
        .map_err(|e| e.to_string())?;
    let c = scan_time_deviation(&coherent, None, &devs, Metric::Fidelity, &cfg)
        .map_err(|e| e.to_string())?;
    Ok(devs
        .iter()
        .zip(f.data.iter().zip(&c.data))
        .flat_map(|(&d, (&x, &y))| [d, x, y])
        .collect())
}

/// Rescaled built-in parameter sets as JSON: `[{name, description, a, delta0, omega, cycles}]`.
pub fn presets_json() -> String {
    let list: Vec<_> = lzs_core::presets::all()
        .into_iter()
        .filter_map(|pr| {
            let p = pr.params()?;
            if p.units != lzs_core::UnitSystem::Rescaled || p.v_dd != 1.0 {
                return None;
            }
            Some(serde_json::json!({
                "name": pr.name,
                "description": pr.description,
                "a": p.a,
                "delta0": p.delta0,
                "omega": p.omega,
                "cycles": pr.duration().map(|d| d * p.v_dd / (2.0 * std::f64::consts::PI)),
            }))
        })
        .collect();
    serde_json::to_string(&list).expect("presets serialize")
}

#[wasm_bindgen]
pub fn trajectory(
    a: f64,
    delta0: f64,
    omega: f64,
    phi_over_pi: f64,
    cycles: f64,
    frame: u32,
) -> Result<Vec<f64>, JsValue> {
    trajectory_rows(a, delta0, omega, phi_over_pi, cycles, frame).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn spectrum(
    a: f64,
    delta0: f64,
    omega: f64,
    periods: f64,
    points: usize,
) -> Result<Vec<f64>, JsValue> {
    spectrum_rows(a, delta0, omega, periods, points).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn time_scan(
    a: f64,
    delta0: f64,
    omega: f64,
    cycles: f64,
    max_dev: f64,
    points: usize,
) -> Result<Vec<f64>, JsValue> {
    time_scan_rows(a, delta0, omega, cycles, max_dev, points).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn presets() -> String {
    presets_json()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trajectory_starts_in_ground_state() {
        let v = trajectory_rows(13.0, 12.0, 0.75, 0.0, 4.0, 0).unwrap();
        assert_eq!(v.len() % TRAJECTORY_STRIDE, 0);
        assert_eq!(&v[..3], &[0.0, 1.0, 0.0]);
        let last = &v[v.len() - TRAJECTORY_STRIDE..];
        assert!((last[0] - 8.0 * std::f64::consts::PI).abs() < 1e-9);
        assert!(last[1] > 0.998);
    }

    #[test]
    fn spectrum_is_split_by_the_coupling() {
        let v = spectrum_rows(10.0, 5.0, 1.0, 1.0, 200).unwrap();
        assert_eq!(v.len(), 200 * SPECTRUM_STRIDE);
        for row in v.chunks(SPECTRUM_STRIDE) {
            assert!(row[1] - row[2] >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn scan_compares_against_coherent() {
        let v = time_scan_rows(13.0, 12.0, 0.75, 4.0, 0.1, 5).unwrap();
        assert_eq!(v.len(), 5 * SCAN_STRIDE);
        let mid = &v[2 * SCAN_STRIDE..3 * SCAN_STRIDE];
        assert!(mid[0].abs() < 1e-15);
        assert!((mid[2] - 1.0).abs() < 1e-8);
        let edge = &v[..SCAN_STRIDE];
        assert!(edge[1] > edge[2]);
    }

    #[test]
    fn bad_input_is_an_error_not_a_panic() {
        assert!(trajectory_rows(1.0, 1.0, 0.0, 0.0, 1.0, 0).is_err());
        assert!(trajectory_rows(1.0, 1.0, 1.0, 0.0, 1.0, 9).is_err());
        assert!(spectrum_rows(1.0, 1.0, 1.0, 1.0, 1).is_err());
        assert!(time_scan_rows(1.0, 1.0, 1.0, 1.0, 0.6, 5).is_err());
    }

    #[test]
    fn presets_are_rescaled_only() {
        let v: serde_json::Value = serde_json::from_str(&presets_json()).unwrap();
        let names: Vec<_> = v
            .as_array()
            .unwrap()
            .iter()
            .map(|p| p["name"].as_str().unwrap())
            .collect();
        assert!(names.contains(&"fig5_ghi"));
        assert!(!names.contains(&"cs_robust"));
    }
}
