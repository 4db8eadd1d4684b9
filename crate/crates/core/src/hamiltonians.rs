//! Generators of the pair-state dynamics in the lab frame and in the
//! frames that strip the drive.
//!
//! With `H_lab = -1/2 [[0, V], [V, 2 delta(t)]]` the unitary
//! `U(t) = exp[-i x (sin(wt + phi) - sin phi) |e><e|]`, `x = A/w`, removes
//! the oscillating part of the defect and leaves the coupling dressed by
//! `exp[+i x (sin(wt + phi) - sin phi)]`. Expanding that phase factor in
//! Bessel harmonics gives couplings `Omega_n = V J_n(x)` at frequencies
//! `n w`. A further `exp(-i delta0 t |e><e|)` removes the static defect.
//! Every transformation acts on `|e>` alone, so the `|g>` amplitude is the
//! same in all frames, and `U(0) = 1` so initial states coincide.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::numerics::{bessel_j, bessel_j_orders, Generator, BESSEL_MAX_ORDER};
use crate::params::DriveParams;

pub type Mat2 = [[Complex64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type", content = "cutoff")]
pub enum Frame {
    Lab,
    Rotated,
    /// Drive and static defect both removed; harmonics up to the default cutoff.
    Interaction,
    /// Rotated frame with the coupling expanded in harmonics `|n| <= N`.
    FloquetTruncated(usize),
}

const TAIL_TOLERANCE: f64 = 1e-13;

/// Literal cutoff `ceil(A/w) + 10`.
pub fn minimal_harmonic_cutoff(p: &DriveParams) -> usize {
    p.modulation_index().abs().ceil() as usize + 10
}

/// Smallest `N >= ceil(A/w) + 10` beyond which every `|J_n(A/w)|` is below
/// `1e-13`.
pub fn default_harmonic_cutoff(p: &DriveParams) -> Result<usize> {
    let x = p.modulation_index().abs();
    let floor = minimal_harmonic_cutoff(p);
    let probe = ((x + 60.0 + 5.0 * x.cbrt()).ceil() as usize).min(BESSEL_MAX_ORDER as usize);
    let j = bessel_j_orders(probe.max(floor), x)?;
    let last_large = j
        .iter()
        .rposition(|v| v.abs() >= TAIL_TOLERANCE)
        .unwrap_or(0);
    Ok(floor.max(last_large).min(BESSEL_MAX_ORDER as usize))
}

/// `H = -1/2 [[0, V], [V, 2 delta]]`.
pub fn lab_matrix(v_dd: f64, delta: f64) -> Mat2 {
    let c = |v: f64| Complex64::new(v, 0.0);
    [[c(0.0), c(-0.5 * v_dd)], [c(-0.5 * v_dd), c(-delta)]]
}

/// A frame-specific generator with its Bessel harmonics precomputed.
#[derive(Debug, Clone)]
pub struct FrameGenerator {
    params: DriveParams,
    frame: Frame,
    /// `(n, Omega_n)` for the truncated frames.
    harmonics: Vec<(i32, f64)>,
    /// `exp(-i x sin phi)`, the constant part of the dressing phase.
    phase_ref: Complex64,
}

impl FrameGenerator {
    pub fn new(params: DriveParams, frame: Frame) -> Result<Self> {
        params.validate()?;
        let x = params.modulation_index();
        let cutoff = match frame {
            Frame::Lab | Frame::Rotated => None,
            Frame::Interaction => Some(default_harmonic_cutoff(&params)?),
            Frame::FloquetTruncated(n) => Some(n.max(1)),
        };
        let harmonics = match cutoff {
            None => Vec::new(),
            Some(n) => {
                let j = bessel_j_orders(n, x)?;
                let mut h = Vec::with_capacity(2 * n + 1);
                for k in -(n as i32)..=(n as i32) {
                    let mag = j[k.unsigned_abs() as usize];
                    let sign = if k < 0 && k % 2 != 0 { -1.0 } else { 1.0 };
                    h.push((k, params.v_dd * sign * mag));
                }
                h
            }
        };
        Ok(FrameGenerator {
            params,
            frame,
            harmonics,
            phase_ref: Complex64::from_polar(1.0, -x * params.phi.sin()),
        })
    }

    pub fn params(&self) -> &DriveParams {
        &self.params
    }

    pub fn frame(&self) -> Frame {
        self.frame
    }

    pub fn harmonic_count(&self) -> usize {
        self.harmonics.len()
    }

    pub fn matrix(&self, t: f64) -> Mat2 {
        let p = &self.params;
        let zero = Complex64::new(0.0, 0.0);
        let (coupling, diag) = match self.frame {
            Frame::Lab => return lab_matrix(p.v_dd, p.delta_at(t)),
            Frame::Rotated => {
                let s = (p.omega * t + p.phi).sin() - p.phi.sin();
                (
                    Complex64::from_polar(p.v_dd, p.modulation_index() * s),
                    -p.delta0,
                )
            }
            Frame::FloquetTruncated(_) => {
                let sum: Complex64 = self
                    .harmonics
                    .iter()
                    .map(|&(n, om)| Complex64::from_polar(om, n as f64 * (p.omega * t + p.phi)))
                    .sum();
                (self.phase_ref * sum, -p.delta0)
            }
            Frame::Interaction => {
                let sum: Complex64 = self
                    .harmonics
                    .iter()
                    .map(|&(n, om)| {
                        let arg = (p.delta0 + n as f64 * p.omega) * t + n as f64 * p.phi;
                        Complex64::from_polar(om, arg)
                    })
                    .sum();
                (self.phase_ref * sum, 0.0)
            }
        };
        [
            [zero, -0.5 * coupling],
            [-0.5 * coupling.conj(), Complex64::new(diag, 0.0)],
        ]
    }
}

impl Generator<2> for FrameGenerator {
    fn hamiltonian(&self, t: f64) -> Mat2 {
        self.matrix(t)
    }
}

/// Lab-frame form with an arbitrary defect profile `delta(t)`.
pub struct DetuningProfile<F> {
    pub v_dd: f64,
    pub delta: F,
}

impl<F: Fn(f64) -> f64> Generator<2> for DetuningProfile<F> {
    fn hamiltonian(&self, t: f64) -> Mat2 {
        lab_matrix(self.v_dd, (self.delta)(t))
    }
}

/// Generator of `p` in `frame` at time `t`.
pub fn hamiltonian(p: &DriveParams, frame: Frame, t: f64) -> Result<Mat2> {
    Ok(FrameGenerator::new(*p, frame)?.matrix(t))
}

/// Largest entry of `|H - H^dagger|`.
pub fn hermiticity_defect(h: &Mat2) -> f64 {
    [(0, 0), (0, 1), (1, 0), (1, 1)]
        .iter()
        .map(|&(i, j)| (h[i][j] - h[j][i].conj()).norm())
        .fold(0.0, f64::max)
}

/// Adiabatic energies of the lab-frame generator and the mixing angle of
/// `|+> = cos(theta)|e> + sin(theta)|g>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    pub t: f64,
    pub e_plus: f64,
    pub e_minus: f64,
    pub theta: f64,
}

impl SpectralPoint {
    pub fn gap(&self) -> f64 {
        self.e_plus - self.e_minus
    }
}

pub fn instantaneous_spectrum(p: &DriveParams, t: f64) -> SpectralPoint {
    let delta = p.delta_at(t);
    let root = delta.hypot(p.v_dd);
    SpectralPoint {
        t,
        e_plus: 0.5 * (-delta + root),
        e_minus: 0.5 * (-delta - root),
        // atan2 keeps theta in (0, pi/2) through the crossing
        theta: 0.5 * p.v_dd.atan2(delta),
    }
}

/// Samples the spectrum on `count` evenly spaced times in `[t0, t1]`.
pub fn spectrum_series(p: &DriveParams, t0: f64, t1: f64, count: usize) -> Vec<SpectralPoint> {
    let count = count.max(2);
    let dt = (t1 - t0) / (count - 1) as f64;
    (0..count)
        .map(|k| instantaneous_spectrum(p, t0 + k as f64 * dt))
        .collect()
}

/// Times in `[0, period)` where `delta(t) = 0`, i.e. the Foerster
/// resonance is crossed.
pub fn resonance_crossings(p: &DriveParams) -> Vec<f64> {
    if p.a == 0.0 || (p.delta0 / p.a).abs() > 1.0 {
        return Vec::new();
    }
    let base = (-p.delta0 / p.a).acos();
    let period = p.drive_period();
    let mut out: Vec<f64> = [base, 2.0 * PI - base]
        .iter()
        .map(|&arg| ((arg - p.phi) / p.omega).rem_euclid(period))
        .collect();
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-15 * period);
    out
}

/// `Omega_n = V_DD J_n(A/w)`, signed.
pub fn effective_rabi(p: &DriveParams, n: i32) -> Result<f64> {
    Ok(p.v_dd * bessel_j(n, p.modulation_index())?)
}

/// Photon order `m = round(delta0 / w)` of the nearest multi-photon
/// resonance and the residual `delta0 - m w`.
pub fn resonance_order(p: &DriveParams) -> (i64, f64) {
    let m = (p.delta0 / p.omega).round();
    (m as i64, p.delta0 - m * p.omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::UnitSystem;

    fn fig2() -> DriveParams {
        DriveParams::rescaled(10.0, 5.0, 1.0).unwrap()
    }

    #[test]
    fn lab_static_resonant() {
        let p = DriveParams::rescaled(0.0, 0.0, 1.0).unwrap();
        let h = hamiltonian(&p, Frame::Lab, 3.3).unwrap();
        assert_eq!(h, lab_matrix(1.0, 0.0));
        assert_eq!(h[0][1].re, -0.5);
        assert_eq!(h[1][1].re, 0.0);
    }

    #[test]
    fn rotated_coupling_at_origin() {
        let h = hamiltonian(&fig2(), Frame::Rotated, 0.0).unwrap();
        assert_eq!(h[0][1], Complex64::new(-0.5, 0.0));
        assert_eq!(h[1][1].re, -5.0);
    }

    #[test]
    fn lab_diagonal_at_fig2_peak() {
        let h = hamiltonian(&fig2(), Frame::Lab, 0.0).unwrap();
        assert_eq!(h[1][1].re, -15.0);
    }

    #[test]
    fn floquet_sum_reproduces_rotated_coupling() {
        for &(a, d, w) in &[(10.0, 5.0, 1.0), (13.0, 12.0, 0.75), (18.0, 6.0, 3.0)] {
            let p = DriveParams::rescaled(a, d, w).unwrap().with_phase(0.4);
            let n = default_harmonic_cutoff(&p).unwrap();
            let floq = FrameGenerator::new(p, Frame::FloquetTruncated(n)).unwrap();
            let rot = FrameGenerator::new(p, Frame::Rotated).unwrap();
            for k in 0..50 {
                let t = 0.37 * k as f64;
                let diff = (floq.matrix(t)[0][1] - rot.matrix(t)[0][1]).norm();
                assert!(diff < 1e-12, "{a},{d},{w} t={t}: {diff}");
            }
        }
    }

    #[test]
    fn all_frames_hermitian() {
        let p = DriveParams::rescaled(13.0, 12.0, 3.0)
            .unwrap()
            .with_phase(0.2);
        for frame in [
            Frame::Lab,
            Frame::Rotated,
            Frame::Interaction,
            Frame::FloquetTruncated(8),
        ] {
            let g = FrameGenerator::new(p, frame).unwrap();
            for k in 0..100 {
                assert_eq!(hermiticity_defect(&g.matrix(0.1 * k as f64)), 0.0);
            }
        }
    }

    #[test]
    fn spectrum_at_resonance_and_decoupled() {
        let p = DriveParams::rescaled(0.0, 0.0, 1.0).unwrap();
        let s = instantaneous_spectrum(&p, 0.0);
        assert!((s.gap() - 1.0).abs() < 1e-15);
        assert!((s.theta - PI / 4.0).abs() < 1e-15);

        let weak = DriveParams::new(1e-9, 0.0, 2.0, 1.0, UnitSystem::Rescaled).unwrap();
        let s = instantaneous_spectrum(&weak, 0.0);
        assert!((s.gap() - 2.0).abs() < 1e-12);
        assert!(s.theta < 1e-9);
    }

    #[test]
    fn spectrum_matches_eigenvalues() {
        let p = fig2();
        for k in 0..40 {
            let t = 0.17 * k as f64;
            let s = instantaneous_spectrum(&p, t);
            let h = lab_matrix(1.0, p.delta_at(t));
            // trace and determinant of the 2x2 generator
            let tr = h[0][0].re + h[1][1].re;
            let det = h[0][0].re * h[1][1].re - h[0][1].re * h[1][0].re;
            assert!((s.e_plus + s.e_minus - tr).abs() < 1e-12);
            assert!((s.e_plus * s.e_minus - det).abs() < 1e-10);
            assert!(s.theta > 0.0 && s.theta < PI / 2.0);
        }
    }

    #[test]
    fn minimum_gap_sits_on_crossings() {
        let p = fig2();
        let crossings = resonance_crossings(&p);
        assert_eq!(crossings.len(), 2);
        for &tc in &crossings {
            assert!(p.delta_at(tc).abs() < 1e-12);
            let s = instantaneous_spectrum(&p, tc);
            assert!((s.gap() - p.v_dd).abs() < 1e-12);
        }
        let series = spectrum_series(&p, 0.0, p.drive_period(), 20001);
        let min = series
            .iter()
            .map(SpectralPoint::gap)
            .fold(f64::INFINITY, f64::min);
        assert!(min >= p.v_dd);
        assert!(min - p.v_dd < 1e-6);
        let argmin = series
            .iter()
            .min_by(|a, b| a.gap().total_cmp(&b.gap()))
            .unwrap()
            .t;
        let near = crossings
            .iter()
            .map(|c| (c - argmin).abs())
            .fold(f64::INFINITY, f64::min);
        assert!(near < 1e-3);
    }

    #[test]
    fn effective_rabi_examples() {
        let p = DriveParams::rescaled(0.0, 5.0, 1.0).unwrap();
        assert_eq!(effective_rabi(&p, 0).unwrap(), 1.0);
        assert_eq!(effective_rabi(&p, 3).unwrap(), 0.0);

        // series values of J_1(3) and J_4(13/3)
        let p = DriveParams::rescaled(18.0, 6.0, 6.0).unwrap();
        assert!((effective_rabi(&p, 1).unwrap() - 0.339_058_958_525_936_4).abs() < 1e-12);
        let p = DriveParams::rescaled(13.0, 12.0, 3.0).unwrap();
        assert!((effective_rabi(&p, 4).unwrap() - 0.327_979_393_570_142_7).abs() < 1e-12);
    }

    #[test]
    fn resonance_order_examples() {
        let p = DriveParams::rescaled(13.0, 12.0, 3.0).unwrap();
        assert_eq!(resonance_order(&p), (4, 0.0));
        let p = DriveParams::rescaled(18.0, 6.0, 6.0).unwrap();
        assert_eq!(resonance_order(&p), (1, 0.0));
        let p = DriveParams::from_mhz(3.2, 83.2, 76.8, 3.15).unwrap();
        let (m, mismatch) = resonance_order(&p);
        assert_eq!(m, 24);
        assert!((mismatch - 2.0 * PI * 1.2).abs() < 1e-9);
    }

    #[test]
    fn cutoff_covers_tail() {
        let p = DriveParams::rescaled(13.0, 12.0, 0.75).unwrap();
        let n = default_harmonic_cutoff(&p).unwrap();
        assert!(n >= minimal_harmonic_cutoff(&p));
        assert!(bessel_j(n as i32 + 1, p.modulation_index()).unwrap().abs() < 1e-13);
        let fast = DriveParams::rescaled(4.0, 20.0, 20.0).unwrap();
        assert_eq!(
            default_harmonic_cutoff(&fast).unwrap(),
            minimal_harmonic_cutoff(&fast)
        );
    }
}
