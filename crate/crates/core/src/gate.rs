//! CZ protocol over the two-qubit computational basis.
//!
//! Only `|11>` reaches the interacting pair state; `|00>` is untouched and
//! the singly excited branches carry no dynamical phase.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{evolve, Conditional};
use crate::error::{Error, Result};
use crate::hamiltonians::{DetuningProfile, Frame};
use crate::numerics::{integrate, IntegratorConfig};
use crate::params::{DecayRates, DriveParams, TwoLevelState, UnitSystem};

/// Output amplitudes for the input `(|00> + |01> + |10> + |11>) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateResult {
    pub amp_00: Complex64,
    pub amp_01: Complex64,
    pub amp_10: Complex64,
    pub amp_11: Complex64,
    pub fidelity: f64,
}

/// `|<psi_f| U_cz |psi_0>|^2` with `diag(U_cz) = (1, 1, 1, -1)`.
pub fn cz_fidelity(amps: &[Complex64; 4]) -> f64 {
    let overlap = (amps[0].conj() + amps[1].conj() + amps[2].conj() - amps[3].conj()) * 0.5;
    overlap.norm_sqr()
}

/// Closed form for lossless single branches: `|3 - c_g|^2 / 16`.
pub fn ideal_branch_fidelity(c_g: Complex64) -> f64 {
    (Complex64::new(3.0, 0.0) - c_g).norm_sqr() / 16.0
}

impl GateResult {
    pub fn from_amplitudes(amps: [Complex64; 4]) -> Self {
        GateResult {
            amp_00: amps[0],
            amp_01: amps[1],
            amp_10: amps[2],
            amp_11: amps[3],
            fidelity: cz_fidelity(&amps),
        }
    }

    pub fn amplitudes(&self) -> [Complex64; 4] {
        [self.amp_00, self.amp_01, self.amp_10, self.amp_11]
    }

    pub fn total_population(&self) -> f64 {
        self.amplitudes().iter().map(|a| a.norm_sqr()).sum()
    }

    /// Pair-state amplitude `c_g = 2 amp_11`.
    pub fn pair_amplitude(&self) -> Complex64 {
        self.amp_11 * 2.0
    }

    pub fn with_global_phase(&self, theta: f64) -> Self {
        let u = Complex64::from_polar(1.0, theta);
        Self::from_amplitudes(self.amplitudes().map(|a| a * u))
    }
}

#[derive(Serialize, Deserialize)]
struct GateRecord {
    amp_00: [f64; 2],
    amp_01: [f64; 2],
    amp_10: [f64; 2],
    amp_11: [f64; 2],
    fidelity: f64,
}

fn pair(c: Complex64) -> [f64; 2] {
    [c.re, c.im]
}

impl Serialize for GateResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GateRecord {
            amp_00: pair(self.amp_00),
            amp_01: pair(self.amp_01),
            amp_10: pair(self.amp_10),
            amp_11: pair(self.amp_11),
            fidelity: self.fidelity,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GateResult {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = GateRecord::deserialize(d)?;
        let c = |p: [f64; 2]| Complex64::new(p[0], p[1]);
        Ok(Self::from_amplitudes([
            c(r.amp_00),
            c(r.amp_01),
            c(r.amp_10),
            c(r.amp_11),
        ]))
    }
}

fn compose(c_g: Complex64, decay: Option<&DecayRates>, duration: f64) -> GateResult {
    let (g1, g2) = decay.and_then(|d| d.single_atom).unwrap_or((0.0, 0.0));
    let half = Complex64::new(0.5, 0.0);
    GateResult::from_amplitudes([
        half,
        half * (-g2 * duration / 2.0).exp(),
        half * (-g1 * duration / 2.0).exp(),
        half * c_g,
    ])
}

/// LZS-driven gate: the `|11>` branch follows the lab-frame dynamics.
pub fn run_cz_lzs(
    p: &DriveParams,
    decay: Option<&DecayRates>,
    duration: f64,
    cfg: &IntegratorConfig,
) -> Result<GateResult> {
    let fin = evolve(p, Frame::Lab, decay, TwoLevelState::ground(), duration, cfg)?;
    Ok(compose(fin.c_g, decay, duration))
}

/// Baseline: static coupling held exactly on resonance.
pub fn run_cz_coherent(
    v_dd: f64,
    units: UnitSystem,
    decay: Option<&DecayRates>,
    duration: f64,
    cfg: &IntegratorConfig,
) -> Result<GateResult> {
    let p = DriveParams::new(v_dd, 0.0, 0.0, 1.0, units)?;
    run_cz_lzs(&p, decay, duration, cfg)
}

/// Two power-law sweeps `delta_k(t) = s1 (t - t_k) + s2 (t - t_k)^5`,
/// the first on `[0, T/2)`, the second on `[T/2, T]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdiabaticPulse {
    pub s1: f64,
    pub s2: f64,
    pub total_t: f64,
    pub t1: f64,
    pub t2: f64,
    pub units: UnitSystem,
}

impl AdiabaticPulse {
    /// Sequences centred at `T/4` and `3T/4`.
    pub fn symmetric(s1: f64, s2: f64, total_t: f64, units: UnitSystem) -> Result<Self> {
        let p = AdiabaticPulse {
            s1,
            s2,
            total_t,
            t1: total_t / 4.0,
            t2: 3.0 * total_t / 4.0,
            units,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s1.is_finite() && self.s2.is_finite()) {
            return Err(Error::invalid("s1/s2", "sweep coefficients must be finite"));
        }
        if !(self.total_t.is_finite()
            && 0.0 < self.t1
            && self.t1 < self.t2
            && self.t2 < self.total_t)
        {
            return Err(Error::invalid(
                "t1/t2/total_t",
                format!(
                    "need 0 < t1 < t2 < total_t, got t1={}, t2={}, total_t={}",
                    self.t1, self.t2, self.total_t
                ),
            ));
        }
        Ok(())
    }

    /// Each sequence lasts `factor` times as long, with its sweep
    /// re-centred inside the stretched interval.
    pub fn with_duration_scale(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::invalid(
                "factor",
                format!("must be > 0, got {factor}"),
            ));
        }
        let p = AdiabaticPulse {
            total_t: self.total_t * factor,
            t1: self.t1 * factor,
            t2: self.t2 * factor,
            ..*self
        };
        p.validate()?;
        Ok(p)
    }

    pub fn delta_at(&self, t: f64) -> f64 {
        let center = if t < self.total_t / 2.0 {
            self.t1
        } else {
            self.t2
        };
        let x = t - center;
        self.s1 * x + self.s2 * x.powi(5)
    }
}

pub fn run_cz_adiabatic(
    pulse: &AdiabaticPulse,
    v_dd: f64,
    decay: Option<&DecayRates>,
    cfg: &IntegratorConfig,
) -> Result<GateResult> {
    pulse.validate()?;
    if !(v_dd > 0.0 && v_dd.is_finite()) {
        return Err(Error::invalid("v_dd", "must be finite and > 0"));
    }
    if let Some(d) = decay {
        pulse.units.check(d.units, "decay rates")?;
    }
    let half = pulse.total_t / 2.0;
    let (t1, t2, s1, s2) = (pulse.t1, pulse.t2, pulse.s1, pulse.s2);
    let first = Conditional::new(
        DetuningProfile {
            v_dd,
            delta: move |t: f64| {
                let x = t - t1;
                s1 * x + s2 * x.powi(5)
            },
        },
        decay,
    );
    let second = Conditional::new(
        DetuningProfile {
            v_dd,
            delta: move |t: f64| {
                let x = t - t2;
                s1 * x + s2 * x.powi(5)
            },
        },
        decay,
    );
    let y0 = TwoLevelState::ground().as_array();
    let mid = integrate(&first, y0, 0.0, half, &cfg.with_sample_interval(half))?;
    let fin = integrate(
        &second,
        mid.final_state,
        half,
        pulse.total_t,
        &cfg.with_sample_interval(pulse.total_t - half),
    )?;
    Ok(compose(fin.final_state[0], decay, pulse.total_t))
}

/// Nominal coherent-gate duration: one full pair-state Rabi cycle.
pub fn coherent_duration(v_dd: f64) -> f64 {
    2.0 * PI / v_dd
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn cfg() -> IntegratorConfig {
        IntegratorConfig::default()
    }

    #[test]
    fn ideal_cz_has_unit_fidelity() {
        let h = Complex64::new(0.5, 0.0);
        let r = GateResult::from_amplitudes([h, h, h, -h]);
        assert_abs_diff_eq!(r.fidelity, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ideal_branch_fidelity(Complex64::new(-1.0, 0.0)), 1.0);
    }

    #[test]
    fn no_phase_gives_quarter() {
        // Far detuned, short: c_g stays near +1.
        let p = DriveParams::rescaled(0.0, 400.0, 1.0).unwrap();
        let r = run_cz_lzs(&p, None, 0.01, &cfg()).unwrap();
        assert_abs_diff_eq!(r.fidelity, 0.25, epsilon = 1e-3);
        assert_abs_diff_eq!(ideal_branch_fidelity(Complex64::new(1.0, 0.0)), 0.25);
    }

    #[test]
    fn coherent_cycle() {
        let full = run_cz_coherent(1.0, UnitSystem::Rescaled, None, 2.0 * PI, &cfg()).unwrap();
        assert_abs_diff_eq!(full.fidelity, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(full.total_population(), 1.0, epsilon = 1e-9);
        let half = run_cz_coherent(1.0, UnitSystem::Rescaled, None, PI, &cfg()).unwrap();
        assert!(half.amp_11.norm() < 1e-9);
        assert_abs_diff_eq!(half.fidelity, 9.0 / 16.0, epsilon = 1e-9);
    }

    #[test]
    fn coherent_timing_error() {
        // Closed form: c_g = cos(V t / 2) on resonance.
        let r = run_cz_coherent(1.0, UnitSystem::Rescaled, None, 2.0 * PI * 1.1, &cfg()).unwrap();
        let c = (PI * 1.1).cos();
        assert_abs_diff_eq!(r.fidelity, (3.0 - c).powi(2) / 16.0, epsilon = 1e-9);
    }

    #[test]
    fn single_branch_decay_convention() {
        let p = DriveParams::rescaled(0.0, 0.0, 1.0).unwrap();
        let mut d = DecayRates::new(0.01, 0.02, UnitSystem::Rescaled).unwrap();
        let off = run_cz_lzs(&p, Some(&d), 2.0 * PI, &cfg()).unwrap();
        assert_eq!(off.amp_01, Complex64::new(0.5, 0.0));
        d.single_atom = Some((0.003, 0.004));
        let on = run_cz_lzs(&p, Some(&d), 2.0 * PI, &cfg()).unwrap();
        assert_abs_diff_eq!(on.amp_01.re, 0.5 * (-0.004 * PI).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(on.amp_10.re, 0.5 * (-0.003 * PI).exp(), epsilon = 1e-15);
        assert_eq!(on.amp_00, Complex64::new(0.5, 0.0));
        assert!(on.fidelity < off.fidelity);
        assert!(off.total_population() < 1.0);
    }

    #[test]
    fn adiabatic_diabatic_limit() {
        // Huge linear rate, no quintic term: the crossing is passed too fast.
        let pulse = AdiabaticPulse::symmetric(-1e4, 0.0, 1.0, UnitSystem::Rescaled).unwrap();
        let r = run_cz_adiabatic(&pulse, 1.0, None, &cfg()).unwrap();
        assert!(r.pair_amplitude().re > 0.99);
        assert_abs_diff_eq!(r.fidelity, 0.25, epsilon = 0.01);
    }

    #[test]
    fn pulse_validation() {
        let bad = AdiabaticPulse {
            s1: 1.0,
            s2: 0.0,
            total_t: 1.0,
            t1: 0.6,
            t2: 0.5,
            units: UnitSystem::Rescaled,
        };
        assert!(bad.validate().is_err());
        let good = AdiabaticPulse::symmetric(1.0, 0.0, 2.0, UnitSystem::Rescaled).unwrap();
        let s = good.with_duration_scale(1.02).unwrap();
        assert_abs_diff_eq!(s.t1, s.total_t / 4.0, epsilon = 1e-15);
        assert!(good.with_duration_scale(-1.0).is_err());
        assert_eq!(good.delta_at(0.5), 0.0);
        assert_eq!(good.delta_at(1.5), 0.0);
    }

    #[test]
    fn json_record() {
        let h = Complex64::new(0.5, 0.0);
        let r = GateResult::from_amplitudes([h, h, h, Complex64::new(-0.25, 0.1)]);
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"amp_11\":[-0.25,0.1]"));
        let back: GateResult = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }

    proptest! {
        #[test]
        fn global_phase_invariance(re in -1.0f64..1.0, im in -1.0f64..1.0, theta in -10.0f64..10.0) {
            let h = Complex64::new(0.5, 0.0);
            let r = GateResult::from_amplitudes([h, h, h, Complex64::new(re, im) * 0.5]);
            prop_assert!((r.with_global_phase(theta).fidelity - r.fidelity).abs() < 1e-12);
        }

        #[test]
        fn fidelity_patches_through_c_g(r in 0.0f64..1.0, arg in -PI..PI) {
            let c = Complex64::from_polar(r, arg);
            let h = Complex64::new(0.5, 0.0);
            let r = GateResult::from_amplitudes([h, h, h, c * 0.5]);
            prop_assert!((r.fidelity - ideal_branch_fidelity(c)).abs() < 1e-12);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&r.fidelity));
        }
    }
}
