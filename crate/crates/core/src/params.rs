//! Drive parameters, two-level states, decay rates and Rydberg channel data.
//!
//! Every frequency is an angular frequency. Two unit systems are in use:
//! [`UnitSystem::Rescaled`] (the dipole-dipole coupling sets the scale,
//! usually `v_dd = 1`, time is the rescaled `V_DD t`) and
//! [`UnitSystem::Microsecond`] (rad/us and us). Values carry their unit tag
//! and operations that combine them reject a mismatch.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitSystem {
    /// Frequencies in units of a reference coupling, time in inverse units.
    Rescaled,
    /// Angular frequencies in rad/us, time in us.
    Microsecond,
}

impl UnitSystem {
    pub fn check(self, other: UnitSystem, what: &str) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::UnitMismatch(format!(
                "{what}: {self:?} combined with {other:?}"
            )))
        }
    }
}

/// Periodic modulation of the Foerster defect,
/// `delta(t) = delta0 + a cos(omega t + phi)`, together with the fixed
/// dipole-dipole coupling `v_dd`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveParams {
    pub v_dd: f64,
    pub a: f64,
    pub delta0: f64,
    pub omega: f64,
    #[serde(default)]
    pub phi: f64,
    pub units: UnitSystem,
}

impl DriveParams {
    pub fn new(v_dd: f64, a: f64, delta0: f64, omega: f64, units: UnitSystem) -> Result<Self> {
        let p = DriveParams {
            v_dd,
            a,
            delta0,
            omega,
            phi: 0.0,
            units,
        };
        p.validate()?;
        Ok(p)
    }

    /// `(A, delta0, omega) / V_DD` with `V_DD = 1`.
    pub fn rescaled(a: f64, delta0: f64, omega: f64) -> Result<Self> {
        Self::new(1.0, a, delta0, omega, UnitSystem::Rescaled)
    }

    /// Physical parameters given as ordinary frequencies `f/2pi` in MHz.
    pub fn from_mhz(v_dd: f64, a: f64, delta0: f64, omega: f64) -> Result<Self> {
        let w = 2.0 * PI;
        Self::new(
            w * v_dd,
            w * a,
            w * delta0,
            w * omega,
            UnitSystem::Microsecond,
        )
    }

    pub fn with_phase(mut self, phi: f64) -> Self {
        self.phi = phi;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("v_dd", self.v_dd),
            ("a", self.a),
            ("delta0", self.delta0),
            ("omega", self.omega),
            ("phi", self.phi),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(name, format!("must be finite, got {v}")));
            }
        }
        if self.v_dd <= 0.0 {
            return Err(Error::invalid("v_dd", "must be > 0"));
        }
        if self.omega <= 0.0 {
            return Err(Error::invalid("omega", "must be > 0"));
        }
        Ok(())
    }

    /// Instantaneous Foerster defect.
    pub fn delta_at(&self, t: f64) -> f64 {
        self.delta0 + self.a * (self.omega * t + self.phi).cos()
    }

    /// Drive period `2pi / omega`.
    pub fn drive_period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    /// Modulation index `A / omega` entering the Bessel harmonics.
    pub fn modulation_index(&self) -> f64 {
        self.a / self.omega
    }

    /// Duration `T` with `V_DD T = 2pi * cycles`.
    pub fn duration_for_cycles(&self, cycles: f64) -> f64 {
        2.0 * PI * cycles / self.v_dd
    }
}

/// `delta(t) = delta0 + A cos(omega t + phi)`.
pub fn delta_of_t(p: &DriveParams, t: f64) -> f64 {
    p.delta_at(t)
}

/// Amplitudes on `|g> = |r>|r>` and the symmetric pair state `|e>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelState {
    pub c_g: Complex64,
    pub c_e: Complex64,
}

impl TwoLevelState {
    pub fn new(c_g: Complex64, c_e: Complex64) -> Self {
        TwoLevelState { c_g, c_e }
    }

    pub fn ground() -> Self {
        TwoLevelState::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn excited() -> Self {
        TwoLevelState::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    }

    pub fn p_g(&self) -> f64 {
        self.c_g.norm_sqr()
    }

    pub fn p_e(&self) -> f64 {
        self.c_e.norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.p_g() + self.p_e()
    }

    pub fn as_array(&self) -> [Complex64; 2] {
        [self.c_g, self.c_e]
    }

    pub fn from_array(y: [Complex64; 2]) -> Self {
        TwoLevelState::new(y[0], y[1])
    }
}

/// Loss rates entering the conditional Hamiltonian.
///
/// `gamma_g` and `gamma_e` are the summed single-atom rates of the Rydberg
/// states composing `|g>` and `|e>`. `single_atom` optionally holds the
/// rates `(atom 1, atom 2)` of the singly excited branches of the gate;
/// when `None` those branches are lossless.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayRates {
    pub gamma_g: f64,
    pub gamma_e: f64,
    #[serde(default)]
    pub single_atom: Option<(f64, f64)>,
    pub units: UnitSystem,
}

impl DecayRates {
    pub fn new(gamma_g: f64, gamma_e: f64, units: UnitSystem) -> Result<Self> {
        if !(gamma_g >= 0.0 && gamma_g.is_finite()) {
            return Err(Error::invalid("gamma_g", "must be finite and >= 0"));
        }
        if !(gamma_e >= 0.0 && gamma_e.is_finite()) {
            return Err(Error::invalid("gamma_e", "must be finite and >= 0"));
        }
        Ok(DecayRates {
            gamma_g,
            gamma_e,
            single_atom: None,
            units,
        })
    }

    /// Also decay the singly excited gate branches, with atom 1 in the
    /// first S state and atom 2 in the second S state of the channel.
    pub fn with_single_atom(mut self, ch: &PhysicalChannel) -> Self {
        let [s1, s2, _, _] = ch.lifetimes;
        self.single_atom = Some((1.0 / s1, 1.0 / s2));
        self
    }
}

/// Foerster channel data: dispersion coefficient, distance and lifetimes
/// `[S1, S2, P1, P2]` in us. `c3` is in MHz um^3 and `r` in um.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalChannel {
    pub label: String,
    pub c3: f64,
    pub r: f64,
    pub geometric_prefactor: f64,
    pub lifetimes: [f64; 4],
}

/// Prefactor that maps `C3 = -154968 MHz um^3` at `R = 20 um` onto
/// `V_DD / 2pi = 3.2 MHz`.
pub const CALIBRATED_GEOMETRIC_PREFACTOR: f64 = 3.2 * 8000.0 / 154968.0;

impl PhysicalChannel {
    pub fn validate(&self) -> Result<()> {
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(Error::invalid("r", "interatomic distance must be > 0"));
        }
        if !(self.c3.is_finite() && self.c3 != 0.0) {
            return Err(Error::invalid("c3", "must be finite and nonzero"));
        }
        if !(self.geometric_prefactor > 0.0 && self.geometric_prefactor.is_finite()) {
            return Err(Error::invalid("geometric_prefactor", "must be > 0"));
        }
        if self.lifetimes.iter().any(|&t| !(t > 0.0)) {
            return Err(Error::invalid("lifetimes", "all lifetimes must be > 0"));
        }
        Ok(())
    }
}

/// `V_DD = 2pi * prefactor * |C3| / R^3` in rad/us.
pub fn vdd_from_channel(ch: &PhysicalChannel) -> Result<f64> {
    ch.validate()?;
    Ok(2.0 * PI * ch.geometric_prefactor * ch.c3.abs() / ch.r.powi(3))
}

/// Pair-state loss rates in 1/us from the four lifetimes.
pub fn decay_from_lifetimes(ch: &PhysicalChannel) -> DecayRates {
    let [s1, s2, p1, p2] = ch.lifetimes;
    DecayRates {
        gamma_g: 1.0 / s1 + 1.0 / s2,
        gamma_e: 1.0 / p1 + 1.0 / p2,
        single_atom: None,
        units: UnitSystem::Microsecond,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cs() -> PhysicalChannel {
        PhysicalChannel {
            label: "cs".into(),
            c3: -154968.0,
            r: 20.0,
            geometric_prefactor: CALIBRATED_GEOMETRIC_PREFACTOR,
            lifetimes: [270.0, 314.0, 361.0, 406.0],
        }
    }

    #[test]
    fn delta_examples() {
        let p = DriveParams::rescaled(0.0, 5.0, 3.0).unwrap();
        assert_eq!(delta_of_t(&p, 1.0), 5.0);
        let p = DriveParams::rescaled(10.0, 5.0, 1.0).unwrap();
        assert_eq!(delta_of_t(&p, 0.0), 15.0);
        assert_relative_eq!(delta_of_t(&p, PI), -5.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_bad_drive() {
        assert!(DriveParams::rescaled(1.0, 1.0, 0.0).is_err());
        assert!(DriveParams::new(0.0, 1.0, 1.0, 1.0, UnitSystem::Rescaled).is_err());
        assert!(DriveParams::rescaled(f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn vdd_examples() {
        let v = vdd_from_channel(&cs()).unwrap();
        assert_relative_eq!(v / (2.0 * PI), 3.2, epsilon = 1e-12);

        let mut ch = cs();
        ch.geometric_prefactor = 1.0;
        ch.c3 = -8000.0;
        assert_relative_eq!(
            vdd_from_channel(&ch).unwrap() / (2.0 * PI),
            1.0,
            epsilon = 1e-12
        );

        let mut far = cs();
        far.r = 40.0;
        assert_relative_eq!(
            vdd_from_channel(&far).unwrap() * 8.0,
            vdd_from_channel(&cs()).unwrap(),
            epsilon = 1e-12
        );

        let mut zero = cs();
        zero.r = 0.0;
        assert!(vdd_from_channel(&zero).is_err());
    }

    #[test]
    fn decay_examples() {
        let d = decay_from_lifetimes(&cs());
        assert_relative_eq!(d.gamma_g, 1.0 / 270.0 + 1.0 / 314.0, epsilon = 1e-15);
        assert!((d.gamma_g - 0.006888).abs() < 1e-6);
        assert_relative_eq!(d.gamma_e, 1.0 / 361.0 + 1.0 / 406.0, epsilon = 1e-15);

        let mut ch = cs();
        ch.lifetimes = [f64::INFINITY; 4];
        let d = decay_from_lifetimes(&ch);
        assert_eq!((d.gamma_g, d.gamma_e), (0.0, 0.0));

        ch.lifetimes = [100.0; 4];
        let d = decay_from_lifetimes(&ch);
        assert_relative_eq!(d.gamma_g, 0.02);
        assert_relative_eq!(d.gamma_e, 0.02);
    }

    #[test]
    fn unit_mismatch_is_reported() {
        assert!(UnitSystem::Rescaled
            .check(UnitSystem::Microsecond, "decay")
            .is_err());
        assert!(UnitSystem::Rescaled
            .check(UnitSystem::Rescaled, "decay")
            .is_ok());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn delta_is_periodic_and_bounded(
                a in 0.0..50.0f64, d0 in -50.0..50.0f64, w in 0.1..30.0f64,
                phi in -3.0..3.0f64, t in 0.0..100.0f64,
            ) {
                let p = DriveParams::rescaled(a, d0, w).unwrap().with_phase(phi);
                let d = delta_of_t(&p, t);
                let shifted = delta_of_t(&p, t + p.drive_period());
                prop_assert!((d - shifted).abs() <= 1e-12 * (1.0 + a + d0.abs()) * (1.0 + t));
                prop_assert!(d <= d0 + a + 1e-12 && d >= d0 - a - 1e-12);
            }

            #[test]
            fn vdd_strictly_decreasing_in_r(r in 1.0..100.0f64, dr in 0.01..10.0f64) {
                let mut ch = cs();
                ch.r = r;
                let near = vdd_from_channel(&ch).unwrap();
                ch.r = r + dr;
                prop_assert!(vdd_from_channel(&ch).unwrap() < near);
            }
        }
    }
}
