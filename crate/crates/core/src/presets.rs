//! Named drive parameter sets and the physical channels.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gate::AdiabaticPulse;
use crate::params::{
    decay_from_lifetimes, vdd_from_channel, DecayRates, DriveParams, PhysicalChannel, UnitSystem,
    CALIBRATED_GEOMETRIC_PREFACTOR,
};
use crate::sweeps::{stark_to_drive, GateScheme, StarkField};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PresetBody {
    /// Drive parameters and a gate duration (`None` when the preset only
    /// describes the drive).
    Drive {
        params: DriveParams,
        duration: Option<f64>,
        channel: Option<PhysicalChannel>,
    },
    Adiabatic {
        pulse: AdiabaticPulse,
        v_dd: f64,
        channel: Option<PhysicalChannel>,
    },
    Stark {
        field: StarkField,
        params: DriveParams,
        duration: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    #[serde(flatten)]
    pub body: PresetBody,
}

impl Preset {
    pub fn params(&self) -> Option<DriveParams> {
        match &self.body {
            PresetBody::Drive { params, .. } | PresetBody::Stark { params, .. } => Some(*params),
            PresetBody::Adiabatic { .. } => None,
        }
    }

    pub fn duration(&self) -> Option<f64> {
        match &self.body {
            PresetBody::Drive { duration, .. } => *duration,
            PresetBody::Stark { duration, .. } => Some(*duration),
            PresetBody::Adiabatic { pulse, .. } => Some(pulse.total_t),
        }
    }

    pub fn channel(&self) -> Option<&PhysicalChannel> {
        match &self.body {
            PresetBody::Drive { channel, .. } | PresetBody::Adiabatic { channel, .. } => {
                channel.as_ref()
            }
            PresetBody::Stark { .. } => None,
        }
    }

    /// Pair-state loss rates derived from the channel lifetimes.
    pub fn decay(&self) -> Option<DecayRates> {
        self.channel().map(decay_from_lifetimes)
    }

    pub fn scheme(&self) -> Result<GateScheme> {
        match &self.body {
            PresetBody::Adiabatic { pulse, v_dd, .. } => Ok(GateScheme::Adiabatic {
                pulse: *pulse,
                v_dd: *v_dd,
            }),
            _ => {
                let params = self.params().expect("drive preset");
                let duration = self.duration().ok_or_else(|| {
                    Error::invalid(
                        "duration",
                        format!("preset `{}` has no gate duration", self.name),
                    )
                })?;
                Ok(GateScheme::Lzs { params, duration })
            }
        }
    }
}

fn rescaled(
    name: &'static str,
    description: &'static str,
    (a, d, w): (f64, f64, f64),
    cycles: Option<f64>,
) -> Preset {
    let params = DriveParams::rescaled(a, d, w).expect("valid preset");
    Preset {
        name,
        description,
        body: PresetBody::Drive {
            params,
            duration: cycles.map(|c| params.duration_for_cycles(c)),
            channel: None,
        },
    }
}

/// Cs `90S + 96S -> 90P + 95P` at `R = 20 um`.
pub fn cs_channel() -> PhysicalChannel {
    PhysicalChannel {
        label: "Cs 90S1/2 + 96S1/2 -> 90P1/2 + 95P1/2".into(),
        c3: -154968.0,
        r: 20.0,
        geometric_prefactor: CALIBRATED_GEOMETRIC_PREFACTOR,
        lifetimes: [270.0, 314.0, 361.0, 406.0],
    }
}

fn cs_drive(
    name: &'static str,
    description: &'static str,
    (a, d, w): (f64, f64, f64),
    duration: Option<f64>,
) -> Preset {
    let ch = cs_channel();
    let v = vdd_from_channel(&ch).expect("valid channel") / (2.0 * PI);
    Preset {
        name,
        description,
        body: PresetBody::Drive {
            params: DriveParams::from_mhz(v, a, d, w).expect("valid preset"),
            duration,
            channel: Some(ch),
        },
    }
}

pub const RB37_OMEGA_MHZ: f64 = 1.0;
pub const RB37_E_DC: f64 = 1.69;
pub const RB37_RF_OVER_DC: f64 = 0.1;
/// Photon order placing `delta0' = m omega` in the (13, 12, 0.75) regime.
pub const RB37_PHOTON_ORDER: u32 = 16;

fn rb37() -> Preset {
    let omega = 2.0 * PI * RB37_OMEGA_MHZ;
    let field = StarkField::back_solved(
        RB37_PHOTON_ORDER,
        omega,
        13.0 / 12.0,
        RB37_E_DC,
        RB37_RF_OVER_DC,
    )
    .expect("valid field");
    let v_dd = field.shifted_defect() / 12.0;
    let params = stark_to_drive(&field, omega, v_dd, UnitSystem::Microsecond).expect("valid drive");
    Preset {
        name: "rb37_stark",
        description:
            "Rb n=37 rf-assisted resonance: omega/2pi = 1 MHz, E_dc = 1.69 V/cm, E_rf/E_dc = 0.1; \
kappa and the bare defect back-solved from delta0' = 16 omega and A'/delta0' = 13/12",
        body: PresetBody::Stark {
            field,
            params,
            duration: params.duration_for_cycles(4.0),
        },
    }
}

/// Every built-in preset, in listing order.
pub fn all() -> Vec<Preset> {
    let adiabatic = AdiabaticPulse::symmetric(
        -10.0 * 2.0 * PI,
        -2600.0 * 2.0 * PI,
        1.8,
        UnitSystem::Microsecond,
    )
    .expect("valid pulse");
    vec![
        rescaled("fig2", "avoided-crossing spectrum, (A, delta0, omega)/V_DD = (10, 5, 1)", (10.0, 5.0, 1.0), None),
        rescaled(
            "fig3",
            "weak driving (4, 20, 20); duration V_DD T = 2pi x 9.5 is the first simulated return of P_g",
            (4.0, 20.0, 20.0),
            Some(9.5),
        ),
        rescaled(
            "fig4_abc",
            "strong driving, fast passage (18, 6, 6); V_DD T = 2pi x 3 from simulation",
            (18.0, 6.0, 6.0),
            Some(3.0),
        ),
        rescaled("fig4_def", "strong driving (18, 6, 3); V_DD T = 2pi x 4, T/tau_d = 12", (18.0, 6.0, 3.0), Some(4.0)),
        rescaled(
            "fig4_ghi",
            "strong driving, slow passage (18, 6, 0.75); V_DD T = 2pi x 20/3, T/tau_d = 5",
            (18.0, 6.0, 0.75),
            Some(20.0 / 3.0),
        ),
        rescaled(
            "fig5_abc",
            "intermediate driving, fast passage (13, 12, 12); V_DD T = 2pi x 25/12 from simulation",
            (13.0, 12.0, 12.0),
            Some(25.0 / 12.0),
        ),
        rescaled(
            "fig5_def",
            "intermediate driving (13, 12, 3); V_DD T = 2pi x 3 from simulation",
            (13.0, 12.0, 3.0),
            Some(3.0),
        ),
        rescaled(
            "fig5_ghi",
            "intermediate driving, slow passage (13, 12, 0.75); V_DD T = 2pi x 4, T/tau_d = 3",
            (13.0, 12.0, 0.75),
            Some(4.0),
        ),
        cs_drive(
            "cs_channel",
            "Cs channel: delta0/2pi = 75.6 MHz, V_DD/2pi = 3.2 MHz at R = 20 um, lifetimes (270, 314, 361, 406) us; \
drive A = 13/12 delta0 at omega = delta0/32",
            (75.6 * 13.0 / 12.0, 75.6, 75.6 / 32.0),
            None,
        ),
        cs_drive(
            "cs_robust",
            "Cs robustness base: (A, delta0, omega)/2pi = (41.6, 38.4, 2.4) MHz, V_DD/2pi = 3.2 MHz, T = 1.25 us",
            (41.6, 38.4, 2.4),
            Some(1.25),
        ),
        cs_drive(
            "cs_robust_caption",
            "Cs robustness base as captioned: (A, delta0, omega)/2pi = (83.2, 76.8, 3.15) MHz, V_DD/2pi = 3.2 MHz, T = 1.25 us",
            (83.2, 76.8, 3.15),
            Some(1.25),
        ),
        Preset {
            name: "adiabatic_beterov",
            description: "double adiabatic passage: s1/2pi = -10 MHz/us, s2/2pi = -2600 MHz/us^5, T = 1.8 us, \
t1 = T/4, t2 = 3T/4, V_DD/2pi = 2.1 MHz",
            body: PresetBody::Adiabatic {
                pulse: adiabatic,
                v_dd: 2.0 * PI * 2.1,
                channel: Some(cs_channel()),
            },
        },
        rb37(),
    ]
}

pub fn find(name: &str) -> Option<Preset> {
    all().into_iter().find(|p| p.name == name)
}

pub fn names() -> Vec<&'static str> {
    all().iter().map(|p| p.name).collect()
}
