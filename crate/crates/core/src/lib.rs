//! Periodically driven Foerster resonance between two Rydberg pair states:
//! two-level dynamics, CZ gate composition and robustness scans.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod gate;
pub mod hamiltonians;
pub mod io;
pub mod numerics;
pub mod params;
pub mod presets;
pub mod sweeps;

pub use error::{Error, Result};
pub use params::{DecayRates, DriveParams, PhysicalChannel, TwoLevelState, UnitSystem};
