//! Special functions and ODE integration.

pub mod bessel;
pub mod ode;
pub mod phase;

pub use bessel::{bessel_j, bessel_j_orders, BESSEL_MAX_ARG, BESSEL_MAX_ORDER};
pub use ode::{integrate, Generator, IntegratorConfig, Method, Sample, Solution};
pub use phase::{unwrap_phase, wrap_to_pi};
