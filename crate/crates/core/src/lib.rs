//! Strain-optic phase control simulator.
//!
//! A ram pressing on the surface of a silica chip stresses a buried
//! waveguide. The stress changes the refractive index differently for H and
//! V polarization, which sets the phase of a polarization Mach-Zehnder
//! interferometer (PMZI). The crate models each link of that chain:
//!
//! - [`model`]: material constants, ram geometry, probe light.
//! - [`elasticity`]: line-load and strip-load stress in an elastic half-space.
//! - [`photoelastics`]: stress to index change to polarization phase.
//! - [`polarization`]: Jones matrices and the PMZI transfer function.
//! - [`quantum`]: two-photon interference through the same PMZI.
//! - [`dynamics`]: actuator step response and switching transients.
//! - [`experiments`]: config-driven scenarios that write CSV, SVG and a manifest.

pub mod dynamics;
pub mod elasticity;
pub mod error;
pub mod experiments;
pub mod model;
pub mod photoelastics;
pub mod polarization;
pub mod quantum;

pub use error::{Error, Result};
