//! Material constants, ram geometry and probe-light descriptions shared by
//! the physics modules.
//!
//! Units are SI throughout. Stresses follow the compression-positive
//! convention used by the elasticity module.

use crate::error::{ensure_positive, Error, Result};
use crate::polarization::PolarizationState;

/// Elastic, optical and photoelastic constants of the substrate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    /// Young's modulus E (Pa).
    pub youngs_modulus: f64,
    /// Poisson ratio ν; only enters through the plane-strain out-of-plane stress.
    pub poisson_ratio: f64,
    /// Refractive index n at the probe wavelength.
    pub refractive_index: f64,
    /// Strain-optic coefficient for the field polarized along the stress (ρ_zz).
    pub rho_parallel: f64,
    /// Strain-optic coefficient for the field polarized across the stress (ρ_xz).
    pub rho_perpendicular: f64,
    /// Longitudinal sound speed v (m/s).
    pub sound_speed: f64,
}

impl Material {
    /// Builds a material, checking every physical invariant.
    pub fn new(
        youngs_modulus: f64,
        poisson_ratio: f64,
        refractive_index: f64,
        rho_parallel: f64,
        rho_perpendicular: f64,
        sound_speed: f64,
    ) -> Result<Self> {
        let m = Material {
            youngs_modulus,
            poisson_ratio,
            refractive_index,
            rho_parallel,
            rho_perpendicular,
            sound_speed,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("youngs_modulus", self.youngs_modulus)?;
        if !(self.poisson_ratio.is_finite() && (0.0..0.5).contains(&self.poisson_ratio)) {
            return Err(Error::invalid(
                "poisson_ratio",
                format!("must lie in [0, 0.5), got {}", self.poisson_ratio),
            ));
        }
        if !(self.refractive_index.is_finite() && self.refractive_index > 1.0) {
            return Err(Error::invalid(
                "refractive_index",
                format!("must exceed 1, got {}", self.refractive_index),
            ));
        }
        ensure_positive("rho_perpendicular", self.rho_perpendicular)?;
        if !(self.rho_parallel.is_finite() && self.rho_parallel > self.rho_perpendicular) {
            return Err(Error::invalid(
                "rho_parallel",
                format!(
                    "must exceed rho_perpendicular ({}), got {}",
                    self.rho_perpendicular, self.rho_parallel
                ),
            ));
        }
        ensure_positive("sound_speed", self.sound_speed)?;
        Ok(())
    }

    /// n³, the factor common to every photoelastic expression.
    pub fn n_cubed(&self) -> f64 {
        self.refractive_index.powi(3)
    }

    /// Strain-optic coefficient seen by a field of the given polarization
    /// under vertical stress.
    pub fn rho_for(&self, pol: Polarization) -> f64 {
        match pol {
            Polarization::V => self.rho_parallel,
            Polarization::H => self.rho_perpendicular,
        }
    }
}

impl Default for Material {
    fn default() -> Self {
        default_fused_silica()
    }
}

/// Fused silica at 830 nm.
///
/// Only the strain-optic coefficients (ρ_zz = 0.26, ρ_xz = 0.12) and the
/// sound speed (3000 m/s) are measured values from the strain-optic
/// switching experiment. E = 73 GPa, ν = 0.17 and n = 1.4525 are handbook
/// values for fused silica.
pub fn default_fused_silica() -> Material {
    Material {
        youngs_modulus: 73.0e9,
        poisson_ratio: 0.17,
        refractive_index: 1.4525,
        rho_parallel: 0.26,
        rho_perpendicular: 0.12,
        sound_speed: 3000.0,
    }
}

/// Steel ram pressed onto the chip surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamLoad {
    /// Contact dimension transverse to the waveguide (m).
    pub width: f64,
    /// Contact dimension along the waveguide (m); also the stressed length.
    pub length: f64,
    /// Applied force (N).
    pub force: f64,
}

impl RamLoad {
    pub fn new(width: f64, length: f64, force: f64) -> Result<Self> {
        ensure_positive("width", width)?;
        ensure_positive("length", length)?;
        ensure_positive("force", force)?;
        Ok(RamLoad {
            width,
            length,
            force,
        })
    }

    pub fn half_width(&self) -> f64 {
        0.5 * self.width
    }
}

/// Uniform contact pressure F/(w·l) under the ram.
pub fn ram_pressure(load: &RamLoad) -> Result<f64> {
    ensure_positive("width", load.width)?;
    ensure_positive("length", load.length)?;
    ensure_positive("force", load.force)?;
    Ok(load.force / (load.width * load.length))
}

/// Linear polarization basis of the guide: H along x (transverse, in-plane),
/// V along z (vertical, parallel to the ram force).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub fn state(self) -> PolarizationState {
        match self {
            Polarization::H => PolarizationState::horizontal(),
            Polarization::V => PolarizationState::vertical(),
        }
    }
}

/// Probe light launched into the waveguide.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeLight {
    /// Vacuum wavelength (m).
    pub wavelength: f64,
    pub input: PolarizationState,
}

impl ProbeLight {
    pub fn new(wavelength: f64, polarization: Polarization) -> Result<Self> {
        Self::with_state(wavelength, polarization.state())
    }

    pub fn with_state(wavelength: f64, input: PolarizationState) -> Result<Self> {
        ensure_positive("wavelength", wavelength)?;
        Ok(ProbeLight { wavelength, input })
    }
}

/// Location of a buried waveguide relative to the ram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveguideSite {
    /// Transverse offset from the ram centerline (m).
    pub x: f64,
    /// Depth below the chip surface (m).
    pub z: f64,
}

impl WaveguideSite {
    /// Buried site; rejects z ≤ 0.
    pub fn new(x: f64, z: f64) -> Result<Self> {
        crate::error::ensure_finite("x", x)?;
        ensure_positive("z", z)?;
        Ok(WaveguideSite { x, z })
    }

    /// Unchecked constructor for surface points and sweeps that validate later.
    pub const fn at(x: f64, z: f64) -> Self {
        WaveguideSite { x, z }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn silica_defaults() {
        let m = default_fused_silica();
        assert_eq!(m.rho_parallel, 0.26);
        assert_eq!(m.rho_perpendicular, 0.12);
        assert_eq!(m.sound_speed, 3000.0);
        assert!((m.n_cubed() - 3.0644).abs() < 1e-4);
        m.validate().unwrap();
    }

    #[test]
    fn material_invariants_rejected() {
        let m = default_fused_silica();
        assert!(Material {
            poisson_ratio: 0.5,
            ..m
        }
        .validate()
        .is_err());
        assert!(Material {
            refractive_index: 1.0,
            ..m
        }
        .validate()
        .is_err());
        assert!(Material {
            rho_parallel: 0.1,
            ..m
        }
        .validate()
        .is_err());
        assert!(Material {
            youngs_modulus: 0.0,
            ..m
        }
        .validate()
        .is_err());
        assert!(Material {
            sound_speed: -1.0,
            ..m
        }
        .validate()
        .is_err());
    }

    #[test]
    fn pressure_examples() {
        let unit = RamLoad::new(1.0, 1.0, 1.0).unwrap();
        assert_eq!(ram_pressure(&unit).unwrap(), 1.0);

        let nominal = RamLoad::new(0.1e-3, 1e-3, 20.0).unwrap();
        assert_relative_eq!(ram_pressure(&nominal).unwrap(), 2.0e8, max_relative = 1e-12);

        let quoted = RamLoad::new(0.1e-3, 1e-3, 1.4).unwrap();
        assert_relative_eq!(ram_pressure(&quoted).unwrap(), 1.4e7, max_relative = 1e-12);
    }

    #[test]
    fn bad_ram_rejected() {
        assert!(RamLoad::new(0.0, 1.0, 1.0).is_err());
        assert!(RamLoad::new(1.0, -1.0, 1.0).is_err());
        let raw = RamLoad {
            width: 1.0,
            length: 1.0,
            force: 0.0,
        };
        assert!(ram_pressure(&raw).is_err());
    }

    #[test]
    fn sites_must_be_buried() {
        assert!(WaveguideSite::new(0.0, 0.0).is_err());
        assert!(WaveguideSite::new(0.0, 1e-4).is_ok());
        assert!(ProbeLight::new(0.0, Polarization::H).is_err());
    }

    proptest! {
        #[test]
        fn pressure_scaling(
            f in 0.1f64..100.0, w in 1e-5f64..1e-2, l in 1e-5f64..1e-2,
            k in 0.1f64..10.0,
        ) {
            let base = ram_pressure(&RamLoad::new(w, l, f).unwrap()).unwrap();
            let more_force = ram_pressure(&RamLoad::new(w, l, k * f).unwrap()).unwrap();
            let wider = ram_pressure(&RamLoad::new(k * w, l, f).unwrap()).unwrap();
            let longer = ram_pressure(&RamLoad::new(w, k * l, f).unwrap()).unwrap();
            prop_assert!((more_force / base - k).abs() < 1e-12 * k);
            prop_assert!((wider * k / base - 1.0).abs() < 1e-12);
            prop_assert!((longer * k / base - 1.0).abs() < 1e-12);
        }
    }
}
