//! Scenario configuration file (TOML).
//!
//! Parsing is strict: unknown keys and missing keys are errors, reported
//! with their line and column. The only table with a fallback is
//! `[material]`, which defaults to fused silica.

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::dynamics::{DriveKind, DriveWaveform};
use crate::error::{Error, Result};
use crate::model::{default_fused_silica, Material, Polarization, ProbeLight, RamLoad};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub material: Option<MaterialTable>,
    pub ram: Option<RamTable>,
    pub probe: Option<ProbeTable>,
    pub output: Option<OutputTable>,
    pub fringe: Option<FringeTable>,
    pub crosstalk: Option<CrosstalkTable>,
    pub hom: Option<HomTable>,
    pub transient: Option<TransientTable>,
    pub field: Option<FieldTable>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialTable {
    pub youngs_modulus_pa: f64,
    pub poisson_ratio: f64,
    pub refractive_index: f64,
    pub rho_parallel: f64,
    pub rho_perpendicular: f64,
    pub sound_speed_m_s: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RamTable {
    pub width_m: f64,
    pub length_m: f64,
    pub force_n: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum PolarizationKey {
    H,
    V,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeTable {
    pub wavelength_m: f64,
    pub polarization: PolarizationKey,
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputTable {
    /// Also write SVG plots.
    #[serde(default)]
    pub svg: bool,
    /// Keep every n-th transient sample in the CSV.
    pub csv_stride: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FringeTable {
    pub delta_theta_start_rad: f64,
    pub delta_theta_stop_rad: f64,
    pub samples: usize,
    /// Background added to both ports; reduces visibility to (1−2f).
    pub intensity_floor: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrosstalkTable {
    /// Depth scan on the ram centerline.
    pub depths_m: Vec<f64>,
    /// Transverse scan at `transverse_depth_m`.
    pub transverse_offsets_m: Vec<f64>,
    pub transverse_depth_m: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldTable {
    pub x_min_m: f64,
    pub x_max_m: f64,
    pub z_min_m: f64,
    pub z_max_m: f64,
    pub x_samples: usize,
    pub z_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomTable {
    pub coherence_time_s: f64,
    pub delay_start_s: f64,
    pub delay_stop_s: f64,
    pub delay_samples: usize,
    pub delta_theta_start_rad: f64,
    pub delta_theta_stop_rad: f64,
    pub delta_theta_samples: usize,
    /// Photon delay used for the phase scan.
    pub phase_scan_delay_s: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransientTable {
    pub duration_s: f64,
    pub time_step_s: f64,
    pub trigger_delay_s: f64,
    /// Drive voltage producing a π differential phase at steady state.
    pub pi_voltage_v: f64,
    pub max_voltage_v: f64,
    pub settling_band: f64,
    /// Mode diameter for the acoustic transit-time limit.
    pub mode_diameter_m: f64,
    pub drive: DriveTable,
    pub calibration: Option<CalibrationTable>,
    pub model: Option<ModelTable>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DriveKindKey {
    Step,
    Square,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveTable {
    pub kind: DriveKindKey,
    pub high_voltage_v: f64,
    pub switch_times_s: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationTable {
    pub target_rise_time_s: f64,
    pub target_settling_time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelTable {
    pub natural_frequency_rad_s: f64,
    pub damping_ratio: f64,
}

fn config_err(table: &str, e: Error) -> Error {
    match e {
        Error::InvalidParameter { name, reason } => {
            Error::Config(format!("[{table}] {name}: {reason}"))
        }
        other => other,
    }
}

fn missing(table: &str) -> Error {
    Error::Config(format!("missing table [{table}]"))
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<(Self, String)> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let config = Self::parse(&text)?;
        Ok((config, hash_text(&text)))
    }

    pub fn material(&self) -> Result<Material> {
        match &self.material {
            None => Ok(default_fused_silica()),
            Some(t) => Material::new(
                t.youngs_modulus_pa,
                t.poisson_ratio,
                t.refractive_index,
                t.rho_parallel,
                t.rho_perpendicular,
                t.sound_speed_m_s,
            )
            .map_err(|e| config_err("material", e)),
        }
    }

    pub fn ram(&self) -> Result<RamLoad> {
        let t = self.ram.as_ref().ok_or_else(|| missing("ram"))?;
        RamLoad::new(t.width_m, t.length_m, t.force_n).map_err(|e| config_err("ram", e))
    }

    pub fn probe(&self) -> Result<ProbeLight> {
        let t = self.probe.as_ref().ok_or_else(|| missing("probe"))?;
        let pol = match t.polarization {
            PolarizationKey::H => Polarization::H,
            PolarizationKey::V => Polarization::V,
        };
        ProbeLight::new(t.wavelength_m, pol).map_err(|e| config_err("probe", e))
    }

    pub fn output(&self) -> OutputTable {
        self.output.clone().unwrap_or_default()
    }

    pub fn fringe(&self) -> Result<&FringeTable> {
        self.fringe.as_ref().ok_or_else(|| missing("fringe"))
    }

    pub fn crosstalk(&self) -> Result<&CrosstalkTable> {
        self.crosstalk.as_ref().ok_or_else(|| missing("crosstalk"))
    }

    pub fn hom(&self) -> Result<&HomTable> {
        self.hom.as_ref().ok_or_else(|| missing("hom"))
    }

    pub fn transient(&self) -> Result<&TransientTable> {
        self.transient.as_ref().ok_or_else(|| missing("transient"))
    }

    pub fn field(&self) -> Result<&FieldTable> {
        self.field.as_ref().ok_or_else(|| missing("field"))
    }
}

impl TransientTable {
    pub fn drive(&self) -> Result<DriveWaveform> {
        let drive = DriveWaveform {
            kind: match self.drive.kind {
                DriveKindKey::Step => DriveKind::Step,
                DriveKindKey::Square => DriveKind::Square,
            },
            high_voltage: self.drive.high_voltage_v,
            switch_times: self.drive.switch_times_s.clone(),
        };
        drive
            .validate(self.max_voltage_v)
            .map_err(|e| config_err("transient.drive", e))?;
        Ok(drive)
    }
}

/// Hex SHA-256 of the config text.
pub fn hash_text(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}
