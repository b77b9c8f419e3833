//! Named scenarios that regenerate each figure-style data set, plus file
//! emission and the run manifest.
//!
//! Each `run_*` function is pure: it turns a config into tables, metrics and
//! notes. [`write_outputs`] puts them on disk under `<out>/<scenario>/`.

pub mod config;
pub mod svg;
pub mod table;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::dynamics::{
    acoustic_rise_limit, calibrate_with_settling, gain_for_phase, optical_transient, ActuatorModel,
};
use crate::elasticity::{linspace, sample_field, strip_load_stress};
use crate::error::{Error, Result};
use crate::model::{ram_pressure, WaveguideSite};
use crate::photoelastics::{
    index_change_full, phase_from_index, stress_for_differential_phase, PhaseShift,
};
use crate::polarization::{fringe_visibility, pmzi_transfer};
use crate::quantum::{
    fundamental_period, hom_dip, midline_crossings, quantum_fringe_scan, WavepacketOverlap,
};

use self::config::ScenarioConfig;
use self::svg::{emit_svg, PlotSpec};
use self::table::Table;

pub const TOOL_VERSION: &str = concat!("strainsim ", env!("CARGO_PKG_VERSION"));
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scenario {
    Fringe,
    Crosstalk,
    Hom,
    Transient,
    Field,
}

impl Scenario {
    pub const ALL: [Scenario; 5] = [
        Scenario::Fringe,
        Scenario::Crosstalk,
        Scenario::Hom,
        Scenario::Transient,
        Scenario::Field,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Fringe => "fringe",
            Scenario::Crosstalk => "crosstalk",
            Scenario::Hom => "hom",
            Scenario::Transient => "transient",
            Scenario::Field => "field",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown scenario `{s}`")))
    }
}

/// One CSV file and, optionally, a plot of it.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub stem: String,
    pub table: Table,
    pub plot: Option<PlotSpec>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScenarioOutput {
    pub datasets: Vec<Dataset>,
    pub metrics: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl ScenarioOutput {
    fn dataset(&mut self, stem: &str, table: Table, plot: Option<PlotSpec>) {
        self.datasets.push(Dataset {
            stem: stem.to_string(),
            table,
            plot,
        });
    }

    fn metric(&mut self, name: &str, value: f64) {
        self.metrics.insert(name.to_string(), value);
    }

    pub fn table(&self, stem: &str) -> Option<&Table> {
        self.datasets
            .iter()
            .find(|d| d.stem == stem)
            .map(|d| &d.table)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub scenario: String,
    pub config_sha256: String,
    pub tool_version: String,
    pub files: Vec<String>,
    pub metrics: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

pub fn run(scenario: Scenario, config: &ScenarioConfig) -> Result<ScenarioOutput> {
    match scenario {
        Scenario::Fringe => run_fringe(config),
        Scenario::Crosstalk => run_crosstalk(config),
        Scenario::Hom => run_hom(config),
        Scenario::Transient => run_transient(config),
        Scenario::Field => run_field(config),
    }
}

/// Classical PMZI fringe over a Δθ sweep, with the matching waveguide stress.
pub fn run_fringe(config: &ScenarioConfig) -> Result<ScenarioOutput> {
    let f = config.fringe()?;
    let material = config.material()?;
    let probe = config.probe()?;
    let ram = config.ram()?;
    if !(0.0..0.5).contains(&f.intensity_floor) {
        return Err(Error::Config(format!(
            "[fringe] intensity_floor must lie in [0, 0.5), got {}",
            f.intensity_floor
        )));
    }
    let thetas = linspace(
        "delta_theta",
        f.delta_theta_start_rad,
        f.delta_theta_stop_rad,
        f.samples,
    )
    .map_err(|e| Error::Config(format!("[fringe] {e}")))?;
    let input = probe.input.normalized()?;

    let mut table = Table::new(&[
        "delta_theta_rad",
        "sigma_z_pa",
        "intensity_port1",
        "intensity_port2",
    ]);
    for &d in &thetas {
        let sigma = stress_for_differential_phase(d, &probe, ram.length, &material)?;
        let [p1, p2] = pmzi_transfer(&PhaseShift::differential(d, ram.length))
            .apply(&input)
            .mode_intensities();
        let floor = f.intensity_floor;
        table.push(vec![
            d,
            sigma,
            floor + (1.0 - 2.0 * floor) * p1,
            floor + (1.0 - 2.0 * floor) * p2,
        ]);
    }
    let mut out = ScenarioOutput::default();
    out.metric(
        "visibility_port1",
        fringe_visibility(&table.column("intensity_port1")?)?,
    );
    out.metric(
        "visibility_port2",
        fringe_visibility(&table.column("intensity_port2")?)?,
    );
    out.metric(
        "pi_stress_pa",
        stress_for_differential_phase(PI, &probe, ram.length, &material)?,
    );
    out.notes.push(
        "sigma_z_pa is the vertical stress at the waveguide; the ram force that produces it depends on \
         the waveguide depth (centerline stress / contact pressure from the field scenario)"
            .into(),
    );
    let plot = PlotSpec::new(
        "PMZI output vs differential phase",
        "delta_theta_rad",
        &["intensity_port1", "intensity_port2"],
        "normalized intensity",
    );
    out.dataset("fringe", table, Some(plot));
    Ok(out)
}

/// Lab-frame H/V relative phase at each site, normalized to the site
/// directly below the ram at a depth of one ram width.
pub fn run_crosstalk(config: &ScenarioConfig) -> Result<ScenarioOutput> {
    let c = config.crosstalk()?;
    let material = config.material()?;
    let probe = config.probe()?;
    let ram = config.ram()?;
    if c.depths_m.is_empty() && c.transverse_offsets_m.is_empty() {
        return Err(Error::Config("[crosstalk] no waveguide sites given".into()));
    }
    let pressure = ram_pressure(&ram)?;
    let half_width = ram.half_width();

    let relative_phase = |x: f64, z: f64| -> Result<f64> {
        let site = WaveguideSite::new(x, z).map_err(|_| {
            Error::Config(format!(
                "[crosstalk] site ({x}, {z}) is not below the surface"
            ))
        })?;
        let stress = strip_load_stress(pressure, half_width, site, material.poisson_ratio)?;
        let dn = index_change_full(&stress, &material)?;
        Ok(phase_from_index(&dn, ram.length, probe.wavelength)?.delta_theta)
    };
    let anchor = relative_phase(0.0, ram.width)?;

    let mut out = ScenarioOutput::default();
    let mut scan = |stem: &str, sites: Vec<(f64, f64)>, x_col: &str| -> Result<()> {
        let mut table = Table::new(&["x_m", "z_m", "relative_phase_rad", "normalized"]);
        for (x, z) in sites {
            let phase = relative_phase(x, z)?;
            table.push(vec![x, z, phase, phase / anchor]);
        }
        let plot = PlotSpec::new(stem, x_col, &["normalized"], "normalized relative phase");
        out.dataset(stem, table, Some(plot));
        Ok(())
    };
    if !c.depths_m.is_empty() {
        scan(
            "crosstalk_depth",
            c.depths_m.iter().map(|&z| (0.0, z)).collect(),
            "z_m",
        )?;
    }
    if !c.transverse_offsets_m.is_empty() {
        let z = c.transverse_depth_m;
        scan(
            "crosstalk_transverse",
            c.transverse_offsets_m.iter().map(|&x| (x, z)).collect(),
            "x_m",
        )?;
    }
    out.metric("anchor_relative_phase_rad", anchor);
    out.metric(
        "normalized_at_2w_depth_w",
        relative_phase(2.0 * ram.width, ram.width)? / anchor,
    );
    // σ_zz − σ_xx vanishes where (x + a)(x − a) = z²
    let sign_change = (half_width * half_width + ram.width * ram.width).sqrt();
    out.metric("lab_frame_sign_change_offset_m", sign_change);
    out.notes.push(format!(
        "the lab-frame relative phase at depth w changes sign at |x| = sqrt(a^2 + w^2) = {sign_change:.4e} m \
         and is not monotonic in |x| beyond that offset"
    ));
    Ok(out)
}

/// HOM delay scan at the 50:50 setting and the two-photon phase scan.
pub fn run_hom(config: &ScenarioConfig) -> Result<ScenarioOutput> {
    let h = config.hom()?;
    if !(h.coherence_time_s.is_finite() && h.coherence_time_s > 0.0) {
        return Err(Error::Config(format!(
            "[hom] coherence_time_s must be > 0, got {}",
            h.coherence_time_s
        )));
    }
    let delays = linspace("delay", h.delay_start_s, h.delay_stop_s, h.delay_samples)
        .map_err(|e| Error::Config(format!("[hom] {e}")))?;
    let thetas = linspace(
        "delta_theta",
        h.delta_theta_start_rad,
        h.delta_theta_stop_rad,
        h.delta_theta_samples,
    )
    .map_err(|e| Error::Config(format!("[hom] {e}")))?;

    let mut out = ScenarioOutput::default();
    let mut dip = Table::new(&["delay_s", "coincidence_prob"]);
    for &d in &delays {
        dip.push(vec![d, hom_dip(d, h.coherence_time_s)?]);
    }
    let dip_values = dip.column("coincidence_prob")?;
    out.metric(
        "dip_minimum",
        dip_values.iter().copied().fold(f64::INFINITY, f64::min),
    );
    out.metric(
        "dip_baseline",
        dip_values[0].max(dip_values[dip_values.len() - 1]),
    );

    let overlap = WavepacketOverlap::from_delay(h.phase_scan_delay_s, h.coherence_time_s)?;
    let scan = quantum_fringe_scan(&thetas, overlap)?;
    let mut phase = Table::new(&["delta_theta_rad", "coincidence_prob", "classical_intensity"]);
    for s in &scan {
        phase.push(vec![s.delta_theta, s.coincidence, s.classical]);
    }
    let cc = phase.column("coincidence_prob")?;
    let cl = phase.column("classical_intensity")?;
    out.metric("phase_scan_overlap", overlap.value());
    out.metric(
        "coincidence_crossings",
        midline_crossings(&thetas, &cc).len() as f64,
    );
    out.metric(
        "classical_crossings",
        midline_crossings(&thetas, &cl).len() as f64,
    );
    if let Some(p) = fundamental_period(&thetas, &cc) {
        out.metric("coincidence_period_rad", p);
    }
    if let Some(p) = fundamental_period(&thetas, &cl) {
        out.metric("classical_period_rad", p);
    }
    out.metric("coincidence_visibility", fringe_visibility(&cc)?);

    out.dataset(
        "hom_delay",
        dip,
        Some(PlotSpec::new(
            "HOM dip",
            "delay_s",
            &["coincidence_prob"],
            "coincidence probability",
        )),
    );
    out.dataset(
        "hom_phase",
        phase,
        Some(PlotSpec::new(
            "Two-photon vs classical fringe",
            "delta_theta_rad",
            &["coincidence_prob", "classical_intensity"],
            "probability / intensity",
        )),
    );
    Ok(out)
}

/// Switching transient of the calibrated (or explicit) actuator model.
pub fn run_transient(config: &ScenarioConfig) -> Result<ScenarioOutput> {
    let t = config.transient()?;
    let material = config.material()?;
    let probe = config.probe()?;
    let ram = config.ram()?;
    let drive = t.drive()?;
    let stride = config.output().csv_stride.unwrap_or(1);
    if stride == 0 {
        return Err(Error::Config("[output] csv_stride must be >= 1".into()));
    }

    let base = match (&t.calibration, &t.model) {
        (Some(c), None) => calibrate_with_settling(
            c.target_rise_time_s,
            c.target_settling_time_s,
            t.settling_band,
        )
        .map_err(|e| match e {
            Error::InvalidParameter { name, reason } => {
                Error::Config(format!("[transient.calibration] {name}: {reason}"))
            }
            other => other,
        })?,
        (None, Some(m)) => ActuatorModel::new(m.natural_frequency_rad_s, m.damping_ratio, 1.0, 0.0)
            .map_err(|e| Error::Config(format!("[transient.model] {e}")))?,
        _ => {
            return Err(Error::Config(
                "[transient] needs exactly one of [transient.calibration] or [transient.model]"
                    .into(),
            ))
        }
    };
    let gain = gain_for_phase(PI, t.pi_voltage_v, &probe, ram.length, &material)
        .map_err(|e| Error::Config(format!("[transient] {e}")))?;
    if !(t.trigger_delay_s.is_finite() && t.trigger_delay_s >= 0.0) {
        return Err(Error::Config(
            "[transient] trigger_delay_s must be >= 0".into(),
        ));
    }
    let model = base.with_gain(gain).with_delay(t.trigger_delay_s);

    let transient = optical_transient(
        &model,
        &drive,
        &probe,
        ram.length,
        &material,
        t.duration_s,
        t.time_step_s,
    )?;
    let trace = &transient.trace;

    let mut out = ScenarioOutput::default();
    out.metric("natural_frequency_rad_s", model.natural_frequency);
    out.metric("damping_ratio", model.damping_ratio);
    out.metric("stress_gain_pa_per_v", model.stress_gain);
    if let Some(d) = trace.trigger_delay(drive.first_switch()) {
        out.metric("trigger_delay_s", d);
    }
    out.metric("rise_time_s", trace.rise_time_10_90()?);
    match trace.settling_time(t.settling_band)? {
        Some(s) => out.metric("settling_time_s", s),
        None => out
            .notes
            .push("stress has not settled within the simulated duration".into()),
    }
    let limit = acoustic_rise_limit(t.mode_diameter_m, material.sound_speed)
        .map_err(|e| Error::Config(format!("[transient] {e}")))?;
    out.metric("acoustic_rise_limit_s", limit);
    out.notes.push(format!(
        "acoustic rise limit d/v = {limit:.4e} s; the 5 ns estimate often quoted for a 10 um mode at 3000 m/s \
         corresponds to d = 15 um, not 10 um"
    ));
    out.notes.push(
        "reset time is represented by the 2% settling time; reported reset times of 1 ms and 1.5 ms bracket it"
            .into(),
    );
    out.dataset(
        "transient",
        transient.to_table(stride),
        Some(PlotSpec::new(
            "PMZI switching transient",
            "time_s",
            &["intensity_h", "intensity_v"],
            "port transmission",
        )),
    );
    Ok(out)
}

/// Strip-load stress field under the ram, for contour plotting.
pub fn run_field(config: &ScenarioConfig) -> Result<ScenarioOutput> {
    let f = config.field()?;
    let material = config.material()?;
    let ram = config.ram()?;
    let pressure = ram_pressure(&ram)?;
    let grid = sample_field(
        pressure,
        ram.half_width(),
        material.poisson_ratio,
        (f.x_min_m, f.x_max_m),
        (f.z_min_m, f.z_max_m),
        (f.x_samples, f.z_samples),
    )
    .map_err(|e| match e {
        Error::InvalidParameter { name, reason } => {
            Error::Config(format!("[field] {name}: {reason}"))
        }
        other => other,
    })?;
    let mut out = ScenarioOutput::default();
    out.metric("contact_pressure_pa", pressure);
    let centerline = strip_load_stress(
        pressure,
        ram.half_width(),
        WaveguideSite::at(0.0, ram.width),
        material.poisson_ratio,
    )?;
    out.metric(
        "centerline_sigma_zz_ratio_at_depth_w",
        centerline.sigma_zz / pressure,
    );
    out.notes.push(format!(
        "half-space strip model gives sigma_zz/p = {:.4} on the centerline at depth w (a finite-element \
         estimate of about 0.8 has been reported for the physical device)",
        centerline.sigma_zz / pressure
    ));
    out.dataset("field", grid.to_table(), None);
    Ok(out)
}

/// Writes CSV (and SVG when requested) plus `manifest.json` into
/// `<out_dir>/<scenario>/`.
pub fn write_outputs(
    scenario: Scenario,
    output: &ScenarioOutput,
    config_sha256: &str,
    out_dir: &Path,
    svg: bool,
) -> Result<RunManifest> {
    let dir = out_dir.join(scenario.name());
    std::fs::create_dir_all(&dir)?;
    let mut files = Vec::new();
    for d in &output.datasets {
        let csv_name = format!("{}.csv", d.stem);
        std::fs::write(dir.join(&csv_name), d.table.to_csv())?;
        files.push(csv_name);
        if let (true, Some(plot)) = (svg, &d.plot) {
            let svg_name = format!("{}.svg", d.stem);
            std::fs::write(dir.join(&svg_name), emit_svg(&d.table, plot)?)?;
            files.push(svg_name);
        }
    }
    files.push(MANIFEST_FILE.to_string());
    let manifest = RunManifest {
        scenario: scenario.name().to_string(),
        config_sha256: config_sha256.to_string(),
        tool_version: TOOL_VERSION.to_string(),
        files,
        metrics: output.metrics.clone(),
        notes: output.notes.clone(),
    };
    let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    json.push('\n');
    std::fs::write(dir.join(MANIFEST_FILE), json)?;
    Ok(manifest)
}
