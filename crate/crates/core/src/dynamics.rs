//! Lumped model of the piezo–ram–chip switching transient.
//!
//! The mechanical stage is a single damped resonance driven through a pure
//! transport delay:
//!
//!   y'' + 2ζω₀ y' + ω₀² y = ω₀² V(t − t_d),   σ(t) = g · y(t)
//!
//! integrated with fixed-step RK4. The drive is held constant across each
//! step at its mid-step value, so switch instants that sit on the time grid
//! are reproduced exactly.

use std::f64::consts::PI;

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::experiments::table::Table;
use crate::model::{Material, ProbeLight};
use crate::photoelastics::{birefringent_phase, stress_for_differential_phase};
use crate::polarization::pmzi_transfer;

/// Drive amplitude available from the switching electronics (V).
pub const DEFAULT_MAX_VOLTAGE: f64 = 70.0;

/// Steps per natural period below which a run is rejected.
pub const MIN_STEPS_PER_PERIOD: f64 = 50.0;

const MAX_SAMPLES: usize = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActuatorModel {
    /// ω₀ (rad/s)
    pub natural_frequency: f64,
    /// ζ, underdamped: 0 < ζ < 1
    pub damping_ratio: f64,
    /// Steady-state stress at the waveguide per drive volt (Pa/V).
    pub stress_gain: f64,
    /// Trigger-to-motion delay t_d (s).
    pub transport_delay: f64,
}

impl ActuatorModel {
    pub fn new(
        natural_frequency: f64,
        damping_ratio: f64,
        stress_gain: f64,
        transport_delay: f64,
    ) -> Result<Self> {
        let m = ActuatorModel {
            natural_frequency,
            damping_ratio,
            stress_gain,
            transport_delay,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("natural_frequency", self.natural_frequency)?;
        if !(self.damping_ratio > 0.0 && self.damping_ratio < 1.0) {
            return Err(Error::invalid(
                "damping_ratio",
                format!("must lie in (0, 1), got {}", self.damping_ratio),
            ));
        }
        for (name, v) in [
            ("stress_gain", self.stress_gain),
            ("transport_delay", self.transport_delay),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(
                    name,
                    format!("must be finite and >= 0, got {v}"),
                ));
            }
        }
        Ok(())
    }

    pub fn with_gain(self, stress_gain: f64) -> Self {
        ActuatorModel {
            stress_gain,
            ..self
        }
    }

    pub fn with_delay(self, transport_delay: f64) -> Self {
        ActuatorModel {
            transport_delay,
            ..self
        }
    }

    /// Coarsest time step accepted by [`step_response`].
    pub fn max_time_step(&self) -> f64 {
        2.0 * PI / (MIN_STEPS_PER_PERIOD * self.natural_frequency)
    }

    /// Envelope estimate ln(1/band)/(ζω₀) of the settling time.
    pub fn envelope_settling_time(&self, band: f64) -> f64 {
        (1.0 / band).ln() / (self.damping_ratio * self.natural_frequency)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DriveKind {
    /// Low before the first switch time, high afterwards.
    Step,
    /// Starts low and toggles at every switch time.
    Square,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriveWaveform {
    pub kind: DriveKind,
    pub high_voltage: f64,
    pub switch_times: Vec<f64>,
}

impl DriveWaveform {
    pub fn step(high_voltage: f64, at: f64) -> Self {
        DriveWaveform {
            kind: DriveKind::Step,
            high_voltage,
            switch_times: vec![at],
        }
    }

    pub fn validate(&self, max_voltage: f64) -> Result<()> {
        if !(self.high_voltage.is_finite() && (0.0..=max_voltage).contains(&self.high_voltage)) {
            return Err(Error::invalid(
                "high_voltage",
                format!(
                    "must lie in [0, {max_voltage}] V, got {}",
                    self.high_voltage
                ),
            ));
        }
        if self.switch_times.is_empty() {
            return Err(Error::invalid(
                "switch_times",
                "need at least one switch time",
            ));
        }
        if self
            .switch_times
            .iter()
            .any(|t| !(t.is_finite() && *t >= 0.0))
        {
            return Err(Error::invalid(
                "switch_times",
                "times must be finite and >= 0",
            ));
        }
        if self.switch_times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid(
                "switch_times",
                "times must be strictly increasing",
            ));
        }
        Ok(())
    }

    /// Drive voltage at time `t`; switches take effect at the switch instant.
    pub fn voltage_at(&self, t: f64) -> f64 {
        let passed = self.switch_times.iter().take_while(|&&s| s <= t).count();
        let high = match self.kind {
            DriveKind::Step => passed > 0,
            DriveKind::Square => passed % 2 == 1,
        };
        if high {
            self.high_voltage
        } else {
            0.0
        }
    }

    /// Level the drive finally rests at.
    pub fn final_voltage(&self) -> f64 {
        self.voltage_at(f64::INFINITY)
    }

    pub fn first_switch(&self) -> f64 {
        self.switch_times.first().copied().unwrap_or(0.0)
    }
}

/// Mechanical response sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct StressTrace {
    pub time_s: Vec<f64>,
    pub drive_v: Vec<f64>,
    pub stress_pa: Vec<f64>,
    /// Stress the system would settle at if the final drive level were held.
    pub settled_pa: f64,
    pub time_step: f64,
}

impl StressTrace {
    pub fn rise_time_10_90(&self) -> Result<f64> {
        rise_time_10_90(&self.time_s, &self.stress_pa, self.settled_pa)
    }

    pub fn settling_time(&self, band: f64) -> Result<Option<f64>> {
        settling_time(&self.time_s, &self.stress_pa, self.settled_pa, band)
    }

    /// Time from `trigger` to the last sample before the stress leaves its
    /// initial value.
    pub fn trigger_delay(&self, trigger: f64) -> Option<f64> {
        let first = *self.stress_pa.first()?;
        let departs = self.stress_pa.iter().position(|&s| s != first)?;
        Some(self.time_s[departs.saturating_sub(1)] - trigger)
    }
}

/// Stress trace with the PMZI output of both polarization ports.
#[derive(Debug, Clone, PartialEq)]
pub struct Transient {
    pub trace: StressTrace,
    pub intensity_h: Vec<f64>,
    pub intensity_v: Vec<f64>,
}

impl Transient {
    /// Columns `time_s,drive_v,stress_pa,intensity_h,intensity_v`, keeping
    /// every `stride`-th sample.
    pub fn to_table(&self, stride: usize) -> Table {
        let mut table = Table::new(&[
            "time_s",
            "drive_v",
            "stress_pa",
            "intensity_h",
            "intensity_v",
        ]);
        let stride = stride.max(1);
        for i in (0..self.trace.time_s.len()).step_by(stride) {
            table.push(vec![
                self.trace.time_s[i],
                self.trace.drive_v[i],
                self.trace.stress_pa[i],
                self.intensity_h[i],
                self.intensity_v[i],
            ]);
        }
        table
    }
}

/// Integrates the mechanical stage for `duration` seconds at step `dt`.
pub fn step_response(
    model: &ActuatorModel,
    drive: &DriveWaveform,
    duration: f64,
    dt: f64,
) -> Result<StressTrace> {
    model.validate()?;
    drive.validate(f64::INFINITY)?;
    ensure_positive("duration", duration)?;
    ensure_positive("dt", dt)?;
    let limit = model.max_time_step();
    if dt > limit {
        return Err(Error::ResolutionGuard { dt, limit });
    }
    let steps = (duration / dt).round();
    if steps < 1.0 || steps >= MAX_SAMPLES as f64 {
        return Err(Error::invalid(
            "duration",
            format!("{steps} steps of {dt:.3e} s is outside [1, {MAX_SAMPLES})"),
        ));
    }
    let steps = steps as usize;

    let w0 = model.natural_frequency;
    let two_zeta_w0 = 2.0 * model.damping_ratio * w0;
    let w0_sq = w0 * w0;
    let accel = |y: f64, v: f64, u: f64| w0_sq * (u - y) - two_zeta_w0 * v;

    let mut time_s = Vec::with_capacity(steps + 1);
    let mut drive_v = Vec::with_capacity(steps + 1);
    let mut stress_pa = Vec::with_capacity(steps + 1);
    let (mut y, mut v) = (0.0_f64, 0.0_f64);
    for k in 0..=steps {
        let t = k as f64 * dt;
        time_s.push(t);
        drive_v.push(drive.voltage_at(t));
        stress_pa.push(model.stress_gain * y);
        if k == steps {
            break;
        }
        let u = drive.voltage_at(t + 0.5 * dt - model.transport_delay);
        let (k1y, k1v) = (v, accel(y, v, u));
        let (k2y, k2v) = (
            v + 0.5 * dt * k1v,
            accel(y + 0.5 * dt * k1y, v + 0.5 * dt * k1v, u),
        );
        let (k3y, k3v) = (
            v + 0.5 * dt * k2v,
            accel(y + 0.5 * dt * k2y, v + 0.5 * dt * k2v, u),
        );
        let (k4y, k4v) = (v + dt * k3v, accel(y + dt * k3y, v + dt * k3v, u));
        y += dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    Ok(StressTrace {
        time_s,
        drive_v,
        stress_pa,
        settled_pa: model.stress_gain * drive.final_voltage(),
        time_step: dt,
    })
}

/// First crossing of `from` toward `settled` at fraction `level` of the step,
/// linearly interpolated.
fn first_crossing(times: &[f64], values: &[f64], settled: f64, level: f64) -> Option<f64> {
    let base = values[0];
    let target = base + level * (settled - base);
    let dir = (settled - base).signum();
    let i = values.iter().position(|&v| (v - target) * dir >= 0.0)?;
    if i == 0 {
        return Some(times[0]);
    }
    let (v0, v1) = (values[i - 1], values[i]);
    Some(times[i - 1] + (times[i] - times[i - 1]) * (target - v0) / (v1 - v0))
}

/// 10 %–90 % rise time of a step from `values[0]` toward `settled`.
pub fn rise_time_10_90(times: &[f64], values: &[f64], settled: f64) -> Result<f64> {
    if times.len() != values.len() || times.len() < 2 {
        return Err(Error::invalid(
            "values",
            "need matching time and value samples",
        ));
    }
    ensure_finite("settled", settled)?;
    if settled == values[0] {
        return Err(Error::invalid("settled", "signal has no step"));
    }
    let t10 =
        first_crossing(times, values, settled, 0.1).ok_or(Error::NeverReaches { level: 10.0 })?;
    let t90 =
        first_crossing(times, values, settled, 0.9).ok_or(Error::NeverReaches { level: 90.0 })?;
    Ok(t90 - t10)
}

/// Last time the signal leaves the band ±`band`·|settled − values[0]| around
/// `settled`, measured from `times[0]`. `None` if it is still outside the
/// band at the final sample.
pub fn settling_time(
    times: &[f64],
    values: &[f64],
    settled: f64,
    band: f64,
) -> Result<Option<f64>> {
    if !(band > 0.0 && band < 0.5) {
        return Err(Error::invalid(
            "band",
            format!("must lie in (0, 0.5), got {band}"),
        ));
    }
    if times.len() != values.len() || times.is_empty() {
        return Err(Error::invalid(
            "values",
            "need matching time and value samples",
        ));
    }
    let tol = band * (settled - values[0]).abs();
    let Some(last_out) = values.iter().rposition(|v| (v - settled).abs() > tol) else {
        return Ok(Some(0.0));
    };
    if last_out + 1 == values.len() {
        return Ok(None);
    }
    let (v0, v1) = (values[last_out], values[last_out + 1]);
    let edge = if v0 > settled {
        settled + tol
    } else {
        settled - tol
    };
    let frac = (v0 - edge) / (v0 - v1);
    let t = times[last_out] + frac * (times[last_out + 1] - times[last_out]);
    Ok(Some(t - times[0]))
}

/// Fits ω₀ by bisection so the simulated unit step has the requested
/// 10–90 % rise time. Gain is 1 Pa/V and the delay is zero; set them with
/// [`ActuatorModel::with_gain`] and [`ActuatorModel::with_delay`].
pub fn calibrate(target_rise: f64, damping_ratio: f64) -> Result<ActuatorModel> {
    ensure_positive("target_rise", target_rise)?;
    let rise_at = |w0: f64| -> Result<f64> {
        let model = ActuatorModel::new(w0, damping_ratio, 1.0, 0.0)?;
        let period = 2.0 * PI / w0;
        let trace = step_response(
            &model,
            &DriveWaveform::step(1.0, 0.0),
            2.0 * period,
            period / 1000.0,
        )?;
        trace.rise_time_10_90()
    };
    let (mut lo, mut hi) = (0.1 / target_rise, 10.0 / target_rise);
    let (r_lo, r_hi) = (rise_at(lo)?, rise_at(hi)?);
    if !(r_lo > target_rise && r_hi < target_rise) {
        return Err(Error::NonBracketing(format!(
            "rise times {r_lo:.3e} s and {r_hi:.3e} s at ω₀ = {lo:.3e}, {hi:.3e} rad/s do not straddle {target_rise:.3e} s"
        )));
    }
    while (hi - lo) > 1e-12 * lo {
        let mid = 0.5 * (lo + hi);
        if rise_at(mid)? > target_rise {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    ActuatorModel::new(0.5 * (lo + hi), damping_ratio, 1.0, 0.0)
}

/// Calibrates ω₀ to `target_rise` and ζ so that the envelope settles into
/// `band` after `target_settling`, iterating the two fits to a fixed point.
pub fn calibrate_with_settling(
    target_rise: f64,
    target_settling: f64,
    band: f64,
) -> Result<ActuatorModel> {
    ensure_positive("target_settling", target_settling)?;
    if !(band > 0.0 && band < 0.5) {
        return Err(Error::invalid(
            "band",
            format!("must lie in (0, 0.5), got {band}"),
        ));
    }
    let mut zeta = 0.01;
    for _ in 0..100 {
        let model = calibrate(target_rise, zeta)?;
        let next = (1.0 / band).ln() / (model.natural_frequency * target_settling);
        if !(next > 0.0 && next < 1.0) {
            return Err(Error::NonBracketing(format!(
                "settling target {target_settling:.3e} s needs damping ratio {next:.3e}, outside (0, 1)"
            )));
        }
        if (next - zeta).abs() <= 1e-12 * zeta {
            return calibrate(target_rise, next);
        }
        zeta = next;
    }
    Err(Error::NonBracketing(
        "damping/frequency fit did not converge".into(),
    ))
}

/// Stress gain (Pa/V) that makes `voltage` produce differential phase
/// `delta_theta` at steady state.
pub fn gain_for_phase(
    delta_theta: f64,
    voltage: f64,
    probe: &ProbeLight,
    length: f64,
    m: &Material,
) -> Result<f64> {
    ensure_positive("voltage", voltage)?;
    Ok(stress_for_differential_phase(delta_theta, probe, length, m)? / voltage)
}

/// Strain-wave transit time across the guided mode, d/v.
pub fn acoustic_rise_limit(mode_diameter: f64, sound_speed: f64) -> Result<f64> {
    ensure_positive("mode_diameter", mode_diameter)?;
    if sound_speed.is_nan() || sound_speed <= 0.0 {
        return Err(Error::invalid(
            "sound_speed",
            format!("must be > 0, got {sound_speed}"),
        ));
    }
    Ok(mode_diameter / sound_speed)
}

/// Mechanical response followed through the photoelastic phase and PMZI.
#[allow(clippy::too_many_arguments)]
pub fn optical_transient(
    model: &ActuatorModel,
    drive: &DriveWaveform,
    probe: &ProbeLight,
    length: f64,
    material: &Material,
    duration: f64,
    dt: f64,
) -> Result<Transient> {
    let trace = step_response(model, drive, duration, dt)?;
    let input = probe.input;
    let total = input.intensity();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::invalid("probe", "input state carries no intensity"));
    }
    let mut intensity_h = Vec::with_capacity(trace.stress_pa.len());
    let mut intensity_v = Vec::with_capacity(trace.stress_pa.len());
    for &stress in &trace.stress_pa {
        let ps = birefringent_phase(stress, probe, length, material)?;
        let [h, v] = pmzi_transfer(&ps).apply(&input).mode_intensities();
        intensity_h.push(h / total);
        intensity_v.push(v / total);
    }
    Ok(Transient {
        trace,
        intensity_h,
        intensity_v,
    })
}
