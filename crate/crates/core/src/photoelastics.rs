//! Stress to refractive-index change to propagation phase.
//!
//! The reference path is the vertical-stress model
//! δn_i = −½ n³ ρ_iz σ_z / E, with the matching phase
//! θ_i = π n³ ρ_iz σ_z l / (E λ) and its inverse for the required stress.
//! [`index_change_full`] generalizes it to an arbitrary plane-strain state
//! by working in the principal frame.
//!
//! Sign conventions: compressive (positive) stress lowers the index, so
//! [`phase_from_index`] returns negative phases for compression while
//! [`birefringent_phase`] reports their magnitudes.

use std::f64::consts::PI;

use log::warn;

use crate::elasticity::{principal_stresses, StressTensor};
use crate::error::{ensure_finite, ensure_positive, Result};
use crate::model::{Material, Polarization, ProbeLight};

/// Index perturbations above this size are outside the perturbative regime
/// (the waveguide index contrast is only ~5e-3).
pub const INDEX_WARNING_SCALE: f64 = 1e-2;

/// Lab-frame index perturbation seen by H (x) and V (z) polarized fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexChange {
    pub delta_n_x: f64,
    pub delta_n_z: f64,
    /// Off-diagonal lab-frame term; zero when the principal axes are H/V.
    pub delta_n_xz: f64,
    /// Direction of the major principal stress from the x-axis.
    pub principal_axis_angle: f64,
}

impl IndexChange {
    /// Lab-frame birefringence δn_z − δn_x.
    pub fn birefringence(&self) -> f64 {
        self.delta_n_z - self.delta_n_x
    }

    /// Birefringence between the principal axes of the perturbation.
    pub fn principal_birefringence(&self) -> f64 {
        (self.delta_n_z - self.delta_n_x).hypot(2.0 * self.delta_n_xz)
    }

    fn check_scale(self) -> Self {
        let largest = self.delta_n_x.abs().max(self.delta_n_z.abs());
        if largest > INDEX_WARNING_SCALE {
            warn!(
                "index change {largest:.3e} exceeds perturbative scale {INDEX_WARNING_SCALE:.0e}"
            );
        }
        self
    }
}

/// Propagation phases accumulated over the stressed length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseShift {
    pub theta_h: f64,
    pub theta_v: f64,
    /// Always `theta_v - theta_h`.
    pub delta_theta: f64,
    pub interaction_length: f64,
}

impl PhaseShift {
    pub fn new(theta_h: f64, theta_v: f64, interaction_length: f64) -> Self {
        PhaseShift {
            theta_h,
            theta_v,
            delta_theta: theta_v - theta_h,
            interaction_length,
        }
    }

    /// Purely differential shift with θ_h = 0.
    pub fn differential(delta_theta: f64, interaction_length: f64) -> Self {
        Self::new(0.0, delta_theta, interaction_length)
    }
}

fn index_coefficient(m: &Material) -> f64 {
    -0.5 * m.n_cubed() / m.youngs_modulus
}

/// Vertical-stress model: δn_z uses ρ_zz, δn_x uses ρ_xz.
pub fn index_change_uniaxial(sigma_z: f64, m: &Material) -> Result<IndexChange> {
    ensure_finite("sigma_z", sigma_z)?;
    let k = index_coefficient(m);
    Ok(IndexChange {
        delta_n_x: k * (m.rho_perpendicular * sigma_z),
        delta_n_z: k * (m.rho_parallel * sigma_z),
        delta_n_xz: 0.0,
        principal_axis_angle: 0.0,
    }
    .check_scale())
}

/// General plane-strain state. In the principal frame each field sees ρ_zz
/// times the co-polarized principal stress plus ρ_xz times the two
/// cross-polarized stresses (the other in-plane one and σ_yy); the result is
/// rotated back to the lab frame.
pub fn index_change_full(t: &StressTensor, m: &Material) -> Result<IndexChange> {
    if !t.is_finite() {
        return Err(crate::error::Error::invalid(
            "stress",
            "tensor has non-finite components",
        ));
    }
    let p = principal_stresses(t);
    let k = index_coefficient(m);
    let (rho_par, rho_perp) = (m.rho_parallel, m.rho_perpendicular);
    let along_major = k * (rho_par * p.major + rho_perp * p.minor + rho_perp * t.sigma_yy);
    let along_minor = k * (rho_perp * p.major + rho_par * p.minor + rho_perp * t.sigma_yy);

    let (s, c) = p.axis_angle.sin_cos();
    Ok(IndexChange {
        delta_n_x: c * c * along_major + s * s * along_minor,
        delta_n_z: s * s * along_major + c * c * along_minor,
        delta_n_xz: s * c * (along_major - along_minor),
        principal_axis_angle: p.axis_angle,
    }
    .check_scale())
}

/// Vertical stress giving phase `theta` to a field of polarization `pol`:
/// σ_z = E θ λ / (π l n³ ρ_iz).
pub fn required_stress(
    theta: f64,
    pol: Polarization,
    probe: &ProbeLight,
    length: f64,
    m: &Material,
) -> Result<f64> {
    ensure_positive("theta", theta)?;
    ensure_positive("length", length)?;
    ensure_positive("wavelength", probe.wavelength)?;
    Ok(m.youngs_modulus * theta * probe.wavelength / (PI * length * m.n_cubed() * m.rho_for(pol)))
}

/// Vertical stress giving a differential phase `delta_theta` between V and H.
pub fn stress_for_differential_phase(
    delta_theta: f64,
    probe: &ProbeLight,
    length: f64,
    m: &Material,
) -> Result<f64> {
    ensure_finite("delta_theta", delta_theta)?;
    ensure_positive("length", length)?;
    ensure_positive("wavelength", probe.wavelength)?;
    Ok(m.youngs_modulus * delta_theta * probe.wavelength
        / (PI * length * m.n_cubed() * (m.rho_parallel - m.rho_perpendicular)))
}

/// Phases θ_i = π n³ ρ_iz σ_z l / (E λ) and Δθ = θ_v − θ_h.
pub fn birefringent_phase(
    sigma_z: f64,
    probe: &ProbeLight,
    length: f64,
    m: &Material,
) -> Result<PhaseShift> {
    ensure_finite("sigma_z", sigma_z)?;
    ensure_positive("length", length)?;
    ensure_positive("wavelength", probe.wavelength)?;
    let k = PI * m.n_cubed() * sigma_z * length / (m.youngs_modulus * probe.wavelength);
    Ok(PhaseShift::new(
        k * m.rho_perpendicular,
        k * m.rho_parallel,
        length,
    ))
}

/// θ_i = 2π δn_i l / λ, keeping the sign of δn.
pub fn phase_from_index(dn: &IndexChange, length: f64, wavelength: f64) -> Result<PhaseShift> {
    ensure_positive("length", length)?;
    ensure_positive("wavelength", wavelength)?;
    let k = 2.0 * PI * length / wavelength;
    Ok(PhaseShift::new(k * dn.delta_n_x, k * dn.delta_n_z, length))
}
