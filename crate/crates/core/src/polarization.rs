//! Jones-calculus model of the polarization Mach–Zehnder interferometer
//! (PMZI): two half-wave plates at π/8 around the strain-induced retarder.
//!
//! Mode 0 is H (x), mode 1 is V (z). Global phases are never observable, so
//! matrix comparisons go through [`TransferMatrix::approx_eq_up_to_phase`].

use std::f64::consts::{FRAC_PI_8, PI};
use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::photoelastics::PhaseShift;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Two-component field amplitude (H, V).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationState {
    pub amplitudes: [Complex64; 2],
}

impl PolarizationState {
    pub fn new(h: Complex64, v: Complex64) -> Self {
        PolarizationState { amplitudes: [h, v] }
    }

    pub fn horizontal() -> Self {
        Self::new(ONE, ZERO)
    }

    pub fn vertical() -> Self {
        Self::new(ZERO, ONE)
    }

    /// Total intensity |H|² + |V|².
    pub fn intensity(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Per-mode intensities (|H|², |V|²).
    pub fn mode_intensities(&self) -> [f64; 2] {
        [self.amplitudes[0].norm_sqr(), self.amplitudes[1].norm_sqr()]
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.intensity().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::invalid(
                "amplitudes",
                "cannot normalize a null state",
            ));
        }
        Ok(Self::new(
            self.amplitudes[0] / norm,
            self.amplitudes[1] / norm,
        ))
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &PolarizationState) -> Complex64 {
        self.amplitudes[0].conj() * other.amplitudes[0]
            + self.amplitudes[1].conj() * other.amplitudes[1]
    }
}

/// 2×2 complex Jones matrix, row-major: `m[out][in]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub m: [[Complex64; 2]; 2],
}

impl TransferMatrix {
    pub fn new(m: [[Complex64; 2]; 2]) -> Self {
        TransferMatrix { m }
    }

    pub fn identity() -> Self {
        Self::new([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn diag(a: Complex64, b: Complex64) -> Self {
        Self::new([[a, ZERO], [ZERO, b]])
    }

    fn real(m: [[f64; 2]; 2]) -> Self {
        Self::new(m.map(|row| row.map(|x| Complex64::new(x, 0.0))))
    }

    /// Rotation of the field basis by `angle`.
    pub fn rotation(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::real([[c, -s], [s, c]])
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Self::new([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn determinant(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Amplitude from input mode `input` to output mode `output`.
    pub fn element(&self, output: usize, input: usize) -> Complex64 {
        self.m[output][input]
    }

    pub fn apply(&self, state: &PolarizationState) -> PolarizationState {
        let [h, v] = state.amplitudes;
        PolarizationState::new(
            self.m[0][0] * h + self.m[0][1] * v,
            self.m[1][0] * h + self.m[1][1] * v,
        )
    }

    /// Largest entry of |U†U − I|.
    pub fn unitarity_deviation(&self) -> f64 {
        let p = self.adjoint() * *self;
        let id = Self::identity();
        (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| (p.m[i][j] - id.m[i][j]).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() < tol
    }

    /// Equality up to a global phase factor.
    pub fn approx_eq_up_to_phase(&self, other: &TransferMatrix, tol: f64) -> bool {
        // phase reference from the largest entry of `self`
        let (mut bi, mut bj, mut best) = (0, 0, -1.0);
        for i in 0..2 {
            for j in 0..2 {
                let n = self.m[i][j].norm();
                if n > best {
                    (bi, bj, best) = (i, j, n);
                }
            }
        }
        if best <= 0.0 {
            return other.m.iter().flatten().all(|z| z.norm() < tol);
        }
        let o = other.m[bi][bj];
        if o.norm() == 0.0 {
            return false;
        }
        let phase = (self.m[bi][bj] / o) / (self.m[bi][bj] / o).norm();
        (0..2).all(|i| (0..2).all(|j| (self.m[i][j] - phase * other.m[i][j]).norm() < tol))
    }
}

impl Mul for TransferMatrix {
    type Output = TransferMatrix;
    fn mul(self, rhs: TransferMatrix) -> TransferMatrix {
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.m[i][0] * rhs.m[0][j] + self.m[i][1] * rhs.m[1][j];
            }
        }
        TransferMatrix::new(out)
    }
}

/// Linear retarder with retardance `retardance` and fast axis at
/// `axis_angle` from H, with the fast-axis phase fixed to zero.
pub fn waveplate(axis_angle: f64, retardance: f64) -> TransferMatrix {
    let rot = TransferMatrix::rotation(axis_angle);
    let rot_back = TransferMatrix::rotation(-axis_angle);
    rot * TransferMatrix::diag(ONE, Complex64::from_polar(1.0, retardance)) * rot_back
}

/// Ideal half-wave plate, [[cos 2θ, sin 2θ], [sin 2θ, −cos 2θ]].
pub fn half_wave_plate(axis_angle: f64) -> TransferMatrix {
    let (s, c) = (2.0 * axis_angle).sin_cos();
    TransferMatrix::real([[c, s], [s, -c]])
}

/// Strain-induced retarder diag(e^{iθ_h}, e^{iθ_v}).
pub fn birefringent_retarder(ps: &PhaseShift) -> TransferMatrix {
    TransferMatrix::diag(
        Complex64::from_polar(1.0, ps.theta_h),
        Complex64::from_polar(1.0, ps.theta_v),
    )
}

/// HWP(π/8) · retarder · HWP(π/8).
pub fn pmzi_transfer(ps: &PhaseShift) -> TransferMatrix {
    pmzi_transfer_with_plate(ps, PI)
}

/// PMZI built from waveplates of arbitrary retardance at π/8; `PI` gives the
/// ideal device.
pub fn pmzi_transfer_with_plate(ps: &PhaseShift, plate_retardance: f64) -> TransferMatrix {
    let plate = if plate_retardance == PI {
        half_wave_plate(FRAC_PI_8)
    } else {
        waveplate(FRAC_PI_8, plate_retardance)
    };
    plate * birefringent_retarder(ps) * plate
}

/// Output intensity of the H port for H input, cos²(Δθ/2).
pub fn pmzi_intensity(delta_theta: f64) -> f64 {
    let c = (0.5 * delta_theta).cos();
    c * c
}

/// (I_max − I_min)/(I_max + I_min).
pub fn fringe_visibility(intensities: &[f64]) -> Result<f64> {
    if intensities.len() < 2 {
        return Err(Error::invalid("intensities", "need at least two samples"));
    }
    if let Some(bad) = intensities.iter().find(|i| !(i.is_finite() && **i >= 0.0)) {
        return Err(Error::invalid(
            "intensities",
            format!("samples must be finite and non-negative, got {bad}"),
        ));
    }
    let max = intensities
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let min = intensities.iter().copied().fold(f64::INFINITY, f64::min);
    if max == 0.0 {
        return Err(Error::invalid("intensities", "all samples are zero"));
    }
    Ok((max - min) / (max + min))
}
