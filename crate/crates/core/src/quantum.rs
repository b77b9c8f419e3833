//! Two-photon interference in the PMZI.
//!
//! One photon enters in H and one in V. The indistinguishable part evolves
//! under the symmetric two-photon representation of the Jones matrix; the
//! distinguishable part behaves like two independent classical particles.
//! The two are mixed incoherently with weights O² and 1 − O², where O is the
//! wavepacket overlap.

use num_complex::Complex64;

use crate::error::{ensure_positive, Error, Result};
use crate::polarization::{pmzi_intensity, TransferMatrix};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Mode occupations of the basis |2,0⟩, |1,1⟩, |0,2⟩ written as photon
/// mode lists.
const BASIS_MODES: [[usize; 2]; 3] = [[0, 0], [0, 1], [1, 1]];
/// √(n_H! n_V!) for each basis state.
const BASIS_NORM: [f64; 3] = [std::f64::consts::SQRT_2, 1.0, std::f64::consts::SQRT_2];

/// Amplitudes over |2,0⟩, |1,1⟩, |0,2⟩ (first index counts H photons).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPhotonState {
    pub amplitudes: [Complex64; 3],
}

impl TwoPhotonState {
    pub fn new(amplitudes: [Complex64; 3]) -> Self {
        TwoPhotonState { amplitudes }
    }

    /// One photon in each polarization.
    pub fn one_one() -> Self {
        Self::new([ZERO, Complex64::new(1.0, 0.0), ZERO])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability of one photon in each output polarization.
    pub fn coincidence(&self) -> f64 {
        self.amplitudes[1].norm_sqr()
    }
}

/// Action of a single-photon unitary on the two-photon symmetric subspace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPhotonUnitary {
    /// `m[out][in]` in the |2,0⟩, |1,1⟩, |0,2⟩ basis.
    pub m: [[Complex64; 3]; 3],
}

impl TwoPhotonUnitary {
    pub fn apply(&self, state: &TwoPhotonState) -> TwoPhotonState {
        let mut out = [ZERO; 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..3).map(|j| self.m[i][j] * state.amplitudes[j]).sum();
        }
        TwoPhotonState::new(out)
    }

    pub fn compose(&self, rhs: &TwoPhotonUnitary) -> TwoPhotonUnitary {
        let mut m = [[ZERO; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| self.m[i][k] * rhs.m[k][j]).sum();
            }
        }
        TwoPhotonUnitary { m }
    }

    /// Largest entry of |Φ†Φ − I|.
    pub fn unitarity_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let dot: Complex64 = (0..3).map(|k| self.m[k][i].conj() * self.m[k][j]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }
}

/// Matrix permanent by Ryser's formula. `rows` must be square.
pub fn permanent(rows: &[Vec<Complex64>]) -> Complex64 {
    let n = rows.len();
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut total = ZERO;
    for subset in 1u64..(1 << n) {
        let mut product = Complex64::new(1.0, 0.0);
        for row in rows {
            let s: Complex64 = (0..n)
                .filter(|j| subset >> j & 1 == 1)
                .map(|j| row[j])
                .sum();
            product *= s;
        }
        let sign = if (n - subset.count_ones() as usize).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        total += product * sign;
    }
    total
}

/// Bosonic two-photon representation Φ(U) with
/// Φ[t][s] = Per(U[t, s]) / √(∏t! ∏s!).
pub fn two_photon_unitary(u: &TransferMatrix) -> Result<TwoPhotonUnitary> {
    let deviation = u.unitarity_deviation();
    if deviation.is_nan() || deviation >= 1e-10 {
        return Err(Error::NonUnitary { deviation });
    }
    let mut m = [[ZERO; 3]; 3];
    for (t, out_modes) in BASIS_MODES.iter().enumerate() {
        for (s, in_modes) in BASIS_MODES.iter().enumerate() {
            let sub: Vec<Vec<Complex64>> = out_modes
                .iter()
                .map(|&r| in_modes.iter().map(|&c| u.element(r, c)).collect())
                .collect();
            m[t][s] = permanent(&sub) / (BASIS_NORM[t] * BASIS_NORM[s]);
        }
    }
    Ok(TwoPhotonUnitary { m })
}

/// Temporal-mode overlap between the two photons, O ∈ [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct WavepacketOverlap(f64);

impl WavepacketOverlap {
    pub fn new(overlap: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&overlap) {
            Ok(WavepacketOverlap(overlap))
        } else {
            Err(Error::invalid(
                "overlap",
                format!("must lie in [0, 1], got {overlap}"),
            ))
        }
    }

    pub fn indistinguishable() -> Self {
        WavepacketOverlap(1.0)
    }

    /// Gaussian wavepackets: O(τ) = exp(−(τ/τ_c)²).
    pub fn from_delay(delay: f64, coherence_time: f64) -> Result<Self> {
        ensure_positive("coherence_time", coherence_time)?;
        if delay.is_nan() {
            return Err(Error::invalid("delay", "NaN"));
        }
        let r = delay / coherence_time;
        Ok(WavepacketOverlap((-r * r).exp()))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Coincidence probability behind the PMZI for |1,1⟩ input:
/// P_cc = 1 − (1 + O²) sin²(Δθ) / 2.
pub fn pmzi_coincidence(delta_theta: f64, overlap: WavepacketOverlap) -> f64 {
    let o2 = overlap.0 * overlap.0;
    let s = delta_theta.sin();
    1.0 - 0.5 * (1.0 + o2) * s * s
}

/// Coincidence probability at the 50:50 setting (Δθ = π/2) as a function of
/// the delay between the photons.
pub fn hom_dip(delay: f64, coherence_time: f64) -> Result<f64> {
    let o = WavepacketOverlap::from_delay(delay, coherence_time)?;
    Ok(0.5 * (1.0 - o.0 * o.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringeSample {
    pub delta_theta: f64,
    pub coincidence: f64,
    pub classical: f64,
}

/// Quantum coincidence alongside the classical cos²(Δθ/2) fringe.
pub fn quantum_fringe_scan(
    delta_thetas: &[f64],
    overlap: WavepacketOverlap,
) -> Result<Vec<FringeSample>> {
    if delta_thetas.is_empty() {
        return Err(Error::invalid("delta_thetas", "no samples"));
    }
    Ok(delta_thetas
        .iter()
        .map(|&d| FringeSample {
            delta_theta: d,
            coincidence: pmzi_coincidence(d, overlap),
            classical: pmzi_intensity(d),
        })
        .collect())
}

/// Interpolated abscissae where `values` crosses the midline (max + min)/2.
pub fn midline_crossings(xs: &[f64], values: &[f64]) -> Vec<f64> {
    let n = xs.len().min(values.len());
    if n < 2 {
        return Vec::new();
    }
    let max = values[..n]
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let min = values[..n].iter().copied().fold(f64::INFINITY, f64::min);
    let mid = 0.5 * (max + min);
    // tolerance keeps samples sitting on the midline from double counting
    let tol = 1e-9 * (max - min);
    let mut crossings = Vec::new();
    let mut last: Option<(f64, f64)> = None;
    for i in 0..n {
        let d = values[i] - mid;
        if d.abs() <= tol {
            continue;
        }
        if let Some((x0, d0)) = last {
            if d0.signum() != d.signum() {
                crossings.push(x0 + (xs[i] - x0) * d0 / (d0 - d));
            }
        }
        last = Some((xs[i], d));
    }
    crossings
}

/// Fundamental period estimated as twice the mean spacing between midline
/// crossings.
pub fn fundamental_period(xs: &[f64], values: &[f64]) -> Option<f64> {
    let c = midline_crossings(xs, values);
    if c.len() < 2 {
        return None;
    }
    Some(2.0 * (c[c.len() - 1] - c[0]) / (c.len() - 1) as f64)
}
