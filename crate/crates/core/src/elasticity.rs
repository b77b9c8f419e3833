//! Plane-strain stress field of an elastic half-space loaded at its surface.
//!
//! Coordinates: x is transverse to the waveguide (0 on the ram centerline),
//! z is depth below the surface (positive into the chip). Stresses are
//! compression-positive. The out-of-plane component follows plane strain,
//! σ_yy = ν(σ_xx + σ_zz).
//!
//! Two independent routes are provided for the uniform strip load: the
//! closed form ([`strip_load_stress`]) and Gauss–Legendre superposition of
//! Flamant line loads ([`strip_load_stress_numeric`]).

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::experiments::table::Table;
use crate::model::WaveguideSite;

/// In-plane stress state plus the plane-strain out-of-plane component (Pa).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StressTensor {
    pub sigma_xx: f64,
    pub sigma_zz: f64,
    pub tau_xz: f64,
    pub sigma_yy: f64,
}

impl StressTensor {
    /// In-plane tensor with σ_yy filled in from plane strain.
    pub fn plane_strain(sigma_xx: f64, sigma_zz: f64, tau_xz: f64, poisson_ratio: f64) -> Self {
        StressTensor {
            sigma_xx,
            sigma_zz,
            tau_xz,
            sigma_yy: poisson_ratio * (sigma_xx + sigma_zz),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.sigma_xx.is_finite()
            && self.sigma_zz.is_finite()
            && self.tau_xz.is_finite()
            && self.sigma_yy.is_finite()
    }

    pub fn scale(&self, k: f64) -> Self {
        StressTensor {
            sigma_xx: k * self.sigma_xx,
            sigma_zz: k * self.sigma_zz,
            tau_xz: k * self.tau_xz,
            sigma_yy: k * self.sigma_yy,
        }
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.components()
            .iter()
            .fold(0.0_f64, |acc, c| acc.max(c.abs()))
    }

    /// Components in CSV order: xx, zz, xz, yy.
    pub fn components(&self) -> [f64; 4] {
        [self.sigma_xx, self.sigma_zz, self.tau_xz, self.sigma_yy]
    }

    /// Turns the in-plane stress state by `angle` (from x toward z), i.e.
    /// R S Rᵀ. Components in a frame whose x-axis sits at `angle` are
    /// `rotated(-angle)`. σ_yy is unchanged.
    pub fn rotated(&self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        // S' = R S Rᵀ with R = [[c, -s], [s, c]] acting on (x, z)
        let xx = c * c * self.sigma_xx - 2.0 * s * c * self.tau_xz + s * s * self.sigma_zz;
        let zz = s * s * self.sigma_xx + 2.0 * s * c * self.tau_xz + c * c * self.sigma_zz;
        let xz = s * c * (self.sigma_xx - self.sigma_zz) + (c * c - s * s) * self.tau_xz;
        StressTensor {
            sigma_xx: xx,
            sigma_zz: zz,
            tau_xz: xz,
            sigma_yy: self.sigma_yy,
        }
    }
}

impl std::ops::Add for StressTensor {
    type Output = StressTensor;
    fn add(self, o: StressTensor) -> StressTensor {
        StressTensor {
            sigma_xx: self.sigma_xx + o.sigma_xx,
            sigma_zz: self.sigma_zz + o.sigma_zz,
            tau_xz: self.tau_xz + o.tau_xz,
            sigma_yy: self.sigma_yy + o.sigma_yy,
        }
    }
}

/// Principal decomposition of the in-plane stress.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrincipalStresses {
    /// Larger principal stress σ₁.
    pub major: f64,
    /// Smaller principal stress σ₂.
    pub minor: f64,
    /// Direction of σ₁ measured from the x-axis toward z, in (−π/2, π/2].
    pub axis_angle: f64,
}

/// Flamant solution for a line load `load_per_length` (N/m) pressing on the
/// surface at x = 0.
pub fn line_load_stress(
    load_per_length: f64,
    site: WaveguideSite,
    poisson_ratio: f64,
) -> Result<StressTensor> {
    ensure_finite("load_per_length", load_per_length)?;
    ensure_finite("x", site.x)?;
    ensure_finite("z", site.z)?;
    if site.z < 0.0 {
        return Err(Error::invalid("z", "site lies above the surface"));
    }
    let (x, z) = (site.x, site.z);
    let r2 = x * x + z * z;
    if r2 == 0.0 {
        return Err(Error::Singularity);
    }
    let k = 2.0 * load_per_length / (PI * r2 * r2);
    Ok(StressTensor::plane_strain(
        k * x * x * z,
        k * z * z * z,
        k * x * z * z,
        poisson_ratio,
    ))
}

/// Closed-form stress under a uniform pressure `p` over |x| ≤ `half_width`.
///
/// With φ± = atan((x ± a)/z) the field is
///   σ_zz = (p/π)[(φ₊ − φ₋) + ½(sin 2φ₊ − sin 2φ₋)]
///   σ_xx = (p/π)[(φ₊ − φ₋) − ½(sin 2φ₊ − sin 2φ₋)]
///   τ_xz = (p/2π)(cos 2φ₋ − cos 2φ₊)
pub fn strip_load_stress(
    pressure: f64,
    half_width: f64,
    site: WaveguideSite,
    poisson_ratio: f64,
) -> Result<StressTensor> {
    check_strip(pressure, half_width, site)?;
    let (x, z) = (site.x, site.z);
    let phi_plus = ((x + half_width) / z).atan();
    let phi_minus = ((x - half_width) / z).atan();
    let subtended = phi_plus - phi_minus;
    let sin_diff = (2.0 * phi_plus).sin() - (2.0 * phi_minus).sin();
    let k = pressure / PI;
    Ok(StressTensor::plane_strain(
        k * (subtended - 0.5 * sin_diff),
        k * (subtended + 0.5 * sin_diff),
        0.5 * k * ((2.0 * phi_minus).cos() - (2.0 * phi_plus).cos()),
        poisson_ratio,
    ))
}

/// Strip-load stress by superposing line loads over [−a, a].
///
/// The strip is cut into `n_panels` equal panels, each integrated with
/// three-point Gauss–Legendre quadrature.
pub fn strip_load_stress_numeric(
    pressure: f64,
    half_width: f64,
    site: WaveguideSite,
    poisson_ratio: f64,
    n_panels: usize,
) -> Result<StressTensor> {
    check_strip(pressure, half_width, site)?;
    if n_panels < 2 {
        return Err(Error::invalid(
            "n_panels",
            format!("need at least 2, got {n_panels}"),
        ));
    }
    const NODES: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
    const WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];

    let h = 2.0 * half_width / n_panels as f64;
    let mut acc = StressTensor::default();
    for panel in 0..n_panels {
        let mid = -half_width + (panel as f64 + 0.5) * h;
        for (node, weight) in NODES.iter().zip(WEIGHTS) {
            let s = mid + 0.5 * h * node;
            // a line load P = p·ds at x = s
            let t = line_load_stress(1.0, WaveguideSite::at(site.x - s, site.z), 0.0)?;
            acc = acc + t.scale(0.5 * h * weight);
        }
    }
    let acc = acc.scale(pressure);
    Ok(StressTensor::plane_strain(
        acc.sigma_xx,
        acc.sigma_zz,
        acc.tau_xz,
        poisson_ratio,
    ))
}

fn check_strip(pressure: f64, half_width: f64, site: WaveguideSite) -> Result<()> {
    ensure_positive("pressure", pressure)?;
    ensure_positive("half_width", half_width)?;
    ensure_finite("x", site.x)?;
    ensure_positive("z", site.z)?;
    Ok(())
}

/// Eigen-decomposition of the in-plane part of `t`.
pub fn principal_stresses(t: &StressTensor) -> PrincipalStresses {
    let mean = 0.5 * (t.sigma_xx + t.sigma_zz);
    let half_diff = 0.5 * (t.sigma_xx - t.sigma_zz);
    let radius = half_diff.hypot(t.tau_xz);
    let mut angle = 0.5 * (2.0 * t.tau_xz).atan2(t.sigma_xx - t.sigma_zz);
    if angle <= -FRAC_PI_2 {
        angle += PI;
    }
    PrincipalStresses {
        major: mean + radius,
        minor: mean - radius,
        axis_angle: angle,
    }
}

/// Sampled strip-load field, stored row-major with one row per depth.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub x_samples: Vec<f64>,
    pub z_samples: Vec<f64>,
    /// `values[iz][ix]`
    pub values: Vec<Vec<StressTensor>>,
}

impl FieldGrid {
    pub fn get(&self, ix: usize, iz: usize) -> StressTensor {
        self.values[iz][ix]
    }

    /// Columns `x_m,z_m,sigma_xx_pa,sigma_zz_pa,tau_xz_pa,sigma_yy_pa`, z-major.
    pub fn to_table(&self) -> Table {
        let mut table = Table::new(&[
            "x_m",
            "z_m",
            "sigma_xx_pa",
            "sigma_zz_pa",
            "tau_xz_pa",
            "sigma_yy_pa",
        ]);
        for (iz, z) in self.z_samples.iter().enumerate() {
            for (ix, x) in self.x_samples.iter().enumerate() {
                let t = self.get(ix, iz);
                table.push(vec![*x, *z, t.sigma_xx, t.sigma_zz, t.tau_xz, t.sigma_yy]);
            }
        }
        table
    }
}

/// Evenly spaced samples over an inclusive range. A single sample must have
/// `start == stop`.
pub fn linspace(name: &'static str, start: f64, stop: f64, n: usize) -> Result<Vec<f64>> {
    ensure_finite(name, start)?;
    ensure_finite(name, stop)?;
    match n {
        0 => Err(Error::invalid(name, "empty range")),
        1 if start == stop => Ok(vec![start]),
        1 => Err(Error::invalid(name, "a single sample needs start == stop")),
        _ if stop <= start => Err(Error::invalid(
            name,
            format!("range must be increasing, got [{start}, {stop}]"),
        )),
        _ => {
            let step = (stop - start) / (n - 1) as f64;
            Ok((0..n)
                .map(|i| {
                    if i == n - 1 {
                        stop
                    } else {
                        start + i as f64 * step
                    }
                })
                .collect())
        }
    }
}

/// Samples [`strip_load_stress`] on a rectangular grid.
pub fn sample_field(
    pressure: f64,
    half_width: f64,
    poisson_ratio: f64,
    x_range: (f64, f64),
    z_range: (f64, f64),
    resolution: (usize, usize),
) -> Result<FieldGrid> {
    let x_samples = linspace("x_range", x_range.0, x_range.1, resolution.0)?;
    let z_samples = linspace("z_range", z_range.0, z_range.1, resolution.1)?;
    if z_samples[0] <= 0.0 {
        return Err(Error::invalid(
            "z_range",
            "depths must be strictly positive",
        ));
    }
    let values = z_samples
        .iter()
        .map(|&z| {
            x_samples
                .iter()
                .map(|&x| {
                    strip_load_stress(pressure, half_width, WaveguideSite::at(x, z), poisson_ratio)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FieldGrid {
        x_samples,
        z_samples,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const NU: f64 = 0.17;
    const A: f64 = 50e-6;

    fn strip(x: f64, z: f64) -> StressTensor {
        strip_load_stress(1.0, A, WaveguideSite::at(x, z), NU).unwrap()
    }

    #[test]
    fn flamant_examples() {
        let t = line_load_stress(FRAC_PI_2, WaveguideSite::at(0.0, 1.0), NU).unwrap();
        assert_relative_eq!(t.sigma_zz, 1.0, max_relative = 1e-15);
        assert_eq!(t.sigma_xx, 0.0);
        assert_eq!(t.tau_xz, 0.0);

        let t = line_load_stress(1.0, WaveguideSite::at(1.0, 1.0), NU).unwrap();
        let expect = 2.0 / (4.0 * PI);
        assert_relative_eq!(t.sigma_zz, expect, max_relative = 1e-15);
        assert_relative_eq!(t.sigma_xx, expect, max_relative = 1e-15);
        assert_relative_eq!(t.tau_xz, expect, max_relative = 1e-15);
        assert_relative_eq!(t.sigma_yy, NU * 2.0 * expect, max_relative = 1e-15);
    }

    #[test]
    fn flamant_singular_at_load_point() {
        assert!(matches!(
            line_load_stress(1.0, WaveguideSite::at(0.0, 0.0), NU),
            Err(Error::Singularity)
        ));
        // the free surface away from the load is traction free
        let t = line_load_stress(1.0, WaveguideSite::at(1.0, 0.0), NU).unwrap();
        assert_eq!(t.sigma_zz, 0.0);
    }

    #[test]
    fn strip_centerline_values() {
        let t = strip(0.0, 2.0 * A);
        assert!((t.sigma_zz - 0.5498).abs() < 1e-4);
        assert!((t.sigma_xx - 0.0405).abs() < 1e-4);
        assert_eq!(t.tau_xz, 0.0);

        let far = strip(0.0, 20.0 * A);
        assert!((far.sigma_zz - 0.06356).abs() < 1e-5);
        let line_equiv = 4.0 * A / (PI * 20.0 * A);
        assert!((far.sigma_zz / line_equiv - 1.0).abs() < 2e-3);

        let surface = strip(0.0, 1e-9 * A);
        assert_relative_eq!(surface.sigma_zz, 1.0, max_relative = 1e-6);
    }

    #[test]
    fn strip_rejects_bad_inputs() {
        assert!(strip_load_stress(1.0, A, WaveguideSite::at(0.0, 0.0), NU).is_err());
        assert!(strip_load_stress(0.0, A, WaveguideSite::at(0.0, A), NU).is_err());
        assert!(strip_load_stress(1.0, -A, WaveguideSite::at(0.0, A), NU).is_err());
        assert!(strip_load_stress_numeric(1.0, A, WaveguideSite::at(0.0, -A), NU, 10).is_err());
        assert!(strip_load_stress_numeric(1.0, A, WaveguideSite::at(0.0, A), NU, 1).is_err());
    }

    #[test]
    fn numeric_matches_closed_form_at_two_a() {
        let site = WaveguideSite::at(0.0, 2.0 * A);
        let exact = strip_load_stress(1.0, A, site, NU).unwrap();
        let numeric = strip_load_stress_numeric(1.0, A, site, NU, 10_000).unwrap();
        for (e, n) in exact.components().iter().zip(numeric.components()) {
            assert!((e - n).abs() < 1e-6);
        }
    }

    #[test]
    fn coarse_quadrature_differs_near_field() {
        let site = WaveguideSite::at(0.0, 0.5 * A);
        let coarse = strip_load_stress_numeric(1.0, A, site, NU, 2).unwrap();
        let fine = strip_load_stress_numeric(1.0, A, site, NU, 10_000).unwrap();
        assert!((coarse.sigma_zz - fine.sigma_zz).abs() > 1e-4);
    }

    #[test]
    fn surface_boundary_condition() {
        let z = A / 1000.0;
        for x in [0.0, 0.5 * A, -0.8 * A] {
            assert!((strip(x, z).sigma_zz - 1.0).abs() < 0.02, "x = {x}");
        }
        for x in [1.5 * A, -2.0 * A, 5.0 * A] {
            assert!(strip(x, z).sigma_zz.abs() < 0.02, "x = {x}");
        }
    }

    #[test]
    fn principal_examples() {
        let p = principal_stresses(&StressTensor::plane_strain(1.0, 3.0, 0.0, 0.0));
        assert_eq!((p.major, p.minor), (3.0, 1.0));
        assert_relative_eq!(p.axis_angle, FRAC_PI_2);

        let p = principal_stresses(&StressTensor::plane_strain(0.0, 0.0, 1.0, 0.0));
        assert_relative_eq!(p.major, 1.0);
        assert_relative_eq!(p.minor, -1.0);
        assert_relative_eq!(p.axis_angle.abs(), PI / 4.0);

        // -0.0 shear must not produce an angle of -π/2
        let p = principal_stresses(&StressTensor::plane_strain(1.0, 3.0, -0.0, 0.0));
        assert!(p.axis_angle > -FRAC_PI_2 && p.axis_angle <= FRAC_PI_2);
    }

    #[test]
    fn principal_difference_identity_for_line_loads() {
        // deterministic scatter of points in the lower half-plane
        let mut seed = 0x2545_f491_4f6c_dd1d_u64;
        let mut next = || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let x = (next() - 0.5) * 10.0;
            let z = 0.01 + next() * 5.0;
            let load = 0.1 + next() * 100.0;
            let t = line_load_stress(load, WaveguideSite::at(x, z), NU).unwrap();
            let p = principal_stresses(&t);
            let expect = 2.0 * load * z / (PI * (x * x + z * z));
            assert!(((p.major - p.minor) / expect - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn grid_degenerate_and_mirror() {
        let g = sample_field(1.0, A, NU, (A, A), (2.0 * A, 2.0 * A), (1, 1)).unwrap();
        assert_eq!(g.get(0, 0), strip(A, 2.0 * A));

        let g = sample_field(1.0, A, NU, (-3.0 * A, 3.0 * A), (0.5 * A, 4.0 * A), (13, 5)).unwrap();
        for iz in 0..5 {
            for ix in 0..13 {
                let (l, r) = (g.get(ix, iz), g.get(12 - ix, iz));
                assert_relative_eq!(l.sigma_zz, r.sigma_zz, max_relative = 1e-12);
                assert_relative_eq!(
                    l.sigma_xx,
                    r.sigma_xx,
                    max_relative = 1e-12,
                    epsilon = 1e-15
                );
            }
        }
        assert_eq!(g.to_table().rows.len(), 65);
    }

    #[test]
    fn grid_rejects_bad_ranges() {
        assert!(sample_field(1.0, A, NU, (0.0, 1.0), (0.0, 1.0), (2, 2)).is_err());
        assert!(sample_field(1.0, A, NU, (0.0, 1.0), (1.0, 2.0), (0, 2)).is_err());
        assert!(sample_field(1.0, A, NU, (1.0, 0.0), (1.0, 2.0), (2, 2)).is_err());
    }

    #[test]
    fn centerline_decreases_with_depth() {
        let depths = linspace("z", 0.1 * A, 50.0 * A, 500).unwrap();
        let values: Vec<f64> = depths.iter().map(|&z| strip(0.0, z).sigma_zz).collect();
        assert!(values.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn vertical_force_balance() {
        // ∫σ_zz dx at depth a carries the applied load 2ap
        let a = A;
        let n = 20_000;
        let h = 100.0 * a / n as f64;
        let total: f64 = (0..n)
            .map(|i| {
                let x = -50.0 * a + (i as f64 + 0.5) * h;
                strip(x, a).sigma_zz * h
            })
            .sum();
        assert_relative_eq!(total, 2.0 * a, max_relative = 0.01);
    }

    proptest! {
        #[test]
        fn strip_linear_and_symmetric(
            x in -10.0f64..10.0, z in 0.05f64..40.0, k in 0.01f64..100.0,
        ) {
            let base = strip(x * A, z * A);
            let scaled = strip_load_stress(k, A, WaveguideSite::at(x * A, z * A), NU).unwrap();
            for (b, s) in base.components().iter().zip(scaled.components()) {
                prop_assert!((b * k - s).abs() <= 1e-12 * k * base.max_abs());
            }
            let mirror = strip(-x * A, z * A);
            let tol = 1e-12 * base.max_abs();
            prop_assert!((mirror.sigma_zz - base.sigma_zz).abs() <= tol);
            prop_assert!((mirror.sigma_xx - base.sigma_xx).abs() <= tol);
            prop_assert!((mirror.tau_xz + base.tau_xz).abs() <= tol);
            prop_assert!((base.sigma_yy - NU * (base.sigma_xx + base.sigma_zz)).abs() <= tol);
        }

        #[test]
        fn rotation_preserves_invariants(
            xx in -5.0f64..5.0, zz in -5.0f64..5.0, xz in -5.0f64..5.0, angle in -3.2f64..3.2,
        ) {
            let t = StressTensor::plane_strain(xx, zz, xz, NU);
            let r = t.rotated(angle);
            let (p, q) = (principal_stresses(&t), principal_stresses(&r));
            prop_assert!((p.major - q.major).abs() < 1e-12);
            prop_assert!((p.minor - q.minor).abs() < 1e-12);
            // rotating into the principal frame diagonalizes the tensor
            let d = t.rotated(-p.axis_angle);
            prop_assert!(d.tau_xz.abs() < 1e-12);
            prop_assert!((d.sigma_xx - p.major).abs() < 1e-12);
        }
    }
}
