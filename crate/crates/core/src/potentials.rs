//! Mode functions, doubly-dressed scattering potentials and the
//! interaction parameters α, β.
//!
//! Potentials are in units of ħ times the frequency unit; positions are kx.

use serde::Serialize;

use crate::dressed::rabi_frequency;
use crate::error::{Error, Result};
use crate::params::{PhysicalParams, Resonance};
use crate::quad::adaptive_simpson;

/// Cavity standing-wave profile along x.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
pub enum CavityMode {
    /// u(x) = sin(kx).
    #[default]
    Sine,
    /// Node expansion u(x) = kx. Only meaningful near x = 0.
    Linearized,
}

impl CavityMode {
    pub fn value(self, x: f64) -> f64 {
        match self {
            CavityMode::Sine => x.sin(),
            CavityMode::Linearized => x,
        }
    }
}

/// Drive-field amplitude profile along the atom's path.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum DriveProfile {
    /// u_L = u_L0 everywhere.
    Constant,
    /// u_L(z) = u_L0·exp(−z²/(2Δz²)), sampled along z = z_entry + v_z τ.
    Gaussian {
        width: f64,
        velocity: f64,
        z_entry: f64,
    },
}

impl DriveProfile {
    pub fn amplitude(&self, u_l0: f64, z: f64) -> f64 {
        match *self {
            DriveProfile::Constant => u_l0,
            DriveProfile::Gaussian { width, .. } => u_l0 * (-0.5 * (z / width).powi(2)).exp(),
        }
    }

    fn position(&self, tau: f64) -> f64 {
        match *self {
            DriveProfile::Constant => 0.0,
            DriveProfile::Gaussian {
                velocity, z_entry, ..
            } => z_entry + velocity * tau,
        }
    }

    fn validate(&self) -> Result<()> {
        if let DriveProfile::Gaussian {
            width,
            velocity,
            z_entry,
        } = *self
        {
            if !(width > 0.0 && width.is_finite()) {
                return Err(Error::param("width", "drive width must be positive"));
            }
            if !(velocity.is_finite() && z_entry.is_finite()) {
                return Err(Error::param("velocity", "must be finite"));
            }
        }
        Ok(())
    }
}

/// Cavity and drive mode functions together.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ModeFunctions {
    pub cavity: CavityMode,
    pub drive: DriveProfile,
}

impl Default for ModeFunctions {
    fn default() -> Self {
        Self {
            cavity: CavityMode::Sine,
            drive: DriveProfile::Constant,
        }
    }
}

impl ModeFunctions {
    pub fn cavity_mode(&self, x: f64) -> f64 {
        self.cavity.value(x)
    }

    /// The drive is flat in x, so only z matters.
    pub fn drive_profile(&self, u_l0: f64, _x: f64, z: f64) -> f64 {
        self.drive.amplitude(u_l0, z)
    }
}

/// A (+) or (−) doubly-dressed branch, or the uncoupled zero-photon channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Branch {
    Plus,
    Minus,
    Free,
}

fn check_photon(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::param(
            "n",
            "the zero-photon channel is free; potentials start at n = 1",
        ));
    }
    Ok(())
}

/// Common magnitude (g/2)(1 ∓ δ/Ω)√n; `sign` is −1 for A, +1 for B.
fn potential_scale(n: u32, params: &PhysicalParams, sign: f64) -> f64 {
    let omega = params.omega0();
    let ratio = if omega == 0.0 {
        0.0
    } else {
        params.delta / omega
    };
    0.5 * params.g * (1.0 + sign * ratio) * (n as f64).sqrt()
}

/// (U⁺, U⁻) = ∓(g/2)u(x)(1 − δ/Ω)√n, red-sideband resonance.
pub fn potential_a(n: u32, x: f64, params: &PhysicalParams) -> Result<(f64, f64)> {
    potential_a_in(CavityMode::Sine, n, x, params)
}

pub fn potential_a_in(
    mode: CavityMode,
    n: u32,
    x: f64,
    params: &PhysicalParams,
) -> Result<(f64, f64)> {
    check_photon(n)?;
    let u = mode.value(x) * potential_scale(n, params, -1.0);
    Ok((-u, u))
}

/// (V⁺, V⁻) = ±(g/2)u(x)(1 + δ/Ω)√n, blue-sideband resonance.
pub fn potential_b(n: u32, x: f64, params: &PhysicalParams) -> Result<(f64, f64)> {
    potential_b_in(CavityMode::Sine, n, x, params)
}

pub fn potential_b_in(
    mode: CavityMode,
    n: u32,
    x: f64,
    params: &PhysicalParams,
) -> Result<(f64, f64)> {
    check_photon(n)?;
    let v = mode.value(x) * potential_scale(n, params, 1.0);
    Ok((v, -v))
}

/// Branch potential for either resonance; `Free` is identically zero.
pub fn branch_potential(
    resonance: Resonance,
    branch: Branch,
    mode: CavityMode,
    n: u32,
    x: f64,
    params: &PhysicalParams,
) -> Result<f64> {
    if branch == Branch::Free {
        return Ok(0.0);
    }
    let (plus, minus) = match resonance {
        Resonance::A => potential_a_in(mode, n, x, params)?,
        Resonance::B => potential_b_in(mode, n, x, params)?,
    };
    Ok(if branch == Branch::Plus { plus } else { minus })
}

/// Three-photon Raman potential ∓ gλ²/δ² · u(x) u_L(z)² √n for δ² ≫ λ²u_L².
pub fn potential_large_detuning(
    n: u32,
    x: f64,
    z: f64,
    params: &PhysicalParams,
    modes: &ModeFunctions,
) -> Result<(f64, f64)> {
    check_photon(n)?;
    if params.delta == 0.0 {
        return Err(Error::param(
            "delta",
            "perturbative potential is singular at delta = 0",
        ));
    }
    let ul = modes.drive_profile(params.u_l0, x, z);
    let u = params.g * params.lambda.powi(2) / params.delta.powi(2)
        * modes.cavity_mode(x)
        * ul
        * ul
        * (n as f64).sqrt();
    Ok((-u, u))
}

/// Sampled potential curve for one resonance, branch and photon number.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PotentialCurve {
    pub resonance: Resonance,
    pub n: u32,
    /// (x, U⁺, U⁻)
    pub samples: Vec<(f64, f64, f64)>,
}

/// Samples both branches at `n_points` uniformly spaced x in [x_min, x_max].
pub fn sample_potential(
    resonance: Resonance,
    n: u32,
    params: &PhysicalParams,
    x_min: f64,
    x_max: f64,
    n_points: usize,
) -> Result<PotentialCurve> {
    if n_points < 2 || !(x_max > x_min) {
        return Err(Error::Grid(
            "potential sampling needs x_max > x_min and >= 2 points".into(),
        ));
    }
    let dx = (x_max - x_min) / (n_points - 1) as f64;
    let samples = (0..n_points)
        .map(|i| {
            let x = x_min + i as f64 * dx;
            let (p, m) = match resonance {
                Resonance::A => potential_a(n, x, params)?,
                Resonance::B => potential_b(n, x, params)?,
            };
            Ok((x, p, m))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PotentialCurve {
        resonance,
        n,
        samples,
    })
}

/// Relative tolerance of the α quadrature along a drive profile.
pub const ALPHA_QUAD_RTOL: f64 = 1e-10;

/// α = (g/2)∫₀ᵗ (1 − δ/√(δ² + 4λ²u_L²(z(τ)))) dτ.
///
/// With a constant profile (or none) this is ½gt(1 − δ/Ω(0)).
pub fn interaction_alpha(params: &PhysicalParams, profile: Option<&DriveProfile>) -> Result<f64> {
    interaction_parameter(params, profile, -1.0)
}

/// β = ½gt(1 + δ/Ω(0)); the profile variant integrates the same way as α.
pub fn interaction_beta(params: &PhysicalParams) -> Result<f64> {
    interaction_parameter(params, None, 1.0)
}

pub fn interaction_beta_along(params: &PhysicalParams, profile: &DriveProfile) -> Result<f64> {
    interaction_parameter(params, Some(profile), 1.0)
}

fn interaction_parameter(
    params: &PhysicalParams,
    profile: Option<&DriveProfile>,
    sign: f64,
) -> Result<f64> {
    params.validate()?;
    if !(params.t_int > 0.0) {
        return Err(Error::param("t_int", "interaction time must be > 0"));
    }
    let factor = |u_l: f64| {
        let omega = rabi_frequency(params.delta, params.lambda, u_l);
        if omega == 0.0 {
            // no fields: δ = 0 and λu_L = 0; the δ → 0 limit of the factor is 1
            1.0
        } else {
            1.0 + sign * params.delta / omega
        }
    };
    match profile {
        None | Some(DriveProfile::Constant) => Ok(0.5 * params.gt() * factor(params.u_l0)),
        Some(p) => {
            p.validate()?;
            let integral = adaptive_simpson(
                |tau| factor(p.amplitude(params.u_l0, p.position(tau))),
                0.0,
                params.t_int,
                ALPHA_QUAD_RTOL,
            )?;
            Ok(0.5 * params.g * integral)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn resonant() -> PhysicalParams {
        PhysicalParams {
            lambda: 0.5,
            delta: 0.0,
            t_int: 50.0,
            ..PhysicalParams::default()
        }
    }

    #[test]
    fn potential_a_examples() {
        let p = resonant();
        assert_eq!(potential_a(1, 0.0, &p).unwrap(), (-0.0, 0.0));
        let (up, um) = potential_a(1, FRAC_PI_2, &p).unwrap();
        assert!((up + 0.5).abs() < 1e-15 && (um - 0.5).abs() < 1e-15);
        let (up, _) = potential_a(4, FRAC_PI_2, &p).unwrap();
        assert!((up + 1.0).abs() < 1e-15);
        assert!(potential_a(0, 1.0, &p).is_err());
    }

    #[test]
    fn potential_b_examples() {
        let p = resonant();
        let (vp, vm) = potential_b(1, 0.0, &p).unwrap();
        assert!(vp == 0.0 && vm == 0.0);
        let (vp, _) = potential_b(1, FRAC_PI_2, &p).unwrap();
        assert!((vp - 0.5).abs() < 1e-15);
        let undriven = PhysicalParams {
            lambda: 0.0,
            delta: 2.0,
            ..PhysicalParams::default()
        };
        let x = 0.8f64;
        let (vp, _) = potential_b(3, x, &undriven).unwrap();
        assert!((vp - x.sin() * 3f64.sqrt()).abs() < 1e-15);
        assert!(potential_b(0, 1.0, &p).is_err());
    }

    #[test]
    fn large_detuning_agrees_with_exact() {
        // d = 4λ²u²/δ² = 0.01
        let p = PhysicalParams {
            lambda: 0.05,
            delta: 1.0,
            ..PhysicalParams::default()
        };
        let modes = ModeFunctions::default();
        let (exact, _) = potential_a(1, FRAC_PI_2, &p).unwrap();
        let (pert, _) = potential_large_detuning(1, FRAC_PI_2, 0.0, &p, &modes).unwrap();
        assert!(((exact - pert) / exact).abs() < 0.01);

        let off = PhysicalParams { lambda: 0.0, ..p };
        assert_eq!(
            potential_large_detuning(1, 1.0, 0.0, &off, &modes).unwrap(),
            (-0.0, 0.0)
        );
        let (u, _) = potential_large_detuning(2, 0.0, 0.0, &p, &modes).unwrap();
        assert_eq!(u, 0.0);
        let zero = PhysicalParams { delta: 0.0, ..p };
        assert!(potential_large_detuning(1, 1.0, 0.0, &zero, &modes).is_err());
    }

    #[test]
    fn alpha_beta_examples() {
        let fig3a = PhysicalParams::from_drive_parameter(1.0, 50.0).unwrap();
        let alpha = interaction_alpha(&fig3a, None).unwrap();
        assert!((alpha - 25.0 * (1.0 - 0.5f64.sqrt())).abs() < 1e-12);
        assert!((alpha - 7.322_330_470_336_311).abs() < 1e-9);

        let fig4b = PhysicalParams::from_drive_parameter(1.5, 50.0).unwrap();
        let beta = interaction_beta(&fig4b).unwrap();
        assert!((beta - 25.0 * (1.0 + 1.0 / 2.5f64.sqrt())).abs() < 1e-12);
        assert!((beta - 40.811_388_300_841_9).abs() < 1e-9);

        let res = resonant();
        assert_eq!(interaction_alpha(&res, None).unwrap(), 25.0);
        assert_eq!(interaction_beta(&res).unwrap(), 25.0);

        let undriven = PhysicalParams {
            lambda: 0.0,
            delta: 1.0,
            t_int: 50.0,
            ..PhysicalParams::default()
        };
        assert_eq!(interaction_alpha(&undriven, None).unwrap(), 0.0);
        assert_eq!(interaction_beta(&undriven).unwrap(), 50.0);

        let zero_t = PhysicalParams { t_int: 0.0, ..res };
        assert!(interaction_alpha(&zero_t, None).is_err());
    }

    #[test]
    fn profile_quadrature_reproduces_constant_limit() {
        let p = PhysicalParams::from_drive_parameter(1.0, 50.0).unwrap();
        let closed = interaction_alpha(&p, None).unwrap();
        // a very wide Gaussian is flat over the path
        let wide = DriveProfile::Gaussian {
            width: 1e12,
            velocity: 1.0,
            z_entry: -25.0,
        };
        let quad = interaction_alpha(&p, Some(&wide)).unwrap();
        assert!(((quad - closed) / closed).abs() < 1e-9);
    }

    #[test]
    fn gaussian_profile_reduces_alpha() {
        let p = PhysicalParams::from_drive_parameter(1.0, 50.0).unwrap();
        let closed = interaction_alpha(&p, None).unwrap();
        let g = DriveProfile::Gaussian {
            width: 10.0,
            velocity: 1.0,
            z_entry: -25.0,
        };
        let a = interaction_alpha(&p, Some(&g)).unwrap();
        let b = interaction_beta_along(&p, &g).unwrap();
        assert!(a > 0.0 && a < closed);
        assert!((a + b - 50.0).abs() < 1e-8);
    }

    proptest! {
        #[test]
        fn alpha_plus_beta_is_gt(lambda in 0.0f64..5.0, delta in -5.0f64..5.0, gt in 0.1f64..200.0) {
            let p = PhysicalParams { lambda, delta, t_int: gt, ..PhysicalParams::default() };
            if p.omega0() > 0.0 {
                let a = interaction_alpha(&p, None).unwrap();
                let b = interaction_beta(&p).unwrap();
                prop_assert!((a + b - gt).abs() <= 1e-12 * gt);
                if delta >= 0.0 {
                    prop_assert!(a >= 0.0 && b >= 0.0);
                    prop_assert!(a <= gt / 2.0 + 1e-12 && gt / 2.0 <= b + 1e-12);
                }
            }
        }

        #[test]
        fn branches_antisymmetric_and_sqrt_scaling(
            lambda in 0.0f64..3.0, delta in -3.0f64..3.0, x in -10.0f64..10.0, n in 1u32..50,
        ) {
            let p = PhysicalParams { lambda, delta, ..PhysicalParams::default() };
            let (ap, am) = potential_a(n, x, &p).unwrap();
            let (bp, bm) = potential_b(n, x, &p).unwrap();
            prop_assert_eq!(ap + am, 0.0);
            prop_assert_eq!(bp + bm, 0.0);
            let (ap4, _) = potential_a(4 * n, x, &p).unwrap();
            let (bp4, _) = potential_b(4 * n, x, &p).unwrap();
            prop_assert!((ap4 - 2.0 * ap).abs() <= 1e-14 * ap.abs().max(1e-300));
            prop_assert!((bp4 - 2.0 * bp).abs() <= 1e-14 * bp.abs().max(1e-300));
        }
    }
}
