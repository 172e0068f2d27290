use serde::{Deserialize, Serialize};

use crate::dressed::{dressed_coefficients, rabi_frequency, DressedCoefficients};
use crate::error::{Error, Result};

/// Which Mollow sideband the cavity is tuned to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Resonance {
    /// ω_c = ω_L − Ω(0): channels N_n^(±), potentials U_n^(±), parameter α.
    A,
    /// ω_c = ω_L + Ω(0): channels R_n^(±), potentials V_n^(±), parameter β.
    B,
}

impl std::fmt::Display for Resonance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Resonance::A => f.write_str("A"),
            Resonance::B => f.write_str("B"),
        }
    }
}

/// Coupling constants, detuning, phases, decay rates and interaction time.
///
/// Lengths are measured in units of 1/k, so the cavity wavenumber does not
/// appear explicitly. The atomic mass enters only through `epsilon`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// Cavity coupling constant.
    pub g: f64,
    /// Classical-drive coupling constant.
    pub lambda: f64,
    /// Detuning δ = ω_e − ω_g − ω_L; any sign.
    pub delta: f64,
    /// Drive phase φ_L in radians.
    pub phi_l: f64,
    /// Cavity-mode phase φ_c in radians.
    pub phi_c: f64,
    /// Atomic decay rate γ.
    pub gamma: f64,
    /// Cavity decay rate κ.
    pub kappa: f64,
    /// Kinetic coefficient ε = ħk²/(2mg).
    pub epsilon: f64,
    /// Peak drive amplitude u_L(0).
    pub u_l0: f64,
    /// Interaction time.
    pub t_int: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self {
            g: 1.0,
            lambda: 0.0,
            delta: 0.0,
            phi_l: 0.0,
            phi_c: 0.0,
            gamma: 0.0,
            kappa: 0.0,
            epsilon: 0.0,
            u_l0: 1.0,
            t_int: 0.0,
        }
    }
}

impl PhysicalParams {
    /// Parameters fixed by the drive parameter d = 4λ²u_L²/δ² and the
    /// product gt, with g = δ = u_L0 = 1 (δ > 0).
    pub fn from_drive_parameter(d: f64, gt: f64) -> Result<Self> {
        if !(d >= 0.0) || !d.is_finite() {
            return Err(Error::param(
                "d",
                format!("must be finite and >= 0, got {d}"),
            ));
        }
        let p = Self {
            lambda: d.sqrt() / 2.0,
            delta: 1.0,
            t_int: gt,
            ..Self::default()
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("g", self.g),
            ("lambda", self.lambda),
            ("delta", self.delta),
            ("phi_l", self.phi_l),
            ("phi_c", self.phi_c),
            ("gamma", self.gamma),
            ("kappa", self.kappa),
            ("epsilon", self.epsilon),
            ("u_l0", self.u_l0),
            ("t_int", self.t_int),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::param(name, format!("must be finite, got {v}")));
            }
        }
        if self.g <= 0.0 {
            return Err(Error::param("g", "must be > 0"));
        }
        let nonneg = [
            ("lambda", self.lambda),
            ("gamma", self.gamma),
            ("kappa", self.kappa),
            ("epsilon", self.epsilon),
            ("u_l0", self.u_l0),
            ("t_int", self.t_int),
        ];
        for (name, v) in nonneg {
            if v < 0.0 {
                return Err(Error::param(name, format!("must be >= 0, got {v}")));
            }
        }
        Ok(())
    }

    /// Peak Rabi frequency Ω(0) = √(δ² + 4λ²u_L0²).
    pub fn omega0(&self) -> f64 {
        rabi_frequency(self.delta, self.lambda, self.u_l0)
    }

    /// Dressed coefficients at the drive maximum.
    pub fn coefficients(&self) -> Result<DressedCoefficients> {
        dressed_coefficients(self.delta, self.omega0())
    }

    pub fn gt(&self) -> f64 {
        self.g * self.t_int
    }

    /// d = 4λ²u_L0²/δ²; infinite when δ = 0 and the drive is on.
    pub fn drive_parameter(&self) -> f64 {
        let num = 4.0 * self.lambda.powi(2) * self.u_l0.powi(2);
        if num == 0.0 {
            0.0
        } else {
            num / self.delta.powi(2)
        }
    }

    /// Relative phase φ_L − φ_c, the only phase combination the
    /// deflection pattern depends on.
    pub fn relative_phase(&self) -> f64 {
        self.phi_l - self.phi_c
    }

    /// Sets λ so that 4λ²u_L0²/δ² = d at the current δ and u_L0.
    pub fn set_drive_parameter(&mut self, d: f64) -> Result<()> {
        if !(d >= 0.0) || !d.is_finite() {
            return Err(Error::param(
                "d",
                format!("must be finite and >= 0, got {d}"),
            ));
        }
        if self.delta == 0.0 {
            return Err(Error::param("d", "undefined for delta = 0"));
        }
        if self.u_l0 == 0.0 {
            return Err(Error::param("d", "undefined for u_l0 = 0"));
        }
        self.lambda = self.delta.abs() * d.sqrt() / (2.0 * self.u_l0);
        Ok(())
    }
}
