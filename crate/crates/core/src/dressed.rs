//! Dressed-state algebra for the atom + classical-field subsystem and the
//! doubly-dressed basis formed with cavity photon-number states.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::Resonance;
use crate::C64;

/// Ω = √(δ² + 4λ²u_L²).
pub fn rabi_frequency(delta: f64, lambda: f64, u_l: f64) -> f64 {
    let drive = 2.0 * lambda * u_l;
    delta.hypot(drive)
}

/// Rabi frequency with the amplitudes a, b of |g⟩, |e⟩ in |Φ₁⟩.
///
/// a and b are non-negative reals; every phase lives in the explicit
/// e^{±iφ_L} factors of the states built from them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DressedCoefficients {
    pub omega_rabi: f64,
    pub a: f64,
    pub b: f64,
}

impl DressedCoefficients {
    /// Bare-atom limit a = 1, b = 0 (no drive, δ > 0).
    pub const UNDRIVEN: Self = Self {
        omega_rabi: 1.0,
        a: 1.0,
        b: 0.0,
    };

    /// Builds coefficients directly from a, b (normalized on entry).
    pub fn from_amplitudes(a: f64, b: f64) -> Result<Self> {
        if !(a >= 0.0 && b >= 0.0) {
            return Err(Error::Inconsistent(format!(
                "dressed amplitudes must be non-negative, got a={a}, b={b}"
            )));
        }
        let norm = a.hypot(b);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Inconsistent("dressed amplitudes vanish".into()));
        }
        Ok(Self {
            omega_rabi: f64::NAN,
            a: a / norm,
            b: b / norm,
        })
    }

    pub fn a2(&self) -> f64 {
        self.a * self.a
    }

    pub fn b2(&self) -> f64 {
        self.b * self.b
    }
}

/// a = √((1 + δ/Ω)/2), b = √((1 − δ/Ω)/2).
pub fn dressed_coefficients(delta: f64, omega: f64) -> Result<DressedCoefficients> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::Inconsistent(format!(
            "Rabi frequency must be positive and finite, got {omega} (no fields?)"
        )));
    }
    // sqrt(δ²) may round one ulp below |δ|
    if omega < delta.abs() * (1.0 - 4.0 * f64::EPSILON) {
        return Err(Error::Inconsistent(format!(
            "Rabi frequency {omega} below |delta| = {}",
            delta.abs()
        )));
    }
    let omega = omega.max(delta.abs());
    let a = ((omega + delta) / (2.0 * omega)).sqrt();
    let b = ((omega - delta) / (2.0 * omega)).sqrt();
    Ok(DressedCoefficients {
        omega_rabi: omega,
        a,
        b,
    })
}

/// Quasienergies (ω₁, ω₂) = (ω_g + (δ − Ω)/2, ω_e − (δ − Ω)/2).
pub fn quasienergies(omega_g: f64, omega_e: f64, delta: f64, omega: f64) -> (f64, f64) {
    let shift = 0.5 * (delta - omega);
    (omega_g + shift, omega_e - shift)
}

/// Atomic state in the bare {|g⟩, |e⟩} basis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DressedState {
    pub coeff_g: C64,
    pub coeff_e: C64,
}

impl DressedState {
    pub const GROUND: Self = Self {
        coeff_g: C64::new(1.0, 0.0),
        coeff_e: C64::new(0.0, 0.0),
    };

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> C64 {
        self.coeff_g.conj() * other.coeff_g + self.coeff_e.conj() * other.coeff_e
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeff_g.norm_sqr() + self.coeff_e.norm_sqr()
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            coeff_g: self.coeff_g * c,
            coeff_e: self.coeff_e * c,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            coeff_g: self.coeff_g + other.coeff_g,
            coeff_e: self.coeff_e + other.coeff_e,
        }
    }
}

/// |Φ₁⟩ = a|g⟩ + b e^{−iφ_L}|e⟩ and |Φ₂⟩ = −e^{iφ_L} b|g⟩ + a|e⟩.
pub fn dressed_states(coeffs: &DressedCoefficients, phi_l: f64) -> (DressedState, DressedState) {
    let (a, b) = (coeffs.a, coeffs.b);
    let phase = C64::from_polar(1.0, phi_l);
    let phi1 = DressedState {
        coeff_g: C64::new(a, 0.0),
        coeff_e: phase.conj() * b,
    };
    let phi2 = DressedState {
        coeff_g: -phase * b,
        coeff_e: C64::new(a, 0.0),
    };
    (phi1, phi2)
}

/// Amplitudes (c₁, c₂) with |g⟩ = c₁|Φ₁⟩ + c₂|Φ₂⟩, i.e. (a, −b e^{−iφ_L}).
pub fn decompose_ground(coeffs: &DressedCoefficients, phi_l: f64) -> (C64, C64) {
    (C64::new(coeffs.a, 0.0), -C64::from_polar(coeffs.b, -phi_l))
}

/// Index of the atom-drive dressed state |Φ₁⟩ or |Φ₂⟩.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum DressedIndex {
    One,
    Two,
}

/// Superposition of product states |Φ_i⟩|n⟩.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DoublyDressedState {
    pub entries: Vec<(DressedIndex, u32, C64)>,
}

impl DoublyDressedState {
    pub fn amplitude(&self, index: DressedIndex, n: u32) -> C64 {
        self.entries
            .iter()
            .filter(|(i, m, _)| *i == index && *m == n)
            .map(|(_, _, c)| *c)
            .sum()
    }

    /// ⟨self|other⟩ in the orthonormal product basis {|Φ_i⟩|n⟩}.
    pub fn inner(&self, other: &Self) -> C64 {
        self.entries
            .iter()
            .map(|(i, n, c)| c.conj() * other.amplitude(*i, *n))
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.inner(self).re
    }

    /// Expands into the bare basis: list of (|g⟩/|e⟩ amplitudes, photon number).
    pub fn to_bare(&self, phi1: &DressedState, phi2: &DressedState) -> Vec<(u32, DressedState)> {
        let mut out: Vec<(u32, DressedState)> = Vec::new();
        for (idx, n, c) in &self.entries {
            let atom = match idx {
                DressedIndex::One => phi1.scale(*c),
                DressedIndex::Two => phi2.scale(*c),
            };
            match out.iter_mut().find(|(m, _)| m == n) {
                Some((_, s)) => *s = s.add(&atom),
                None => out.push((*n, atom)),
            }
        }
        out.sort_by_key(|(n, _)| *n);
        out
    }
}

/// The (+, −) doubly-dressed pair for photon index `n`.
///
/// A: |N_n^(±)⟩ = (|Φ₁⟩|n⟩ ± e^{i(Δt + φ_c − 2φ_L)}|Φ₂⟩|n+1⟩)/√2.
/// B: |R_n^(±)⟩ = (|Φ₁⟩|n+1⟩ ± e^{i(Δt − φ_c)}|Φ₂⟩|n⟩)/√2.
///
/// `n` is unsigned, so negative photon indices cannot be expressed.
pub fn doubly_dressed_basis(
    resonance: Resonance,
    n: u32,
    phi_l: f64,
    phi_c: f64,
    delta_t_phase: f64,
) -> (DoublyDressedState, DoublyDressedState) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let (n1, n2, phase) = match resonance {
        Resonance::A => (n, n + 1, delta_t_phase + phi_c - 2.0 * phi_l),
        Resonance::B => (n + 1, n, delta_t_phase - phi_c),
    };
    let p = C64::from_polar(s, phase);
    let first = C64::new(s, 0.0);
    let plus = DoublyDressedState {
        entries: vec![(DressedIndex::One, n1, first), (DressedIndex::Two, n2, p)],
    };
    let minus = DoublyDressedState {
        entries: vec![(DressedIndex::One, n1, first), (DressedIndex::Two, n2, -p)],
    };
    (plus, minus)
}

/// Static prefactors of A_ji = ⟨Φ_j|σ₋(t)|Φ_i⟩.
///
/// The time-dependent factors are not evaluated: A₁₁ and A₂₂ oscillate as
/// e^{−iω_L t}, A₁₂ and A₂₁ as e^{−i(ω_L ± Ω)t} (the sign selects which
/// sideband the pair couples through).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RamanCoefficients {
    pub a11: C64,
    pub a12: C64,
    pub a21: C64,
    pub a22: C64,
}

pub fn raman_coefficients(coeffs: &DressedCoefficients, phi_l: f64) -> RamanCoefficients {
    let (a, b) = (coeffs.a, coeffs.b);
    let a11 = C64::from_polar(a * b, -phi_l);
    RamanCoefficients {
        a11,
        a12: C64::new(a * a, 0.0),
        a21: -C64::from_polar(b * b, -2.0 * phi_l),
        a22: -a11,
    }
}
