//! Doubly-dressed atomic wave packets.
//!
//! A two-level atom driven by a strong classical field and crossing a
//! quantized standing-wave cavity mode sees, in the doubly-dressed basis,
//! a set of decoupled scalar potentials. This crate provides:
//!
//! * [`dressed`]: Rabi frequency, dressed coefficients, quasienergies and the
//!   doubly-dressed basis vectors for both sideband resonances.
//! * [`field`]: cavity photon-number amplitude vectors.
//! * [`potentials`]: scattering potentials and the interaction parameters α, β.
//! * [`adiabatic`]: validity-regime diagnostics.
//! * [`raman_nath`]: closed-form deflection momentum distributions W₁, W₂.
//! * [`oracle`]: split-operator wave-packet propagation used as an independent
//!   check on the closed forms.
//!
//! Units: ħ = 1, frequencies in the same units as `g`, lengths in 1/k,
//! momenta in ħk, times in the inverse frequency unit.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adiabatic;
pub mod dressed;
pub mod error;
pub mod export;
pub mod field;
pub mod oracle;
pub mod par;
pub mod params;
pub mod potentials;
pub mod quad;
pub mod raman_nath;

pub use error::{Error, Result};
pub use field::CavityFieldState;
pub use params::{PhysicalParams, Resonance};

/// Complex amplitude type used throughout the crate.
pub type C64 = num_complex::Complex64;
