use std::f64::consts::PI;

use serde::Serialize;

use crate::dressed::{doubly_dressed_basis, dressed_states, DoublyDressedState, DressedState};
use crate::error::{Error, Result};
use crate::field::CavityFieldState;
use crate::oracle::grid::SpatialGrid;
use crate::params::{PhysicalParams, Resonance};
use crate::potentials::{branch_potential, Branch, CavityMode};
use crate::C64;

/// Channels whose weight falls below this (in |w|²) are not built.
pub const CHANNEL_WEIGHT_CUTOFF: f64 = 1e-30;

/// One decoupled scalar channel.
///
/// `photon` is the doubly-dressed index n; a non-free channel evolves in the
/// potential carrying √(n+1).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Channel {
    pub photon: u32,
    pub branch: Branch,
    pub weight: C64,
    #[serde(skip)]
    pub psi: Vec<C64>,
    #[serde(skip)]
    pub potential: Vec<f64>,
}

impl Channel {
    pub fn label(&self) -> String {
        match self.branch {
            Branch::Plus => format!("n{}_plus", self.photon),
            Branch::Minus => format!("n{}_minus", self.photon),
            Branch::Free => "free".to_string(),
        }
    }

    /// ∫|ψ|² dx.
    pub fn norm_sqr(&self, dx: f64) -> f64 {
        dx * self.psi.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChannelSet {
    pub channels: Vec<Channel>,
    pub resonance: Resonance,
    pub params: PhysicalParams,
    pub k_dx: f64,
    pub grid: SpatialGrid,
    pub mode: CavityMode,
    pub center_x: f64,
}

impl ChannelSet {
    pub fn weight_norm(&self) -> f64 {
        self.channels.iter().map(|c| c.weight.norm_sqr()).sum()
    }

    /// Σ |w|² ∫|ψ|² dx.
    pub fn total_probability(&self) -> f64 {
        let dx = self.grid.dx();
        self.channels
            .iter()
            .map(|c| c.weight.norm_sqr() * c.norm_sqr(dx))
            .sum()
    }

    pub fn max_abs_potential(&self) -> f64 {
        self.channels
            .iter()
            .flat_map(|c| c.potential.iter())
            .fold(0.0, |m, u| m.max(u.abs()))
    }
}

/// Normalized Gaussian amplitude with |ψ̃(p̄)|² = W⁰(p̄).
pub fn gaussian_packet(grid: &SpatialGrid, k_dx: f64, center_x: f64) -> Result<Vec<C64>> {
    if !(k_dx > 0.0 && k_dx.is_finite()) {
        return Err(Error::param(
            "k_dx",
            format!("packet width must be > 0, got {k_dx}"),
        ));
    }
    if !center_x.is_finite() {
        return Err(Error::param("center_x", "must be finite"));
    }
    let sigma_x = k_dx / 2f64.sqrt();
    if center_x - 8.0 * sigma_x < grid.x_min() || center_x + 8.0 * sigma_x > grid.x_max() {
        return Err(Error::Grid(format!(
            "grid [{}, {}] cannot hold 8 standard deviations ({sigma_x:.4}) of a packet at x = {center_x}",
            grid.x_min(),
            grid.x_max()
        )));
    }
    let sigma_p = 1.0 / (2f64.sqrt() * k_dx);
    if 8.0 * sigma_p > grid.k_max() {
        return Err(Error::Grid(format!(
            "grid spacing {} too coarse for packet width {k_dx}",
            grid.dx()
        )));
    }
    let norm = (PI * k_dx * k_dx).powf(-0.25);
    let mut psi: Vec<C64> = (0..grid.n_points())
        .map(|i| {
            let s = (grid.x(i) - center_x) / k_dx;
            C64::new(norm * (-0.5 * s * s).exp(), 0.0)
        })
        .collect();
    let discrete = (grid.dx() * psi.iter().map(|c| c.norm_sqr()).sum::<f64>()).sqrt();
    psi.iter_mut().for_each(|c| *c /= discrete);
    Ok(psi)
}

/// ⟨basis| (|g⟩ ⊗ Σ c_m|m⟩), evaluated in the bare product basis.
fn project_ground(
    basis: &DoublyDressedState,
    phi1: &DressedState,
    phi2: &DressedState,
    field: &CavityFieldState,
) -> C64 {
    basis
        .to_bare(phi1, phi2)
        .iter()
        .map(|(m, atom)| atom.inner(&DressedState::GROUND) * field.c(*m as usize))
        .sum()
}

/// Decomposes |g⟩ ⊗ field into decoupled channels and gives each the shared
/// initial Gaussian and its branch potential.
///
/// Weights are the overlaps of the initial state with the doubly-dressed
/// basis vectors (Δt = 0), built from the dressed states directly rather
/// than from the closed-form deflection weights.
pub fn build_channels(
    resonance: Resonance,
    field: &CavityFieldState,
    params: &PhysicalParams,
    k_dx: f64,
    grid: &SpatialGrid,
    center_x: f64,
    mode: CavityMode,
) -> Result<ChannelSet> {
    params.validate()?;
    let coeffs = params.coefficients()?;
    let (phi1, phi2) = dressed_states(&coeffs, params.phi_l);
    let psi0 = gaussian_packet(grid, k_dx, center_x)?;
    let xs = grid.xs();

    let mut channels = Vec::new();
    let free_state = match resonance {
        Resonance::A => phi2,
        Resonance::B => phi1,
    };
    let free_weight = free_state.inner(&DressedState::GROUND) * field.c(0);
    if free_weight.norm_sqr() > CHANNEL_WEIGHT_CUTOFF {
        channels.push(Channel {
            photon: 0,
            branch: Branch::Free,
            weight: free_weight,
            psi: psi0.clone(),
            potential: vec![0.0; xs.len()],
        });
    }

    for n in 0..=field.n_max() as u32 {
        let (plus, minus) = doubly_dressed_basis(resonance, n, params.phi_l, params.phi_c, 0.0);
        for (branch, state) in [(Branch::Plus, plus), (Branch::Minus, minus)] {
            let weight = project_ground(&state, &phi1, &phi2, field);
            if weight.norm_sqr() <= CHANNEL_WEIGHT_CUTOFF {
                continue;
            }
            let potential = xs
                .iter()
                .map(|&x| branch_potential(resonance, branch, mode, n + 1, x, params))
                .collect::<Result<Vec<f64>>>()?;
            channels.push(Channel {
                photon: n,
                branch,
                weight,
                psi: psi0.clone(),
                potential,
            });
        }
    }

    Ok(ChannelSet {
        channels,
        resonance,
        params: *params,
        k_dx,
        grid: *grid,
        mode,
        center_x,
    })
}
