use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::oracle::channels::ChannelSet;
use crate::par::Execution;
use crate::raman_nath::{MomentumDistribution, MomentumGrid};
use crate::C64;

/// Twiddles are re-seeded from an exact cis() this often.
const RESEED: usize = 64;

fn check_bandwidth(set: &ChannelSet, grid: &MomentumGrid) -> Result<()> {
    let k_max = set.grid.k_max();
    if grid.p_min().abs() > k_max || grid.p_max().abs() > k_max {
        return Err(Error::Grid(format!(
            "momentum grid [{}, {}] exceeds the spatial bandwidth ±{k_max:.4}",
            grid.p_min(),
            grid.p_max()
        )));
    }
    Ok(())
}

/// ψ̃_c(p) = dx/√(2π) Σ_j ψ_c(x_j) e^{+ip x_j} for every channel c.
fn amplitudes_at(set: &ChannelSet, p: f64, out: &mut [C64]) {
    let dx = set.grid.dx();
    out.iter_mut().for_each(|a| *a = C64::new(0.0, 0.0));
    let step = C64::from_polar(1.0, p * dx);
    let mut z = C64::new(0.0, 0.0);
    for j in 0..set.grid.n_points() {
        if j % RESEED == 0 {
            z = C64::from_polar(1.0, p * set.grid.x(j));
        } else {
            z *= step;
        }
        for (a, ch) in out.iter_mut().zip(&set.channels) {
            *a += ch.psi[j] * z;
        }
    }
    let norm = dx / TAU.sqrt();
    out.iter_mut().for_each(|a| *a *= norm);
}

/// |ψ̃_c(p̄)|² per channel on `grid`, unweighted.
pub fn channel_densities(
    set: &ChannelSet,
    grid: &MomentumGrid,
    exec: Execution,
) -> Result<Vec<Vec<f64>>> {
    check_bandwidth(set, grid)?;
    let rows = exec.map_range(grid.n_points(), |i| {
        let mut amps = vec![C64::new(0.0, 0.0); set.channels.len()];
        amplitudes_at(set, grid.point(i), &mut amps);
        amps.iter().map(|a| a.norm_sqr()).collect::<Vec<f64>>()
    });
    Ok((0..set.channels.len())
        .map(|c| rows.iter().map(|r| r[c]).collect())
        .collect())
}

/// Incoherent sum Σ_c |w_c|² |ψ̃_c(p̄)|².
///
/// Channels are orthogonal in the internal/photon space, so cross terms
/// vanish. The transform is evaluated directly at each requested p̄, which
/// is the band-limited interpolation of the discrete spectrum.
pub fn momentum_distribution(
    set: &ChannelSet,
    grid: &MomentumGrid,
    exec: Execution,
) -> Result<MomentumDistribution> {
    check_bandwidth(set, grid)?;
    let weights: Vec<f64> = set.channels.iter().map(|c| c.weight.norm_sqr()).collect();
    let density = exec.map_range(grid.n_points(), |i| {
        let mut amps = vec![C64::new(0.0, 0.0); set.channels.len()];
        amplitudes_at(set, grid.point(i), &mut amps);
        amps.iter()
            .zip(&weights)
            .map(|(a, w)| w * a.norm_sqr())
            .sum::<f64>()
    });
    Ok(MomentumDistribution {
        grid: *grid,
        k_dx: set.k_dx,
        density,
        peaks: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CavityFieldState;
    use crate::oracle::channels::build_channels;
    use crate::oracle::grid::SpatialGrid;
    use crate::params::{PhysicalParams, Resonance};
    use crate::potentials::CavityMode;
    use crate::raman_nath::{initial_distribution, sup_distance};

    #[test]
    fn initial_state_matches_w0() {
        let p = PhysicalParams::from_drive_parameter(1.0, 5.0).unwrap();
        let set = build_channels(
            Resonance::A,
            &CavityFieldState::vacuum(),
            &p,
            1.0,
            &SpatialGrid::periodic(4, 512).unwrap(),
            0.0,
            CavityMode::Sine,
        )
        .unwrap();
        let grid = MomentumGrid::new(-10.0, 10.0, 401).unwrap();
        let w = momentum_distribution(&set, &grid, Execution::Sequential).unwrap();
        let w0 = initial_distribution(1.0, &grid).unwrap();
        assert!(sup_distance(&w, &w0).unwrap() < 1e-12);
        let par = momentum_distribution(&set, &grid, Execution::Parallel).unwrap();
        assert_eq!(w, par);
    }

    #[test]
    fn rejects_out_of_band_grid() {
        let p = PhysicalParams::from_drive_parameter(1.0, 5.0).unwrap();
        let set = build_channels(
            Resonance::A,
            &CavityFieldState::vacuum(),
            &p,
            1.0,
            &SpatialGrid::periodic(4, 128).unwrap(),
            0.0,
            CavityMode::Sine,
        )
        .unwrap();
        let grid = MomentumGrid::new(-40.0, 40.0, 11).unwrap();
        assert!(matches!(
            momentum_distribution(&set, &grid, Execution::Sequential),
            Err(Error::Grid(_))
        ));
    }
}
