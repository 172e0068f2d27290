//! Independent reference: the initial state is projected onto the
//! doubly-dressed channels, each channel's centre-of-mass wavefunction is
//! propagated on a periodic grid with a split-operator scheme, and the
//! momentum distribution is read off spectrally.

mod channels;
mod check;
mod grid;
mod momentum;
mod propagate;

pub use channels::{build_channels, gaussian_packet, Channel, ChannelSet, CHANNEL_WEIGHT_CUTOFF};
pub use check::{
    raman_nath_check, run_oracle, ChannelSummary, OracleRun, OracleSettings, RamanNathEntry,
    RamanNathReport,
};
pub use grid::SpatialGrid;
pub use momentum::{channel_densities, momentum_distribution};
pub use propagate::{
    default_dt, evolve, evolve_in_place, populated_momentum, EvolutionStats,
    DEFAULT_PHASE_PER_STEP, NORM_DRIFT_LIMIT,
};

/// Weighted position densities |w_c|²|ψ_c(x)|², one column per channel.
pub fn position_density_columns(set: &ChannelSet) -> (Vec<f64>, Vec<(String, Vec<f64>)>) {
    let series = set
        .channels
        .iter()
        .map(|c| {
            let w = c.weight.norm_sqr();
            (c.label(), c.psi.iter().map(|z| w * z.norm_sqr()).collect())
        })
        .collect();
    (set.grid.xs(), series)
}
