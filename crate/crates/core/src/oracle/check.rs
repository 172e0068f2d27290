use serde::Serialize;

use crate::error::{Error, Result};
use crate::export::SCHEMA_VERSION;
use crate::field::CavityFieldState;
use crate::oracle::channels::{build_channels, ChannelSet};
use crate::oracle::grid::SpatialGrid;
use crate::oracle::momentum::momentum_distribution;
use crate::oracle::propagate::{evolve, EvolutionStats};
use crate::par::Execution;
use crate::params::{PhysicalParams, Resonance};
use crate::potentials::{Branch, CavityMode};
use crate::raman_nath::{
    auto_grid, deflect, sup_distance, tv_distance, MomentumDistribution, MomentumGrid,
};
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleSettings {
    pub grid: SpatialGrid,
    pub mode: CavityMode,
    pub center_x: f64,
    /// Requested step; `None` picks the default step.
    pub dt: Option<f64>,
    pub exec: Execution,
}

impl Default for OracleSettings {
    fn default() -> Self {
        Self {
            grid: SpatialGrid::default(),
            mode: CavityMode::Sine,
            center_x: 0.0,
            dt: None,
            exec: Execution::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChannelSummary {
    pub label: String,
    pub photon: u32,
    pub branch: Branch,
    pub weight: C64,
    pub probability: f64,
}

fn summarize(set: &ChannelSet) -> Vec<ChannelSummary> {
    set.channels
        .iter()
        .map(|c| ChannelSummary {
            label: c.label(),
            photon: c.photon,
            branch: c.branch,
            weight: c.weight,
            probability: c.weight.norm_sqr(),
        })
        .collect()
}

/// Oracle propagation next to the closed form on the same momentum grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleRun {
    pub schema_version: u32,
    pub resonance: Resonance,
    pub epsilon: f64,
    pub mode: CavityMode,
    pub channels: Vec<ChannelSummary>,
    pub stats: EvolutionStats,
    pub tv_to_analytic: f64,
    pub sup_to_analytic: f64,
    #[serde(skip)]
    pub analytic: MomentumDistribution,
    #[serde(skip)]
    pub oracle: MomentumDistribution,
    #[serde(skip)]
    pub final_set: ChannelSet,
}

/// Propagates for `params.t_int` with `params.epsilon` and compares with the
/// closed-form distribution. The momentum grid is auto-sized when not given.
pub fn run_oracle(
    params: &PhysicalParams,
    resonance: Resonance,
    field: &CavityFieldState,
    k_dx: f64,
    momentum_grid: Option<&MomentumGrid>,
    settings: &OracleSettings,
) -> Result<OracleRun> {
    let grid = match momentum_grid {
        Some(g) => *g,
        None => auto_grid(params, resonance, field, k_dx)?,
    };
    let analytic = deflect(params, resonance, field, k_dx, Some(&grid))?;
    let set = build_channels(
        resonance,
        field,
        params,
        k_dx,
        &settings.grid,
        settings.center_x,
        settings.mode,
    )?;
    let channels = summarize(&set);
    let (final_set, stats) = evolve(
        set,
        params.epsilon,
        params.t_int,
        settings.dt,
        settings.exec,
    )?;
    let oracle = momentum_distribution(&final_set, &grid, settings.exec)?;
    Ok(OracleRun {
        schema_version: SCHEMA_VERSION,
        resonance,
        epsilon: params.epsilon,
        mode: settings.mode,
        channels,
        stats,
        tv_to_analytic: tv_distance(&oracle, &analytic)?,
        sup_to_analytic: sup_distance(&oracle, &analytic)?,
        analytic,
        oracle,
        final_set,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RamanNathEntry {
    pub epsilon: f64,
    /// TV distance to the closed-form distribution.
    pub tv_to_analytic: f64,
    /// TV distance to the same oracle run with ε = 0.
    pub tv_to_raman_nath: f64,
    pub dt: f64,
    pub steps: usize,
    pub max_norm_drift: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RamanNathReport {
    pub schema_version: u32,
    pub resonance: Resonance,
    pub mode: CavityMode,
    pub k_dx: f64,
    pub gt: f64,
    /// TV distance between the ε = 0 oracle run and the closed form.
    pub reference_tv_to_analytic: f64,
    pub entries: Vec<RamanNathEntry>,
}

/// Sweeps the kinetic coefficient ε and reports how far each oracle run
/// departs from the kinetic-free limit.
pub fn raman_nath_check(
    params: &PhysicalParams,
    resonance: Resonance,
    field: &CavityFieldState,
    k_dx: f64,
    epsilons: &[f64],
    settings: &OracleSettings,
) -> Result<RamanNathReport> {
    if epsilons.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::param("epsilons", "must be sorted ascending"));
    }
    let grid = auto_grid(params, resonance, field, k_dx)?;
    let analytic = deflect(params, resonance, field, k_dx, Some(&grid))?;
    let set = build_channels(
        resonance,
        field,
        params,
        k_dx,
        &settings.grid,
        settings.center_x,
        settings.mode,
    )?;
    let (reference_set, _) = evolve(set.clone(), 0.0, params.t_int, None, settings.exec)?;
    let reference = momentum_distribution(&reference_set, &grid, settings.exec)?;

    let mut entries = Vec::with_capacity(epsilons.len());
    for &epsilon in epsilons {
        let (evolved, stats) = evolve(
            set.clone(),
            epsilon,
            params.t_int,
            settings.dt,
            settings.exec,
        )?;
        let dist = momentum_distribution(&evolved, &grid, settings.exec)?;
        entries.push(RamanNathEntry {
            epsilon,
            tv_to_analytic: tv_distance(&dist, &analytic)?,
            tv_to_raman_nath: tv_distance(&dist, &reference)?,
            dt: stats.dt,
            steps: stats.steps,
            max_norm_drift: stats.max_norm_drift,
        });
    }
    Ok(RamanNathReport {
        schema_version: SCHEMA_VERSION,
        resonance,
        mode: settings.mode,
        k_dx,
        gt: params.gt(),
        reference_tv_to_analytic: tv_distance(&reference, &analytic)?,
        entries,
    })
}
