use std::sync::Arc;

use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::channels::{Channel, ChannelSet};
use crate::par::Execution;
use crate::C64;

/// Relative norm drift beyond which a propagation is rejected.
pub const NORM_DRIFT_LIMIT: f64 = 1e-8;

/// Largest per-step phase, max(|U|, εg p²)·dt, of the default step.
pub const DEFAULT_PHASE_PER_STEP: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EvolutionStats {
    pub t: f64,
    pub epsilon: f64,
    pub dt: f64,
    pub steps: usize,
    /// max|U|·|dt|
    pub potential_phase_per_step: f64,
    /// Momentum bound used for the kinetic phase, see [`populated_momentum`].
    pub populated_momentum: f64,
    /// εg·p²·|dt| at that bound
    pub kinetic_phase_per_step: f64,
    pub max_norm_drift: f64,
    /// The kinetic term vanished and the potential phase was applied in one step.
    pub exact: bool,
}

fn kinetic_coefficient(set: &ChannelSet, epsilon: f64) -> f64 {
    epsilon * set.params.g
}

/// Bound on the momenta a set can populate within |t|: the packet width
/// (8/kΔx) plus the largest kick max|U'|·|t|, capped at the grid bandwidth.
pub fn populated_momentum(set: &ChannelSet, t: f64) -> f64 {
    let dx = set.grid.dx();
    let slope = set
        .channels
        .iter()
        .flat_map(|c| c.potential.windows(2).map(|w| ((w[1] - w[0]) / dx).abs()))
        .fold(0.0, f64::max);
    (8.0 / set.k_dx + slope * t.abs()).min(set.grid.k_max())
}

/// Step keeping both the potential phase and the kinetic phase of the
/// populated momenta per step at [`DEFAULT_PHASE_PER_STEP`].
pub fn default_dt(set: &ChannelSet, epsilon: f64, t: f64) -> f64 {
    let p = populated_momentum(set, t);
    let rate = set
        .max_abs_potential()
        .max(kinetic_coefficient(set, epsilon).abs() * p * p);
    if rate > 0.0 {
        DEFAULT_PHASE_PER_STEP / rate
    } else {
        f64::INFINITY
    }
}

struct Plans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch_len: usize,
}

impl Plans {
    fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Self {
            forward,
            inverse,
            scratch_len,
        }
    }
}

fn phases(values: &[f64], factor: f64) -> Vec<C64> {
    values
        .iter()
        .map(|v| C64::from_polar(1.0, -v * factor))
        .collect()
}

/// Strang splitting e^{−iK dt/2} e^{−iU dt} e^{−iK dt/2}, with adjacent
/// half kinetic steps fused.
fn split_step(
    channel: &mut Channel,
    plans: &Plans,
    half_kinetic: &[C64],
    full_kinetic: &[C64],
    dt: f64,
    steps: usize,
) {
    let n = channel.psi.len();
    let scale = 1.0 / n as f64;
    let potential = phases(&channel.potential, dt);
    let mut scratch = vec![C64::new(0.0, 0.0); plans.scratch_len];
    let psi = &mut channel.psi;

    plans.forward.process_with_scratch(psi, &mut scratch);
    mul(psi, half_kinetic);
    for step in 0..steps {
        plans.inverse.process_with_scratch(psi, &mut scratch);
        for (c, v) in psi.iter_mut().zip(&potential) {
            *c *= v * scale;
        }
        plans.forward.process_with_scratch(psi, &mut scratch);
        if step + 1 < steps {
            mul(psi, full_kinetic);
        } else {
            mul(psi, half_kinetic);
        }
    }
    plans.inverse.process_with_scratch(psi, &mut scratch);
    psi.iter_mut().for_each(|c| *c *= scale);
}

fn mul(psi: &mut [C64], factors: &[C64]) {
    for (c, f) in psi.iter_mut().zip(factors) {
        *c *= f;
    }
}

/// Propagates every channel by `t` (negative t runs backwards).
///
/// `dt` defaults to [`default_dt`]; the step actually used is t/⌈|t|/dt⌉.
/// With ε = 0 the evolution is diagonal in x and is applied exactly.
pub fn evolve_in_place(
    set: &mut ChannelSet,
    epsilon: f64,
    t: f64,
    dt: Option<f64>,
    exec: Execution,
) -> Result<EvolutionStats> {
    if !t.is_finite() {
        return Err(Error::param("t", "must be finite"));
    }
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(Error::param(
            "epsilon",
            format!("must be finite and >= 0, got {epsilon}"),
        ));
    }
    if let Some(dt) = dt {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::param("dt", format!("must be > 0, got {dt}")));
        }
    }
    let dx = set.grid.dx();
    let initial: Vec<f64> = set.channels.iter().map(|c| c.norm_sqr(dx)).collect();
    let kin = kinetic_coefficient(set, epsilon);
    let p_pop = populated_momentum(set, t);
    let u_max = set.max_abs_potential();
    let exact = kin == 0.0;

    let (dt_used, steps) = if t == 0.0 {
        (0.0, 0)
    } else if exact {
        (t, 1)
    } else {
        let dt = dt.unwrap_or_else(|| default_dt(set, epsilon, t));
        let steps = (t.abs() / dt).ceil().max(1.0);
        if steps > 1e9 {
            return Err(Error::Numerical(format!(
                "{steps:.3e} steps requested (t = {t}, dt = {dt})"
            )));
        }
        (t / steps, steps as usize)
    };

    if steps > 0 {
        if exact {
            exec.for_each_mut(&mut set.channels, |ch| {
                let factors = phases(&ch.potential, t);
                mul(&mut ch.psi, &factors);
            });
        } else {
            let plans = Plans::new(set.grid.n_points());
            let ks = set.grid.wavenumbers();
            let half: Vec<C64> = ks
                .iter()
                .map(|k| C64::from_polar(1.0, -kin * k * k * dt_used * 0.5))
                .collect();
            let full: Vec<C64> = half.iter().map(|h| h * h).collect();
            exec.for_each_mut(&mut set.channels, |ch| {
                split_step(ch, &plans, &half, &full, dt_used, steps)
            });
        }
    }

    let mut max_drift: f64 = 0.0;
    for (ch, n0) in set.channels.iter().zip(&initial) {
        let n1 = ch.norm_sqr(dx);
        if !n1.is_finite() {
            return Err(Error::Numerical(format!(
                "non-finite wavefunction in channel {}",
                ch.label()
            )));
        }
        max_drift = max_drift.max((n1 - n0).abs() / n0);
    }
    let stats = EvolutionStats {
        t,
        epsilon,
        dt: dt_used,
        steps,
        potential_phase_per_step: u_max * dt_used.abs(),
        populated_momentum: p_pop,
        kinetic_phase_per_step: kin * p_pop * p_pop * dt_used.abs(),
        max_norm_drift: max_drift,
        exact,
    };
    if max_drift > NORM_DRIFT_LIMIT {
        return Err(Error::Numerical(format!(
            "norm drift {max_drift:.3e} exceeds {NORM_DRIFT_LIMIT:e} (dt = {dt_used:e}, max|U|dt = {:.3e}, εg p² dt = {:.3e})",
            stats.potential_phase_per_step, stats.kinetic_phase_per_step
        )));
    }
    Ok(stats)
}

/// Owning variant of [`evolve_in_place`].
pub fn evolve(
    mut set: ChannelSet,
    epsilon: f64,
    t: f64,
    dt: Option<f64>,
    exec: Execution,
) -> Result<(ChannelSet, EvolutionStats)> {
    let stats = evolve_in_place(&mut set, epsilon, t, dt, exec)?;
    Ok((set, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CavityFieldState;
    use crate::oracle::channels::build_channels;
    use crate::oracle::grid::SpatialGrid;
    use crate::params::{PhysicalParams, Resonance};
    use crate::potentials::CavityMode;

    fn set(mode: CavityMode) -> ChannelSet {
        let p = PhysicalParams::from_drive_parameter(1.0, 5.0).unwrap();
        build_channels(
            Resonance::A,
            &CavityFieldState::vacuum(),
            &p,
            1.0,
            &SpatialGrid::periodic(4, 512).unwrap(),
            0.0,
            mode,
        )
        .unwrap()
    }

    #[test]
    fn zero_epsilon_is_pointwise_phase() {
        let s0 = set(CavityMode::Sine);
        let (s1, stats) = evolve(s0.clone(), 0.0, 5.0, None, Execution::Sequential).unwrap();
        assert!(stats.exact);
        for (a, b) in s0.channels.iter().zip(&s1.channels) {
            for ((p0, p1), u) in a.psi.iter().zip(&b.psi).zip(&a.potential) {
                let expected = p0 * C64::from_polar(1.0, -u * 5.0);
                assert!((p1 - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn free_packet_spreads_like_gaussian() {
        // free particle with ε g = 0.05: σ_x(t)² = σ0²(1 + (2εg t/Δ²)²)
        let mut s = set(CavityMode::Sine);
        s.channels
            .retain(|c| c.branch == crate::potentials::Branch::Free);
        let eps = 0.05;
        let t = 10.0;
        evolve_in_place(&mut s, eps, t, None, Execution::Sequential).unwrap();
        let ch = &s.channels[0];
        let dx = s.grid.dx();
        let xs = s.grid.xs();
        let var: f64 = xs
            .iter()
            .zip(&ch.psi)
            .map(|(x, c)| x * x * c.norm_sqr() * dx)
            .sum();
        let expected = 0.5 * (1.0 + (2.0 * eps * t).powi(2));
        assert!((var - expected).abs() < 1e-9, "{var} vs {expected}");
    }

    #[test]
    fn time_reversal_and_modes_agree() {
        let s0 = set(CavityMode::Sine);
        let (fwd, _) = evolve(s0.clone(), 1e-3, 5.0, Some(0.01), Execution::Sequential).unwrap();
        let (par, _) = evolve(s0.clone(), 1e-3, 5.0, Some(0.01), Execution::Parallel).unwrap();
        assert_eq!(fwd, par);
        let (back, _) = evolve(fwd, 1e-3, -5.0, Some(0.01), Execution::Sequential).unwrap();
        for (a, b) in s0.channels.iter().zip(&back.channels) {
            let err = a
                .psi
                .iter()
                .zip(&b.psi)
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-10, "{err}");
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut s = set(CavityMode::Sine);
        assert!(evolve_in_place(&mut s, -1.0, 1.0, None, Execution::Sequential).is_err());
        assert!(evolve_in_place(&mut s, 0.0, f64::NAN, None, Execution::Sequential).is_err());
        assert!(evolve_in_place(&mut s, 1e-3, 1.0, Some(0.0), Execution::Sequential).is_err());
    }
}
