//! Closed-form Raman–Nath deflection distributions.
//!
//! In the node-expansion (sin kx ≈ kx) and zero-kinetic-energy limits each
//! doubly-dressed channel imprints a linear phase on the initial packet, so
//! the final momentum density is a comb of copies of the initial Gaussian
//! W⁰ at ±α√(n+1) (resonance A) or ±β√(n+1) (resonance B).

use std::f64::consts::PI;

use serde::Serialize;

use crate::dressed::DressedCoefficients;
use crate::error::{Error, Result};
use crate::field::CavityFieldState;
use crate::par::Execution;
use crate::params::{PhysicalParams, Resonance};
use crate::potentials::{interaction_alpha, interaction_beta};
use crate::C64;

/// Uniform momentum grid in units of ħk.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MomentumGrid {
    p_min: f64,
    p_max: f64,
    n_points: usize,
}

impl MomentumGrid {
    pub fn new(p_min: f64, p_max: f64, n_points: usize) -> Result<Self> {
        if !(p_min.is_finite() && p_max.is_finite()) || !(p_min < p_max) {
            return Err(Error::Grid(format!(
                "momentum grid needs finite p_min < p_max, got [{p_min}, {p_max}]"
            )));
        }
        if n_points < 2 {
            return Err(Error::Grid("momentum grid needs at least 2 points".into()));
        }
        Ok(Self {
            p_min,
            p_max,
            n_points,
        })
    }

    /// Symmetric grid covering every comb tooth with ≥ 8/kΔx margin and a
    /// spacing of at most 0.1/kΔx. `max_shift` is the outermost peak location.
    pub fn auto(max_shift: f64, k_dx: f64) -> Result<Self> {
        check_width(k_dx)?;
        if !(max_shift >= 0.0 && max_shift.is_finite()) {
            return Err(Error::Grid(format!("invalid peak extent {max_shift}")));
        }
        let half = max_shift + 8.0 / k_dx;
        let h = 0.1 / k_dx;
        let m = (half / h).ceil() as usize;
        Self::new(-(m as f64) * h, m as f64 * h, 2 * m + 1)
    }

    pub fn p_min(&self) -> f64 {
        self.p_min
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        (self.p_max - self.p_min) / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.p_max
        } else {
            self.p_min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(|i| self.point(i))
    }

    /// Trapezoid rule for samples on this grid.
    pub fn integrate(&self, samples: &[f64]) -> f64 {
        debug_assert_eq!(samples.len(), self.n_points);
        let inner: f64 = samples[1..samples.len() - 1].iter().sum();
        self.spacing() * (inner + 0.5 * (samples[0] + samples[samples.len() - 1]))
    }
}

/// A Gaussian copy of W⁰ centred at `location` carrying `weight`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Peak {
    pub location: f64,
    pub weight: f64,
}

/// Weights below this are kept in the density but omitted from metadata.
pub const PEAK_METADATA_CUTOFF: f64 = 1e-14;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentumDistribution {
    pub grid: MomentumGrid,
    pub k_dx: f64,
    pub density: Vec<f64>,
    pub peaks: Vec<Peak>,
}

impl MomentumDistribution {
    pub fn integral(&self) -> f64 {
        self.grid.integrate(&self.density)
    }

    pub fn peak_weight_sum(&self) -> f64 {
        self.peaks.iter().map(|p| p.weight).sum()
    }

    pub fn max_density(&self) -> f64 {
        self.density.iter().copied().fold(0.0, f64::max)
    }
}

fn check_width(k_dx: f64) -> Result<()> {
    if !(k_dx > 0.0 && k_dx.is_finite()) {
        return Err(Error::param(
            "k_dx",
            format!("packet width must be > 0, got {k_dx}"),
        ));
    }
    Ok(())
}

/// W⁰(p̄) = kΔx·exp(−k²Δx²p̄²)/√π.
pub fn gaussian_w0(p: f64, k_dx: f64) -> f64 {
    k_dx * (-(k_dx * p).powi(2)).exp() / PI.sqrt()
}

fn comb_density(terms: &[Peak], k_dx: f64, grid: &MomentumGrid) -> Vec<f64> {
    Execution::default().map_range(grid.n_points(), |i| {
        let p = grid.point(i);
        terms
            .iter()
            .map(|t| t.weight * gaussian_w0(p - t.location, k_dx))
            .sum()
    })
}

fn distribution(terms: Vec<Peak>, k_dx: f64, grid: &MomentumGrid) -> MomentumDistribution {
    let density = comb_density(&terms, k_dx, grid);
    let peaks = terms
        .into_iter()
        .filter(|p| p.weight >= PEAK_METADATA_CUTOFF)
        .collect();
    MomentumDistribution {
        grid: *grid,
        k_dx,
        density,
        peaks,
    }
}

pub fn initial_distribution(k_dx: f64, grid: &MomentumGrid) -> Result<MomentumDistribution> {
    check_width(k_dx)?;
    Ok(distribution(
        vec![Peak {
            location: 0.0,
            weight: 1.0,
        }],
        k_dx,
        grid,
    ))
}

fn check_shift(name: &'static str, v: f64) -> Result<()> {
    if !(v >= 0.0 && v.is_finite()) {
        return Err(Error::param(
            name,
            format!("must be finite and >= 0, got {v}"),
        ));
    }
    Ok(())
}

/// Every comb term of W₁, including zero-weight ones, in ladder order.
///
/// W₁ = ½Σₙ[|ac_n − e^{iφ}bc_{n+1}|² W⁰(p̄ + α√(n+1))
///        + |ac_n + e^{iφ}bc_{n+1}|² W⁰(p̄ − α√(n+1))] + b²|c₀|² W⁰(p̄),
/// n = 0…n_max with c_{n_max+1} = 0.
pub fn w1_terms(
    field: &CavityFieldState,
    coeffs: &DressedCoefficients,
    alpha: f64,
    phase: f64,
) -> Vec<Peak> {
    let (a, b) = (coeffs.a, coeffs.b);
    let e = C64::from_polar(1.0, phase);
    let mut terms = Vec::with_capacity(2 * field.n_max() + 3);
    terms.push(Peak {
        location: 0.0,
        weight: b * b * field.c(0).norm_sqr(),
    });
    for n in 0..=field.n_max() {
        let lhs = field.c(n) * a;
        let rhs = e * b * field.c(n + 1);
        let shift = alpha * ((n + 1) as f64).sqrt();
        terms.push(Peak {
            location: -shift,
            weight: 0.5 * (lhs - rhs).norm_sqr(),
        });
        terms.push(Peak {
            location: shift,
            weight: 0.5 * (lhs + rhs).norm_sqr(),
        });
    }
    terms
}

/// Phase convention for the b·c_n cross terms of W₂.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum W2Phase {
    /// e^{−i(φ_L−φ_c)} in both terms: the projection of |g⟩ onto the
    /// R_n^(±) basis.
    #[default]
    Derived,
    /// e^{+i(φ_L−φ_c)} in both terms.
    UniformPlus,
    /// e^{+iφ} in the first term and e^{−iφ} in the second, as printed.
    /// Not normalized for complex c_n.
    Literal,
}

/// Every comb term of W₂ under the given phase convention.
///
/// W₂ = ½Σₙ[|ac_{n+1} − e^{iφ₁}bc_n|² W⁰(p̄ − β√(n+1))
///        + |ac_{n+1} + e^{iφ₂}bc_n|² W⁰(p̄ + β√(n+1))] + a²|c₀|² W⁰(p̄).
pub fn w2_terms(
    field: &CavityFieldState,
    coeffs: &DressedCoefficients,
    beta: f64,
    phase: f64,
    convention: W2Phase,
) -> Vec<Peak> {
    let (a, b) = (coeffs.a, coeffs.b);
    let (p1, p2) = match convention {
        W2Phase::Derived => (-phase, -phase),
        W2Phase::UniformPlus => (phase, phase),
        W2Phase::Literal => (phase, -phase),
    };
    let (e1, e2) = (C64::from_polar(1.0, p1), C64::from_polar(1.0, p2));
    let mut terms = Vec::with_capacity(2 * field.n_max() + 3);
    terms.push(Peak {
        location: 0.0,
        weight: a * a * field.c(0).norm_sqr(),
    });
    for n in 0..=field.n_max() {
        let lhs = field.c(n + 1) * a;
        let rhs = b * field.c(n);
        let shift = beta * ((n + 1) as f64).sqrt();
        terms.push(Peak {
            location: shift,
            weight: 0.5 * (lhs - e1 * rhs).norm_sqr(),
        });
        terms.push(Peak {
            location: -shift,
            weight: 0.5 * (lhs + e2 * rhs).norm_sqr(),
        });
    }
    terms
}

/// W₁ for the red-sideband resonance.
pub fn deflect_w1(
    field: &CavityFieldState,
    coeffs: &DressedCoefficients,
    alpha: f64,
    phase: f64,
    k_dx: f64,
    grid: &MomentumGrid,
) -> Result<MomentumDistribution> {
    check_width(k_dx)?;
    check_shift("alpha", alpha)?;
    Ok(distribution(
        w1_terms(field, coeffs, alpha, phase),
        k_dx,
        grid,
    ))
}

/// W₂ for the blue-sideband resonance with the default phase convention.
pub fn deflect_w2(
    field: &CavityFieldState,
    coeffs: &DressedCoefficients,
    beta: f64,
    phase: f64,
    k_dx: f64,
    grid: &MomentumGrid,
) -> Result<MomentumDistribution> {
    deflect_w2_with(field, coeffs, beta, phase, W2Phase::default(), k_dx, grid)
}

pub fn deflect_w2_with(
    field: &CavityFieldState,
    coeffs: &DressedCoefficients,
    beta: f64,
    phase: f64,
    convention: W2Phase,
    k_dx: f64,
    grid: &MomentumGrid,
) -> Result<MomentumDistribution> {
    check_width(k_dx)?;
    check_shift("beta", beta)?;
    Ok(distribution(
        w2_terms(field, coeffs, beta, phase, convention),
        k_dx,
        grid,
    ))
}

/// Momentum pattern of a bare two-level atom entering in |g⟩ with no drive:
/// |c₀|²W⁰(p̄) + ½Σₙ|c_{n+1}|²[W⁰(p̄ − gt√(n+1)) + W⁰(p̄ + gt√(n+1))].
pub fn two_level_deflection(
    field: &CavityFieldState,
    gt: f64,
    k_dx: f64,
    grid: &MomentumGrid,
) -> Result<MomentumDistribution> {
    check_width(k_dx)?;
    check_shift("gt", gt)?;
    let mut terms = vec![Peak {
        location: 0.0,
        weight: field.c(0).norm_sqr(),
    }];
    for n in 0..field.n_max() {
        let w = 0.5 * field.c(n + 1).norm_sqr();
        let shift = gt * ((n + 1) as f64).sqrt();
        terms.push(Peak {
            location: shift,
            weight: w,
        });
        terms.push(Peak {
            location: -shift,
            weight: w,
        });
    }
    Ok(distribution(terms, k_dx, grid))
}

/// Comb terms and comb spacing (α or β) for a parameter set.
pub fn deflection_terms(
    params: &PhysicalParams,
    resonance: Resonance,
    field: &CavityFieldState,
    convention: W2Phase,
) -> Result<(Vec<Peak>, f64)> {
    params.validate()?;
    let coeffs = params.coefficients()?;
    let phase = params.relative_phase();
    Ok(match resonance {
        Resonance::A => {
            let alpha = interaction_alpha(params, None)?;
            (w1_terms(field, &coeffs, alpha, phase), alpha)
        }
        Resonance::B => {
            let beta = interaction_beta(params)?;
            (w2_terms(field, &coeffs, beta, phase, convention), beta)
        }
    })
}

/// Auto-sized grid for a parameter set.
pub fn auto_grid(
    params: &PhysicalParams,
    resonance: Resonance,
    field: &CavityFieldState,
    k_dx: f64,
) -> Result<MomentumGrid> {
    let spacing = match resonance {
        Resonance::A => interaction_alpha(params, None)?,
        Resonance::B => interaction_beta(params)?,
    };
    MomentumGrid::auto(spacing * ((field.n_max() + 1) as f64).sqrt(), k_dx)
}

/// W₁ or W₂ for a parameter set; the grid is auto-sized when not given.
pub fn deflect(
    params: &PhysicalParams,
    resonance: Resonance,
    field: &CavityFieldState,
    k_dx: f64,
    grid: Option<&MomentumGrid>,
) -> Result<MomentumDistribution> {
    check_width(k_dx)?;
    let (terms, _) = deflection_terms(params, resonance, field, W2Phase::default())?;
    let grid = match grid {
        Some(g) => *g,
        None => auto_grid(params, resonance, field, k_dx)?,
    };
    Ok(distribution(terms, k_dx, &grid))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PeakRow {
    pub location: f64,
    pub weight: f64,
    /// weight·kΔx/√π, the apex height of an isolated peak.
    pub height: f64,
    /// Another peak lies closer than 4/kΔx (or coincides with this one).
    pub overlapping: bool,
}

/// Peak metadata sorted by location; coincident peaks are merged.
pub fn peak_table(dist: &MomentumDistribution) -> Vec<PeakRow> {
    let mut peaks = dist.peaks.clone();
    peaks.sort_by(|a, b| a.location.total_cmp(&b.location));

    let mut merged: Vec<(Peak, bool)> = Vec::with_capacity(peaks.len());
    for p in peaks {
        match merged.last_mut() {
            Some((last, coincident))
                if (p.location - last.location).abs() <= 1e-12 * last.location.abs().max(1.0) =>
            {
                last.weight += p.weight;
                *coincident = true;
            }
            _ => merged.push((p, false)),
        }
    }

    let min_sep = 4.0 / dist.k_dx;
    let height = dist.k_dx / PI.sqrt();
    (0..merged.len())
        .map(|i| {
            let (p, coincident) = merged[i];
            let near_prev = i > 0 && p.location - merged[i - 1].0.location < min_sep;
            let near_next = i + 1 < merged.len() && merged[i + 1].0.location - p.location < min_sep;
            PeakRow {
                location: p.location,
                weight: p.weight,
                height: p.weight * height,
                overlapping: coincident || near_prev || near_next,
            }
        })
        .collect()
}

/// Total-variation distance ½∫|W_a − W_b| dp̄ on a shared grid.
pub fn tv_distance(a: &MomentumDistribution, b: &MomentumDistribution) -> Result<f64> {
    if a.grid != b.grid {
        return Err(Error::Grid(
            "TV distance needs distributions on the same grid".into(),
        ));
    }
    let diff: Vec<f64> = a
        .density
        .iter()
        .zip(&b.density)
        .map(|(x, y)| (x - y).abs())
        .collect();
    Ok(0.5 * a.grid.integrate(&diff))
}

/// sup |W_a − W_b| on a shared grid.
pub fn sup_distance(a: &MomentumDistribution, b: &MomentumDistribution) -> Result<f64> {
    if a.grid != b.grid {
        return Err(Error::Grid(
            "sup distance needs distributions on the same grid".into(),
        ));
    }
    Ok(a.density
        .iter()
        .zip(&b.density)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}
