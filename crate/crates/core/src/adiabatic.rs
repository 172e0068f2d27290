//! Validity-regime diagnostics: the nonadiabatic velocity bound and the
//! strong-coupling / interaction-time window.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::params::PhysicalParams;

/// Upper bound on the longitudinal velocity for adiabatic following.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum VelocityBound {
    /// Resonant drive (δ = 0): adiabatic at any velocity.
    Unbounded,
    Bounded(f64),
}

impl VelocityBound {
    pub fn value(&self) -> f64 {
        match self {
            VelocityBound::Unbounded => f64::INFINITY,
            VelocityBound::Bounded(v) => *v,
        }
    }

    pub fn admits(&self, v_z: f64) -> bool {
        v_z.abs() < self.value()
    }
}

impl Serialize for VelocityBound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            VelocityBound::Unbounded => s.serialize_str("unbounded"),
            VelocityBound::Bounded(v) => s.serialize_f64(*v),
        }
    }
}

/// v_z ≪ γ^{1/3} Δz Ω(0)² / (|δ| λ u_L0)^{2/3}.
///
/// The amplitude in the denominator is the drive amplitude u_L0: the cavity
/// mode vanishes at its node, which would make the bound vacuous.
pub fn max_velocity(
    gamma: f64,
    delta_z: f64,
    omega0: f64,
    delta: f64,
    lambda: f64,
    u_l0: f64,
) -> Result<VelocityBound> {
    if delta == 0.0 {
        return Ok(VelocityBound::Unbounded);
    }
    if !(delta_z > 0.0) {
        return Err(Error::param("delta_z", "drive width must be > 0"));
    }
    if !(lambda * u_l0 > 0.0) {
        return Err(Error::param("lambda", "lambda * u_l0 must be > 0"));
    }
    if !(gamma >= 0.0) {
        return Err(Error::param("gamma", "must be >= 0"));
    }
    let denom = (delta.abs() * lambda * u_l0).powf(2.0 / 3.0);
    Ok(VelocityBound::Bounded(
        gamma.cbrt() * delta_z * omega0 * omega0 / denom,
    ))
}

/// Human-readable form of the velocity bound, including which amplitude is
/// used in the denominator.
pub const VELOCITY_BOUND_FORMULA: &str =
    "v_z << gamma^(1/3) * delta_z * Omega0^2 / (|delta| * lambda * u_L0)^(2/3), u_L0 = peak drive amplitude";

/// Knobs for [`regime_report`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegimeSettings {
    /// A ≫ B is read as A ≥ threshold · B.
    pub threshold: f64,
    /// Drive width Δz for the velocity bound; the bound is omitted without it.
    pub delta_z: Option<f64>,
}

impl Default for RegimeSettings {
    fn default() -> Self {
        Self {
            threshold: 5.0,
            delta_z: None,
        }
    }
}

/// Serialized as `null` when infinite (a zero rate in the denominator).
fn ratio<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_none()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CouplingRatios {
    #[serde(serialize_with = "ratio")]
    pub g_over_gamma: f64,
    #[serde(serialize_with = "ratio")]
    pub g_over_kappa: f64,
    #[serde(serialize_with = "ratio")]
    pub lambda_over_gamma: f64,
    #[serde(serialize_with = "ratio")]
    pub lambda_over_kappa: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GtWindow {
    #[serde(serialize_with = "ratio")]
    pub lower: f64,
    #[serde(serialize_with = "ratio")]
    pub upper: f64,
}

impl GtWindow {
    pub fn contains(&self, gt: f64) -> bool {
        gt > self.lower && gt < self.upper
    }

    pub fn is_unbounded(&self) -> bool {
        self.upper.is_infinite()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegimeReport {
    pub threshold: f64,
    pub ratios: CouplingRatios,
    pub strong_coupling_ok: bool,
    pub gt: f64,
    pub gt_window: GtWindow,
    pub gt_in_window: bool,
    #[serde(serialize_with = "ratio")]
    pub omega0_over_max_decay: f64,
    pub sidebands_resolved: bool,
    pub unconditionally_adiabatic: bool,
    pub v_max: Option<VelocityBound>,
    pub v_max_formula: &'static str,
}

fn div(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        f64::INFINITY
    } else {
        a / b
    }
}

/// Evaluates the strong-coupling inequalities, the gt window and (when Δz
/// is given) the velocity bound.
pub fn regime_report(params: &PhysicalParams, settings: &RegimeSettings) -> Result<RegimeReport> {
    params.validate()?;
    if !(settings.threshold > 0.0) {
        return Err(Error::param("threshold", "must be > 0"));
    }
    let th = settings.threshold;
    let max_decay = params.gamma.max(params.kappa);
    let ratios = CouplingRatios {
        g_over_gamma: div(params.g, params.gamma),
        g_over_kappa: div(params.g, params.kappa),
        lambda_over_gamma: div(params.lambda, params.gamma),
        lambda_over_kappa: div(params.lambda, params.kappa),
    };
    let g_ratio = div(params.g, max_decay);
    let l_ratio = div(params.lambda, max_decay);
    let strong_coupling_ok = g_ratio >= th && l_ratio >= th;

    let gt_window = GtWindow {
        lower: 1f64.max(div(params.g, params.lambda)),
        upper: ratios.g_over_gamma.max(ratios.g_over_kappa),
    };
    let gt = params.gt();
    let omega0 = params.omega0();
    let omega_ratio = div(omega0, max_decay);

    let v_max = match settings.delta_z {
        None => None,
        Some(dz) => Some(max_velocity(
            params.gamma,
            dz,
            omega0,
            params.delta,
            params.lambda,
            params.u_l0,
        )?),
    };

    Ok(RegimeReport {
        threshold: th,
        ratios,
        strong_coupling_ok,
        gt,
        gt_in_window: gt_window.contains(gt),
        gt_window,
        omega0_over_max_decay: omega_ratio,
        sidebands_resolved: omega_ratio >= th,
        unconditionally_adiabatic: params.delta == 0.0,
        v_max,
        v_max_formula: VELOCITY_BOUND_FORMULA,
    })
}
