//! JSON run configuration. Parsing is strict: unknown keys are rejected and
//! every physical constraint is re-checked after the document is read.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use ddwave::adiabatic::RegimeSettings;
use ddwave::field::CavityFieldState;
use ddwave::oracle::{OracleSettings, SpatialGrid};
use ddwave::potentials::CavityMode;
use ddwave::raman_nath::{MomentumGrid, W2Phase};
use ddwave::{PhysicalParams, Resonance, C64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

fn zero() -> f64 {
    0.0
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    #[serde(default = "one")]
    pub g: f64,
    /// Either `lambda` or the drive parameter `d` (not both).
    pub lambda: Option<f64>,
    pub d: Option<f64>,
    pub delta: f64,
    #[serde(default = "zero")]
    pub phi_l: f64,
    #[serde(default = "zero")]
    pub phi_c: f64,
    #[serde(default = "zero")]
    pub gamma: f64,
    #[serde(default = "zero")]
    pub kappa: f64,
    #[serde(default = "zero")]
    pub epsilon: f64,
    #[serde(default = "one")]
    pub u_l0: f64,
    /// Either `t_int` or `gt` (not both).
    pub t_int: Option<f64>,
    pub gt: Option<f64>,
}

impl ParamsSpec {
    pub fn resolve(&self) -> Result<PhysicalParams, CliError> {
        let mut p = PhysicalParams {
            g: self.g,
            lambda: 0.0,
            delta: self.delta,
            phi_l: self.phi_l,
            phi_c: self.phi_c,
            gamma: self.gamma,
            kappa: self.kappa,
            epsilon: self.epsilon,
            u_l0: self.u_l0,
            t_int: 0.0,
        };
        p.validate()?;
        p.t_int = match (self.t_int, self.gt) {
            (Some(_), Some(_)) => {
                return Err(CliError::validation("params: give t_int or gt, not both"))
            }
            (Some(t), None) => t,
            (None, Some(gt)) => gt / self.g,
            (None, None) => 0.0,
        };
        match (self.lambda, self.d) {
            (Some(_), Some(_)) => {
                return Err(CliError::validation("params: give lambda or d, not both"))
            }
            (Some(l), None) => p.lambda = l,
            (None, Some(d)) => p.set_drive_parameter(d)?,
            (None, None) => {}
        }
        p.validate()?;
        Ok(p)
    }
}

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    #[default]
    Vacuum,
    Fock {
        n: usize,
        n_max: Option<usize>,
    },
    Coherent {
        re: f64,
        #[serde(default = "zero")]
        im: f64,
        #[serde(default = "default_tail_tol")]
        tail_tol: f64,
    },
    /// Amplitudes as [re, im] pairs; normalized on load.
    Custom {
        amplitudes: Vec<[f64; 2]>,
    },
}

fn default_tail_tol() -> f64 {
    1e-12
}

impl FieldSpec {
    pub fn resolve(&self) -> Result<CavityFieldState, CliError> {
        Ok(match self {
            FieldSpec::Vacuum => CavityFieldState::vacuum(),
            FieldSpec::Fock { n, n_max } => CavityFieldState::fock(*n, n_max.unwrap_or(*n))?,
            FieldSpec::Coherent { re, im, tail_tol } => {
                CavityFieldState::coherent(C64::new(*re, *im), *tail_tol)?
            }
            FieldSpec::Custom { amplitudes } => CavityFieldState::custom(
                amplitudes
                    .iter()
                    .map(|[re, im]| C64::new(*re, *im))
                    .collect(),
            )?,
        })
    }
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MomentumGridSpec {
    pub p_min: f64,
    pub p_max: f64,
    pub n_points: usize,
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PotentialSpec {
    #[serde(default = "default_photon")]
    pub n: u32,
    #[serde(default = "default_x_min")]
    pub x_min: f64,
    #[serde(default = "default_x_max")]
    pub x_max: f64,
    #[serde(default = "default_potential_points")]
    pub n_points: usize,
}

fn default_photon() -> u32 {
    1
}

fn default_x_min() -> f64 {
    -PI
}

fn default_x_max() -> f64 {
    PI
}

fn default_potential_points() -> usize {
    401
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq, Default)]
#[serde(rename_all = "snake_case")]
pub enum ModeSpec {
    #[default]
    Sine,
    Linearized,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OracleSpec {
    /// Required: the propagation step in units of 1/g.
    pub dt: f64,
    #[serde(default)]
    pub mode: ModeSpec,
    #[serde(default = "default_periods")]
    pub periods: u32,
    #[serde(default = "default_spatial_points")]
    pub n_points: usize,
    #[serde(default = "zero")]
    pub center_x: f64,
    /// Optional ε sweep, ascending.
    #[serde(default)]
    pub epsilons: Vec<f64>,
}

fn default_periods() -> u32 {
    4
}

fn default_spatial_points() -> usize {
    2048
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RegimeSpec {
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    pub delta_z: Option<f64>,
}

fn default_threshold() -> f64 {
    5.0
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LevelsSpec {
    pub omega_g: f64,
    pub omega_e: f64,
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq, Default)]
#[serde(rename_all = "snake_case")]
pub enum W2PhaseSpec {
    #[default]
    Derived,
    UniformPlus,
    Literal,
}

impl From<W2PhaseSpec> for W2Phase {
    fn from(s: W2PhaseSpec) -> Self {
        match s {
            W2PhaseSpec::Derived => W2Phase::Derived,
            W2PhaseSpec::UniformPlus => W2Phase::UniformPlus,
            W2PhaseSpec::Literal => W2Phase::Literal,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub param: String,
    pub values: Vec<f64>,
}

pub const SWEEPABLE: [&str; 13] = [
    "d", "gt", "lambda", "delta", "g", "phi_l", "phi_c", "gamma", "kappa", "epsilon", "u_l0",
    "t_int", "k_dx",
];

/// The document as written.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub params: ParamsSpec,
    #[serde(default = "default_resonance")]
    pub config: Resonance,
    #[serde(default)]
    pub field: FieldSpec,
    #[serde(default = "one")]
    pub k_dx: f64,
    pub momentum_grid: Option<MomentumGridSpec>,
    pub potential: Option<PotentialSpec>,
    pub oracle: Option<OracleSpec>,
    pub regime: Option<RegimeSpec>,
    pub levels: Option<LevelsSpec>,
    #[serde(default)]
    pub w2_phase: W2PhaseSpec,
    #[serde(default)]
    pub sweep: Vec<SweepAxis>,
    pub out: Option<PathBuf>,
}

fn default_resonance() -> Resonance {
    Resonance::A
}

/// Validated configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub name: String,
    pub params: PhysicalParams,
    pub resonance: Resonance,
    pub field: CavityFieldState,
    pub k_dx: f64,
    pub momentum_grid: Option<MomentumGrid>,
    pub potential: Option<PotentialSpec>,
    pub oracle: Option<OracleSpec>,
    pub regime: RegimeSettings,
    pub levels: Option<LevelsSpec>,
    pub w2_phase: W2Phase,
    pub sweep: Vec<SweepAxis>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn parse(text: &str, name: &str) -> Result<Self, CliError> {
        let file: ConfigFile =
            serde_json::from_str(text).map_err(|e| CliError::validation(format!("{name}: {e}")))?;
        Self::from_file(file, name)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "run".into());
        Self::parse(&text, &name)
    }

    pub fn from_file(file: ConfigFile, name: &str) -> Result<Self, CliError> {
        let params = file.params.resolve()?;
        let field = file.field.resolve()?;
        if !(file.k_dx > 0.0 && file.k_dx.is_finite()) {
            return Err(CliError::validation(format!(
                "k_dx must be > 0, got {}",
                file.k_dx
            )));
        }
        let momentum_grid = file
            .momentum_grid
            .map(|g| MomentumGrid::new(g.p_min, g.p_max, g.n_points))
            .transpose()?;
        if let Some(r) = &file.regime {
            if !(r.threshold > 0.0) {
                return Err(CliError::validation("regime.threshold must be > 0"));
            }
        }
        if let Some(o) = &file.oracle {
            if !(o.dt > 0.0 && o.dt.is_finite()) {
                return Err(CliError::validation(format!(
                    "oracle.dt must be > 0, got {}",
                    o.dt
                )));
            }
            SpatialGrid::periodic(o.periods, o.n_points)?;
        }
        for axis in &file.sweep {
            if !SWEEPABLE.contains(&axis.param.as_str()) {
                return Err(CliError::validation(format!(
                    "sweep parameter `{}` is not one of {}",
                    axis.param,
                    SWEEPABLE.join(", ")
                )));
            }
            if axis.values.is_empty() {
                return Err(CliError::validation(format!(
                    "sweep axis `{}` has no values",
                    axis.param
                )));
            }
        }
        Ok(Self {
            name: name.to_string(),
            params,
            resonance: file.config,
            field,
            k_dx: file.k_dx,
            momentum_grid,
            potential: file.potential,
            oracle: file.oracle,
            regime: file
                .regime
                .map(|r| RegimeSettings {
                    threshold: r.threshold,
                    delta_z: r.delta_z,
                })
                .unwrap_or_default(),
            levels: file.levels,
            w2_phase: file.w2_phase.into(),
            sweep: file.sweep,
            out: file.out,
        })
    }

    pub fn oracle_settings(&self) -> Result<OracleSettings, CliError> {
        let spec = self.oracle.as_ref().ok_or_else(|| {
            CliError::validation("the oracle needs an `oracle` section with `dt`")
        })?;
        Ok(OracleSettings {
            grid: SpatialGrid::periodic(spec.periods, spec.n_points)?,
            mode: match spec.mode {
                ModeSpec::Sine => CavityMode::Sine,
                ModeSpec::Linearized => CavityMode::Linearized,
            },
            center_x: spec.center_x,
            dt: Some(spec.dt),
            exec: ddwave::par::Execution::default(),
        })
    }

    /// Copy with one swept parameter replaced.
    pub fn with_value(&self, param: &str, value: f64) -> Result<Self, CliError> {
        let mut c = self.clone();
        let p = &mut c.params;
        match param {
            "d" => p.set_drive_parameter(value)?,
            "gt" => p.t_int = value / p.g,
            "lambda" => p.lambda = value,
            "delta" => p.delta = value,
            "g" => p.g = value,
            "phi_l" => p.phi_l = value,
            "phi_c" => p.phi_c = value,
            "gamma" => p.gamma = value,
            "kappa" => p.kappa = value,
            "epsilon" => p.epsilon = value,
            "u_l0" => p.u_l0 = value,
            "t_int" => p.t_int = value,
            "k_dx" => {
                if !(value > 0.0 && value.is_finite()) {
                    return Err(CliError::validation(format!(
                        "k_dx must be > 0, got {value}"
                    )));
                }
                c.k_dx = value
            }
            other => {
                return Err(CliError::validation(format!(
                    "unknown sweep parameter `{other}`"
                )))
            }
        }
        c.params.validate()?;
        Ok(c)
    }
}

/// Figure presets: vacuum, gt = 50, kΔx = 1, g = δ = u_L0 = 1, φ_L = φ_c = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    #[value(name = "3a")]
    Fig3a,
    #[value(name = "3b")]
    Fig3b,
    #[value(name = "4a")]
    Fig4a,
    #[value(name = "4b")]
    Fig4b,
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig3a => "fig3a",
            Figure::Fig3b => "fig3b",
            Figure::Fig4a => "fig4a",
            Figure::Fig4b => "fig4b",
        }
    }

    pub fn config(self) -> ConfigFile {
        let (d, config) = match self {
            Figure::Fig3a => (1.0, Resonance::A),
            Figure::Fig3b => (0.6, Resonance::A),
            Figure::Fig4a => (1.0, Resonance::B),
            Figure::Fig4b => (1.5, Resonance::B),
        };
        ConfigFile {
            params: ParamsSpec {
                g: 1.0,
                lambda: None,
                d: Some(d),
                delta: 1.0,
                phi_l: 0.0,
                phi_c: 0.0,
                gamma: 0.0,
                kappa: 0.0,
                epsilon: 0.0,
                u_l0: 1.0,
                t_int: None,
                gt: Some(50.0),
            },
            config,
            field: FieldSpec::Vacuum,
            k_dx: 1.0,
            momentum_grid: None,
            potential: None,
            oracle: Some(OracleSpec {
                dt: 0.005,
                mode: ModeSpec::Linearized,
                periods: default_periods(),
                n_points: default_spatial_points(),
                center_x: 0.0,
                epsilons: Vec::new(),
            }),
            regime: None,
            levels: None,
            w2_phase: W2PhaseSpec::Derived,
            sweep: Vec::new(),
            out: None,
        }
    }

    pub fn run_config(self) -> RunConfig {
        RunConfig::from_file(self.config(), self.name()).expect("figure presets are valid")
    }
}
