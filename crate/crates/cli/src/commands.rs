use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};

use ddwave::adiabatic::{regime_report, RegimeReport};
use ddwave::dressed::{decompose_ground, quasienergies};
use ddwave::export::{
    columns_csv, density_csv, json_string, potential_csv, write_atomic, SCHEMA_VERSION,
};
use ddwave::oracle::{position_density_columns, raman_nath_check, run_oracle, OracleRun};
use ddwave::par::Execution;
use ddwave::potentials::{interaction_alpha, interaction_beta, sample_potential};
use ddwave::raman_nath::{
    auto_grid, deflect, deflect_w2_with, peak_table, MomentumDistribution, PeakRow, W2Phase,
};
use ddwave::{Resonance, C64};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;

/// Files produced by a command, written only once everything is computed.
#[derive(Default)]
pub struct Outputs {
    files: Vec<(String, Vec<u8>)>,
    pub summary: Vec<String>,
}

impl Outputs {
    fn add(&mut self, name: String, contents: impl Into<Vec<u8>>) {
        self.files.push((name, contents.into()));
    }

    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::with_capacity(self.files.len());
        for (name, contents) in &self.files {
            let path = dir.join(name);
            write_atomic(&path, contents)?;
            written.push(path);
        }
        Ok(written)
    }
}

#[derive(Serialize)]
struct GroundDecomposition {
    phi1: C64,
    phi2: C64,
}

#[derive(Serialize)]
struct DressedReport {
    schema_version: u32,
    name: String,
    delta: f64,
    lambda: f64,
    u_l0: f64,
    drive_parameter: f64,
    omega0: f64,
    a: f64,
    b: f64,
    a2: f64,
    b2: f64,
    /// (δ − Ω)/2, the level shift of the dressed states.
    quasienergy_shift: f64,
    quasienergies: Option<[f64; 2]>,
    ground_decomposition: GroundDecomposition,
    alpha: Option<f64>,
    beta: Option<f64>,
}

pub fn dressed(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let p = &cfg.params;
    let c = p.coefficients()?;
    let omega = p.omega0();
    let (g1, g2) = decompose_ground(&c, p.phi_l);
    let (alpha, beta) = if p.t_int > 0.0 {
        (
            Some(interaction_alpha(p, None)?),
            Some(interaction_beta(p)?),
        )
    } else {
        (None, None)
    };
    let report = DressedReport {
        schema_version: SCHEMA_VERSION,
        name: cfg.name.clone(),
        delta: p.delta,
        lambda: p.lambda,
        u_l0: p.u_l0,
        drive_parameter: p.drive_parameter(),
        omega0: omega,
        a: c.a,
        b: c.b,
        a2: c.a2(),
        b2: c.b2(),
        quasienergy_shift: 0.5 * (p.delta - omega),
        quasienergies: cfg.levels.map(|l| {
            let (w1, w2) = quasienergies(l.omega_g, l.omega_e, p.delta, omega);
            [w1, w2]
        }),
        ground_decomposition: GroundDecomposition { phi1: g1, phi2: g2 },
        alpha,
        beta,
    };
    let json = json_string(&report)?;
    let mut out = Outputs::default();
    out.summary.push(json.trim_end().to_string());
    out.add(format!("{}_dressed.json", cfg.name), json);
    Ok(out)
}

#[derive(Serialize)]
struct PeaksReport {
    schema_version: u32,
    name: String,
    config: Resonance,
    drive_parameter: f64,
    gt: f64,
    k_dx: f64,
    /// α for A, β for B.
    spacing: f64,
    w2_phase: Option<W2Phase>,
    integral: f64,
    weight_sum: f64,
    peaks: Vec<PeakRow>,
}

fn distribution(cfg: &RunConfig) -> Result<(MomentumDistribution, f64), CliError> {
    let p = &cfg.params;
    let grid = match cfg.momentum_grid {
        Some(g) => g,
        None => auto_grid(p, cfg.resonance, &cfg.field, cfg.k_dx)?,
    };
    Ok(match cfg.resonance {
        Resonance::A => (
            deflect(p, Resonance::A, &cfg.field, cfg.k_dx, Some(&grid))?,
            interaction_alpha(p, None)?,
        ),
        Resonance::B => {
            let beta = interaction_beta(p)?;
            let dist = deflect_w2_with(
                &cfg.field,
                &p.coefficients()?,
                beta,
                p.relative_phase(),
                cfg.w2_phase,
                cfg.k_dx,
                &grid,
            )?;
            (dist, beta)
        }
    })
}

/// Density CSV and peak-table JSON for one configuration.
fn deflection_files(cfg: &RunConfig) -> Result<(String, String, f64), CliError> {
    let (dist, spacing) = distribution(cfg)?;
    let report = PeaksReport {
        schema_version: SCHEMA_VERSION,
        name: cfg.name.clone(),
        config: cfg.resonance,
        drive_parameter: cfg.params.drive_parameter(),
        gt: cfg.params.gt(),
        k_dx: cfg.k_dx,
        spacing,
        w2_phase: (cfg.resonance == Resonance::B).then_some(cfg.w2_phase),
        integral: dist.integral(),
        weight_sum: dist.peak_weight_sum(),
        peaks: peak_table(&dist),
    };
    Ok((density_csv(&dist), json_string(&report)?, report.integral))
}

pub fn deflect_cmd(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let (csv, json, integral) = deflection_files(cfg)?;
    let mut out = Outputs::default();
    out.summary.push(format!(
        "{} config {}: ∫W dp = {integral:.12}",
        cfg.name, cfg.resonance
    ));
    out.add(format!("{}_density.csv", cfg.name), csv);
    out.add(format!("{}_peaks.json", cfg.name), json);
    if let Some(spec) = cfg.potential {
        let curve = sample_potential(
            cfg.resonance,
            spec.n,
            &cfg.params,
            spec.x_min,
            spec.x_max,
            spec.n_points,
        )?;
        out.add(format!("{}_potential.csv", cfg.name), potential_csv(&curve));
    }
    Ok(out)
}

#[derive(Serialize)]
struct OracleReport<'a> {
    #[serde(flatten)]
    run: &'a OracleRun,
    name: &'a str,
    dt_requested: f64,
}

pub fn oracle(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let settings = cfg.oracle_settings()?;
    let spec = cfg.oracle.as_ref().expect("checked by oracle_settings");
    let run = run_oracle(
        &cfg.params,
        cfg.resonance,
        &cfg.field,
        cfg.k_dx,
        cfg.momentum_grid.as_ref(),
        &settings,
    )?;
    let mut out = Outputs::default();
    out.summary.push(format!(
        "{} config {} ε = {:e}: TV to closed form = {:.3e} ({} steps)",
        cfg.name, cfg.resonance, cfg.params.epsilon, run.tv_to_analytic, run.stats.steps
    ));
    let ps: Vec<f64> = run.oracle.grid.points().collect();
    out.add(
        format!("{}_oracle.csv", cfg.name),
        columns_csv(
            "p_bar",
            &ps,
            &[
                ("W_oracle".into(), run.oracle.density.clone()),
                ("W_analytic".into(), run.analytic.density.clone()),
            ],
        ),
    );
    let (xs, series) = position_density_columns(&run.final_set);
    out.add(
        format!("{}_channels.csv", cfg.name),
        columns_csv("x", &xs, &series),
    );
    out.add(
        format!("{}_oracle.json", cfg.name),
        json_string(&OracleReport {
            run: &run,
            name: &cfg.name,
            dt_requested: spec.dt,
        })?,
    );
    if !spec.epsilons.is_empty() {
        let report = raman_nath_check(
            &cfg.params,
            cfg.resonance,
            &cfg.field,
            cfg.k_dx,
            &spec.epsilons,
            &settings,
        )?;
        for e in &report.entries {
            out.summary.push(format!(
                "  ε = {:e}: TV to closed form {:.3e}, TV to ε = 0 {:.3e}",
                e.epsilon, e.tv_to_analytic, e.tv_to_raman_nath
            ));
        }
        out.add(
            format!("{}_raman_nath.json", cfg.name),
            json_string(&report)?,
        );
    }
    Ok(out)
}

#[derive(Serialize)]
struct RegimeOutput<'a> {
    schema_version: u32,
    name: &'a str,
    #[serde(flatten)]
    report: &'a RegimeReport,
}

pub fn check(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let report = regime_report(&cfg.params, &cfg.regime)?;
    let json = json_string(&RegimeOutput {
        schema_version: SCHEMA_VERSION,
        name: &cfg.name,
        report: &report,
    })?;
    let mut out = Outputs::default();
    out.summary.push(json.trim_end().to_string());
    out.add(format!("{}_regime.json", cfg.name), json);
    Ok(out)
}

#[derive(Serialize)]
struct SweepPoint {
    name: String,
    values: BTreeMap<String, f64>,
    density: String,
    peaks: String,
}

#[derive(Serialize)]
struct SweepIndex<'a> {
    schema_version: u32,
    name: &'a str,
    config: Resonance,
    axes: Vec<(&'a str, &'a [f64])>,
    points: Vec<SweepPoint>,
}

/// Cartesian product of the sweep axes, first axis slowest.
fn sweep_points(cfg: &RunConfig) -> Vec<Vec<(String, f64)>> {
    let mut points = vec![Vec::new()];
    for axis in &cfg.sweep {
        points = points
            .into_iter()
            .flat_map(|prefix| {
                axis.values.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push((axis.param.clone(), v));
                    p
                })
            })
            .collect();
    }
    points
}

fn point_name(point: &[(String, f64)]) -> String {
    point
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join("_")
}

pub fn sweep(cfg: &RunConfig) -> Result<Outputs, CliError> {
    if cfg.sweep.is_empty() {
        return Err(CliError::validation(
            "sweep needs at least one axis in `sweep`",
        ));
    }
    let mut seen = HashSet::new();
    for axis in &cfg.sweep {
        if !seen.insert(axis.param.as_str()) {
            return Err(CliError::validation(format!(
                "sweep axis `{}` given twice",
                axis.param
            )));
        }
    }
    let points = sweep_points(cfg);
    let names: Vec<String> = points.iter().map(|p| point_name(p)).collect();
    let mut unique = HashSet::new();
    for n in &names {
        if !unique.insert(n.as_str()) {
            return Err(CliError::validation(format!(
                "sweep points collide on file name `{n}`"
            )));
        }
    }

    let configs = points
        .iter()
        .zip(&names)
        .map(|(point, name)| {
            let mut c = cfg.clone();
            for (param, v) in point {
                c = c.with_value(param, *v)?;
            }
            c.name = name.clone();
            Ok(c)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let results = Execution::Parallel.map(&configs, deflection_files);

    let mut out = Outputs::default();
    let mut index_points = Vec::with_capacity(configs.len());
    for ((point, name), result) in points.iter().zip(&names).zip(results) {
        let (csv, json, integral) = result?;
        let density = format!("{name}.csv");
        let peaks = format!("{name}.json");
        out.summary.push(format!("{name}: ∫W dp = {integral:.12}"));
        out.add(density.clone(), csv);
        out.add(peaks.clone(), json);
        index_points.push(SweepPoint {
            name: name.clone(),
            values: point.iter().cloned().collect(),
            density,
            peaks,
        });
    }
    let index = SweepIndex {
        schema_version: SCHEMA_VERSION,
        name: &cfg.name,
        config: cfg.resonance,
        axes: cfg
            .sweep
            .iter()
            .map(|a| (a.param.as_str(), a.values.as_slice()))
            .collect(),
        points: index_points,
    };
    out.add("index.json".into(), json_string(&index)?);
    Ok(out)
}
