//! Experiment runner behind the `heavytop` binary: named experiment presets,
//! a line-oriented config-file format, and CSV/drift-report emission.
//!
//! Multi-run experiments execute their runs in parallel; each run is
//! single-threaded internally, so output is deterministic per run.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{SE3Dual, Vec3};
use crate::diagnostics::{
    drift_report, invariant_series_collective, invariant_series_direct, DriftReport,
    InvariantSeries, SeriesTooShort,
};
use crate::hamiltonians::{ParamsError, TopParams, TopPreset};
use crate::integrators::{
    collective_system, direct_system, integrate, IntegrateError, Method, StepperConfig,
    Trajectory,
};
use crate::maps::{collective_m, lift, GaugeMode, HopfBranch, LiftError, LiftGauge};

/// Which phase space the stepper acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formulation {
    /// Canonical system on `T*C²`, pushed to `se(3)*` through the Poisson map.
    Collective,
    /// Heavy top equations on `se(3)*` themselves.
    Direct,
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Formulation::Collective => "collective",
            Formulation::Direct => "direct",
        })
    }
}

impl FromStr for Formulation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "collective" => Ok(Formulation::Collective),
            "direct" => Ok(Formulation::Direct),
            other => Err(format!("unknown formulation `{other}` (expected collective|direct)")),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ExplicitMidpoint => "explicit-midpoint",
            Method::ImplicitMidpoint => "implicit-midpoint",
            Method::Rk4 => "rk4",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "explicit-midpoint" => Ok(Method::ExplicitMidpoint),
            "implicit-midpoint" => Ok(Method::ImplicitMidpoint),
            "rk4" => Ok(Method::Rk4),
            other => Err(format!(
                "unknown method `{other}` (expected explicit-midpoint|implicit-midpoint|rk4)"
            )),
        }
    }
}

/// Parse `x,y,z`.
pub fn parse_vec3(s: &str) -> Result<Vec3, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got `{s}`"));
    }
    let mut v = [0.0; 3];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("bad number `{}`: {e}", part.trim()))?;
    }
    Ok(Vec3::new(v[0], v[1], v[2]))
}

/// Parse `free` or `fix-re-chi1=V`.
pub fn parse_gauge(s: &str) -> Result<LiftGauge, String> {
    let mode = if s == "free" {
        GaugeMode::FreeGauge
    } else if let Some(value) = s.strip_prefix("fix-re-chi1=") {
        GaugeMode::FixReChi1(
            value.parse::<f64>().map_err(|e| format!("bad gauge value `{value}`: {e}"))?,
        )
    } else {
        return Err(format!("unknown gauge `{s}` (expected free|fix-re-chi1=V)"));
    };
    Ok(LiftGauge { mode, hopf_branch: HopfBranch::Auto })
}

/// One fully specified integration run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Suffix used for default file names of multi-run experiments.
    pub label: String,
    pub params: TopParams,
    pub pi0: Vec3,
    pub gamma0: Vec3,
    pub gauge: LiftGauge,
    pub method: Method,
    pub formulation: Formulation,
    pub dt: f64,
    pub t_final: f64,
    pub output_path: PathBuf,
    pub sample_stride: usize,
}

impl RunConfig {
    fn validate(&self) -> Result<(), RunError> {
        if !(self.dt > 0.0) {
            return Err(RunError::InvalidConfig(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_final > 0.0) {
            return Err(RunError::InvalidConfig(format!(
                "t-final must be positive, got {}",
                self.t_final
            )));
        }
        if self.sample_stride == 0 {
            return Err(RunError::InvalidConfig("stride must be at least 1".into()));
        }
        if self.formulation == Formulation::Collective && self.gamma0.norm() == 0.0 {
            return Err(RunError::InvalidConfig(
                "collective runs need a nonzero Gamma0 to lift".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error(transparent)]
    Lift(#[from] LiftError),
    #[error(transparent)]
    Integrate(#[from] IntegrateError),
    #[error(transparent)]
    Report(#[from] SeriesTooShort),
    #[error("writing {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Artifacts of a completed run.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub label: String,
    pub csv_path: PathBuf,
    pub report_path: PathBuf,
    pub steps: usize,
    pub report: DriftReport,
}

fn fmt_float(v: f64) -> String {
    // 17 significant digits round-trip f64 exactly.
    format!("{v:.16e}")
}

const DIRECT_HEADER: &str = "t,Pi1,Pi2,Pi3,Gamma1,Gamma2,Gamma3,h,f1,f2,f3,K";
const COLLECTIVE_HEADER: &str =
    "t,Pi1,Pi2,Pi3,Gamma1,Gamma2,Gamma3,h,f1,f2,f3,K,F1,F2,F3,J1,J2,J3";

fn csv_rows(
    times: &[f64],
    se3: &[SE3Dual],
    series: &InvariantSeries,
    stride: usize,
) -> String {
    let collective = series.phase.is_some();
    let mut out = String::new();
    out.push_str(if collective { COLLECTIVE_HEADER } else { DIRECT_HEADER });
    out.push('\n');
    for i in (0..times.len()).step_by(stride) {
        let s = &se3[i];
        let mut cols = vec![
            fmt_float(times[i]),
            fmt_float(s.pi.x),
            fmt_float(s.pi.y),
            fmt_float(s.pi.z),
            fmt_float(s.gamma.x),
            fmt_float(s.gamma.y),
            fmt_float(s.gamma.z),
            fmt_float(series.h[i]),
            fmt_float(series.f1[i]),
            fmt_float(series.f2[i]),
            fmt_float(series.f3[i]),
            fmt_float(series.k[i]),
        ];
        if let Some(phase) = &series.phase {
            cols.extend([
                fmt_float(phase.f1[i]),
                fmt_float(phase.f2[i]),
                fmt_float(phase.f3[i]),
                fmt_float(phase.j1[i]),
                fmt_float(phase.j2[i]),
                fmt_float(phase.j3[i]),
            ]);
        }
        out.push_str(&cols.join(","));
        out.push('\n');
    }
    out
}

fn report_text(label: &str, report: &DriftReport) -> String {
    let mut out = format!("drift report: {label}\n");
    for (name, stats) in &report.entries {
        out.push_str(&format!(
            "{name}: initial={} max_abs_dev={:.6e} lsq_slope={:.6e} final_dev={:.6e}\n",
            fmt_float(stats.initial),
            stats.max_abs_dev,
            stats.lsq_slope,
            stats.final_dev
        ));
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<(), RunError> {
    fs::write(path, contents).map_err(|source| RunError::Io { path: path.to_path_buf(), source })
}

/// Integrate one configured run and write its CSV plus a sidecar drift report
/// (`<output>.report.txt` next to the CSV).
pub fn run(config: &RunConfig) -> Result<RunSummary, RunError> {
    config.validate()?;
    let stepper = StepperConfig::new(config.method, config.dt);
    let target = SE3Dual::new(config.pi0, config.gamma0);
    let (times, se3, series, steps) = match config.formulation {
        Formulation::Collective => {
            let z0 = lift(&target, config.gauge)?;
            let system = collective_system(config.params);
            let traj: Trajectory<8> =
                integrate(&system, z0.to_array(), config.t_final, &stepper)?;
            let se3: Vec<SE3Dual> = traj.phase_points().map(|z| collective_m(&z)).collect();
            let series = invariant_series_collective(&traj, &config.params);
            (traj.times, se3, series, traj.states.len() - 1)
        }
        Formulation::Direct => {
            let system = direct_system(config.params);
            let traj: Trajectory<6> =
                integrate(&system, target.to_array(), config.t_final, &stepper)?;
            let se3: Vec<SE3Dual> = traj.se3_states().collect();
            let series = invariant_series_direct(&traj, &config.params);
            (traj.times, se3, series, traj.states.len() - 1)
        }
    };
    let report = drift_report(&series)?;
    write_file(&config.output_path, &csv_rows(&times, &se3, &series, config.sample_stride))?;
    let report_path = sidecar_path(&config.output_path);
    write_file(&report_path, &report_text(&config.label, &report))?;
    Ok(RunSummary {
        label: config.label.clone(),
        csv_path: config.output_path.clone(),
        report_path,
        steps,
        report,
    })
}

fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("report.txt")
}

/// Run independent configs in parallel, failing on the first error.
pub fn run_all(configs: &[RunConfig]) -> Result<Vec<RunSummary>, RunError> {
    configs.par_iter().map(run).collect()
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("unknown experiment `{0}` (expected kovalevskaya-fig1|kovalevskaya-fig2|lagrange-demo|convergence)")]
pub struct UnknownExperiment(pub String);

fn kovalevskaya_initial() -> (Vec3, Vec3) {
    (Vec3::new(2.0, 3.0, 4.0), Vec3::new(0.5, 0.0, 3.0f64.sqrt() / 2.0))
}

fn base_run(label: &str, out_dir: &Path, experiment: &str) -> RunConfig {
    let (pi0, gamma0) = kovalevskaya_initial();
    RunConfig {
        label: label.to_string(),
        params: TopPreset::kovalevskaya_unit(),
        pi0,
        gamma0,
        gauge: LiftGauge { mode: GaugeMode::FixReChi1(1.0), hopf_branch: HopfBranch::Auto },
        method: Method::ImplicitMidpoint,
        formulation: Formulation::Collective,
        dt: 1.0 / 50.0,
        t_final: 200.0,
        output_path: out_dir.join(format!("{experiment}-{label}.csv")),
        sample_stride: 1,
    }
}

/// Expand a named experiment into its constituent runs, with output files
/// placed under `out_dir`.
pub fn experiment_presets(name: &str, out_dir: &Path) -> Result<Vec<RunConfig>, UnknownExperiment> {
    match name {
        "kovalevskaya-fig1" => Ok(vec![
            RunConfig {
                method: Method::ExplicitMidpoint,
                ..base_run("explicit-collective", out_dir, name)
            },
            RunConfig {
                method: Method::ExplicitMidpoint,
                formulation: Formulation::Direct,
                ..base_run("explicit-direct", out_dir, name)
            },
            base_run("implicit-collective", out_dir, name),
        ]),
        "kovalevskaya-fig2" => Ok(vec![
            RunConfig {
                formulation: Formulation::Direct,
                ..base_run("implicit-direct", out_dir, name)
            },
            base_run("implicit-collective", out_dir, name),
        ]),
        "lagrange-demo" => {
            let params = TopPreset::Lagrange { i1: 2.0, i3: 1.0, m: 1.0, g: 1.0, l: 1.0 }
                .params()
                .expect("demo parameters are valid");
            Ok(vec![RunConfig {
                params,
                gauge: LiftGauge { mode: GaugeMode::FreeGauge, hopf_branch: HopfBranch::Auto },
                ..base_run("implicit-collective", out_dir, name)
            }])
        }
        "convergence" => Ok([25.0, 50.0, 100.0, 200.0]
            .iter()
            .map(|&denom| RunConfig {
                dt: 1.0 / denom,
                t_final: 5.0,
                ..base_run(&format!("dt-1-{denom}"), out_dir, name)
            })
            .collect()),
        other => Err(UnknownExperiment(other.to_string())),
    }
}

/// `key = value` pairs from a config file; later keys override earlier ones.
pub fn load_config_file(path: &Path) -> Result<Vec<(String, String)>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))?;
    parse_config_text(&text)
}

/// Line-oriented `key = value` parser; `#` starts a comment, blanks skipped.
pub fn parse_config_text(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected `key = value`, got `{raw}`", lineno + 1))?;
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() || value.is_empty() {
            return Err(format!("line {}: empty key or value in `{raw}`", lineno + 1));
        }
        pairs.push((key.to_string(), value.to_string()));
    }
    Ok(pairs)
}
