//! Thin command-line front end over [`collective_top::cli`].
//!
//! Either expands a named `--experiment` into its runs or builds a single run
//! from flags; an optional `--config FILE` supplies `key = value` defaults
//! that explicit flags override.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use collective_top::cli::{
    self, experiment_presets, load_config_file, parse_gauge, parse_vec3, run_all, Formulation,
    RunConfig,
};
use collective_top::hamiltonians::{TopParams, TopPreset};
use collective_top::integrators::Method;
use collective_top::maps::{GaugeMode, HopfBranch, LiftGauge};
use collective_top::Vec3;

#[derive(Parser, Debug)]
#[command(name = "heavytop", about = "Heavy top integrators: direct and collective formulations")]
struct Args {
    /// Named experiment: kovalevskaya-fig1 | kovalevskaya-fig2 | lagrange-demo | convergence
    #[arg(long)]
    experiment: Option<String>,
    /// explicit-midpoint | implicit-midpoint | rk4
    #[arg(long)]
    method: Option<String>,
    /// collective | direct
    #[arg(long)]
    formulation: Option<String>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long = "t-final")]
    t_final: Option<f64>,
    /// Initial body angular momentum, `x,y,z`
    #[arg(long)]
    pi0: Option<String>,
    /// Initial gravity direction in the body frame, `x,y,z`
    #[arg(long)]
    gamma0: Option<String>,
    /// lagrange | kovalevskaya | general
    #[arg(long)]
    preset: Option<String>,
    /// Principal moments, `I1,I2,I3`
    #[arg(long)]
    inertia: Option<String>,
    /// Mass, gravity, lever arm, `m,g,l`
    #[arg(long)]
    mgl: Option<String>,
    /// Center-of-mass direction (unit), `x,y,z`
    #[arg(long)]
    c: Option<String>,
    /// free | fix-re-chi1=V
    #[arg(long)]
    gauge: Option<String>,
    /// Output CSV path (single run) or directory (experiment)
    #[arg(long)]
    output: Option<PathBuf>,
    /// Keep every Nth sample in the CSV
    #[arg(long)]
    stride: Option<usize>,
    /// `key = value` defaults; flags override
    #[arg(long)]
    config: Option<PathBuf>,
}

fn take(args_value: &Option<String>, file: &[(String, String)], key: &str) -> Option<String> {
    args_value
        .clone()
        .or_else(|| file.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.clone()))
}

fn build_params(
    preset: Option<&str>,
    inertia: Option<Vec3>,
    mgl: Option<Vec3>,
    c: Option<Vec3>,
) -> Result<TopParams, String> {
    let (m, g, l) = match mgl {
        Some(v) => (v.x, v.y, v.z),
        None => (1.0, 1.0, 1.0),
    };
    match preset.unwrap_or("kovalevskaya") {
        "kovalevskaya" => {
            let i3 = inertia.map(|i| i.z).unwrap_or(1.0);
            TopPreset::Kovalevskaya { i3, m, g, l }.params().map_err(|e| e.to_string())
        }
        "lagrange" => {
            let (i1, i3) = inertia.map(|i| (i.x, i.z)).unwrap_or((2.0, 1.0));
            TopPreset::Lagrange { i1, i3, m, g, l }.params().map_err(|e| e.to_string())
        }
        "general" => {
            let i = inertia.ok_or("preset `general` needs --inertia I1,I2,I3")?;
            let c = c.ok_or("preset `general` needs --c x,y,z")?;
            TopParams::new(i.x, i.y, i.z, m, g, l, c).map_err(|e| e.to_string())
        }
        other => Err(format!("unknown preset `{other}` (expected lagrange|kovalevskaya|general)")),
    }
}

fn build_runs(args: &Args) -> Result<Vec<RunConfig>, String> {
    let file = match &args.config {
        Some(path) => load_config_file(path)?,
        None => Vec::new(),
    };
    let get = |value: &Option<String>, key: &str| take(value, &file, key);

    let method = match get(&args.method, "method") {
        Some(s) => Some(s.parse::<Method>()?),
        None => None,
    };
    let formulation = match get(&args.formulation, "formulation") {
        Some(s) => Some(s.parse::<Formulation>()?),
        None => None,
    };
    let parse_f64 = |s: String, key: &str| {
        s.parse::<f64>().map_err(|e| format!("bad {key} `{s}`: {e}"))
    };
    let dt = match args.dt.map(|v| v.to_string()).or_else(|| get(&None, "dt")) {
        Some(s) => Some(parse_f64(s, "dt")?),
        None => None,
    };
    let t_final = match args.t_final.map(|v| v.to_string()).or_else(|| get(&None, "t-final")) {
        Some(s) => Some(parse_f64(s, "t-final")?),
        None => None,
    };
    let stride = match args.stride.map(|v| v.to_string()).or_else(|| get(&None, "stride")) {
        Some(s) => Some(s.parse::<usize>().map_err(|e| format!("bad stride `{s}`: {e}"))?),
        None => None,
    };
    let gauge = match get(&args.gauge, "gauge") {
        Some(s) => Some(parse_gauge(&s)?),
        None => None,
    };
    let pi0 = get(&args.pi0, "pi0").map(|s| parse_vec3(&s)).transpose()?;
    let gamma0 = get(&args.gamma0, "gamma0").map(|s| parse_vec3(&s)).transpose()?;
    let inertia = get(&args.inertia, "inertia").map(|s| parse_vec3(&s)).transpose()?;
    let mgl = get(&args.mgl, "mgl").map(|s| parse_vec3(&s)).transpose()?;
    let c = get(&args.c, "c").map(|s| parse_vec3(&s)).transpose()?;
    let preset = get(&args.preset, "preset");
    let output = args
        .output
        .clone()
        .or_else(|| get(&None, "output").map(PathBuf::from));
    let experiment = get(&args.experiment, "experiment");

    if let Some(name) = experiment {
        let out_dir = output.unwrap_or_else(|| PathBuf::from("."));
        let mut runs = experiment_presets(&name, &out_dir).map_err(|e| e.to_string())?;
        let params_override = if preset.is_some() || inertia.is_some() || mgl.is_some() || c.is_some()
        {
            Some(build_params(preset.as_deref(), inertia, mgl, c)?)
        } else {
            None
        };
        for r in &mut runs {
            if let Some(m) = method {
                r.method = m;
            }
            if let Some(f) = formulation {
                r.formulation = f;
            }
            if let Some(v) = dt {
                r.dt = v;
            }
            if let Some(v) = t_final {
                r.t_final = v;
            }
            if let Some(v) = stride {
                r.sample_stride = v;
            }
            if let Some(g) = gauge {
                r.gauge = g;
            }
            if let Some(v) = pi0 {
                r.pi0 = v;
            }
            if let Some(v) = gamma0 {
                r.gamma0 = v;
            }
            if let Some(p) = params_override {
                r.params = p;
            }
        }
        Ok(runs)
    } else {
        let params = build_params(preset.as_deref(), inertia, mgl, c)?;
        Ok(vec![RunConfig {
            label: "run".to_string(),
            params,
            pi0: pi0.unwrap_or(Vec3::new(2.0, 3.0, 4.0)),
            gamma0: gamma0.unwrap_or(Vec3::new(0.5, 0.0, 3.0f64.sqrt() / 2.0)),
            gauge: gauge.unwrap_or(LiftGauge {
                mode: GaugeMode::FreeGauge,
                hopf_branch: HopfBranch::Auto,
            }),
            method: method.unwrap_or(Method::ImplicitMidpoint),
            formulation: formulation.unwrap_or(Formulation::Collective),
            dt: dt.unwrap_or(1.0 / 50.0),
            t_final: t_final.unwrap_or(10.0),
            output_path: output.unwrap_or_else(|| PathBuf::from("run.csv")),
            sample_stride: stride.unwrap_or(1),
        }])
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let runs = match build_runs(&args) {
        Ok(runs) => runs,
        Err(msg) => {
            eprintln!("heavytop: {msg}");
            return ExitCode::from(2);
        }
    };
    match run_all(&runs) {
        Ok(summaries) => {
            for s in &summaries {
                println!(
                    "{}: {} steps -> {} ({})",
                    s.label,
                    s.steps,
                    s.csv_path.display(),
                    s.report_path.display()
                );
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("heavytop: {err}");
            match err {
                cli::RunError::InvalidConfig(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
