//! Drive a named experiment through the same runner as the `heavytop` binary,
//! writing one CSV plus a drift-report sidecar per run into `./out`.
//!
//! Pass a different experiment name as the first argument:
//! kovalevskaya-fig1 | kovalevskaya-fig2 | lagrange-demo | convergence

use std::path::Path;

use collective_top::cli::{experiment_presets, run_all};

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "kovalevskaya-fig2".to_string());
    let out_dir = Path::new("out");
    std::fs::create_dir_all(out_dir).expect("create output directory");

    let runs = match experiment_presets(&name, out_dir) {
        Ok(runs) => runs,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    println!("{name}: {} run(s)", runs.len());
    match run_all(&runs) {
        Ok(summaries) => {
            for s in summaries {
                println!("  {} [{} steps] -> {}", s.label, s.steps, s.csv_path.display());
                for name in ["h", "f1", "f2", "K"] {
                    if let Some(stats) = s.report.get(name) {
                        println!("     max|d{name}| = {:.3e}", stats.max_abs_dev);
                    }
                }
            }
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    }
}
