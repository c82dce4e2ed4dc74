//! Measure the global convergence order of the midpoint schemes on the
//! collective Kovalevskaya system against a fine-step RK4 reference.

use collective_top::algebra::{SE3Dual, Vec3};
use collective_top::diagnostics::convergence_order;
use collective_top::hamiltonians::TopPreset;
use collective_top::integrators::{collective_system, integrate, Method, StepperConfig};
use collective_top::maps::{lift, GaugeMode, HopfBranch, LiftGauge};

fn main() {
    let params = TopPreset::kovalevskaya_unit();
    let target = SE3Dual::new(
        Vec3::new(1.0, 1.5, 2.0),
        Vec3::new(0.5, 0.0, 3.0f64.sqrt() / 2.0),
    );
    let gauge = LiftGauge { mode: GaugeMode::FreeGauge, hopf_branch: HopfBranch::Auto };
    let z0 = lift(&target, gauge).unwrap().to_array();
    let system = collective_system(params);
    let t = 5.0;

    let fine = StepperConfig::new(Method::Rk4, 1.0 / 3200.0);
    let reference = *integrate(&system, z0, t, &fine).unwrap().states.last().unwrap();

    for method in [Method::ExplicitMidpoint, Method::ImplicitMidpoint, Method::Rk4] {
        let mut errors = Vec::new();
        println!("{method:?}:");
        for denom in [25.0, 50.0, 100.0, 200.0] {
            let cfg = StepperConfig::new(method, 1.0 / denom);
            let last = *integrate(&system, z0, t, &cfg).unwrap().states.last().unwrap();
            let err = last
                .iter()
                .zip(reference.iter())
                .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
            println!("  dt = 1/{denom:<4} error {err:.6e}");
            errors.push((1.0 / denom, err));
        }
        println!("  measured order {:.3}", convergence_order(&errors).unwrap());
    }
}
