//! Lifting a heavy top state (Pi, Gamma) to the canonical phase space: branch
//! selection of the Hopf section, the translation gauge fixing Re(chi_1), and
//! the round trip back through M.

use collective_top::algebra::{SE3Dual, Vec3};
use collective_top::maps::{collective_m, lift, GaugeMode, HopfBranch, LiftGauge};

fn show(label: &str, target: &SE3Dual, gauge: LiftGauge) {
    match lift(target, gauge) {
        Ok(z) => {
            let back = collective_m(&z);
            let err = back
                .to_array()
                .iter()
                .zip(target.to_array().iter())
                .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
            println!("{label}:");
            println!("  chi = ({:.6}, {:.6})", z.chi.c1, z.chi.c2);
            println!("  psi = ({:.6}, {:.6})", z.psi.c1, z.psi.c2);
            println!("  round-trip error {err:.3e}");
        }
        Err(e) => println!("{label}: error: {e}"),
    }
}

fn main() {
    let target = SE3Dual::new(
        Vec3::new(2.0, 3.0, 4.0),
        Vec3::new(0.5, 0.0, 3.0f64.sqrt() / 2.0),
    );
    let auto = |mode| LiftGauge { mode, hopf_branch: HopfBranch::Auto };

    show("free gauge", &target, auto(GaugeMode::FreeGauge));
    show("Re(chi_1) = 1", &target, auto(GaugeMode::FixReChi1(1.0)));

    // at the south pole of the Gamma sphere the auto branch switches to the
    // lower one (psi_1 = 0 there), which also makes the Re(chi_1) gauge
    // condition unsolvable
    let south = SE3Dual::new(Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 0.0, -1.0));
    show("south pole, auto branch", &south, auto(GaugeMode::FreeGauge));
    show("south pole, Re(chi_1) = 1", &south, auto(GaugeMode::FixReChi1(1.0)));

    // Gamma = 0 is outside the image of the sphere bundle
    let degenerate = SE3Dual::new(Vec3::new(1.0, 0.0, 0.0), Vec3::ZERO);
    show("Gamma = 0", &degenerate, auto(GaugeMode::FreeGauge));
}
