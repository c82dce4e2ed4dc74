//! Verify numerically that the map M: T*C^2 -> se(3)* is a Poisson map: the
//! canonical bracket of pulled-back coordinate functions equals the heavy top
//! Lie-Poisson bracket downstairs. Also show the involution of the Lagrange
//! top's conserved quantities upstairs.

use collective_top::algebra::PhasePoint;
use collective_top::diagnostics::{bracket_check, canonical_bracket};
use collective_top::hamiltonians::{collective_grad, grad_f1, grad_f2, grad_f3, TopPreset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut random_point = || {
        PhasePoint::from_qp(
            std::array::from_fn(|_| rng.gen_range(-2.0..2.0)),
            std::array::from_fn(|_| rng.gen_range(-2.0..2.0)),
        )
    };

    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let z = random_point();
        for row in bracket_check(&z) {
            for v in row {
                worst = worst.max(v);
            }
        }
    }
    println!("Poisson-map identity: max residual over 1000 random points = {worst:.3e}");

    let params = TopPreset::Lagrange { i1: 2.0, i3: 1.0, m: 1.0, g: 1.0, l: 1.0 }
        .params()
        .unwrap();
    let names = ["H", "F1", "F2", "F3"];
    let mut worst = 0.0f64;
    let mut worst_pair = ("", "");
    for _ in 0..1000 {
        let z = random_point();
        let grads = [collective_grad(&z, &params), grad_f1(&z), grad_f2(&z), grad_f3(&z)];
        for a in 0..4 {
            for b in (a + 1)..4 {
                let v = canonical_bracket(&grads[a], &grads[b]).abs();
                if v > worst {
                    worst = v;
                    worst_pair = (names[a], names[b]);
                }
            }
        }
    }
    println!(
        "Lagrange involution: max |{{{}, {}}}| over 1000 random points = {worst:.3e}",
        worst_pair.0, worst_pair.1
    );
}
