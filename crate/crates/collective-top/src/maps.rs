//! The momentum map `L`, the Hopf map, the Poisson map `M = ϖ ∘ L` onto
//! `se(3)*`, its Jacobian, and the inverse lift with gauge handling.
//!
//! `collective_m` is implemented from the real-coordinate polynomial since it
//! sits on the hot path of the integrator; the complex composition
//! `varpi(momentum_map_l(z))` is kept as an independent oracle for tests.

use num_complex::Complex64;
use thiserror::Error;

use crate::algebra::{ComplexPair, PhasePoint, SE3Dual, SU2xC2Dual, Vec3};

/// Momentum map `L(χ, ψ) = (¼(χψ* − ψχ* − i Im(ψ*χ) I), −ψ)`, with the su(2)
/// slot identified with R³.
pub fn momentum_map_l(z: &PhasePoint) -> SU2xC2Dual {
    let chi = z.chi;
    let psi = z.psi;
    // outer products: (χψ*)_{jk} = χ_j conj(ψ_k)
    let outer = |a: ComplexPair, b: ComplexPair| -> [[Complex64; 2]; 2] {
        let av = [a.c1, a.c2];
        let bv = [b.c1, b.c2];
        std::array::from_fn(|j| std::array::from_fn(|k| av[j] * bv[k].conj()))
    };
    let cp = outer(chi, psi);
    let pc = outer(psi, chi);
    let im_pc = psi.hermitian(chi).im;
    let correction = Complex64::new(0.0, im_pc);
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for j in 0..2 {
        for k in 0..2 {
            m[j][k] = 0.25 * (cp[j][k] - pc[j][k]);
        }
        m[j][j] -= 0.25 * correction;
    }
    SU2xC2Dual {
        mu: crate::algebra::vec3_from_su2(m),
        alpha: -psi,
    }
}

/// The Hopf map `C² → R³`, `α ↦ (2Re(ᾱ₁α₂), 2Im(ᾱ₁α₂), |α₁|² − |α₂|²)`.
///
/// Maps the 3-sphere of radius `√R` to the 2-sphere of radius `R` and is
/// invariant under a global phase.
pub fn hopf(alpha: ComplexPair) -> Vec3 {
    let w = alpha.c1.conj() * alpha.c2;
    Vec3::new(2.0 * w.re, 2.0 * w.im, alpha.c1.norm_sqr() - alpha.c2.norm_sqr())
}

/// The Poisson map `ϖ: (su(2) ⋉ C²)* → se(3)*`, identity on the first slot
/// (under the R³ identifications) and the Hopf map on the second.
pub fn varpi(m: &SU2xC2Dual) -> SE3Dual {
    SE3Dual::new(m.mu, hopf(m.alpha))
}

/// The composite Poisson map `M = ϖ ∘ L`, evaluated from its real-coordinate
/// polynomial form.
pub fn collective_m(z: &PhasePoint) -> SE3Dual {
    let [q1, q2, q3, q4] = z.q();
    let [p1, p2, p3, p4] = z.p();
    let pi = Vec3::new(
        0.5 * (q1 * p4 - q4 * p1 - q2 * p3 + q3 * p2),
        0.5 * (q3 * p1 - q1 * p3 - q2 * p4 + q4 * p2),
        0.5 * (q1 * p2 - q2 * p1 - q3 * p4 + q4 * p3),
    );
    let gamma = Vec3::new(
        2.0 * (p1 * p3 + p2 * p4),
        2.0 * (p1 * p4 - p2 * p3),
        p1 * p1 + p2 * p2 - p3 * p3 - p4 * p4,
    );
    SE3Dual::new(pi, gamma)
}

/// The 3×4 matrix `A(p)` from the surjectivity argument: `Π = A q`,
/// `A Aᵀ = (‖p‖²/4) I`, and `A p = 0`.
pub fn surjectivity_matrix(p: [f64; 4]) -> [[f64; 4]; 3] {
    let [p1, p2, p3, p4] = p;
    [
        [0.5 * p4, -0.5 * p3, 0.5 * p2, -0.5 * p1],
        [-0.5 * p3, -0.5 * p4, 0.5 * p1, 0.5 * p2],
        [0.5 * p2, -0.5 * p1, -0.5 * p4, 0.5 * p3],
    ]
}

/// Jacobian of [`collective_m`]: rows `(Π₁,Π₂,Π₃,Γ₁,Γ₂,Γ₃)`, columns
/// `(q₁..q₄, p₁..p₄)`. The `∂Γ/∂q` block is identically zero.
pub fn jacobian_m(z: &PhasePoint) -> [[f64; 8]; 6] {
    let q = z.q();
    let p = z.p();
    let aq = surjectivity_matrix(q);
    let ap = surjectivity_matrix(p);
    let [p1, p2, p3, p4] = p;
    let dgamma_dp = [
        [2.0 * p3, 2.0 * p4, 2.0 * p1, 2.0 * p2],
        [2.0 * p4, -2.0 * p3, -2.0 * p2, 2.0 * p1],
        [2.0 * p1, 2.0 * p2, -2.0 * p3, -2.0 * p4],
    ];
    let mut jac = [[0.0; 8]; 6];
    for i in 0..3 {
        for j in 0..4 {
            // Π(q,p) = A(p) q = -A(q) p
            jac[i][j] = ap[i][j];
            jac[i][4 + j] = -aq[i][j];
            jac[3 + i][4 + j] = dgamma_dp[i][j];
        }
    }
    jac
}

/// Which inverse-Hopf branch to take when lifting a target `Γ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HopfBranch {
    /// Pick the branch with the larger square-root argument; stable near the poles.
    #[default]
    Auto,
    /// `ψ₁ = √((r+Γ₃)/2)` real positive.
    UpperBranch,
    /// `ψ₂ = √((r−Γ₃)/2)` real positive.
    LowerBranch,
}

/// How the translation gauge freedom `χ ↦ χ + bψ` is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum GaugeMode {
    /// No translation along `ψ` (`s = 0`).
    #[default]
    FreeGauge,
    /// Solve `Re χ₁ = value` for the translation parameter.
    FixReChi1(f64),
}

/// Gauge configuration for [`lift`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LiftGauge {
    pub mode: GaugeMode,
    pub hopf_branch: HopfBranch,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LiftError {
    #[error("cannot lift a target with Gamma = 0")]
    ZeroGamma,
    #[error("FixReChi1 gauge is unsolvable: the lifted psi has Re(psi_1) = 0")]
    GaugeUnsolvable,
}

/// Construct a phase point with `collective_m(lift(s)) = s`.
///
/// The inverse Hopf step sets `ψ` on the branch selected by the gauge; `χ` is
/// recovered from `q = (4/r) Aᵀ Π + s p` where `r = ‖Γ‖` and `ker A = span{p}`.
pub fn lift(target: &SE3Dual, gauge: LiftGauge) -> Result<PhasePoint, LiftError> {
    let gamma = target.gamma;
    let r = gamma.norm();
    if r == 0.0 {
        return Err(LiftError::ZeroGamma);
    }
    let upper = (r + gamma.z) / 2.0;
    let lower = (r - gamma.z) / 2.0;
    let branch = match gauge.hopf_branch {
        HopfBranch::UpperBranch => HopfBranch::UpperBranch,
        HopfBranch::LowerBranch => HopfBranch::LowerBranch,
        HopfBranch::Auto => {
            if upper >= lower {
                HopfBranch::UpperBranch
            } else {
                HopfBranch::LowerBranch
            }
        }
    };
    let psi = match branch {
        HopfBranch::UpperBranch | HopfBranch::Auto => {
            let psi1 = upper.sqrt();
            let psi2 = Complex64::new(gamma.x, gamma.y) / (2.0 * psi1);
            ComplexPair::new(Complex64::new(psi1, 0.0), psi2)
        }
        HopfBranch::LowerBranch => {
            let psi2 = lower.sqrt();
            let psi1 = Complex64::new(gamma.x, -gamma.y) / (2.0 * psi2);
            ComplexPair::new(psi1, Complex64::new(psi2, 0.0))
        }
    };
    let p = psi.to_real();
    let a = surjectivity_matrix(p);
    let pi = target.pi.to_array();
    // q = (4/r) Aᵀ Π + s p
    let mut q = [0.0; 4];
    for j in 0..4 {
        for i in 0..3 {
            q[j] += 4.0 / r * a[i][j] * pi[i];
        }
    }
    let s = match gauge.mode {
        GaugeMode::FreeGauge => 0.0,
        GaugeMode::FixReChi1(value) => {
            if p[0] == 0.0 {
                return Err(LiftError::GaugeUnsolvable);
            }
            (value - q[0]) / p[0]
        }
    };
    for j in 0..4 {
        q[j] += s * p[j];
    }
    Ok(PhasePoint::from_qp(q, p))
}
