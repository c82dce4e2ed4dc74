//! Heavy top and collective Hamiltonians, their analytic derivatives, and the
//! conserved quantities (Casimirs, Noether quantities, Lagrange and
//! Kovalevskaya invariants).
//!
//! Gradients and Hessians are analytic, assembled by the chain rule through
//! the Jacobian of the Poisson map; tests check them against central finite
//! differences.

use thiserror::Error;

use crate::algebra::{PhasePoint, SE3Dual, Vec3};
use crate::maps::{collective_m, jacobian_m};

/// Energy in units of mass·length²/time².
pub type EnergyValue = f64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamsError {
    #[error("principal moments of inertia must be positive, got ({0}, {1}, {2})")]
    NonPositiveInertia(f64, f64, f64),
    #[error("mass, gravity, and lever arm must be nonnegative")]
    NegativeMglFactor,
    #[error("center direction must be a unit vector, got norm {0}")]
    NonUnitCenter(f64),
}

/// Physical parameters of a heavy top with diagonal (principal-axis) inertia.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopParams {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub m: f64,
    pub g: f64,
    pub l: f64,
    /// Unit vector from the support point toward the center of mass, body frame.
    pub c: Vec3,
}

impl TopParams {
    pub fn new(
        i1: f64,
        i2: f64,
        i3: f64,
        m: f64,
        g: f64,
        l: f64,
        c: Vec3,
    ) -> Result<Self, ParamsError> {
        if !(i1 > 0.0 && i2 > 0.0 && i3 > 0.0) {
            return Err(ParamsError::NonPositiveInertia(i1, i2, i3));
        }
        if m < 0.0 || g < 0.0 || l < 0.0 {
            return Err(ParamsError::NegativeMglFactor);
        }
        if (c.norm() - 1.0).abs() > 1e-12 {
            return Err(ParamsError::NonUnitCenter(c.norm()));
        }
        Ok(TopParams { i1, i2, i3, m, g, l, c })
    }

    pub fn mgl(&self) -> f64 {
        self.m * self.g * self.l
    }

    /// Body angular velocity `ω = I⁻¹ Π`.
    pub fn inertia_inv(&self, pi: Vec3) -> Vec3 {
        Vec3::new(pi.x / self.i1, pi.y / self.i2, pi.z / self.i3)
    }

    /// Lagrange shape: symmetric inertia with the center along the symmetry axis.
    pub fn is_lagrange(&self) -> bool {
        self.i1 == self.i2 && self.c == Vec3::new(0.0, 0.0, 1.0)
    }

    /// Kovalevskaya shape: `I₁ = I₂ = 2 I₃`, center along the first axis.
    pub fn is_kovalevskaya(&self) -> bool {
        self.i1 == self.i2 && self.i1 == 2.0 * self.i3 && self.c == Vec3::new(1.0, 0.0, 0.0)
    }
}

/// Named parameter families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TopPreset {
    General(TopParams),
    /// `I₂ = I₁`, `c = (0,0,1)`.
    Lagrange { i1: f64, i3: f64, m: f64, g: f64, l: f64 },
    /// `I₁ = I₂ = 2 I₃`, `c = (1,0,0)`.
    Kovalevskaya { i3: f64, m: f64, g: f64, l: f64 },
}

impl TopPreset {
    pub fn params(&self) -> Result<TopParams, ParamsError> {
        match *self {
            TopPreset::General(p) => Ok(p),
            TopPreset::Lagrange { i1, i3, m, g, l } => {
                TopParams::new(i1, i1, i3, m, g, l, Vec3::new(0.0, 0.0, 1.0))
            }
            TopPreset::Kovalevskaya { i3, m, g, l } => {
                TopParams::new(2.0 * i3, 2.0 * i3, i3, m, g, l, Vec3::new(1.0, 0.0, 0.0))
            }
        }
    }

    /// The standard benchmark case: `m = g = l = I₃ = 1`.
    pub fn kovalevskaya_unit() -> TopParams {
        TopPreset::Kovalevskaya { i3: 1.0, m: 1.0, g: 1.0, l: 1.0 }
            .params()
            .expect("unit Kovalevskaya parameters are valid")
    }
}

/// Heavy top Hamiltonian `h = ½ Π·(I⁻¹Π) + mgl Γ·c`.
pub fn h_heavytop(s: &SE3Dual, params: &TopParams) -> EnergyValue {
    0.5 * s.pi.dot(params.inertia_inv(s.pi)) + params.mgl() * s.gamma.dot(params.c)
}

/// Right-hand side of the heavy top equations:
/// `Π̇ = Π×(I⁻¹Π) + mgl Γ×c`, `Γ̇ = Γ×(I⁻¹Π)`.
pub fn heavytop_field(s: &SE3Dual, params: &TopParams) -> SE3Dual {
    let omega = params.inertia_inv(s.pi);
    SE3Dual::new(
        s.pi.cross(omega) + s.gamma.cross(params.c) * params.mgl(),
        s.gamma.cross(omega),
    )
}

/// Jacobian of [`heavytop_field`] in the flat `(Π, Γ)` coordinates.
pub fn heavytop_jacobian(s: &SE3Dual, params: &TopParams) -> [[f64; 6]; 6] {
    let omega = params.inertia_inv(s.pi);
    let hat_omega = crate::algebra::hat(omega);
    let hat_pi = crate::algebra::hat(s.pi);
    let hat_gamma = crate::algebra::hat(s.gamma);
    let hat_c = crate::algebra::hat(params.c);
    let inv = [1.0 / params.i1, 1.0 / params.i2, 1.0 / params.i3];
    let mgl = params.mgl();
    let mut jac = [[0.0; 6]; 6];
    for i in 0..3 {
        for j in 0..3 {
            // d(Π×ω)/dΠ = -hat(ω) + hat(Π) I⁻¹
            jac[i][j] = -hat_omega[i][j] + hat_pi[i][j] * inv[j];
            // d(mgl Γ×c)/dΓ = -mgl hat(c)
            jac[i][3 + j] = -mgl * hat_c[i][j];
            // d(Γ×ω)/dΠ = hat(Γ) I⁻¹
            jac[3 + i][j] = hat_gamma[i][j] * inv[j];
            // d(Γ×ω)/dΓ = -hat(ω)
            jac[3 + i][3 + j] = -hat_omega[i][j];
        }
    }
    jac
}

/// Collective Hamiltonian `H = h ∘ M`, evaluated from the expanded polynomial form.
pub fn collective_h(z: &PhasePoint, params: &TopParams) -> EnergyValue {
    let chi = z.chi;
    let psi = z.psi;
    let a = (chi.c1 * psi.c2.conj() + chi.c2 * psi.c1.conj()).im;
    let b = (chi.c2 * psi.c1.conj() - chi.c1 * psi.c2.conj()).re;
    let c3 = (chi.c2 * psi.c2.conj() - chi.c1 * psi.c1.conj()).im;
    let kinetic =
        (a * a / params.i1 + b * b / params.i2 + c3 * c3 / params.i3) / 8.0;
    let w = psi.c1.conj() * psi.c2;
    let gamma = Vec3::new(2.0 * w.re, 2.0 * w.im, psi.c1.norm_sqr() - psi.c2.norm_sqr());
    kinetic + params.mgl() * gamma.dot(params.c)
}

/// Composition route `h(M(z))`; kept as an independent oracle for [`collective_h`].
pub fn collective_h_composed(z: &PhasePoint, params: &TopParams) -> EnergyValue {
    h_heavytop(&collective_m(z), params)
}

// Bilinear coefficient tables: Π_k = Σ coef · q_i p_j over the listed triples.
const PI_COEFFS: [[(usize, usize, f64); 4]; 3] = [
    [(0, 3, 0.5), (3, 0, -0.5), (1, 2, -0.5), (2, 1, 0.5)],
    [(2, 0, 0.5), (0, 2, -0.5), (1, 3, -0.5), (3, 1, 0.5)],
    [(0, 1, 0.5), (1, 0, -0.5), (2, 3, -0.5), (3, 2, 0.5)],
];

// Constant pp-block Hessians of the Γ components.
const GAMMA_HESS: [[(usize, usize, f64); 2]; 2] = [
    [(0, 2, 2.0), (1, 3, 2.0)],
    [(0, 3, 2.0), (1, 2, -2.0)],
];

/// Analytic gradient `(∂H/∂q, ∂H/∂p)` via the chain rule
/// `∇H = J_M(z)ᵀ (I⁻¹Π, mgl c)`.
pub fn collective_grad(z: &PhasePoint, params: &TopParams) -> [f64; 8] {
    let s = collective_m(z);
    let jac = jacobian_m(z);
    let omega = params.inertia_inv(s.pi).to_array();
    let gc = (params.c * params.mgl()).to_array();
    let mut grad = [0.0; 8];
    for col in 0..8 {
        for i in 0..3 {
            grad[col] += jac[i][col] * omega[i] + jac[3 + i][col] * gc[i];
        }
    }
    grad
}

/// Analytic Hessian of the collective Hamiltonian.
///
/// `∇²H = J_Mᵀ diag(I⁻¹, 0) J_M + Σ (I⁻¹Π)_k ∇²Π_k + mgl Σ c_k ∇²Γ_k`,
/// where the second-derivative tensors of the polynomial map are constant.
pub fn collective_hessian(z: &PhasePoint, params: &TopParams) -> [[f64; 8]; 8] {
    let s = collective_m(z);
    let jac = jacobian_m(z);
    let inv = [1.0 / params.i1, 1.0 / params.i2, 1.0 / params.i3];
    let omega = params.inertia_inv(s.pi).to_array();
    let mgl = params.mgl();
    let c = params.c.to_array();
    let mut hess = [[0.0; 8]; 8];
    for a in 0..8 {
        for b in 0..8 {
            let mut v = 0.0;
            for k in 0..3 {
                v += jac[k][a] * inv[k] * jac[k][b];
            }
            hess[a][b] = v;
        }
    }
    for k in 0..3 {
        for &(qi, pj, coef) in &PI_COEFFS[k] {
            hess[qi][4 + pj] += omega[k] * coef;
            hess[4 + pj][qi] += omega[k] * coef;
        }
    }
    for k in 0..2 {
        for &(pi, pj, coef) in &GAMMA_HESS[k] {
            hess[4 + pi][4 + pj] += mgl * c[k] * coef;
            hess[4 + pj][4 + pi] += mgl * c[k] * coef;
        }
    }
    // Γ₃ = p₁² + p₂² − p₃² − p₄²
    let g3 = [2.0, 2.0, -2.0, -2.0];
    for (j, v) in g3.iter().enumerate() {
        hess[4 + j][4 + j] += mgl * c[2] * v;
    }
    hess
}

/// Canonical vector field `q̇ = ∂H/∂p`, `ṗ = −∂H/∂q`, in the flat `(q,p)` view.
pub fn canonical_field_array(y: &[f64; 8], params: &TopParams) -> [f64; 8] {
    let grad = collective_grad(&PhasePoint::from_array(*y), params);
    [
        grad[4], grad[5], grad[6], grad[7], -grad[0], -grad[1], -grad[2], -grad[3],
    ]
}

/// Canonical vector field as a phase-point time derivative.
pub fn canonical_field(z: &PhasePoint, params: &TopParams) -> PhasePoint {
    PhasePoint::from_array(canonical_field_array(&z.to_array(), params))
}

/// Jacobian of the canonical vector field, from the analytic Hessian.
pub fn canonical_field_jacobian(y: &[f64; 8], params: &TopParams) -> [[f64; 8]; 8] {
    let hess = collective_hessian(&PhasePoint::from_array(*y), params);
    let mut jac = [[0.0; 8]; 8];
    for j in 0..8 {
        for i in 0..4 {
            jac[i][j] = hess[4 + i][j];
            jac[4 + i][j] = -hess[i][j];
        }
    }
    jac
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("parameters are not Lagrange-shaped (need I2 = I1 and c = (0,0,1))")]
pub struct PresetMismatch;

/// The algebraically simplified collective Hamiltonian of the Lagrange top.
pub fn lagrange_h(z: &PhasePoint, params: &TopParams) -> Result<EnergyValue, PresetMismatch> {
    if !params.is_lagrange() {
        return Err(PresetMismatch);
    }
    let chi = z.chi;
    let psi = z.psi;
    let t1 = chi.c1 * psi.c2.conj();
    let t2 = chi.c2 * psi.c1.conj();
    let transverse = t1.norm_sqr() + t2.norm_sqr() - 2.0 * (t1 * t2).re;
    let axial = (chi.c2 * psi.c2.conj() - chi.c1 * psi.c1.conj()).im;
    let kinetic = (transverse / params.i1 + axial * axial / params.i3) / 8.0;
    Ok(kinetic + params.mgl() * (psi.c1.norm_sqr() - psi.c2.norm_sqr()))
}

/// Conserved quantities evaluated on the heavy top side.
///
/// `f3` and `k` are total functions; they are first integrals only for
/// Lagrange and Kovalevskaya parameters respectively.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Se3Invariants {
    pub h: f64,
    /// Casimir `‖Γ‖²`.
    pub f1: f64,
    /// Casimir `Π·Γ`.
    pub f2: f64,
    /// Lagrange invariant `Π₃`.
    pub f3: f64,
    /// Kovalevskaya invariant `|(Π₁+iΠ₂)² − 4 mgl I₃ (Γ₁+iΓ₂)|²`.
    pub k: f64,
}

pub fn invariants_se3(s: &SE3Dual, params: &TopParams) -> Se3Invariants {
    let w = num_complex::Complex64::new(s.pi.x, s.pi.y);
    let g = num_complex::Complex64::new(s.gamma.x, s.gamma.y);
    let k = (w * w - 4.0 * params.mgl() * params.i3 * g).norm_sqr();
    Se3Invariants {
        h: h_heavytop(s, params),
        f1: s.gamma.norm_squared(),
        f2: s.pi.dot(s.gamma),
        f3: s.pi.z,
        k,
    }
}

/// Noether quantities of the canonical system and their Casimir counterparts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseInvariants {
    /// `‖ψ‖²/2`, momentum of the translation `χ ↦ χ + bψ`.
    pub j1: f64,
    /// `−Im(ψ*χ)`, momentum of the diagonal phase action.
    pub j2: f64,
    /// `Im(χ₂ψ̄₂ − χ₁ψ̄₁)`, momentum of the Lagrange-top phase action.
    pub j3: f64,
    /// `‖ψ‖⁴ = f₁ ∘ M`.
    pub f1: f64,
    /// `−(‖ψ‖²/2) Im(ψ*χ) = f₂ ∘ M`.
    pub f2: f64,
    /// `J₃/2 = f₃ ∘ M`.
    pub f3: f64,
}

pub fn invariants_phase(z: &PhasePoint) -> PhaseInvariants {
    let psi_chi = z.psi.hermitian(z.chi);
    let norm2 = z.psi.norm_squared();
    let j1 = norm2 / 2.0;
    let j2 = -psi_chi.im;
    let j3 = (z.chi.c2 * z.psi.c2.conj() - z.chi.c1 * z.psi.c1.conj()).im;
    PhaseInvariants {
        j1,
        j2,
        j3,
        f1: norm2 * norm2,
        f2: norm2 / 2.0 * j2,
        f3: j3 / 2.0,
    }
}

/// Analytic gradient of `F₁ = ‖ψ‖⁴` in `(q, p)`.
pub fn grad_f1(z: &PhasePoint) -> [f64; 8] {
    let p = z.p();
    let norm2: f64 = p.iter().map(|x| x * x).sum();
    let mut g = [0.0; 8];
    for j in 0..4 {
        g[4 + j] = 4.0 * norm2 * p[j];
    }
    g
}

/// Analytic gradient of `F₂ = (‖ψ‖²/2)·J₂` in `(q, p)`.
pub fn grad_f2(z: &PhasePoint) -> [f64; 8] {
    let q = z.q();
    let p = z.p();
    let norm2: f64 = p.iter().map(|x| x * x).sum();
    let j2 = p[1] * q[0] - p[0] * q[1] + p[3] * q[2] - p[2] * q[3];
    let dj2_dq = [p[1], -p[0], p[3], -p[2]];
    let dj2_dp = [-q[1], q[0], -q[3], q[2]];
    let mut g = [0.0; 8];
    for j in 0..4 {
        g[j] = norm2 / 2.0 * dj2_dq[j];
        g[4 + j] = norm2 / 2.0 * dj2_dp[j] + j2 * p[j];
    }
    g
}

/// Analytic gradient of `F₃ = ½(q₄p₃ − q₃p₄ − q₂p₁ + q₁p₂)` in `(q, p)`.
pub fn grad_f3(z: &PhasePoint) -> [f64; 8] {
    let q = z.q();
    let p = z.p();
    [
        0.5 * p[1],
        -0.5 * p[0],
        -0.5 * p[3],
        0.5 * p[2],
        -0.5 * q[1],
        0.5 * q[0],
        0.5 * q[3],
        -0.5 * q[2],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{lift, GaugeMode, HopfBranch, LiftGauge};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0xfeed)
    }

    fn rand_phase_point(r: &mut impl Rng) -> PhasePoint {
        PhasePoint::from_qp(
            std::array::from_fn(|_| r.gen_range(-2.0..2.0)),
            std::array::from_fn(|_| r.gen_range(-2.0..2.0)),
        )
    }

    fn rand_params(r: &mut impl Rng) -> TopParams {
        let dir = Vec3::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), r.gen_range(0.2..1.0));
        TopParams::new(
            r.gen_range(0.5..3.0),
            r.gen_range(0.5..3.0),
            r.gen_range(0.5..3.0),
            r.gen_range(0.1..2.0),
            r.gen_range(0.1..2.0),
            r.gen_range(0.1..2.0),
            dir * (1.0 / dir.norm()),
        )
        .unwrap()
    }

    fn kov_state() -> SE3Dual {
        SE3Dual::new(Vec3::new(2.0, 3.0, 4.0), Vec3::new(0.5, 0.0, 3.0f64.sqrt() / 2.0))
    }

    #[test]
    fn params_validation() {
        assert!(TopParams::new(0.0, 1.0, 1.0, 1.0, 1.0, 1.0, Vec3::new(0.0, 0.0, 1.0)).is_err());
        assert!(TopParams::new(1.0, 1.0, 1.0, -1.0, 1.0, 1.0, Vec3::new(0.0, 0.0, 1.0)).is_err());
        assert!(TopParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 1.0, Vec3::new(0.0, 0.0, 2.0)).is_err());
    }

    #[test]
    fn preset_expansion() {
        let lagrange = TopPreset::Lagrange { i1: 2.0, i3: 1.0, m: 1.0, g: 1.0, l: 1.0 }
            .params()
            .unwrap();
        assert_eq!(lagrange.i2, 2.0);
        assert_eq!(lagrange.c, Vec3::new(0.0, 0.0, 1.0));
        assert!(lagrange.is_lagrange());
        let kov = TopPreset::kovalevskaya_unit();
        assert_eq!((kov.i1, kov.i2, kov.i3), (2.0, 2.0, 1.0));
        assert_eq!(kov.c, Vec3::new(1.0, 0.0, 0.0));
        assert!(kov.is_kovalevskaya());
    }

    #[test]
    fn h_heavytop_examples() {
        let kov = TopPreset::kovalevskaya_unit();
        assert_eq!(h_heavytop(&SE3Dual::default(), &kov), 0.0);
        assert!((h_heavytop(&kov_state(), &kov) - 11.75).abs() < 1e-14);
        let lagrange = TopPreset::Lagrange { i1: 2.0, i3: 1.5, m: 1.0, g: 2.0, l: 0.5 }
            .params()
            .unwrap();
        let a = 3.0;
        let upright = SE3Dual::new(Vec3::new(0.0, 0.0, a), Vec3::new(0.0, 0.0, 1.0));
        let expect = a * a / (2.0 * 1.5) + 1.0;
        assert!((h_heavytop(&upright, &lagrange) - expect).abs() < 1e-14);
    }

    #[test]
    fn sleeping_top_is_an_equilibrium() {
        let lagrange = TopPreset::Lagrange { i1: 2.0, i3: 1.0, m: 1.0, g: 1.0, l: 1.0 }
            .params()
            .unwrap();
        let s = SE3Dual::new(Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 0.0, 1.0));
        let ds = heavytop_field(&s, &lagrange);
        assert_eq!(ds.pi, Vec3::ZERO);
        assert_eq!(ds.gamma, Vec3::ZERO);
    }

    #[test]
    fn euler_equations_when_gravity_off() {
        let params =
            TopParams::new(1.0, 2.0, 3.0, 1.0, 0.0, 1.0, Vec3::new(0.0, 0.0, 1.0)).unwrap();
        let s = SE3Dual::new(Vec3::new(1.0, 1.0, 1.0), Vec3::new(0.3, -0.5, 0.7));
        let ds = heavytop_field(&s, &params);
        let expect = Vec3::new(-1.0 / 6.0, 2.0 / 3.0, -0.5);
        assert!((ds.pi - expect).norm() < 1e-15);
    }

    #[test]
    fn kovalevskaya_field_hand_evaluation() {
        let kov = TopPreset::kovalevskaya_unit();
        let ds = heavytop_field(&kov_state(), &kov);
        let r3 = 3.0f64.sqrt();
        let pi_dot = Vec3::new(6.0, -4.0 + r3 / 2.0, 0.0);
        let gamma_dot = Vec3::new(-3.0 * r3 / 4.0, r3 / 2.0 - 2.0, 0.75);
        assert!((ds.pi - pi_dot).norm() < 1e-14);
        assert!((ds.gamma - gamma_dot).norm() < 1e-14);
    }

    #[test]
    fn heavytop_jacobian_matches_finite_differences() {
        let mut r = rng();
        let h = 1e-6;
        for _ in 0..20 {
            let params = rand_params(&mut r);
            let y0 = SE3Dual::new(
                Vec3::new(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0)),
                Vec3::new(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0)),
            )
            .to_array();
            let jac = heavytop_jacobian(&SE3Dual::from_array(y0), &params);
            let mut scale = 1.0f64;
            for row in &jac {
                for v in row {
                    scale = scale.max(v.abs());
                }
            }
            for col in 0..6 {
                let mut yp = y0;
                let mut ym = y0;
                yp[col] += h;
                ym[col] -= h;
                let fp = heavytop_field(&SE3Dual::from_array(yp), &params).to_array();
                let fm = heavytop_field(&SE3Dual::from_array(ym), &params).to_array();
                for row in 0..6 {
                    let fd = (fp[row] - fm[row]) / (2.0 * h);
                    assert!((jac[row][col] - fd).abs() < 1e-6 * scale);
                }
            }
        }
    }

    #[test]
    fn collective_h_zero_psi() {
        let kov = TopPreset::kovalevskaya_unit();
        let z = PhasePoint::from_qp([1.0, -2.0, 0.3, 0.7], [0.0; 4]);
        assert_eq!(collective_h(&z, &kov), 0.0);
    }

    #[test]
    fn collective_h_at_benchmark_initial_condition() {
        let kov = TopPreset::kovalevskaya_unit();
        let gauge = LiftGauge { mode: GaugeMode::FixReChi1(1.0), hopf_branch: HopfBranch::Auto };
        let z = lift(&kov_state(), gauge).unwrap();
        assert!((collective_h(&z, &kov) - 11.75).abs() < 1e-12);
    }

    #[test]
    fn collective_h_matches_composition_oracle() {
        let mut r = rng();
        for _ in 0..1000 {
            let params = rand_params(&mut r);
            let z = rand_phase_point(&mut r);
            let expanded = collective_h(&z, &params);
            let composed = collective_h_composed(&z, &params);
            assert!((expanded - composed).abs() < 1e-13 * (1.0 + composed.abs()));
        }
    }

    #[test]
    fn collective_grad_matches_central_differences() {
        let mut r = rng();
        let h = 1e-6;
        for _ in 0..50 {
            let params = rand_params(&mut r);
            let z = rand_phase_point(&mut r);
            let grad = collective_grad(&z, &params);
            let y0 = z.to_array();
            let scale = grad.iter().fold(1.0f64, |a, v| a.max(v.abs()));
            for col in 0..8 {
                let mut yp = y0;
                let mut ym = y0;
                yp[col] += h;
                ym[col] -= h;
                let fp = collective_h(&PhasePoint::from_array(yp), &params);
                let fm = collective_h(&PhasePoint::from_array(ym), &params);
                let fd = (fp - fm) / (2.0 * h);
                assert!((grad[col] - fd).abs() < 1e-6 * scale);
            }
        }
    }

    #[test]
    fn collective_grad_zero_at_zero_psi() {
        let kov = TopPreset::kovalevskaya_unit();
        let z = PhasePoint::from_qp([1.0, 2.0, 3.0, 4.0], [0.0; 4]);
        assert_eq!(collective_grad(&z, &kov), [0.0; 8]);
        let f = canonical_field(&z, &kov);
        assert_eq!(f, PhasePoint::default());
    }

    #[test]
    fn collective_hessian_matches_grad_differences() {
        let mut r = rng();
        let h = 1e-6;
        for _ in 0..20 {
            let params = rand_params(&mut r);
            let z = rand_phase_point(&mut r);
            let hess = collective_hessian(&z, &params);
            let y0 = z.to_array();
            let mut scale = 1.0f64;
            for row in &hess {
                for v in row {
                    scale = scale.max(v.abs());
                }
            }
            for col in 0..8 {
                let mut yp = y0;
                let mut ym = y0;
                yp[col] += h;
                ym[col] -= h;
                let gp = collective_grad(&PhasePoint::from_array(yp), &params);
                let gm = collective_grad(&PhasePoint::from_array(ym), &params);
                for row in 0..8 {
                    let fd = (gp[row] - gm[row]) / (2.0 * h);
                    assert!((hess[row][col] - fd).abs() < 1e-5 * scale);
                }
            }
        }
    }

    #[test]
    fn pushforward_of_fields() {
        // jacobian_M · X_H = X_h ∘ M (infinitesimal commuting-flows identity)
        let mut r = rng();
        for _ in 0..100 {
            let params = rand_params(&mut r);
            let z = rand_phase_point(&mut r);
            let xh = canonical_field_array(&z.to_array(), &params);
            let jac = jacobian_m(&z);
            let pushed = crate::linalg::matvec(&jac, &xh);
            let direct = heavytop_field(&collective_m(&z), &params).to_array();
            let scale = 1.0 + crate::linalg::inf_norm(&direct);
            for i in 0..6 {
                assert!((pushed[i] - direct[i]).abs() < 1e-11 * scale);
            }
        }
    }

    #[test]
    fn complex_form_of_canonical_field() {
        // χ̇ = 2 ∂H/∂ψ̄ via Wirtinger derivatives: components (∂H/∂p₁ + i ∂H/∂p₂, ...)
        let mut r = rng();
        let params = rand_params(&mut r);
        let z = rand_phase_point(&mut r);
        let grad = collective_grad(&z, &params);
        let f = canonical_field(&z, &params);
        let chidot = f.chi;
        assert!((chidot.c1.re - grad[4]).abs() < 1e-14);
        assert!((chidot.c1.im - grad[5]).abs() < 1e-14);
        assert!((chidot.c2.re - grad[6]).abs() < 1e-14);
        assert!((chidot.c2.im - grad[7]).abs() < 1e-14);
    }

    #[test]
    fn lagrange_h_requires_lagrange_shape() {
        let kov = TopPreset::kovalevskaya_unit();
        let z = PhasePoint::default();
        assert_eq!(lagrange_h(&z, &kov), Err(PresetMismatch));
    }

    #[test]
    fn lagrange_h_equals_general_collective_h() {
        let lagrange = TopPreset::Lagrange { i1: 2.0, i3: 1.0, m: 1.0, g: 1.0, l: 1.0 }
            .params()
            .unwrap();
        assert_eq!(lagrange_h(&PhasePoint::default(), &lagrange), Ok(0.0));
        let mut r = rng();
        for _ in 0..1000 {
            let z = rand_phase_point(&mut r);
            let hl = lagrange_h(&z, &lagrange).unwrap();
            let h = collective_h(&z, &lagrange);
            assert!((hl - h).abs() < 1e-12 * (1.0 + h.abs()));
        }
    }

    #[test]
    fn lagrange_h_at_upright_lift() {
        let lagrange = TopPreset::Lagrange { i1: 2.0, i3: 1.0, m: 1.0, g: 1.0, l: 1.0 }
            .params()
            .unwrap();
        let s = SE3Dual::new(Vec3::new(0.0, 0.0, 1.0), Vec3::new(0.0, 0.0, 1.0));
        let z = lift(&s, LiftGauge::default()).unwrap();
        let expect = h_heavytop(&s, &lagrange);
        assert!((lagrange_h(&z, &lagrange).unwrap() - expect).abs() < 1e-13);
    }

    #[test]
    fn se3_invariants_at_benchmark_initial_condition() {
        let kov = TopPreset::kovalevskaya_unit();
        let inv = invariants_se3(&kov_state(), &kov);
        assert!((inv.f1 - 1.0).abs() < 1e-15);
        assert!((inv.f2 - (1.0 + 2.0 * 3.0f64.sqrt())).abs() < 1e-14);
        assert!((inv.k - 193.0).abs() < 1e-12);
        assert!((inv.h - 11.75).abs() < 1e-14);
    }

    #[test]
    fn kovalevskaya_invariant_vanishes_for_axial_spin() {
        let kov = TopPreset::kovalevskaya_unit();
        let s = SE3Dual::new(Vec3::new(0.0, 0.0, 5.0), Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(invariants_se3(&s, &kov).k, 0.0);
    }

    #[test]
    fn f2_matches_independent_dot_product() {
        let mut r = rng();
        let kov = TopPreset::kovalevskaya_unit();
        for _ in 0..100 {
            let s = SE3Dual::from_array(std::array::from_fn(|_| r.gen_range(-3.0..3.0)));
            let inv = invariants_se3(&s, &kov);
            let dot = s.pi.x * s.gamma.x + s.pi.y * s.gamma.y + s.pi.z * s.gamma.z;
            assert!((inv.f2 - dot).abs() < 1e-15 * (1.0 + dot.abs()));
        }
    }

    #[test]
    fn phase_invariants_zero_psi() {
        let z = PhasePoint::from_qp([1.0, 2.0, 3.0, 4.0], [0.0; 4]);
        let inv = invariants_phase(&z);
        assert_eq!(
            (inv.j1, inv.j2, inv.j3, inv.f1, inv.f2, inv.f3),
            (0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
        );
    }

    #[test]
    fn phase_invariants_at_benchmark_initial_condition() {
        let gauge = LiftGauge { mode: GaugeMode::FixReChi1(1.0), hopf_branch: HopfBranch::Auto };
        let z = lift(&kov_state(), gauge).unwrap();
        let inv = invariants_phase(&z);
        assert!((inv.f1 - 1.0).abs() < 1e-12);
        assert!((inv.f2 - (1.0 + 2.0 * 3.0f64.sqrt())).abs() < 1e-12);
        // F₃ = f₃ ∘ M = Π₃
        assert!((inv.f3 - 4.0).abs() < 1e-12);
    }

    #[test]
    fn pullback_identities() {
        let mut r = rng();
        for _ in 0..1000 {
            let z = rand_phase_point(&mut r);
            let phase = invariants_phase(&z);
            let s = collective_m(&z);
            let f1 = s.gamma.norm_squared();
            let f2 = s.pi.dot(s.gamma);
            let f3 = s.pi.z;
            let scale = 1.0 + f1.abs() + f2.abs() + f3.abs();
            assert!((phase.f1 - f1).abs() < 1e-13 * scale);
            assert!((phase.f2 - f2).abs() < 1e-13 * scale);
            assert!((phase.f3 - f3).abs() < 1e-13 * scale);
        }
    }

    #[test]
    fn noether_gradients_match_finite_differences() {
        let mut r = rng();
        let h = 1e-6;
        for _ in 0..20 {
            let z = rand_phase_point(&mut r);
            let y0 = z.to_array();
            let grads = [grad_f1(&z), grad_f2(&z), grad_f3(&z)];
            for col in 0..8 {
                let mut yp = y0;
                let mut ym = y0;
                yp[col] += h;
                ym[col] -= h;
                let ip = invariants_phase(&PhasePoint::from_array(yp));
                let im = invariants_phase(&PhasePoint::from_array(ym));
                let fds = [
                    (ip.f1 - im.f1) / (2.0 * h),
                    (ip.f2 - im.f2) / (2.0 * h),
                    (ip.f3 - im.f3) / (2.0 * h),
                ];
                for (g, fd) in grads.iter().zip(fds.iter()) {
                    assert!((g[col] - fd).abs() < 1e-6 * (1.0 + fd.abs()));
                }
            }
        }
    }
}
