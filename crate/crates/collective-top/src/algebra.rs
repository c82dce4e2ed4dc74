//! Identifications between R³, so(3), and su(2), complex 2-vectors, and the
//! real/complex views of the collective phase space.
//!
//! Values of so(3)* and su(2)* are stored as [`Vec3`] throughout; the matrix
//! forms produced by [`hat`] and [`su2_from_vec3`] exist for tests and for
//! spelling out the identifications.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// A vector in R³.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, rhs: Vec3) -> Vec3 {
        Vec3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// A vector in C².
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexPair {
    pub c1: Complex64,
    pub c2: Complex64,
}

impl ComplexPair {
    pub const ZERO: ComplexPair = ComplexPair {
        c1: Complex64 { re: 0.0, im: 0.0 },
        c2: Complex64 { re: 0.0, im: 0.0 },
    };

    pub fn new(c1: Complex64, c2: Complex64) -> Self {
        ComplexPair { c1, c2 }
    }

    /// Real view `(Re c₁, Im c₁, Re c₂, Im c₂)`.
    pub fn to_real(self) -> [f64; 4] {
        [self.c1.re, self.c1.im, self.c2.re, self.c2.im]
    }

    pub fn from_real(r: [f64; 4]) -> Self {
        ComplexPair {
            c1: Complex64::new(r[0], r[1]),
            c2: Complex64::new(r[2], r[3]),
        }
    }

    pub fn norm_squared(self) -> f64 {
        self.c1.norm_sqr() + self.c2.norm_sqr()
    }

    /// Hermitian pairing `a*b = ā₁b₁ + ā₂b₂` (complex valued).
    pub fn hermitian(self, other: ComplexPair) -> Complex64 {
        self.c1.conj() * other.c1 + self.c2.conj() * other.c2
    }

    pub fn scale(self, s: Complex64) -> ComplexPair {
        ComplexPair::new(self.c1 * s, self.c2 * s)
    }
}

impl Neg for ComplexPair {
    type Output = ComplexPair;
    fn neg(self) -> ComplexPair {
        ComplexPair::new(-self.c1, -self.c2)
    }
}

/// Real inner product `Re(a*b)` on C²; equals the R⁴ dot product of the real views.
pub fn c2_inner(a: ComplexPair, b: ComplexPair) -> f64 {
    a.hermitian(b).re
}

/// A point `(χ, ψ)` of the collective phase space `T*C² ≅ T*R⁴`.
///
/// The real view is `(q, p)` with `q = (Re χ₁, Im χ₁, Re χ₂, Im χ₂)` and
/// likewise for `p` from `ψ`; the two views round-trip bit-exactly.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhasePoint {
    pub chi: ComplexPair,
    pub psi: ComplexPair,
}

impl PhasePoint {
    pub fn new(chi: ComplexPair, psi: ComplexPair) -> Self {
        PhasePoint { chi, psi }
    }

    pub fn q(&self) -> [f64; 4] {
        self.chi.to_real()
    }

    pub fn p(&self) -> [f64; 4] {
        self.psi.to_real()
    }

    pub fn from_qp(q: [f64; 4], p: [f64; 4]) -> Self {
        PhasePoint {
            chi: ComplexPair::from_real(q),
            psi: ComplexPair::from_real(p),
        }
    }

    /// Flat real view `(q₁..q₄, p₁..p₄)` used by the integrators.
    pub fn to_array(&self) -> [f64; 8] {
        let q = self.q();
        let p = self.p();
        [q[0], q[1], q[2], q[3], p[0], p[1], p[2], p[3]]
    }

    pub fn from_array(y: [f64; 8]) -> Self {
        PhasePoint::from_qp([y[0], y[1], y[2], y[3]], [y[4], y[5], y[6], y[7]])
    }
}

/// A point `(Π, Γ)` of `se(3)*`: the heavy top state.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SE3Dual {
    pub pi: Vec3,
    pub gamma: Vec3,
}

impl SE3Dual {
    pub fn new(pi: Vec3, gamma: Vec3) -> Self {
        SE3Dual { pi, gamma }
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.pi.x, self.pi.y, self.pi.z, self.gamma.x, self.gamma.y, self.gamma.z]
    }

    pub fn from_array(y: [f64; 6]) -> Self {
        SE3Dual {
            pi: Vec3::new(y[0], y[1], y[2]),
            gamma: Vec3::new(y[3], y[4], y[5]),
        }
    }
}

/// A point `(μ, α)` of `(su(2) ⋉ C²)*`, with μ kept in its `Vec3` identification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SU2xC2Dual {
    pub mu: Vec3,
    pub alpha: ComplexPair,
}

/// The hat map R³ → so(3): `hat(v)·w = v × w`.
pub fn hat(v: Vec3) -> [[f64; 3]; 3] {
    [
        [0.0, -v.z, v.y],
        [v.z, 0.0, -v.x],
        [-v.y, v.x, 0.0],
    ]
}

/// The identification R³ → su(2), `ξ ↦ -(i/2) [[ξ₃, ξ₁-iξ₂], [ξ₁+iξ₂, -ξ₃]]`.
pub fn su2_from_vec3(v: Vec3) -> [[Complex64; 2]; 2] {
    let half_i = Complex64::new(0.0, -0.5);
    [
        [half_i * v.z, half_i * Complex64::new(v.x, -v.y)],
        [half_i * Complex64::new(v.x, v.y), -half_i * v.z],
    ]
}

/// Inverse of [`su2_from_vec3`]; exact on traceless anti-Hermitian matrices.
pub fn vec3_from_su2(m: [[Complex64; 2]; 2]) -> Vec3 {
    // m[1][0] = (ξ₂ - i ξ₁)/2, m[0][0] = -(i/2) ξ₃
    Vec3::new(-2.0 * m[1][0].im, 2.0 * m[1][0].re, -2.0 * m[0][0].im)
}

/// The su(2) inner product `⟨ξ,η⟩ = 2 tr(ξ*η)`.
pub fn ip_su2(a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]) -> f64 {
    let mut tr = Complex64::new(0.0, 0.0);
    for i in 0..2 {
        for k in 0..2 {
            tr += a[k][i].conj() * b[k][i];
        }
    }
    2.0 * tr.re
}

/// The so(3) inner product `⟨A,B⟩ = ½ tr(AᵀB)`.
pub fn ip_so3(a: [[f64; 3]; 3], b: [[f64; 3]; 3]) -> f64 {
    let mut tr = 0.0;
    for i in 0..3 {
        for k in 0..3 {
            tr += a[k][i] * b[k][i];
        }
    }
    0.5 * tr
}
