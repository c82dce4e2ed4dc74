//! Heavy top dynamics as collective dynamics of a canonical Hamiltonian system.
//!
//! The heavy top equations evolve a state `(Π, Γ)` on the dual `se(3)*` of the
//! Euclidean Lie algebra. This crate realizes that dynamics as the image, under
//! a Poisson map `M: T*C² → se(3)*`, of an ordinary canonical Hamiltonian
//! system on an 8-dimensional phase space. Applying a symplectic integrator
//! (the implicit midpoint rule) upstairs and mapping down through `M` yields a
//! Lie-Poisson integrator that conserves the Casimirs `‖Γ‖²` and `Π·Γ` to
//! machine precision and nearly conserves the Hamiltonian and, for the
//! Kovalevskaya top, the Kovalevskaya invariant.
//!
//! Module overview:
//! - [`algebra`]: R³ / so(3) / su(2) identifications, complex pairs, phase points.
//! - [`maps`]: the momentum map `L`, the Hopf map, the composite `M`, its
//!   Jacobian, and the inverse lift with gauge handling.
//! - [`hamiltonians`]: heavy top and collective Hamiltonians, gradients,
//!   vector fields, and all conserved quantities.
//! - [`integrators`]: explicit/implicit midpoint and RK4 steppers with a
//!   Newton solver for the implicit stage.
//! - [`diagnostics`]: invariant time series, drift metrics, convergence-order
//!   estimation, and the numeric Poisson-bracket identity check.
//! - [`cli`]: experiment presets and CSV emission backing the `heavytop` binary.

pub mod algebra;
pub mod cli;
pub mod diagnostics;
pub mod hamiltonians;
pub mod integrators;
pub mod linalg;
pub mod maps;

pub use algebra::{ComplexPair, PhasePoint, SE3Dual, SU2xC2Dual, Vec3};
pub use hamiltonians::{TopParams, TopPreset};
pub use integrators::{Method, StepperConfig, Trajectory};
pub use maps::{GaugeMode, HopfBranch, LiftGauge};
