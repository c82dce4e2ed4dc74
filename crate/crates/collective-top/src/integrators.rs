//! Fixed-step one-step methods for both formulations: explicit midpoint,
//! implicit midpoint (full Newton on the midpoint state), and an RK4
//! reference, plus the trajectory driver.
//!
//! Step sizes are constant: the symplecticity of the midpoint rule, and with
//! it the exact conservation of quadratic invariants, holds only for fixed
//! steps.

use thiserror::Error;

use crate::hamiltonians::{
    canonical_field_array, canonical_field_jacobian, heavytop_field, heavytop_jacobian, TopParams,
};
use crate::algebra::{PhasePoint, SE3Dual};
use crate::linalg::{inf_norm, solve};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ExplicitMidpoint,
    ImplicitMidpoint,
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum JacobianMode {
    #[default]
    Analytic,
    ForwardDifference,
}

/// Newton solve configuration for the implicit midpoint stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig {
    /// Tolerance on the step-equation residual in the ∞-norm.
    pub tol: f64,
    pub max_iter: usize,
    pub jacobian: JacobianMode,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig { tol: 1e-13, max_iter: 50, jacobian: JacobianMode::Analytic }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperConfig {
    pub method: Method,
    pub dt: f64,
    pub newton: NewtonConfig,
}

impl StepperConfig {
    pub fn new(method: Method, dt: f64) -> Self {
        StepperConfig { method, dt, newton: NewtonConfig::default() }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StepError {
    #[error("state became non-finite")]
    NonFiniteState,
    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:.3e})")]
    NewtonDiverged { iterations: usize, residual: f64 },
    #[error("singular Newton matrix")]
    SingularNewtonMatrix,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegrateError {
    #[error("time span and step must be positive (dt = {dt}, t_final = {t_final})")]
    InvalidTimeSpan { dt: f64, t_final: f64 },
    #[error("step {index} failed: {source}")]
    Step {
        index: usize,
        #[source]
        source: StepError,
    },
}

/// A first-order ODE with an analytic Jacobian of the right-hand side.
pub struct OdeSystem<const N: usize> {
    pub field: Box<dyn Fn(&[f64; N]) -> [f64; N] + Sync>,
    pub jacobian: Box<dyn Fn(&[f64; N]) -> [[f64; N]; N] + Sync>,
}

/// The heavy top equations on `se(3)*` with their analytic Jacobian.
pub fn direct_system(params: TopParams) -> OdeSystem<6> {
    let p2 = params;
    OdeSystem {
        field: Box::new(move |y| {
            heavytop_field(&SE3Dual::from_array(*y), &params).to_array()
        }),
        jacobian: Box::new(move |y| heavytop_jacobian(&SE3Dual::from_array(*y), &p2)),
    }
}

/// The canonical collective system on `T*C² ≅ R⁸` with its analytic Jacobian.
pub fn collective_system(params: TopParams) -> OdeSystem<8> {
    let p2 = params;
    OdeSystem {
        field: Box::new(move |y| canonical_field_array(y, &params)),
        jacobian: Box::new(move |y| canonical_field_jacobian(y, &p2)),
    }
}

/// Forward-difference Jacobian of `field`, used when no analytic one is wanted.
pub fn forward_difference_jacobian<const N: usize>(
    field: &(dyn Fn(&[f64; N]) -> [f64; N] + Sync),
    y: &[f64; N],
) -> [[f64; N]; N] {
    let f0 = field(y);
    let mut jac = [[0.0; N]; N];
    for col in 0..N {
        let h = 1e-8 * (1.0 + y[col].abs());
        let mut yp = *y;
        yp[col] += h;
        let fp = field(&yp);
        for row in 0..N {
            jac[row][col] = (fp[row] - f0[row]) / h;
        }
    }
    jac
}

fn axpy<const N: usize>(y: &[f64; N], scale: f64, dy: &[f64; N]) -> [f64; N] {
    std::array::from_fn(|i| y[i] + scale * dy[i])
}

fn check_finite<const N: usize>(y: &[f64; N]) -> Result<(), StepError> {
    if y.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(StepError::NonFiniteState)
    }
}

/// One explicit midpoint step `y + dt·f(y + (dt/2)·f(y))`.
pub fn explicit_midpoint_step<const N: usize>(
    field: &(dyn Fn(&[f64; N]) -> [f64; N] + Sync),
    y: &[f64; N],
    dt: f64,
) -> Result<[f64; N], StepError> {
    let half = axpy(y, dt / 2.0, &field(y));
    let next = axpy(y, dt, &field(&half));
    check_finite(&next)?;
    Ok(next)
}

/// One classical RK4 step.
pub fn rk4_step<const N: usize>(
    field: &(dyn Fn(&[f64; N]) -> [f64; N] + Sync),
    y: &[f64; N],
    dt: f64,
) -> Result<[f64; N], StepError> {
    let k1 = field(y);
    let k2 = field(&axpy(y, dt / 2.0, &k1));
    let k3 = field(&axpy(y, dt / 2.0, &k2));
    let k4 = field(&axpy(y, dt, &k3));
    let next = std::array::from_fn(|i| {
        y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
    });
    check_finite(&next)?;
    Ok(next)
}

/// One implicit midpoint step: solves `y' = y + dt·f((y + y')/2)` by Newton
/// iteration on the midpoint state, started from the explicit-midpoint
/// predictor. Returns the new state and the number of Newton iterations.
pub fn implicit_midpoint_step<const N: usize>(
    field: &(dyn Fn(&[f64; N]) -> [f64; N] + Sync),
    jacobian: &(dyn Fn(&[f64; N]) -> [[f64; N]; N] + Sync),
    y: &[f64; N],
    dt: f64,
    newton: &NewtonConfig,
) -> Result<([f64; N], usize), StepError> {
    if dt == 0.0 {
        return Ok((*y, 0));
    }
    // midpoint predictor: (y + explicit_midpoint(y)) / 2
    let mut u = axpy(y, dt / 2.0, &field(&axpy(y, dt / 2.0, &field(y))));
    let mut residual = f64::INFINITY;
    for iter in 0..=newton.max_iter {
        let fu = field(&u);
        let g: [f64; N] = std::array::from_fn(|i| u[i] - y[i] - dt / 2.0 * fu[i]);
        // step-equation residual is exactly twice the midpoint residual
        residual = 2.0 * inf_norm(&g);
        if !residual.is_finite() {
            return Err(StepError::NonFiniteState);
        }
        if residual <= newton.tol {
            let next = std::array::from_fn(|i| 2.0 * u[i] - y[i]);
            check_finite(&next)?;
            return Ok((next, iter));
        }
        if iter == newton.max_iter {
            break;
        }
        let jf = jacobian(&u);
        let mut jg = [[0.0; N]; N];
        for i in 0..N {
            for j in 0..N {
                jg[i][j] = -dt / 2.0 * jf[i][j];
            }
            jg[i][i] += 1.0;
        }
        let delta = solve(&jg, &g).ok_or(StepError::SingularNewtonMatrix)?;
        for i in 0..N {
            u[i] -= delta[i];
        }
    }
    Err(StepError::NewtonDiverged { iterations: newton.max_iter, residual })
}

/// A uniformly sampled trajectory in the flat coordinates of one formulation.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const N: usize> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; N]>,
    pub dt: f64,
}

impl<const N: usize> Trajectory<N> {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn final_state(&self) -> &[f64; N] {
        self.states.last().expect("trajectory contains at least the initial state")
    }
}

impl Trajectory<8> {
    pub fn phase_points(&self) -> impl Iterator<Item = PhasePoint> + '_ {
        self.states.iter().map(|y| PhasePoint::from_array(*y))
    }
}

impl Trajectory<6> {
    pub fn se3_states(&self) -> impl Iterator<Item = SE3Dual> + '_ {
        self.states.iter().map(|y| SE3Dual::from_array(*y))
    }
}

/// Integrate with `round(t_final/dt)` uniform steps, including `y0` at `t = 0`.
pub fn integrate<const N: usize>(
    system: &OdeSystem<N>,
    y0: [f64; N],
    t_final: f64,
    cfg: &StepperConfig,
) -> Result<Trajectory<N>, IntegrateError> {
    if cfg.dt <= 0.0 || t_final <= 0.0 {
        return Err(IntegrateError::InvalidTimeSpan { dt: cfg.dt, t_final });
    }
    let n = (t_final / cfg.dt).round() as usize;
    let mut times = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    times.push(0.0);
    states.push(y0);
    let fd_jac = |y: &[f64; N]| forward_difference_jacobian(system.field.as_ref(), y);
    let mut y = y0;
    for step in 0..n {
        let next = match cfg.method {
            Method::ExplicitMidpoint => explicit_midpoint_step(system.field.as_ref(), &y, cfg.dt),
            Method::Rk4 => rk4_step(system.field.as_ref(), &y, cfg.dt),
            Method::ImplicitMidpoint => match cfg.newton.jacobian {
                JacobianMode::Analytic => implicit_midpoint_step(
                    system.field.as_ref(),
                    system.jacobian.as_ref(),
                    &y,
                    cfg.dt,
                    &cfg.newton,
                )
                .map(|(s, _)| s),
                JacobianMode::ForwardDifference => implicit_midpoint_step(
                    system.field.as_ref(),
                    &fd_jac,
                    &y,
                    cfg.dt,
                    &cfg.newton,
                )
                .map(|(s, _)| s),
            },
        }
        .map_err(|source| IntegrateError::Step { index: step, source })?;
        y = next;
        times.push((step + 1) as f64 * cfg.dt);
        states.push(y);
    }
    Ok(Trajectory { times, states, dt: cfg.dt })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Vec3;
    use crate::hamiltonians::{invariants_phase, TopPreset};
    use crate::maps::{lift, GaugeMode, HopfBranch, LiftGauge};

    fn kovalevskaya_z0() -> [f64; 8] {
        let target = SE3Dual::new(
            Vec3::new(2.0, 3.0, 4.0),
            Vec3::new(0.5, 0.0, 3.0f64.sqrt() / 2.0),
        );
        let gauge = LiftGauge { mode: GaugeMode::FixReChi1(1.0), hopf_branch: HopfBranch::Auto };
        lift(&target, gauge).unwrap().to_array()
    }

    #[test]
    fn zero_dt_steps_are_identity() {
        let f = |y: &[f64; 2]| [y[1], -y[0]];
        let j = |_: &[f64; 2]| [[0.0, 1.0], [-1.0, 0.0]];
        let y = [0.3, 0.7];
        assert_eq!(explicit_midpoint_step(&f, &y, 0.0).unwrap(), y);
        assert_eq!(rk4_step(&f, &y, 0.0).unwrap(), y);
        let (next, iters) =
            implicit_midpoint_step(&f, &j, &y, 0.0, &NewtonConfig::default()).unwrap();
        assert_eq!(next, y);
        assert_eq!(iters, 0);
    }

    #[test]
    fn explicit_midpoint_on_linear_field() {
        // ẏ = λy: one step multiplies by 1 + λdt + (λdt)²/2
        let lambda = -1.0;
        let dt = 0.1;
        let f = move |y: &[f64; 1]| [lambda * y[0]];
        let y = [2.0];
        let next = explicit_midpoint_step(&f, &y, dt).unwrap();
        let factor = 1.0 + lambda * dt + (lambda * dt).powi(2) / 2.0;
        assert!((next[0] - factor * y[0]).abs() < 1e-15);
    }

    #[test]
    fn explicit_midpoint_local_error_is_third_order() {
        let params = TopPreset::kovalevskaya_unit();
        let system = collective_system(params);
        let y0 = kovalevskaya_z0();
        let reference = |dt: f64| {
            // tiny-step RK4 as the local truth
            let mut y = y0;
            let n = 1000;
            for _ in 0..n {
                y = rk4_step(system.field.as_ref(), &y, dt / n as f64).unwrap();
            }
            y
        };
        let err = |dt: f64| {
            let one = explicit_midpoint_step(system.field.as_ref(), &y0, dt).unwrap();
            let truth = reference(dt);
            let diff: [f64; 8] = std::array::from_fn(|i| one[i] - truth[i]);
            inf_norm(&diff)
        };
        let e1 = err(0.02);
        let e2 = err(0.01);
        let ratio = e1 / e2;
        assert!((6.5..=9.5).contains(&ratio), "one-step error ratio {ratio}");
    }

    #[test]
    fn implicit_midpoint_preserves_planar_rotation_invariant() {
        let f = |y: &[f64; 2]| [y[1], -y[0]];
        let j = |_: &[f64; 2]| [[0.0, 1.0], [-1.0, 0.0]];
        let mut y = [1.0, 0.5];
        let r0 = y[0] * y[0] + y[1] * y[1];
        let newton = NewtonConfig::default();
        for _ in 0..1000 {
            y = implicit_midpoint_step(&f, &j, &y, 0.1, &newton).unwrap().0;
        }
        assert!((y[0] * y[0] + y[1] * y[1] - r0).abs() < 1e-11);
    }

    #[test]
    fn newton_converges_quickly_on_kovalevskaya_step() {
        let params = TopPreset::kovalevskaya_unit();
        let system = collective_system(params);
        let (_, iters) = implicit_midpoint_step(
            system.field.as_ref(),
            system.jacobian.as_ref(),
            &kovalevskaya_z0(),
            1.0 / 50.0,
            &NewtonConfig::default(),
        )
        .unwrap();
        assert!(iters <= 10, "needed {iters} Newton iterations");
    }

    #[test]
    fn integrate_rejects_bad_time_span() {
        let params = TopPreset::kovalevskaya_unit();
        let system = collective_system(params);
        let cfg = StepperConfig::new(Method::Rk4, 0.1);
        assert!(matches!(
            integrate(&system, kovalevskaya_z0(), 0.0, &cfg),
            Err(IntegrateError::InvalidTimeSpan { .. })
        ));
    }

    #[test]
    fn integrate_zero_steps_returns_initial_state() {
        let params = TopPreset::kovalevskaya_unit();
        let system = collective_system(params);
        let cfg = StepperConfig::new(Method::Rk4, 0.1);
        let traj = integrate(&system, kovalevskaya_z0(), 0.04, &cfg).unwrap();
        assert_eq!(traj.len(), 1);
        assert_eq!(traj.states[0], kovalevskaya_z0());
    }

    #[test]
    fn implicit_midpoint_conserves_f1_over_long_run() {
        let params = TopPreset::kovalevskaya_unit();
        let system = collective_system(params);
        let cfg = StepperConfig::new(Method::ImplicitMidpoint, 1.0 / 50.0);
        let traj = integrate(&system, kovalevskaya_z0(), 100.0, &cfg).unwrap();
        let f1_0 = invariants_phase(&PhasePoint::from_array(traj.states[0])).f1;
        for y in &traj.states {
            let f1 = invariants_phase(&PhasePoint::from_array(*y)).f1;
            assert!((f1 - f1_0).abs() < 1e-10);
        }
    }

    #[test]
    fn collective_matches_direct_reference_at_second_order() {
        let params = TopPreset::kovalevskaya_unit();
        let collective = collective_system(params);
        let direct = direct_system(params);
        let z0 = kovalevskaya_z0();
        let s0 = crate::maps::collective_m(&PhasePoint::from_array(z0)).to_array();
        let dt = 1.0 / 50.0;
        let cfg = StepperConfig::new(Method::ImplicitMidpoint, dt);
        let traj = integrate(&collective, z0, 1.0, &cfg).unwrap();
        let mapped =
            crate::maps::collective_m(&PhasePoint::from_array(*traj.final_state())).to_array();
        let ref_cfg = StepperConfig::new(Method::Rk4, 1e-4);
        let ref_traj = integrate(&direct, s0, 1.0, &ref_cfg).unwrap();
        let truth = ref_traj.final_state();
        let diff: [f64; 6] = std::array::from_fn(|i| mapped[i] - truth[i]);
        // O(dt²) global error with a modest constant
        assert!(inf_norm(&diff) < 50.0 * dt * dt, "error {}", inf_norm(&diff));
    }

    #[test]
    fn system_jacobians_match_finite_differences() {
        let params = TopPreset::kovalevskaya_unit();
        let collective = collective_system(params);
        let z0 = kovalevskaya_z0();
        let analytic = (collective.jacobian)(&z0);
        let fd = forward_difference_jacobian(collective.field.as_ref(), &z0);
        let mut scale = 1.0f64;
        for row in &analytic {
            for v in row {
                scale = scale.max(v.abs());
            }
        }
        for i in 0..8 {
            for j in 0..8 {
                assert!((analytic[i][j] - fd[i][j]).abs() < 1e-5 * scale);
            }
        }
        let direct = direct_system(params);
        let s0 = crate::maps::collective_m(&PhasePoint::from_array(z0)).to_array();
        let analytic6 = (direct.jacobian)(&s0);
        let fd6 = forward_difference_jacobian(direct.field.as_ref(), &s0);
        for i in 0..6 {
            for j in 0..6 {
                assert!((analytic6[i][j] - fd6[i][j]).abs() < 1e-6 * scale);
            }
        }
    }

    #[test]
    fn sleeping_top_field_is_zero() {
        let lagrange = TopPreset::Lagrange { i1: 2.0, i3: 1.0, m: 1.0, g: 1.0, l: 1.0 }
            .params()
            .unwrap();
        let system = direct_system(lagrange);
        let y = [0.0, 0.0, 1.0, 0.0, 0.0, 1.0];
        assert_eq!((system.field)(&y), [0.0; 6]);
    }

    #[test]
    fn integration_is_deterministic() {
        let params = TopPreset::kovalevskaya_unit();
        let system = collective_system(params);
        let cfg = StepperConfig::new(Method::ImplicitMidpoint, 1.0 / 50.0);
        let a = integrate(&system, kovalevskaya_z0(), 5.0, &cfg).unwrap();
        let b = integrate(&system, kovalevskaya_z0(), 5.0, &cfg).unwrap();
        assert_eq!(a.states, b.states);
    }
}
