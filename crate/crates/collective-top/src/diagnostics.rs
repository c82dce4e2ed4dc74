//! Invariant time series, drift metrics, convergence-order regression, and
//! the numeric check of the Poisson-map bracket identity.
//!
//! Drift is quantified by the least-squares slope of invariant value against
//! time, which separates bounded oscillation from secular growth.

use thiserror::Error;

use crate::algebra::{PhasePoint, SE3Dual, Vec3};
use crate::hamiltonians::{invariants_phase, invariants_se3, TopParams};
use crate::integrators::Trajectory;
use crate::maps::{collective_m, jacobian_m};

/// Phase-side invariant columns, present only for collective trajectories.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PhaseSeries {
    pub f1: Vec<f64>,
    pub f2: Vec<f64>,
    pub f3: Vec<f64>,
    pub j1: Vec<f64>,
    pub j2: Vec<f64>,
    pub j3: Vec<f64>,
}

/// Time series of every conserved quantity along a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantSeries {
    pub times: Vec<f64>,
    pub h: Vec<f64>,
    pub f1: Vec<f64>,
    pub f2: Vec<f64>,
    pub f3: Vec<f64>,
    pub k: Vec<f64>,
    pub phase: Option<PhaseSeries>,
    pub params: TopParams,
}

/// Evaluate the heavy top invariants along a direct trajectory.
pub fn invariant_series_direct(traj: &Trajectory<6>, params: &TopParams) -> InvariantSeries {
    let n = traj.len();
    let mut series = InvariantSeries {
        times: traj.times.clone(),
        h: Vec::with_capacity(n),
        f1: Vec::with_capacity(n),
        f2: Vec::with_capacity(n),
        f3: Vec::with_capacity(n),
        k: Vec::with_capacity(n),
        phase: None,
        params: *params,
    };
    for s in traj.se3_states() {
        let inv = invariants_se3(&s, params);
        series.h.push(inv.h);
        series.f1.push(inv.f1);
        series.f2.push(inv.f2);
        series.f3.push(inv.f3);
        series.k.push(inv.k);
    }
    series
}

/// Evaluate both the heavy top invariants (through the Poisson map) and the
/// phase-side Noether quantities along a collective trajectory.
pub fn invariant_series_collective(traj: &Trajectory<8>, params: &TopParams) -> InvariantSeries {
    let n = traj.len();
    let mut series = InvariantSeries {
        times: traj.times.clone(),
        h: Vec::with_capacity(n),
        f1: Vec::with_capacity(n),
        f2: Vec::with_capacity(n),
        f3: Vec::with_capacity(n),
        k: Vec::with_capacity(n),
        phase: Some(PhaseSeries::default()),
        params: *params,
    };
    for z in traj.phase_points() {
        let inv = invariants_se3(&collective_m(&z), params);
        series.h.push(inv.h);
        series.f1.push(inv.f1);
        series.f2.push(inv.f2);
        series.f3.push(inv.f3);
        series.k.push(inv.k);
        let pinv = invariants_phase(&z);
        let phase = series.phase.as_mut().expect("initialized above");
        phase.f1.push(pinv.f1);
        phase.f2.push(pinv.f2);
        phase.f3.push(pinv.f3);
        phase.j1.push(pinv.j1);
        phase.j2.push(pinv.j2);
        phase.j3.push(pinv.j3);
    }
    series
}

/// Deviation statistics of one invariant along a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftStats {
    pub initial: f64,
    pub max_abs_dev: f64,
    /// Ordinary least-squares slope of value against time, per unit time.
    pub lsq_slope: f64,
    pub final_dev: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriftReport {
    pub entries: Vec<(String, DriftStats)>,
}

impl DriftReport {
    pub fn get(&self, name: &str) -> Option<&DriftStats> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("drift statistics need at least two samples")]
pub struct SeriesTooShort;

/// Least-squares line slope and deviation extrema of one sampled invariant.
pub fn drift_stats(times: &[f64], values: &[f64]) -> Result<DriftStats, SeriesTooShort> {
    if times.len() < 2 || times.len() != values.len() {
        return Err(SeriesTooShort);
    }
    let n = times.len() as f64;
    let tbar = times.iter().sum::<f64>() / n;
    let vbar = values.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (t, v) in times.iter().zip(values.iter()) {
        num += (t - tbar) * (v - vbar);
        den += (t - tbar) * (t - tbar);
    }
    let initial = values[0];
    let max_abs_dev = values
        .iter()
        .fold(0.0f64, |acc, v| acc.max((v - initial).abs()));
    Ok(DriftStats {
        initial,
        max_abs_dev,
        lsq_slope: num / den,
        final_dev: values[values.len() - 1] - initial,
    })
}

/// Drift statistics for every invariant column of a series.
pub fn drift_report(series: &InvariantSeries) -> Result<DriftReport, SeriesTooShort> {
    let mut entries = Vec::new();
    let columns: [(&str, &Vec<f64>); 5] = [
        ("h", &series.h),
        ("f1", &series.f1),
        ("f2", &series.f2),
        ("f3", &series.f3),
        ("K", &series.k),
    ];
    for (name, values) in columns {
        entries.push((name.to_string(), drift_stats(&series.times, values)?));
    }
    if let Some(phase) = &series.phase {
        let phase_columns: [(&str, &Vec<f64>); 6] = [
            ("F1", &phase.f1),
            ("F2", &phase.f2),
            ("F3", &phase.f3),
            ("J1", &phase.j1),
            ("J2", &phase.j2),
            ("J3", &phase.j3),
        ];
        for (name, values) in phase_columns {
            entries.push((name.to_string(), drift_stats(&series.times, values)?));
        }
    }
    Ok(DriftReport { entries })
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConvergenceError {
    #[error("convergence-order regression needs at least three (dt, err) pairs")]
    InsufficientData,
    #[error("convergence-order regression needs positive dt and err values")]
    NonPositiveValue,
}

/// Slope of `log err` against `log dt` by least squares.
pub fn convergence_order(errors: &[(f64, f64)]) -> Result<f64, ConvergenceError> {
    if errors.len() < 3 {
        return Err(ConvergenceError::InsufficientData);
    }
    if errors.iter().any(|&(dt, err)| dt <= 0.0 || err <= 0.0) {
        return Err(ConvergenceError::NonPositiveValue);
    }
    let logs: Vec<f64> = errors.iter().map(|&(dt, _)| dt.ln()).collect();
    let loge: Vec<f64> = errors.iter().map(|&(_, e)| e.ln()).collect();
    Ok(drift_stats(&logs, &loge).expect("length checked above").lsq_slope)
}

/// The heavy top bracket applied to functions given by their gradients
/// `(∂/∂Π, ∂/∂Γ)` at the state `s`.
pub fn heavytop_bracket(
    s: &SE3Dual,
    df_pi: Vec3,
    df_gamma: Vec3,
    dh_pi: Vec3,
    dh_gamma: Vec3,
) -> f64 {
    -s.pi.dot(df_pi.cross(dh_pi))
        - s.gamma.dot(df_pi.cross(dh_gamma) - dh_pi.cross(df_gamma))
}

/// The canonical bracket on `T*R⁴` of functions given by flat `(q,p)` gradients.
pub fn canonical_bracket(grad_f: &[f64; 8], grad_h: &[f64; 8]) -> f64 {
    (0..4)
        .map(|i| grad_f[i] * grad_h[4 + i] - grad_f[4 + i] * grad_h[i])
        .sum()
}

/// Residuals of the Poisson-map identity at one phase point.
///
/// Entry `(a, b)` is `|{x_a∘M, x_b∘M}(z) − {x_a, x_b}(M(z))|` over the six
/// coordinate functions `(Π₁,Π₂,Π₃,Γ₁,Γ₂,Γ₃)`.
pub fn bracket_check(z: &PhasePoint) -> [[f64; 6]; 6] {
    let jac = jacobian_m(z);
    let s = collective_m(z);
    let basis = [
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(0.0, 1.0, 0.0),
        Vec3::new(0.0, 0.0, 1.0),
    ];
    let coord_grad = |idx: usize| -> (Vec3, Vec3) {
        if idx < 3 {
            (basis[idx], Vec3::ZERO)
        } else {
            (Vec3::ZERO, basis[idx - 3])
        }
    };
    let mut residuals = [[0.0; 6]; 6];
    for a in 0..6 {
        for b in 0..6 {
            let canonical = canonical_bracket(&jac[a], &jac[b]);
            let (fa_pi, fa_gamma) = coord_grad(a);
            let (fb_pi, fb_gamma) = coord_grad(b);
            let lie_poisson = heavytop_bracket(&s, fa_pi, fa_gamma, fb_pi, fb_gamma);
            residuals[a][b] = (canonical - lie_poisson).abs();
        }
    }
    residuals
}
