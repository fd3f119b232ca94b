//! Exact time evolution of the covariance matrix and its stationary limit.

use nalgebra::{Matrix4, SMatrix, SVector};

use crate::error::{Error, Result};
use crate::model::{
    build_drift_matrix, build_thermal_diffusion, CovarianceMatrix, DiffusionMatrix, DriftMatrix,
    EnvironmentParams,
};

/// Largest `h * |Y|_inf` accepted by [`integrate_ode_oracle`].
pub const MAX_ODE_STEP: f64 = 0.1;

/// `M(t) = exp(Y t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorMatrix {
    pub m_t: Matrix4<f64>,
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub sigma: CovarianceMatrix,
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::NegativeTime(t))
    }
}

/// Closed-form `exp(Y t)`: each diagonal block is a damped rotation
/// `e^{-lambda t} [[cos wt, sin wt / (m w)], [-m w sin wt, cos wt]]`.
pub fn propagator_matrix(params: &EnvironmentParams, t: f64) -> Result<PropagatorMatrix> {
    params.validate()?;
    check_time(t)?;
    let (m, w) = (params.mass, params.omega);
    let decay = (-params.lambda * t).exp();
    let (s, c) = (w * t).sin_cos();
    let mut m_t = Matrix4::zeros();
    for k in [0, 2] {
        m_t[(k, k)] = decay * c;
        m_t[(k, k + 1)] = decay * s / (m * w);
        m_t[(k + 1, k)] = -decay * m * w * s;
        m_t[(k + 1, k + 1)] = decay * c;
    }
    Ok(PropagatorMatrix { m_t, t })
}

/// Solves `Y X + X Y^T = q` through the 16×16 Kronecker system.
pub(crate) fn solve_lyapunov(y: &Matrix4<f64>, q: &Matrix4<f64>) -> Result<Matrix4<f64>> {
    let id = Matrix4::<f64>::identity();
    // column-major vec: vec(Y X) = (I ⊗ Y) vec X, vec(X Y^T) = (Y ⊗ I) vec X
    let op: SMatrix<f64, 16, 16> = id.kronecker(y) + y.kronecker(&id);
    let rhs = SVector::<f64, 16>::from_column_slice(q.as_slice());
    let x = op.lu().solve(&rhs).ok_or(Error::SingularSystem)?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularSystem);
    }
    Ok(Matrix4::from_column_slice(x.as_slice()))
}

/// Max-norm residual of `Y sigma + sigma Y^T + 2 D`.
pub fn lyapunov_residual(y: &DriftMatrix, d: &DiffusionMatrix, sigma: &CovarianceMatrix) -> f64 {
    let (y, s) = (y.matrix(), sigma.matrix());
    (y * s + s * y.transpose() + d.matrix() * 2.0).amax()
}

/// Stationary covariance from `Y sigma + sigma Y^T = -2 D`, with `D` the
/// thermal diffusion built from `params`.
pub fn stationary_covariance(params: &EnvironmentParams) -> Result<CovarianceMatrix> {
    let y = build_drift_matrix(params)?;
    let d = build_thermal_diffusion(params)?;
    stationary_covariance_for(&y, &d)
}

pub fn stationary_covariance_for(y: &DriftMatrix, d: &DiffusionMatrix) -> Result<CovarianceMatrix> {
    let x = solve_lyapunov(y.matrix(), &(d.matrix() * -2.0))?;
    Ok(CovarianceMatrix::symmetrized(&x))
}

/// Exact propagation for a fixed environment. Holds `sigma(inf)` so that
/// trajectories do not re-solve the stationary equation per point.
#[derive(Debug, Clone)]
pub struct Propagator {
    params: EnvironmentParams,
    sigma_inf: CovarianceMatrix,
}

impl Propagator {
    pub fn new(params: &EnvironmentParams) -> Result<Self> {
        Ok(Propagator {
            params: *params,
            sigma_inf: stationary_covariance(params)?,
        })
    }

    pub fn params(&self) -> &EnvironmentParams {
        &self.params
    }

    pub fn stationary(&self) -> &CovarianceMatrix {
        &self.sigma_inf
    }

    /// `sigma(t) = M(t) [sigma(0) - sigma(inf)] M(t)^T + sigma(inf)`.
    pub fn at(&self, sigma0: &CovarianceMatrix, t: f64) -> Result<CovarianceMatrix> {
        if t == 0.0 {
            return Ok(*sigma0);
        }
        let m = propagator_matrix(&self.params, t)?.m_t;
        let inf = self.sigma_inf.matrix();
        let out = m * (sigma0.matrix() - inf) * m.transpose() + inf;
        Ok(CovarianceMatrix::symmetrized(&out))
    }

    pub fn trajectory(&self, sigma0: &CovarianceMatrix, times: &[f64]) -> Result<Vec<TrajectoryPoint>> {
        times
            .iter()
            .map(|&t| Ok(TrajectoryPoint { t, sigma: self.at(sigma0, t)? }))
            .collect()
    }
}

pub fn propagate(sigma0: &CovarianceMatrix, params: &EnvironmentParams, t: f64) -> Result<CovarianceMatrix> {
    check_time(t)?;
    Propagator::new(params)?.at(sigma0, t)
}

/// Fixed-step classical RK4 integration of `dsigma/dt = Y sigma + sigma Y^T + 2 D`.
///
/// Cross-validation oracle only. Requires `(t / steps) * |Y|_inf <= 0.1`.
pub fn integrate_ode_oracle(
    sigma0: &CovarianceMatrix,
    params: &EnvironmentParams,
    t: f64,
    steps: usize,
) -> Result<CovarianceMatrix> {
    check_time(t)?;
    let y = build_drift_matrix(params)?;
    let d = build_thermal_diffusion(params)?;
    if t == 0.0 {
        return Ok(*sigma0);
    }
    if steps == 0 {
        return Err(Error::StepSize(f64::INFINITY));
    }
    let h = t / steps as f64;
    let scaled = h * y.norm_inf();
    if scaled > MAX_ODE_STEP {
        return Err(Error::StepSize(scaled));
    }

    let ym = *y.matrix();
    let yt = ym.transpose();
    let two_d = d.matrix() * 2.0;
    let rhs = |s: &Matrix4<f64>| ym * s + s * yt + two_d;

    let mut s = *sigma0.matrix();
    for _ in 0..steps {
        let k1 = rhs(&s);
        let k2 = rhs(&(s + k1 * (h / 2.0)));
        let k3 = rhs(&(s + k2 * (h / 2.0)));
        let k4 = rhs(&(s + k3 * h));
        s += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    }
    Ok(CovarianceMatrix::symmetrized(&s))
}

/// Smallest step count that satisfies `h * |Y|_inf <= target`.
pub fn steps_for(params: &EnvironmentParams, t: f64, target: f64) -> usize {
    let norm = DriftMatrix::unchecked(params.mass, params.omega, params.lambda).norm_inf();
    ((t * norm / target).ceil() as usize).max(1)
}
