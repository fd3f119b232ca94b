//! Separability and entanglement diagnostics for two-mode Gaussian states.

use std::fmt;

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::model::CovarianceMatrix;

/// Negative discriminants (and symplectic squares) down to this magnitude
/// are treated as roundoff and clamped to zero.
pub const DISCRIMINANT_CLAMP: f64 = 1e-12;
/// Relative size (against the squared invariant) above which a negative
/// discriminant is reported as an error.
pub const DISCRIMINANT_RELATIVE_ERROR: f64 = 1e-8;
/// Simon function values down to `-SEPARABILITY_TOLERANCE` count as separable.
pub const SEPARABILITY_TOLERANCE: f64 = 1e-12;
/// `f(sigma) = nu~_-^2` at or below this value yields an infinite negativity.
pub const NEGATIVITY_FLOOR: f64 = 1e-12;

const J: Matrix2<f64> = Matrix2::new(0.0, 1.0, -1.0, 0.0);

/// Logarithmic negativity. `Infinite` marks `nu~_- = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogNegativity {
    Finite(f64),
    Infinite,
}

impl LogNegativity {
    pub fn value(self) -> f64 {
        match self {
            LogNegativity::Finite(v) => v,
            LogNegativity::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, LogNegativity::Infinite)
    }
}

impl fmt::Display for LogNegativity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogNegativity::Finite(v) => write!(f, "{v}"),
            LogNegativity::Infinite => f.write_str("inf"),
        }
    }
}

/// Simon separability function; the state is separable iff `S >= 0`.
pub fn simon_function(sigma: &CovarianceMatrix) -> f64 {
    let a = sigma.block_a();
    let b = sigma.block_b();
    let c = sigma.block_c();
    let (det_a, det_b, det_c) = (a.determinant(), b.determinant(), c.determinant());
    let trace = (a * J * c * J * b * J * c.transpose() * J).trace();
    det_a * det_b + (0.25 - det_c.abs()).powi(2) - trace - 0.25 * (det_a + det_b)
}

pub(crate) struct SymplecticSquares {
    pub minus: f64,
    pub plus: f64,
    pub discriminant: f64,
}

/// `2 nu^2 = I -/+ sqrt(I^2 - 4 det)` without any clamping or checks.
pub(crate) fn raw_symplectic_squares(invariant: f64, det: f64) -> SymplecticSquares {
    let discriminant = invariant * invariant - 4.0 * det;
    let root = discriminant.max(0.0).sqrt();
    SymplecticSquares {
        minus: (invariant - root) / 2.0,
        plus: (invariant + root) / 2.0,
        discriminant,
    }
}

fn spectrum(invariant: f64, det: f64) -> Result<(f64, f64)> {
    let sq = raw_symplectic_squares(invariant, det);
    if sq.discriminant < 0.0 {
        let allowed = DISCRIMINANT_CLAMP.max(DISCRIMINANT_RELATIVE_ERROR * invariant * invariant);
        if -sq.discriminant > allowed {
            return Err(Error::NegativeDiscriminant {
                discriminant: sq.discriminant,
                invariant,
            });
        }
    }
    if sq.minus < -DISCRIMINANT_CLAMP {
        return Err(Error::Domain(format!(
            "negative symplectic square {:e} (det sigma = {det:e})",
            sq.minus
        )));
    }
    Ok((sq.minus.max(0.0).sqrt(), sq.plus.max(0.0).sqrt()))
}

/// Symplectic eigenvalues `(nu_-, nu_+)` of sigma.
pub fn symplectic_eigenvalues(sigma: &CovarianceMatrix) -> Result<(f64, f64)> {
    spectrum(sigma.delta(), sigma.det())
}

/// Symplectic eigenvalues `(nu~_-, nu~_+)` of the partially transposed state.
pub fn ppt_symplectic_eigenvalues(sigma: &CovarianceMatrix) -> Result<(f64, f64)> {
    spectrum(sigma.delta_tilde(), sigma.det())
}

/// `f(sigma)`, equal to `nu~_-^2`.
pub fn negativity_kernel(sigma: &CovarianceMatrix) -> f64 {
    let a = sigma.block_a().determinant();
    let b = sigma.block_b().determinant();
    let c = sigma.block_c().determinant();
    let half = 0.5 * (a + b) - c;
    half - (half * half - sigma.det()).max(0.0).sqrt()
}

/// Logarithmic negativity `max{0, -1/2 log2(4 f(sigma))}`.
pub fn logarithmic_negativity(sigma: &CovarianceMatrix) -> LogNegativity {
    let f = negativity_kernel(sigma);
    if f <= NEGATIVITY_FLOOR {
        return LogNegativity::Infinite;
    }
    LogNegativity::Finite((-0.5 * (4.0 * f).log2()).max(0.0))
}

/// Same quantity from the partial-transpose spectrum, `max{0, -log2(2 nu~_-)}`.
pub fn log_negativity_from_spectrum(nu_tilde_minus: f64) -> LogNegativity {
    if nu_tilde_minus * nu_tilde_minus <= NEGATIVITY_FLOOR {
        return LogNegativity::Infinite;
    }
    LogNegativity::Finite((-(2.0 * nu_tilde_minus).log2()).max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Purities {
    pub global: f64,
    pub mode1: f64,
    pub mode2: f64,
}

/// Global and marginal purities `1/(4 sqrt det sigma)`, `1/(2 sqrt det A)`, `1/(2 sqrt det B)`.
pub fn purities(sigma: &CovarianceMatrix) -> Result<Purities> {
    let positive = |block: &'static str, value: f64| {
        if value > 0.0 {
            Ok(value)
        } else {
            Err(Error::DegenerateState { block, value })
        }
    };
    let det = positive("sigma", sigma.det())?;
    let det_a = positive("A", sigma.block_a().determinant())?;
    let det_b = positive("B", sigma.block_b().determinant())?;
    Ok(Purities {
        global: 0.25 / det.sqrt(),
        mode1: 0.5 / det_a.sqrt(),
        mode2: 0.5 / det_b.sqrt(),
    })
}

/// Lower and upper bounds on `Delta` at fixed global and marginal purities.
pub fn delta_bounds(mu: f64, mu1: f64, mu2: f64) -> Result<(f64, f64)> {
    const TOL: f64 = 1e-12;
    for (name, v) in [("mu", mu), ("mu1", mu1), ("mu2", mu2)] {
        if !(v > 0.0 && v <= 1.0 + TOL) {
            return Err(Error::Domain(format!("{name} = {v} outside (0, 1]")));
        }
    }
    if mu < mu1 * mu2 * (1.0 - TOL) {
        return Err(Error::Domain(format!(
            "mu = {mu} below mu1*mu2 = {}",
            mu1 * mu2
        )));
    }
    let prod2 = 4.0 * mu1 * mu1 * mu2 * mu2;
    let lower = 0.5 / mu + (mu1 - mu2).powi(2) / prod2;
    let upper = ((mu1 + mu2).powi(2) / prod2 - 0.5 / mu).min(0.25 * (1.0 + 1.0 / (mu * mu)));
    Ok((lower, upper))
}

/// All diagnostics for one state.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementReport {
    pub s_simon: f64,
    pub delta: f64,
    pub delta_tilde: f64,
    pub nu_minus: f64,
    pub nu_plus: f64,
    pub nu_tilde_minus: f64,
    pub nu_tilde_plus: f64,
    pub log_negativity: LogNegativity,
    /// `None` when one of the determinants is not positive.
    pub purities: Option<Purities>,
    pub is_separable: bool,
}

impl EntanglementReport {
    pub fn analyze(sigma: &CovarianceMatrix) -> Result<Self> {
        let s_simon = simon_function(sigma);
        let (nu_minus, nu_plus) = symplectic_eigenvalues(sigma)?;
        let (nu_tilde_minus, nu_tilde_plus) = ppt_symplectic_eigenvalues(sigma)?;
        Ok(EntanglementReport {
            s_simon,
            delta: sigma.delta(),
            delta_tilde: sigma.delta_tilde(),
            nu_minus,
            nu_plus,
            nu_tilde_minus,
            nu_tilde_plus,
            log_negativity: logarithmic_negativity(sigma),
            purities: purities(sigma).ok(),
            is_separable: s_simon >= -SEPARABILITY_TOLERANCE,
        })
    }
}
