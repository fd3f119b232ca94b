//! Domain types for two identical oscillators coupled to a common bath,
//! the drift and diffusion matrices entering the covariance equation, and
//! the positivity checks on the dissipator and on the state.
//!
//! Phase-space ordering is `(x, p_x, y, p_y)` everywhere. Units are ħ = k = 1.

use nalgebra::{Complex, DMatrix, Matrix2, Matrix4, SymmetricEigen};

use crate::entanglement;
use crate::error::{Error, Result};

/// Absolute tolerance on principal minors of the dissipator matrix.
pub const MINOR_TOLERANCE: f64 = 1e-12;
/// Tolerance on the Heisenberg bound `nu_- >= 1/2`.
pub const HEISENBERG_TOLERANCE: f64 = 1e-10;
/// Absolute tolerance used when accepting a matrix as symmetric.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

const LABELS: [&str; 4] = ["x", "p_x", "y", "p_y"];

/// Physical parameters of the oscillators and the thermal environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvironmentParams {
    pub mass: f64,
    pub omega: f64,
    /// Dissipation constant, 1/time.
    pub lambda: f64,
    /// `C_T = coth(omega / 2kT)`, at least 1.
    pub c_thermal: f64,
    /// Mixed diffusion coefficient `D_{x p_y} = D_{y p_x}`.
    pub d_mixed: f64,
    /// Position-position cross diffusion `D_{xy}`.
    pub d_xy: f64,
}

impl Default for EnvironmentParams {
    fn default() -> Self {
        EnvironmentParams {
            mass: 1.0,
            omega: 1.0,
            lambda: 0.1,
            c_thermal: 1.0,
            d_mixed: 0.0,
            d_xy: 0.0,
        }
    }
}

impl EnvironmentParams {
    /// Parameters with unit mass and frequency.
    pub fn new(lambda: f64, c_thermal: f64, d_mixed: f64, d_xy: f64) -> Result<Self> {
        let params = EnvironmentParams {
            lambda,
            c_thermal,
            d_mixed,
            d_xy,
            ..Default::default()
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_oscillator(self, mass: f64, omega: f64) -> Result<Self> {
        let params = EnvironmentParams {
            mass,
            omega,
            ..self
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_c_thermal(self, c_thermal: f64) -> Result<Self> {
        let params = EnvironmentParams { c_thermal, ..self };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::param(name, format!("must be finite and > 0, got {v}")))
            }
        };
        positive("mass", self.mass)?;
        positive("omega", self.omega)?;
        positive("lambda", self.lambda)?;
        if !(self.c_thermal.is_finite() && self.c_thermal >= 1.0) {
            return Err(Error::param(
                "c_thermal",
                format!("must be finite and >= 1, got {}", self.c_thermal),
            ));
        }
        if !self.d_mixed.is_finite() {
            return Err(Error::param("d_mixed", "must be finite"));
        }
        if !self.d_xy.is_finite() {
            return Err(Error::param("d_xy", "must be finite"));
        }
        Ok(())
    }

    /// `Lambda = sqrt(omega^2 + lambda^2)`.
    pub fn big_lambda(&self) -> f64 {
        self.omega.hypot(self.lambda)
    }
}

/// The 4×4 drift matrix `Y` of the covariance equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftMatrix(Matrix4<f64>);

impl DriftMatrix {
    /// Builds `Y` without checking the parameters. `lambda = 0` gives the
    /// Hamiltonian (rotation-only) generator.
    pub fn unchecked(mass: f64, omega: f64, lambda: f64) -> Self {
        let mut y = Matrix4::zeros();
        for k in [0, 2] {
            y[(k, k)] = -lambda;
            y[(k, k + 1)] = 1.0 / mass;
            y[(k + 1, k)] = -mass * omega * omega;
            y[(k + 1, k + 1)] = -lambda;
        }
        DriftMatrix(y)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    /// Induced infinity norm (max absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        self.0
            .row_iter()
            .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

pub fn build_drift_matrix(params: &EnvironmentParams) -> Result<DriftMatrix> {
    params.validate()?;
    Ok(DriftMatrix::unchecked(
        params.mass,
        params.omega,
        params.lambda,
    ))
}

/// Symmetric diffusion matrix `D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionMatrix(Matrix4<f64>);

impl DiffusionMatrix {
    pub fn from_matrix(m: Matrix4<f64>) -> Result<Self> {
        check_symmetric(&m)?;
        Ok(DiffusionMatrix(symmetrize(&m)))
    }

    pub fn zeros() -> Self {
        DiffusionMatrix(Matrix4::zeros())
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn xx(&self) -> f64 {
        self.0[(0, 0)]
    }
    pub fn xp_x(&self) -> f64 {
        self.0[(0, 1)]
    }
    pub fn xy(&self) -> f64 {
        self.0[(0, 2)]
    }
    pub fn xp_y(&self) -> f64 {
        self.0[(0, 3)]
    }
    pub fn p_xp_x(&self) -> f64 {
        self.0[(1, 1)]
    }
    pub fn yp_x(&self) -> f64 {
        self.0[(1, 2)]
    }
    pub fn p_xp_y(&self) -> f64 {
        self.0[(1, 3)]
    }
    pub fn yy(&self) -> f64 {
        self.0[(2, 2)]
    }
    pub fn yp_y(&self) -> f64 {
        self.0[(2, 3)]
    }
    pub fn p_yp_y(&self) -> f64 {
        self.0[(3, 3)]
    }

    /// Cross block (rows x, p_x; columns y, p_y).
    pub fn block_c(&self) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(0, 2).into_owned()
    }

    /// Hermitian coefficient matrix whose positivity is equivalent to
    /// complete positivity of the dissipator.
    pub fn coefficient_matrix(&self, lambda: f64) -> DMatrix<Complex<f64>> {
        let r = |v: f64| Complex::new(v, 0.0);
        let half = Complex::new(0.0, lambda / 2.0);
        DMatrix::from_row_slice(
            4,
            4,
            &[
                r(self.xx()),
                r(-self.xp_x()) - half,
                r(self.xy()),
                r(-self.xp_y()),
                r(-self.xp_x()) + half,
                r(self.p_xp_x()),
                r(-self.yp_x()),
                r(self.p_xp_y()),
                r(self.xy()),
                r(-self.yp_x()),
                r(self.yy()),
                r(-self.yp_y()) - half,
                r(-self.xp_y()),
                r(self.p_xp_y()),
                r(-self.yp_y()) + half,
                r(self.p_yp_y()),
            ],
        )
    }
}

/// Diffusion coefficients for which the single-mode asymptotic state is a
/// Gibbs state at the temperature encoded by `c_thermal`.
pub fn build_thermal_diffusion(params: &EnvironmentParams) -> Result<DiffusionMatrix> {
    params.validate()?;
    let EnvironmentParams {
        mass: m,
        omega: w,
        lambda,
        c_thermal,
        d_mixed,
        d_xy,
    } = *params;
    let d_xx = lambda * c_thermal / (2.0 * m * w);
    let d_pp = m * w * lambda * c_thermal / 2.0;
    let d_pxpy = m * m * w * w * d_xy;
    #[rustfmt::skip]
    let d = Matrix4::new(
        d_xx,    0.0,     d_xy,    d_mixed,
        0.0,     d_pp,    d_mixed, d_pxpy,
        d_xy,    d_mixed, d_xx,    0.0,
        d_mixed, d_pxpy,  0.0,     d_pp,
    );
    Ok(DiffusionMatrix(d))
}

/// Named entries of a covariance matrix.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CovarianceEntries {
    pub xx: f64,
    pub xp_x: f64,
    pub xy: f64,
    pub xp_y: f64,
    pub p_xp_x: f64,
    pub yp_x: f64,
    pub p_xp_y: f64,
    pub yy: f64,
    pub yp_y: f64,
    pub p_yp_y: f64,
}

impl CovarianceEntries {
    /// Entry names paired with their (row, column) position.
    pub const POSITIONS: [(&'static str, (usize, usize)); 10] = [
        ("xx", (0, 0)),
        ("xp_x", (0, 1)),
        ("xy", (0, 2)),
        ("xp_y", (0, 3)),
        ("p_xp_x", (1, 1)),
        ("yp_x", (1, 2)),
        ("p_xp_y", (1, 3)),
        ("yy", (2, 2)),
        ("yp_y", (2, 3)),
        ("p_yp_y", (3, 3)),
    ];

    pub fn get_mut(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "xx" => &mut self.xx,
            "xp_x" => &mut self.xp_x,
            "xy" => &mut self.xy,
            "xp_y" => &mut self.xp_y,
            "p_xp_x" => &mut self.p_xp_x,
            "yp_x" => &mut self.yp_x,
            "p_xp_y" => &mut self.p_xp_y,
            "yy" => &mut self.yy,
            "yp_y" => &mut self.yp_y,
            "p_yp_y" => &mut self.p_yp_y,
            _ => return None,
        })
    }
}

/// Covariance matrix of a zero-mean two-mode Gaussian state.
///
/// ```text
/// sigma = | A   C |
///         | C^T B |
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix(Matrix4<f64>);

impl CovarianceMatrix {
    pub fn new(m: Matrix4<f64>) -> Result<Self> {
        check_symmetric(&m)?;
        Ok(CovarianceMatrix(symmetrize(&m)))
    }

    /// Wraps `(m + m^T) / 2` without a symmetry check.
    pub(crate) fn symmetrized(m: &Matrix4<f64>) -> Self {
        CovarianceMatrix(symmetrize(m))
    }

    pub fn from_entries(e: &CovarianceEntries) -> Self {
        #[rustfmt::skip]
        let m = Matrix4::new(
            e.xx,   e.xp_x,   e.xy,   e.xp_y,
            e.xp_x, e.p_xp_x, e.yp_x, e.p_xp_y,
            e.xy,   e.yp_x,   e.yy,   e.yp_y,
            e.xp_y, e.p_xp_y, e.yp_y, e.p_yp_y,
        );
        CovarianceMatrix(m)
    }

    pub fn diagonal(xx: f64, p_xp_x: f64, yy: f64, p_yp_y: f64) -> Self {
        CovarianceMatrix(Matrix4::from_diagonal(&nalgebra::Vector4::new(
            xx, p_xp_x, yy, p_yp_y,
        )))
    }

    /// Two-mode vacuum, `sigma = I / 2`.
    pub fn vacuum() -> Self {
        Self::diagonal(0.5, 0.5, 0.5, 0.5)
    }

    /// Product of two identical thermal states with `coth(omega/2kT) = c_thermal`.
    pub fn thermal(c_thermal: f64, mass: f64, omega: f64) -> Self {
        let q = c_thermal / (2.0 * mass * omega);
        let p = mass * omega * c_thermal / 2.0;
        Self::diagonal(q, p, q, p)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.0[(row, col)]
    }

    pub fn block_a(&self) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(0, 0).into_owned()
    }

    pub fn block_b(&self) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(2, 2).into_owned()
    }

    pub fn block_c(&self) -> Matrix2<f64> {
        self.0.fixed_view::<2, 2>(0, 2).into_owned()
    }

    pub fn det(&self) -> f64 {
        self.0.determinant()
    }

    /// `Delta = det A + det B + 2 det C`.
    pub fn delta(&self) -> f64 {
        self.block_a().determinant() + self.block_b().determinant() + 2.0 * self.block_c().determinant()
    }

    /// `Delta~ = det A + det B - 2 det C`, the same invariant for the partial transpose.
    pub fn delta_tilde(&self) -> f64 {
        self.block_a().determinant() + self.block_b().determinant() - 2.0 * self.block_c().determinant()
    }

    pub fn max_abs_diff(&self, other: &CovarianceMatrix) -> f64 {
        (self.0 - other.0).amax()
    }
}

fn symmetrize(m: &Matrix4<f64>) -> Matrix4<f64> {
    (m + m.transpose()) * 0.5
}

fn check_symmetric(m: &Matrix4<f64>) -> Result<()> {
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("matrix has non-finite entries".into()));
    }
    let asym = (m - m.transpose()).amax();
    let scale = m.amax().max(1.0);
    if asym > SYMMETRY_TOLERANCE * scale {
        return Err(Error::NotSymmetric(asym));
    }
    Ok(())
}

/// One evaluated inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintCheck {
    pub name: String,
    /// Signed distance to the boundary; negative means violated.
    pub margin: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    /// All principal minors of the dissipator coefficient matrix are
    /// non-negative. `None` for state reports.
    pub is_cp_valid: Option<bool>,
    /// The six pairwise (2×2 minor) inequalities hold. `None` for state reports.
    pub satisfies_cauchy_schwarz: Option<bool>,
    /// `nu_- >= 1/2` and sigma positive definite. `None` for dissipator reports.
    pub is_state_physical: Option<bool>,
    /// Smallest symplectic eigenvalue, for state reports.
    pub nu_minus: Option<f64>,
    pub checks: Vec<ConstraintCheck>,
    pub violated_constraints: Vec<ConstraintCheck>,
}

impl ValidationReport {
    fn from_checks(checks: Vec<ConstraintCheck>) -> Self {
        let violated_constraints = checks.iter().filter(|c| !c.satisfied).cloned().collect();
        ValidationReport {
            checks,
            violated_constraints,
            ..Default::default()
        }
    }

    pub fn check(&self, name: &str) -> Option<&ConstraintCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// True when every check that was run passed.
    pub fn is_valid(&self) -> bool {
        self.violated_constraints.is_empty()
    }
}

/// Signed square root.
fn ssqrt(v: f64) -> f64 {
    v.signum() * v.abs().sqrt()
}

/// Pairwise inequalities `P Q - R^2 >= rhs`, keyed by the 2×2 principal
/// minor of the coefficient matrix they come from.
fn pairwise_constraints(d: &DiffusionMatrix, lambda: f64) -> [(String, [usize; 2], f64, f64, f64, f64); 6] {
    let lam = lambda * lambda / 4.0;
    [
        ("D_xx*D_pxpx - D_xpx^2 >= lambda^2/4".into(), [0, 1], d.xx(), d.p_xp_x(), d.xp_x(), lam),
        ("D_yy*D_pypy - D_ypy^2 >= lambda^2/4".into(), [2, 3], d.yy(), d.p_yp_y(), d.yp_y(), lam),
        ("D_xx*D_yy - D_xy^2 >= 0".into(), [0, 2], d.xx(), d.yy(), d.xy(), 0.0),
        ("D_pxpx*D_pypy - D_pxpy^2 >= 0".into(), [1, 3], d.p_xp_x(), d.p_yp_y(), d.p_xp_y(), 0.0),
        ("D_xx*D_pypy - D_xpy^2 >= 0".into(), [0, 3], d.xx(), d.p_yp_y(), d.xp_y(), 0.0),
        ("D_yy*D_pxpx - D_ypx^2 >= 0".into(), [1, 2], d.yy(), d.p_xp_x(), d.yp_x(), 0.0),
    ]
}

fn principal_minor(h: &DMatrix<Complex<f64>>, idx: &[usize]) -> f64 {
    let n = idx.len();
    let sub = DMatrix::from_fn(n, n, |i, j| h[(idx[i], idx[j])]);
    sub.determinant().re
}

fn minor_name(idx: &[usize]) -> String {
    let labels: Vec<&str> = idx.iter().map(|&i| LABELS[i]).collect();
    format!("principal_minor[{}]", labels.join(","))
}

/// Checks complete positivity of the dissipator defined by `diffusion`
/// and `lambda`: every principal minor of the Hermitian coefficient matrix
/// must be non-negative (within [`MINOR_TOLERANCE`]).
///
/// The 2×2 minors are reported as the six pairwise inequalities. Their
/// margins are in square-root form, `sqrt(P Q) - sqrt(R^2 + rhs)`, which for
/// the thermal coefficients turns `D_xx D_pypy >= d^2` into `lambda C_T / 2 - d`.
/// Higher-order minors report the raw determinant.
pub fn validate_dissipator(diffusion: &DiffusionMatrix, lambda: f64) -> ValidationReport {
    let h = diffusion.coefficient_matrix(lambda);
    let mut checks = Vec::with_capacity(15);

    for i in 0..4 {
        let v = h[(i, i)].re;
        checks.push(ConstraintCheck {
            name: format!("D_{0}{0} >= 0", LABELS[i].replace('_', "")),
            margin: v,
            satisfied: v >= -MINOR_TOLERANCE,
        });
    }

    let mut pairwise_ok = true;
    for (name, idx, p, q, r, rhs) in pairwise_constraints(diffusion, lambda) {
        let raw = principal_minor(&h, &idx);
        let satisfied = raw >= -MINOR_TOLERANCE;
        pairwise_ok &= satisfied;
        checks.push(ConstraintCheck {
            name,
            margin: ssqrt(p * q) - (r * r + rhs).sqrt(),
            satisfied,
        });
    }

    for skip in (0..4).rev() {
        let idx: Vec<usize> = (0..4).filter(|&i| i != skip).collect();
        let v = principal_minor(&h, &idx);
        checks.push(ConstraintCheck {
            name: minor_name(&idx),
            margin: v,
            satisfied: v >= -MINOR_TOLERANCE,
        });
    }
    let full = principal_minor(&h, &[0, 1, 2, 3]);
    checks.push(ConstraintCheck {
        name: minor_name(&[0, 1, 2, 3]),
        margin: full,
        satisfied: full >= -MINOR_TOLERANCE,
    });

    let mut report = ValidationReport::from_checks(checks);
    report.is_cp_valid = Some(report.violated_constraints.is_empty());
    report.satisfies_cauchy_schwarz = Some(pairwise_ok && report.checks[..4].iter().all(|c| c.satisfied));
    report
}

/// Checks the uncertainty principle `nu_- >= 1/2` and positive definiteness.
pub fn validate_state(sigma: &CovarianceMatrix) -> ValidationReport {
    let spectrum = entanglement::raw_symplectic_squares(sigma.delta(), sigma.det());
    let nu_minus = spectrum.minus.max(0.0).sqrt();

    let mut checks = vec![ConstraintCheck {
        name: "nu_minus >= 1/2".into(),
        margin: nu_minus - 0.5,
        satisfied: spectrum.discriminant >= -entanglement::DISCRIMINANT_CLAMP
            && nu_minus >= 0.5 - HEISENBERG_TOLERANCE,
    }];

    let min_eig = SymmetricEigen::new(*sigma.matrix()).eigenvalues.min();
    checks.push(ConstraintCheck {
        name: "sigma positive definite".into(),
        margin: min_eig,
        satisfied: min_eig > SYMMETRY_TOLERANCE * sigma.matrix().amax().max(1.0),
    });

    let mut report = ValidationReport::from_checks(checks);
    report.is_state_physical = Some(report.violated_constraints.is_empty());
    report.nu_minus = Some(nu_minus);
    report
}
