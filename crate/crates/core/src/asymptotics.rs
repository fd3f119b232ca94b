//! Closed-form asymptotic state of the thermal model and its classification.

use std::fmt;

use crate::entanglement::{self, SEPARABILITY_TOLERANCE};
use crate::error::{Error, Result};
use crate::model::{
    build_thermal_diffusion, validate_dissipator, CovarianceEntries, CovarianceMatrix, EnvironmentParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticKind {
    Separable,
    /// Gaussian maximally entangled mixed state.
    Gmems,
    NonMaximallyEntangled,
}

impl fmt::Display for AsymptoticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AsymptoticKind::Separable => "Separable",
            AsymptoticKind::Gmems => "GMEMS",
            AsymptoticKind::NonMaximallyEntangled => "NonMaximallyEntangled",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticClassification {
    pub kind: AsymptoticKind,
    pub sigma_inf: CovarianceMatrix,
    pub log_negativity_inf: f64,
    /// Only defined for `d_xy = 0`.
    pub squeezing_r: Option<f64>,
    /// `(C_T - 1, C_T + 1)`.
    pub thresholds: (f64, f64),
    /// `2 |d| / Lambda`, compared against the thresholds.
    pub coupling: f64,
}

/// Asymptotic covariance from the closed-form solution of the stationary
/// equation for thermal diffusion coefficients.
pub fn asymptotic_covariance_closed_form(params: &EnvironmentParams) -> Result<CovarianceMatrix> {
    params.validate()?;
    let EnvironmentParams {
        mass: m,
        omega: w,
        lambda: l,
        c_thermal,
        d_mixed: d,
        d_xy,
    } = *params;
    let l2 = l * l + w * w;
    let xy = (m * m * l2 * d_xy + m * l * d) / (m * m * l * l2);
    let xp_y = l * d / l2;
    let p_xp_y = (m * m * w * w * l2 * d_xy - m * w * w * l * d) / (l * l2);
    let q = c_thermal / (2.0 * m * w);
    let p = m * w * c_thermal / 2.0;
    Ok(CovarianceMatrix::from_entries(&CovarianceEntries {
        xx: q,
        p_xp_x: p,
        yy: q,
        p_yp_y: p,
        xp_x: 0.0,
        yp_y: 0.0,
        xy,
        xp_y,
        yp_x: xp_y,
        p_xp_y,
    }))
}

fn coupling(params: &EnvironmentParams) -> f64 {
    2.0 * params.d_mixed.abs() / params.big_lambda()
}

/// `E_N(inf) = max{0, -log2(C_T - 2|d|/Lambda)}`, valid for `d_xy = 0`.
pub fn asymptotic_log_negativity(params: &EnvironmentParams) -> Result<f64> {
    params.validate()?;
    if params.d_xy != 0.0 {
        return Err(Error::Domain(
            "asymptotic negativity formula requires d_xy = 0".into(),
        ));
    }
    let arg = params.c_thermal - coupling(params);
    if arg <= 0.0 {
        return Err(Error::Domain(format!(
            "C_T - 2|d|/Lambda = {arg} is not positive"
        )));
    }
    Ok((-arg.log2()).max(0.0))
}

/// Squeezing parameter `r` of the asymptotic thermal squeezed state,
/// `tanh 2r = |d| / (Lambda C_T)`.
pub fn squeezing_parameter(params: &EnvironmentParams) -> Result<f64> {
    params.validate()?;
    if params.d_xy != 0.0 {
        return Err(Error::Domain(
            "squeezing parameter requires d_xy = 0".into(),
        ));
    }
    let arg = params.d_mixed.abs() / (params.big_lambda() * params.c_thermal);
    if arg >= 1.0 {
        return Err(Error::Domain(format!("tanh 2r = {arg} >= 1")));
    }
    Ok(0.5 * arg.atanh())
}

/// Purity-based separability test `mu <= mu1 mu2 / (mu1 + mu2 - mu1 mu2)`.
/// Applies to the symmetric maximally entangled family only.
pub fn purity_criterion_separable(sigma: &CovarianceMatrix) -> Result<bool> {
    let p = entanglement::purities(sigma)?;
    let bound = p.mode1 * p.mode2 / (p.mode1 + p.mode2 - p.mode1 * p.mode2);
    Ok(p.global <= bound * (1.0 + 1e-12))
}

/// Classifies the asymptotic state. Requires the pairwise dissipator
/// inequalities (which contain `lambda C_T / 2 >= d`) to hold.
pub fn classify_asymptotic(params: &EnvironmentParams) -> Result<AsymptoticClassification> {
    params.validate()?;
    let diffusion = build_thermal_diffusion(params)?;
    let report = validate_dissipator(&diffusion, params.lambda);
    if report.satisfies_cauchy_schwarz != Some(true) {
        let names: Vec<&str> = report.violated_constraints.iter().map(|c| c.name.as_str()).collect();
        return Err(Error::InvalidDissipator(names.join("; ")));
    }

    let sigma_inf = asymptotic_covariance_closed_form(params)?;
    let c = params.c_thermal;
    let x = coupling(params);
    let thresholds = (c - 1.0, c + 1.0);

    let kind = if params.d_xy == 0.0 {
        if x <= thresholds.0 {
            AsymptoticKind::Separable
        } else if x <= thresholds.1 {
            AsymptoticKind::Gmems
        } else {
            return Err(Error::Domain(format!(
                "2|d|/Lambda = {x} exceeds C_T + 1"
            )));
        }
    } else if params.d_mixed == 0.0 {
        AsymptoticKind::Separable
    } else if entanglement::simon_function(&sigma_inf) < -SEPARABILITY_TOLERANCE {
        AsymptoticKind::NonMaximallyEntangled
    } else {
        AsymptoticKind::Separable
    };

    let (log_negativity_inf, squeezing_r) = if params.d_xy == 0.0 {
        (asymptotic_log_negativity(params)?, Some(squeezing_parameter(params)?))
    } else {
        (entanglement::logarithmic_negativity(&sigma_inf).value(), None)
    };
    let log_negativity_inf = if kind == AsymptoticKind::Separable {
        0.0
    } else {
        log_negativity_inf
    };

    Ok(AsymptoticClassification {
        kind,
        sigma_inf,
        log_negativity_inf,
        squeezing_r,
        thresholds,
        coupling: x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::{logarithmic_negativity, purities, simon_function};
    use crate::model::build_drift_matrix;
    use crate::propagator::{lyapunov_residual, stationary_covariance};
    use approx::assert_abs_diff_eq;

    fn p(lambda: f64, c: f64, d: f64, dxy: f64) -> EnvironmentParams {
        EnvironmentParams::new(lambda, c, d, dxy).unwrap()
    }

    #[test]
    fn thermal_limit() {
        let params = p(0.3, 2.2, 0.0, 0.0).with_oscillator(1.5, 0.9).unwrap();
        let s = asymptotic_covariance_closed_form(&params).unwrap();
        assert!(s.max_abs_diff(&CovarianceMatrix::thermal(2.2, 1.5, 0.9)) < 1e-15);
    }

    #[test]
    fn figure_cross_terms() {
        let s = asymptotic_covariance_closed_form(&p(0.1, 1.0, 0.049, 0.0)).unwrap();
        assert_abs_diff_eq!(s.entry(0, 2), 0.049 / 1.01, epsilon = 1e-15);
        assert_abs_diff_eq!(s.entry(0, 3), 0.0049 / 1.01, epsilon = 1e-15);
        assert_abs_diff_eq!(s.entry(1, 3), -0.049 / 1.01, epsilon = 1e-15);
    }

    #[test]
    fn closed_form_matches_lyapunov_general_mass() {
        let params = p(0.3, 2.0, 0.1, 0.02).with_oscillator(2.0, 1.5).unwrap();
        let cf = asymptotic_covariance_closed_form(&params).unwrap();
        let ly = stationary_covariance(&params).unwrap();
        assert!(cf.max_abs_diff(&ly) < 1e-12);
        let y = build_drift_matrix(&params).unwrap();
        let d = build_thermal_diffusion(&params).unwrap();
        assert!(lyapunov_residual(&y, &d, &cf) < 1e-12);
    }

    #[test]
    fn gmems_determinants() {
        let params = p(0.25, 1.3, 0.1, 0.0).with_oscillator(0.8, 1.7).unwrap();
        let s = asymptotic_covariance_closed_form(&params).unwrap();
        let big = params.big_lambda();
        let c = params.c_thermal;
        assert_abs_diff_eq!(s.block_a().determinant(), c * c / 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.block_b().determinant(), c * c / 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.block_c().determinant(), -0.01 / (big * big), epsilon = 1e-12);
        let mu = purities(&s).unwrap();
        assert_abs_diff_eq!(1.0 / mu.global, c * c - 4.0 * 0.01 / (big * big), epsilon = 1e-10);
        assert_abs_diff_eq!(s.delta(), 0.5 / mu.global, epsilon = 1e-10);
    }

    #[test]
    fn classification_examples() {
        let c = classify_asymptotic(&p(0.1, 2.0, 0.049, 0.0)).unwrap();
        assert_eq!(c.kind, AsymptoticKind::Separable);
        assert_eq!(c.log_negativity_inf, 0.0);

        let c = classify_asymptotic(&p(0.1, 1.05, 0.049, 0.0)).unwrap();
        assert_eq!(c.kind, AsymptoticKind::Gmems);
        assert!(c.log_negativity_inf > 0.0);
        assert_abs_diff_eq!(c.coupling, 0.098 / 1.01f64.sqrt(), epsilon = 1e-15);

        for ct in [1.0, 1.5, 3.0] {
            let params = p(0.1, ct, 0.0, 0.01);
            let c = classify_asymptotic(&params).unwrap();
            assert_eq!(c.kind, AsymptoticKind::Separable);
            assert!(c.sigma_inf.block_c().determinant() > 0.0);
            // det C > 0 implies S >= 0 only for physical states, which needs
            // a completely positive dissipator (C_T = 1 here gives nu_- = 0.4).
            let cp = validate_dissipator(&build_thermal_diffusion(&params).unwrap(), 0.1).is_cp_valid;
            assert_eq!(cp, Some(ct > 1.0));
            if cp == Some(true) {
                assert!(simon_function(&c.sigma_inf) >= 0.0);
            }
        }
    }

    #[test]
    fn non_maximally_entangled_family() {
        let c = classify_asymptotic(&p(0.1, 1.0, 0.049, 0.001)).unwrap();
        assert_eq!(c.kind, AsymptoticKind::NonMaximallyEntangled);
        assert!(c.squeezing_r.is_none());
        assert!(c.log_negativity_inf > 0.0);
        let mu = purities(&c.sigma_inf).unwrap();
        assert!(c.sigma_inf.delta() > 0.5 / mu.global + 1e-9);
    }

    #[test]
    fn threshold_edges() {
        let lambda: f64 = 0.5;
        let ct = 1.2;
        let big = (1.0 + lambda * lambda).sqrt();
        let d_edge = (ct - 1.0) * big / 2.0;
        let below = classify_asymptotic(&p(lambda, ct, d_edge * (1.0 - 1e-9), 0.0)).unwrap();
        assert_eq!(below.kind, AsymptoticKind::Separable);
        let above = classify_asymptotic(&p(lambda, ct, d_edge * (1.0 + 1e-9), 0.0)).unwrap();
        assert_eq!(above.kind, AsymptoticKind::Gmems);
    }

    #[test]
    fn invalid_dissipator_rejected() {
        assert!(matches!(
            classify_asymptotic(&p(0.1, 1.0, 0.06, 0.0)),
            Err(Error::InvalidDissipator(_))
        ));
    }

    #[test]
    fn negativity_values() {
        assert_eq!(asymptotic_log_negativity(&p(0.1, 1.0, 0.0, 0.0)).unwrap(), 0.0);
        let params = p(0.1, 1.0, 0.049, 0.0);
        let en = asymptotic_log_negativity(&params).unwrap();
        let expected = -(1.0 - 0.098 / 1.01f64.sqrt()).log2();
        assert_abs_diff_eq!(en, expected, epsilon = 1e-15);
        assert_abs_diff_eq!(en, 0.148_023, epsilon = 1e-6);
        let s = asymptotic_covariance_closed_form(&params).unwrap();
        assert_abs_diff_eq!(logarithmic_negativity(&s).value(), en, epsilon = 1e-9);
        assert!(asymptotic_log_negativity(&p(0.1, 1.0, 0.0, 0.01)).is_err());
    }

    #[test]
    fn squeezing_values() {
        assert_eq!(squeezing_parameter(&p(0.1, 1.3, 0.0, 0.0)).unwrap(), 0.0);
        let r = squeezing_parameter(&p(0.1, 1.0, 0.049, 0.0)).unwrap();
        assert_abs_diff_eq!(r, 0.5 * (0.049 / 1.01f64.sqrt()).atanh(), epsilon = 1e-15);
        assert_abs_diff_eq!(r, 0.02439, epsilon = 1e-5);
        assert!(squeezing_parameter(&p(0.1, 1.0, 0.049, 0.01)).is_err());
        let huge = EnvironmentParams {
            d_mixed: 2.0,
            ..p(0.1, 1.0, 0.0, 0.0)
        };
        assert!(squeezing_parameter(&huge).is_err());
    }

    #[test]
    fn squeezing_pure_case() {
        // det sigma(inf) = 1/16 fixes d/Lambda = sqrt(C_T^2 - 1) / 2
        for ct in [1.0, 1.01, 1.2, 2.0] {
            let lambda = 1.0;
            let big = 2.0f64.sqrt();
            let d = big * (ct * ct - 1.0f64).sqrt() / 2.0;
            let params = EnvironmentParams {
                lambda,
                c_thermal: ct,
                d_mixed: d,
                ..Default::default()
            };
            let s = asymptotic_covariance_closed_form(&params).unwrap();
            assert_abs_diff_eq!(s.det(), 1.0 / 16.0, epsilon = 1e-12);
            let r = squeezing_parameter(&params).unwrap();
            assert_abs_diff_eq!((2.0 * r).tanh(), (ct * ct - 1.0).sqrt() / (2.0 * ct), epsilon = 1e-12);
        }
    }

    #[test]
    fn purity_criterion_agrees_with_threshold() {
        for ct in [1.0, 1.02, 1.1, 1.5] {
            for d in [0.0, 0.005, 0.02, 0.049] {
                let params = p(0.1, ct, d, 0.0);
                let s = asymptotic_covariance_closed_form(&params).unwrap();
                let by_threshold = coupling(&params) <= ct - 1.0;
                assert_eq!(purity_criterion_separable(&s).unwrap(), by_threshold, "C_T={ct} d={d}");
            }
        }
    }
}
