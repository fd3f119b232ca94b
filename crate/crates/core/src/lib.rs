//! Covariance-matrix dynamics of two uncoupled harmonic oscillators in a
//! common thermal environment, with Gaussian entanglement diagnostics.
//!
//! - [`model`]: parameters, drift/diffusion matrices, positivity checks
//! - [`propagator`]: exact propagation, stationary state, RK4 oracle
//! - [`entanglement`]: Simon function, symplectic spectra, log-negativity, purities
//! - [`asymptotics`]: closed-form asymptotic state and its classification
//! - [`sweep`]: scenario files, `(C_T, t)` sweeps, CSV output

pub mod asymptotics;
pub mod entanglement;
pub mod error;
pub mod model;
pub mod propagator;
pub mod sweep;

pub use asymptotics::{
    asymptotic_covariance_closed_form, asymptotic_log_negativity, classify_asymptotic, squeezing_parameter,
    AsymptoticClassification, AsymptoticKind,
};
pub use entanglement::{
    delta_bounds, logarithmic_negativity, ppt_symplectic_eigenvalues, purities, simon_function,
    symplectic_eigenvalues, EntanglementReport, LogNegativity, Purities,
};
pub use error::{Error, Result};
pub use model::{
    build_drift_matrix, build_thermal_diffusion, validate_dissipator, validate_state, CovarianceEntries,
    CovarianceMatrix, DiffusionMatrix, DriftMatrix, EnvironmentParams, ValidationReport,
};
pub use propagator::{
    integrate_ode_oracle, propagate, propagator_matrix, stationary_covariance, Propagator, PropagatorMatrix,
    TrajectoryPoint,
};
pub use sweep::{emit_csv, load_scenario, report_asymptotics, run_sweep, Scenario, SweepOutput, SweepRecord};
