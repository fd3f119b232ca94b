#![allow(dead_code)]

use nalgebra::{Matrix2, Matrix4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twomode::{build_thermal_diffusion, validate_dissipator, CovarianceMatrix, EnvironmentParams};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Scaling-and-squaring matrix exponential with a 30-term Taylor kernel.
pub fn expm(a: &Matrix4<f64>) -> Matrix4<f64> {
    let norm = a.abs().row_sum().max();
    let mut squarings = 0;
    while norm / 2f64.powi(squarings) > 0.5 {
        squarings += 1;
    }
    let scaled = a / 2f64.powi(squarings);
    let mut term = Matrix4::identity();
    let mut sum = Matrix4::identity();
    for k in 1..=30 {
        term = term * scaled / k as f64;
        sum += term;
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

/// Two-mode symplectic form `J ⊕ J` in `(x, p_x, y, p_y)` ordering.
pub fn omega() -> Matrix4<f64> {
    let mut w = Matrix4::zeros();
    for k in [0, 2] {
        w[(k, k + 1)] = 1.0;
        w[(k + 1, k)] = -1.0;
    }
    w
}

fn rotation(theta: f64) -> Matrix2<f64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(c, s, -s, c)
}

fn local_symplectic<R: Rng>(rng: &mut R, max_squeeze: f64) -> Matrix2<f64> {
    let r = rng.random_range(-max_squeeze..max_squeeze);
    let sq = Matrix2::new(r.exp(), 0.0, 0.0, (-r).exp());
    rotation(rng.random_range(0.0..std::f64::consts::TAU)) * sq * rotation(rng.random_range(0.0..std::f64::consts::TAU))
}

fn block_diag(a: &Matrix2<f64>, b: &Matrix2<f64>) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(b);
    m
}

fn beam_splitter(theta: f64) -> Matrix4<f64> {
    let (s, c) = theta.sin_cos();
    let mut m = Matrix4::identity() * c;
    for k in 0..2 {
        m[(k, k + 2)] = s;
        m[(k + 2, k)] = -s;
    }
    m
}

/// Random symplectic matrix built from local squeezers/rotations and a beam splitter.
pub fn random_symplectic<R: Rng>(rng: &mut R, max_squeeze: f64) -> Matrix4<f64> {
    let l1 = block_diag(&local_symplectic(rng, max_squeeze), &local_symplectic(rng, max_squeeze));
    let l2 = block_diag(&local_symplectic(rng, max_squeeze), &local_symplectic(rng, max_squeeze));
    l2 * beam_splitter(rng.random_range(0.0..std::f64::consts::TAU)) * l1
}

/// Random physical state `M diag(nu1, nu1, nu2, nu2) M^T` with `nu_i >= 1/2`.
pub fn random_physical_state<R: Rng>(rng: &mut R) -> CovarianceMatrix {
    let nu1 = rng.random_range(0.5..3.0);
    let nu2 = rng.random_range(0.5..3.0);
    let m = random_symplectic(rng, 1.0);
    let diag = Matrix4::from_diagonal(&nalgebra::Vector4::new(nu1, nu1, nu2, nu2));
    let s = m * diag * m.transpose();
    CovarianceMatrix::new((s + s.transpose()) * 0.5).unwrap()
}

/// Draw satisfying the pairwise bounds: `lambda in [0.01, 1]`, `C_T in [1, 5]`,
/// `d in [0, lambda C_T / 2]`, `D_xy in [0, 0.1 lambda]`.
pub fn random_pairwise_params<R: Rng>(rng: &mut R) -> EnvironmentParams {
    let lambda = rng.random_range(0.01..1.0);
    let c = rng.random_range(1.0..5.0);
    let d = rng.random_range(0.0..lambda * c / 2.0);
    let d_xy = rng.random_range(0.0..0.1 * lambda);
    EnvironmentParams::new(lambda, c, d, d_xy).unwrap()
}

/// Draw passing the full positivity check, with mass and frequency varied.
pub fn random_cp_params<R: Rng>(rng: &mut R) -> EnvironmentParams {
    loop {
        let lambda = rng.random_range(0.01..1.0);
        let c = rng.random_range(1.0..5.0);
        let d = rng.random_range(-1.0..1.0) * lambda * c / 2.0;
        let d_xy = rng.random_range(0.0..0.1 * lambda);
        let p = EnvironmentParams::new(lambda, c, d, d_xy)
            .unwrap()
            .with_oscillator(rng.random_range(0.5..2.0), rng.random_range(0.5..2.0))
            .unwrap();
        let report = validate_dissipator(&build_thermal_diffusion(&p).unwrap(), p.lambda);
        if report.is_cp_valid == Some(true) {
            return p;
        }
    }
}

pub fn fig1_sigma0() -> CovarianceMatrix {
    CovarianceMatrix::diagonal(1.0, 0.5, 1.0, 0.5)
}

/// First time in `(0, t_max]` at which `pred(S(t))` flips from its value at
/// `t = 0`, located by a scan with step `dt` followed by bisection.
pub fn first_crossing(s_of_t: impl Fn(f64) -> f64, t_max: f64, dt: f64) -> Option<f64> {
    let initial = s_of_t(0.0) < 0.0;
    let mut lo = 0.0;
    let mut t = dt;
    while t <= t_max {
        if (s_of_t(t) < 0.0) != initial {
            let mut hi = t;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if (s_of_t(mid) < 0.0) != initial {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Some(hi);
        }
        lo = t;
        t += dt;
    }
    None
}
