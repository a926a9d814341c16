//! Transformation identities of the theta series, checked against the
//! evaluator on seeded random inputs.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sjtheta::groups::IntMatrix;
use sjtheta::linalg::ComplexMatrix;
use sjtheta::oracles::{self, QuadratureSpec};
use sjtheta::sampling;
use sjtheta::theta::{theta, theta_direct, theta_log, SiegelJacobiPoint};

use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_int_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> IntMatrix {
    let mut out = IntMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            out.set(i, j, rng.gen_range(-2..=2));
        }
    }
    out
}

/// Shifting `Z` by an integer matrix leaves the series unchanged.
#[test]
fn z_periodicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for &(g, m) in &[(1usize, 1usize), (2, 1), (1, 2)] {
        for _ in 0..10 {
            let p = sampling::random_point(&mut rng, g, m, 0.4);
            let mu = random_int_matrix(&mut rng, m, g);
            let shifted = SiegelJacobiPoint::new(p.omega().clone(), p.z().add(&mu.to_complex())).unwrap();
            let a = theta(&p, 1e-12).unwrap();
            let b = theta(&shifted, 1e-12).unwrap();
            assert!(
                (a.value - b.value).norm() < 1e-10,
                "(g,m)=({g},{m}): periodicity defect {}",
                (a.value - b.value).norm()
            );
        }
    }
}

/// `Theta(Omega, Z + lambda Omega + mu)` times
/// `exp(pi i tr(lambda Omega 'lambda + 2 lambda 'Z))` recovers
/// `Theta(Omega, Z)`; compared in log space so large prefactors cost no
/// precision.
#[test]
fn lattice_shift_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for &(g, m) in &[(1usize, 1usize), (2, 1), (1, 2)] {
        for trial in 0..10 {
            let p = sampling::random_point(&mut rng, g, m, 0.4);
            let lambda = random_int_matrix(&mut rng, m, g).to_complex();
            let mu = random_int_matrix(&mut rng, m, g).to_complex();
            let shifted_z = p.z().add(&lambda.mul(p.omega())).add(&mu);
            let shifted = SiegelJacobiPoint::new(p.omega().clone(), shifted_z).unwrap();
            let trace = lambda
                .mul(p.omega())
                .mul(&lambda.transpose())
                .add(&lambda.mul(&p.z().transpose()).scale(c(2.0, 0.0)))
                .trace();
            let lhs = theta_log(&shifted, 1e-12).unwrap().log_value + c(0.0, PI) * trace;
            let rhs = theta_log(&p, 1e-12).unwrap().log_value;
            let ratio = (lhs - rhs).exp();
            assert!(
                (ratio - c(1.0, 0.0)).norm() < 1e-9,
                "(g,m)=({g},{m}) trial {trial}: ratio {ratio}"
            );
        }
    }
}

/// Translating `Re Omega` by a symmetric even-diagonal integer matrix leaves
/// the series unchanged.
#[test]
fn even_translation_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(47);
    for &(g, m) in &[(1usize, 1usize), (2, 1), (1, 2)] {
        for _ in 0..10 {
            let p = sampling::random_point(&mut rng, g, m, 0.4);
            let mut b = IntMatrix::zeros(g, g);
            for i in 0..g {
                for j in i..g {
                    let v = if i == j { 2 * rng.gen_range(-2..=2) } else { rng.gen_range(-2..=2) };
                    b.set(i, j, v);
                    b.set(j, i, v);
                }
            }
            let translated =
                SiegelJacobiPoint::new(p.omega().add(&b.to_complex()), p.z().clone()).unwrap();
            let a = theta(&p, 1e-12).unwrap();
            let t = theta(&translated, 1e-12).unwrap();
            assert!(
                (a.value - t.value).norm() < 1e-10,
                "(g,m)=({g},{m}): translation defect {}",
                (a.value - t.value).norm()
            );
        }
    }
}

/// `Theta('alpha Omega alpha, Z alpha) = Theta(Omega, Z)` for unimodular
/// `alpha` (reindexing of the lattice sum).
#[test]
fn unimodular_substitution_identity() {
    let alphas_g2 = [
        IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap(),
        IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap(),
        IntMatrix::from_rows(&[vec![-1, 0], vec![0, 1]]).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for alpha in &alphas_g2 {
        for _ in 0..5 {
            let p = sampling::random_point(&mut rng, 2, 1, 0.4);
            let ac = alpha.to_complex();
            let new_omega = ac.transpose().mul(p.omega()).mul(&ac).symmetrized();
            let new_z = p.z().mul(&ac);
            let q = SiegelJacobiPoint::new(new_omega, new_z).unwrap();
            let a = theta(&p, 1e-12).unwrap();
            let b = theta(&q, 1e-12).unwrap();
            assert!(
                (a.value - b.value).norm() < 1e-9,
                "substitution defect {}",
                (a.value - b.value).norm()
            );
        }
    }
    // g = 1: the only nontrivial case is the sign flip Z -> -Z.
    for _ in 0..5 {
        let p = sampling::random_point(&mut rng, 1, 2, 0.4);
        let q = SiegelJacobiPoint::new(p.omega().clone(), p.z().neg()).unwrap();
        let a = theta(&p, 1e-12).unwrap();
        let b = theta(&q, 1e-12).unwrap();
        assert!((a.value - b.value).norm() < 1e-9);
    }
}

/// The one-variable series and the matrix series agree at `Omega = 2 tau`.
#[test]
fn hecke_matches_matrix_series_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(59);
    for _ in 0..20 {
        let tau = c(rng.gen_range(-1.0..1.0), rng.gen_range(0.15..2.5));
        let tol = 1e-11;
        let h = sjtheta::classical::hecke_theta(tau, tol).unwrap();
        let p = SiegelJacobiPoint::new(
            ComplexMatrix::from_rows(&[vec![tau * 2.0]]).unwrap(),
            ComplexMatrix::zeros(1, 1),
        )
        .unwrap();
        let d = theta_direct(&p, tol).unwrap();
        assert!(
            (h - d.value).norm() <= tol + d.tail_bound,
            "tau = {tau}: difference {}",
            (h - d.value).norm()
        );
    }
}

/// Doubling the quadrature resolution must not make the defect worse, up to
/// noise-floor violations below 1e-10 (flagged, not failed).
#[test]
fn quadrature_defect_monotone_under_refinement() {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let mut flagged = 0;
    for i in 0..10 {
        let omega = c(rng.gen_range(-0.8..0.8), rng.gen_range(0.3..1.6));
        let z = c(rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6));
        let p = SiegelJacobiPoint::new(
            ComplexMatrix::from_rows(&[vec![omega]]).unwrap(),
            ComplexMatrix::from_rows(&[vec![z]]).unwrap(),
        )
        .unwrap();
        let closed = oracles::gaussian_integral_closed(&p).unwrap();
        let base = QuadratureSpec::default_for(&p).unwrap();
        let fine = QuadratureSpec::new(base.box_half_width, base.points_per_axis * 2).unwrap();
        let d_base = (oracles::gaussian_integral_quadrature(&p, &base).unwrap() - closed).norm();
        let d_fine = (oracles::gaussian_integral_quadrature(&p, &fine).unwrap() - closed).norm();
        if d_fine > d_base {
            if d_fine < 1e-10 {
                eprintln!("note: refinement noise at point {i}: {d_base:.2e} -> {d_fine:.2e}");
                flagged += 1;
            } else {
                panic!("refinement made the defect worse: {d_base:.2e} -> {d_fine:.2e}");
            }
        }
    }
    assert!(flagged <= 10);
}
