//! Independent numerical oracles for the analytic steps behind the
//! inversion identity: the Gaussian lattice integral
//!
//! ```text
//! integral over R^{m x g} of exp(pi i tr(x Omega 'x + 2 x 'Z)) dx
//!     = det(Omega / i)^{-m/2} exp(-pi i tr(Z Omega^{-1} 'Z))
//! ```
//!
//! checked by tensor-product Gauss-Legendre quadrature, and the Poisson
//! summation identity, checked by summing the closed-form Fourier
//! transforms over the lattice and comparing against the direct series.

use num_complex::Complex64;

use crate::error::Error;
use crate::linalg::{principal_half_power, ComplexMatrix};
use crate::theta::{self, SiegelJacobiPoint};
use crate::Result;

use std::f64::consts::PI;

/// Fixed tensor-product Gauss-Legendre rule on a centered box.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub box_half_width: f64,
    pub points_per_axis: usize,
}

impl QuadratureSpec {
    pub fn new(box_half_width: f64, points_per_axis: usize) -> Result<Self> {
        if box_half_width <= 0.0 {
            return Err(Error::Domain("box half-width must be positive".into()));
        }
        if points_per_axis < 8 {
            return Err(Error::Domain("at least 8 points per axis".into()));
        }
        Ok(Self { box_half_width, points_per_axis })
    }

    /// Default rule for a point: half-width from the 6-sigma envelope of the
    /// Gaussian factor plus the peak offset induced by `Im Z`, 256 points.
    pub fn default_for(p: &SiegelJacobiPoint) -> Result<Self> {
        let lambda = p.min_im_eigenvalue();
        let y_inv = p.im_omega().to_complex().inverse()?;
        let shift = p.im_z().mul(&y_inv).frobenius_norm();
        Self::new(6.0 / lambda.sqrt() + shift, 256)
    }
}

/// Closed form of the Gaussian lattice integral.
pub fn gaussian_integral_closed(p: &SiegelJacobiPoint) -> Result<Complex64> {
    let omega_inv = p.omega().inverse()?;
    closed_form_term(p.omega(), &omega_inv, p.z(), p.m())
}

fn closed_form_term(
    omega: &ComplexMatrix,
    omega_inv: &ComplexMatrix,
    z: &ComplexMatrix,
    m: usize,
) -> Result<Complex64> {
    let det_over_i = omega.scale(Complex64::new(0.0, -1.0)).det();
    let det_pow = principal_half_power(det_over_i, -(m as i32))?;
    let trace = z.mul(omega_inv).mul(&z.transpose()).trace();
    Ok(det_pow * (Complex64::new(0.0, -PI) * trace).exp())
}

/// Tensor-product Gauss-Legendre quadrature of the Gaussian integrand.
///
/// Guarded to `m * g <= 2`: the rule is a verification oracle, not a
/// production integrator, and higher dimensions are covered indirectly by
/// [`poisson_check`].
pub fn gaussian_integral_quadrature(p: &SiegelJacobiPoint, spec: &QuadratureSpec) -> Result<Complex64> {
    let m = p.m();
    let g = p.g();
    let d = m * g;
    if d > 2 {
        return Err(Error::Domain("quadrature oracle is limited to m * g <= 2".into()));
    }
    let n = spec.points_per_axis;
    if n.pow(d as u32) > 10_000_000 {
        return Err(Error::Domain("more than 1e7 quadrature points".into()));
    }
    let (nodes, weights) = gauss_legendre(n);
    let w = spec.box_half_width;
    let omega = p.omega();
    let z = p.z();

    let mut x = vec![0.0f64; d];
    let mut acc = Complex64::new(0.0, 0.0);
    if d == 1 {
        for i in 0..n {
            x[0] = w * nodes[i];
            acc += integrand(&x, m, g, omega, z) * (w * weights[i]);
        }
    } else {
        for i in 0..n {
            x[0] = w * nodes[i];
            let wi = w * weights[i];
            for j in 0..n {
                x[1] = w * nodes[j];
                acc += integrand(&x, m, g, omega, z) * (wi * w * weights[j]);
            }
        }
    }
    Ok(acc)
}

fn integrand(x: &[f64], m: usize, g: usize, omega: &ComplexMatrix, z: &ComplexMatrix) -> Complex64 {
    let mut trace = Complex64::new(0.0, 0.0);
    for i in 0..m {
        let row = &x[i * g..(i + 1) * g];
        for j in 0..g {
            let xij = row[j];
            if xij == 0.0 {
                continue;
            }
            for (k, &xik) in row.iter().enumerate() {
                trace += omega.get(j, k) * (xij * xik);
            }
            trace += z.get(i, j) * (2.0 * xij);
        }
    }
    (Complex64::new(0.0, PI) * trace).exp()
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0f64; n];
    let mut weights = vec![0.0f64; n];
    let mm = n.div_ceil(2);
    for i in 0..mm {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p0, p1) = legendre_with_prev(n, x);
            dp = n as f64 * (x * p0 - p1) / (x * x - 1.0);
            let dx = p0 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `(P_n(x), P_{n-1}(x))` by the three-term recurrence.
fn legendre_with_prev(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = 0.0;
    for k in 0..n {
        let p2 = p1;
        p1 = p0;
        p0 = ((2 * k + 1) as f64 * x * p1 - k as f64 * p2) / (k + 1) as f64;
    }
    (p0, p1)
}

/// Poisson summation defect: `|direct series - sum of closed-form Fourier
/// transforms over the lattice|`, both sides truncated with certified tails
/// below `tol`.
pub fn poisson_check(p: &SiegelJacobiPoint, tol: f64) -> Result<f64> {
    let direct = theta::theta_direct(p, tol)?;

    let omega = p.omega();
    let omega_inv = omega.inverse()?;
    let m = p.m();
    let g = p.g();

    // The transform side is a theta-type sum over the inverted point: its
    // summand magnitudes are governed by Im(-Omega^{-1}) and Im(Z Omega^{-1}),
    // scaled by the constant prefactor, so the radius comes from the same
    // certified envelope.
    let w_mat = omega_inv.neg().symmetrized();
    let y_star = crate::linalg::RealSymmetricMatrix::symmetrize(g, &w_mat.imag_part())?;
    let z_star = p.z().mul(&omega_inv);
    let v_star = ComplexMatrix::from_real(m, g, &z_star.imag_part())?;
    let det_over_i = omega.scale(Complex64::new(0.0, -1.0)).det();
    let det_pow = principal_half_power(det_over_i, -(m as i32))?;
    let z_trace = p.z().mul(&omega_inv).mul(&p.z().transpose()).trace();
    let prefactor_abs = det_pow.norm() * (PI * z_trace.im).exp();
    let radius = theta::truncation_radius(&y_star, &v_star, tol / prefactor_abs.max(1e-300))?;

    let z = p.z();
    let (transform_sum, _terms) =
        theta::lattice_shell_sum(m, g, radius, theta::DEFAULT_TERM_BUDGET, &mut |a| {
            // Fourier transform of the integrand at the shifted argument:
            // the closed form evaluated at (Omega, Z + A).
            let mut shifted = z.clone();
            for i in 0..m {
                for j in 0..g {
                    let v = shifted.get(i, j) + Complex64::new(a[i * g + j] as f64, 0.0);
                    shifted.set(i, j, v);
                }
            }
            let trace = shifted.mul(&omega_inv).mul(&shifted.transpose()).trace();
            det_pow * (Complex64::new(0.0, -PI) * trace).exp()
        })?;

    Ok((direct.value - transform_sum).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMatrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn point_1d(omega: Complex64, z: Complex64) -> SiegelJacobiPoint {
        SiegelJacobiPoint::new(
            ComplexMatrix::from_rows(&[vec![omega]]).unwrap(),
            ComplexMatrix::from_rows(&[vec![z]]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn closed_form_examples() {
        let v = gaussian_integral_closed(&point_1d(c(0.0, 1.0), c(0.0, 0.0))).unwrap();
        assert!((v - c(1.0, 0.0)).norm() < 1e-14);

        let v = gaussian_integral_closed(&point_1d(c(0.0, 2.0), c(0.0, 0.0))).unwrap();
        assert!((v - c(1.0 / 2.0f64.sqrt(), 0.0)).norm() < 1e-14);

        let v = gaussian_integral_closed(&point_1d(c(0.0, 1.0), c(0.5, 0.0))).unwrap();
        assert!((v - c((-PI / 4.0).exp(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn legendre_rule_basics() {
        let (nodes, weights) = gauss_legendre(64);
        assert!((weights.iter().sum::<f64>() - 2.0).abs() < 1e-13);
        // Integrates x^2 on [-1, 1] exactly.
        let int: f64 = nodes.iter().zip(&weights).map(|(x, w)| w * x * x).sum();
        assert!((int - 2.0 / 3.0).abs() < 1e-13);
        // Nodes are symmetric and sorted.
        for i in 0..nodes.len() - 1 {
            assert!(nodes[i] < nodes[i + 1]);
        }
        assert!((nodes[0] + nodes[63]).abs() < 1e-15);
    }

    #[test]
    fn quadrature_matches_closed_form_at_base_points() {
        for (omega, z, tol) in [
            (c(0.0, 1.0), c(0.0, 0.0), 1e-8),
            (c(0.0, 2.0), c(0.0, 0.0), 1e-8),
            (c(1.0, 1.0), c(0.0, 0.0), 1e-6),
            (c(-0.7, 0.6), c(0.3, 0.4), 1e-6),
        ] {
            let p = point_1d(omega, z);
            let spec = QuadratureSpec::default_for(&p).unwrap();
            let quad = gaussian_integral_quadrature(&p, &spec).unwrap();
            let closed = gaussian_integral_closed(&p).unwrap();
            assert!(
                (quad - closed).norm() < tol,
                "Omega = {omega}, defect = {}",
                (quad - closed).norm()
            );
        }
    }

    #[test]
    fn quadrature_guards_dimension() {
        let p = SiegelJacobiPoint::upper_i(3, 1);
        let spec = QuadratureSpec::new(6.0, 64).unwrap();
        assert!(gaussian_integral_quadrature(&p, &spec).is_err());
    }

    #[test]
    fn poisson_defect_small_at_base_points() {
        let d = poisson_check(&point_1d(c(0.0, 1.0), c(0.0, 0.0)), 1e-10).unwrap();
        assert!(d < 1e-9, "defect {d}");

        let d = poisson_check(&SiegelJacobiPoint::upper_i(2, 1), 1e-10).unwrap();
        assert!(d < 1e-8, "defect {d}");

        let d = poisson_check(&point_1d(c(0.4, 0.9), c(0.2, 0.3)), 1e-10).unwrap();
        assert!(d < 1e-8, "defect {d}");
    }

    #[test]
    fn transform_term_is_closed_form_at_shift() {
        // One lattice term of the transform sum equals the closed form at Z + A.
        let p = point_1d(c(0.3, 1.2), c(0.1, -0.2));
        let shifted = point_1d(c(0.3, 1.2), c(1.1, -0.2));
        let omega_inv = p.omega().inverse().unwrap();
        let trace = shifted.z().mul(&omega_inv).mul(&shifted.z().transpose()).trace();
        let det_pow =
            principal_half_power(p.omega().scale(c(0.0, -1.0)).det(), -1).unwrap();
        let term = det_pow * (c(0.0, -PI) * trace).exp();
        let gic = gaussian_integral_closed(&shifted).unwrap();
        assert!((term - gic).norm() < 1e-14);
    }
}
