//! Automorphic factors of the theta transformation law and extraction of
//! its eighth-root-of-unity multiplier.
//!
//! For an element `x = (gamma, (lambda, mu; kappa))` of the Jacobi group
//! acting on a point `(Omega, Z)`, the transformation law reads
//!
//! ```text
//! Theta(x . (Omega, Z)) = zeta(x) * E(x, (Omega, Z))
//!                         * det(C Omega + D)^{m/2} * Theta(Omega, Z)
//! ```
//!
//! where `E` is the exponential prefactor
//! `exp(pi i tr{(Z + lambda Omega + mu)(C Omega + D)^{-1} C '(Z + lambda
//! Omega + mu) - lambda Omega 'lambda - 2 lambda 'Z})` and `zeta(x)` is an
//! eighth root of unity. [`extract_zeta`] computes `zeta` operationally as
//! `lhs / rhs_core` with every half-integer power on the principal branch;
//! the computation runs in log space so that words with astronomically
//! large prefactors still extract a finite, unit-modulus `zeta`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Error;
use crate::groups::{self, JacobiGroupElement};
use crate::linalg::principal_half_power;
use crate::theta::{theta_log, SiegelJacobiPoint};
use crate::Result;

use std::f64::consts::PI;

/// Exponent (without the `pi i`) shared by the transformation law and the
/// automorphic factor: `tr{(Z + lambda Omega + mu)(C Omega + D)^{-1} C
/// '(Z + lambda Omega + mu) - lambda Omega 'lambda - 2 lambda 'Z}`.
fn core_trace(x: &JacobiGroupElement, p: &SiegelJacobiPoint) -> Result<Complex64> {
    if x.g() != p.g() || x.m() != p.m() {
        return Err(Error::DimensionMismatch("element and point degrees differ".into()));
    }
    let omega = p.omega();
    let z = p.z();
    let c = x.gamma().block_c().to_complex();
    let d = x.gamma().block_d().to_complex();
    let lam = x.heisenberg().lambda().to_complex();
    let mu = x.heisenberg().mu().to_complex();

    let shifted = z.add(&lam.mul(omega)).add(&mu);
    let denom_inv = c
        .mul(omega)
        .add(&d)
        .inverse()
        .map_err(|_| Error::InvalidPoint("C Omega + D is numerically singular".into()))?;
    let quad = shifted.mul(&denom_inv).mul(&c).mul(&shifted.transpose()).trace();
    let lam_part = lam.mul(omega).mul(&lam.transpose()).trace();
    let z_part = lam.mul(&z.transpose()).trace() * 2.0;
    Ok(quad - lam_part - z_part)
}

/// Log of the full automorphic factor `J`: `pi i` times the core trace minus
/// `pi i tr(kappa + mu 'lambda)`. The subtracted term is an integer multiple
/// of `pi i`, so it only flips the sign of `exp`.
pub fn factor_j_exponent(x: &JacobiGroupElement, p: &SiegelJacobiPoint) -> Result<Complex64> {
    let kappa_trace = x
        .heisenberg()
        .kappa()
        .add(&x.heisenberg().mu().mul(&x.heisenberg().lambda().transpose())?)?
        .trace();
    Ok(Complex64::new(0.0, PI) * (core_trace(x, p)? - Complex64::new(kappa_trace as f64, 0.0)))
}

/// The automorphic factor `J` itself. Overflows to infinity for elements
/// whose exponent has a huge real part; use [`factor_j_exponent`] there.
pub fn factor_j(x: &JacobiGroupElement, p: &SiegelJacobiPoint) -> Result<Complex64> {
    Ok(factor_j_exponent(x, p)?.exp())
}

/// `J_* = J * det(C Omega + D)^{m/2}` with the principal half power.
pub fn factor_jstar(x: &JacobiGroupElement, p: &SiegelJacobiPoint) -> Result<Complex64> {
    let det = det_c_omega_d(x, p)?;
    Ok(factor_j(x, p)? * principal_half_power(det, x.m() as i32)?)
}

/// `det(C Omega + D)` for the symplectic part of `x` at `p`.
pub fn det_c_omega_d(x: &JacobiGroupElement, p: &SiegelJacobiPoint) -> Result<Complex64> {
    if x.g() != p.g() {
        return Err(Error::DimensionMismatch("element and point degrees differ".into()));
    }
    let c = x.gamma().block_c().to_complex();
    let d = x.gamma().block_d().to_complex();
    Ok(c.mul(p.omega()).add(&d).det())
}

/// Both sides of the transformation law at one `(element, point)` pair.
///
/// `rhs_core` is the right-hand side with `zeta` omitted; `zeta` is
/// `lhs / rhs_core`. The `log_*` fields stay finite even when the raw
/// complex values overflow.
#[derive(Debug, Clone, Serialize)]
pub struct TransformationReport {
    pub element: ElementSummary,
    pub point: SiegelJacobiPoint,
    #[serde(with = "crate::jsonio::complex_pair")]
    pub lhs: Complex64,
    #[serde(with = "crate::jsonio::complex_pair")]
    pub rhs_core: Complex64,
    #[serde(with = "crate::jsonio::complex_pair")]
    pub log_lhs: Complex64,
    #[serde(with = "crate::jsonio::complex_pair")]
    pub log_rhs_core: Complex64,
    #[serde(with = "crate::jsonio::complex_pair")]
    pub zeta: Complex64,
    pub zeta_modulus_defect: f64,
    pub zeta_eighth_defect: f64,
}

/// Serializable snapshot of the element a report refers to.
#[derive(Debug, Clone, Serialize)]
pub struct ElementSummary {
    pub gamma: crate::groups::SymplecticElement,
    pub heisenberg: crate::groups::HeisenbergElement,
}

/// Numerically extract the multiplier `zeta` of the transformation law.
///
/// Both theta evaluations run at `tol / 10` so division noise stays below
/// the reporting tolerance. Points where the reduced theta magnitude drops
/// under `10 * tol` are rejected (`Error::ThetaTooSmall`): theta has zeros
/// and the ratio is meaningless near them.
pub fn extract_zeta(
    x: &JacobiGroupElement,
    p: &SiegelJacobiPoint,
    tol: f64,
) -> Result<TransformationReport> {
    if tol <= 0.0 {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    if !x.is_theta_element() {
        return Err(Error::InvalidElement(
            "the transformation law applies to theta-group elements only".into(),
        ));
    }
    let transformed = groups::act(x, p)?;
    let inner_tol = tol / 10.0;
    let lhs_log = theta_log(&transformed, inner_tol)?;
    let rhs_log = theta_log(p, inner_tol)?;
    for mag in [lhs_log.reduced_magnitude, rhs_log.reduced_magnitude] {
        if mag < 10.0 * tol {
            return Err(Error::ThetaTooSmall { magnitude: mag });
        }
    }
    let exponent = Complex64::new(0.0, PI) * core_trace(x, p)?;
    let det = det_c_omega_d(x, p)?;
    let sqrt_det = principal_half_power(det, 1)?;
    let log_rhs_core = exponent + sqrt_det.ln() * (x.m() as f64) + rhs_log.log_value;
    let log_zeta = lhs_log.log_value - log_rhs_core;
    let zeta = log_zeta.exp();
    Ok(TransformationReport {
        element: ElementSummary { gamma: x.gamma().clone(), heisenberg: x.heisenberg().clone() },
        point: p.clone(),
        lhs: lhs_log.log_value.exp(),
        rhs_core: log_rhs_core.exp(),
        log_lhs: lhs_log.log_value,
        log_rhs_core,
        zeta,
        zeta_modulus_defect: (zeta.norm() - 1.0).abs(),
        zeta_eighth_defect: (zeta.powi(8) - Complex64::new(1.0, 0.0)).norm(),
    })
}

/// Check that the extracted multiplier is an eighth root of unity.
pub fn verify_functional_equation(
    x: &JacobiGroupElement,
    p: &SiegelJacobiPoint,
    tol: f64,
) -> Result<(bool, TransformationReport)> {
    let report = extract_zeta(x, p, tol)?;
    let ok = report.zeta_modulus_defect < tol && report.zeta_eighth_defect < tol;
    Ok((ok, report))
}
