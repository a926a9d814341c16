//! Classical one-variable theory: Hecke's theta function
//! `theta(tau) = sum_r exp(2 pi i r^2 tau)`, the Kronecker symbol, and the
//! half-integral-weight transformation formula on `Gamma_0(4)`:
//!
//! ```text
//! theta((a tau + b)/(c tau + d)) =
//!     eps_d^{-1} (c/d) (c tau + d)^{1/2} theta(tau)
//! ```
//!
//! with `eps_d = 1` or `i` according to `d = 1` or `3 (mod 4)` and the
//! square root on the principal branch. Verification is restricted to
//! `d > 0`; `-gamma` acts identically on `tau`, so nothing is lost, and the
//! symbol's convention at negative denominators never enters.

use num_complex::Complex64;

use crate::error::Error;
use crate::linalg::{principal_half_power, ComplexMatrix, RealSymmetricMatrix};
use crate::theta::truncation_radius;
use crate::Result;

use std::f64::consts::PI;

/// An element of `Gamma_0(N)`: integer entries, determinant one, `N | c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gamma0Element {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
    level: i64,
}

impl Gamma0Element {
    pub fn new(a: i64, b: i64, c: i64, d: i64, level: i64) -> Result<Self> {
        if level <= 0 {
            return Err(Error::Domain("level must be positive".into()));
        }
        if a * d - b * c != 1 {
            return Err(Error::InvalidElement(format!("ad - bc = {}, not 1", a * d - b * c)));
        }
        if c.rem_euclid(level) != 0 {
            return Err(Error::InvalidElement(format!("c = {c} is not divisible by the level {level}")));
        }
        Ok(Self { a, b, c, d, level })
    }

    pub fn entries(&self) -> (i64, i64, i64, i64) {
        (self.a, self.b, self.c, self.d)
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn apply(&self, tau: Complex64) -> Complex64 {
        (tau * self.a as f64 + self.b as f64) / (tau * self.c as f64 + self.d as f64)
    }
}

/// `theta(tau) = sum_r exp(2 pi i r^2 tau)`, truncated with tail below `tol`.
///
/// Identical to the matrix series at `(Omega, Z) = (2 tau, 0)` with
/// `g = m = 1`; the test suite pins that cross-check.
pub fn hecke_theta(tau: Complex64, tol: f64) -> Result<Complex64> {
    if tau.im <= 0.0 {
        return Err(Error::Domain("tau must lie in the upper half plane".into()));
    }
    let y = RealSymmetricMatrix::from_entries(1, vec![2.0 * tau.im])?;
    let radius = truncation_radius(&y, &ComplexMatrix::zeros(1, 1), tol)?;
    let n = radius.floor() as i64;
    let mut acc = Complex64::new(1.0, 0.0);
    for r in 1..=n {
        let term = (Complex64::new(0.0, 2.0 * PI) * tau * ((r * r) as f64)).exp();
        acc += term * 2.0;
    }
    Ok(acc)
}

/// `eps_d`: 1 for `d = 1 (mod 4)`, `i` for `d = 3 (mod 4)`; `d` must be odd.
pub fn epsilon_d(d: i64) -> Result<Complex64> {
    if d.rem_euclid(2) == 0 {
        return Err(Error::Domain("epsilon_d needs an odd argument".into()));
    }
    Ok(match d.rem_euclid(4) {
        1 => Complex64::new(1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    })
}

/// Kronecker symbol `(a/n)`, the multiplicative extension of the Jacobi
/// symbol to all integers, computed by the reciprocity reduction with the
/// `(a/2)` and `(a/-1)` supplements.
pub fn kronecker_symbol(a: i64, n: i64) -> i64 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a;
    let mut n = n;
    let mut result: i64 = 1;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    while n % 2 == 0 {
        n /= 2;
        if a % 2 == 0 {
            return 0;
        }
        match a.rem_euclid(8) {
            3 | 5 => result = -result,
            _ => {}
        }
    }
    // Now n is odd and positive: the Jacobi symbol loop.
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            match n.rem_euclid(8) {
                3 | 5 => result = -result,
                _ => {}
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.rem_euclid(4) == 3 && n.rem_euclid(4) == 3 {
            result = -result;
        }
        a = a.rem_euclid(n);
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Check the half-integral-weight transformation formula for one element of
/// `Gamma_0(4)` at one point, to absolute tolerance `tol`.
pub fn verify_hecke(gamma: &Gamma0Element, tau: Complex64, tol: f64) -> Result<bool> {
    if gamma.level % 4 != 0 {
        return Err(Error::InvalidElement("the formula needs level 4 (or a multiple)".into()));
    }
    if tau.im <= 0.0 {
        return Err(Error::Domain("tau must lie in the upper half plane".into()));
    }
    let (a, b, c, d) = (gamma.a, gamma.b, gamma.c, gamma.d);
    debug_assert!(d % 2 != 0, "d is odd for determinant-one elements with 4 | c");
    let denom = tau * c as f64 + Complex64::new(d as f64, 0.0);
    let tau_star = (tau * a as f64 + Complex64::new(b as f64, 0.0)) / denom;
    let inner_tol = tol / (10.0 * (1.0 + denom.norm().sqrt()));
    let lhs = hecke_theta(tau_star, inner_tol)?;
    let eps_inv = epsilon_d(d)?.conj(); // both values are unit modulus
    let chi = kronecker_symbol(c, d) as f64;
    let rhs = eps_inv * chi * principal_half_power(denom, 1)? * hecke_theta(tau, inner_tol)?;
    Ok((lhs - rhs).norm() < tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::{theta_direct, SiegelJacobiPoint};

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Brute-force partial sums, independent of the production path.
    fn brute_hecke(tau: Complex64, n: i64) -> Complex64 {
        let mut acc = c64(0.0, 0.0);
        for r in -n..=n {
            acc += (c64(0.0, 2.0 * PI) * tau * ((r * r) as f64)).exp();
        }
        acc
    }

    #[test]
    fn value_at_i() {
        let v = hecke_theta(c64(0.0, 1.0), 1e-12).unwrap();
        let oracle = brute_hecke(c64(0.0, 1.0), 12);
        assert!((v - oracle).norm() < 1e-12);
        assert!((v.re - 1.0037348854877392).abs() < 1e-12);
        assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn periodicity() {
        let tau = c64(0.3, 0.7);
        let v1 = hecke_theta(tau, 1e-11).unwrap();
        let v2 = hecke_theta(tau + c64(1.0, 0.0), 1e-11).unwrap();
        assert!((v1 - v2).norm() < 3e-11);
    }

    #[test]
    fn matches_matrix_series() {
        for &tau in &[c64(0.0, 1.0), c64(0.25, 0.333), c64(-0.2, 2.0), c64(0.7, 0.11)] {
            let v = hecke_theta(tau, 1e-11).unwrap();
            let p = SiegelJacobiPoint::new(
                ComplexMatrix::from_rows(&[vec![tau * 2.0]]).unwrap(),
                ComplexMatrix::zeros(1, 1),
            )
            .unwrap();
            let w = theta_direct(&p, 1e-11).unwrap();
            assert!((v - w.value).norm() < 3e-11);
        }
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon_d(1).unwrap(), c64(1.0, 0.0));
        assert_eq!(epsilon_d(3).unwrap(), c64(0.0, 1.0));
        assert_eq!(epsilon_d(-3).unwrap(), c64(1.0, 0.0));
        assert!(epsilon_d(2).is_err());
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker_symbol(1, 3), 1);
        assert_eq!(kronecker_symbol(2, 3), -1);
        assert_eq!(kronecker_symbol(4, 5), 1);
        assert_eq!(kronecker_symbol(0, 1), 1);
        assert_eq!(kronecker_symbol(0, 7), 0);
        assert_eq!(kronecker_symbol(3, 0), 0);
        assert_eq!(kronecker_symbol(-1, 0), 1);
    }

    #[test]
    fn kronecker_matches_euler_criterion() {
        // (a/p) = a^{(p-1)/2} mod p for odd primes.
        let primes = [3i64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];
        for &p in &primes {
            for a in -40i64..=40 {
                let expected = if a.rem_euclid(p) == 0 {
                    0
                } else {
                    let mut pow = 1i64;
                    let base = a.rem_euclid(p);
                    for _ in 0..(p - 1) / 2 {
                        pow = (pow * base).rem_euclid(p);
                    }
                    if pow == 1 {
                        1
                    } else {
                        -1
                    }
                };
                assert_eq!(kronecker_symbol(a, p), expected, "(a, p) = ({a}, {p})");
            }
        }
    }

    #[test]
    fn kronecker_multiplicative_in_numerator() {
        for d in (1i64..=30).step_by(2) {
            for c1 in -30i64..=30 {
                for c2 in -30i64..=30 {
                    assert_eq!(
                        kronecker_symbol(c1 * c2, d),
                        kronecker_symbol(c1, d) * kronecker_symbol(c2, d),
                        "c1 = {c1}, c2 = {c2}, d = {d}"
                    );
                }
            }
        }
    }

    #[test]
    fn hecke_formula_examples() {
        let id = Gamma0Element::new(1, 0, 0, 1, 4).unwrap();
        assert!(verify_hecke(&id, c64(0.0, 1.0), 1e-10).unwrap());

        let t = Gamma0Element::new(1, 1, 0, 1, 4).unwrap();
        assert!(verify_hecke(&t, c64(0.0, 1.0), 1e-10).unwrap());

        let u = Gamma0Element::new(1, 0, 4, 1, 4).unwrap();
        assert!(verify_hecke(&u, c64(0.0, 1.0), 1e-8).unwrap());
    }

    #[test]
    fn gamma0_validation() {
        assert!(Gamma0Element::new(2, 0, 0, 1, 4).is_err());
        assert!(Gamma0Element::new(1, 0, 2, 1, 4).is_err());
        assert!(Gamma0Element::new(1, 0, 4, 1, 0).is_err());
    }
}
