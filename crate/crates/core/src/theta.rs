//! Evaluation of the theta series by truncated lattice summation with a
//! certified tail bound, plus transformation-based argument reduction.
//!
//! The series runs over all integer `m x g` matrices `A`:
//!
//! ```text
//! Theta(Omega, Z) = sum_A exp(pi i tr(A Omega 'A + 2 A 'Z)).
//! ```
//!
//! A summand's magnitude is `exp(-pi tr(A Y 'A) - 2 pi tr(A 'V))` with
//! `Y = Im Omega`, `V = Im Z`, so the tail over `|A|_F > R` is controlled by
//! `lambda_min(Y)` and `|V|_F` alone. [`truncation_radius`] certifies a
//! radius from that envelope; [`theta_direct`] sums the ball in shell order;
//! [`reduce_point`] walks the point toward a well-conditioned representative
//! so that [`theta`] converges in far fewer terms.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::groups::{self, GeneratorLetter, IntMatrix, JacobiGroupElement};
use crate::linalg::{principal_half_power, ComplexMatrix, RealSymmetricMatrix};
use crate::Result;

use std::f64::consts::PI;

/// Default cap on the number of lattice terms a single evaluation may sum.
pub const DEFAULT_TERM_BUDGET: u64 = 100_000_000;

/// Default cap on reduction moves.
pub const DEFAULT_REDUCTION_STEPS: usize = 64;

/// Inversion trigger: reduce while `lambda_min(Im Omega)` is at or below this.
const INVERSION_TRIGGER: f64 = 0.5;

/// A point `(Omega, Z)` of the Siegel-Jacobi space: `Omega` complex symmetric
/// `g x g` with positive-definite imaginary part, `Z` complex `m x g`.
#[derive(Debug, Clone, PartialEq)]
pub struct SiegelJacobiPoint {
    omega: ComplexMatrix,
    z: ComplexMatrix,
}

impl SiegelJacobiPoint {
    pub fn new(omega: ComplexMatrix, z: ComplexMatrix) -> Result<Self> {
        if !omega.is_square() {
            return Err(Error::InvalidPoint("Omega must be square".into()));
        }
        let g = omega.rows();
        if z.cols() != g {
            return Err(Error::InvalidPoint(format!(
                "Z has {} columns but Omega has degree {g}",
                z.cols()
            )));
        }
        if omega.asymmetry() > 1e-12 * omega.max_abs().max(1.0) {
            return Err(Error::InvalidPoint("Omega is not symmetric".into()));
        }
        let y = RealSymmetricMatrix::symmetrize(g, &omega.imag_part())?;
        if y.min_eigenvalue() <= 0.0 {
            return Err(Error::InvalidPoint("Im Omega is not positive definite".into()));
        }
        Ok(Self { omega, z })
    }

    /// The base point `(i I_g, 0)`.
    pub fn upper_i(g: usize, m: usize) -> Self {
        let mut omega = ComplexMatrix::zeros(g, g);
        for i in 0..g {
            omega.set(i, i, Complex64::new(0.0, 1.0));
        }
        Self::new(omega, ComplexMatrix::zeros(m, g)).expect("base point is valid")
    }

    pub fn g(&self) -> usize {
        self.omega.rows()
    }

    pub fn m(&self) -> usize {
        self.z.rows()
    }

    pub fn omega(&self) -> &ComplexMatrix {
        &self.omega
    }

    pub fn z(&self) -> &ComplexMatrix {
        &self.z
    }

    /// `Im Omega` as an exactly symmetric real matrix.
    pub fn im_omega(&self) -> RealSymmetricMatrix {
        RealSymmetricMatrix::symmetrize(self.g(), &self.omega.imag_part()).expect("finite entries")
    }

    /// `Im Z` promoted to a complex matrix with zero imaginary part.
    pub fn im_z(&self) -> ComplexMatrix {
        ComplexMatrix::from_real(self.m(), self.g(), &self.z.imag_part()).expect("finite entries")
    }

    pub fn min_im_eigenvalue(&self) -> f64 {
        self.im_omega().min_eigenvalue()
    }
}

/// A truncated theta evaluation: the value, a certified bound on the
/// truncation error, and the number of lattice terms summed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThetaValue {
    #[serde(with = "crate::jsonio::complex_pair")]
    pub value: Complex64,
    pub tail_bound: f64,
    pub terms: u64,
}

/// Certified truncation radius for the lattice sum.
///
/// Uses the envelope split `exp(-pi l r^2 + c r) <= exp(-pi l R^2 / 2 + c R)
/// exp(-pi l r^2 / 2)` for `r > R >= c / (pi l)`, where `l = lambda_min(Y)`
/// and `c = 2 pi |V|_F` (Cauchy-Schwarz on `tr(A 'V)`). Summing the second
/// factor over the whole lattice is bounded by a geometric series per axis,
/// so the tail over `|A|_F > R` is at most
/// `S^d exp(-pi l R^2 / 2 + c R)` with `S = 1 + 2 q / (1 - q)`,
/// `q = exp(-pi l / 2)`, `d = m g`. The returned radius is the smallest `R`
/// (up to bisection precision) making that bound smaller than `tol`.
pub fn truncation_radius(y: &RealSymmetricMatrix, v: &ComplexMatrix, tol: f64) -> Result<f64> {
    if tol <= 0.0 {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let lambda = y.min_eigenvalue();
    if lambda <= 0.0 {
        return Err(Error::Domain("Y must be positive definite".into()));
    }
    if v.cols() != y.dim() {
        return Err(Error::DimensionMismatch("V must have g columns".into()));
    }
    let d = (v.rows() * v.cols()) as f64;
    let c = 2.0 * PI * v.frobenius_norm();
    let log_bound = tail_log_bound(lambda, c, d);
    let target = tol.ln();

    let r_min = c / (PI * lambda);
    if log_bound(r_min) < target {
        return Ok(r_min);
    }
    let mut hi = r_min.max(1.0);
    while log_bound(hi) >= target {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Domain("truncation radius does not converge".into()));
        }
    }
    let mut lo = (hi / 2.0).max(r_min);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if log_bound(mid) < target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `log` of the certified tail bound at radius `r`.
fn tail_log_bound(lambda: f64, c: f64, d: f64) -> impl Fn(f64) -> f64 {
    let q = (-PI * lambda / 2.0).exp();
    let per_axis = 1.0 + 2.0 * q / (1.0 - q);
    let ln_s = d * per_axis.ln();
    move |r: f64| ln_s - PI * lambda * r * r / 2.0 + c * r
}

/// Direct evaluation: sums all `A` with `|A|_F <= truncation_radius`,
/// in shells of increasing Frobenius norm (lexicographic inside a shell)
/// for reproducible results.
pub fn theta_direct(p: &SiegelJacobiPoint, tol: f64) -> Result<ThetaValue> {
    theta_direct_with_budget(p, tol, DEFAULT_TERM_BUDGET)
}

pub fn theta_direct_with_budget(p: &SiegelJacobiPoint, tol: f64, budget: u64) -> Result<ThetaValue> {
    let y = p.im_omega();
    let v = p.im_z();
    let radius = truncation_radius(&y, &v, tol)?;
    let d = p.m() * p.g();
    if estimated_ball_count(d, radius) > budget as f64 {
        return Err(Error::BudgetExceeded { budget });
    }
    let omega = p.omega();
    let z = p.z();
    let (m, g) = (p.m(), p.g());
    let (value, terms) = lattice_shell_sum(m, g, radius, budget, &mut |a| {
        (Complex64::new(0.0, PI) * phase_trace(a, m, g, omega, z)).exp()
    })?;
    if !value.re.is_finite() || !value.im.is_finite() {
        let peak = PI * v.frobenius_norm().powi(2) / y.min_eigenvalue();
        return Err(Error::ValueOverflow { log_magnitude: peak });
    }
    let lambda = y.min_eigenvalue();
    let c = 2.0 * PI * v.frobenius_norm();
    let tail_bound = tail_log_bound(lambda, c, d as f64)(radius).exp();
    Ok(ThetaValue { value, tail_bound, terms })
}

/// Volume-based overestimate of the lattice points in a ball of radius `r`.
fn estimated_ball_count(d: usize, r: f64) -> f64 {
    // Unit cubes centered on lattice points inside the ball of radius r all
    // fit in the ball of radius r + sqrt(d)/2, so its volume bounds the count.
    let rr = r + 0.5 * (d as f64).sqrt();
    let half = d as f64 / 2.0;
    // log Gamma(d/2 + 1) via the recursion down to Gamma(1) = 1 or
    // Gamma(1/2) = sqrt(pi).
    let base = if d.is_multiple_of(2) { 1.0 } else { 0.5 };
    let mut log_gamma = if d.is_multiple_of(2) { 0.0 } else { 0.5 * PI.ln() };
    let mut x = half;
    while x >= base - 1e-9 {
        log_gamma += x.ln();
        x -= 1.0;
    }
    let log_vol = half * PI.ln() + d as f64 * rr.max(1.0).ln() - log_gamma;
    if log_vol > 600.0 {
        return f64::INFINITY;
    }
    log_vol.exp().max(1.0)
}

/// Shell-ordered sum of `term(A)` over integer `m x g` matrices with
/// `|A|_F <= radius`: shells of equal squared norm are added in increasing
/// order, terms inside a shell in lexicographic order of the flattened
/// row-major coordinates.
pub(crate) fn lattice_shell_sum(
    m: usize,
    g: usize,
    radius: f64,
    budget: u64,
    term: &mut dyn FnMut(&[i64]) -> Complex64,
) -> Result<(Complex64, u64)> {
    let d = m * g;
    let max_norm_sq = (radius * radius).floor() as i64;
    let coord_bound = radius.floor() as i64;

    let mut shells: BTreeMap<i64, Complex64> = BTreeMap::new();
    let mut coords = vec![0i64; d];
    let mut count: u64 = 0;

    // Depth-first over coordinates in lexicographic order; each leaf lands in
    // the shell keyed by its squared norm, so shells accumulate their terms in
    // lexicographic order while the final fold runs shells small-to-large.
    enumerate(
        &mut coords,
        0,
        max_norm_sq,
        coord_bound,
        &mut |a: &[i64], norm_sq: i64| -> Result<()> {
            count += 1;
            if count > budget {
                return Err(Error::BudgetExceeded { budget });
            }
            *shells.entry(norm_sq).or_insert(Complex64::new(0.0, 0.0)) += term(a);
            Ok(())
        },
    )?;

    let mut value = Complex64::new(0.0, 0.0);
    for (_norm, shell_sum) in shells {
        value += shell_sum;
    }
    Ok((value, count))
}

fn enumerate(
    coords: &mut [i64],
    idx: usize,
    remaining: i64,
    coord_bound: i64,
    visit: &mut impl FnMut(&[i64], i64) -> Result<()>,
) -> Result<()> {
    if idx == coords.len() {
        let norm_sq: i64 = coords.iter().map(|&x| x * x).sum();
        return visit(coords, norm_sq);
    }
    let bound = ((remaining as f64).sqrt().floor() as i64).min(coord_bound);
    for v in -bound..=bound {
        coords[idx] = v;
        enumerate(coords, idx + 1, remaining - v * v, coord_bound, visit)?;
    }
    coords[idx] = 0;
    Ok(())
}

/// `tr(A Omega 'A + 2 A 'Z)` for an integer matrix `A` given as a flat
/// row-major `m x g` slice.
fn phase_trace(a: &[i64], m: usize, g: usize, omega: &ComplexMatrix, z: &ComplexMatrix) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..m {
        let row = &a[i * g..(i + 1) * g];
        for j in 0..g {
            let aij = row[j] as f64;
            if aij == 0.0 {
                continue;
            }
            // tr(A Omega 'A) term: sum_k a_ij Omega_jk a_ik.
            for (k, &aik) in row.iter().enumerate() {
                if aik != 0 {
                    acc += omega.get(j, k) * (aij * aik as f64);
                }
            }
            // 2 tr(A 'Z) term: entries pair up elementwise.
            acc += z.get(i, j) * (2.0 * aij);
        }
    }
    acc
}

/// One move of the reduction loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionStep {
    /// `Omega -> Omega - B` with `B` symmetric integer, even diagonal.
    TranslateOmega { b: IntMatrix },
    /// `Z -> Z + lambda Omega + mu`.
    ShiftZ { lambda: IntMatrix, mu: IntMatrix },
    /// `(Omega, Z) -> (-Omega^{-1}, Z Omega^{-1})`.
    Invert,
}

/// Outcome of argument reduction.
///
/// The contract is `Theta(original) = multiplier * Theta(reduced_point)`;
/// `power_of_det` records the `det(Omega/i)^{-m/2}` factor contributed by
/// each inversion, in the order applied. `log_multiplier` carries the same
/// information in log form and stays finite even when `multiplier` overflows.
#[derive(Debug, Clone)]
pub struct ReductionTrace {
    pub reduced_point: SiegelJacobiPoint,
    pub multiplier: Complex64,
    pub log_multiplier: Complex64,
    pub power_of_det: Vec<Complex64>,
    pub steps: Vec<ReductionStep>,
    pub converged: bool,
}

impl ReductionTrace {
    /// Undo the recorded moves: applying the inverse of the accumulated group
    /// element to `reduced_point` recovers the original point.
    pub fn replay(&self) -> Result<SiegelJacobiPoint> {
        let g = self.reduced_point.g();
        let m = self.reduced_point.m();
        let mut total = JacobiGroupElement::identity(g, m);
        for step in &self.steps {
            let el = step_element(step, g, m)?;
            total = groups::jacobi_mul(&el, &total)?;
        }
        groups::act(&groups::jacobi_inverse(&total)?, &self.reduced_point)
    }
}

fn step_element(step: &ReductionStep, g: usize, m: usize) -> Result<JacobiGroupElement> {
    match step {
        ReductionStep::TranslateOmega { b } => groups::make_generator(&GeneratorLetter::T { b: b.neg() }, g, m),
        ReductionStep::ShiftZ { lambda, mu } => {
            // kappa = -mu 'lambda makes kappa + mu 'lambda = 0 symmetric; the
            // central component never touches the action.
            let kappa = mu.mul(&lambda.transpose())?.neg();
            groups::make_generator(
                &GeneratorLetter::S { lambda: lambda.clone(), mu: mu.clone(), kappa },
                g,
                m,
            )
        }
        ReductionStep::Invert => groups::make_generator(&GeneratorLetter::Sigma, g, m),
    }
}

fn round_ties_toward_zero(x: f64) -> i64 {
    let r = x.round();
    if (r - x).abs() == 0.5 {
        x.trunc() as i64
    } else {
        r as i64
    }
}

/// Argument reduction by the three transformation moves.
///
/// Repeatedly (a) translates `Re Omega` by the nearest symmetric integer
/// matrix with even diagonal (off-diagonal entries round to the nearest
/// integer, diagonal to the nearest even integer, ties toward zero),
/// (b) shifts `Z` so its real lattice coordinates with respect to
/// `Z^g Omega + Z^g` land in `[-1/2, 1/2)` rowwise, and (c) inverts while
/// `lambda_min(Im Omega) <= 0.5` and the inversion strictly improves it
/// (the improvement guard prevents two-cycles near `|Re Omega| ~ 1`).
/// Stops when no move applies or `max_steps` moves were taken; an exhausted
/// cap returns the best trace so far flagged unconverged.
pub fn reduce_point(p: &SiegelJacobiPoint, max_steps: usize) -> Result<ReductionTrace> {
    let g = p.g();
    let m = p.m();
    let mut omega = p.omega().symmetrized();
    let mut z = p.z().clone();
    let mut steps: Vec<ReductionStep> = Vec::new();
    let mut power_of_det: Vec<Complex64> = Vec::new();
    let mut log_multiplier = Complex64::new(0.0, 0.0);
    let mut converged = false;

    'outer: loop {
        let mut moved = false;

        // (a) translate Re Omega.
        let mut b = IntMatrix::zeros(g, g);
        for i in 0..g {
            for j in 0..g {
                let re = 0.5 * (omega.get(i, j).re + omega.get(j, i).re);
                let target = if i == j { 2 * round_ties_toward_zero(re / 2.0) } else { round_ties_toward_zero(re) };
                b.set(i, j, target);
            }
        }
        if !b.is_zero() {
            if steps.len() >= max_steps {
                break 'outer;
            }
            omega = omega.sub(&b.to_complex()).symmetrized();
            steps.push(ReductionStep::TranslateOmega { b });
            moved = true;
        }

        // (b) shift Z toward the fundamental cell of Z^g Omega + Z^g.
        // Rowwise Z = p Omega + q with real p, q: p = (Im Z) Y^{-1} and
        // q = Re Z - p Re Omega. The shift Z + lambda Omega + mu moves
        // (p, q) to (p + lambda, q + mu), so rounding each coordinate into
        // [-1/2, 1/2) fixes lambda and mu independently.
        let y = RealSymmetricMatrix::symmetrize(g, &omega.imag_part())?;
        let y_inv = y.to_complex().inverse()?;
        let p_coord = ComplexMatrix::from_real(m, g, &z.imag_part())?.mul(&y_inv);
        let mut lambda = IntMatrix::zeros(m, g);
        let mut any_shift = false;
        for i in 0..m {
            for j in 0..g {
                let r = -round_ties_toward_zero(p_coord.get(i, j).re);
                lambda.set(i, j, r);
                any_shift |= r != 0;
            }
        }
        let re_omega = ComplexMatrix::from_real(g, g, &omega.real_part())?;
        let q_coord = ComplexMatrix::from_real(m, g, &z.real_part())?.sub(&p_coord.mul(&re_omega));
        let lam_c = lambda.to_complex();
        let mut mu = IntMatrix::zeros(m, g);
        for i in 0..m {
            for j in 0..g {
                let r = -round_ties_toward_zero(q_coord.get(i, j).re);
                mu.set(i, j, r);
                any_shift |= r != 0;
            }
        }
        if any_shift {
            if steps.len() >= max_steps {
                break 'outer;
            }
            // Theta(current) = exp(+pi i tr(l Omega 'l + 2 l 'Z)) Theta(shifted).
            let lt = lam_c.transpose();
            let trace = lam_c.mul(&omega).mul(&lt).add(&lam_c.mul(&z.transpose()).scale(Complex64::new(2.0, 0.0))).trace();
            log_multiplier += Complex64::new(0.0, PI) * trace;
            z = z.add(&lam_c.mul(&omega)).add(&mu.to_complex());
            steps.push(ReductionStep::ShiftZ { lambda, mu });
            moved = true;
        }

        // (c) invert while the smallest eigenvalue of Im Omega is small and
        // inversion actually helps.
        let y = RealSymmetricMatrix::symmetrize(g, &omega.imag_part())?;
        let lambda_min = y.min_eigenvalue();
        if lambda_min <= INVERSION_TRIGGER {
            let omega_inv = omega.inverse()?;
            let candidate = omega_inv.neg().symmetrized();
            let cand_min = RealSymmetricMatrix::symmetrize(g, &candidate.imag_part())?.min_eigenvalue();
            if cand_min > lambda_min * (1.0 + 1e-12) {
                if steps.len() >= max_steps {
                    break 'outer;
                }
                // Theta(current) = det(Omega/i)^{-m/2} exp(-pi i tr(Z Omega^{-1} 'Z)) Theta(new).
                let trace = z.mul(&omega_inv).mul(&z.transpose()).trace();
                let sqrt_det = principal_half_power(omega.scale(Complex64::new(0.0, -1.0)).det(), 1)?;
                log_multiplier += Complex64::new(0.0, -PI) * trace - sqrt_det.ln() * (m as f64);
                power_of_det.push(principal_half_power(omega.scale(Complex64::new(0.0, -1.0)).det(), -(m as i32))?);
                z = z.mul(&omega_inv);
                omega = candidate;
                steps.push(ReductionStep::Invert);
                continue 'outer;
            }
        }

        if !moved {
            converged = true;
            break;
        }
    }

    let reduced_point = SiegelJacobiPoint::new(omega, z)?;
    Ok(ReductionTrace {
        reduced_point,
        multiplier: log_multiplier.exp(),
        log_multiplier,
        power_of_det,
        steps,
        converged,
    })
}

/// Accelerated evaluation: reduce, evaluate directly at the reduced point,
/// multiply the prefactor back. Falls back to direct evaluation when the
/// reduction hits its step cap.
pub fn theta(p: &SiegelJacobiPoint, tol: f64) -> Result<ThetaValue> {
    Ok(theta_with_trace(p, tol)?.0)
}

/// As [`theta`], also returning the reduction trace that was used.
pub fn theta_with_trace(p: &SiegelJacobiPoint, tol: f64) -> Result<(ThetaValue, ReductionTrace)> {
    if tol <= 0.0 {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let trace = reduce_point(p, DEFAULT_REDUCTION_STEPS)?;
    if !trace.converged {
        let direct = theta_direct(p, tol)?;
        return Ok((direct, trace));
    }
    let mult_abs = trace.log_multiplier.re.exp();
    if !mult_abs.is_finite() {
        return Err(Error::ValueOverflow { log_magnitude: trace.log_multiplier.re });
    }
    let tol_inner = (tol / mult_abs).clamp(1e-280, 1e280);
    let inner = theta_direct(&trace.reduced_point, tol_inner)?;
    let value = trace.multiplier * inner.value;
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::ValueOverflow { log_magnitude: trace.log_multiplier.re + inner.value.norm().ln() });
    }
    let tail_bound = mult_abs * inner.tail_bound;
    Ok((ThetaValue { value, tail_bound, terms: inner.terms }, trace))
}

/// Logarithmic evaluation used by the transformation-law machinery.
///
/// Returns `log Theta(p)` (principal log of the reduced value plus the exact
/// log of the reduction prefactor) together with a bound on the relative
/// truncation error of the underlying direct sum. Stays finite even where
/// `Theta(p)` itself overflows `f64`.
#[derive(Debug, Clone)]
pub struct LogTheta {
    pub log_value: Complex64,
    pub rel_bound: f64,
    pub terms: u64,
    pub reduced_magnitude: f64,
}

/// Absolute defect of the inversion identity
/// `Theta(-Omega^{-1}, Z Omega^{-1}) = exp(pi i tr(Z Omega^{-1} 'Z))
/// det(Omega/i)^{m/2} Theta(Omega, Z)` with principal half powers.
pub fn inversion_defect(p: &SiegelJacobiPoint, tol: f64) -> Result<f64> {
    let omega_inv = p.omega().inverse()?;
    let transformed = SiegelJacobiPoint::new(omega_inv.neg().symmetrized(), p.z().mul(&omega_inv))?;
    let lhs = theta(&transformed, tol)?.value;
    let trace = p.z().mul(&omega_inv).mul(&p.z().transpose()).trace();
    let det_pow = principal_half_power(p.omega().scale(Complex64::new(0.0, -1.0)).det(), p.m() as i32)?;
    let rhs = (Complex64::new(0.0, PI) * trace).exp() * det_pow * theta(p, tol)?.value;
    Ok((lhs - rhs).norm())
}

pub fn theta_log(p: &SiegelJacobiPoint, inner_tol: f64) -> Result<LogTheta> {
    if inner_tol <= 0.0 {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let trace = reduce_point(p, DEFAULT_REDUCTION_STEPS)?;
    let base = if trace.converged { trace.reduced_point.clone() } else { p.clone() };
    let log_prefix = if trace.converged { trace.log_multiplier } else { Complex64::new(0.0, 0.0) };
    let inner = theta_direct(&base, inner_tol)?;
    let mag = inner.value.norm();
    if mag == 0.0 {
        return Err(Error::ThetaTooSmall { magnitude: 0.0 });
    }
    let rel_bound = inner.tail_bound / (mag - inner.tail_bound).max(1e-300);
    Ok(LogTheta {
        log_value: log_prefix + inner.value.ln(),
        rel_bound,
        terms: inner.terms,
        reduced_magnitude: mag,
    })
}
