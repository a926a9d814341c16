//! Seeded samplers for verification points.
//!
//! All randomness flows through a caller-supplied generator, so every suite
//! run is reproducible from its seed.

use num_complex::Complex64;
use rand::Rng;

use crate::linalg::{ComplexMatrix, RealSymmetricMatrix};
use crate::theta::SiegelJacobiPoint;

/// Random point with `lambda_min(Im Omega) >= lambda_floor` guaranteed:
/// `Im Omega = A'A + lambda_floor I`, `Re Omega` symmetric in `[-1, 1]`,
/// `Z` entries in `[-0.8, 0.8]` both parts.
pub fn random_point<R: Rng>(rng: &mut R, g: usize, m: usize, lambda_floor: f64) -> SiegelJacobiPoint {
    random_point_bounded(rng, g, m, lambda_floor, 0.8)
}

/// As [`random_point`] with an explicit bound on the `Z` entries.
pub fn random_point_bounded<R: Rng>(
    rng: &mut R,
    g: usize,
    m: usize,
    lambda_floor: f64,
    z_bound: f64,
) -> SiegelJacobiPoint {
    let mut a = vec![0.0f64; g * g];
    for v in &mut a {
        *v = rng.gen_range(-0.7..0.7);
    }
    let mut omega = ComplexMatrix::zeros(g, g);
    for i in 0..g {
        for j in i..g {
            let re = rng.gen_range(-1.0..1.0);
            // (A'A)_{ij} + floor on the diagonal.
            let mut im = 0.0;
            for k in 0..g {
                im += a[k * g + i] * a[k * g + j];
            }
            if i == j {
                im += lambda_floor;
            }
            omega.set(i, j, Complex64::new(re, im));
            omega.set(j, i, Complex64::new(re, im));
        }
    }
    let mut z = ComplexMatrix::zeros(m, g);
    for i in 0..m {
        for j in 0..g {
            z.set(i, j, Complex64::new(rng.gen_range(-z_bound..z_bound), rng.gen_range(-z_bound..z_bound)));
        }
    }
    SiegelJacobiPoint::new(omega, z).expect("construction keeps Im Omega positive definite")
}

/// Near-degenerate point with `lambda_min(Im Omega)` equal to `lambda_target`
/// (up to eigenvalue solver precision).
///
/// The point is a scaled-down copy of a well-conditioned one, so a single
/// inversion restores good conditioning. `Im Z` scales like
/// `sqrt(lambda_target)`: large enough that the unreduced lattice sum pays
/// for the shift term, small enough that the peak summand
/// `exp(pi |Im Z|^2 / lambda)` stays far from overflow and rounding noise
/// stays below the certified tails.
pub fn near_degenerate_point<R: Rng>(rng: &mut R, g: usize, m: usize, lambda_target: f64) -> SiegelJacobiPoint {
    // Base shape with lambda_min normalized to 1.
    let mut a = vec![0.0f64; g * g];
    for v in &mut a {
        *v = rng.gen_range(-0.5..0.5);
    }
    let mut y0 = vec![0.0f64; g * g];
    for i in 0..g {
        for j in 0..g {
            let mut acc = 0.0;
            for k in 0..g {
                acc += a[k * g + i] * a[k * g + j];
            }
            y0[i * g + j] = acc + if i == j { 1.0 } else { 0.0 };
        }
    }
    let min0 = RealSymmetricMatrix::symmetrize(g, &y0).expect("finite").min_eigenvalue();
    let scale = lambda_target / min0;
    let mut omega = ComplexMatrix::zeros(g, g);
    for i in 0..g {
        for j in i..g {
            let re = rng.gen_range(-0.3..0.3) * scale;
            let im = y0[i * g + j] * scale;
            omega.set(i, j, Complex64::new(re, im));
            omega.set(j, i, Complex64::new(re, im));
        }
    }
    let im_scale = lambda_target.sqrt() / ((m * g) as f64).sqrt();
    let mut z = ComplexMatrix::zeros(m, g);
    for i in 0..m {
        for j in 0..g {
            let im = rng.gen_range(0.95..1.42) * im_scale;
            z.set(i, j, Complex64::new(rng.gen_range(-0.5..0.5), im));
        }
    }
    SiegelJacobiPoint::new(omega, z).expect("scaled point stays valid")
}
