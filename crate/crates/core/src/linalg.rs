//! Minimal dense complex/real matrix arithmetic sized for small degrees.
//!
//! Everything here targets matrices of dimension at most 8 (the library is
//! used with degrees g, m <= 4), so plain dense LU and cyclic Jacobi
//! iterations are used instead of an external linear-algebra dependency.
//! Complex entries are `(re, im)` double pairs throughout; all tolerances
//! downstream are 1e-9 or looser, so no extended precision is needed.

use num_complex::Complex64;

use crate::error::Error;
use crate::Result;

/// Relative pivot threshold below which LU factorization reports singularity.
pub const SINGULARITY_THRESHOLD: f64 = 1e-12;

const MAX_DIM: usize = 8;

/// Principal half-integer power `z^(k/2)`.
///
/// The square root branch is fixed by `-pi/2 < arg(sqrt(z)) <= pi/2`, i.e.
/// `sqrt` maps onto the closed right half plane with the positive imaginary
/// axis included, and `z^(k/2) = sqrt(z)^k`. A negative real `z` therefore
/// has `sqrt(z) = i sqrt(|z|)` regardless of the sign of its zero imaginary
/// part.
pub fn principal_half_power(z: Complex64, k: i32) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        if k < 0 {
            return Err(Error::Domain("0 cannot be raised to a negative half power".into()));
        }
        return Ok(if k == 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) });
    }
    // Flush -0.0 imaginary parts so the branch cut lands on arg = +pi/2.
    let zn = if z.im == 0.0 { Complex64::new(z.re, 0.0) } else { z };
    let w = zn.sqrt();
    Ok(w.powi(k))
}

/// Dense complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Build from row-major entries. Fails on shape mismatch or non-finite entries.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        if entries.iter().any(|e| !e.re.is_finite() || !e.im.is_finite()) {
            return Err(Error::Domain("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_entries(r, c, rows.iter().flatten().copied().collect())
    }

    /// Real matrix promoted to complex.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::from_entries(rows, cols, entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix shape mismatch");
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix shape mismatch");
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.set(i, j, out.get(i, j) + a * other.get(k, j));
                }
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let entries = self.entries.iter().map(|a| a * s).collect();
        Self { rows: self.rows, cols: self.cols, entries }
    }

    pub fn neg(&self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    /// Trace of a square matrix.
    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn real_part(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.re).collect()
    }

    pub fn imag_part(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.im).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry-wise deviation from symmetry.
    pub fn asymmetry(&self) -> f64 {
        assert!(self.is_square());
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i)).norm());
            }
        }
        worst
    }

    /// Replace the matrix by its symmetric part `(M + 'M)/2`.
    pub fn symmetrized(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let avg = (self.get(i, j) + self.get(j, i)) * Complex64::new(0.5, 0.0);
                out.set(i, j, avg);
            }
        }
        out
    }

    /// Determinant via LU with partial pivoting. Singular matrices return ~0.
    pub fn det(&self) -> Complex64 {
        assert!(self.is_square(), "determinant of a non-square matrix");
        assert!(self.rows <= MAX_DIM, "dimension above the supported maximum");
        let n = self.rows;
        if n == 0 {
            return Complex64::new(1.0, 0.0);
        }
        let mut lu = self.entries.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_mag = lu[col * n + col].norm();
            for r in (col + 1)..n {
                let mag = lu[r * n + col].norm();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = r;
                }
            }
            if pivot_mag == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot_row != col {
                for j in 0..n {
                    lu.swap(col * n + j, pivot_row * n + j);
                }
                det = -det;
            }
            let pivot = lu[col * n + col];
            det *= pivot;
            for r in (col + 1)..n {
                let factor = lu[r * n + col] / pivot;
                lu[r * n + col] = factor;
                for j in (col + 1)..n {
                    let sub = factor * lu[col * n + j];
                    lu[r * n + j] -= sub;
                }
            }
        }
        det
    }

    /// Inverse via LU with partial pivoting.
    ///
    /// Reports `Error::Singular` with the offending pivot magnitude when the
    /// smallest pivot falls below `SINGULARITY_THRESHOLD` relative to the
    /// largest row norm.
    pub fn inverse(&self) -> Result<Self> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        assert!(self.rows <= MAX_DIM, "dimension above the supported maximum");
        let n = self.rows;
        let scale = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).norm()).sum::<f64>())
            .fold(0.0f64, f64::max)
            .max(1e-300);
        let mut lu = self.entries.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_mag = lu[col * n + col].norm();
            for r in (col + 1)..n {
                let mag = lu[r * n + col].norm();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = r;
                }
            }
            if pivot_mag <= SINGULARITY_THRESHOLD * scale {
                return Err(Error::Singular { pivot: pivot_mag });
            }
            if pivot_row != col {
                for j in 0..n {
                    lu.swap(col * n + j, pivot_row * n + j);
                }
                perm.swap(col, pivot_row);
            }
            let pivot = lu[col * n + col];
            for r in (col + 1)..n {
                let factor = lu[r * n + col] / pivot;
                lu[r * n + col] = factor;
                for j in (col + 1)..n {
                    let sub = factor * lu[col * n + j];
                    lu[r * n + j] -= sub;
                }
            }
        }
        // Solve L U x = e_k column by column.
        let mut inv = Self::zeros(n, n);
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for k in 0..n {
            for i in 0..n {
                x[i] = if perm[i] == k { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
            }
            for i in 1..n {
                for j in 0..i {
                    let sub = lu[i * n + j] * x[j];
                    x[i] -= sub;
                }
            }
            for i in (0..n).rev() {
                for j in (i + 1)..n {
                    let sub = lu[i * n + j] * x[j];
                    x[i] -= sub;
                }
                x[i] /= lu[i * n + i];
            }
            for (i, xi) in x.iter().enumerate() {
                inv.set(i, k, *xi);
            }
        }
        Ok(inv)
    }
}

/// Dense real symmetric matrix; symmetry holds exactly by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSymmetricMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl RealSymmetricMatrix {
    /// Build from full row-major entries, requiring exact symmetry.
    pub fn from_entries(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "{dim}x{dim} matrix needs {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("matrix entries must be finite".into()));
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if entries[i * dim + j] != entries[j * dim + i] {
                    return Err(Error::Domain(format!("entries ({i},{j}) and ({j},{i}) differ")));
                }
            }
        }
        Ok(Self { dim, entries })
    }

    /// Build from arbitrary entries by exact symmetrization `(M + 'M)/2`.
    pub fn symmetrize(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch("entry count".into()));
        }
        let mut sym = entries.to_vec();
        for i in 0..dim {
            for j in 0..dim {
                let avg = 0.5 * (entries[i * dim + j] + entries[j * dim + i]);
                sym[i * dim + j] = avg;
            }
        }
        Self::from_entries(dim, sym)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix::from_real(self.dim, self.dim, &self.entries).expect("finite by invariant")
    }

    /// Smallest eigenvalue via cyclic Jacobi rotations.
    ///
    /// Sweeps run until the off-diagonal Frobenius mass drops below 1e-12
    /// relative to the matrix norm (or 1e-300 absolute for the zero matrix).
    pub fn min_eigenvalue(&self) -> f64 {
        assert!(self.dim <= MAX_DIM, "dimension above the supported maximum");
        let n = self.dim;
        if n == 0 {
            return 0.0;
        }
        if n == 1 {
            return self.entries[0];
        }
        let mut a = self.entries.clone();
        let norm = self.entries.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
        let tol = 1e-12 * norm;
        for _sweep in 0..64 {
            let mut off = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    off += 2.0 * a[i * n + j] * a[i * n + j];
                }
            }
            if off.sqrt() <= tol {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[p * n + q];
                    if apq.abs() <= tol / (n * n) as f64 {
                        continue;
                    }
                    let app = a[p * n + p];
                    let aqq = a[q * n + q];
                    let theta = 0.5 * (aqq - app) / apq;
                    let t = if theta >= 0.0 {
                        1.0 / (theta + (1.0 + theta * theta).sqrt())
                    } else {
                        -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        a[k * n + p] = c * akp - s * akq;
                        a[k * n + q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[p * n + k];
                        let aqk = a[q * n + k];
                        a[p * n + k] = c * apk - s * aqk;
                        a[q * n + k] = s * apk + c * aqk;
                    }
                }
            }
        }
        (0..n).map(|i| a[i * n + i]).fold(f64::INFINITY, f64::min)
    }
}
