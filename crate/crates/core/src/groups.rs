//! Exact integer arithmetic for the symplectic group, the Heisenberg group
//! and the Jacobi modular group, plus the holomorphic action on the
//! Siegel-Jacobi space.
//!
//! All group arithmetic is exact over `i64` with checked operations; an
//! overflow surfaces as [`Error::IntegerOverflow`] instead of wrapping.
//! Elements are stored verbatim: in particular the Heisenberg `kappa`
//! component is never normalized (its parity feeds the sign
//! `exp(-pi i tr(kappa + mu 'lambda)) = +-1` of the automorphic factor).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::linalg::ComplexMatrix;
use crate::theta::SiegelJacobiPoint;
use crate::Result;

/// Dense integer matrix with checked 64-bit arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<i64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} integer matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_entries(r, c, rows.iter().flatten().copied().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j)).collect()).collect()
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

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("integer matrix addition".into()));
        }
        let mut entries = Vec::with_capacity(self.entries.len());
        for (a, b) in self.entries.iter().zip(&other.entries) {
            entries.push(a.checked_add(*b).ok_or(Error::IntegerOverflow)?);
        }
        Ok(Self { rows: self.rows, cols: self.cols, entries })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|x| -x).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch("integer matrix product".into()));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: i64 = 0;
                for k in 0..self.cols {
                    let term = self.get(i, k).checked_mul(other.get(k, j)).ok_or(Error::IntegerOverflow)?;
                    acc = acc.checked_add(term).ok_or(Error::IntegerOverflow)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn has_even_diagonal(&self) -> bool {
        (0..self.rows.min(self.cols)).all(|i| self.get(i, i) % 2 == 0)
    }

    pub fn trace(&self) -> i64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Exact determinant by cofactor expansion (small dimensions only).
    pub fn det(&self) -> Result<i64> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        match n {
            0 => Ok(1),
            1 => Ok(self.get(0, 0)),
            _ => {
                let mut acc: i64 = 0;
                for j in 0..n {
                    let a = self.get(0, j);
                    if a == 0 {
                        continue;
                    }
                    let minor = self.minor(0, j);
                    let term = a.checked_mul(minor.det()?).ok_or(Error::IntegerOverflow)?;
                    let signed = if j % 2 == 0 { term } else { -term };
                    acc = acc.checked_add(signed).ok_or(Error::IntegerOverflow)?;
                }
                Ok(acc)
            }
        }
    }

    fn minor(&self, row: usize, col: usize) -> Self {
        let n = self.rows;
        let mut out = Self::zeros(n - 1, n - 1);
        let mut r = 0;
        for i in 0..n {
            if i == row {
                continue;
            }
            let mut c = 0;
            for j in 0..n {
                if j == col {
                    continue;
                }
                out.set(r, c, self.get(i, j));
                c += 1;
            }
            r += 1;
        }
        out
    }

    /// Exact inverse of a unimodular matrix (det = +-1) via the adjugate.
    pub fn unimodular_inverse(&self) -> Result<Self> {
        let n = self.rows;
        let det = self.det()?;
        if det != 1 && det != -1 {
            return Err(Error::InvalidElement(format!("matrix has determinant {det}, not +-1")));
        }
        let mut adj = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let cof = self.minor(i, j).det()?;
                let signed = if (i + j) % 2 == 0 { cof } else { -cof };
                adj.set(j, i, signed.checked_mul(det).ok_or(Error::IntegerOverflow)?);
            }
        }
        Ok(adj)
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix::from_entries(
            self.rows,
            self.cols,
            self.entries.iter().map(|&x| Complex64::new(x as f64, 0.0)).collect(),
        )
        .expect("integer entries are finite")
    }
}

/// The standard symplectic form matrix `J = [[0, I], [-I, 0]]`.
pub fn symplectic_form(g: usize) -> IntMatrix {
    let mut j = IntMatrix::zeros(2 * g, 2 * g);
    for i in 0..g {
        j.set(i, g + i, 1);
        j.set(g + i, i, -1);
    }
    j
}

/// Exact check of `'M J M = J` for an integer matrix of even dimension.
pub fn is_symplectic(m: &IntMatrix) -> bool {
    if m.rows() != m.cols() || !m.rows().is_multiple_of(2) {
        return false;
    }
    let g = m.rows() / 2;
    let j = symplectic_form(g);
    match m.transpose().mul(&j).and_then(|t| t.mul(m)) {
        Ok(prod) => prod == j,
        Err(_) => false,
    }
}

/// Integer symplectic matrix stored as blocks `[[A, B], [C, D]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticElement {
    g: usize,
    a: IntMatrix,
    b: IntMatrix,
    c: IntMatrix,
    d: IntMatrix,
}

impl SymplecticElement {
    pub fn identity(g: usize) -> Self {
        Self {
            g,
            a: IntMatrix::identity(g),
            b: IntMatrix::zeros(g, g),
            c: IntMatrix::zeros(g, g),
            d: IntMatrix::identity(g),
        }
    }

    pub fn from_matrix(m: &IntMatrix) -> Result<Self> {
        if m.rows() != m.cols() || !m.rows().is_multiple_of(2) {
            return Err(Error::DimensionMismatch("symplectic matrices have even square dimension".into()));
        }
        if !is_symplectic(m) {
            return Err(Error::InvalidElement("matrix does not preserve the symplectic form".into()));
        }
        let g = m.rows() / 2;
        let block = |ri: usize, ci: usize| {
            let mut out = IntMatrix::zeros(g, g);
            for i in 0..g {
                for j in 0..g {
                    out.set(i, j, m.get(ri * g + i, ci * g + j));
                }
            }
            out
        };
        Ok(Self { g, a: block(0, 0), b: block(0, 1), c: block(1, 0), d: block(1, 1) })
    }

    pub fn from_blocks(a: IntMatrix, b: IntMatrix, c: IntMatrix, d: IntMatrix) -> Result<Self> {
        let g = a.rows();
        let mut m = IntMatrix::zeros(2 * g, 2 * g);
        for (bi, bj, blk) in [(0, 0, &a), (0, 1, &b), (1, 0, &c), (1, 1, &d)] {
            if blk.rows() != g || blk.cols() != g {
                return Err(Error::DimensionMismatch("symplectic blocks must be g x g".into()));
            }
            for i in 0..g {
                for j in 0..g {
                    m.set(bi * g + i, bj * g + j, blk.get(i, j));
                }
            }
        }
        Self::from_matrix(&m)
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn block_a(&self) -> &IntMatrix {
        &self.a
    }

    pub fn block_b(&self) -> &IntMatrix {
        &self.b
    }

    pub fn block_c(&self) -> &IntMatrix {
        &self.c
    }

    pub fn block_d(&self) -> &IntMatrix {
        &self.d
    }

    pub fn to_matrix(&self) -> IntMatrix {
        let g = self.g;
        let mut m = IntMatrix::zeros(2 * g, 2 * g);
        for (bi, bj, blk) in [(0, 0, &self.a), (0, 1, &self.b), (1, 0, &self.c), (1, 1, &self.d)] {
            for i in 0..g {
                for j in 0..g {
                    m.set(bi * g + i, bj * g + j, blk.get(i, j));
                }
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.g != other.g {
            return Err(Error::DimensionMismatch("symplectic degree mismatch".into()));
        }
        let a = self.a.mul(&other.a)?.add(&self.b.mul(&other.c)?)?;
        let b = self.a.mul(&other.b)?.add(&self.b.mul(&other.d)?)?;
        let c = self.c.mul(&other.a)?.add(&self.d.mul(&other.c)?)?;
        let d = self.c.mul(&other.b)?.add(&self.d.mul(&other.d)?)?;
        Ok(Self { g: self.g, a, b, c, d })
    }

    /// Exact symplectic inverse `[['D, -'B], [-'C, 'A]]`.
    pub fn inverse(&self) -> Self {
        Self {
            g: self.g,
            a: self.d.transpose(),
            b: self.b.transpose().neg(),
            c: self.c.transpose().neg(),
            d: self.a.transpose(),
        }
    }

    /// Theta-group membership: the diagonals of `'A C` and `'B D` are even.
    pub fn is_theta_element(&self) -> bool {
        let tac = self.a.transpose().mul(&self.c);
        let tbd = self.b.transpose().mul(&self.d);
        match (tac, tbd) {
            (Ok(tac), Ok(tbd)) => tac.has_even_diagonal() && tbd.has_even_diagonal(),
            _ => false,
        }
    }
}

/// Heisenberg group element `(lambda, mu; kappa)` with integer matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeisenbergElement {
    lambda: IntMatrix,
    mu: IntMatrix,
    kappa: IntMatrix,
}

impl HeisenbergElement {
    /// Validates shapes and the defining invariant: `kappa + mu 'lambda` symmetric.
    pub fn new(lambda: IntMatrix, mu: IntMatrix, kappa: IntMatrix) -> Result<Self> {
        let (m, g) = (lambda.rows(), lambda.cols());
        if mu.rows() != m || mu.cols() != g {
            return Err(Error::DimensionMismatch("lambda and mu must both be m x g".into()));
        }
        if kappa.rows() != m || kappa.cols() != m {
            return Err(Error::DimensionMismatch("kappa must be m x m".into()));
        }
        let check = kappa.add(&mu.mul(&lambda.transpose())?)?;
        if !check.is_symmetric() {
            return Err(Error::InvalidElement("kappa + mu 'lambda is not symmetric".into()));
        }
        Ok(Self { lambda, mu, kappa })
    }

    pub fn identity(g: usize, m: usize) -> Self {
        Self {
            lambda: IntMatrix::zeros(m, g),
            mu: IntMatrix::zeros(m, g),
            kappa: IntMatrix::zeros(m, m),
        }
    }

    pub fn g(&self) -> usize {
        self.lambda.cols()
    }

    pub fn m(&self) -> usize {
        self.lambda.rows()
    }

    pub fn lambda(&self) -> &IntMatrix {
        &self.lambda
    }

    pub fn mu(&self) -> &IntMatrix {
        &self.mu
    }

    pub fn kappa(&self) -> &IntMatrix {
        &self.kappa
    }

    /// Parity of `tr(kappa + mu 'lambda)`; the automorphic factor carries
    /// the exact sign `(-1)^parity`.
    pub fn kappa_trace_parity(&self) -> Result<i64> {
        let t = self.kappa.add(&self.mu.mul(&self.lambda.transpose())?)?.trace();
        Ok(t.rem_euclid(2))
    }
}

/// Heisenberg multiplication
/// `(l, u; k) o (l', u'; k') = (l + l', u + u'; k + k' + l 'u' - u 'l')`.
pub fn heisenberg_mul(x: &HeisenbergElement, y: &HeisenbergElement) -> Result<HeisenbergElement> {
    if x.g() != y.g() || x.m() != y.m() {
        return Err(Error::DimensionMismatch("Heisenberg degree mismatch".into()));
    }
    let lambda = x.lambda.add(&y.lambda)?;
    let mu = x.mu.add(&y.mu)?;
    let twist = x.lambda.mul(&y.mu.transpose())?.sub(&x.mu.mul(&y.lambda.transpose())?)?;
    let kappa = x.kappa.add(&y.kappa)?.add(&twist)?;
    HeisenbergElement::new(lambda, mu, kappa)
}

/// Element of the Jacobi modular group: a symplectic part and a Heisenberg part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobiGroupElement {
    gamma: SymplecticElement,
    h: HeisenbergElement,
}

impl JacobiGroupElement {
    pub fn new(gamma: SymplecticElement, h: HeisenbergElement) -> Result<Self> {
        if gamma.g() != h.g() {
            return Err(Error::DimensionMismatch("symplectic and Heisenberg degrees differ".into()));
        }
        Ok(Self { gamma, h })
    }

    pub fn identity(g: usize, m: usize) -> Self {
        Self { gamma: SymplecticElement::identity(g), h: HeisenbergElement::identity(g, m) }
    }

    pub fn pure_symplectic(gamma: SymplecticElement, m: usize) -> Self {
        let g = gamma.g();
        Self { gamma, h: HeisenbergElement::identity(g, m) }
    }

    pub fn pure_heisenberg(h: HeisenbergElement) -> Self {
        let g = h.g();
        Self { gamma: SymplecticElement::identity(g), h }
    }

    pub fn g(&self) -> usize {
        self.gamma.g()
    }

    pub fn m(&self) -> usize {
        self.h.m()
    }

    pub fn gamma(&self) -> &SymplecticElement {
        &self.gamma
    }

    pub fn heisenberg(&self) -> &HeisenbergElement {
        &self.h
    }

    pub fn is_theta_element(&self) -> bool {
        self.gamma.is_theta_element()
    }
}

/// Jacobi group multiplication: `(g, h) (g', h')` transports `(lambda, mu)`
/// by `g'` on the right before combining the Heisenberg parts.
pub fn jacobi_mul(x: &JacobiGroupElement, y: &JacobiGroupElement) -> Result<JacobiGroupElement> {
    if x.g() != y.g() || x.m() != y.m() {
        return Err(Error::DimensionMismatch("Jacobi group degree mismatch".into()));
    }
    let gamma = x.gamma.mul(&y.gamma)?;
    // (lt, ut) = (lambda, mu) gamma', as an m x 2g row block times gamma'.
    let lt = x.h.lambda.mul(&y.gamma.a)?.add(&x.h.mu.mul(&y.gamma.c)?)?;
    let ut = x.h.lambda.mul(&y.gamma.b)?.add(&x.h.mu.mul(&y.gamma.d)?)?;
    let lambda = lt.add(&y.h.lambda)?;
    let mu = ut.add(&y.h.mu)?;
    let twist = lt.mul(&y.h.mu.transpose())?.sub(&ut.mul(&y.h.lambda.transpose())?)?;
    let kappa = x.h.kappa.add(&y.h.kappa)?.add(&twist)?;
    Ok(JacobiGroupElement { gamma, h: HeisenbergElement::new(lambda, mu, kappa)? })
}

/// Exact inverse in the Jacobi group.
pub fn jacobi_inverse(x: &JacobiGroupElement) -> Result<JacobiGroupElement> {
    let gamma_inv = x.gamma.inverse();
    // Transport (lambda, mu) by gamma^{-1}, then cancel.
    let lt = x.h.lambda.mul(&gamma_inv.a)?.add(&x.h.mu.mul(&gamma_inv.c)?)?;
    let ut = x.h.lambda.mul(&gamma_inv.b)?.add(&x.h.mu.mul(&gamma_inv.d)?)?;
    let lambda = lt.neg();
    let mu = ut.neg();
    let twist = lt.mul(&ut.transpose())?.sub(&ut.mul(&lt.transpose())?)?;
    let kappa = x.h.kappa.neg().add(&twist)?;
    Ok(JacobiGroupElement { gamma: gamma_inv, h: HeisenbergElement::new(lambda, mu, kappa)? })
}

/// Holomorphic action on the Siegel-Jacobi space:
/// `(Omega, Z) -> ((A Omega + B)(C Omega + D)^{-1}, (Z + lambda Omega + mu)(C Omega + D)^{-1})`.
pub fn act(x: &JacobiGroupElement, p: &SiegelJacobiPoint) -> Result<SiegelJacobiPoint> {
    if x.g() != p.g() || x.m() != p.m() {
        return Err(Error::DimensionMismatch("element and point degrees differ".into()));
    }
    let omega = p.omega();
    let z = p.z();
    let a = x.gamma.a.to_complex();
    let b = x.gamma.b.to_complex();
    let c = x.gamma.c.to_complex();
    let d = x.gamma.d.to_complex();
    let denom = c.mul(omega).add(&d);
    let denom_inv = denom.inverse().map_err(|_| {
        Error::InvalidPoint("C Omega + D is numerically singular; the input point is invalid".into())
    })?;
    let new_omega = a.mul(omega).add(&b).mul(&denom_inv);
    let shifted = z.add(&x.h.lambda.to_complex().mul(omega)).add(&x.h.mu.to_complex());
    let new_z = shifted.mul(&denom_inv);
    if new_omega.asymmetry() > 1e-10 * new_omega.max_abs().max(1.0) {
        return Err(Error::InvalidPoint("transformed Omega is not symmetric".into()));
    }
    SiegelJacobiPoint::new(new_omega.symmetrized(), new_z)
}

/// One letter of a generating word for the theta subgroup of the Jacobi group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorLetter {
    /// Pure Heisenberg element `s(lambda, mu; kappa)`.
    S { lambda: IntMatrix, mu: IntMatrix, kappa: IntMatrix },
    /// Upper-triangular translation `t(B)` with `B` symmetric, even diagonal.
    T { b: IntMatrix },
    /// `g(alpha) = [['alpha, 0], [0, alpha^{-1}]]` with `alpha` unimodular.
    G { alpha: IntMatrix },
    /// The inversion `sigma = [[0, -I], [I, 0]]`.
    Sigma,
}

/// An ordered word over the generator letters.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GeneratorWord(pub Vec<GeneratorLetter>);

impl GeneratorWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Realize a letter as a Jacobi group element of degree `(g, m)`.
pub fn make_generator(letter: &GeneratorLetter, g: usize, m: usize) -> Result<JacobiGroupElement> {
    match letter {
        GeneratorLetter::S { lambda, mu, kappa } => {
            if lambda.rows() != m || lambda.cols() != g {
                return Err(Error::DimensionMismatch("s-letter lambda must be m x g".into()));
            }
            let h = HeisenbergElement::new(lambda.clone(), mu.clone(), kappa.clone())?;
            Ok(JacobiGroupElement::pure_heisenberg(h))
        }
        GeneratorLetter::T { b } => {
            if b.rows() != g || b.cols() != g {
                return Err(Error::DimensionMismatch("t-letter matrix must be g x g".into()));
            }
            if !b.is_symmetric() || !b.has_even_diagonal() {
                return Err(Error::InvalidElement("t-letter matrix must be symmetric with even diagonal".into()));
            }
            let gamma = SymplecticElement::from_blocks(
                IntMatrix::identity(g),
                b.clone(),
                IntMatrix::zeros(g, g),
                IntMatrix::identity(g),
            )?;
            Ok(JacobiGroupElement::pure_symplectic(gamma, m))
        }
        GeneratorLetter::G { alpha } => {
            if alpha.rows() != g || alpha.cols() != g {
                return Err(Error::DimensionMismatch("g-letter matrix must be g x g".into()));
            }
            let alpha_inv = alpha.unimodular_inverse()?;
            let gamma = SymplecticElement::from_blocks(
                alpha.transpose(),
                IntMatrix::zeros(g, g),
                IntMatrix::zeros(g, g),
                alpha_inv,
            )?;
            Ok(JacobiGroupElement::pure_symplectic(gamma, m))
        }
        GeneratorLetter::Sigma => {
            let gamma = SymplecticElement::from_blocks(
                IntMatrix::zeros(g, g),
                IntMatrix::identity(g).neg(),
                IntMatrix::identity(g),
                IntMatrix::zeros(g, g),
            )?;
            Ok(JacobiGroupElement::pure_symplectic(gamma, m))
        }
    }
}

/// Left-to-right product of a generator word.
pub fn compose_word(word: &GeneratorWord, g: usize, m: usize) -> Result<JacobiGroupElement> {
    let mut acc = JacobiGroupElement::identity(g, m);
    for letter in &word.0 {
        let el = make_generator(letter, g, m)?;
        acc = jacobi_mul(&acc, &el)?;
    }
    Ok(acc)
}

/// Deterministic random word over the four letter kinds.
///
/// Integer parameters are bounded by 2 in absolute value; t-letter diagonals
/// are even; `alpha` is drawn from elementary unimodular moves (entry
/// permutations, sign flips, single off-diagonal +-1 shears), which have
/// determinant +-1 by construction.
pub fn random_theta_word(g: usize, m: usize, length: usize, seed: u64) -> GeneratorWord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_theta_word_with(&mut rng, g, m, length)
}

/// As [`random_theta_word`], drawing from a caller-supplied generator.
pub fn random_theta_word_with<R: Rng>(rng: &mut R, g: usize, m: usize, length: usize) -> GeneratorWord {
    assert!(length <= 64, "word length is capped at 64");
    let mut letters = Vec::with_capacity(length);
    for _ in 0..length {
        letters.push(random_letter(rng, g, m));
    }
    GeneratorWord(letters)
}

fn random_letter<R: Rng>(rng: &mut R, g: usize, m: usize) -> GeneratorLetter {
    match rng.gen_range(0..4u8) {
        0 => {
            let lambda = random_int_matrix(rng, m, g);
            let mu = random_int_matrix(rng, m, g);
            // kappa = T - mu 'lambda with T symmetric keeps the invariant.
            let t = random_symmetric(rng, m);
            let kappa = t.sub(&mu.mul(&lambda.transpose()).expect("small dims")).expect("small entries");
            GeneratorLetter::S { lambda, mu, kappa }
        }
        1 => {
            let mut b = random_symmetric(rng, g);
            for i in 0..g {
                b.set(i, i, 2 * rng.gen_range(-1i64..=1));
            }
            GeneratorLetter::T { b }
        }
        2 => GeneratorLetter::G { alpha: random_elementary_unimodular(rng, g) },
        _ => GeneratorLetter::Sigma,
    }
}

fn random_int_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> IntMatrix {
    let mut out = IntMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            out.set(i, j, rng.gen_range(-2i64..=2));
        }
    }
    out
}

fn random_symmetric<R: Rng>(rng: &mut R, dim: usize) -> IntMatrix {
    let mut out = IntMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let v = rng.gen_range(-2i64..=2);
            out.set(i, j, v);
            out.set(j, i, v);
        }
    }
    out
}

fn random_elementary_unimodular<R: Rng>(rng: &mut R, g: usize) -> IntMatrix {
    let mut alpha = IntMatrix::identity(g);
    if g == 1 {
        alpha.set(0, 0, if rng.gen_bool(0.5) { 1 } else { -1 });
        return alpha;
    }
    match rng.gen_range(0..3u8) {
        0 => {
            // Transposition of two coordinates.
            let i = rng.gen_range(0..g);
            let mut j = rng.gen_range(0..g);
            if j == i {
                j = (j + 1) % g;
            }
            alpha.set(i, i, 0);
            alpha.set(j, j, 0);
            alpha.set(i, j, 1);
            alpha.set(j, i, 1);
        }
        1 => {
            for i in 0..g {
                alpha.set(i, i, if rng.gen_bool(0.5) { 1 } else { -1 });
            }
        }
        _ => {
            let i = rng.gen_range(0..g);
            let mut j = rng.gen_range(0..g);
            if j == i {
                j = (j + 1) % g;
            }
            alpha.set(i, j, if rng.gen_bool(0.5) { 1 } else { -1 });
        }
    }
    alpha
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::SiegelJacobiPoint;

    fn h1(l: i64, u: i64, k: i64) -> HeisenbergElement {
        HeisenbergElement::new(
            IntMatrix::from_entries(1, 1, vec![l]).unwrap(),
            IntMatrix::from_entries(1, 1, vec![u]).unwrap(),
            IntMatrix::from_entries(1, 1, vec![k]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn heisenberg_examples() {
        let id = HeisenbergElement::identity(1, 1);
        let x = h1(1, 2, 0);
        assert_eq!(heisenberg_mul(&id, &x).unwrap(), x);

        let a = h1(1, 0, 0);
        let b = h1(0, 1, 0);
        assert_eq!(heisenberg_mul(&a, &b).unwrap(), h1(1, 1, 1));

        let c = h1(1, 2, 0);
        let d = h1(-1, -2, 0);
        assert_eq!(heisenberg_mul(&c, &d).unwrap(), h1(0, 0, 0));
    }

    #[test]
    fn symplectic_checks() {
        assert!(is_symplectic(&IntMatrix::identity(4)));
        assert!(is_symplectic(&symplectic_form(2)));
        let diag = IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]).unwrap();
        assert!(!is_symplectic(&diag));
    }

    #[test]
    fn theta_membership() {
        assert!(SymplecticElement::identity(2).is_theta_element());
        let t1 = SymplecticElement::from_rows_2x2(1, 1, 0, 1);
        assert!(!t1.is_theta_element());
        let minus_j = SymplecticElement::from_rows_2x2(0, -1, 1, 0);
        assert!(minus_j.is_theta_element());
    }

    impl SymplecticElement {
        fn from_rows_2x2(a: i64, b: i64, c: i64, d: i64) -> Self {
            Self::from_matrix(&IntMatrix::from_rows(&[vec![a, b], vec![c, d]]).unwrap()).unwrap()
        }
    }

    #[test]
    fn jacobi_mul_examples() {
        let id = JacobiGroupElement::identity(1, 1);
        let x = JacobiGroupElement::pure_heisenberg(h1(1, 2, 0));
        assert_eq!(jacobi_mul(&id, &x).unwrap(), x);

        let s10 = JacobiGroupElement::pure_heisenberg(h1(1, 0, 0));
        let sigma = make_generator(&GeneratorLetter::Sigma, 1, 1).unwrap();
        let prod = jacobi_mul(&s10, &sigma).unwrap();
        assert_eq!(prod.gamma(), sigma.gamma());
        assert_eq!(prod.heisenberg(), &h1(0, -1, 0));

        // Pure Heisenberg products agree with heisenberg_mul.
        let a = JacobiGroupElement::pure_heisenberg(h1(1, 0, 0));
        let b = JacobiGroupElement::pure_heisenberg(h1(0, 1, 0));
        let ab = jacobi_mul(&a, &b).unwrap();
        assert_eq!(ab.heisenberg(), &heisenberg_mul(&h1(1, 0, 0), &h1(0, 1, 0)).unwrap());
        assert_eq!(ab.gamma(), &SymplecticElement::identity(1));
    }

    #[test]
    fn jacobi_inverse_examples() {
        let id = JacobiGroupElement::identity(2, 1);
        assert_eq!(jacobi_inverse(&id).unwrap(), id);

        let sigma = make_generator(&GeneratorLetter::Sigma, 2, 1).unwrap();
        let inv = jacobi_inverse(&sigma).unwrap();
        assert_eq!(jacobi_mul(&sigma, &inv).unwrap(), id);
        assert_eq!(inv.gamma(), &sigma.gamma().inverse());

        let x = JacobiGroupElement::pure_heisenberg(h1(1, 2, 0));
        let xi = jacobi_inverse(&x).unwrap();
        assert_eq!(xi.heisenberg(), &h1(-1, -2, 0));
        assert_eq!(jacobi_mul(&x, &xi).unwrap(), JacobiGroupElement::identity(1, 1));
    }

    #[test]
    fn act_examples() {
        let p = SiegelJacobiPoint::upper_i(1, 1);
        let id = JacobiGroupElement::identity(1, 1);
        let q = act(&id, &p).unwrap();
        assert!(q.omega().sub(p.omega()).max_abs() < 1e-15);
        assert!(q.z().sub(p.z()).max_abs() < 1e-15);

        // sigma fixes (iI, 0).
        let sigma = make_generator(&GeneratorLetter::Sigma, 2, 1).unwrap();
        let p2 = SiegelJacobiPoint::upper_i(2, 1);
        let q2 = act(&sigma, &p2).unwrap();
        assert!(q2.omega().sub(p2.omega()).max_abs() < 1e-12);
        assert!(q2.z().max_abs() < 1e-15);

        // s(1,0;0) shifts Z by Omega.
        let s = JacobiGroupElement::pure_heisenberg(h1(1, 0, 0));
        let q3 = act(&s, &p).unwrap();
        assert!((q3.z().get(0, 0) - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!(q3.omega().sub(p.omega()).max_abs() < 1e-15);
    }

    #[test]
    fn generator_examples() {
        let t0 = make_generator(&GeneratorLetter::T { b: IntMatrix::zeros(1, 1) }, 1, 1).unwrap();
        assert_eq!(t0, JacobiGroupElement::identity(1, 1));

        let gi = make_generator(&GeneratorLetter::G { alpha: IntMatrix::identity(2) }, 2, 1).unwrap();
        assert_eq!(gi, JacobiGroupElement::identity(2, 1));

        let sigma = make_generator(&GeneratorLetter::Sigma, 1, 1).unwrap();
        assert_eq!(sigma.gamma().to_matrix(), IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]]).unwrap());

        // Odd diagonal entries are rejected.
        let odd = IntMatrix::from_rows(&[vec![1]]).unwrap();
        assert!(make_generator(&GeneratorLetter::T { b: odd }, 1, 1).is_err());
        // Non-unimodular alpha is rejected.
        let two = IntMatrix::from_rows(&[vec![2]]).unwrap();
        assert!(make_generator(&GeneratorLetter::G { alpha: two }, 1, 1).is_err());
    }

    #[test]
    fn compose_word_examples() {
        let empty = compose_word(&GeneratorWord::default(), 1, 1).unwrap();
        assert_eq!(empty, JacobiGroupElement::identity(1, 1));

        let word = GeneratorWord(vec![GeneratorLetter::Sigma, GeneratorLetter::Sigma]);
        let el = compose_word(&word, 1, 1).unwrap();
        assert_eq!(el.gamma().to_matrix(), IntMatrix::from_rows(&[vec![-1, 0], vec![0, -1]]).unwrap());
        assert!(el.heisenberg().lambda().is_zero() && el.heisenberg().mu().is_zero());

        let b2 = IntMatrix::from_rows(&[vec![2]]).unwrap();
        let word = GeneratorWord(vec![GeneratorLetter::T { b: b2 }, GeneratorLetter::Sigma]);
        let el = compose_word(&word, 1, 1).unwrap();
        assert_eq!(el.gamma().to_matrix(), IntMatrix::from_rows(&[vec![2, -1], vec![1, 0]]).unwrap());
    }

    #[test]
    fn random_words_are_deterministic_and_theta() {
        assert!(random_theta_word(1, 1, 0, 5).is_empty());
        assert_eq!(random_theta_word(2, 1, 12, 9), random_theta_word(2, 1, 12, 9));
        let w = random_theta_word(1, 1, 8, 1);
        let el = compose_word(&w, 1, 1).unwrap();
        assert!(el.is_theta_element());
    }

    #[test]
    fn words_stay_in_theta_group_and_invert() {
        for seed in 0..40u64 {
            for &(g, m) in &[(1usize, 1usize), (2, 1), (1, 2)] {
                let w = random_theta_word(g, m, 8, seed);
                let el = compose_word(&w, g, m).unwrap();
                assert!(el.is_theta_element(), "word composition left the theta group");
                let inv = jacobi_inverse(&el).unwrap();
                assert!(inv.is_theta_element(), "inverse left the theta group");
                assert_eq!(jacobi_mul(&el, &inv).unwrap(), JacobiGroupElement::identity(g, m));
                assert_eq!(jacobi_mul(&inv, &el).unwrap(), JacobiGroupElement::identity(g, m));
            }
        }
    }

    #[test]
    fn associativity_on_random_triples() {
        for seed in 0..30u64 {
            let x = compose_word(&random_theta_word(2, 2, 5, 3 * seed), 2, 2).unwrap();
            let y = compose_word(&random_theta_word(2, 2, 5, 3 * seed + 1), 2, 2).unwrap();
            let z = compose_word(&random_theta_word(2, 2, 5, 3 * seed + 2), 2, 2).unwrap();
            let left = jacobi_mul(&jacobi_mul(&x, &y).unwrap(), &z).unwrap();
            let right = jacobi_mul(&x, &jacobi_mul(&y, &z).unwrap()).unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn heisenberg_closure_exhaustive_small() {
        // g = m = 1: every product must satisfy the symmetry invariant
        // (validated inside HeisenbergElement::new).
        let vals = [-2i64, -1, 0, 1, 2];
        for &l1 in &vals {
            for &u1 in &vals {
                for &k1 in &vals {
                    for &l2 in &vals {
                        for &u2 in &vals {
                            for &k2 in &vals {
                                let a = h1(l1, u1, k1);
                                let b = h1(l2, u2, k2);
                                assert!(heisenberg_mul(&a, &b).is_ok());
                            }
                        }
                    }
                }
            }
        }
    }
}
