//! JSON encodings used library-wide.
//!
//! A matrix is an array of rows; each complex entry is a two-element array
//! `[re, im]`. Real matrices may use bare numbers on input; output always
//! writes the pair form for complex data. Integer matrices are arrays of
//! integer rows.

use num_complex::Complex64;
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::groups::{GeneratorLetter, GeneratorWord, HeisenbergElement, IntMatrix, SymplecticElement};
use crate::linalg::ComplexMatrix;
use crate::theta::{ReductionStep, ReductionTrace, SiegelJacobiPoint};

/// Serde adapter: one complex number as `[re, im]`.
pub mod complex_pair {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [v.re, v.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let raw = NumOrPair::deserialize(d)?;
        Ok(raw.into())
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumOrPair {
    Num(f64),
    Pair([f64; 2]),
}

impl From<NumOrPair> for Complex64 {
    fn from(v: NumOrPair) -> Self {
        match v {
            NumOrPair::Num(x) => Complex64::new(x, 0.0),
            NumOrPair::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| [self.get(i, j).re, self.get(i, j).im]).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<NumOrPair>> = Vec::deserialize(d)?;
        let converted: Vec<Vec<Complex64>> =
            rows.into_iter().map(|r| r.into_iter().map(Complex64::from).collect()).collect();
        ComplexMatrix::from_rows(&converted).map_err(D::Error::custom)
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<i64>> = Vec::deserialize(d)?;
        IntMatrix::from_rows(&rows).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct PointRepr {
    omega: ComplexMatrix,
    z: ComplexMatrix,
}

impl Serialize for SiegelJacobiPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PointRepr { omega: self.omega().clone(), z: self.z().clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SiegelJacobiPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = PointRepr::deserialize(d)?;
        SiegelJacobiPoint::new(repr.omega, repr.z).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct SymplecticRepr {
    g: usize,
    matrix: IntMatrix,
}

impl Serialize for SymplecticElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SymplecticRepr { g: self.g(), matrix: self.to_matrix() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymplecticElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = SymplecticRepr::deserialize(d)?;
        if repr.matrix.rows() != 2 * repr.g {
            return Err(D::Error::custom("matrix dimension does not match 2g"));
        }
        SymplecticElement::from_matrix(&repr.matrix).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct HeisenbergRepr {
    lambda: IntMatrix,
    mu: IntMatrix,
    kappa: IntMatrix,
}

impl Serialize for HeisenbergElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        HeisenbergRepr { lambda: self.lambda().clone(), mu: self.mu().clone(), kappa: self.kappa().clone() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HeisenbergElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = HeisenbergRepr::deserialize(d)?;
        HeisenbergElement::new(repr.lambda, repr.mu, repr.kappa).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum LetterRepr {
    S { lambda: IntMatrix, mu: IntMatrix, kappa: IntMatrix },
    T { b: IntMatrix },
    G { alpha: IntMatrix },
    Sigma,
}

impl Serialize for GeneratorLetter {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr = match self {
            GeneratorLetter::S { lambda, mu, kappa } => {
                LetterRepr::S { lambda: lambda.clone(), mu: mu.clone(), kappa: kappa.clone() }
            }
            GeneratorLetter::T { b } => LetterRepr::T { b: b.clone() },
            GeneratorLetter::G { alpha } => LetterRepr::G { alpha: alpha.clone() },
            GeneratorLetter::Sigma => LetterRepr::Sigma,
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GeneratorLetter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(match LetterRepr::deserialize(d)? {
            LetterRepr::S { lambda, mu, kappa } => GeneratorLetter::S { lambda, mu, kappa },
            LetterRepr::T { b } => GeneratorLetter::T { b },
            LetterRepr::G { alpha } => GeneratorLetter::G { alpha },
            LetterRepr::Sigma => GeneratorLetter::Sigma,
        })
    }
}

impl Serialize for GeneratorWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GeneratorWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(GeneratorWord(Vec::deserialize(d)?))
    }
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum StepRepr {
    TranslateOmega { b: IntMatrix },
    ShiftZ { lambda: IntMatrix, mu: IntMatrix },
    Invert,
}

impl Serialize for ReductionStep {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr = match self {
            ReductionStep::TranslateOmega { b } => StepRepr::TranslateOmega { b: b.clone() },
            ReductionStep::ShiftZ { lambda, mu } => {
                StepRepr::ShiftZ { lambda: lambda.clone(), mu: mu.clone() }
            }
            ReductionStep::Invert => StepRepr::Invert,
        };
        repr.serialize(s)
    }
}

#[derive(Serialize)]
struct TraceRepr<'a> {
    reduced_point: &'a SiegelJacobiPoint,
    #[serde(with = "complex_pair")]
    multiplier: Complex64,
    #[serde(with = "complex_pair")]
    log_multiplier: Complex64,
    power_of_det: Vec<[f64; 2]>,
    steps: &'a [ReductionStep],
    converged: bool,
}

impl Serialize for ReductionTrace {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TraceRepr {
            reduced_point: &self.reduced_point,
            multiplier: self.multiplier,
            log_multiplier: self.log_multiplier,
            power_of_det: self.power_of_det.iter().map(|c| [c.re, c.im]).collect(),
            steps: &self.steps,
            converged: self.converged,
        }
        .serialize(s)
    }
}
