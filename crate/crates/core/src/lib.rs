//! Numerical theta series on the Siegel-Jacobi space.
//!
//! The library evaluates the matrix-argument theta series
//!
//! ```text
//! Theta(Omega, Z) = sum over integer m x g matrices A of
//!                   exp(pi i tr(A Omega 'A + 2 A 'Z))
//! ```
//!
//! for `Omega` in the Siegel upper half space of degree `g` and complex
//! `m x g` matrices `Z`, together with
//!
//! * exact integer arithmetic for the symplectic group, the Heisenberg
//!   group and the Jacobi modular group, and their holomorphic action on
//!   the Siegel-Jacobi space ([`groups`]);
//! * truncated lattice summation with a certified tail bound, accelerated
//!   by transformation-based argument reduction ([`theta`]);
//! * the automorphic factors of the theta transformation law and numerical
//!   extraction of its eighth-root-of-unity multiplier ([`automorphy`]);
//! * the classical one-variable theory: Hecke's theta function, the
//!   Kronecker symbol and the half-integral-weight transformation formula
//!   on Gamma_0(4) ([`classical`]);
//! * independent quadrature and Poisson-summation oracles for the Gaussian
//!   lattice integral ([`oracles`]).
//!
//! All operations are pure functions over immutable values and safe to
//! call concurrently. Randomized verification is fully seeded; see
//! [`verify`] for the suite drivers used by the CLI and the test suite.

pub mod automorphy;
pub mod classical;
pub mod error;
pub mod groups;
pub mod jsonio;
pub mod linalg;
pub mod oracles;
pub mod sampling;
pub mod theta;
pub mod verify;

pub use error::Error;
pub use groups::{HeisenbergElement, JacobiGroupElement, SymplecticElement};
pub use linalg::{ComplexMatrix, RealSymmetricMatrix};
pub use theta::{SiegelJacobiPoint, ThetaValue};

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
