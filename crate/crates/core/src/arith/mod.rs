//! Exact arithmetic: rationals, cyclotomic fields ℚ(ζ_N), polynomials over
//! them, affine maps, minimal polynomials and root-of-unity detection.

pub mod affine;
pub mod cyclo;
pub(crate) mod linalg;
pub mod poly;
pub mod primes;
pub mod rational;
pub mod roots;

use thiserror::Error;

pub use affine::{affine_conjugate, affine_order, AffineMap, AffineOrder};
pub use cyclo::CycloNumber;
pub use poly::{poly_compose, Polynomial};
pub use rational::Rational;
pub use roots::{cyclotomic_polynomial, is_root_of_unity, minimal_polynomial, RootOfUnity};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("conductor mismatch: {left} vs {right}")]
    ConductorMismatch { left: u32, right: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot lift from conductor {from} to {to}: not a multiple")]
    BadLift { from: u32, to: u32 },
    #[error("affine map needs a nonzero linear coefficient")]
    DegenerateAffine,
    #[error("polynomial degree is below the required {needed}")]
    DegreeTooSmall {
        degree: Option<usize>,
        needed: usize,
    },
}
