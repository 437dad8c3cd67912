//! Affine maps `z ↦ a·z + b` with `a ≠ 0`.

use std::fmt;

use serde::Serialize;

use super::cyclo::CycloNumber;
use super::poly::Polynomial;
use super::roots::{is_root_of_unity, RootOfUnity};
use super::ArithError;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AffineMap {
    a: CycloNumber,
    b: CycloNumber,
}

impl AffineMap {
    pub fn new(a: CycloNumber, b: CycloNumber) -> Result<Self, ArithError> {
        if a.conductor() != b.conductor() {
            return Err(ArithError::ConductorMismatch {
                left: a.conductor(),
                right: b.conductor(),
            });
        }
        if a.is_zero() {
            return Err(ArithError::DegenerateAffine);
        }
        Ok(AffineMap { a, b })
    }

    pub fn identity(conductor: u32) -> Self {
        AffineMap {
            a: CycloNumber::one(conductor),
            b: CycloNumber::zero(conductor),
        }
    }

    pub fn translation(b: CycloNumber) -> Self {
        AffineMap {
            a: CycloNumber::one(b.conductor()),
            b,
        }
    }

    /// `z ↦ ω·(z − center) + center`.
    pub fn rotation_about(omega: CycloNumber, center: &CycloNumber) -> Result<Self, ArithError> {
        let b = center.checked_sub(&omega.checked_mul(center)?)?;
        Self::new(omega, b)
    }

    pub fn a(&self) -> &CycloNumber {
        &self.a
    }

    pub fn b(&self) -> &CycloNumber {
        &self.b
    }

    pub fn conductor(&self) -> u32 {
        self.a.conductor()
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn apply(&self, x: &CycloNumber) -> Result<CycloNumber, ArithError> {
        self.a.checked_mul(x)?.checked_add(&self.b)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap) -> Result<AffineMap, ArithError> {
        let a = self.a.checked_mul(&inner.a)?;
        let b = self.a.checked_mul(&inner.b)?.checked_add(&self.b)?;
        Ok(AffineMap { a, b })
    }

    pub fn inverse(&self) -> AffineMap {
        let ainv = self.a.inv().expect("affine map has a != 0");
        let b = -(&ainv * &self.b);
        AffineMap { a: ainv, b }
    }

    /// `self` composed with itself `k` times; `pow(0)` is the identity.
    pub fn pow(&self, mut k: u64) -> AffineMap {
        let mut base = self.clone();
        let mut acc = AffineMap::identity(self.conductor());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(&base).expect("same conductor");
            }
            k >>= 1;
            if k > 0 {
                base = base.compose(&base).expect("same conductor");
            }
        }
        acc
    }

    pub fn as_polynomial(&self) -> Polynomial {
        Polynomial::new(self.conductor(), vec![self.b.clone(), self.a.clone()])
            .expect("same conductor")
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &Polynomial) -> Result<Polynomial, ArithError> {
        f.scale(&self.a)?.add_constant(&self.b)
    }

    pub fn lift(&self, target: u32) -> Result<AffineMap, ArithError> {
        Ok(AffineMap {
            a: self.a.lift(target)?,
            b: self.b.lift(target)?,
        })
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z -> ({})*z + ({})", self.a, self.b)
    }
}

/// Order of an affine map under composition.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind", content = "order")]
pub enum AffineOrder {
    Finite(u64),
    Infinite,
}

/// Order of `s` under composition.
///
/// `s` has finite order iff it is the identity, or `a ≠ 1` and `a` is a root
/// of unity; then the order is the multiplicative order of `a` (the map is
/// conjugate to `z ↦ a·z`). A nontrivial translation has infinite order. The
/// root-of-unity search is bounded by the torsion of ℚ(ζ_N), so no external
/// cap is needed.
pub fn affine_order(s: &AffineMap) -> AffineOrder {
    if s.a.is_one() {
        return if s.b.is_zero() {
            AffineOrder::Finite(1)
        } else {
            AffineOrder::Infinite
        };
    }
    match is_root_of_unity(&s.a) {
        RootOfUnity::Order(n) => AffineOrder::Finite(n),
        RootOfUnity::NotRootOfUnity => AffineOrder::Infinite,
    }
}

/// `s ∘ f ∘ s⁻¹`.
pub fn affine_conjugate(f: &Polynomial, s: &AffineMap) -> Result<Polynomial, ArithError> {
    let inner = f.compose(&s.inverse().as_polynomial())?;
    s.after(&inner)
}
