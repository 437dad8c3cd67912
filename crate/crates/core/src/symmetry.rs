//! Rotational symmetries of Julia sets, computed exactly.
//!
//! A polynomial is first conjugated by a translation so the `z^{d−1}` term
//! vanishes; the rotation center becomes 0. On the centered form
//! `F = Σ c_j z^j`, a rotation `z ↦ ωz` of order `n` satisfies
//! `F(ωz) = ω^d F(z)` iff `n | d − j` for every `j < d` with `c_j ≠ 0`.
//! Membership is tested through the identity `f∘σ = σ^d∘f`.

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::arith::{affine_conjugate, AffineMap, ArithError, CycloNumber, Polynomial, Rational};

/// `ζ = −a_{d−1} / (d·a_d)`.
pub fn center(f: &Polynomial) -> Result<CycloNumber, ArithError> {
    let d = f.require_degree(2)?;
    let lead = f.leading().expect("degree at least 2");
    let denom = lead.scale(&Rational::from_integer(d.into()));
    Ok(-f.coeff(d - 1).checked_div(&denom)?)
}

/// `(F, ζ)` with `F(z) = f(z + ζ) − ζ`.
pub fn centered_form(f: &Polynomial) -> Result<(Polynomial, CycloNumber), ArithError> {
    let zeta = center(f)?;
    let shift = AffineMap::translation(-zeta.clone());
    Ok((affine_conjugate(f, &shift)?, zeta))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetryOrder {
    Finite(u64),
    Infinite,
}

impl Serialize for SymmetryOrder {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            SymmetryOrder::Finite(b) => s.serialize_u64(*b),
            SymmetryOrder::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// Σ(f) as a center and the order of its rotation group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetryGroup {
    #[serde(serialize_with = "crate::display_string")]
    pub center: CycloNumber,
    pub order: SymmetryOrder,
}

/// The gcd rule on the centered form.
pub fn symmetry_group(f: &Polynomial) -> Result<SymmetryGroup, ArithError> {
    let d = f.require_degree(2)?;
    let (form, zeta) = centered_form(f)?;
    let b = form.coeffs()[..d]
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .fold(0u64, |g, (j, _)| g.gcd(&((d - j) as u64)));
    let order = if b == 0 {
        SymmetryOrder::Infinite
    } else {
        SymmetryOrder::Finite(b)
    };
    Ok(SymmetryGroup {
        center: zeta,
        order,
    })
}

/// `f∘s == s^d∘f` as exact polynomials.
pub fn symmetry_check(f: &Polynomial, s: &AffineMap) -> Result<bool, ArithError> {
    let d = f.require_degree(2)?;
    let lhs = f.compose(&s.as_polynomial())?;
    let rhs = s.pow(d as u64).after(f)?;
    Ok(lhs == rhs)
}

/// The rotation of order `n` about `center`, over ℚ(ζ_{lcm(n, N)}).
pub fn rotation_of_order(n: u64, center: &CycloNumber) -> Result<AffineMap, ArithError> {
    let big = (n as u32).lcm(&center.conductor());
    let omega = CycloNumber::zeta_pow(big, (big as u64 / n) as i64);
    AffineMap::rotation_about(omega, &center.lift(big)?)
}

/// `τ` with `g = τ∘f`, when `g − (lc g / lc f)·f` is constant.
pub fn linear_factor(g: &Polynomial, f: &Polynomial) -> Result<Option<AffineMap>, ArithError> {
    let d = f.require_degree(2)?;
    if g.require_degree(2)? != d {
        return Ok(None);
    }
    if g.conductor() != f.conductor() {
        return Err(ArithError::ConductorMismatch {
            left: g.conductor(),
            right: f.conductor(),
        });
    }
    let a = g
        .leading()
        .expect("nonzero")
        .checked_div(f.leading().expect("nonzero"))?;
    let rest = g.sub(&f.scale(&a)?)?;
    if rest.degree().unwrap_or(0) > 0 {
        return Ok(None);
    }
    let b = rest.coeff(0);
    Ok(Some(AffineMap::new(a, b)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum JuliaMismatch {
    NoLinearFactor,
    CommutationFails,
    NotRotationAboutCenter,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SameJulia {
    Yes(AffineMap),
    No(JuliaMismatch),
}

/// Whether `g = τ∘f` with `τ` a symmetry of J(f).
pub fn same_julia(f: &Polynomial, g: &Polynomial) -> Result<SameJulia, ArithError> {
    let Some(tau) = linear_factor(g, f)? else {
        return Ok(SameJulia::No(JuliaMismatch::NoLinearFactor));
    };
    if !symmetry_check(f, &tau)? {
        return Ok(SameJulia::No(JuliaMismatch::CommutationFails));
    }
    let group = symmetry_group(f)?;
    let fixes_center = tau.apply(&group.center)? == group.center;
    let finite_or_full = group.order == SymmetryOrder::Infinite
        || matches!(
            crate::arith::affine_order(&tau),
            crate::arith::AffineOrder::Finite(_)
        );
    if !(fixes_center && finite_or_full) {
        return Ok(SameJulia::No(JuliaMismatch::NotRotationAboutCenter));
    }
    Ok(SameJulia::Yes(tau))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PowerMapForm {
    Monomial {
        center: CycloNumber,
        leading: CycloNumber,
    },
    NotMonomial,
}

/// `Monomial(ζ, c)` when the centered form is `c·z^d`.
pub fn power_map_form(f: &Polynomial) -> Result<PowerMapForm, ArithError> {
    let (form, zeta) = centered_form(f)?;
    Ok(if form.is_monomial() {
        PowerMapForm::Monomial {
            center: zeta,
            leading: form.leading().expect("nonzero").clone(),
        }
    } else {
        PowerMapForm::NotMonomial
    })
}
