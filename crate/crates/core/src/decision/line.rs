//! Preperiodicity of lines.
//!
//! With all coordinates moving, write `L = {X₁ = σ_i(X_i)}` and
//! `f̃_i = σ_i∘f_i∘σ_i⁻¹`. If `f̃_i = τ_i∘f₁` with `f₁∘τ_i = τ_i^d∘f₁`, then
//! `Φᵏ(L) = {Y₁ = τ_i^{−e_k}σ_i(Y_i)}` with `e_k = (dᵏ−1)/(d−1)`, so the image
//! lines are governed by `e_k` modulo the orders of the `τ_i`.

use std::collections::HashMap;

use num_integer::Integer;
use serde::Serialize;

use super::orbit::orbit_point;
use super::{DecisionError, Line, PreperiodicityVerdict, SplitPolynomialMap, Witness};
use crate::arith::roots::torsion_roots_order;
use crate::arith::{
    affine_conjugate, affine_order, is_root_of_unity, minimal_polynomial, AffineMap, AffineOrder,
    ArithError, CycloNumber, Polynomial, RootOfUnity,
};
use crate::symmetry::{linear_factor, power_map_form, symmetry_check, PowerMapForm};

/// Degree cap for the eliminant in the monomial branch.
pub const ELIMINANT_DEGREE_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum UnrelatedReason {
    NoLinearFactor,
    CommutationFails,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairwiseRelation {
    Related { tau: AffineMap, order: AffineOrder },
    Unrelated(UnrelatedReason),
}

/// Whether `s∘fi∘s⁻¹ = τ∘f1` for a `τ` commuting with `f1` in the sense
/// `f1∘τ = τ^d∘f1`.
pub fn pairwise_relation(
    f1: &Polynomial,
    fi: &Polynomial,
    s: &AffineMap,
) -> Result<PairwiseRelation, ArithError> {
    let g = affine_conjugate(fi, s)?;
    let Some(tau) = linear_factor(&g, f1)? else {
        return Ok(PairwiseRelation::Unrelated(UnrelatedReason::NoLinearFactor));
    };
    if !symmetry_check(f1, &tau)? {
        return Ok(PairwiseRelation::Unrelated(
            UnrelatedReason::CommutationFails,
        ));
    }
    let order = affine_order(&tau);
    Ok(PairwiseRelation::Related { tau, order })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentSequence {
    pub preperiod: u64,
    pub period: u64,
    pub residues: Vec<u64>,
}

/// Tail and cycle of `e ↦ d·e + 1 (mod r)` from `start`.
fn residue_cycle(d: u64, r: u64, start: u64) -> ExponentSequence {
    let mut seen: HashMap<u64, u64> = HashMap::new();
    let mut residues = Vec::new();
    let mut e = start % r;
    let mut k = 0u64;
    loop {
        if let Some(&first) = seen.get(&e) {
            return ExponentSequence {
                preperiod: first,
                period: k - first,
                residues,
            };
        }
        seen.insert(e, k);
        residues.push(e);
        e = ((d % r) * e + 1) % r;
        k += 1;
    }
}

/// `e_k = (dᵏ−1)/(d−1) mod r` for `k ≥ 1`: preperiod and period counted from
/// `e_1 = 1`, with the residues of one tail plus one cycle.
pub fn exponent_sequence(d: u64, r: u64) -> ExponentSequence {
    residue_cycle(d, r.max(1), 1)
}

/// γ in the torus model `v = γ·u + δ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BranchGamma {
    Element(CycloNumber),
    /// Some root of `γ^degree = power`, known only through its eliminant.
    Root {
        degree: u32,
        power: CycloNumber,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum TorsionCheck {
    TorsionTranslate(u64),
    NotTorsion,
    Unknown(String),
}

/// `v = γ·u + δ` is a torsion translate of a subtorus iff `δ = 0` and `γ` is
/// a root of unity.
pub fn monomial_branch_check(gamma: &BranchGamma, delta: &CycloNumber) -> TorsionCheck {
    if !delta.is_zero() {
        return TorsionCheck::NotTorsion;
    }
    match gamma {
        BranchGamma::Element(g) => match is_root_of_unity(g) {
            RootOfUnity::Order(n) => TorsionCheck::TorsionTranslate(n),
            RootOfUnity::NotRootOfUnity => TorsionCheck::NotTorsion,
        },
        BranchGamma::Root { degree, power } => {
            // γ is torsion iff γ^degree is.
            if is_root_of_unity(power) == RootOfUnity::NotRootOfUnity {
                return TorsionCheck::NotTorsion;
            }
            let m = minimal_polynomial(power);
            let k = *degree as usize;
            let deg = m.degree().expect("nonzero") * k;
            if deg > ELIMINANT_DEGREE_CAP {
                return TorsionCheck::Unknown(format!(
                    "eliminant degree {deg} exceeds the cap {ELIMINANT_DEGREE_CAP}"
                ));
            }
            let mut eliminant = vec![crate::arith::Rational::default(); deg + 1];
            for (j, c) in m.to_rationals().expect("rational").into_iter().enumerate() {
                eliminant[j * k] = c;
            }
            match torsion_roots_order(&eliminant) {
                Some(n) => TorsionCheck::TorsionTranslate(n),
                None => TorsionCheck::NotTorsion,
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineImage {
    Image(Line),
    NotALine,
}

/// Closure of `Φ(L)`, when it is a line.
pub fn line_image(phi: &SplitPolynomialMap, l: &Line) -> Result<LineImage, DecisionError> {
    if phi.dimension() != l.dimension() {
        return Err(DecisionError::DimensionMismatch {
            expected: phi.dimension(),
            got: l.dimension(),
        });
    }
    let n = phi.conductor();
    if l.conductor() != n {
        return Err(ArithError::ConductorMismatch {
            left: n,
            right: l.conductor(),
        }
        .into());
    }
    let moving = l.moving();
    let r = moving[0];
    let param = |i: usize| -> Result<Polynomial, ArithError> {
        let lin = Polynomial::new(n, vec![l.base()[i].clone(), l.direction()[i].clone()])?;
        phi.maps()[i].compose(&lin)
    };
    let qr = param(r)?;
    let mut base = Vec::with_capacity(l.dimension());
    let mut dir = Vec::with_capacity(l.dimension());
    for i in 0..l.dimension() {
        if l.direction()[i].is_zero() {
            base.push(phi.maps()[i].eval(&l.base()[i])?);
            dir.push(CycloNumber::zero(n));
        } else if i == r {
            base.push(CycloNumber::zero(n));
            dir.push(CycloNumber::one(n));
        } else {
            match linear_factor(&param(i)?, &qr)? {
                Some(t) => {
                    base.push(t.b().clone());
                    dir.push(t.a().clone());
                }
                None => return Ok(LineImage::NotALine),
            }
        }
    }
    Ok(LineImage::Image(Line::new(base, dir)?))
}

/// `Φᴺ(L) = Φ^{N+k}(L)` by exact line images.
pub fn replay_line(
    phi: &SplitPolynomialMap,
    l: &Line,
    preperiod: u64,
    period: u64,
) -> Result<bool, DecisionError> {
    let step = |x: &Line| -> Result<Option<Line>, DecisionError> {
        Ok(match line_image(phi, x)? {
            LineImage::Image(y) => Some(y),
            LineImage::NotALine => None,
        })
    };
    let mut cur = l.clone();
    for _ in 0..preperiod {
        match step(&cur)? {
            Some(y) => cur = y,
            None => return Ok(false),
        }
    }
    let start = cur.clone();
    for _ in 0..period {
        match step(&cur)? {
            Some(y) => cur = y,
            None => return Ok(false),
        }
    }
    Ok(period >= 1 && cur == start)
}

/// `σ_i(x) = (V₁/V_i)(x − P_i) + P₁`, sending `X_i` to `X₁` along `L`.
fn pair_map(l: &Line, first: usize, i: usize) -> Result<AffineMap, ArithError> {
    let a = l.direction()[first].checked_div(&l.direction()[i])?;
    let b = l.base()[first].checked_sub(&a.checked_mul(&l.base()[i])?)?;
    AffineMap::new(a, b)
}

/// Preperiodicity of `L` under `Φ`.
pub fn line_preperiodic(
    phi: &SplitPolynomialMap,
    l: &Line,
    budget: u64,
) -> Result<PreperiodicityVerdict, DecisionError> {
    if phi.dimension() != l.dimension() {
        return Err(DecisionError::DimensionMismatch {
            expected: phi.dimension(),
            got: l.dimension(),
        });
    }
    if l.conductor() != phi.conductor() {
        return Err(ArithError::ConductorMismatch {
            left: phi.conductor(),
            right: l.conductor(),
        }
        .into());
    }
    decide(phi, l, budget)
}

fn decide(
    phi: &SplitPolynomialMap,
    l: &Line,
    budget: u64,
) -> Result<PreperiodicityVerdict, DecisionError> {
    let m = l.dimension();
    if m == 1 {
        return Ok(PreperiodicityVerdict::Preperiodic {
            preperiod: 0,
            period: 1,
        });
    }
    let moving = l.moving();
    if moving.len() < m {
        return decide_with_constants(phi, l, &moving, budget);
    }
    decide_moving(phi, l, budget)
}

fn decide_with_constants(
    phi: &SplitPolynomialMap,
    l: &Line,
    moving: &[usize],
    budget: u64,
) -> Result<PreperiodicityVerdict, DecisionError> {
    let mut verdict = PreperiodicityVerdict::Preperiodic {
        preperiod: 0,
        period: 1,
    };
    for i in (0..l.dimension()).filter(|i| l.direction()[*i].is_zero()) {
        let v = match orbit_point(&phi.maps()[i], &l.base()[i], budget)? {
            PreperiodicityVerdict::NotPreperiodic { witness } => {
                PreperiodicityVerdict::NotPreperiodic {
                    witness: Witness::ConstantCoordinateEscapes {
                        index: i + 1,
                        cause: Box::new(witness),
                    },
                }
            }
            other => other,
        };
        verdict = verdict.combine(v);
    }
    let sub = decide(&phi.restrict(moving), &l.restrict(moving)?, budget)?;
    let sub = match sub {
        PreperiodicityVerdict::NotPreperiodic { witness } => {
            PreperiodicityVerdict::NotPreperiodic {
                witness: witness.reindex(moving),
            }
        }
        other => other,
    };
    certify(phi, l, verdict.combine(sub))
}

/// Replays a `Preperiodic` verdict; anything else passes through.
fn certify(
    phi: &SplitPolynomialMap,
    l: &Line,
    verdict: PreperiodicityVerdict,
) -> Result<PreperiodicityVerdict, DecisionError> {
    if let PreperiodicityVerdict::Preperiodic { preperiod, period } = verdict {
        if !replay_line(phi, l, preperiod, period)? {
            return Ok(PreperiodicityVerdict::Unknown {
                budget: preperiod + period,
                reason: "certificate did not replay".into(),
            });
        }
    }
    Ok(verdict)
}

fn decide_moving(
    phi: &SplitPolynomialMap,
    l: &Line,
    budget: u64,
) -> Result<PreperiodicityVerdict, DecisionError> {
    let f1 = &phi.maps()[0];
    let d = phi.degree() as u64;
    let mut modulus = 1u64;
    for i in 1..l.dimension() {
        let sigma = pair_map(l, 0, i)?;
        let (tau, order) = match pairwise_relation(f1, &phi.maps()[i], &sigma)? {
            PairwiseRelation::Unrelated(reason) => {
                let witness = match reason {
                    UnrelatedReason::NoLinearFactor => Witness::NoLinearFactor { index: i + 1 },
                    UnrelatedReason::CommutationFails => Witness::CommutationFails { index: i + 1 },
                };
                return Ok(PreperiodicityVerdict::NotPreperiodic { witness });
            }
            PairwiseRelation::Related { tau, order } => (tau, order),
        };
        let r = match order {
            AffineOrder::Finite(r) => r,
            AffineOrder::Infinite => match infinite_branch(f1, &tau, d) {
                TorsionCheck::TorsionTranslate(n) => n,
                TorsionCheck::NotTorsion => {
                    return Ok(PreperiodicityVerdict::NotPreperiodic {
                        witness: Witness::NonTorsionTranslate { index: i + 1 },
                    })
                }
                TorsionCheck::Unknown(reason) => {
                    return Ok(PreperiodicityVerdict::Unknown { budget, reason });
                }
            },
        };
        modulus = modulus.lcm(&r);
    }
    // Φᵏ(L) is determined by e_k mod lcm(r_i), starting from e_0 = 0.
    let seq = residue_cycle(d, modulus, 0);
    certify(
        phi,
        l,
        PreperiodicityVerdict::Preperiodic {
            preperiod: seq.preperiod,
            period: seq.period,
        },
    )
}

/// Infinite-order relation: centered `f₁` is `c·z^d`, the centered `τ` is
/// `z ↦ a·z + δ`, and scaling both coordinates to `z^d` turns the diagonal
/// into `v = γ·u + δ'` with `γ^{d−1} = a`.
fn infinite_branch(f1: &Polynomial, tau: &AffineMap, d: u64) -> TorsionCheck {
    let Ok(PowerMapForm::Monomial { center, .. }) = power_map_form(f1) else {
        return TorsionCheck::Unknown(
            "infinite-order relation but the first map is not a centered power map".into(),
        );
    };
    let Ok(image) = tau.apply(&center) else {
        return TorsionCheck::Unknown("conductor mismatch in centering".into());
    };
    let delta = &image - &center;
    monomial_branch_check(
        &BranchGamma::Root {
            degree: (d - 1) as u32,
            power: tau.a().clone(),
        },
        &delta,
    )
}

pub(super) fn verify_line_witness(w: &Witness, phi: &SplitPolynomialMap, l: &Line) -> bool {
    if phi.dimension() != l.dimension() {
        return false;
    }
    let check_pair = |index: usize| -> Option<PairwiseRelation> {
        let i = index.checked_sub(1)?;
        let first = *l.moving().first()?;
        if i == first || i >= l.dimension() || l.direction()[i].is_zero() {
            return None;
        }
        let sigma = pair_map(l, first, i).ok()?;
        pairwise_relation(&phi.maps()[first], &phi.maps()[i], &sigma).ok()
    };
    match w {
        Witness::ConstantCoordinateEscapes { index, cause } => {
            let Some(i) = index.checked_sub(1).filter(|&i| i < l.dimension()) else {
                return false;
            };
            l.direction()[i].is_zero() && cause.replays(&phi.maps()[i], &l.base()[i])
        }
        Witness::NoLinearFactor { index } => {
            check_pair(*index) == Some(PairwiseRelation::Unrelated(UnrelatedReason::NoLinearFactor))
        }
        Witness::CommutationFails { index } => {
            check_pair(*index)
                == Some(PairwiseRelation::Unrelated(
                    UnrelatedReason::CommutationFails,
                ))
        }
        Witness::NonTorsionTranslate { index } => match check_pair(*index) {
            Some(PairwiseRelation::Related {
                tau,
                order: AffineOrder::Infinite,
            }) => {
                let first = l.moving()[0];
                infinite_branch(&phi.maps()[first], &tau, phi.degree() as u64)
                    == TorsionCheck::NotTorsion
            }
            _ => false,
        },
        _ => false,
    }
}
