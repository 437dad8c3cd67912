//! Certified preperiodicity for points and lines under split polynomial maps
//! `Φ = (f₁, …, f_m)` acting coordinatewise on affine m-space.
//!
//! Every `Preperiodic` verdict for a line is replayed through exact line
//! images before it is returned. `NotPreperiodic` verdicts carry a witness
//! that can be re-checked in one step.
//!
//! Structural witnesses (`NoLinearFactor`, `CommutationFails`,
//! `NonTorsionTranslate`) rely on the standard fact that a preperiodic line
//! contains a Zariski-dense set of preperiodic points.

mod line;
mod orbit;
mod scan;

use std::fmt;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{ArithError, CycloNumber, Polynomial};

pub use line::{
    exponent_sequence, line_image, line_preperiodic, monomial_branch_check, pairwise_relation,
    replay_line, BranchGamma, ExponentSequence, LineImage, PairwiseRelation, TorsionCheck,
    UnrelatedReason,
};
pub use orbit::{escape_radius, orbit_point, replay_point};
pub use scan::{bogomolov_scan, ScanReport, ScanRow};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecisionError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("a split map needs at least one coordinate")]
    Empty,
    #[error("all maps must have the same degree d >= 2; got degrees {0:?}")]
    Degrees(Vec<Option<usize>>),
    #[error("line has dimension {got}, map has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("line direction is zero")]
    ZeroDirection,
    #[error("scan needs maps and line over Q")]
    NotRational,
    #[error("height bound must be positive")]
    BadHeightBound,
}

/// `Φ = (f₁, …, f_m)` over a common ℚ(ζ_N), all of degree `d ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitPolynomialMap {
    maps: Vec<Polynomial>,
    degree: usize,
    conductor: u32,
}

impl SplitPolynomialMap {
    pub fn new(maps: Vec<Polynomial>) -> Result<Self, DecisionError> {
        let first = maps.first().ok_or(DecisionError::Empty)?;
        let conductor = first.conductor();
        if let Some(bad) = maps.iter().find(|f| f.conductor() != conductor) {
            return Err(ArithError::ConductorMismatch {
                left: conductor,
                right: bad.conductor(),
            }
            .into());
        }
        let degrees: Vec<Option<usize>> = maps.iter().map(Polynomial::degree).collect();
        let d = degrees[0];
        if d.is_none_or(|d| d < 2) || degrees.iter().any(|x| *x != d) {
            return Err(DecisionError::Degrees(degrees));
        }
        Ok(SplitPolynomialMap {
            maps,
            degree: d.expect("checked"),
            conductor,
        })
    }

    pub fn maps(&self) -> &[Polynomial] {
        &self.maps
    }

    pub fn dimension(&self) -> usize {
        self.maps.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// The maps at the given coordinates, in order.
    pub fn restrict(&self, coords: &[usize]) -> SplitPolynomialMap {
        SplitPolynomialMap {
            maps: coords.iter().map(|&i| self.maps[i].clone()).collect(),
            degree: self.degree,
            conductor: self.conductor,
        }
    }

    pub fn apply(&self, point: &[CycloNumber]) -> Result<Vec<CycloNumber>, ArithError> {
        self.maps
            .iter()
            .zip(point)
            .map(|(f, x)| f.eval(x))
            .collect()
    }
}

/// `{P + t·V}` with `V ≠ 0`. Equality is equality of point sets.
#[derive(Clone, Debug)]
pub struct Line {
    base: Vec<CycloNumber>,
    direction: Vec<CycloNumber>,
}

impl Line {
    pub fn new(base: Vec<CycloNumber>, direction: Vec<CycloNumber>) -> Result<Self, DecisionError> {
        if base.len() != direction.len() {
            return Err(DecisionError::DimensionMismatch {
                expected: base.len(),
                got: direction.len(),
            });
        }
        if direction.iter().all(CycloNumber::is_zero) {
            return Err(DecisionError::ZeroDirection);
        }
        if base.is_empty() {
            return Err(DecisionError::Empty);
        }
        let n = base[0].conductor();
        if let Some(bad) = base.iter().chain(&direction).find(|x| x.conductor() != n) {
            return Err(ArithError::ConductorMismatch {
                left: n,
                right: bad.conductor(),
            }
            .into());
        }
        Ok(Line { base, direction })
    }

    pub fn base(&self) -> &[CycloNumber] {
        &self.base
    }

    pub fn direction(&self) -> &[CycloNumber] {
        &self.direction
    }

    pub fn dimension(&self) -> usize {
        self.base.len()
    }

    pub fn conductor(&self) -> u32 {
        self.base[0].conductor()
    }

    pub fn point_at(&self, t: &CycloNumber) -> Result<Vec<CycloNumber>, ArithError> {
        self.base
            .iter()
            .zip(&self.direction)
            .map(|(p, v)| p.checked_add(&v.checked_mul(t)?))
            .collect()
    }

    /// Direction scaled so its first nonzero entry is 1, base moved so that
    /// coordinate is 0.
    pub fn canonical(&self) -> (Vec<CycloNumber>, Vec<CycloNumber>) {
        let k = self
            .direction
            .iter()
            .position(|v| !v.is_zero())
            .expect("nonzero direction");
        let inv = self.direction[k].inv().expect("nonzero");
        let dir: Vec<CycloNumber> = self.direction.iter().map(|v| v * &inv).collect();
        let shift = &self.base[k];
        let base = self
            .base
            .iter()
            .zip(&dir)
            .map(|(p, v)| p - &(v * shift))
            .collect();
        (base, dir)
    }

    /// Coordinates with nonzero direction.
    pub fn moving(&self) -> Vec<usize> {
        (0..self.dimension())
            .filter(|&i| !self.direction[i].is_zero())
            .collect()
    }

    pub fn restrict(&self, coords: &[usize]) -> Result<Line, DecisionError> {
        Line::new(
            coords.iter().map(|&i| self.base[i].clone()).collect(),
            coords.iter().map(|&i| self.direction[i].clone()).collect(),
        )
    }
}

impl PartialEq for Line {
    fn eq(&self, other: &Self) -> bool {
        self.dimension() == other.dimension() && self.canonical() == other.canonical()
    }
}

impl Eq for Line {}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[CycloNumber]| {
            v.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "({}) + t*({})", join(&self.base), join(&self.direction))
    }
}

impl Serialize for Line {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Re-checkable evidence for `NotPreperiodic`. Coordinate indices are
/// 1-based, matching the order of the maps.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Witness {
    /// `|fⁿ(x)| ≥ R_f` under the given embedding; moduli at least double
    /// from then on.
    ArchimedeanEscape {
        iteration: u64,
        radius: f64,
        embedding: u32,
        #[serde(serialize_with = "crate::display_string")]
        iterate: CycloNumber,
    },
    /// `v_p(fⁿ(x))` is below the escape threshold at `p`; valuations then
    /// decrease strictly forever.
    ValuationEscape {
        #[serde(serialize_with = "crate::display_string")]
        prime: num_bigint::BigUint,
        iteration: u64,
        valuation: i64,
        #[serde(serialize_with = "crate::display_string")]
        iterate: CycloNumber,
    },
    ConstantCoordinateEscapes {
        index: usize,
        cause: Box<Witness>,
    },
    NoLinearFactor {
        index: usize,
    },
    CommutationFails {
        index: usize,
    },
    NonTorsionTranslate {
        index: usize,
    },
}

impl Witness {
    /// Shifts coordinate indices from a sub-line back to the full line.
    fn reindex(self, coords: &[usize]) -> Witness {
        let map = |i: usize| coords[i - 1] + 1;
        match self {
            Witness::ConstantCoordinateEscapes { index, cause } => {
                Witness::ConstantCoordinateEscapes {
                    index: map(index),
                    cause,
                }
            }
            Witness::NoLinearFactor { index } => Witness::NoLinearFactor { index: map(index) },
            Witness::CommutationFails { index } => Witness::CommutationFails { index: map(index) },
            Witness::NonTorsionTranslate { index } => {
                Witness::NonTorsionTranslate { index: map(index) }
            }
            other => other,
        }
    }

    /// One-step check of a point witness against `f`.
    pub fn verify_point(&self, f: &Polynomial) -> bool {
        orbit::verify_point_witness(self, f)
    }

    /// Check of a line witness against `Φ` and `L`.
    pub fn verify_line(&self, phi: &SplitPolynomialMap, l: &Line) -> bool {
        line::verify_line_witness(self, phi, l)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict")]
pub enum PreperiodicityVerdict {
    Preperiodic { preperiod: u64, period: u64 },
    NotPreperiodic { witness: Witness },
    Unknown { budget: u64, reason: String },
}

impl PreperiodicityVerdict {
    pub fn is_unknown(&self) -> bool {
        matches!(self, PreperiodicityVerdict::Unknown { .. })
    }

    /// Coordinatewise combination: preperiods take the max, periods the lcm.
    fn combine(self, other: PreperiodicityVerdict) -> PreperiodicityVerdict {
        use PreperiodicityVerdict::*;
        match (self, other) {
            (
                Preperiodic {
                    preperiod: n1,
                    period: k1,
                },
                Preperiodic {
                    preperiod: n2,
                    period: k2,
                },
            ) => Preperiodic {
                preperiod: n1.max(n2),
                period: k1.lcm(&k2),
            },
            (v @ NotPreperiodic { .. }, _) | (_, v @ NotPreperiodic { .. }) => v,
            (v @ Unknown { .. }, _) | (_, v @ Unknown { .. }) => v,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    fn q(n: i64) -> CycloNumber {
        CycloNumber::from_int(1, n)
    }

    #[test]
    fn split_map_validation() {
        assert!(SplitPolynomialMap::new(vec![]).is_err());
        let z2 = Polynomial::from_ints(&[0, 0, 1]);
        let z3 = Polynomial::from_ints(&[0, 0, 0, 1]);
        assert!(matches!(
            SplitPolynomialMap::new(vec![z2.clone(), z3]),
            Err(DecisionError::Degrees(_))
        ));
        assert!(SplitPolynomialMap::new(vec![Polynomial::from_ints(&[0, 1])]).is_err());
        assert_eq!(
            SplitPolynomialMap::new(vec![z2.clone(), z2])
                .unwrap()
                .degree(),
            2
        );
    }

    #[test]
    fn line_equality_is_set_equality() {
        let a = Line::new(vec![q(0), q(0)], vec![q(1), q(1)]).unwrap();
        let b = Line::new(vec![q(3), q(3)], vec![q(-2), q(-2)]).unwrap();
        let c = Line::new(vec![q(0), q(1)], vec![q(1), q(1)]).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(Line::new(vec![q(1), q(2)], vec![q(0), q(0)]).is_err());
        let half = CycloNumber::from_rational(1, rat(1, 2));
        let d = Line::new(vec![q(5), q(1)], vec![q(0), half]).unwrap();
        let e = Line::new(vec![q(5), q(-7)], vec![q(0), q(4)]).unwrap();
        assert_eq!(d, e);
    }

    #[test]
    fn combine_verdicts() {
        let a = PreperiodicityVerdict::Preperiodic {
            preperiod: 0,
            period: 2,
        };
        let b = PreperiodicityVerdict::Preperiodic {
            preperiod: 3,
            period: 3,
        };
        assert_eq!(
            a.combine(b),
            PreperiodicityVerdict::Preperiodic {
                preperiod: 3,
                period: 6
            }
        );
    }
}
