//! Weil and canonical heights over ℚ.
//!
//! The canonical height of a rational point is assembled from local pieces
//! in a fixed order (archimedean first, then primes ascending):
//!
//! `ĥ_f(x) = G_f(x) + Σ_p λ_p(x) · log p`
//!
//! Outside the bad primes of `f` and the primes dividing the denominator of
//! `x`, every local term vanishes. Each local piece carries its own error
//! radius; the radii are summed.

pub mod arch;
mod ball;
pub mod padic;
pub mod render;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arith::primes::{factor, is_prime, prime_divisors};
use crate::arith::rational::{bit_size, ln_height};
use crate::arith::{ArithError, CycloNumber, Polynomial, Rational};
use crate::decision::SplitPolynomialMap;

pub use arch::{arch_discrepancy, escape_region_radius, local_height_arch, ArchPoint, ArchValue};
pub use padic::PadicOutcome;
pub use render::{julia_render, JuliaImage, RenderSpec};

const PADIC_BUDGET: u32 = 4096;
/// Bit cap for the naive oracle's exact iterate.
pub const NAIVE_BIT_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HeightError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("exact heights need a polynomial and point over Q")]
    NotRational,
    #[error("{0} is not prime")]
    NotPrime(BigUint),
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("tolerance {requested:e} unreachable at place {place}: best radius {achieved:e}")]
    ToleranceUnreachable {
        place: String,
        achieved: f64,
        requested: f64,
    },
    #[error("iterate needs {bits} bits, above the cap of {cap}")]
    BitBudget { bits: u64, cap: u64 },
    #[error("point has {got} coordinates, map has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid render spec: {0}")]
    BadRenderSpec(String),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlaceTag {
    Archimedean,
    Prime(BigUint),
}

impl fmt::Display for PlaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaceTag::Archimedean => f.write_str("inf"),
            PlaceTag::Prime(p) => write!(f, "{p}"),
        }
    }
}

impl Serialize for PlaceTag {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A finite sum `Σ c_p · log p` with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LogCombination {
    terms: BTreeMap<BigUint, Rational>,
}

impl LogCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn log_prime(p: BigUint, c: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(p, c);
        out
    }

    /// `log |x|` for a nonzero rational.
    pub fn log_abs(x: &Rational) -> Self {
        let mut out = Self::zero();
        for (p, e) in factor(x.numer().magnitude()) {
            out.add_term(p, Rational::from_integer(BigInt::from(e)));
        }
        for (p, e) in factor(x.denom().magnitude()) {
            out.add_term(p, -Rational::from_integer(BigInt::from(e)));
        }
        out
    }

    fn add_term(&mut self, p: BigUint, c: Rational) {
        let entry = self.terms.entry(p.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn add(&mut self, other: &LogCombination) {
        for (p, c) in &other.terms {
            self.add_term(p.clone(), c.clone());
        }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (p, a) in &self.terms {
            out.add_term(p.clone(), a * c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<BigUint, Rational> {
        &self.terms
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(p, c)| {
                let lp = crate::arith::rational::ln_bigint(&BigInt::from(p.clone()));
                crate::arith::rational::rational_to_f64(c) * lp
            })
            .sum()
    }

    /// Rounding bound for [`Self::to_f64`].
    fn rounding(&self) -> f64 {
        let mag: f64 = self
            .terms
            .iter()
            .map(|(p, c)| {
                let lp = crate::arith::rational::ln_bigint(&BigInt::from(p.clone()));
                (crate::arith::rational::rational_to_f64(c) * lp).abs()
            })
            .sum();
        mag * 8.0 * f64::EPSILON * (self.terms.len() as f64 + 1.0)
    }
}

impl fmt::Display for LogCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if a.is_one() {
                write!(f, "log({p})")?;
            } else {
                write!(f, "{a}*log({p})")?;
            }
        }
        Ok(())
    }
}

impl Serialize for LogCombination {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalHeight {
    pub place: PlaceTag,
    pub value: f64,
    pub radius: f64,
    pub iterations: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<LogCombination>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeightResult {
    pub value: f64,
    pub error_radius: f64,
    pub locals: Vec<LocalHeight>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<LogCombination>,
}

impl HeightResult {
    fn assemble(locals: Vec<LocalHeight>) -> Self {
        let exact = locals
            .iter()
            .map(|l| l.exact.clone())
            .collect::<Option<Vec<_>>>()
            .map(|parts| {
                let mut total = LogCombination::zero();
                for p in &parts {
                    total.add(p);
                }
                total
            });
        match exact {
            Some(e) => HeightResult {
                value: e.to_f64(),
                error_radius: e.rounding(),
                locals,
                exact: Some(e),
            },
            None => {
                let value = locals.iter().map(|l| l.value).sum();
                let radius = locals.iter().map(|l| l.radius).sum::<f64>();
                HeightResult {
                    value,
                    error_radius: ball_up(radius + 4.0 * f64::EPSILON * f64::abs(value)),
                    locals,
                    exact: None,
                }
            }
        }
    }
}

fn ball_up(x: f64) -> f64 {
    x * (1.0 + 8.0 * f64::EPSILON) + f64::MIN_POSITIVE
}

/// `log max(|p|, |q|)` for `x = p/q` in lowest terms.
pub fn weil_height(x: &Rational) -> f64 {
    ln_height(x)
}

fn rational_coeffs(f: &Polynomial) -> Result<Vec<Rational>, HeightError> {
    f.to_rationals().ok_or(HeightError::NotRational)
}

/// Primes where some coefficient is non-integral or the leading coefficient
/// is not a unit.
pub fn bad_primes(f: &Polynomial) -> Result<BTreeSet<BigUint>, HeightError> {
    let coeffs = rational_coeffs(f)?;
    let lead = coeffs.last().ok_or(ArithError::DegreeTooSmall {
        degree: None,
        needed: 1,
    })?;
    let mut out = prime_divisors(lead.numer());
    for c in &coeffs {
        out.extend(prime_divisors(c.denom()));
    }
    Ok(out)
}

/// `C_f`: an upper bound on `sup_x |h(f(x)) − d·h(x)|` over ℚ, summed from
/// the archimedean bound and the bad primes.
pub fn height_constant(f: &Polynomial) -> Result<f64, HeightError> {
    let coeffs = rational_coeffs(f)?;
    f.require_degree(2)?;
    let mut total = arch_discrepancy(f, 1);
    for p in bad_primes(f)? {
        let profile = padic::PadicProfile::new(&coeffs, &p);
        let lp = crate::arith::rational::ln_bigint(&BigInt::from(p));
        total = ball_up(total + profile.discrepancy() as f64 * lp * (1.0 + 1e-15));
    }
    Ok(total)
}

/// `λ_p(x)` in units of `log p`: exact when an escape or invariant-ball
/// certificate is reached, otherwise bounded after the iteration budget.
pub fn local_height_padic(
    f: &Polynomial,
    x: &Rational,
    p: &BigUint,
) -> Result<PadicOutcome, HeightError> {
    let coeffs = rational_coeffs(f)?;
    f.require_degree(2)?;
    if !is_prime(p) {
        return Err(HeightError::NotPrime(p.clone()));
    }
    let profile = padic::PadicProfile::new(&coeffs, p);
    Ok(padic::padic_local(
        &coeffs,
        x,
        &profile,
        &Rational::zero(),
        PADIC_BUDGET,
    ))
}

/// Closed form for `c·z^d` over ℚ: `G(x) = log⁺(|c|^{1/(d−1)}|x|)`.
fn monomial_arch(coeffs: &[Rational], x: &Rational) -> Option<LogCombination> {
    let (lead, rest) = coeffs.split_last()?;
    if !rest.iter().all(Zero::is_zero) {
        return None;
    }
    if x.is_zero() {
        return Some(LogCombination::zero());
    }
    let d = rest.len() as i32;
    let c = lead.abs();
    let ax = x.abs();
    // |c|·|x|^{d−1} > 1 decides the sign of the log.
    if &c * num_traits::pow(ax.clone(), (d - 1) as usize) <= Rational::one() {
        return Some(LogCombination::zero());
    }
    let mut out =
        LogCombination::log_abs(&c).scaled(&Rational::new(BigInt::one(), BigInt::from(d - 1)));
    out.add(&LogCombination::log_abs(&ax));
    Some(out)
}

fn ln_prime(p: &BigUint) -> f64 {
    crate::arith::rational::ln_bigint(&BigInt::from(p.clone()))
}

/// `ĥ_f(x)` within `tol`, for `f` and `x` over ℚ.
pub fn canonical_height(
    f: &Polynomial,
    x: &Rational,
    tol: f64,
) -> Result<HeightResult, HeightError> {
    let coeffs = rational_coeffs(f)?;
    f.require_degree(2)?;
    if !(tol > 0.0) {
        return Err(HeightError::BadTolerance(tol));
    }
    let mut primes = bad_primes(f)?;
    primes.extend(prime_divisors(x.denom()));
    let share = tol / (primes.len() + 1) as f64;
    let mut locals = Vec::with_capacity(primes.len() + 1);

    locals.push(match monomial_arch(&coeffs, x) {
        Some(exact) => LocalHeight {
            place: PlaceTag::Archimedean,
            value: exact.to_f64(),
            radius: exact.rounding(),
            iterations: 0,
            exact: Some(exact),
        },
        None => {
            let point = ArchPoint::Exact(CycloNumber::from_rational(1, x.clone()));
            let v = local_height_arch(f, 1, &point, share)?;
            LocalHeight {
                place: PlaceTag::Archimedean,
                value: v.value,
                radius: v.radius,
                iterations: v.iterations,
                exact: None,
            }
        }
    });

    for p in primes {
        let profile = padic::PadicProfile::new(&coeffs, &p);
        let lp = ln_prime(&p);
        // Half the bound is the radius; stop once it fits the share.
        let target =
            Rational::from_float(2.0 * share / lp / (1.0 + 1e-12)).unwrap_or_else(Rational::zero);
        let local = match padic::padic_local(&coeffs, x, &profile, &target, PADIC_BUDGET) {
            PadicOutcome::Exact { value, iterations } => {
                let exact = LogCombination::log_prime(p.clone(), value);
                LocalHeight {
                    place: PlaceTag::Prime(p),
                    value: exact.to_f64(),
                    radius: exact.rounding(),
                    iterations,
                    exact: Some(exact),
                }
            }
            PadicOutcome::Bounded { upper, iterations } => {
                let half = crate::arith::rational::rational_to_f64(&upper) / 2.0 * lp;
                let radius = ball_up(half);
                if radius > share {
                    return Err(HeightError::ToleranceUnreachable {
                        place: p.to_string(),
                        achieved: radius,
                        requested: share,
                    });
                }
                LocalHeight {
                    place: PlaceTag::Prime(p),
                    value: half,
                    radius,
                    iterations,
                    exact: None,
                }
            }
        };
        locals.push(local);
    }
    Ok(HeightResult::assemble(locals))
}

/// `ĥ_Φ(x) = Σ ĥ_{f_i}(x_i)`, with the tolerance split evenly across
/// coordinates.
pub fn canonical_height_split(
    phi: &SplitPolynomialMap,
    point: &[Rational],
    tol: f64,
) -> Result<HeightResult, HeightError> {
    if point.len() != phi.dimension() {
        return Err(HeightError::DimensionMismatch {
            expected: phi.dimension(),
            got: point.len(),
        });
    }
    let share = tol / point.len() as f64;
    let mut value = 0.0;
    let mut radius = 0.0;
    let mut locals = Vec::new();
    let mut exact = Some(LogCombination::zero());
    for (f, x) in phi.maps().iter().zip(point) {
        let h = canonical_height(f, x, share)?;
        value += h.value;
        radius += h.error_radius;
        exact = match (exact, &h.exact) {
            (Some(mut acc), Some(e)) => {
                acc.add(e);
                Some(acc)
            }
            _ => None,
        };
        locals.extend(h.locals);
    }
    Ok(match exact {
        Some(e) => HeightResult {
            value: e.to_f64(),
            error_radius: e.rounding(),
            locals,
            exact: Some(e),
        },
        None => HeightResult {
            value,
            error_radius: ball_up(radius + 4.0 * f64::EPSILON * value.abs()),
            locals,
            exact: None,
        },
    })
}

/// `h(fⁿ(x)) / dⁿ` from the exact iterate; within `C_f / (dⁿ(d−1))` of
/// `ĥ_f(x)` with `C_f` from [`height_constant`].
pub fn naive_limit_height(f: &Polynomial, x: &Rational, n: u32) -> Result<f64, HeightError> {
    let coeffs = rational_coeffs(f)?;
    let d = f.require_degree(2)? as u64;
    // Clear denominators once: f(a/b) = Σ c_j a^j b^(d−j) / (D·b^d).
    let den = coeffs.iter().fold(BigInt::one(), |acc, c| {
        num_integer::Integer::lcm(&acc, c.denom())
    });
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    let coeff_bits: u64 = ints.iter().map(|c| c.bits()).sum::<u64>() + den.bits();
    let mut z = x.clone();
    for _ in 0..n {
        let projected = bit_size(&z).max(1) * d + coeff_bits;
        if projected > NAIVE_BIT_CAP {
            return Err(HeightError::BitBudget {
                bits: projected,
                cap: NAIVE_BIT_CAP,
            });
        }
        let (a, b) = (z.numer(), z.denom());
        let mut num = BigInt::zero();
        let mut b_pow = BigInt::one();
        for c in ints.iter().rev() {
            num = num * a + c * &b_pow;
            b_pow *= b;
        }
        // b_pow ends at b^(d+1).
        z = Rational::new(num, &den * (b_pow / b));
    }
    let scale = (d as f64).powi(n as i32);
    Ok(weil_height(&z) / scale)
}
