//! Local canonical heights at finite places for polynomials over ℚ.
//!
//! `λ_p(x) = lim max(0, −v_p(fⁿ(x))) · log p / dⁿ`. Three certificates end
//! the iteration:
//!
//! * **escape**: once `w = v_p(fⁿ(x))` drops below the threshold `E` the
//!   leading term dominates and `v_p(f(z)) = d·w + v_d` for all later
//!   iterates, so the limit is `−(w + v_d/(d−1)) / dⁿ` exactly;
//! * **invariant ball**: when `{v_p ≥ E'}` maps into itself, an iterate
//!   entering it has bounded orbit and `λ_p = 0` exactly;
//! * **bound**: an iterate that has not escaped after `n` steps leaves
//!   `λ_p(x) ∈ [0, B/dⁿ]`, `B` computed from the valuations.
//!
//! Iterates are exact rationals while they are small, then p-adic
//! approximations with tracked precision.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::rational::{bit_size, padic_valuation, to_signed};
use crate::arith::Rational;

const EXACT_BITS: u64 = 1 << 14;
const START_DIGITS: u32 = 64;
const MAX_DIGITS: u32 = 1 << 13;

/// Outcome of the p-adic local height computation, in units of `log p`.
#[derive(Clone, Debug, PartialEq)]
pub enum PadicOutcome {
    Exact { value: Rational, iterations: u32 },
    Bounded { upper: Rational, iterations: u32 },
}

/// Valuation data of `f` at `p` and the derived thresholds.
#[derive(Clone, Debug)]
pub(crate) struct PadicProfile {
    prime: BigUint,
    degree: usize,
    /// `(j, v_p(a_j))` for nonzero coefficients.
    vals: Vec<(usize, i64)>,
    lead_val: i64,
    /// Escape threshold: `w < escape` forces dominance of the leading term and
    /// strictly decreasing valuations.
    escape: Rational,
    /// Smallest `E'` with `{v ≥ E'}` forward invariant, if one exists.
    ball: Option<i64>,
    /// `B` in the bounded certificate.
    tail_bound: Rational,
}

fn ceil_rat(x: &Rational) -> i64 {
    x.ceil()
        .to_integer()
        .to_i64()
        .expect("valuation bound fits i64")
}

impl PadicProfile {
    pub fn new(coeffs: &[Rational], prime: &BigUint) -> Self {
        let degree = coeffs.len() - 1;
        let vals: Vec<(usize, i64)> = coeffs
            .iter()
            .enumerate()
            .filter_map(|(j, c)| padic_valuation(c, prime).map(|v| (j, v)))
            .collect();
        let lead_val = vals.last().expect("nonzero leading coefficient").1;
        let d = degree as i64;
        let drift = Rational::new(BigInt::from(lead_val), BigInt::from(d - 1));

        let mut escape = -drift.clone();
        for &(j, v) in vals.iter().filter(|(j, _)| *j < degree) {
            let t = Rational::new(BigInt::from(v - lead_val), BigInt::from(d - j as i64));
            if t < escape {
                escape = t;
            }
        }

        let linear_ok = vals.iter().all(|&(j, v)| j != 1 || v >= 0);
        let ball_floor = vals
            .iter()
            .filter(|(j, _)| *j >= 2)
            .map(|&(j, v)| ceil_rat(&Rational::new(BigInt::from(-v), BigInt::from(j as i64 - 1))))
            .max()
            .expect("degree at least 2");
        let const_ok = vals.iter().all(|&(j, v)| j != 0 || ball_floor <= v);
        let ball = (linear_ok && const_ok).then_some(ball_floor);

        let e = ceil_rat(&escape);
        let w0 = vals
            .iter()
            .map(|&(j, v)| v + j as i64 * e)
            .min()
            .expect("nonempty");
        let b = -(Rational::from_integer(BigInt::from(w0)) + &drift);
        let tail_bound = if b.is_positive() { b } else { Rational::zero() };

        PadicProfile {
            prime: prime.clone(),
            degree,
            vals,
            lead_val,
            escape,
            ball,
            tail_bound,
        }
    }

    /// Good reduction: integral coefficients and a unit leading coefficient.
    pub fn is_good(&self) -> bool {
        self.lead_val == 0 && self.vals.iter().all(|&(_, v)| v >= 0)
    }

    pub fn escapes(&self, w: i64) -> bool {
        Rational::from_integer(BigInt::from(w)) < self.escape
    }

    /// Closed-form limit from an escaping iterate with valuation `w` at step `n`.
    fn escape_value(&self, w: i64, n: u32) -> Rational {
        let d = self.degree as i64;
        let drift = Rational::new(BigInt::from(self.lead_val), BigInt::from(d - 1));
        -(Rational::from_integer(BigInt::from(w)) + drift)
            / Rational::from_integer(BigInt::from(d).pow(n))
    }

    fn in_ball(&self, w: Option<i64>) -> bool {
        match (self.ball, w) {
            (Some(_), None) => true,
            (Some(e), Some(w)) => w >= e,
            (None, _) => false,
        }
    }

    fn bound_after(&self, n: u32) -> Rational {
        &self.tail_bound / Rational::from_integer(BigInt::from(self.degree as i64).pow(n))
    }

    /// Worst-case `|log⁺|f(z)|_p − d·log⁺|z|_p|` in units of `log p`.
    pub fn discrepancy(&self) -> i64 {
        let d = self.degree as i64;
        let s = self
            .vals
            .iter()
            .filter(|(j, _)| *j < self.degree)
            .map(|&(_, v)| self.lead_val - v)
            .max()
            .unwrap_or(i64::MIN)
            .max(0);
        let a = (-self.lead_val).max(0) + s;
        let b = self.lead_val.max(0);
        a.max(b).max(d * s)
    }
}

/// A p-adic number known to finite precision.
#[derive(Clone, Debug)]
enum Approx {
    /// Congruent to 0 modulo `p^abs`.
    Small { abs: i64 },
    /// `p^val · unit` with `unit` a p-adic unit known modulo `p^rel`.
    Exact { val: i64, unit: BigInt, rel: u32 },
}

struct PadicCtx {
    p: BigInt,
}

impl PadicCtx {
    fn pow(&self, k: u32) -> BigInt {
        num_traits::pow(self.p.clone(), k as usize)
    }

    fn approximate(&self, x: &Rational, rel: u32) -> Approx {
        let pu = self.p.magnitude().clone();
        let Some(val) = padic_valuation(x, &pu) else {
            return Approx::Small { abs: i64::MAX / 4 };
        };
        let mut num = x.numer().clone();
        let mut den = x.denom().clone();
        while (&num % &self.p).is_zero() {
            num /= &self.p;
        }
        while (&den % &self.p).is_zero() {
            den /= &self.p;
        }
        let modulus = self.pow(rel);
        let inv = den.mod_floor(&modulus).modinv(&modulus).expect("unit");
        Approx::Exact {
            val,
            unit: (num * inv).mod_floor(&modulus),
            rel,
        }
    }

    fn abs_prec(a: &Approx) -> i64 {
        match a {
            Approx::Small { abs } => *abs,
            Approx::Exact { val, rel, .. } => val + *rel as i64,
        }
    }

    fn add(&self, x: &Approx, y: &Approx) -> Approx {
        let abs = Self::abs_prec(x).min(Self::abs_prec(y));
        let parts: Vec<(i64, &BigInt)> = [x, y]
            .iter()
            .filter_map(|a| match a {
                Approx::Exact { val, unit, .. } => Some((*val, unit)),
                Approx::Small { .. } => None,
            })
            .collect();
        let Some(e) = parts.iter().map(|(v, _)| *v).min() else {
            return Approx::Small { abs };
        };
        if abs <= e {
            return Approx::Small { abs };
        }
        let width = (abs - e) as u32;
        let modulus = self.pow(width);
        let mut m = BigInt::zero();
        for (v, u) in parts {
            if v < abs {
                m += u * self.pow((v - e) as u32);
            }
        }
        let m = m.mod_floor(&modulus);
        if m.is_zero() {
            return Approx::Small { abs };
        }
        let mut k = 0u32;
        let mut unit = m;
        while (&unit % &self.p).is_zero() {
            unit /= &self.p;
            k += 1;
        }
        Approx::Exact {
            val: e + k as i64,
            unit,
            rel: width - k,
        }
    }

    fn mul(&self, x: &Approx, y: &Approx) -> Approx {
        match (x, y) {
            (
                Approx::Exact {
                    val: v1,
                    unit: u1,
                    rel: r1,
                },
                Approx::Exact {
                    val: v2,
                    unit: u2,
                    rel: r2,
                },
            ) => {
                let rel = (*r1).min(*r2);
                Approx::Exact {
                    val: v1 + v2,
                    unit: (u1 * u2).mod_floor(&self.pow(rel)),
                    rel,
                }
            }
            (Approx::Small { abs }, Approx::Exact { val, .. })
            | (Approx::Exact { val, .. }, Approx::Small { abs }) => {
                Approx::Small { abs: abs + val }
            }
            (Approx::Small { abs: a }, Approx::Small { abs: b }) => Approx::Small { abs: a + b },
        }
    }

    fn eval(&self, coeffs: &[Option<Approx>], z: &Approx) -> Approx {
        let mut acc: Option<Approx> = None;
        for c in coeffs.iter().rev() {
            let prod = acc.map(|a| self.mul(&a, z));
            acc = match (prod, c) {
                (None, None) => None,
                (None, Some(c)) => Some(c.clone()),
                (Some(p), None) => Some(p),
                (Some(p), Some(c)) => Some(self.add(&p, c)),
            };
        }
        acc.expect("nonzero polynomial")
    }
}

/// Runs the certificate loop until the value is exact or the bound falls to
/// `target` (in units of `log p`), or `budget` iterations are spent.
pub(crate) fn padic_local(
    coeffs: &[Rational],
    x: &Rational,
    profile: &PadicProfile,
    target: &Rational,
    budget: u32,
) -> PadicOutcome {
    let p = &profile.prime;
    if profile.is_good() {
        let v = padic_valuation(x, p).unwrap_or(0);
        return PadicOutcome::Exact {
            value: Rational::from_integer(BigInt::from((-v).max(0))),
            iterations: 0,
        };
    }
    let mut z = x.clone();
    let mut n: u32 = 0;
    loop {
        let w = padic_valuation(&z, p);
        if let Some(w) = w {
            if profile.escapes(w) {
                return PadicOutcome::Exact {
                    value: profile.escape_value(w, n),
                    iterations: n,
                };
            }
        }
        if profile.in_ball(w) {
            return PadicOutcome::Exact {
                value: Rational::zero(),
                iterations: n,
            };
        }
        let upper = profile.bound_after(n);
        if &upper <= target || n >= budget {
            return PadicOutcome::Bounded {
                upper,
                iterations: n,
            };
        }
        if bit_size(&z) > EXACT_BITS {
            return approx_phase(coeffs, &z, n, profile, target, budget);
        }
        z = crate::arith::Polynomial::eval_rational(coeffs, &z);
        n += 1;
    }
}

fn approx_phase(
    coeffs: &[Rational],
    start: &Rational,
    start_n: u32,
    profile: &PadicProfile,
    target: &Rational,
    budget: u32,
) -> PadicOutcome {
    let ctx = PadicCtx {
        p: to_signed(&profile.prime),
    };
    let mut digits = START_DIGITS;
    'precision: while digits <= MAX_DIGITS {
        let approx_coeffs: Vec<Option<Approx>> = coeffs
            .iter()
            .map(|c| (!c.is_zero()).then(|| ctx.approximate(c, digits + 8)))
            .collect();
        let mut z = ctx.approximate(start, digits);
        let mut n = start_n;
        loop {
            let w = match &z {
                Approx::Exact { val, .. } => Some(*val),
                Approx::Small { .. } => None,
            };
            match w {
                Some(w) if profile.escapes(w) => {
                    return PadicOutcome::Exact {
                        value: profile.escape_value(w, n),
                        iterations: n,
                    };
                }
                Some(w) if profile.in_ball(Some(w)) => {
                    return PadicOutcome::Exact {
                        value: Rational::zero(),
                        iterations: n,
                    };
                }
                Some(_) => {}
                None => {
                    let Approx::Small { abs } = z else {
                        unreachable!()
                    };
                    if profile.ball.is_some_and(|e| abs >= e) {
                        return PadicOutcome::Exact {
                            value: Rational::zero(),
                            iterations: n,
                        };
                    }
                    digits *= 2;
                    continue 'precision;
                }
            }
            let upper = profile.bound_after(n);
            if &upper <= target || n >= budget {
                return PadicOutcome::Bounded {
                    upper,
                    iterations: n,
                };
            }
            z = ctx.eval(&approx_coeffs, &z);
            n += 1;
        }
    }
    // Precision exhausted: the last certified bound is all we can claim.
    PadicOutcome::Bounded {
        upper: profile.bound_after(start_n),
        iterations: start_n,
    }
}
