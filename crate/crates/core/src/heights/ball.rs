//! Complex ball arithmetic on fixed-point big integers.
//!
//! A ball is a center `(re + i·im) / 2^prec` with `re, im` arbitrary-size
//! integers, plus an `f64` radius that is always rounded upward. Every
//! operation folds its truncation error into the radius, so the true value
//! stays inside the ball.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{CycloNumber, Rational};

/// Precision cap; `2^-MAX_PREC` must stay a normal `f64`.
pub(crate) const MAX_PREC: u32 = 960;

const SLACK: f64 = 1.0 + 8.0 * f64::EPSILON;

/// Rounds a nonnegative radius computation upward.
pub(crate) fn up(x: f64) -> f64 {
    x * SLACK + f64::MIN_POSITIVE
}

pub(crate) fn down(x: f64) -> f64 {
    (x / SLACK - f64::MIN_POSITIVE).max(0.0)
}

fn pow2(k: i64) -> f64 {
    let mut out = 1.0;
    let mut k = k;
    while k > 1000 {
        out *= 2f64.powi(1000);
        k -= 1000;
    }
    while k < -1000 {
        out *= 2f64.powi(-1000);
        k += 1000;
    }
    out * 2f64.powi(k as i32)
}

/// `m / 2^prec` as an `f64`, relative error below 2^-52.
fn fixed_to_f64(m: &BigInt, prec: u32) -> f64 {
    let bits = m.bits();
    if bits <= 1000 {
        return m.to_f64().unwrap_or(0.0) * pow2(-(prec as i64));
    }
    let shift = bits - 64;
    let top: BigInt = m >> shift;
    top.to_f64().unwrap_or(0.0) * pow2(shift as i64 - prec as i64)
}

#[derive(Clone, Debug)]
pub(crate) struct Ball {
    re: BigInt,
    im: BigInt,
    rad: f64,
}

impl Ball {
    pub fn zero() -> Self {
        Ball {
            re: BigInt::zero(),
            im: BigInt::zero(),
            rad: 0.0,
        }
    }

    pub fn ulp(prec: u32) -> f64 {
        pow2(-(prec as i64))
    }

    pub fn from_rational(x: &Rational, prec: u32) -> Self {
        let scaled: BigInt = x.numer() << prec;
        let (q, r) = scaled.div_mod_floor(x.denom());
        Ball {
            re: q,
            im: BigInt::zero(),
            rad: if r.is_zero() { 0.0 } else { Self::ulp(prec) },
        }
    }

    pub fn from_f64_pair(re: f64, im: f64, prec: u32) -> Option<Self> {
        let r = Rational::from_float(re)?;
        let i = Rational::from_float(im)?;
        let a = Self::from_rational(&r, prec);
        let b = Self::from_rational(&i, prec);
        Some(Ball {
            re: a.re,
            im: b.re,
            rad: up(a.rad + b.rad),
        })
    }

    /// Image of a cyclotomic number under ζ_N ↦ exp(2πi·j/N).
    pub fn from_cyclo(x: &CycloNumber, embedding: u32, prec: u32) -> Self {
        if let Some(r) = x.as_rational() {
            return Self::from_rational(r, prec);
        }
        let n = x.conductor() as u64;
        let mut acc = Ball::zero();
        for (k, c) in x.coords().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (cos, sin) = trig_2pi_fraction((k as u64 * embedding as u64) % n, n, prec);
            let root = Ball {
                re: cos,
                im: sin,
                rad: 2.0 * Self::ulp(prec),
            };
            acc = acc.add(&Self::from_rational(c, prec).mul(&root, prec));
        }
        acc
    }

    pub fn radius(&self) -> f64 {
        self.rad
    }

    /// Upper bound on `|center|`.
    fn center_abs_upper(&self, prec: u32) -> f64 {
        let re = fixed_to_f64(&self.re, prec).abs();
        let im = fixed_to_f64(&self.im, prec).abs();
        up(re.hypot(im))
    }

    fn center_abs_lower(&self, prec: u32) -> f64 {
        let re = fixed_to_f64(&self.re, prec).abs();
        let im = fixed_to_f64(&self.im, prec).abs();
        down(re.hypot(im))
    }

    /// Upper bound on the modulus of any point in the ball.
    pub fn abs_upper(&self, prec: u32) -> f64 {
        up(self.center_abs_upper(prec) + self.rad)
    }

    /// Lower bound on the modulus of any point in the ball.
    pub fn abs_lower(&self, prec: u32) -> f64 {
        down(self.center_abs_lower(prec) - self.rad).max(0.0)
    }

    pub fn add(&self, other: &Ball) -> Ball {
        Ball {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
            rad: up(self.rad + other.rad),
        }
    }

    pub fn mul(&self, other: &Ball, prec: u32) -> Ball {
        let re: BigInt = (&self.re * &other.re - &self.im * &other.im) >> prec;
        let im: BigInt = (&self.re * &other.im + &self.im * &other.re) >> prec;
        let a = self.center_abs_upper(prec);
        let b = other.center_abs_upper(prec);
        let rad = up(a * other.rad + b * self.rad + self.rad * other.rad + 2.0 * Self::ulp(prec));
        Ball { re, im, rad }
    }

    /// Horner evaluation of a polynomial given by coefficient balls.
    pub fn eval_poly(coeffs: &[Ball], z: &Ball, prec: u32) -> Ball {
        let mut acc = Ball::zero();
        for c in coeffs.iter().rev() {
            acc = acc.mul(z, prec).add(c);
        }
        acc
    }
}

/// `(cos, sin)` of `2π·num/den` as fixed-point integers scaled by `2^prec`,
/// each within `2^-prec` of the true value.
pub(crate) fn trig_2pi_fraction(num: u64, den: u64, prec: u32) -> (BigInt, BigInt) {
    let guard = 32;
    let p = prec + guard;
    let num = num % den;
    // Reduce to θ ∈ (−π, π].
    let (num, sign) = if 2 * num > den {
        (den - num, -1)
    } else {
        (num, 1)
    };
    let two_pi = pi_fixed(p) << 1u32;
    let theta: BigInt = two_pi * BigInt::from(num) / BigInt::from(den);
    let theta_sq: BigInt = (&theta * &theta) >> p;
    let one: BigInt = BigInt::one() << p;

    let mut cos = one.clone();
    let mut term = one;
    let mut k: u64 = 1;
    loop {
        term = -((&term * &theta_sq) >> p) / BigInt::from((2 * k - 1) * (2 * k));
        if term.is_zero() {
            break;
        }
        cos += &term;
        k += 1;
    }
    let mut sin = theta.clone();
    let mut term = theta;
    let mut k: u64 = 1;
    loop {
        term = -((&term * &theta_sq) >> p) / BigInt::from((2 * k) * (2 * k + 1));
        if term.is_zero() {
            break;
        }
        sin += &term;
        k += 1;
    }
    let sin = if sign < 0 { -sin } else { sin };
    (cos >> guard, sin >> guard)
}

/// π scaled by `2^p` (Machin's formula).
fn pi_fixed(p: u32) -> BigInt {
    fn atan_inv(x: u64, p: u32) -> BigInt {
        let x = BigInt::from(x);
        let x2 = &x * &x;
        let mut power: BigInt = (BigInt::one() << p) / &x;
        let mut sum = power.clone();
        let mut k: u64 = 1;
        loop {
            power = -(power / &x2);
            let term = &power / BigInt::from(2 * k + 1);
            if term.is_zero() {
                break;
            }
            sum += term;
            k += 1;
        }
        sum
    }
    let guard = 16;
    let v = (atan_inv(5, p + guard) << 4u32) - (atan_inv(239, p + guard) << 2u32);
    v >> guard
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    #[test]
    fn pi_digits() {
        let p = 200;
        let pi = pi_fixed(p);
        let approx = fixed_to_f64(&pi, p);
        assert!((approx - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn trig_matches_libm() {
        for den in 1..=24u64 {
            for num in 0..den {
                let (c, s) = trig_2pi_fraction(num, den, 128);
                let angle = std::f64::consts::TAU * num as f64 / den as f64;
                assert!((fixed_to_f64(&c, 128) - angle.cos()).abs() < 1e-14);
                assert!((fixed_to_f64(&s, 128) - angle.sin()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn ball_contains_square() {
        let prec = 100;
        let x = Ball::from_rational(&rat(1, 3), prec);
        let sq = x.mul(&x, prec);
        let lo = sq.abs_lower(prec);
        let hi = sq.abs_upper(prec);
        assert!(lo <= 1.0 / 9.0 && 1.0 / 9.0 <= hi);
        assert!(hi - lo < 1e-15);
    }

    #[test]
    fn embedded_gaussian_integer() {
        let i = CycloNumber::zeta(4);
        let b = Ball::from_cyclo(&(&CycloNumber::one(4) + &i), 1, 128);
        let m = b.abs_upper(128);
        assert!((m - 2f64.sqrt()).abs() < 1e-14);
    }
}
