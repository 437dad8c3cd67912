//! Helpers around [`BigRational`]: construction, p-adic valuations and
//! logarithms of arbitrary-size integers.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number, always stored in lowest terms with a positive
/// denominator (guaranteed by `num_rational`).
pub type Rational = BigRational;

/// Builds `num/den` from machine integers. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exponent of `p` in a nonzero integer.
pub fn int_valuation(n: &BigInt, p: &BigUint) -> u64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from_biguint(Sign::Plus, p.clone());
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `v_p(x)`, or `None` for `x = 0`.
pub fn padic_valuation(x: &Rational, p: &BigUint) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(int_valuation(x.numer(), p) as i64 - int_valuation(x.denom(), p) as i64)
}

/// Natural log of a positive integer, accurate to a few ulps for any size.
pub fn ln_bigint(n: &BigInt) -> f64 {
    debug_assert!(n.is_positive());
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().expect("finite for <= 1000 bits").ln();
    }
    let shift = bits - 64;
    let top: BigInt = n >> shift;
    top.to_f64().expect("64-bit value").ln() + shift as f64 * std::f64::consts::LN_2
}

/// `log max(|p|, q)` for `x = p/q` in lowest terms.
pub fn ln_height(x: &Rational) -> f64 {
    let num = x.numer().abs();
    let den = x.denom();
    let big = if &num > den { num } else { den.clone() };
    if big.is_one() {
        0.0
    } else {
        ln_bigint(&big)
    }
}

/// Total bit size of numerator and denominator.
pub fn bit_size(x: &Rational) -> u64 {
    x.numer().bits() + x.denom().bits()
}

/// Closest `f64` to a rational, including ones whose parts overflow `f64`.
pub fn rational_to_f64(x: &Rational) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    if x.is_zero() {
        return 0.0;
    }
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    let ln = ln_bigint(&x.numer().abs()) - ln_bigint(x.denom());
    sign * ln.exp()
}

/// Converts `BigUint` to `BigInt`.
pub fn to_signed(p: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, p.clone())
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuations() {
        let two = BigUint::from(2u32);
        assert_eq!(padic_valuation(&rat(3, 8), &two), Some(-3));
        assert_eq!(padic_valuation(&rat(12, 5), &two), Some(2));
        assert_eq!(padic_valuation(&rat(0, 5), &two), None);
    }

    #[test]
    fn log_of_huge_integer() {
        let n: BigInt = BigInt::one() << 5000u32;
        let got = ln_bigint(&n);
        let want = 5000.0 * std::f64::consts::LN_2;
        assert!((got - want).abs() < 1e-9 * want);
        assert!((ln_bigint(&BigInt::from(10)) - 10f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn heights_of_small_rationals() {
        assert_eq!(ln_height(&rat(0, 1)), 0.0);
        assert!((ln_height(&rat(-7, 2)) - 7f64.ln()).abs() < 1e-15);
        assert!((ln_height(&rat(2, 3)) - 3f64.ln()).abs() < 1e-15);
    }
}
