//! Cyclotomic polynomials, minimal polynomials and root-of-unity detection.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::cyclo::{cyclotomic_coeffs, CycloNumber};
use super::linalg;
use super::poly::Polynomial;
use super::primes::{divisors, euler_phi};
use super::rational::{is_integer, Rational};

/// The N-th cyclotomic polynomial as a polynomial over ℚ.
pub fn cyclotomic_polynomial(n: u32) -> Polynomial {
    let coeffs: Vec<Rational> = cyclotomic_coeffs(n)
        .iter()
        .map(|c| Rational::from_integer(c.clone()))
        .collect();
    Polynomial::from_rationals(1, &coeffs)
}

/// Monic minimal polynomial over ℚ (returned with conductor 1).
///
/// Finds the first power `x^k` lying in the ℚ-span of `1, x, …, x^{k-1}`
/// (inside the power basis of ℚ(ζ_N)); the linear relation is the minimal
/// polynomial.
pub fn minimal_polynomial(x: &CycloNumber) -> Polynomial {
    let mut powers: Vec<Vec<Rational>> = vec![CycloNumber::one(x.conductor()).coords().to_vec()];
    let mut current = CycloNumber::one(x.conductor());
    loop {
        current = &current * x;
        if let Some(rel) = linalg::solve_columns(&powers, current.coords()) {
            let mut coeffs: Vec<Rational> = rel.into_iter().map(|c| -c).collect();
            coeffs.push(Rational::one());
            return Polynomial::from_rationals(1, &coeffs);
        }
        powers.push(current.coords().to_vec());
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind", content = "order")]
pub enum RootOfUnity {
    Order(u64),
    NotRootOfUnity,
}

/// Multiplicative order of `x` if it is a root of unity.
///
/// The roots of unity in ℚ(ζ_N) have order dividing `N` (N even) or `2N`
/// (N odd), so only divisors of that bound are tried, smallest first.
pub fn is_root_of_unity(x: &CycloNumber) -> RootOfUnity {
    let n = x.conductor() as u64;
    if x.is_zero() {
        return RootOfUnity::NotRootOfUnity;
    }
    // Torsion elements are algebraic integers; rationals other than ±1 are not.
    if let Some(r) = x.as_rational() {
        return if r.is_one() {
            RootOfUnity::Order(1)
        } else if (-r).is_one() {
            RootOfUnity::Order(2)
        } else {
            RootOfUnity::NotRootOfUnity
        };
    }
    let bound = if n.is_multiple_of(2) { n } else { 2 * n };
    for m in divisors(bound) {
        if x.pow(m).is_one() {
            return RootOfUnity::Order(m);
        }
    }
    RootOfUnity::NotRootOfUnity
}

fn monic_integer(coeffs: &[Rational]) -> Option<Vec<BigInt>> {
    if !coeffs.last()?.is_one() {
        return None;
    }
    coeffs
        .iter()
        .map(|c| is_integer(c).then(|| c.numer().clone()))
        .collect()
}

/// Kronecker-style test on a minimal polynomial: returns `n` when the
/// polynomial equals Φ_n (so its roots are primitive n-th roots of unity).
/// Candidates satisfy φ(n) = degree, and φ(n) ≥ √(n/2) bounds n by 2·deg².
pub fn cyclotomic_index(coeffs: &[Rational]) -> Option<u64> {
    let ints = monic_integer(coeffs)?;
    let deg = (ints.len() - 1) as u64;
    if deg == 0 {
        return None;
    }
    (1..=2 * deg * deg)
        .filter(|&n| euler_phi(n) == deg)
        .find(|&n| *cyclotomic_coeffs(n as u32) == ints)
}

/// If every root of the (possibly reducible) polynomial is a root of unity,
/// returns the lcm of their orders; otherwise `None`. The polynomial must be
/// monic with integer coefficients and is peeled into cyclotomic factors.
pub fn torsion_roots_order(coeffs: &[Rational]) -> Option<u64> {
    let mut rest = monic_integer(coeffs)?;
    let mut order = 1u64;
    let mut n = 1u64;
    while rest.len() > 1 {
        let deg = (rest.len() - 1) as u64;
        // φ(n) ≥ √(n/2) once more.
        if n > 2 * deg * deg {
            return None;
        }
        if euler_phi(n) <= deg {
            let phi = cyclotomic_coeffs(n as u32);
            while rest.len() >= phi.len() {
                match exact_quotient(&rest, &phi) {
                    Some(q) => {
                        rest = q;
                        order = order.lcm(&n);
                    }
                    None => break,
                }
            }
        }
        n += 1;
    }
    rest[0].is_one().then_some(order)
}

fn exact_quotient(num: &[BigInt], den: &[BigInt]) -> Option<Vec<BigInt>> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= &c * dj;
        }
        quot[k] = c;
    }
    rem.iter().all(Zero::is_zero).then_some(quot)
}
