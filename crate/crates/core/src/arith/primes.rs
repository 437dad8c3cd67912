//! Prime factorization of arbitrary-size integers.
//!
//! Trial division by small primes, then Miller-Rabin and Pollard-Brent rho
//! on the cofactor. Miller-Rabin uses the first sixteen primes as bases,
//! which is deterministic below 3.3 * 10^24 and overwhelmingly reliable
//! above that.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

const TRIAL_LIMIT: u32 = 10_000;
const MR_BASES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut sieve = vec![true; TRIAL_LIMIT as usize];
        let mut out = Vec::new();
        for n in 2..TRIAL_LIMIT as usize {
            if sieve[n] {
                out.push(n as u32);
                let mut m = n * n;
                while m < sieve.len() {
                    sieve[m] = false;
                    m += n;
                }
            }
        }
        out
    })
}

pub fn is_prime(n: &BigUint) -> bool {
    if n < &BigUint::from(2u32) {
        return false;
    }
    for b in MR_BASES {
        let b = BigUint::from(b);
        if n == &b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'bases: for b in MR_BASES {
        let mut x = BigUint::from(b).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Nontrivial factor of an odd composite `n` via Brent's variant of rho.
fn pollard_brent(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let m = 128u64;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1u32;
    }
}

fn split_into(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(&n);
    let e = &n / &d;
    split_into(d, out);
    split_into(e, out);
}

/// Prime factorization as sorted `(prime, exponent)` pairs. `factor(0)` and
/// `factor(1)` are empty.
pub fn factor(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut n = n.clone();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    for &p in small_primes() {
        let pb = BigUint::from(p);
        if &pb * &pb > n {
            break;
        }
        let mut e = 0;
        while (&n % &pb).is_zero() {
            n /= &pb;
            e += 1;
        }
        if e > 0 {
            out.push((pb, e));
        }
    }
    if !n.is_one() {
        let mut rest = Vec::new();
        split_into(n, &mut rest);
        rest.sort();
        for p in rest {
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
    }
    out
}

/// Set of primes dividing a nonzero integer.
pub fn prime_divisors(n: &BigInt) -> BTreeSet<BigUint> {
    factor(&n.abs().to_biguint().expect("nonnegative"))
        .into_iter()
        .map(|(p, _)| p)
        .collect()
}

/// Euler's totient of a machine integer.
pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}
