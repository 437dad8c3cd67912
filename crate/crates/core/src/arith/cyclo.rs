//! Exact arithmetic in the cyclotomic field ℚ(ζ_N).
//!
//! Elements are coordinate vectors over the power basis `1, ζ, …, ζ^{φ(N)-1}`
//! and every result is reduced modulo the N-th cyclotomic polynomial, so two
//! elements are equal iff their coordinates are. Elements of different
//! conductors never mix implicitly; use [`CycloNumber::lift`].

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::linalg;
use super::primes::{divisors, euler_phi};
use super::rational::{rational_to_f64, Rational};
use super::ArithError;

/// Coefficients (constant term first) of the N-th cyclotomic polynomial,
/// obtained by exact division of `z^N - 1` by `Φ_d` for every proper divisor d.
pub fn cyclotomic_coeffs(n: u32) -> Arc<Vec<BigInt>> {
    assert!(n >= 1, "cyclotomic polynomial index must be positive");
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<BigInt>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("cache poisoned").get(&n) {
        return Arc::clone(hit);
    }
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in divisors(n as u64) {
        if d == n as u64 {
            continue;
        }
        let div = cyclotomic_coeffs(d as u32);
        num = divide_monic(&num, &div);
    }
    let out = Arc::new(num);
    cache
        .lock()
        .expect("cache poisoned")
        .insert(n, Arc::clone(&out));
    out
}

/// Exact quotient of integer polynomials by a monic divisor; the remainder
/// must vanish.
fn divide_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
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
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

#[derive(Debug)]
pub(crate) struct CycloField {
    conductor: u32,
    degree: usize,
    modulus: Vec<Rational>,
}

fn field(n: u32) -> Arc<CycloField> {
    static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<CycloField>>>> = OnceLock::new();
    let fields = FIELDS.get_or_init(Default::default);
    if let Some(f) = fields.lock().expect("cache poisoned").get(&n) {
        return Arc::clone(f);
    }
    let coeffs = cyclotomic_coeffs(n);
    let f = Arc::new(CycloField {
        conductor: n,
        degree: euler_phi(n as u64) as usize,
        modulus: coeffs
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect(),
    });
    fields
        .lock()
        .expect("cache poisoned")
        .insert(n, Arc::clone(&f));
    f
}

impl CycloField {
    /// Reduces an arbitrary-length coefficient vector modulo Φ_N.
    fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        let deg = self.degree;
        if v.len() > deg {
            for k in (deg..v.len()).rev() {
                let c = std::mem::replace(&mut v[k], Rational::zero());
                if c.is_zero() {
                    continue;
                }
                for j in 0..deg {
                    if !self.modulus[j].is_zero() {
                        let t = &c * &self.modulus[j];
                        v[k - deg + j] -= t;
                    }
                }
            }
            v.truncate(deg);
        }
        v.resize(deg, Rational::zero());
        v
    }
}

/// An element of ℚ(ζ_N).
#[derive(Clone)]
pub struct CycloNumber {
    field: Arc<CycloField>,
    coords: Vec<Rational>,
}

impl CycloNumber {
    /// Builds an element from power-basis coordinates of any length; entries
    /// beyond φ(N) are reduced.
    pub fn from_coords(conductor: u32, coords: Vec<Rational>) -> Self {
        let field = field(conductor);
        let coords = field.reduce(coords);
        CycloNumber { field, coords }
    }

    pub fn from_rational(conductor: u32, x: Rational) -> Self {
        Self::from_coords(conductor, vec![x])
    }

    pub fn from_int(conductor: u32, n: i64) -> Self {
        Self::from_rational(conductor, Rational::from_integer(BigInt::from(n)))
    }

    pub fn zero(conductor: u32) -> Self {
        Self::from_coords(conductor, Vec::new())
    }

    pub fn one(conductor: u32) -> Self {
        Self::from_int(conductor, 1)
    }

    /// `ζ_N^k` for any integer k.
    pub fn zeta_pow(conductor: u32, k: i64) -> Self {
        let e = k.rem_euclid(conductor as i64) as usize;
        let mut v = vec![Rational::zero(); e + 1];
        v[e] = Rational::one();
        Self::from_coords(conductor, v)
    }

    /// The generator ζ_N = exp(2πi/N) under the standard embedding.
    pub fn zeta(conductor: u32) -> Self {
        Self::zeta_pow(conductor, 1)
    }

    pub fn conductor(&self) -> u32 {
        self.field.conductor
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, when the element lies in ℚ.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coords[1..].iter().all(Zero::is_zero) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    fn check(&self, other: &Self) -> Result<(), ArithError> {
        if self.conductor() == other.conductor() {
            Ok(())
        } else {
            Err(ArithError::ConductorMismatch {
                left: self.conductor(),
                right: other.conductor(),
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ArithError> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.check(other)?;
        Ok(self.add_unchecked(&-other))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ArithError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ArithError> {
        self.check(other)?;
        let inv = other.inv().ok_or(ArithError::DivisionByZero)?;
        Ok(self.mul_unchecked(&inv))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        CycloNumber {
            field: Arc::clone(&self.field),
            coords,
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        if let (Some(a), Some(b)) = (self.as_rational(), other.as_rational()) {
            return Self::from_rational(self.conductor(), a * b);
        }
        let n = self.coords.len();
        let mut prod = vec![Rational::zero(); 2 * n - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        CycloNumber {
            field: Arc::clone(&self.field),
            coords: self.field.reduce(prod),
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CycloNumber {
            field: Arc::clone(&self.field),
            coords: self.coords.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse, `None` for zero. Solves `x · y = 1` through the
    /// multiplication-by-x matrix on the power basis.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return Some(Self::from_rational(self.conductor(), r.recip()));
        }
        let n = self.coords.len();
        let columns: Vec<Vec<Rational>> = (0..n)
            .map(|j| {
                self.mul_unchecked(&Self::zeta_pow(self.conductor(), j as i64))
                    .coords
            })
            .collect();
        let mut rhs = vec![Rational::zero(); n];
        rhs[0] = Rational::one();
        let y = linalg::solve_columns(&columns, &rhs)?;
        Some(Self::from_coords(self.conductor(), y))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.conductor());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Re-expresses the element in ℚ(ζ_M) for a multiple M of the conductor,
    /// using ζ_N = ζ_M^{M/N}.
    pub fn lift(&self, target: u32) -> Result<Self, ArithError> {
        let n = self.conductor();
        if !target.is_multiple_of(n) {
            return Err(ArithError::BadLift {
                from: n,
                to: target,
            });
        }
        let step = (target / n) as usize;
        let mut v = vec![Rational::zero(); step * (self.coords.len() - 1) + 1];
        for (k, c) in self.coords.iter().enumerate() {
            v[k * step] = c.clone();
        }
        Ok(Self::from_coords(target, v))
    }

    /// Image under the embedding ζ_N ↦ exp(2πi·j/N), in double precision.
    pub fn to_complex(&self, embedding: u32) -> (f64, f64) {
        let n = self.conductor() as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let angle = std::f64::consts::TAU
                * ((k as u64 * embedding as u64) % self.conductor() as u64) as f64
                / n;
            let c = rational_to_f64(c);
            re += c * angle.cos();
            im += c * angle.sin();
        }
        (re, im)
    }

    /// Complex absolute value under the given embedding, in double precision.
    pub fn abs_f64(&self, embedding: u32) -> f64 {
        if let Some(r) = self.as_rational() {
            return rational_to_f64(r).abs();
        }
        let (re, im) = self.to_complex(embedding);
        re.hypot(im)
    }
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        self.conductor() == other.conductor() && self.coords == other.coords
    }
}

impl Eq for CycloNumber {}

impl Hash for CycloNumber {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.conductor().hash(state);
        self.coords.hash(state);
    }
}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNumber[N={}]({})", self.conductor(), self)
    }
}

/// Prints in the input grammar: a sum of `c*w^k` terms, `w` standing for ζ_N.
impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { "-" } else { "+" })?;
            }
            first = false;
            let a = c.abs();
            let w = match k {
                0 => String::new(),
                1 => "w".to_string(),
                _ => format!("w^{k}"),
            };
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => f.write_str(&w)?,
                (_, false) => write!(f, "{a}*{w}")?,
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&CycloNumber> for &CycloNumber {
            type Output = CycloNumber;
            /// Panics when conductors differ; use the `checked_*` methods on
            /// unvalidated inputs.
            fn $m(self, rhs: &CycloNumber) -> CycloNumber {
                self.check(rhs).expect("conductor mismatch");
                $body(self, rhs)
            }
        }
        impl $tr<CycloNumber> for CycloNumber {
            type Output = CycloNumber;
            fn $m(self, rhs: CycloNumber) -> CycloNumber {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, |a: &CycloNumber, b: &CycloNumber| a
    .add_unchecked(b));
binop!(Sub, sub, |a: &CycloNumber, b: &CycloNumber| a
    .add_unchecked(&-b));
binop!(Mul, mul, |a: &CycloNumber, b: &CycloNumber| a
    .mul_unchecked(b));

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber {
            field: Arc::clone(&self.field),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        -&self
    }
}
