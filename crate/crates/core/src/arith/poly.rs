//! Dense univariate polynomials over ℚ(ζ_N).

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::cyclo::CycloNumber;
use super::rational::Rational;
use super::ArithError;

/// A polynomial with coefficients in ℚ(ζ_N), constant term first. The
/// coefficient vector never ends in a zero, so the zero polynomial is empty
/// and `degree()` is the index of the last coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    conductor: u32,
    coeffs: Vec<CycloNumber>,
}

impl Polynomial {
    /// Builds a polynomial, trimming trailing zeros. All coefficients must
    /// share `conductor`.
    pub fn new(conductor: u32, mut coeffs: Vec<CycloNumber>) -> Result<Self, ArithError> {
        if let Some(bad) = coeffs.iter().find(|c| c.conductor() != conductor) {
            return Err(ArithError::ConductorMismatch {
                left: conductor,
                right: bad.conductor(),
            });
        }
        while coeffs.last().is_some_and(CycloNumber::is_zero) {
            coeffs.pop();
        }
        Ok(Polynomial { conductor, coeffs })
    }

    fn from_trusted(conductor: u32, mut coeffs: Vec<CycloNumber>) -> Self {
        while coeffs.last().is_some_and(CycloNumber::is_zero) {
            coeffs.pop();
        }
        Polynomial { conductor, coeffs }
    }

    pub fn zero(conductor: u32) -> Self {
        Polynomial {
            conductor,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: CycloNumber) -> Self {
        let n = c.conductor();
        Self::from_trusted(n, vec![c])
    }

    /// The identity polynomial `z`.
    pub fn identity(conductor: u32) -> Self {
        Self::from_trusted(
            conductor,
            vec![CycloNumber::zero(conductor), CycloNumber::one(conductor)],
        )
    }

    /// `c · z^k`.
    pub fn monomial(c: CycloNumber, k: usize) -> Self {
        let n = c.conductor();
        let mut coeffs = vec![CycloNumber::zero(n); k];
        coeffs.push(c);
        Self::from_trusted(n, coeffs)
    }

    pub fn from_rationals(conductor: u32, coeffs: &[Rational]) -> Self {
        Self::from_trusted(
            conductor,
            coeffs
                .iter()
                .map(|c| CycloNumber::from_rational(conductor, c.clone()))
                .collect(),
        )
    }

    /// Shorthand for integer coefficients over ℚ (conductor 1).
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_trusted(
            1,
            coeffs
                .iter()
                .map(|&c| CycloNumber::from_int(1, c))
                .collect(),
        )
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[CycloNumber] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> CycloNumber {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| CycloNumber::zero(self.conductor))
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&CycloNumber> {
        self.coeffs.last()
    }

    /// Rational coefficients, when every coefficient lies in ℚ.
    pub fn to_rationals(&self) -> Option<Vec<Rational>> {
        self.coeffs
            .iter()
            .map(|c| c.as_rational().cloned())
            .collect()
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(CycloNumber::is_rational)
    }

    fn check(&self, other: &Self) -> Result<(), ArithError> {
        if self.conductor == other.conductor {
            Ok(())
        } else {
            Err(ArithError::ConductorMismatch {
                left: self.conductor,
                right: other.conductor,
            })
        }
    }

    fn check_elem(&self, x: &CycloNumber) -> Result<(), ArithError> {
        if self.conductor == x.conductor() {
            Ok(())
        } else {
            Err(ArithError::ConductorMismatch {
                left: self.conductor,
                right: x.conductor(),
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, ArithError> {
        self.check(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        Ok(Self::from_trusted(
            self.conductor,
            (0..n).map(|k| &self.coeff(k) + &other.coeff(k)).collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self::from_trusted(self.conductor, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ArithError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.conductor));
        }
        let mut out =
            vec![CycloNumber::zero(self.conductor); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Ok(Self::from_trusted(self.conductor, out))
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &CycloNumber) -> Result<Self, ArithError> {
        self.check_elem(c)?;
        Ok(Self::from_trusted(
            self.conductor,
            self.coeffs.iter().map(|a| a * c).collect(),
        ))
    }

    /// Adds the constant `c`.
    pub fn add_constant(&self, c: &CycloNumber) -> Result<Self, ArithError> {
        self.add(&Self::constant(c.clone()))
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &CycloNumber) -> Result<CycloNumber, ArithError> {
        self.check_elem(x)?;
        let mut acc = CycloNumber::zero(self.conductor);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        Ok(acc)
    }

    /// Horner evaluation at a rational point of a rational polynomial.
    pub fn eval_rational(coeffs: &[Rational], x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `self ∘ inner`, by Horner's scheme over polynomials.
    pub fn compose(&self, inner: &Self) -> Result<Self, ArithError> {
        self.check(inner)?;
        let mut acc = Self::zero(self.conductor);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner)?.add_constant(c)?;
        }
        Ok(acc)
    }

    /// The same polynomial viewed over ℚ(ζ_M) for a multiple M of the conductor.
    pub fn lift(&self, target: u32) -> Result<Self, ArithError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.lift(target))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_trusted(target, coeffs))
    }

    /// True when only the leading coefficient is nonzero.
    pub fn is_monomial(&self) -> bool {
        match self.coeffs.split_last() {
            Some((_, rest)) => rest.iter().all(CycloNumber::is_zero),
            None => false,
        }
    }

    /// The degree, or an error when it is below `min`.
    pub fn require_degree(&self, min: usize) -> Result<usize, ArithError> {
        match self.degree() {
            Some(d) if d >= min => Ok(d),
            d => Err(ArithError::DegreeTooSmall {
                degree: d,
                needed: min,
            }),
        }
    }
}

/// `f ∘ g`.
pub fn poly_compose(f: &Polynomial, g: &Polynomial) -> Result<Polynomial, ArithError> {
    f.compose(g)
}

fn write_coeff_term(
    f: &mut fmt::Formatter<'_>,
    c: &CycloNumber,
    k: usize,
    first: bool,
) -> fmt::Result {
    let zpart = match k {
        0 => String::new(),
        1 => "z".to_string(),
        _ => format!("z^{k}"),
    };
    match c.as_rational() {
        Some(r) => {
            let neg = r.is_negative();
            let sep = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            f.write_str(sep)?;
            let a = r.abs();
            if k == 0 {
                write!(f, "{a}")
            } else if a.is_one() {
                f.write_str(&zpart)
            } else {
                write!(f, "{a}*{zpart}")
            }
        }
        None => {
            if !first {
                f.write_str(" + ")?;
            }
            if k == 0 {
                write!(f, "({c})")
            } else {
                write!(f, "({c})*{zpart}")
            }
        }
    }
}

/// Prints in the parser's grammar, highest degree first, e.g.
/// `(1+w)*z^2 - 3/2*z + 1`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            write_coeff_term(f, c, k, first)?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    #[test]
    fn compose_examples() {
        let z2 = Polynomial::from_ints(&[0, 0, 1]);
        let zp1 = Polynomial::from_ints(&[1, 1]);
        assert_eq!(
            poly_compose(&z2, &zp1).unwrap(),
            Polynomial::from_ints(&[1, 2, 1])
        );

        let f = Polynomial::from_ints(&[-1, 0, 1]);
        assert_eq!(
            poly_compose(&f, &f).unwrap(),
            Polynomial::from_ints(&[0, 0, -2, 0, 1])
        );

        let z3 = Polynomial::from_ints(&[0, 0, 0, 1]);
        let negz = Polynomial::from_ints(&[0, -1]);
        assert_eq!(
            poly_compose(&z3, &negz).unwrap(),
            Polynomial::from_ints(&[0, 0, 0, -1])
        );
    }

    #[test]
    fn compose_conductor_mismatch() {
        let f = Polynomial::from_ints(&[0, 0, 1]);
        let g = Polynomial::identity(4);
        assert!(matches!(
            poly_compose(&f, &g),
            Err(ArithError::ConductorMismatch { left: 1, right: 4 })
        ));
    }

    #[test]
    fn trims_and_reports_degree() {
        let p = Polynomial::from_ints(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(Polynomial::from_ints(&[0]).degree(), None);
    }

    #[test]
    fn display_round_shapes() {
        assert_eq!(Polynomial::from_ints(&[-1, 0, 1]).to_string(), "z^2 - 1");
        let p = Polynomial::from_rationals(1, &[rat(0, 1), rat(-1, 2), rat(0, 1), rat(1, 1)]);
        assert_eq!(p.to_string(), "z^3 - 1/2*z");
        let i = CycloNumber::zeta(4);
        let q = Polynomial::monomial(&CycloNumber::one(4) + &i, 2);
        assert_eq!(q.to_string(), "(1+w)*z^2");
        assert_eq!(Polynomial::from_ints(&[0, -1]).to_string(), "-z");
    }

    #[test]
    fn evaluation() {
        let f = Polynomial::from_ints(&[-1, 0, 1]);
        let x = CycloNumber::from_rational(1, rat(1, 2));
        assert_eq!(
            f.eval(&x).unwrap(),
            CycloNumber::from_rational(1, rat(-3, 4))
        );
    }
}
