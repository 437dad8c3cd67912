//! The escape-rate function `G_f(z) = lim log⁺|fⁿ(z)| / dⁿ` with a certified
//! enclosure.
//!
//! Write `S = Σ_{j<d} |a_j| / |a_d|`. Two bounds drive the computation.
//!
//! For every `z`, `|log⁺|f(z)| − d·log⁺|z|| ≤ C` with
//! `C = max(log⁺|a_d| + ln(1+S), ln 2 + log⁺(1/|a_d|), d·ln max(1, 2S))`:
//! the first term bounds `|f(z)| ≤ |a_d|(1+S)·max(1,|z|)^d`, the second uses
//! `|f(z)| ≥ |a_d||z|^d / 2` once `|z| ≥ max(1, 2S)`, the third covers the
//! remaining disc. Telescoping gives `|G(z) − log⁺|fⁿ(z)|/dⁿ| ≤ C/(dⁿ(d−1))`.
//!
//! On `|w| ≥ R = max(1, 2S, (2/|a_d|)^{1/(d−1)})` the orbit is nondecreasing
//! in modulus and `f(w) = a_d w^d (1+u)` with `|u| ≤ S/|w| ≤ 1/2`, so
//! `G(w) = ln|w| + ln|a_d|/(d−1) + ε` with `|ε| ≤ 2S/(|w|(d−1))`.

use num_complex::Complex64;

use super::ball::{up, Ball, MAX_PREC};
use super::HeightError;
use crate::arith::{CycloNumber, Polynomial};

const START_PREC: u32 = 128;
const MAX_STEPS: u32 = 4096;
/// Past this modulus the f64 radius bookkeeping is no longer safe.
const HUGE: f64 = 1e250;

/// Where to evaluate `G_f`.
#[derive(Clone, Debug)]
pub enum ArchPoint {
    Exact(CycloNumber),
    /// A complex number taken at face value.
    Approx(Complex64),
}

/// A certified value `value ± radius`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArchValue {
    pub value: f64,
    pub radius: f64,
    pub iterations: u32,
}

/// Interval bookkeeping in f64 with outward rounding.
#[derive(Clone, Copy, Debug)]
struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    fn widen(lo: f64, hi: f64) -> Self {
        let pad = |x: f64| x.abs() * 4.0 * f64::EPSILON + f64::MIN_POSITIVE;
        Interval {
            lo: lo - pad(lo),
            hi: hi + pad(hi),
        }
    }

    fn meet(self, other: Interval) -> Interval {
        Interval {
            lo: self.lo.max(other.lo),
            hi: self.hi.min(other.hi),
        }
    }

    fn half_width(&self) -> f64 {
        up((self.hi - self.lo).max(0.0) / 2.0)
    }

    fn mid(&self) -> f64 {
        self.lo + (self.hi - self.lo) / 2.0
    }
}

/// Coefficient data at one embedding.
struct Constants {
    degree: usize,
    /// Upper bound on `S`.
    s: f64,
    /// Bounds on `ln|a_d|`.
    ln_lead: (f64, f64),
    /// Upper bound on the discrepancy constant `C`.
    c: f64,
    /// A valid (upward-rounded) escape-region radius.
    escape: f64,
}

impl Constants {
    fn new(balls: &[Ball], prec: u32) -> Self {
        let degree = balls.len() - 1;
        let d = degree as f64;
        let lead = &balls[degree];
        let (lead_lo, lead_hi) = (lead.abs_lower(prec), lead.abs_upper(prec));
        let num: f64 = balls[..degree]
            .iter()
            .fold(0.0, |acc, b| up(acc + b.abs_upper(prec)));
        let s = up(num / lead_lo);
        let ln_lead = (down_signed(lead_lo.ln()), up_signed(lead_hi.ln()));
        let ln2 = std::f64::consts::LN_2;
        let c1 = up(ln_lead.1.max(0.0) + up_signed(s.ln_1p()));
        let c2 = up(ln2 + (-ln_lead.0).max(0.0));
        let c3 = up(d * up_signed((2.0 * s).max(1.0).ln()));
        let root = up_signed((up_signed((2.0 / lead_lo).ln()) / (d - 1.0)).exp());
        Constants {
            degree,
            s,
            ln_lead,
            c: up(c1.max(c2).max(c3) * (1.0 + 1e-12)),
            escape: up(1f64.max(2.0 * s).max(root) * (1.0 + 1e-12)),
        }
    }
}

fn up_signed(x: f64) -> f64 {
    x + x.abs() * 4.0 * f64::EPSILON + f64::MIN_POSITIVE
}

fn down_signed(x: f64) -> f64 {
    x - x.abs() * 4.0 * f64::EPSILON - f64::MIN_POSITIVE
}

/// `sup_z |log⁺|f(z)| − d·log⁺|z||` bounded from the coefficients at the
/// given embedding.
pub fn arch_discrepancy(f: &Polynomial, embedding: u32) -> f64 {
    let balls: Vec<Ball> = f
        .coeffs()
        .iter()
        .map(|c| Ball::from_cyclo(c, embedding, START_PREC))
        .collect();
    Constants::new(&balls, START_PREC).c
}

/// Radius beyond which orbits escape monotonically at the given embedding.
pub fn escape_region_radius(f: &Polynomial, embedding: u32) -> f64 {
    let balls: Vec<Ball> = f
        .coeffs()
        .iter()
        .map(|c| Ball::from_cyclo(c, embedding, START_PREC))
        .collect();
    Constants::new(&balls, START_PREC).escape
}

enum Attempt {
    Done(ArchValue),
    MorePrecision,
    Stuck(f64),
}

/// `G_f(x)` at the embedding `ζ_N ↦ exp(2πi·embedding/N)` within `tol`.
pub fn local_height_arch(
    f: &Polynomial,
    embedding: u32,
    x: &ArchPoint,
    tol: f64,
) -> Result<ArchValue, HeightError> {
    let d = f.require_degree(2)?;
    if !(tol > 0.0) {
        return Err(HeightError::BadTolerance(tol));
    }
    if let ArchPoint::Exact(x) = x {
        if x.conductor() != f.conductor() {
            return Err(crate::arith::ArithError::ConductorMismatch {
                left: f.conductor(),
                right: x.conductor(),
            }
            .into());
        }
    }
    let mut prec = START_PREC;
    let mut best = f64::INFINITY;
    while prec <= MAX_PREC {
        match attempt(f, d, embedding, x, tol, prec) {
            Attempt::Done(v) => return Ok(v),
            Attempt::MorePrecision => prec *= 2,
            Attempt::Stuck(r) => {
                best = best.min(r);
                break;
            }
        }
    }
    Err(HeightError::ToleranceUnreachable {
        place: "inf".into(),
        achieved: best,
        requested: tol,
    })
}

fn attempt(
    f: &Polynomial,
    d: usize,
    embedding: u32,
    x: &ArchPoint,
    tol: f64,
    prec: u32,
) -> Attempt {
    let balls: Vec<Ball> = f
        .coeffs()
        .iter()
        .map(|c| Ball::from_cyclo(c, embedding, prec))
        .collect();
    let k = Constants::new(&balls, prec);
    debug_assert_eq!(k.degree, d);
    let mut z = match x {
        ArchPoint::Exact(x) => Ball::from_cyclo(x, embedding, prec),
        ArchPoint::Approx(c) => match Ball::from_f64_pair(c.re, c.im, prec) {
            Some(b) => b,
            None => return Attempt::Stuck(f64::INFINITY),
        },
    };
    let df = d as f64;
    let mut scale = 1.0f64; // d^n
    let mut best = f64::INFINITY;
    for n in 0..=MAX_STEPS {
        let lo = z.abs_lower(prec);
        let hi = z.abs_upper(prec);
        let mut enclosure = telescoping(lo, hi, scale, df, k.c);
        if lo >= k.escape {
            enclosure = enclosure.meet(escape_formula(lo, hi, scale, df, &k));
        }
        let r = enclosure.half_width();
        if r <= tol {
            return Attempt::Done(ArchValue {
                value: enclosure.mid().max(0.0),
                radius: r,
                iterations: n,
            });
        }
        best = best.min(r);
        if hi > HUGE || !scale.is_finite() {
            return Attempt::Stuck(best);
        }
        if z.radius() > 1e-6 * hi.max(1.0) {
            return Attempt::MorePrecision;
        }
        z = Ball::eval_poly(&balls, &z, prec);
        scale *= df;
    }
    Attempt::Stuck(best)
}

fn log_plus(x: f64) -> f64 {
    if x > 1.0 {
        x.ln()
    } else {
        0.0
    }
}

fn telescoping(lo: f64, hi: f64, scale: f64, d: f64, c: f64) -> Interval {
    let tail = up(c / (scale * (d - 1.0)));
    let a = Interval::widen(log_plus(lo) / scale, log_plus(hi) / scale);
    Interval {
        lo: (a.lo - tail).max(0.0),
        hi: up(a.hi + tail),
    }
}

fn escape_formula(lo: f64, hi: f64, scale: f64, d: f64, k: &Constants) -> Interval {
    let eps = up(2.0 * k.s / (lo * (d - 1.0)));
    let base = Interval::widen(
        lo.ln() + k.ln_lead.0 / (d - 1.0) - eps,
        hi.ln() + k.ln_lead.1 / (d - 1.0) + eps,
    );
    Interval::widen(base.lo / scale, base.hi / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    fn q(r: crate::arith::Rational) -> ArchPoint {
        ArchPoint::Exact(CycloNumber::from_rational(1, r))
    }

    fn check(f: &Polynomial, x: ArchPoint, expect: f64) {
        let v = local_height_arch(f, 1, &x, 1e-10).unwrap();
        assert!(v.radius <= 1e-10);
        assert!(
            (v.value - expect).abs() <= 1e-10 + 1e-15,
            "{} vs {expect}",
            v.value
        );
    }

    #[test]
    fn power_map_green_function() {
        let z2 = Polynomial::from_ints(&[0, 0, 1]);
        check(&z2, q(rat(2, 1)), 2f64.ln());
        check(&z2, q(rat(1, 2)), 0.0);
        check(
            &Polynomial::from_ints(&[0, 0, 0, 1]),
            q(rat(-7, 3)),
            (7.0f64 / 3.0).ln(),
        );
    }

    #[test]
    fn basilica_cycle_has_zero_green() {
        let f = Polynomial::from_ints(&[-1, 0, 1]);
        check(&f, q(rat(1, 2)), 0.0);
        check(&f, q(rat(0, 1)), 0.0);
    }

    #[test]
    fn scaled_monomial_closed_form() {
        // G for c·z^d is log⁺(|c|^{1/(d−1)}|z|).
        let f = Polynomial::from_rationals(1, &[rat(0, 1), rat(0, 1), rat(1, 4)]);
        check(&f, q(rat(16, 1)), 4f64.ln());
        check(&f, q(rat(3, 1)), 0.0);
    }

    #[test]
    fn cyclotomic_embeddings_agree_on_modulus() {
        // w·z^2 over ℚ(i): |f(z)| = |z|^2 at every embedding.
        let f = Polynomial::monomial(CycloNumber::zeta(4), 2);
        let x = ArchPoint::Exact(&CycloNumber::from_int(4, 2) + &CycloNumber::zeta(4));
        for e in [1, 3] {
            let v = local_height_arch(&f, e, &x, 1e-10).unwrap();
            assert!((v.value - 5f64.sqrt().ln()).abs() < 2e-10);
        }
    }

    #[test]
    fn approximate_start() {
        let f = Polynomial::from_ints(&[1, 0, 1]);
        let v =
            local_height_arch(&f, 1, &ArchPoint::Approx(Complex64::new(0.0, 0.0)), 1e-9).unwrap();
        // Brute force from the rational orbit 0, 1, 2, 5, 26, ...
        let mut z = 0.0f64;
        let mut g = 0.0;
        for n in 0..8 {
            z = z * z + 1.0;
            g = z.ln() / 2f64.powi(n + 1);
        }
        assert!((v.value - g).abs() < 1e-3);
    }

    #[test]
    fn discrepancy_bound_holds_on_samples() {
        for f in [
            Polynomial::from_ints(&[-1, 0, 1]),
            Polynomial::from_ints(&[0, 0, 100, 1]),
            Polynomial::from_rationals(1, &[rat(1, 3), rat(-5, 2), rat(1, 7)]),
        ] {
            let c = arch_discrepancy(&f, 1);
            let coeffs: Vec<f64> = f
                .coeffs()
                .iter()
                .map(|a| a.abs_f64(1) * a.to_complex(1).0.signum())
                .collect();
            let d = coeffs.len() as f64 - 1.0;
            for i in -400..=400 {
                let z = i as f64 / 4.0;
                let fz = coeffs.iter().rev().fold(0.0, |acc, a| acc * z + a);
                let lhs = (log_plus(fz.abs()) - d * log_plus(z.abs())).abs();
                assert!(lhs <= c + 1e-9, "{f} at {z}: {lhs} > {c}");
            }
        }
    }
}
