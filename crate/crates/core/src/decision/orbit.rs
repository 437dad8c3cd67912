//! Forward orbits of single points.
//!
//! `R_f = max(1, (2 + Σ_{j<d} |a_j|) / |a_d|)` is an escape radius: for
//! `|z| ≥ R_f`, `|f(z)| ≥ |z|^{d−1}(|a_d||z| − Σ|a_j|) ≥ 2|z|`.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::{DecisionError, PreperiodicityVerdict, Witness};
use crate::arith::primes::prime_divisors;
use crate::arith::rational::{padic_valuation, rational_to_f64};
use crate::arith::{ArithError, CycloNumber, Polynomial, Rational};
use crate::heights::bad_primes;
use crate::heights::padic::PadicProfile;

/// Iterates beyond this many bits end the search with `Unknown`.
const BIT_CAP: u64 = 1 << 20;

fn exact_radius(coeffs: &[Rational]) -> Rational {
    let (lead, rest) = coeffs.split_last().expect("nonempty");
    let two = Rational::from_integer(2.into());
    let sum = rest.iter().fold(two, |acc, a| acc + a.abs());
    let r = sum / lead.abs();
    if r < Rational::one() {
        Rational::one()
    } else {
        r
    }
}

/// Upper bound on `R_f` at the given embedding.
fn float_radius(f: &Polynomial, embedding: u32) -> f64 {
    let coeffs = f.coeffs();
    let (lead, rest) = coeffs.split_last().expect("nonempty");
    let sum: f64 = rest.iter().map(|a| a.abs_f64(embedding)).sum::<f64>() + 2.0;
    let r = sum * (1.0 + 1e-12) / (lead.abs_f64(embedding) * (1.0 - 1e-12));
    r.max(1.0)
}

/// `R_f` as a float (rounded upward for cyclotomic coefficients).
pub fn escape_radius(f: &Polynomial) -> f64 {
    match f.to_rationals() {
        Some(c) => rational_to_f64(&exact_radius(&c)),
        None => float_radius(f, 1),
    }
}

/// Lower bound on `|x|` under the embedding, allowing for cancellation.
fn modulus_lower(x: &CycloNumber, embedding: u32) -> f64 {
    let slack: f64 = x
        .coords()
        .iter()
        .map(|c| rational_to_f64(c).abs())
        .sum::<f64>()
        * 1e-13;
    x.abs_f64(embedding) - slack
}

fn embeddings(n: u32) -> Vec<u32> {
    (1..=n).filter(|j| j.gcd(&n) == 1).collect()
}

fn total_bits(x: &CycloNumber) -> u64 {
    x.coords()
        .iter()
        .map(|c| c.numer().bits() + c.denom().bits())
        .sum()
}

struct EscapeTests {
    exact: Option<(Vec<Rational>, Rational, Vec<(BigUint, PadicProfile)>)>,
    float: Vec<(u32, f64)>,
}

impl EscapeTests {
    fn new(f: &Polynomial, x: &CycloNumber) -> Self {
        match (f.to_rationals(), x.as_rational()) {
            (Some(coeffs), Some(x)) => {
                let mut primes: BTreeSet<BigUint> = bad_primes(f).expect("rational");
                primes.extend(prime_divisors(x.denom()));
                let profiles = primes
                    .into_iter()
                    .map(|p| {
                        let prof = PadicProfile::new(&coeffs, &p);
                        (p, prof)
                    })
                    .collect();
                let r = exact_radius(&coeffs);
                EscapeTests {
                    exact: Some((coeffs, r, profiles)),
                    float: Vec::new(),
                }
            }
            _ => EscapeTests {
                exact: None,
                float: embeddings(f.conductor())
                    .into_iter()
                    .map(|e| (e, float_radius(f, e)))
                    .collect(),
            },
        }
    }

    fn check(&self, z: &CycloNumber, n: u64) -> Option<Witness> {
        if let Some((_, r, profiles)) = &self.exact {
            let zr = z.as_rational().expect("rational orbit");
            if &zr.abs() >= r {
                return Some(Witness::ArchimedeanEscape {
                    iteration: n,
                    radius: rational_to_f64(r),
                    embedding: 1,
                    iterate: z.clone(),
                });
            }
            for (p, prof) in profiles {
                if let Some(v) = padic_valuation(zr, p) {
                    if prof.escapes(v) {
                        return Some(Witness::ValuationEscape {
                            prime: p.clone(),
                            iteration: n,
                            valuation: v,
                            iterate: z.clone(),
                        });
                    }
                }
            }
            return None;
        }
        self.float.iter().find_map(|&(e, r)| {
            (modulus_lower(z, e) >= r).then(|| Witness::ArchimedeanEscape {
                iteration: n,
                radius: r,
                embedding: e,
                iterate: z.clone(),
            })
        })
    }
}

/// Preperiodicity of `x` under `f`, by exact cycle detection with escape
/// certificates.
pub fn orbit_point(
    f: &Polynomial,
    x: &CycloNumber,
    budget: u64,
) -> Result<PreperiodicityVerdict, DecisionError> {
    f.require_degree(2)?;
    if x.conductor() != f.conductor() {
        return Err(ArithError::ConductorMismatch {
            left: f.conductor(),
            right: x.conductor(),
        }
        .into());
    }
    let tests = EscapeTests::new(f, x);
    let mut seen: HashMap<CycloNumber, u64> = HashMap::new();
    let mut z = x.clone();
    for n in 0..=budget {
        if let Some(&first) = seen.get(&z) {
            return Ok(PreperiodicityVerdict::Preperiodic {
                preperiod: first,
                period: n - first,
            });
        }
        if let Some(w) = tests.check(&z, n) {
            return Ok(PreperiodicityVerdict::NotPreperiodic { witness: w });
        }
        if total_bits(&z) > BIT_CAP {
            return Ok(PreperiodicityVerdict::Unknown {
                budget: n,
                reason: format!("iterate exceeded {BIT_CAP} bits"),
            });
        }
        seen.insert(z.clone(), n);
        z = match &tests.exact {
            Some((coeffs, _, _)) => CycloNumber::from_rational(
                f.conductor(),
                Polynomial::eval_rational(coeffs, z.as_rational().expect("rational")),
            ),
            None => f.eval(&z)?,
        };
    }
    Ok(PreperiodicityVerdict::Unknown {
        budget,
        reason: "no repeat or escape within budget".into(),
    })
}

pub(super) fn verify_point_witness(w: &Witness, f: &Polynomial) -> bool {
    let Ok(d) = f.require_degree(2) else {
        return false;
    };
    match w {
        Witness::ArchimedeanEscape {
            embedding, iterate, ..
        } => {
            if iterate.conductor() != f.conductor() {
                return false;
            }
            let Ok(next) = f.eval(iterate) else {
                return false;
            };
            match (f.to_rationals(), iterate.as_rational(), next.as_rational()) {
                (Some(c), Some(z), Some(fz)) => {
                    let r = exact_radius(&c);
                    z.abs() >= r && fz.abs() >= Rational::from_integer(2.into()) * z.abs()
                }
                _ => {
                    let r = float_radius(f, *embedding);
                    modulus_lower(iterate, *embedding) >= r
                        && modulus_lower(&next, *embedding)
                            >= 2.0 * iterate.abs_f64(*embedding) * (1.0 - 1e-9)
                }
            }
        }
        Witness::ValuationEscape {
            prime,
            iterate,
            valuation,
            ..
        } => {
            let (Some(coeffs), Some(z)) = (f.to_rationals(), iterate.as_rational()) else {
                return false;
            };
            let prof = PadicProfile::new(&coeffs, prime);
            let lead_val =
                padic_valuation(coeffs.last().expect("nonzero"), prime).expect("nonzero");
            let v = padic_valuation(z, prime);
            let fv = padic_valuation(&Polynomial::eval_rational(&coeffs, z), prime);
            v == Some(*valuation)
                && prof.escapes(*valuation)
                && fv == Some(d as i64 * valuation + lead_val)
                && fv < v
        }
        _ => false,
    }
}

impl Witness {
    /// Replays the orbit of `x` up to the witness iteration, then checks the
    /// witness itself.
    pub fn replays(&self, f: &Polynomial, x: &CycloNumber) -> bool {
        let (n, iterate) = match self {
            Witness::ArchimedeanEscape {
                iteration, iterate, ..
            }
            | Witness::ValuationEscape {
                iteration, iterate, ..
            } => (*iteration, iterate),
            _ => return false,
        };
        let mut z = x.clone();
        for _ in 0..n {
            match f.eval(&z) {
                Ok(next) => z = next,
                Err(_) => return false,
            }
        }
        z == *iterate && self.verify_point(f)
    }
}

/// `fᴺ(x) = f^{N+k}(x)` by direct iteration.
pub fn replay_point(f: &Polynomial, x: &CycloNumber, preperiod: u64, period: u64) -> bool {
    let mut z = x.clone();
    for _ in 0..preperiod {
        z = f.eval(&z).expect("same conductor");
    }
    let start = z.clone();
    for _ in 0..period {
        z = f.eval(&z).expect("same conductor");
    }
    period >= 1 && z == start
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;

    fn q(r: Rational) -> CycloNumber {
        CycloNumber::from_rational(1, r)
    }

    #[test]
    fn reference_orbits() {
        let f = Polynomial::from_ints(&[-1, 0, 1]);
        assert_eq!(
            orbit_point(&f, &q(rat(0, 1)), 100).unwrap(),
            PreperiodicityVerdict::Preperiodic {
                preperiod: 0,
                period: 2
            }
        );
        let z2 = Polynomial::from_ints(&[0, 0, 1]);
        match orbit_point(&z2, &q(rat(2, 1)), 100).unwrap() {
            PreperiodicityVerdict::NotPreperiodic {
                witness: w @ Witness::ArchimedeanEscape { iteration: 0, .. },
            } => {
                assert!(matches!(w, Witness::ArchimedeanEscape { radius, .. } if radius == 2.0));
                assert!(w.replays(&z2, &q(rat(2, 1))));
            }
            other => panic!("{other:?}"),
        }
        match orbit_point(&f, &q(rat(1, 2)), 100).unwrap() {
            PreperiodicityVerdict::NotPreperiodic {
                witness: w @ Witness::ValuationEscape { .. },
            } => {
                assert!(
                    matches!(&w, Witness::ValuationEscape { prime, .. } if *prime == BigUint::from(2u32))
                );
                assert!(w.replays(&f, &q(rat(1, 2))));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_prime_escape_for_quarter() {
        // z^2 + 1/4 at 0: the real orbit creeps toward 1/2 and never escapes.
        let f = Polynomial::from_rationals(1, &[rat(1, 4), rat(0, 1), rat(1, 1)]);
        match orbit_point(&f, &q(rat(0, 1)), 50).unwrap() {
            PreperiodicityVerdict::NotPreperiodic { witness } => {
                assert!(witness.replays(&f, &q(rat(0, 1))))
            }
            other => panic!("{other:?}"),
        }
        // 1/2 is the fixed point.
        assert_eq!(
            orbit_point(&f, &q(rat(1, 2)), 50).unwrap(),
            PreperiodicityVerdict::Preperiodic {
                preperiod: 0,
                period: 1
            }
        );
        assert_eq!(
            orbit_point(&f, &q(rat(-1, 2)), 50).unwrap(),
            PreperiodicityVerdict::Preperiodic {
                preperiod: 1,
                period: 1
            }
        );
    }

    #[test]
    fn cyclotomic_orbits() {
        // z^2 over Q(i): i -> -1 -> 1 -> 1.
        let z2 = Polynomial::monomial(CycloNumber::one(4), 2);
        assert_eq!(
            orbit_point(&z2, &CycloNumber::zeta(4), 10).unwrap(),
            PreperiodicityVerdict::Preperiodic {
                preperiod: 2,
                period: 1
            }
        );
        let x = &CycloNumber::one(4) + &CycloNumber::zeta(4);
        match orbit_point(&z2, &x, 10).unwrap() {
            PreperiodicityVerdict::NotPreperiodic { witness } => assert!(witness.replays(&z2, &x)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn budget_exhaustion() {
        let f = Polynomial::from_ints(&[-1, 0, 1]);
        assert!(orbit_point(&f, &q(rat(0, 1)), 1).unwrap().is_unknown());
        assert!(replay_point(&f, &q(rat(0, 1)), 0, 2));
        assert!(!replay_point(&f, &q(rat(0, 1)), 0, 1));
    }
}
