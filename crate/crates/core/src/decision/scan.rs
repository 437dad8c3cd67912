//! Canonical heights of the rational points `L(t)` with `h(t)` bounded.

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use super::{DecisionError, Line, SplitPolynomialMap};
use crate::arith::Rational;
use crate::heights::canonical_height_split;
use crate::heights::render::fmt15;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    #[serde(serialize_with = "crate::display_string")]
    pub t: Rational,
    pub point: Vec<String>,
    pub hhat: Option<f64>,
    pub error: Option<f64>,
    pub flag: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub height_bound: f64,
    /// Largest `H` with `log H ≤ heightBound`; parameters satisfy
    /// `max(|p|, q) ≤ H`.
    pub max_size: u64,
    pub tol: f64,
    pub rows: Vec<ScanRow>,
    /// Parameters whose point has `ĥ ≤ 2·tol`.
    #[serde(serialize_with = "display_list")]
    pub zero_candidates: Vec<Rational>,
    /// Smallest `ĥ` above `2·tol`.
    pub epsilon_hat: Option<f64>,
    /// Parameter attaining `epsilon_hat`.
    #[serde(serialize_with = "display_opt")]
    pub epsilon_at: Option<Rational>,
}

fn display_list<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

fn display_opt<S: serde::Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.collect_str(x),
        None => s.serialize_none(),
    }
}

impl ScanReport {
    /// CSV with header `t,point,hhat,error,flag`; the point is quoted.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,point,hhat,error,flag\n");
        for r in &self.rows {
            let num = |x: Option<f64>| x.map(fmt15).unwrap_or_default();
            out.push_str(&format!(
                "{},\"({})\",{},{},{}\n",
                r.t,
                r.point.join(","),
                num(r.hhat),
                num(r.error),
                r.flag
            ));
        }
        out
    }
}

/// Largest integer `H` with `ln H ≤ bound`, tolerant of rounding in `bound`
/// itself (so `ln 10` admits 10).
fn size_limit(bound: f64) -> u64 {
    let mut h = bound.exp().floor() as u64;
    while ((h + 1) as f64).ln() <= bound + 1e-12 {
        h += 1;
    }
    while h > 1 && (h as f64).ln() > bound + 1e-12 {
        h -= 1;
    }
    h.max(1)
}

/// All `t = p/q` in lowest terms with `max(|p|, q) ≤ H`, ordered by `(q, p)`.
fn parameters(h: u64) -> Vec<Rational> {
    let h = h as i64;
    let mut out = Vec::new();
    for q in 1..=h {
        for p in -h..=h {
            if p.unsigned_abs().gcd(&(q as u64)) == 1 {
                out.push(Rational::new(BigInt::from(p), BigInt::from(q)));
            }
        }
    }
    out
}

/// Scans `L(t)` for rational `t` with `h(t) ≤ heightBound`.
pub fn bogomolov_scan(
    phi: &SplitPolynomialMap,
    l: &Line,
    height_bound: f64,
    tol: f64,
) -> Result<ScanReport, DecisionError> {
    if !(height_bound > 0.0 && height_bound.is_finite()) {
        return Err(DecisionError::BadHeightBound);
    }
    if phi.dimension() != l.dimension() {
        return Err(DecisionError::DimensionMismatch {
            expected: phi.dimension(),
            got: l.dimension(),
        });
    }
    let rational = |v: &[crate::arith::CycloNumber]| -> Option<Vec<Rational>> {
        v.iter().map(|x| x.as_rational().cloned()).collect()
    };
    let (Some(base), Some(dir)) = (rational(l.base()), rational(l.direction())) else {
        return Err(DecisionError::NotRational);
    };
    if !phi.maps().iter().all(|f| f.is_rational()) {
        return Err(DecisionError::NotRational);
    }
    let h = size_limit(height_bound);
    let rows: Vec<ScanRow> = parameters(h)
        .into_par_iter()
        .map(|t| {
            let point: Vec<Rational> = base.iter().zip(&dir).map(|(p, v)| p + v * &t).collect();
            let shown = point.iter().map(ToString::to_string).collect();
            match canonical_height_split(phi, &point, tol) {
                Ok(r) => ScanRow {
                    t,
                    point: shown,
                    hhat: Some(r.value),
                    error: Some(r.error_radius),
                    flag: if r.value <= 2.0 * tol {
                        "zero"
                    } else {
                        "positive"
                    }
                    .into(),
                },
                Err(e) => ScanRow {
                    t,
                    point: shown,
                    hhat: None,
                    error: None,
                    flag: format!("error: {e}"),
                },
            }
        })
        .collect();
    let zero_candidates = rows
        .iter()
        .filter(|r| r.flag == "zero")
        .map(|r| r.t.clone())
        .collect();
    let best = rows
        .iter()
        .filter(|r| r.flag == "positive")
        .min_by(|a, b| a.hhat.partial_cmp(&b.hhat).expect("finite heights"));
    Ok(ScanReport {
        height_bound,
        max_size: h,
        tol,
        epsilon_hat: best.and_then(|r| r.hhat),
        epsilon_at: best.map(|r| r.t.clone()),
        zero_candidates,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{CycloNumber, Polynomial};

    fn q(n: i64) -> CycloNumber {
        CycloNumber::from_int(1, n)
    }

    #[test]
    fn size_limits() {
        assert_eq!(size_limit(10f64.ln()), 10);
        assert_eq!(size_limit(5f64.ln()), 5);
        assert_eq!(size_limit(0.5), 1);
    }

    #[test]
    fn parameter_order() {
        let ps: Vec<String> = parameters(2).iter().map(ToString::to_string).collect();
        assert_eq!(ps, ["-2", "-1", "0", "1", "2", "-1/2", "1/2"]);
    }

    #[test]
    fn square_map_diagonal_zeros() {
        let z2 = Polynomial::from_ints(&[0, 0, 1]);
        let phi = SplitPolynomialMap::new(vec![z2.clone(), z2]).unwrap();
        let diag = Line::new(vec![q(0), q(0)], vec![q(1), q(1)]).unwrap();
        let r = bogomolov_scan(&phi, &diag, 10f64.ln(), 1e-9).unwrap();
        let zeros: Vec<String> = r.zero_candidates.iter().map(ToString::to_string).collect();
        assert_eq!(zeros, ["-1", "0", "1"]);
        assert!((r.epsilon_hat.unwrap() - 2.0 * 2f64.ln()).abs() < 1e-9);
        assert!(r
            .to_csv()
            .starts_with("t,point,hhat,error,flag\n-10,\"(-10,-10)\","));
    }
}
