//! Escape-time rendering of filled Julia sets in double precision.

use num_complex::Complex64;
use rayon::prelude::*;

use super::HeightError;
use crate::arith::Polynomial;

#[derive(Clone, Debug, PartialEq)]
pub struct RenderSpec {
    pub window: (f64, f64, f64, f64),
    pub resolution: usize,
    pub max_iter: u32,
    pub escape_radius: f64,
}

impl RenderSpec {
    pub fn new(
        window: (f64, f64, f64, f64),
        resolution: usize,
        max_iter: u32,
        escape_radius: f64,
    ) -> Result<Self, HeightError> {
        let spec = RenderSpec {
            window,
            resolution,
            max_iter,
            escape_radius,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), HeightError> {
        let (x0, x1, y0, y1) = self.window;
        let bad = |m: &str| Err(HeightError::BadRenderSpec(m.to_string()));
        if ![x0, x1, y0, y1].iter().all(|v| v.is_finite()) {
            return bad("window bounds must be finite");
        }
        if !(x0 < x1 && y0 < y1) {
            return bad("window must satisfy xmin < xmax and ymin < ymax");
        }
        if self.resolution == 0 {
            return bad("resolution must be at least 1");
        }
        if self.max_iter == 0 {
            return bad("max-iter must be at least 1");
        }
        if !(self.escape_radius.is_finite() && self.escape_radius > 0.0) {
            return bad("escape radius must be positive");
        }
        Ok(())
    }

    /// Center of pixel `(i, j)`, with row 0 at the top (`ymax`).
    pub fn pixel_center(&self, i: usize, j: usize) -> Complex64 {
        let (x0, x1, y0, y1) = self.window;
        let n = self.resolution as f64;
        let re = x0 + (i as f64 + 0.5) * (x1 - x0) / n;
        let im = y1 - (j as f64 + 0.5) * (y1 - y0) / n;
        Complex64::new(re, im)
    }
}

/// Escape counts and Green estimates, row-major from the top row.
#[derive(Clone, Debug)]
pub struct JuliaImage {
    pub spec: RenderSpec,
    pub counts: Vec<u32>,
    pub green: Vec<f64>,
}

impl JuliaImage {
    pub fn width(&self) -> usize {
        self.spec.resolution
    }

    pub fn height(&self) -> usize {
        self.spec.resolution
    }

    pub fn count(&self, i: usize, j: usize) -> u32 {
        self.counts[j * self.width() + i]
    }

    /// Binary graymap (P5). Counts are clamped to 65535; two bytes per pixel,
    /// big-endian, when the maximum exceeds 255.
    pub fn to_pgm(&self) -> Vec<u8> {
        let maxval = self.spec.max_iter.min(65535);
        let mut out = format!("P5\n{} {}\n{}\n", self.width(), self.height(), maxval).into_bytes();
        for &c in &self.counts {
            let v = c.min(maxval);
            if maxval > 255 {
                out.extend_from_slice(&(v as u16).to_be_bytes());
            } else {
                out.push(v as u8);
            }
        }
        out
    }

    /// CSV with header `re,im,green`, one row per pixel center.
    pub fn green_csv(&self) -> String {
        let mut out = String::from("re,im,green\n");
        for j in 0..self.height() {
            for i in 0..self.width() {
                let z = self.spec.pixel_center(i, j);
                let g = self.green[j * self.width() + i];
                out.push_str(&format!("{},{},{}\n", fmt15(z.re), fmt15(z.im), fmt15(g)));
            }
        }
        out
    }
}

/// 15 significant digits, scientific notation only for extreme magnitudes.
pub fn fmt15(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        let s = if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        };
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        format!("{x:.14e}")
    }
}

/// Renders `f` under the embedding `ζ_N ↦ exp(2πi·embedding/N)`.
///
/// A pixel's count is the first `n` with `|fⁿ(z)| > escapeRadius`, or
/// `maxIter`. The Green estimate is `(ln|w| + ln|a_d|/(d−1)) / dⁿ` at the
/// escaping iterate, and 0 for pixels that never escape.
pub fn julia_render(
    f: &Polynomial,
    embedding: u32,
    spec: &RenderSpec,
) -> Result<JuliaImage, HeightError> {
    spec.validate()?;
    let d = f.require_degree(2)?;
    let coeffs: Vec<Complex64> = f
        .coeffs()
        .iter()
        .map(|c| {
            let (re, im) = c.to_complex(embedding);
            Complex64::new(re, im)
        })
        .collect();
    let shift = coeffs[d].norm().ln() / (d as f64 - 1.0);
    let n = spec.resolution;
    let pixels: Vec<(u32, f64)> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let mut z = spec.pixel_center(k % n, k / n);
            let mut scale = 1.0f64;
            for it in 0..spec.max_iter {
                if z.norm() > spec.escape_radius {
                    return (it, ((z.norm().ln() + shift) / scale).max(0.0));
                }
                z = coeffs
                    .iter()
                    .rev()
                    .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
                scale *= d as f64;
            }
            (spec.max_iter, 0.0)
        })
        .collect();
    let (counts, green) = pixels.into_iter().unzip();
    Ok(JuliaImage {
        spec: spec.clone(),
        counts,
        green,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::CycloNumber;

    #[test]
    fn rejects_degenerate_windows() {
        assert!(RenderSpec::new((1.0, -1.0, -1.0, 1.0), 10, 10, 2.0).is_err());
        assert!(RenderSpec::new((-1.0, 1.0, -1.0, 1.0), 0, 10, 2.0).is_err());
        assert!(RenderSpec::new((-1.0, 1.0, -1.0, 1.0), 4, 10, f64::NAN).is_err());
    }

    #[test]
    fn square_map_fills_unit_disc() {
        let spec = RenderSpec::new((-2.0, 2.0, -2.0, 2.0), 64, 50, 2.0).unwrap();
        let img = julia_render(&Polynomial::from_ints(&[0, 0, 1]), 1, &spec).unwrap();
        for j in 0..64 {
            for i in 0..64 {
                let r = spec.pixel_center(i, j).norm();
                if r < 0.95 {
                    assert_eq!(img.count(i, j), 50);
                }
                if r > 1.05 {
                    assert!(img.count(i, j) < 50);
                }
            }
        }
    }

    #[test]
    fn pgm_layout() {
        let spec = RenderSpec::new((-1.0, 1.0, -1.0, 1.0), 3, 300, 2.0).unwrap();
        let img = julia_render(&Polynomial::from_ints(&[0, 0, 1]), 1, &spec).unwrap();
        let bytes = img.to_pgm();
        let header = b"P5\n3 3\n300\n";
        assert_eq!(&bytes[..header.len()], header);
        assert_eq!(bytes.len(), header.len() + 18);
        let small = RenderSpec::new((-1.0, 1.0, -1.0, 1.0), 3, 20, 2.0).unwrap();
        let img = julia_render(&Polynomial::from_ints(&[0, 0, 1]), 1, &small).unwrap();
        assert_eq!(img.to_pgm().len(), b"P5\n3 3\n20\n".len() + 9);
    }

    #[test]
    fn top_row_is_ymax() {
        let spec = RenderSpec::new((-1.0, 1.0, 0.0, 2.0), 2, 5, 2.0).unwrap();
        assert_eq!(spec.pixel_center(0, 0), Complex64::new(-0.5, 1.5));
        assert_eq!(spec.pixel_center(1, 1), Complex64::new(0.5, 0.5));
    }

    #[test]
    fn green_matches_log_modulus_for_square() {
        let spec = RenderSpec::new((3.0, 5.0, -1.0, 1.0), 1, 20, 2.0).unwrap();
        let img = julia_render(&Polynomial::monomial(CycloNumber::one(1), 2), 1, &spec).unwrap();
        assert!((img.green[0] - 4f64.ln()).abs() < 1e-12);
        assert!(img
            .green_csv()
            .starts_with("re,im,green\n4,0,1.38629436111989\n"));
    }

    #[test]
    fn fifteen_digits() {
        assert_eq!(fmt15(std::f64::consts::LN_2), "0.693147180559945");
        assert_eq!(fmt15(1.0), "1");
        assert_eq!(fmt15(-2.5), "-2.5");
        assert_eq!(fmt15(1e-9), "1.00000000000000e-9");
    }
}
