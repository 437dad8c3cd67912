//! Exact Gaussian elimination over ℚ.

use num_traits::Zero;

use super::rational::Rational;

/// Solves `Σ_j x_j · columns[j] = rhs`. Returns one solution (free variables
/// set to zero) or `None` when the system is inconsistent.
pub fn solve_columns(columns: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let rows = rhs.len();
    let cols = columns.len();
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Rational> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut().skip(c) {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in c..=cols {
                    let t = &factor * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    Some(x)
}
