#![allow(dead_code)]

use dynline::{parse_line, parse_maps, parse_polynomial, Line, Polynomial, SplitPolynomialMap};

/// Polynomials over ℚ (conductor 1) and ℚ(i) (conductor 4).
pub const SYMMETRY_CORPUS: &[(&str, u32)] = &[
    ("z^2", 1),
    ("z^2 - 1", 1),
    ("z^2 + 1/4", 1),
    ("z^2 + 2*z", 1),
    ("z^3", 1),
    ("z^3 + 2*z", 1),
    ("z^3 - 3*z", 1),
    ("z^3 + z^2", 1),
    ("2*z^3 + 1", 1),
    ("z^4 - 1", 1),
    ("z^4 + z^2", 1),
    ("z^4 + z", 1),
    ("z^5 + z", 1),
    ("z^5 - z^3 + z", 1),
    ("z^6 + z^3 - 2", 1),
    ("z^6 + 3*z^2", 1),
    ("(z - 1)^3 + 1", 1),
    ("(z + 2)^4 - 3*(z + 2)^2 - 2", 1),
    ("z^2 + w", 4),
    ("w*z^3", 4),
    ("z^4 + w*z^2 + 1", 4),
    ("z^5 + (1+w)*z", 4),
    ("(z - w)^3 + w", 4),
    ("z^3 + w*z^2", 4),
];

pub fn symmetry_corpus() -> Vec<Polynomial> {
    SYMMETRY_CORPUS
        .iter()
        .map(|(s, n)| parse_polynomial(s, *n).unwrap())
        .collect()
}

/// Split maps with lines, over ℚ or ℚ(ζ_N).
pub const LINE_CORPUS: &[(&str, &str, u32)] = &[
    ("z^2;z^2", "(0,0)+t*(1,1)", 1),
    ("z^2;z^2", "(0,0)+t*(1,-1)", 1),
    ("z^2;z^2", "(0,0)+t*(1,2)", 1),
    ("z^2;z^2", "(1,0)+t*(1,1)", 1),
    ("z^2;z^2+1", "(0,0)+t*(1,1)", 1),
    ("z^2-1;z^2-1", "(0,0)+t*(1,1)", 1),
    ("z^2-1;z^2-1", "(0,0)+t*(1,-1)", 1),
    ("z^2-1;z^2;z^2", "(0,0,0)+t*(0,1,1)", 1),
    ("z^2-1;z^2;z^2", "(5,0,0)+t*(0,1,1)", 1),
    ("z^3;z^3", "(0,0)+t*(1,w)", 4),
    ("z^3;z^3", "(0,0)+t*(1,-w)", 4),
    ("z^3;-z^3", "(0,0)+t*(1,1)", 1),
    ("z^3;z^3", "(0,0)+t*(1,3)", 1),
    ("z^3+2*z;z^3+2*z", "(0,0)+t*(1,-1)", 1),
    ("z^2;z^2;z^2", "(0,0,0)+t*(1,1,-1)", 1),
    ("z^2;z^2;z^2", "(0,0,0)+t*(1,-1,w)", 4),
    ("z^2+w;z^2+w", "(0,0)+t*(1,1)", 4),
    ("z^4;z^4", "(0,0)+t*(1,w)", 4),
    ("z^2-2;z^2-2", "(0,0)+t*(1,-1)", 1),
];

pub fn line_corpus() -> Vec<(SplitPolynomialMap, Line)> {
    LINE_CORPUS
        .iter()
        .map(|(maps, line, n)| {
            let phi = SplitPolynomialMap::new(parse_maps(maps, *n).unwrap()).unwrap();
            let l = parse_line(line, Some(phi.dimension()), *n).unwrap();
            (phi, l)
        })
        .collect()
}
