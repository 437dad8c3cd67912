//! Exact arithmetic dynamics for split polynomial maps.
//!
//! * [`arith`]: ℚ and cyclotomic fields ℚ(ζ_N), polynomials, affine maps.
//! * [`heights`]: Weil and canonical heights with certified error radii,
//!   assembled from local heights, plus a Julia-set renderer.
//! * [`symmetry`]: symmetry groups of Julia sets computed exactly.
//! * [`decision`]: certified preperiodicity of points and of lines in affine
//!   space, and a scanner for small-height points on lines.
//! * [`parse`]: the text grammar for polynomials, field elements and lines.

pub mod arith;
pub mod decision;
pub mod heights;
pub mod parse;
pub mod symmetry;

pub use arith::{
    affine_conjugate, affine_order, cyclotomic_polynomial, is_root_of_unity, minimal_polynomial,
    poly_compose, AffineMap, AffineOrder, ArithError, CycloNumber, Polynomial, Rational,
    RootOfUnity,
};
pub use decision::{
    bogomolov_scan, escape_radius, line_preperiodic, orbit_point, replay_line, replay_point,
    DecisionError, Line, PreperiodicityVerdict, ScanReport, ScanRow, SplitPolynomialMap, Witness,
};
pub use heights::{
    canonical_height, canonical_height_split, local_height_arch, local_height_padic,
    naive_limit_height, weil_height, HeightError, HeightResult, LocalHeight, LogCombination,
    PlaceTag,
};
pub use parse::{
    parse_element, parse_line, parse_maps, parse_polynomial, parse_rational, ParseError,
};
pub use symmetry::{
    center, centered_form, same_julia, symmetry_check, symmetry_group, SameJulia, SymmetryGroup,
    SymmetryOrder,
};

pub(crate) fn display_string<T: std::fmt::Display, S: serde::Serializer>(
    v: &T,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}
