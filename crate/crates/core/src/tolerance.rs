//! Numerical tolerances shared by the checks.

/// Relative tolerance for identities that hold exactly over the reals.
pub const IDENTITY_REL: f64 = 1e-8;

/// Relative tolerance for values accumulated over O(|H|) floating terms.
pub const ACCUM_REL: f64 = 1e-6;

/// Absolute slack on magnitudes of exponential sums when comparing against a bound.
pub const CHAR_SUM_ABS: f64 = 1e-9;

/// Absolute tolerance for a transform followed by its inverse.
pub const ROUNDTRIP_ABS: f64 = 1e-9;

/// `|a - b| <= rel * max(|a|, |b|, 1)`.
pub fn close_rel(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}
