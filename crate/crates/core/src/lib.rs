//! Quadratic Fourier analysis over F_p^n at desk scale.
//!
//! Exact finite-field linear algebra, Fourier transforms and Gowers norms on
//! subspaces, quadratic level sets and their pseudorandomness estimates,
//! Brauer-quadruple counting and colourings, density-increment machinery, a
//! brute-force inverse-theorem laboratory, and complexity-two configuration
//! counting. Every estimate with an explicit constant comes with a check
//! that evaluates both sides exactly.

pub mod brauer;
pub mod complexity2;
pub mod error;
pub mod gf;
pub mod harmonic;
pub mod increment;
pub mod inverse_lab;
pub mod par;
pub mod quadsets;
pub mod random;
pub mod tolerance;

pub use error::{Error, Result};
