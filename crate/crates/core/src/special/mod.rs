//! Special functions: Riemann zeta and its derivative, the Hurwitz tail,
//! the polylogarithm, the Beta function and adaptive quadrature.
//!
//! Everything here is a pure function of its arguments. Tolerances are
//! absolute and controlled through [`EvalControl`].

mod quad;
mod zeta;

pub use quad::{integrate, quad_semi_infinite};
pub use zeta::{hurwitz_zeta, polylog, zeta, zeta_and_prime, zeta_prime};

use crate::error::{Error, Result};
use statrs::function::gamma::ln_gamma;

/// Accuracy and work limits for series and quadrature evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalControl {
    pub abs_tol: f64,
    pub max_terms: usize,
}

impl EvalControl {
    pub fn new(abs_tol: f64, max_terms: usize) -> Result<Self> {
        if !(abs_tol > 0.0 && abs_tol.is_finite()) {
            return Err(Error::domain(format!(
                "abs_tol must be positive, got {abs_tol}"
            )));
        }
        if max_terms < 100 {
            return Err(Error::domain(format!(
                "max_terms must be at least 100, got {max_terms}"
            )));
        }
        Ok(EvalControl { abs_tol, max_terms })
    }
}

impl Default for EvalControl {
    fn default() -> Self {
        EvalControl {
            abs_tol: 1e-12,
            max_terms: 10_000_000,
        }
    }
}

/// `ln B(a, b)` via log-Gamma.
pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::domain(format!(
            "Beta function needs a, b > 0, got ({a}, {b})"
        )));
    }
    let (big, small) = if a >= b { (a, b) } else { (b, a) };
    if big < STIRLING_FROM {
        return Ok(ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b));
    }
    Ok(ln_gamma(small) - ln_gamma_ratio(big, small))
}

/// Above this argument `ln Γ(x+b) - ln Γ(x)` is taken from Stirling's series
/// rather than by subtracting two large log-Gammas.
const STIRLING_FROM: f64 = 50.0;

fn stirling_correction(z: f64) -> f64 {
    let r = 1.0 / z;
    let r2 = r * r;
    r * (1.0 / 12.0 - r2 * (1.0 / 360.0 - r2 / 1260.0))
}

/// `ln Γ(x+b) - ln Γ(x)` for `x ≥ STIRLING_FROM`.
fn ln_gamma_ratio(x: f64, b: f64) -> f64 {
    (x + b - 0.5) * (b / x).ln_1p() + b * x.ln() - b + stirling_correction(x + b)
        - stirling_correction(x)
}

/// The Beta function `Γ(a)Γ(b)/Γ(a+b)`, evaluated in log space so that
/// large arguments underflow gracefully instead of overflowing.
pub fn beta_fn(a: f64, b: f64) -> Result<f64> {
    ln_beta(a, b).map(f64::exp)
}
