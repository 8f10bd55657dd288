//! The discrete Pareto law `p_ν(k) = k^{-ν} / ζ(ν)` on `k = 1, 2, ...`.

mod mle;
mod sample;
mod sampler;

pub use mle::{mle, mle_with, score, ShapeFit};
pub use sample::{FrequencyTable, Sample};
pub use sampler::ZetaSampler;

use crate::error::{Error, Result};
use crate::special::{self, EvalControl};
use serde::{Deserialize, Serialize};

/// Smallest shape exponent used anywhere in fitting or sampling.
pub const NU_MIN: f64 = 1.0 + 1e-6;
/// Largest shape exponent. Beyond this the law is a point mass at 1 to
/// double precision.
pub const NU_MAX: f64 = 50.0;
/// Draws are saturated at 2^53, the largest range in which every integer is
/// exactly representable as `f64`.
pub const MAX_VALUE: u64 = 1 << 53;

/// Up to this support point the cdf is a direct partial sum.
const CDF_DIRECT_LIMIT: u64 = 4096;

/// Parameters of `DPareto(ν)`, with the normalising constant cached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DParetoParams {
    nu: f64,
    #[serde(skip)]
    zeta: f64,
}

impl DParetoParams {
    /// Requires `1 < nu ≤ 50`.
    pub fn new(nu: f64) -> Result<Self> {
        if !(nu > 1.0 && nu <= NU_MAX) {
            return Err(Error::domain(format!(
                "shape exponent must lie in (1, {NU_MAX}], got {nu}"
            )));
        }
        let zeta = special::zeta(nu, &EvalControl::default())?;
        Ok(DParetoParams { nu, zeta })
    }

    /// Clamps `nu` into the working range `[NU_MIN, NU_MAX]`.
    pub fn clamped(nu: f64) -> Result<Self> {
        if nu.is_nan() {
            return Err(Error::domain("shape exponent is NaN"));
        }
        Self::new(nu.clamp(NU_MIN, NU_MAX))
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// `ζ(ν)`.
    pub fn normalizer(&self) -> f64 {
        self.zeta
    }

    pub fn pmf(&self, k: u64) -> Result<f64> {
        check_support(k)?;
        Ok((k as f64).powf(-self.nu) / self.zeta)
    }

    /// `P(X ≤ k)`.
    pub fn cdf(&self, k: u64) -> Result<f64> {
        check_support(k)?;
        if k <= CDF_DIRECT_LIMIT {
            let head: f64 = (1..=k).rev().map(|j| (j as f64).powf(-self.nu)).sum();
            return Ok((head / self.zeta).min(1.0));
        }
        let tail = special::hurwitz_zeta(self.nu, k + 1, &EvalControl::default())?;
        Ok((1.0 - tail / self.zeta).clamp(0.0, 1.0))
    }

    /// `E[s^X] = Li_ν(s) / ζ(ν)`.
    pub fn pgf(&self, s: f64) -> Result<f64> {
        Ok(special::polylog(self.nu, s, &EvalControl::default())? / self.zeta)
    }
}

fn check_support(k: u64) -> Result<()> {
    if k == 0 {
        Err(Error::domain(
            "support of the discrete Pareto law starts at 1",
        ))
    } else {
        Ok(())
    }
}

/// `(x/(x+1))^e`, computed as `exp(-e·ln(1+1/x))`.
#[inline]
pub(crate) fn ratio_pow(x: f64, exponent: f64) -> f64 {
    (-exponent * (1.0 / x).ln_1p()).exp()
}

/// The Stein residual `g_ν(x, s) = s^{x-1} - 1 + (x/(x+1))^ν (1 - s^x)`.
///
/// Its expectation vanishes for every `s ∈ (0, 1)` exactly when `X` is
/// discrete Pareto with exponent `ν`.
pub fn stein_residual(nu: f64, x: u64, s: f64) -> Result<f64> {
    if nu.is_nan() || nu <= 1.0 {
        return Err(Error::domain(format!(
            "shape exponent must exceed 1, got {nu}"
        )));
    }
    check_support(x)?;
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::domain(format!("s must lie in (0, 1), got {s}")));
    }
    Ok(stein_residual_unchecked(nu, x as f64, s))
}

#[inline]
pub(crate) fn stein_residual_unchecked(nu: f64, x: f64, s: f64) -> f64 {
    let sx = s.powf(x);
    s.powf(x - 1.0) - 1.0 + ratio_pow(x, nu) * (1.0 - sx)
}
