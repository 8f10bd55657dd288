use super::{check_nu, finish, StatValue, StatisticId};
use crate::dpareto::{ratio_pow, FrequencyTable};
use crate::error::{Error, Result};

/// `h_ν(x, y) = ∫₀¹ g_ν(x, s) g_ν(y, s) ds` in closed form.
pub fn kernel_h(nu: f64, x: u64, y: u64) -> Result<f64> {
    check_nu(nu)?;
    if x == 0 || y == 0 {
        return Err(Error::domain("kernel arguments must be at least 1"));
    }
    // evaluate in a fixed argument order so the result is exactly symmetric
    let (x, y) = (x.min(y) as f64, x.max(y) as f64);
    Ok(kernel(x, y, ratio_pow(x, nu + 1.0), ratio_pow(y, nu + 1.0)))
}

/// Kernel with `px = (x/(x+1))^{ν+1}` and `py` precomputed.
///
/// The constant, `-px - py` and `px·py` terms are regrouped into
/// `(1-px)(1-py) + px·py/(x+y+1)`.
#[inline]
fn kernel(x: f64, y: f64, px: f64, py: f64) -> f64 {
    let s = x + y;
    1.0 / (s - 1.0) - (1.0 / x + 1.0 / y)
        + px * (x + 1.0) / (y * s)
        + py * (y + 1.0) / (x * s)
        + px * py / (s + 1.0)
        + (1.0 - px) * (1.0 - py)
}

/// The statistic `𝔎 = (1/n) Σ_{i,j} h_ν(X_i, X_j)`.
pub fn stat_k(data: &FrequencyTable, nu: f64) -> Result<StatValue> {
    check_nu(nu)?;
    let pts: Vec<(f64, f64, f64)> = data
        .iter()
        .map(|(v, c)| {
            let x = v as f64;
            (x, c as f64, ratio_pow(x, nu + 1.0))
        })
        .collect();
    let mut diag = 0.0;
    let mut off = 0.0;
    for (i, &(x, cx, px)) in pts.iter().enumerate() {
        diag += cx * cx * kernel(x, x, px, px);
        for &(y, cy, py) in &pts[i + 1..] {
            off += cx * cy * kernel(x, y, px, py);
        }
    }
    // h is positive semidefinite; clip rounding noise below zero
    let value = ((diag + 2.0 * off) / data.total() as f64).max(0.0);
    finish(StatisticId::KProposed, value, nu)
}
