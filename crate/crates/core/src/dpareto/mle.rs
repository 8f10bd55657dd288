use super::{FrequencyTable, NU_MAX, NU_MIN};
use crate::error::{Error, Result};
use crate::special::{self, EvalControl};
use serde::{Deserialize, Serialize};

/// Maximum-likelihood fit of the shape exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeFit {
    pub nu_hat: f64,
    /// Score `ζ'(ν)/ζ(ν) + mean ln X` at `nu_hat`.
    pub score_residual: f64,
    pub bracket: (f64, f64),
    /// The score has no root (all observations equal 1) and `nu_hat` sits
    /// on the upper clamp.
    pub degenerate: bool,
}

/// The likelihood score per observation, `ζ'(ν)/ζ(ν) + mean_log`.
///
/// `ζ'/ζ` increases strictly from `-∞` to `0`, so the score has at most one
/// root.
pub fn score(nu: f64, mean_log: f64, ctl: &EvalControl) -> Result<f64> {
    let (z, dz) = special::zeta_and_prime(nu, ctl)?;
    Ok(dz / z + mean_log)
}

pub fn mle(data: &FrequencyTable) -> Result<ShapeFit> {
    mle_with(data, &EvalControl::default())
}

/// Solves the score equation on `[NU_MIN, NU_MAX]` with Brent's method.
pub fn mle_with(data: &FrequencyTable, ctl: &EvalControl) -> Result<ShapeFit> {
    let mean_log = data.mean_log();
    let bracket = (NU_MIN, NU_MAX);
    let f = |nu: f64| score(nu, mean_log, ctl);

    let upper = f(NU_MAX)?;
    if data.is_all_ones() || upper <= 0.0 {
        return Ok(ShapeFit {
            nu_hat: NU_MAX,
            score_residual: upper,
            bracket,
            degenerate: true,
        });
    }
    let lower = f(NU_MIN)?;
    if lower >= 0.0 {
        // would need mean ln X ≳ 1e6; unreachable for 64-bit counts
        return Err(Error::domain(format!(
            "score is non-negative at the lower clamp (mean log {mean_log})"
        )));
    }
    let (nu_hat, score_residual) = brent(f, NU_MIN, NU_MAX, lower, upper)?;
    Ok(ShapeFit {
        nu_hat,
        score_residual,
        bracket,
        degenerate: false,
    })
}

/// Brent's root finder on a sign-changing bracket, iterated to the
/// resolution of the abscissa.
fn brent<F>(f: F, lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    const MAX_ITER: usize = 200;
    let (mut a, mut b, mut fa, mut fb) = (lo, hi, f_lo, f_hi);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 1e-15;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok((b, fb));
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Err(Error::NonConvergence {
        what: "maximum-likelihood root search",
        budget: MAX_ITER,
        estimate: fb.abs(),
    })
}
