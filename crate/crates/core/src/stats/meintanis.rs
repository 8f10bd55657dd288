use super::{check_nu, finish, StatValue, StatisticId};
use crate::dpareto::FrequencyTable;
use crate::error::{Error, Result};
use crate::special::{quad_semi_infinite, zeta, EvalControl};
use std::cell::RefCell;

/// Above this many terms the `I_a^{(1)}` series is replaced by its integral
/// representation.
const SERIES_LIMIT: f64 = 2e6;

/// `Z_{n,a}` with the default evaluation control.
pub fn stat_z(data: &FrequencyTable, nu: f64, a: f64) -> Result<StatValue> {
    stat_z_with(data, nu, a, &EvalControl::default())
}

/// `Z_{n,a} = ζ²(ν)(1/n)ΣΣ I⁽⁰⁾(X_j X_k) + n I⁽²⁾(1) − 2ζ(ν) Σ I⁽¹⁾(X_j)`.
pub fn stat_z_with(data: &FrequencyTable, nu: f64, a: f64, ctl: &EvalControl) -> Result<StatValue> {
    check_nu(nu)?;
    let id = StatisticId::ZMeintanis { a };
    id.validate()?;
    let n = data.total() as f64;
    let z = zeta(nu, ctl)?;
    let pts: Vec<(f64, f64)> = data
        .iter()
        .map(|(v, c)| ((v as f64).ln(), c as f64))
        .collect();

    let mut diag = 0.0;
    let mut off = 0.0;
    for (i, &(lx, cx)) in pts.iter().enumerate() {
        diag += cx * cx / (a + 2.0 * lx);
        for &(ly, cy) in &pts[i + 1..] {
            off += cx * cy / (a + lx + ly);
        }
    }
    let i0 = (diag + 2.0 * off) / n;

    let i2_ctl = scaled(ctl, z * z / a);
    let i2 = try_quad(
        |t| Ok(zeta(nu + t, ctl)?.powi(2) * (-a * t).exp()),
        a,
        &i2_ctl,
    )?;

    let i1 = match series_terms(nu, a, ctl.abs_tol) {
        Some(terms) => i1_series(&pts, nu, a, terms),
        None => i1_integral(&pts, nu, a, z, ctl)?,
    };

    finish(id, z * z * i0 + n * i2 - 2.0 * z * i1, nu)
}

/// Floors the absolute tolerance at a few ulps of the integrand scale.
fn scaled(ctl: &EvalControl, scale: f64) -> EvalControl {
    EvalControl {
        abs_tol: ctl.abs_tol.max(64.0 * f64::EPSILON * scale),
        ..*ctl
    }
}

/// Number of terms `S` after which `Σ_{s>S} s^{-ν}/(a + ln(sx)) ≤ tol` for
/// every `x ≥ 1`, using `Σ_{s>S} s^{-ν} ≤ S^{1-ν}/(ν-1)` and
/// `a + ln(sx) ≥ a + ln S`. `None` when that exceeds [`SERIES_LIMIT`].
fn series_terms(nu: f64, a: f64, tol: f64) -> Option<usize> {
    let em1 = nu - 1.0;
    let bound = |s: f64| s.powf(-em1) / (em1 * (a + s.ln()));
    let mut s = 16.0;
    while bound(s) > tol {
        s *= 2.0;
        if s > SERIES_LIMIT {
            return None;
        }
    }
    // bisect down to the smallest power-of-two-bracketed S
    let (mut lo, mut hi) = (s / 2.0, s);
    while hi - lo > 1.0 {
        let mid = (0.5 * (lo + hi)).floor();
        if bound(mid) > tol {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(hi as usize)
}

/// `Σ_j c_j I⁽¹⁾(x_j)` by the truncated series. The weights `s^{-ν}` and
/// `ln s` are shared across observations.
fn i1_series(pts: &[(f64, f64)], nu: f64, a: f64, terms: usize) -> f64 {
    let table: Vec<(f64, f64)> = (1..=terms)
        .map(|s| {
            let s = s as f64;
            (s.powf(-nu), s.ln())
        })
        .collect();
    pts.iter()
        .map(|&(lx, c)| {
            let base = a + lx;
            // smallest terms first
            let sum: f64 = table.iter().rev().map(|&(w, ls)| w / (base + ls)).sum();
            c * sum
        })
        .sum()
}

/// `Σ_j c_j I⁽¹⁾(x_j) = ∫₀^∞ ζ(ν+t) Σ_j c_j x_j^{-t} e^{-at} dt`.
fn i1_integral(pts: &[(f64, f64)], nu: f64, a: f64, z: f64, ctl: &EvalControl) -> Result<f64> {
    let n: f64 = pts.iter().map(|p| p.1).sum();
    let local = scaled(ctl, n * z / a);
    try_quad(
        |t| {
            let m: f64 = pts.iter().map(|&(lx, c)| c * (-(a + lx) * t).exp()).sum();
            Ok(zeta(nu + t, ctl)? * m)
        },
        a,
        &local,
    )
}

/// Semi-infinite quadrature of a fallible integrand; the first evaluation
/// error is returned in place of the integral.
fn try_quad<F: Fn(f64) -> Result<f64>>(f: F, decay: f64, ctl: &EvalControl) -> Result<f64> {
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let value = quad_semi_infinite(
        |t| match f(t) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        },
        decay,
        ctl,
    );
    match failure.into_inner() {
        Some(e) => Err(e),
        None => value,
    }
}
