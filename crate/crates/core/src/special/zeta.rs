use super::EvalControl;
use crate::error::{Error, Result};

/// `B_{2j} / (2j)!` for j = 1..=12.
const EM_COEFFS: [f64; 12] = [
    0.083_333_333_333_333_33,
    -0.001_388_888_888_888_889,
    3.306_878_306_878_307e-5,
    -8.267_195_767_195_768e-7,
    2.087_675_698_786_81e-8,
    -5.284_190_138_687_493e-10,
    1.338_253_653_068_467_9e-11,
    -3.389_680_296_322_582_7e-13,
    8.586_062_056_277_845e-15,
    -2.174_868_698_558_062e-16,
    5.509_002_828_360_229_5e-18,
    -1.395_446_468_581_252_2e-19,
];

fn check_exponent(s: f64) -> Result<()> {
    if s > 1.0 && !s.is_nan() {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "zeta needs an exponent > 1, got {s}"
        )))
    }
}

/// Euler–Maclaurin evaluation of `Σ_{k≥q} k^{-s}` and, optionally, its
/// derivative in `s`. The cut point moves outward until a correction term
/// falls below tolerance; for `x^{-s}` the remainder is bounded by the first
/// omitted term.
fn em_sum(s: f64, q: u64, with_deriv: bool, ctl: &EvalControl) -> Result<(f64, f64)> {
    let tol = ctl.abs_tol;
    let mut direct_terms: u64 = ((s / 2.0).ceil() as u64).clamp(8, 64);
    let mut next_k = q;
    let mut direct = 0.0;
    let mut direct_d = 0.0;
    let mut estimate = f64::INFINITY;

    loop {
        if direct_terms as usize > ctl.max_terms {
            return Err(Error::NonConvergence {
                what: "zeta Euler-Maclaurin sum",
                budget: ctl.max_terms,
                estimate,
            });
        }
        let cut = q.saturating_add(direct_terms);
        while next_k < cut {
            let k = next_k as f64;
            let p = k.powf(-s);
            direct += p;
            if with_deriv {
                direct_d -= k.ln() * p;
            }
            next_k += 1;
        }

        let n = cut as f64;
        let ln_n = n.ln();
        let n_pow = n.powf(-s);
        let integral = n * n_pow / (s - 1.0);
        let half = 0.5 * n_pow;
        let mut tail = integral + half;
        let mut tail_d = -integral * ln_n - integral / (s - 1.0) - half * ln_n;

        let mut poly = s;
        let mut poly_dlog = 1.0 / s;
        let mut power = n_pow / n;
        let mut converged = false;
        for (idx, c) in EM_COEFFS.iter().enumerate() {
            let t = c * poly * power;
            let dt = t * (poly_dlog - ln_n);
            estimate = if with_deriv {
                t.abs().max(dt.abs())
            } else {
                t.abs()
            };
            // absolute tolerance, tightened to rounding level of the result
            let floor = f64::EPSILON * (direct + tail).abs();
            if estimate < tol.min(floor.max(f64::MIN_POSITIVE)) {
                converged = true;
                break;
            }
            tail += t;
            tail_d += dt;
            let a = s + (2 * idx + 1) as f64;
            let b = s + (2 * idx + 2) as f64;
            poly *= a * b;
            poly_dlog += 1.0 / a + 1.0 / b;
            power /= n * n;
        }
        if converged {
            return Ok((direct + tail, direct_d + tail_d));
        }
        direct_terms *= 2;
    }
}

/// Riemann zeta `Σ_{k≥1} k^{-s}` for real `s > 1`.
pub fn zeta(s: f64, ctl: &EvalControl) -> Result<f64> {
    check_exponent(s)?;
    if s.is_infinite() {
        return Ok(1.0);
    }
    em_sum(s, 1, false, ctl).map(|(v, _)| v)
}

/// `ζ'(s) = -Σ ln(k) k^{-s}`.
pub fn zeta_prime(s: f64, ctl: &EvalControl) -> Result<f64> {
    zeta_and_prime(s, ctl).map(|(_, d)| d)
}

/// `(ζ(s), ζ'(s))` from a single pass.
pub fn zeta_and_prime(s: f64, ctl: &EvalControl) -> Result<(f64, f64)> {
    check_exponent(s)?;
    if s.is_infinite() {
        return Ok((1.0, 0.0));
    }
    em_sum(s, 1, true, ctl)
}

/// Hurwitz zeta at a positive integer shift: `Σ_{k≥q} k^{-s}`.
pub fn hurwitz_zeta(s: f64, q: u64, ctl: &EvalControl) -> Result<f64> {
    check_exponent(s)?;
    if q == 0 {
        return Err(Error::domain("Hurwitz shift must be at least 1"));
    }
    if s.is_infinite() {
        return Ok(if q == 1 { 1.0 } else { 0.0 });
    }
    em_sum(s, q, false, ctl).map(|(v, _)| v)
}

/// Polylogarithm `Li_ν(z) = Σ_{k≥1} z^k k^{-ν}` for `0 ≤ z < 1` by direct
/// power-series summation. The remainder after term `N` is at most
/// `z^{N+1} (N+1)^{-ν} / (1 - z)`.
pub fn polylog(nu: f64, z: f64, ctl: &EvalControl) -> Result<f64> {
    check_exponent(nu)?;
    if !(0.0..1.0).contains(&z) {
        return Err(Error::domain(format!(
            "polylog argument must lie in [0, 1), got {z}"
        )));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let tail_scale = 1.0 / (1.0 - z);
    let mut sum = 0.0;
    let mut zk = z;
    let mut term = z;
    for k in 1..=ctl.max_terms {
        sum += term;
        zk *= z;
        let next = zk * ((k + 1) as f64).powf(-nu);
        if next * tail_scale < ctl.abs_tol.min(f64::EPSILON * sum) {
            return Ok(sum);
        }
        term = next;
    }
    Err(Error::NonConvergence {
        what: "polylog series",
        budget: ctl.max_terms,
        estimate: term * tail_scale,
    })
}
