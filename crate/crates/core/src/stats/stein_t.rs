use super::{check_nu, finish, StatValue, StatisticId};
use crate::dpareto::FrequencyTable;
use crate::error::Result;
use crate::special::ln_beta;

/// `T_{n,β} = (1/n) Σ_{j,k} ∫₀¹ φ(X_j,t) φ(X_k,t) (1-t)^{2+β} dt` with
/// `φ(x,t) = (x/(x-1))^ν t^{x-1} 1{x≥2} − t^x`, expanded into Beta
/// functions and split into the blocks `X = 1` / `X ≥ 2`.
pub fn stat_t(data: &FrequencyTable, nu: f64, beta: f64) -> Result<StatValue> {
    check_nu(nu)?;
    let id = StatisticId::TStein { beta };
    id.validate()?;
    let q = 3.0 + beta;
    let ones = data.count(1) as f64;
    // (x, count, (x/(x-1))^ν) for x ≥ 2
    let rest: Vec<(f64, f64, f64)> = data
        .iter()
        .filter(|&(v, _)| v >= 2)
        .map(|(v, c)| {
            let x = v as f64;
            (x, c as f64, (-nu * (-1.0 / x).ln_1p()).exp())
        })
        .collect();

    let mut total = ones * ones * ln_beta(3.0, q)?.exp();

    for &(x, c, r) in &rest {
        total -= 2.0 * c * ones * (r - (x + 1.0) / (beta + x + 4.0)) * ln_beta(x + 1.0, q)?.exp();
    }

    let mut diag = 0.0;
    let mut off = 0.0;
    for (i, &(x, cx, rx)) in rest.iter().enumerate() {
        diag += cx * cx * pair(x + x, rx, rx, q)?;
        for &(y, cy, ry) in &rest[i + 1..] {
            off += cx * cy * pair(x + y, rx, ry, q)?;
        }
    }
    total += diag + 2.0 * off;

    finish(id, total / data.total() as f64, nu)
}

/// `B(m-1,q) r_x r_y − B(m,q)(r_x + r_y) + B(m+1,q)` with `m = x + y`, the
/// last two obtained from the first by `B(p+1,q) = B(p,q)·p/(p+q)`.
fn pair(m: f64, rx: f64, ry: f64, q: f64) -> Result<f64> {
    let b0 = ln_beta(m - 1.0, q)?.exp();
    let b1 = b0 * (m - 1.0) / (m - 1.0 + q);
    let b2 = b1 * m / (m + q);
    Ok(b0 * rx * ry - b1 * (rx + ry) + b2)
}
