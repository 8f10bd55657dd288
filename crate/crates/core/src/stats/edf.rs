use super::{check_nu, finish, StatValue, StatisticId};
use crate::dpareto::{ratio_pow, DParetoParams, FrequencyTable};
use crate::error::Result;
use crate::special::{hurwitz_zeta, EvalControl};

/// Beyond this the fitted cdf is taken from the Hurwitz tail instead of the
/// running partial sum.
const RUNNING_SUM_LIMIT: u64 = 4096;

/// `C_n^e = n Σ_k (F̂_n(k) − F(k; ν))² p̂_n(k)`; only observed `k` contribute.
pub fn stat_cn(data: &FrequencyTable, nu: f64) -> Result<StatValue> {
    check_nu(nu)?;
    let params = DParetoParams::new(nu)?;
    let zeta = params.normalizer();
    let ctl = EvalControl::default();
    let n = data.total() as f64;

    let mut head = 0.0;
    let mut next = 1u64;
    let mut cum = 0u64;
    let mut acc = 0.0;
    for (k, c) in data.iter() {
        cum += c;
        let fitted = if k <= RUNNING_SUM_LIMIT {
            while next <= k {
                head += (next as f64).powf(-nu);
                next += 1;
            }
            head / zeta
        } else {
            1.0 - hurwitz_zeta(nu, k + 1, &ctl)? / zeta
        };
        let d = cum as f64 / n - fitted;
        acc += d * d * c as f64;
    }
    finish(StatisticId::CnE, acc, nu)
}

/// `S_BEN = Σ_{k=1}^{M_n} (e_n(k; ν) − ρ_n(k))²`.
///
/// Between consecutive observed values `e_n` is constant and `ρ_n` is zero,
/// so the sum collapses to one term per gap and one per observed value.
pub fn stat_sben(data: &FrequencyTable, nu: f64) -> Result<StatValue> {
    check_nu(nu)?;
    let n = data.total() as f64;
    let pts: Vec<(u64, f64, f64)> = data
        .iter()
        .map(|(v, c)| (v, c as f64, c as f64 * (1.0 - ratio_pow(v as f64, nu))))
        .collect();
    let mut e = pts.iter().map(|p| p.2).sum::<f64>() / n;
    let mut prev = 0u64;
    let mut acc = 0.0;
    for &(v, c, w) in &pts {
        let gap = (v - prev - 1) as f64;
        acc += gap * e * e;
        let d = e - c / n;
        acc += d * d;
        e -= w / n;
        prev = v;
    }
    finish(StatisticId::SBen, acc, nu)
}
