use super::{DParetoParams, Sample, MAX_VALUE};
use rand::Rng;

/// Exact rejection sampler for the Zeta law.
///
/// Proposals come from the continuous Pareto envelope `⌊U^{-1/(ν-1)}⌋` and
/// are accepted with the ratio of the discrete pmf to the envelope mass
/// (Devroye, Non-Uniform Random Variate Generation, X.6). The expected
/// number of proposals per draw is bounded for every `ν > 1`.
#[derive(Debug, Clone, Copy)]
pub struct ZetaSampler {
    exponent_m1: f64,
    inv_exponent: f64,
    // 2^{ν-1} and 2^{ν-1} - 1
    b: f64,
    b_m1: f64,
}

impl ZetaSampler {
    pub fn new(params: &DParetoParams) -> Self {
        let em1 = params.nu() - 1.0;
        let b_m1 = (em1 * std::f64::consts::LN_2).exp_m1();
        ZetaSampler {
            exponent_m1: em1,
            inv_exponent: -1.0 / em1,
            b: b_m1 + 1.0,
            b_m1,
        }
    }

    /// One draw; values at or beyond 2^53 are saturated to [`MAX_VALUE`].
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        loop {
            let u = 1.0 - rng.random::<f64>();
            let v = rng.random::<f64>();
            let x = u.powf(self.inv_exponent).floor();
            // x (T - 1) and T with T = (1 + 1/x)^{ν-1}
            let (x_t, t) = if x.is_finite() {
                let log_t = self.exponent_m1 * (1.0 / x).ln_1p();
                (x * log_t.exp_m1(), log_t.exp())
            } else {
                (self.exponent_m1, 1.0)
            };
            if v * x_t / self.b_m1 <= t / self.b {
                return if x >= MAX_VALUE as f64 {
                    MAX_VALUE
                } else {
                    x as u64
                };
            }
        }
    }
}

impl DParetoParams {
    /// `n` independent draws from this law.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Sample {
        assert!(n >= 1, "sample size must be positive");
        let sampler = ZetaSampler::new(self);
        Sample::from_draws((0..n).map(|_| sampler.draw(rng)).collect())
    }
}
