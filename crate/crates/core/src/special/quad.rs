use super::EvalControl;
use crate::error::{Error, Result};

// Gauss–Kronrod 7/15 abscissae and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Hard cap on panels held by one adaptive integration.
const MAX_PANELS: usize = 5_000;

#[derive(Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Panel {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let dx = half * XGK[i];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    Panel {
        lo,
        hi,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Globally adaptive Gauss–Kronrod quadrature of `f` over `[lo, hi]`.
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate drops below `ctl.abs_tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, ctl: &EvalControl) -> Result<f64> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::domain("integration limits must be finite"));
    }
    if lo == hi {
        return Ok(0.0);
    }
    let budget = MAX_PANELS.min(ctl.max_terms);
    let mut panels = vec![gk15(&f, lo, hi)];
    loop {
        let total_err: f64 = panels.iter().map(|p| p.error).sum();
        if total_err <= ctl.abs_tol {
            break;
        }
        if panels.len() >= budget {
            return Err(Error::NonConvergence {
                what: "adaptive quadrature",
                budget,
                estimate: total_err,
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .map(|(i, _)| i)
            .expect("panel list is never empty");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.lo + p.hi);
        if mid <= p.lo || mid >= p.hi {
            // cannot bisect further in floating point
            return Err(Error::NonConvergence {
                what: "adaptive quadrature",
                budget,
                estimate: total_err,
            });
        }
        panels.push(gk15(&f, p.lo, mid));
        panels.push(gk15(&f, mid, p.hi));
    }
    let mut values: Vec<f64> = panels.iter().map(|p| p.value).collect();
    values.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    Ok(values.into_iter().sum())
}

/// `∫₀^∞ f(t) dt` for integrands satisfying `|f(t)| ≤ |f(0)|·e^{-decay·t}`.
///
/// The range is cut at the point where the envelope's remaining mass is below
/// half the tolerance; the finite part is integrated adaptively to the other
/// half.
pub fn quad_semi_infinite<F: Fn(f64) -> f64>(f: F, decay: f64, ctl: &EvalControl) -> Result<f64> {
    if !(decay > 0.0 && decay.is_finite()) {
        return Err(Error::domain(format!(
            "decay rate must be positive, got {decay}"
        )));
    }
    let scale = f(0.0).abs();
    if !scale.is_finite() {
        return Err(Error::domain("integrand is not finite at 0"));
    }
    let half_tol = 0.5 * ctl.abs_tol;
    // envelope tail: scale * e^{-decay T} / decay <= half_tol
    let cut = if scale == 0.0 {
        1.0
    } else {
        ((scale / (decay * half_tol)).ln() / decay).max(1.0)
    };
    let inner = EvalControl {
        abs_tol: half_tol,
        ..*ctl
    };
    integrate(f, 0.0, cut, &inner)
}
