//! Log-log rank-frequency regression.

use crate::dpareto::FrequencyTable;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Ordinary least squares of `ln(frequency)` on `ln(value)` over the
/// observed distinct values. Under a discrete Pareto law the slope is
/// roughly `-ν`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogLogDiagnostic {
    /// `(ln value, ln frequency)`.
    pub points: Vec<(f64, f64)>,
    pub ols_slope: f64,
    pub ols_intercept: f64,
    pub r_squared: f64,
}

pub fn loglog(data: &FrequencyTable) -> Result<LogLogDiagnostic> {
    if data.distinct() < 2 {
        return Err(Error::InsufficientPoints {
            needed: 2,
            got: data.distinct(),
        });
    }
    let points: Vec<(f64, f64)> = data
        .iter()
        .map(|(v, c)| ((v as f64).ln(), (c as f64).ln()))
        .collect();
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    // constant frequencies are fitted exactly by a flat line
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(LogLogDiagnostic {
        points,
        ols_slope: slope,
        ols_intercept: intercept,
        r_squared,
    })
}

impl LogLogDiagnostic {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("log_value,log_frequency\n");
        for (x, y) in &self.points {
            out.push_str(&format!("{x},{y}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::testdata;
    use proptest::prelude::*;

    #[test]
    fn dataset_slopes() {
        let a = loglog(&testdata::expelled()).unwrap();
        assert!(
            (a.ols_slope - -5.016_354_72).abs() < 1e-8,
            "{}",
            a.ols_slope
        );
        assert!((a.ols_intercept - 7.161_162_78).abs() < 1e-8);
        let b = loglog(&testdata::not_expelled()).unwrap();
        assert!(
            (b.ols_slope - -4.313_967_73).abs() < 1e-8,
            "{}",
            b.ols_slope
        );
        assert_eq!(b.points.len(), 6);
    }

    #[test]
    fn exact_power_law() {
        // 60³/k³ is an integer for k = 1..5
        let t = FrequencyTable::from_counts((1..=5u64).map(|k| (k, 216_000 / k.pow(3)))).unwrap();
        let d = loglog(&t).unwrap();
        assert!((d.ols_slope + 3.0).abs() < 1e-12);
        assert!((d.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn needs_two_values() {
        let t = FrequencyTable::from_values([3, 3, 3]).unwrap();
        assert_eq!(
            loglog(&t),
            Err(Error::InsufficientPoints { needed: 2, got: 1 })
        );
    }

    #[test]
    fn csv_layout() {
        let d = loglog(&FrequencyTable::from_counts([(1, 1), (2, 1)]).unwrap()).unwrap();
        assert_eq!(d.to_csv().lines().next(), Some("log_value,log_frequency"));
        assert_eq!(d.r_squared, 1.0);
        assert_eq!(d.ols_slope, 0.0);
    }

    proptest! {
        #[test]
        fn slope_invariant_to_scaling(pairs in proptest::collection::btree_map(1u64..1000, 1u64..1000, 2..20), scale in 2u64..50) {
            let t = FrequencyTable::from_counts(pairs.clone()).unwrap();
            let s = FrequencyTable::from_counts(pairs.into_iter().map(|(v, c)| (v, c * scale))).unwrap();
            let (a, b) = (loglog(&t).unwrap(), loglog(&s).unwrap());
            prop_assert!((a.ols_slope - b.ols_slope).abs() <= 1e-9 * a.ols_slope.abs().max(1.0));
            prop_assert!((b.ols_intercept - a.ols_intercept - (scale as f64).ln()).abs() <= 1e-9);
            prop_assert!((0.0..=1.0).contains(&a.r_squared));
        }
    }
}
