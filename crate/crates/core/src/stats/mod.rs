//! Goodness-of-fit statistics for the discrete Pareto law.
//!
//! Every statistic is evaluated on a [`FrequencyTable`], so double sums run
//! over distinct values weighted by multiplicity.

mod edf;
mod kernel;
mod meintanis;
mod stein_t;

pub use edf::{stat_cn, stat_sben};
pub use kernel::{kernel_h, stat_k};
pub use meintanis::{stat_z, stat_z_with};
pub use stein_t::stat_t;

use crate::dpareto::{FrequencyTable, NU_MAX};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Which statistic to compute, with its tuning parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StatisticId {
    /// The Stein-residual L² statistic 𝔎.
    KProposed,
    /// Inverse-Mellin statistic `Z_{n,a}`, `a > 0`.
    ZMeintanis { a: f64 },
    /// Generator-approach Stein statistic `T_{n,β}`, `β ≥ 0`.
    TStein { beta: f64 },
    /// Cramér–von Mises type `C_n^e`.
    CnE,
    /// Stein pmf-identity statistic `S_BEN`.
    SBen,
}

impl StatisticId {
    pub fn z(a: f64) -> Result<Self> {
        let id = StatisticId::ZMeintanis { a };
        id.validate()?;
        Ok(id)
    }

    pub fn t(beta: f64) -> Result<Self> {
        let id = StatisticId::TStein { beta };
        id.validate()?;
        Ok(id)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            StatisticId::ZMeintanis { a } if !(a > 0.0 && a.is_finite()) => {
                Err(Error::domain(format!("Z statistic needs a > 0, got {a}")))
            }
            StatisticId::TStein { beta } if !(beta >= 0.0 && beta.is_finite()) => Err(
                Error::domain(format!("T statistic needs beta >= 0, got {beta}")),
            ),
            _ => Ok(()),
        }
    }
}

/// Short label, also accepted by [`FromStr`]: `K`, `Z:0.5`, `T:0`, `CN`, `SBEN`.
impl fmt::Display for StatisticId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatisticId::KProposed => f.write_str("K"),
            StatisticId::ZMeintanis { a } => write!(f, "Z:{a}"),
            StatisticId::TStein { beta } => write!(f, "T:{beta}"),
            StatisticId::CnE => f.write_str("CN"),
            StatisticId::SBen => f.write_str("SBEN"),
        }
    }
}

impl FromStr for StatisticId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, param) = match s.split_once(':') {
            Some((h, p)) => (h, Some(p)),
            None => (s, None),
        };
        let num = |p: Option<&str>| -> Result<f64> {
            let p = p.ok_or_else(|| {
                Error::Config(format!("statistic {s:?} needs a parameter, e.g. {head}:1"))
            })?;
            p.trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad statistic parameter in {s:?}")))
        };
        let id = match (head.to_ascii_uppercase().as_str(), param) {
            ("K", None) => StatisticId::KProposed,
            ("CN", None) => StatisticId::CnE,
            ("SBEN", None) => StatisticId::SBen,
            ("Z", p) => StatisticId::ZMeintanis { a: num(p)? },
            ("T", p) => StatisticId::TStein { beta: num(p)? },
            _ => return Err(Error::Config(format!("unknown statistic {s:?}"))),
        };
        id.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(id)
    }
}

/// A statistic evaluated at a given shape exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatValue {
    pub id: StatisticId,
    pub value: f64,
    pub nu_used: f64,
}

/// Evaluates `id` on `data` at shape exponent `nu`.
pub fn evaluate(id: StatisticId, data: &FrequencyTable, nu: f64) -> Result<StatValue> {
    id.validate()?;
    match id {
        StatisticId::KProposed => stat_k(data, nu),
        StatisticId::ZMeintanis { a } => stat_z(data, nu, a),
        StatisticId::TStein { beta } => stat_t(data, nu, beta),
        StatisticId::CnE => stat_cn(data, nu),
        StatisticId::SBen => stat_sben(data, nu),
    }
}

pub(crate) fn check_nu(nu: f64) -> Result<()> {
    if nu > 1.0 && nu <= NU_MAX {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "shape exponent must lie in (1, {NU_MAX}], got {nu}"
        )))
    }
}

pub(crate) fn finish(id: StatisticId, value: f64, nu: f64) -> Result<StatValue> {
    if !value.is_finite() {
        return Err(Error::domain(format!(
            "{id} evaluated to {value} at nu = {nu}"
        )));
    }
    Ok(StatValue {
        id,
        value,
        nu_used: nu,
    })
}

#[cfg(test)]
pub(crate) mod testdata {
    use crate::dpareto::FrequencyTable;

    pub fn expelled() -> FrequencyTable {
        FrequencyTable::from_counts([(1, 1999), (2, 33), (3, 2), (4, 1), (5, 1)]).unwrap()
    }

    pub fn not_expelled() -> FrequencyTable {
        FrequencyTable::from_counts([(1, 1645), (2, 183), (3, 37), (4, 13), (5, 1), (6, 1)])
            .unwrap()
    }
}
