use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Observed counts `X_1, ..., X_n`, each at least 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    values: Vec<u64>,
}

impl Sample {
    pub fn new(values: Vec<u64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(pos) = values.iter().position(|&v| v == 0) {
            return Err(Error::NonPositive {
                line: pos + 1,
                value: "0".into(),
            });
        }
        Ok(Sample { values })
    }

    /// Callers guarantee a non-empty list of positive values.
    pub(crate) fn from_draws(values: Vec<u64>) -> Self {
        debug_assert!(!values.is_empty() && values.iter().all(|&v| v >= 1));
        Sample { values }
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn compress(&self) -> FrequencyTable {
        let mut counts = BTreeMap::new();
        for &v in &self.values {
            *counts.entry(v).or_insert(0u64) += 1;
        }
        FrequencyTable {
            total: self.values.len() as u64,
            counts,
        }
    }
}

/// Distinct value → multiplicity. This is the representation every
/// statistic works on: double sums run over the `d` distinct values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(u64, u64)>", into = "Vec<(u64, u64)>")]
pub struct FrequencyTable {
    counts: BTreeMap<u64, u64>,
    total: u64,
}

impl FrequencyTable {
    /// Builds a table from `(value, count)` pairs. Values must be distinct
    /// and positive, counts positive.
    pub fn from_counts<I: IntoIterator<Item = (u64, u64)>>(pairs: I) -> Result<Self> {
        let mut counts = BTreeMap::new();
        let mut total: u64 = 0;
        for (i, (value, count)) in pairs.into_iter().enumerate() {
            if value == 0 || count == 0 {
                return Err(Error::NonPositive {
                    line: i + 1,
                    value: if value == 0 { value } else { count }.to_string(),
                });
            }
            if counts.insert(value, count).is_some() {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("value {value} listed more than once"),
                });
            }
            total = total
                .checked_add(count)
                .ok_or_else(|| Error::domain("total count overflows u64"))?;
        }
        if counts.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(FrequencyTable { counts, total })
    }

    pub fn from_values<I: IntoIterator<Item = u64>>(values: I) -> Result<Self> {
        Ok(Sample::new(values.into_iter().collect())?.compress())
    }

    /// Sample size `n`.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of distinct values.
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    /// `(value, count)` in increasing value order.
    pub fn iter(&self) -> impl ExactSizeIterator<Item = (u64, u64)> + Clone + '_ {
        self.counts.iter().map(|(&v, &c)| (v, c))
    }

    pub fn count(&self, value: u64) -> u64 {
        self.counts.get(&value).copied().unwrap_or(0)
    }

    pub fn max_value(&self) -> u64 {
        *self.counts.keys().next_back().expect("table is non-empty")
    }

    /// `(1/n) Σ ln X_i`.
    pub fn mean_log(&self) -> f64 {
        let s: f64 = self.iter().map(|(v, c)| c as f64 * (v as f64).ln()).sum();
        s / self.total as f64
    }

    pub fn is_all_ones(&self) -> bool {
        self.distinct() == 1 && self.counts.contains_key(&1)
    }

    pub fn expand(&self) -> Sample {
        let values = self
            .iter()
            .flat_map(|(v, c)| std::iter::repeat_n(v, c as usize))
            .collect();
        Sample { values }
    }
}

impl TryFrom<Vec<(u64, u64)>> for FrequencyTable {
    type Error = Error;

    fn try_from(pairs: Vec<(u64, u64)>) -> Result<Self> {
        FrequencyTable::from_counts(pairs)
    }
}

impl From<FrequencyTable> for Vec<(u64, u64)> {
    fn from(t: FrequencyTable) -> Self {
        t.iter().collect()
    }
}
