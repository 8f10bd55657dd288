//! Text input formats for count data.
//!
//! Both formats are whitespace-delimited UTF-8. Blank lines and lines whose
//! first non-blank character is `#` are skipped.

use crate::dpareto::FrequencyTable;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum InputFormat {
    /// One observation per line.
    RawCounts,
    /// `value count` per line.
    FreqPairs,
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "raw" | "raw-counts" => Ok(InputFormat::RawCounts),
            "freq" | "pairs" | "freq-pairs" => Ok(InputFormat::FreqPairs),
            _ => Err(Error::Config(format!("unknown input format {s:?}"))),
        }
    }
}

pub fn read(path: &Path, fmt: InputFormat) -> Result<FrequencyTable> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse(&text, fmt)
}

pub fn parse(text: &str, fmt: InputFormat) -> Result<FrequencyTable> {
    let mut values = Vec::new();
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        match fmt {
            InputFormat::RawCounts => {
                if fields.len() != 1 {
                    return Err(Error::Parse {
                        line,
                        message: format!("expected one integer, found {} fields", fields.len()),
                    });
                }
                values.push(positive(fields[0], line)?);
            }
            InputFormat::FreqPairs => {
                if fields.len() != 2 {
                    return Err(Error::Parse {
                        line,
                        message: format!("expected `value count`, found {} fields", fields.len()),
                    });
                }
                pairs.push((line, positive(fields[0], line)?, positive(fields[1], line)?));
            }
        }
    }
    match fmt {
        InputFormat::RawCounts => {
            if values.is_empty() {
                return Err(Error::EmptyInput);
            }
            FrequencyTable::from_values(values)
        }
        InputFormat::FreqPairs => {
            let mut seen = std::collections::HashSet::new();
            for &(line, v, _) in &pairs {
                if !seen.insert(v) {
                    return Err(Error::Parse {
                        line,
                        message: format!("value {v} listed more than once"),
                    });
                }
            }
            FrequencyTable::from_counts(pairs.into_iter().map(|(_, v, c)| (v, c)))
        }
    }
}

fn positive(field: &str, line: usize) -> Result<u64> {
    if let Ok(v) = field.parse::<u64>() {
        if v == 0 {
            return Err(Error::NonPositive {
                line,
                value: field.into(),
            });
        }
        return Ok(v);
    }
    if field.parse::<i128>().is_ok_and(|v| v <= 0) {
        return Err(Error::NonPositive {
            line,
            value: field.into(),
        });
    }
    Err(Error::Parse {
        line,
        message: format!("not a positive integer: {field:?}"),
    })
}

/// `value count` lines, readable back with [`InputFormat::FreqPairs`].
pub fn to_freq_pairs(table: &FrequencyTable) -> String {
    table.iter().map(|(v, c)| format!("{v} {c}\n")).collect()
}
