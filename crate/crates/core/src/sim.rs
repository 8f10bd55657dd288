//! Monte Carlo size and power studies.
//!
//! Alternatives perturb `X₁ ~ DPareto(ν)` by an independent
//! `X₂ ~ DU{0, ..., k}`, either additively or through the maximum.

use crate::bootstrap::{self, BootstrapConfig, Decision};
use crate::dpareto::{DParetoParams, FrequencyTable, Sample, ZetaSampler};
use crate::error::{Error, Result};
use crate::rng::stream;
use crate::stats::StatisticId;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AlternativeKind {
    NullDpareto,
    SumDu,
    MaxDu,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlternativeSpec {
    pub kind: AlternativeKind,
    pub nu: f64,
    /// Upper end of the discrete uniform support; ignored under the null.
    #[serde(default)]
    pub k: u64,
}

impl AlternativeSpec {
    pub fn null(nu: f64) -> Self {
        AlternativeSpec {
            kind: AlternativeKind::NullDpareto,
            nu,
            k: 0,
        }
    }

    pub fn sum_du(nu: f64, k: u64) -> Self {
        AlternativeSpec {
            kind: AlternativeKind::SumDu,
            nu,
            k,
        }
    }

    pub fn max_du(nu: f64, k: u64) -> Self {
        AlternativeSpec {
            kind: AlternativeKind::MaxDu,
            nu,
            k,
        }
    }

    pub fn validate(&self) -> Result<()> {
        DParetoParams::new(self.nu).map(|_| ())
    }
}

impl fmt::Display for AlternativeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            AlternativeKind::NullDpareto => write!(f, "X1({})", self.nu),
            AlternativeKind::SumDu => write!(f, "X1({})+DU({})", self.nu, self.k),
            AlternativeKind::MaxDu => write!(f, "max(X1({}),DU({}))", self.nu, self.k),
        }
    }
}

/// `n` draws from `spec`. Each observation takes its `X₁` draw(s) and then,
/// unless `k = 0` or the spec is the null, one `X₂` draw.
pub fn draw_alternative<R: Rng + ?Sized>(
    spec: &AlternativeSpec,
    n: usize,
    rng: &mut R,
) -> Result<Sample> {
    spec.validate()?;
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let sampler = ZetaSampler::new(&DParetoParams::new(spec.nu)?);
    let perturbed = spec.kind != AlternativeKind::NullDpareto && spec.k > 0;
    let values = (0..n)
        .map(|_| {
            let x1 = sampler.draw(rng);
            if !perturbed {
                return x1;
            }
            let x2 = rng.random_range(0..=spec.k);
            match spec.kind {
                AlternativeKind::SumDu => x1.saturating_add(x2),
                _ => x1.max(x2),
            }
        })
        .collect();
    Sample::new(values)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerStudyConfig {
    pub schema_version: u32,
    pub mc: usize,
    pub n: usize,
    pub boot: BootstrapConfig,
    #[serde(with = "labels")]
    pub tests: Vec<StatisticId>,
    pub alternatives: Vec<AlternativeSpec>,
}

impl PowerStudyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if self.mc == 0 {
            return Err(Error::Config("mc must be at least 1".into()));
        }
        if self.n < 2 {
            return Err(Error::Config("sample size n must be at least 2".into()));
        }
        if self.tests.is_empty() || self.alternatives.is_empty() {
            return Err(Error::Config(
                "need at least one test and one alternative".into(),
            ));
        }
        self.boot.validate()?;
        for t in &self.tests {
            t.validate().map_err(|e| Error::Config(e.to_string()))?;
        }
        for a in &self.alternatives {
            a.validate()
                .map_err(|e| Error::Config(format!("alternative {a}: {e}")))?;
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: PowerStudyConfig = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("power-study config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// The full study grid for `n` = 10 or 20:
    /// 27 alternatives, MC = 1000, b = 500.
    pub fn full_grid(n: usize, master_seed: u64) -> Self {
        let mut tests = vec![StatisticId::KProposed];
        let z: &[f64] = if n == 10 {
            &[0.5, 1.0, 1.5, 2.0]
        } else {
            &[0.5, 1.0, 2.0]
        };
        tests.extend(z.iter().map(|&a| StatisticId::ZMeintanis { a }));
        tests.extend((0..=5).map(|b| StatisticId::TStein { beta: b as f64 }));
        tests.extend([StatisticId::SBen, StatisticId::CnE]);
        let mut alternatives: Vec<AlternativeSpec> = [1.5, 2.0, 3.0]
            .into_iter()
            .map(AlternativeSpec::null)
            .collect();
        for k in [2, 4, 5] {
            for nu in [1.5, 2.0, 2.5, 3.0] {
                alternatives.push(AlternativeSpec::sum_du(nu, k));
            }
        }
        for k in [2, 4, 5] {
            for nu in [1.5, 2.0, 2.5, 3.0] {
                alternatives.push(AlternativeSpec::max_du(nu, k));
            }
        }
        PowerStudyConfig {
            schema_version: SCHEMA_VERSION,
            mc: 1000,
            n,
            boot: BootstrapConfig {
                replicates: 500,
                alpha: 0.05,
                master_seed,
                ..BootstrapConfig::default()
            },
            tests,
            alternatives,
        }
    }

    /// Reduced scale, MC = 300 and b = 300.
    pub fn desk_scale(mut self) -> Self {
        self.mc = 300;
        self.boot.replicates = 300;
        self
    }
}

mod labels {
    use crate::stats::StatisticId;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(ids: &[StatisticId], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(ids.iter().map(|id| id.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<StatisticId>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(D::Error::custom))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerRow {
    pub alternative: AlternativeSpec,
    pub label: String,
    /// Rejection rate per test, in the order of [`PowerTable::tests`].
    pub rates: Vec<f64>,
    /// Outer replications that completed; rates are over these.
    pub completed: usize,
    pub failures: usize,
    /// Outer replications whose own fit was degenerate (all ones).
    pub degenerate_fits: usize,
    /// Bootstrap replicates with degenerate refits, summed over the cell.
    pub degenerate_replicates: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerTable {
    pub schema_version: u32,
    pub mc: usize,
    pub n: usize,
    pub replicates: usize,
    pub alpha: f64,
    pub master_seed: u64,
    #[serde(with = "labels")]
    pub tests: Vec<StatisticId>,
    pub rows: Vec<PowerRow>,
}

impl PowerTable {
    pub fn rate(&self, alternative: &AlternativeSpec, test: StatisticId) -> Option<f64> {
        let col = self.tests.iter().position(|&t| t == test)?;
        let row = self.rows.iter().find(|r| r.alternative == *alternative)?;
        Some(row.rates[col])
    }

    /// One line per alternative, rates in percent to one decimal.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alternative");
        for t in &self.tests {
            out.push(',');
            out.push_str(&t.to_string());
        }
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.label);
            for rate in &r.rates {
                out.push_str(&format!(",{:.1}", 100.0 * rate));
            }
            out.push('\n');
        }
        out
    }
}

/// Per outer replication: rejection flags per test, observed-fit degeneracy,
/// degenerate bootstrap replicates.
type Outcome = (Vec<bool>, bool, usize);

/// Runs every alternative × outer replication. All tests in a row share the
/// outer samples and the bootstrap samples. Outer replication `r` of cell
/// `c` draws its data from `stream(seed, [c, r])` and its bootstrap
/// replicates from `stream(seed, [c, r, 1, i])`.
///
/// `progress` receives `(finished, total)` outer replications.
pub fn run_power_study(
    cfg: &PowerStudyConfig,
    progress: Option<&(dyn Fn(usize, usize) + Sync)>,
) -> Result<PowerTable> {
    cfg.validate()?;
    let seed = cfg.boot.master_seed;
    let total = cfg.alternatives.len() * cfg.mc;
    let done = AtomicUsize::new(0);
    let pool = cfg.boot.pool()?;

    let job = |idx: usize| -> Result<Outcome> {
        let (c, r) = ((idx / cfg.mc) as u64, (idx % cfg.mc) as u64);
        let spec = &cfg.alternatives[c as usize];
        let data = draw_alternative(spec, cfg.n, &mut stream(seed, &[c, r]))?.compress();
        let out = one_replication(&data, cfg, seed, &[c, r, 1]);
        let finished = done.fetch_add(1, Ordering::Relaxed) + 1;
        if let Some(cb) = progress {
            cb(finished, total);
        }
        out
    };
    let outcomes: Vec<Result<Outcome>> =
        pool.install(|| (0..total).into_par_iter().map(job).collect());

    let rows = cfg
        .alternatives
        .iter()
        .zip(outcomes.chunks(cfg.mc))
        .map(|(spec, cell)| {
            let ok: Vec<&Outcome> = cell.iter().filter_map(|o| o.as_ref().ok()).collect();
            let completed = ok.len();
            let rates = (0..cfg.tests.len())
                .map(|j| {
                    if completed == 0 {
                        f64::NAN
                    } else {
                        ok.iter().filter(|o| o.0[j]).count() as f64 / completed as f64
                    }
                })
                .collect();
            PowerRow {
                alternative: *spec,
                label: spec.to_string(),
                rates,
                completed,
                failures: cell.len() - completed,
                degenerate_fits: ok.iter().filter(|o| o.1).count(),
                degenerate_replicates: ok.iter().map(|o| o.2).sum(),
            }
        })
        .collect();

    Ok(PowerTable {
        schema_version: SCHEMA_VERSION,
        mc: cfg.mc,
        n: cfg.n,
        replicates: cfg.boot.replicates,
        alpha: cfg.boot.alpha,
        master_seed: seed,
        tests: cfg.tests.clone(),
        rows,
    })
}

fn one_replication(
    data: &FrequencyTable,
    cfg: &PowerStudyConfig,
    seed: u64,
    path: &[u64],
) -> Result<Outcome> {
    let reports = bootstrap::run(
        data,
        &cfg.tests,
        cfg.boot.replicates,
        cfg.boot.alpha,
        seed,
        path,
        false,
    )?;
    let rejects = reports
        .iter()
        .map(|r| r.decision == Decision::Reject)
        .collect();
    let first = &reports[0];
    Ok((
        rejects,
        first.fit.degenerate,
        first.degenerate_replicate_count,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn frequency_of_one(spec: AlternativeSpec, draws: usize) -> f64 {
        let s = draw_alternative(&spec, draws, &mut stream(4, &[0])).unwrap();
        s.values().iter().filter(|&&v| v == 1).count() as f64 / draws as f64
    }

    #[test]
    fn max_du_mass_at_one() {
        // P(X1 = 1) P(X2 ≤ 1)
        let p = 6.0 / (PI * PI) * 2.0 / 3.0;
        assert!((p - 0.4053).abs() < 1e-4);
        let n = 1_000_000;
        let f = frequency_of_one(AlternativeSpec::max_du(2.0, 2), n);
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((f - p).abs() < 4.0 * se, "{f} vs {p}");
    }

    #[test]
    fn sum_du_mass_at_one() {
        // P(X1 = 1) P(X2 = 0)
        let p = 6.0 / (PI * PI) / 3.0;
        assert!((p - 0.2026).abs() < 1e-4);
        let n = 1_000_000;
        let f = frequency_of_one(AlternativeSpec::sum_du(2.0, 2), n);
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((f - p).abs() < 4.0 * se, "{f} vs {p}");
    }

    #[test]
    fn zero_width_uniform_is_the_null() {
        let a =
            draw_alternative(&AlternativeSpec::sum_du(2.0, 0), 500, &mut stream(1, &[2])).unwrap();
        let b = draw_alternative(&AlternativeSpec::null(2.0), 500, &mut stream(1, &[2])).unwrap();
        assert_eq!(a, b);
        let c =
            draw_alternative(&AlternativeSpec::max_du(2.0, 0), 500, &mut stream(1, &[2])).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn outputs_are_positive() {
        for spec in [
            AlternativeSpec::sum_du(1.2, 5),
            AlternativeSpec::max_du(1.2, 5),
        ] {
            let s = draw_alternative(&spec, 10_000, &mut stream(3, &[0])).unwrap();
            assert!(s.values().iter().all(|&v| v >= 1));
        }
        assert!(draw_alternative(&AlternativeSpec::null(1.0), 5, &mut stream(0, &[0])).is_err());
    }

    #[test]
    fn labels() {
        assert_eq!(AlternativeSpec::null(1.5).to_string(), "X1(1.5)");
        assert_eq!(AlternativeSpec::sum_du(2.0, 4).to_string(), "X1(2)+DU(4)");
        assert_eq!(
            AlternativeSpec::max_du(3.0, 2).to_string(),
            "max(X1(3),DU(2))"
        );
    }

    #[test]
    fn full_grids() {
        let t1 = PowerStudyConfig::full_grid(10, 7);
        assert_eq!(t1.alternatives.len(), 27);
        assert_eq!(t1.tests.len(), 13);
        let t2 = PowerStudyConfig::full_grid(20, 7);
        assert_eq!(t2.tests.len(), 12);
        assert!(t2.validate().is_ok());
        let desk = t2.clone().desk_scale();
        assert_eq!((desk.mc, desk.boot.replicates), (300, 300));
    }

    #[test]
    fn config_json_round_trip() {
        let cfg = PowerStudyConfig::full_grid(20, 11);
        let js = serde_json::to_string_pretty(&cfg).unwrap();
        assert!(js.contains(r#""Z:0.5""#));
        assert!(js.contains(r#""kind": "SUM_DU""#));
        assert_eq!(PowerStudyConfig::from_json(&js).unwrap(), cfg);
        let bad = js.replace(r#""schema_version": 1"#, r#""schema_version": 9"#);
        assert!(PowerStudyConfig::from_json(&bad).is_err());
    }

    fn small(alternatives: Vec<AlternativeSpec>, workers: usize) -> PowerStudyConfig {
        PowerStudyConfig {
            schema_version: SCHEMA_VERSION,
            mc: 12,
            n: 15,
            boot: BootstrapConfig {
                replicates: 40,
                alpha: 0.05,
                master_seed: 5,
                workers,
            },
            tests: vec![
                StatisticId::KProposed,
                StatisticId::TStein { beta: 0.0 },
                StatisticId::CnE,
            ],
            alternatives,
        }
    }

    #[test]
    fn study_is_deterministic_and_well_formed() {
        let alts = vec![AlternativeSpec::null(2.0), AlternativeSpec::sum_du(2.0, 4)];
        let calls = AtomicUsize::new(0);
        let cb = |_: usize, _: usize| {
            calls.fetch_add(1, Ordering::Relaxed);
        };
        let a = run_power_study(&small(alts.clone(), 1), Some(&cb)).unwrap();
        assert_eq!(calls.load(Ordering::Relaxed), 24);
        let b = run_power_study(&small(alts, 3), None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows.len() * a.tests.len(), 6);
        for r in &a.rows {
            assert_eq!(r.completed + r.failures, 12);
            assert!(r.rates.iter().all(|&p| (0.0..=1.0).contains(&p)));
        }
        let csv = a.to_csv();
        assert!(csv.starts_with("alternative,K,T:0,CN\n"));
        assert_eq!(csv.lines().count(), 3);
        let back: PowerTable = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn zero_width_cell_matches_null_cell() {
        let a = run_power_study(&small(vec![AlternativeSpec::sum_du(2.0, 0)], 1), None).unwrap();
        let b = run_power_study(&small(vec![AlternativeSpec::null(2.0)], 1), None).unwrap();
        assert_eq!(a.rows[0].rates, b.rows[0].rates);
    }
}
