pub mod bootstrap;
pub mod dpareto;
pub mod error;
pub mod ingest;
pub mod loglog;
pub mod rng;
pub mod sim;
pub mod special;
pub mod stats;

pub use bootstrap::{bootstrap_test, BootstrapConfig, Decision, GofReport};
pub use dpareto::{mle, DParetoParams, FrequencyTable, Sample, ShapeFit};
pub use error::{Error, ErrorClass, Result};
pub use ingest::InputFormat;
pub use loglog::{loglog, LogLogDiagnostic};
pub use sim::{run_power_study, AlternativeSpec, PowerStudyConfig, PowerTable};
pub use stats::{evaluate, StatValue, StatisticId};
