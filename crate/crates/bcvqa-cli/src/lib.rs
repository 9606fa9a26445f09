//! Command-line front end of the boundary-corrected VQA solver.
//!
//! * [`config`] — strict TOML scenarios and their validation;
//! * [`funcspec`] — the small grammar for source, potential and initial data;
//! * [`run`] — solving a scenario and writing `solution.csv`, `metrics.csv`
//!   and `summary.toml`;
//! * [`census`] — gate counts of the term circuits;
//! * [`fit`] — one-off state preparation with the shared cache;
//! * [`verify`] — matrix-level self-checks;
//! * [`scenarios`] — scenario files bundled with the binary.
//!
//! Output formats are described in `FORMATS.md` at the repository root.

pub mod census;
pub mod config;
pub mod fit;
pub mod funcspec;
pub mod report;
pub mod run;
pub mod scenarios;
pub mod verify;

pub use config::{ConfigError, RunPlan, ScenarioConfig};
pub use funcspec::FunctionSpec;
pub use run::{run_scenario, CliError, RunOutcome, Summary};
