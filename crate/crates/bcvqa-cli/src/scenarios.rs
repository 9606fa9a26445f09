//! Scenario files shipped with the binary.

use crate::config::{ConfigError, ScenarioConfig};
use std::path::Path;

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        /// `(name, TOML text)` of every bundled scenario.
        pub const BUNDLED: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../scenarios/", $name, ".toml")))),*
        ];
    };
}

bundled!(
    "poisson_periodic_n2",
    "poisson_dirichlet_n2",
    "poisson_dirichlet_inh_n2",
    "poisson_neumann_n2",
    "poisson_neumann_inh_n2",
    "poisson_mixed_n2",
    "poisson_robin_n2",
    "poisson_dirichlet_n4",
    "poisson_mixed_n4",
    "heat_dirichlet_n2",
    "heat_dirichlet_inh_n2",
    "heat_mixed_n2",
    "heat_mixed_n4",
);

/// TOML text of a bundled scenario.
pub fn bundled_text(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Parses a bundled scenario.
pub fn bundled(name: &str) -> Option<Result<ScenarioConfig, ConfigError>> {
    bundled_text(name).map(ScenarioConfig::from_toml)
}

/// Resolves a `run` argument: an existing file wins, otherwise a bundled name.
pub fn resolve(arg: &str) -> Result<ScenarioConfig, ConfigError> {
    let path = Path::new(arg);
    if path.exists() {
        return ScenarioConfig::load(path);
    }
    bundled(arg).unwrap_or_else(|| {
        Err(ConfigError {
            field: "config".into(),
            message: format!(
                "`{arg}` is neither a file nor a bundled scenario ({})",
                BUNDLED
                    .iter()
                    .map(|(n, _)| *n)
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        })
    })
}
