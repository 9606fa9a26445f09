//! The `census` command: gate counts per term, variant and register size.

use crate::config::ConfigError;
use bcvqa_sim::census::{census_row, CensusKind};
use bcvqa_sim::qnpu::Variant;
use std::fmt::Write as _;

/// Header of the census CSV.
pub const CENSUS_HEADER: &str = "kind,variant,n,one_qubit,two_qubit,total";

/// Whether the counted circuit depends on the deep/shallow choice.
pub fn has_variants(kind: CensusKind) -> bool {
    matches!(
        kind,
        CensusKind::Laplace
            | CensusKind::BoundaryDn
            | CensusKind::BoundaryN
            | CensusKind::Transform
    )
}

/// Parses a list of kind labels; empty entries are ignored.
pub fn parse_kinds(labels: &[String]) -> Result<Vec<CensusKind>, ConfigError> {
    labels
        .iter()
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse().map_err(|_| ConfigError {
                field: "kinds".into(),
                message: format!(
                    "unknown kind `{s}` (expected one of {})",
                    CensusKind::ALL
                        .iter()
                        .map(|k| k.label())
                        .collect::<Vec<_>>()
                        .join(", ")
                ),
            })
        })
        .collect()
}

/// Census CSV for `kinds` over `n_min..=n_max`, counted after lowering to
/// one- and two-qubit gates. Variant-independent kinds get one row with
/// variant `none`.
pub fn census_csv(kinds: &[CensusKind], n_min: usize, n_max: usize) -> Result<String, ConfigError> {
    if n_min < 2 || n_min > n_max {
        return Err(ConfigError {
            field: "n-min".into(),
            message: format!("need 2 ≤ n-min ≤ n-max, got {n_min}..{n_max}"),
        });
    }
    let mut out = String::from(CENSUS_HEADER);
    out.push('\n');
    for &kind in kinds {
        let variants: &[Option<Variant>] = if has_variants(kind) {
            &[Some(Variant::Deep), Some(Variant::Shallow)]
        } else {
            &[None]
        };
        for &variant in variants {
            for n in n_min..=n_max {
                let row = census_row(kind, variant.unwrap_or(Variant::Deep), n).map_err(|e| {
                    ConfigError {
                        field: "kinds".into(),
                        message: e.to_string(),
                    }
                })?;
                let c = &row.lowered;
                writeln!(
                    out,
                    "{},{},{n},{},{},{}",
                    kind.label(),
                    variant.map_or("none", Variant::label),
                    c.one_qubit,
                    c.two_qubit,
                    c.total()
                )
                .expect("writing to a string");
            }
        }
    }
    Ok(out)
}
