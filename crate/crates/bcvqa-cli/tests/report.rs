//! Number formatting, CSV layouts and the census table.

use bcvqa_cli::census::{census_csv, has_variants, parse_kinds, CENSUS_HEADER};
use bcvqa_cli::report::{fmt17, METRICS_HEADER, SOLUTION_HEADER};
use bcvqa_cli::run::CliError;
use bcvqa_sim::census::CensusKind;
use bcvqa_solver::SolverError;
use proptest::prelude::*;

fn significant_digits(text: &str) -> usize {
    let mantissa = text.trim_start_matches('-').split('e').next().unwrap();
    mantissa.chars().filter(char::is_ascii_digit).count()
}

#[test]
fn floats_use_seventeen_significant_digits() {
    assert_eq!(fmt17(0.1), "1.0000000000000001e-1");
    assert_eq!(fmt17(-0.25), "-2.5000000000000000e-1");
    // The nearest double to 2.5e-7 lies just below it.
    assert_eq!(fmt17(-2.5e-7), "-2.4999999999999999e-7");
    assert_eq!(fmt17(0.0), "0.0000000000000000e0");
    assert_eq!(significant_digits(&fmt17(std::f64::consts::PI)), 17);
    assert_eq!(fmt17(f64::NAN), "NaN");
    assert_eq!(fmt17(f64::INFINITY), "inf");
    assert_eq!(fmt17(f64::NEG_INFINITY), "-inf");
}

#[test]
fn csv_headers_are_stable() {
    assert_eq!(
        METRICS_HEADER,
        "step,time,eps_l2,eps_tr,eps_ov,J,lambda0,pso_iterations,gd_iterations,gd_converged,prep_residual"
    );
    assert_eq!(SOLUTION_HEADER, "step,time,k,x,y_vqa,y_fd");
    assert_eq!(CENSUS_HEADER, "kind,variant,n,one_qubit,two_qubit,total");
}

#[test]
fn empty_census_is_header_only() {
    assert_eq!(
        census_csv(&[], 2, 12).unwrap(),
        format!("{CENSUS_HEADER}\n")
    );
    assert_eq!(parse_kinds(&[]).unwrap(), vec![]);
    assert_eq!(parse_kinds(&[String::new()]).unwrap(), vec![]);
}

#[test]
fn census_rows_cover_kinds_variants_and_sizes() {
    let csv = census_csv(&CensusKind::ALL, 2, 4).unwrap();
    let rows: Vec<Vec<&str>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    let with_variants = CensusKind::ALL.iter().filter(|k| has_variants(**k)).count();
    let without = CensusKind::ALL.len() - with_variants;
    assert_eq!(rows.len(), 3 * (2 * with_variants + without));
    for r in &rows {
        let (one, two, total): (usize, usize, usize) = (
            r[3].parse().unwrap(),
            r[4].parse().unwrap(),
            r[5].parse().unwrap(),
        );
        assert_eq!(one + two, total, "{r:?}");
        let kind: CensusKind = r[0].parse().unwrap();
        assert_eq!(r[1] == "none", !has_variants(kind), "{r:?}");
    }
}

#[test]
fn census_rejects_bad_ranges_and_kinds() {
    assert_eq!(
        census_csv(&[CensusKind::Laplace], 1, 3).unwrap_err().field,
        "n-min"
    );
    assert_eq!(
        census_csv(&[CensusKind::Laplace], 5, 4).unwrap_err().field,
        "n-min"
    );
    let err = parse_kinds(&["laplace".into(), "adder".into()]).unwrap_err();
    assert_eq!(err.field, "kinds");
    assert!(err.message.contains("adder"));
}

#[test]
fn exit_codes_follow_the_failure_kind() {
    let divergence = SolverError::Divergence {
        iteration: 3,
        value: f64::NAN,
        detail: "x".into(),
    };
    assert_eq!(CliError::from(divergence).exit_code(), 3);
    assert_eq!(CliError::from(SolverError::ZeroFunction).exit_code(), 1);
    let config = bcvqa_cli::ConfigError {
        field: "pso.particles".into(),
        message: "bad".into(),
    };
    assert_eq!(CliError::from(config).exit_code(), 2);
    assert_eq!(CliError::Io("disk".into()).exit_code(), 1);
}

proptest! {
    #[test]
    fn formatted_floats_parse_back_exactly(bits in any::<u64>()) {
        let v = f64::from_bits(bits);
        prop_assume!(v.is_finite());
        let text = fmt17(v);
        prop_assert_eq!(text.parse::<f64>().unwrap(), v);
        prop_assert_eq!(significant_digits(&text), 17);
    }
}
