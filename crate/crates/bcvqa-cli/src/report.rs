//! Number formatting and the CSV / summary writers.

use bcvqa_solver::MarchResult;
use std::fmt::Write as _;

/// Shortest exact-enough text of a float: 17 significant digits in scientific
/// notation (`1.2345678901234567e-3`), `NaN`, `inf` or `-inf`.
pub fn fmt17(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

fn opt17(v: Option<f64>) -> String {
    v.map(fmt17).unwrap_or_default()
}

/// Per-step error measures of a run.
#[derive(Clone, Debug, PartialEq)]
pub struct StepMetrics {
    /// `ε_l2`.
    pub l2: f64,
    /// Pointwise-overlap `ε_tr` (absent for a vanishing vector).
    pub trace: Option<f64>,
    /// Pure-state trace distance (absent for a vanishing vector).
    pub overlap: Option<f64>,
}

/// Header of the metrics CSV.
pub const METRICS_HEADER: &str =
    "step,time,eps_l2,eps_tr,eps_ov,J,lambda0,pso_iterations,gd_iterations,gd_converged,prep_residual";

/// Header of the solution CSV.
pub const SOLUTION_HEADER: &str = "step,time,k,x,y_vqa,y_fd";

/// Metrics CSV: one row per step.
pub fn metrics_csv(run: &MarchResult, metrics: &[StepMetrics]) -> String {
    let mut out = String::from(METRICS_HEADER);
    out.push('\n');
    for (s, m) in run.steps.iter().zip(metrics) {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            s.step,
            fmt17(s.time),
            fmt17(m.l2),
            opt17(m.trace),
            opt17(m.overlap),
            fmt17(s.objective),
            fmt17(s.control.lambda0),
            s.pso_iterations,
            s.gd_iterations,
            s.gd_converged,
            fmt17(s.prep_residual),
        )
        .expect("writing to a string");
    }
    out
}

/// Solution CSV: one row per grid point and step; `initial` (transient runs)
/// is written as step 0 for both columns.
pub fn solution_csv(run: &MarchResult, x: &[f64], initial: Option<&[f64]>) -> String {
    let mut out = String::from(SOLUTION_HEADER);
    out.push('\n');
    let mut row = |step: usize, time: f64, y_vqa: &[f64], y_fd: &[f64]| {
        for (k, xk) in x.iter().enumerate() {
            writeln!(
                out,
                "{step},{},{},{},{},{}",
                fmt17(time),
                k + 1,
                fmt17(*xk),
                fmt17(y_vqa[k]),
                fmt17(y_fd[k])
            )
            .expect("writing to a string");
        }
    };
    if let Some(y0) = initial {
        row(0, 0.0, y0, y0);
    }
    for s in &run.steps {
        row(s.step, s.time, &s.y_vqa, &s.y_fd);
    }
    out
}
