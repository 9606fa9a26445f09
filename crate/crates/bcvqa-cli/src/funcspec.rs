//! Grid functions written as short text specs.
//!
//! | spec                 | meaning                                         |
//! |----------------------|-------------------------------------------------|
//! | `1.5`                | constant                                        |
//! | `split:a,b`          | `a` for `x < 0.5`, `b` otherwise                |
//! | `values:v1,v2,…`     | explicit grid values (length must be `2^n`)     |
//! | anything else        | expression in `x` (`sin(pi*x)`, `exp(-x^2)`, …) |
//!
//! Functions are sampled at the interior grid points `x_k = k/(N_p + 1)`.

use exmex::{Express, FlatEx};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// A parsed function spec; serializes back to its source text.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct FunctionSpec {
    text: String,
    kind: Kind,
}

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    Constant(f64),
    Split(f64, f64),
    Values(Vec<f64>),
    Expression,
}

fn numbers(list: &str) -> Result<Vec<f64>, String> {
    list.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| format!("`{}`: {e}", v.trim()))
        })
        .collect()
}

impl FromStr for FunctionSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let text = s.trim().to_string();
        if text.is_empty() {
            return Err("empty function spec".into());
        }
        let kind = if let Ok(v) = text.parse::<f64>() {
            Kind::Constant(v)
        } else if let Some(rest) = text.strip_prefix("split:") {
            match numbers(rest)?.as_slice() {
                [a, b] => Kind::Split(*a, *b),
                other => return Err(format!("split needs two values, got {}", other.len())),
            }
        } else if let Some(rest) = text.strip_prefix("values:") {
            Kind::Values(numbers(rest)?)
        } else {
            parse_expression(&text).map_err(|e| format!("`{text}`: {e}"))?;
            Kind::Expression
        };
        Ok(Self { text, kind })
    }
}

impl TryFrom<String> for FunctionSpec {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<FunctionSpec> for String {
    fn from(f: FunctionSpec) -> String {
        f.text
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl FunctionSpec {
    /// The spec text.
    pub fn as_str(&self) -> &str {
        &self.text
    }

    /// Whether the spec is the constant zero.
    pub fn is_zero(&self) -> bool {
        matches!(self.kind, Kind::Constant(v) if v == 0.0)
    }

    /// Values at the `n_points` interior grid points; every value must be finite.
    pub fn sample(&self, n_points: usize) -> Result<Vec<f64>, String> {
        let x = bcvqa_pde::grid::<f64>(n_points);
        let values = match &self.kind {
            Kind::Constant(v) => vec![*v; n_points],
            Kind::Split(a, b) => x.iter().map(|&x| if x < 0.5 { *a } else { *b }).collect(),
            Kind::Values(v) => {
                if v.len() != n_points {
                    return Err(format!(
                        "{} values given for {n_points} grid points",
                        v.len()
                    ));
                }
                v.clone()
            }
            Kind::Expression => {
                let expr = parse_expression(&self.text)?;
                let mut out = Vec::with_capacity(x.len());
                for &xk in &x {
                    let args: &[f64] = if expr.var_names().is_empty() {
                        &[]
                    } else {
                        std::slice::from_ref(&xk)
                    };
                    out.push(
                        expr.eval(args)
                            .map_err(|e| format!("`{}`: {e}", self.text))?,
                    );
                }
                out
            }
        };
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(format!(
                "`{}` is not finite at grid point {}",
                self.text,
                k + 1
            ));
        }
        Ok(values)
    }
}

/// Parses an arithmetic expression whose only variable is `x`.
fn parse_expression(text: &str) -> Result<FlatEx<f64>, String> {
    let expr = exmex::parse::<f64>(text).map_err(|e| e.to_string())?;
    match expr.var_names() {
        [] => Ok(expr),
        [v] if v == "x" => Ok(expr),
        other => Err(format!(
            "unknown variable(s) {}; only `x` is allowed",
            other.join(", ")
        )),
    }
}
