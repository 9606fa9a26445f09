use bcvqa_cli::census::{census_csv, parse_kinds};
use bcvqa_cli::fit::{fit_command, FitRequest};
use bcvqa_cli::run::CliError;
use bcvqa_cli::verify::run_checks;
use bcvqa_cli::{run_scenario, scenarios, ConfigError, FunctionSpec};
use bcvqa_solver::PrepMethod;
use clap::{Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Variational statevector solver for 1D reaction/diffusion problems.
#[derive(Debug, Parser)]
#[command(name = "bcvqa", version)]
struct Cli {
    /// Random seed (overrides the scenario's `pso.seed`).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (overrides the scenario's `output.dir`).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Worker threads for particle evaluation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Fit,
    Exact,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a scenario (a TOML file or a bundled scenario name).
    Run {
        /// Scenario file or bundled name.
        config: String,
    },
    /// Print gate counts as CSV.
    Census {
        /// Term kinds (laplace, source, potential, boundary-dn, boundary-n,
        /// transform, ansatz).
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        kinds: Vec<String>,
        /// Smallest register size.
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        /// Largest register size.
        #[arg(long)]
        n_max: usize,
    },
    /// Prepare one function as a quantum state.
    Fit {
        /// Function: a number, `split:a,b`, `values:v1,...` or an expression in x.
        function: String,
        /// Register size.
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Bricklayer depth.
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// Fitted or exact preparation.
        #[arg(long, value_enum, default_value_t = Method::Fit)]
        method: Method,
    },
    /// Run the matrix-level self-checks.
    Verify,
    /// List bundled scenarios.
    Scenarios,
}

fn print_line(line: &str) {
    let mut out = std::io::stdout().lock();
    // A closed stdout must not abort a solve.
    let _ = writeln!(out, "{line}");
}

fn execute(cli: Cli) -> Result<(), CliError> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(ConfigError {
                field: "threads".into(),
                message: "must be at least 1".into(),
            }
            .into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Run { config } => {
            let scenario = scenarios::resolve(&config)?;
            run_scenario(&scenario, cli.seed, cli.out_dir.as_deref(), &print_line)?;
        }
        Command::Census {
            kinds,
            n_min,
            n_max,
        } => {
            let kinds = parse_kinds(&kinds)?;
            print!("{}", census_csv(&kinds, n_min, n_max)?);
        }
        Command::Fit {
            function,
            n,
            depth,
            method,
        } => {
            let function: FunctionSpec = function.parse().map_err(|message| ConfigError {
                field: "function".into(),
                message,
            })?;
            let req = FitRequest {
                function,
                n,
                depth,
                method: match method {
                    Method::Fit => PrepMethod::Fit,
                    Method::Exact => PrepMethod::Exact,
                },
                seed: cli.seed.unwrap_or(0),
            };
            let cache = cli.out_dir.as_ref().map(|d| d.join("stateprep_cache.json"));
            for line in fit_command(&req, cache.as_deref())? {
                print_line(&line);
            }
        }
        Command::Verify => {
            let checks = run_checks();
            for c in &checks {
                print_line(&format!(
                    "check={} result={} max_error={:.3e} tolerance={:.1e}",
                    c.name,
                    if c.passed { "pass" } else { "fail" },
                    c.max_error,
                    c.tolerance
                ));
            }
            let failed: Vec<_> = checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| c.name)
                .collect();
            if !failed.is_empty() {
                return Err(CliError::Check(failed.join(", ")));
            }
        }
        Command::Scenarios => {
            for (name, _) in scenarios::BUNDLED {
                print_line(name);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
