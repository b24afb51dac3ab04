mod cache;
mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Opts, RunConfig};
use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "revlab",
    version,
    about = "Invariant Laplace eigenvalues of metrics of revolution",
    after_help = "Exit codes: 0 ok, 2 configuration error, 3 solver cap reached, 4 numerical error or violated invariant.\n\
                  Set REVLAB_CACHE_DIR to memoize spectra of `spectrum` and `modes` across runs."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Invariant eigenvalues λ_0..=λ_k of each family.
    #[command(after_help = "Columns: family,index,eigenvalue,error_estimate")]
    Spectrum(Opts),
    /// Eigenvalues of the degree-ℓ harmonic modes.
    #[command(after_help = "Columns: family,l,multiplicity,index,eigenvalue,error_estimate")]
    Modes(Opts),
    /// Normalized eigenvalues against the glued-ball bound B_k.
    #[command(
        after_help = "Columns: profile,n,k,normalized_eigenvalue,bound,margin,bound_literal,envelope_pass,envelope_max_violation"
    )]
    Bound(Opts),
    /// Smoothed glued balls approaching the bound (grid: h values, decreasing).
    #[command(name = "extremal-seq", after_help = "Columns: parameter,lambda,volume,product,bound,gap,bound_literal")]
    ExtremalSeq(Opts),
    /// Conformal concentration on the flat torus (grid: δ values, decreasing).
    #[command(after_help = "Columns: parameter,lambda,volume,product,neumann_limit,ratio_to_limit")]
    Concentrate(Opts),
    /// Tori of revolution T_R (grid or --R: radii, increasing).
    #[command(
        after_help = "Columns: parameter,lambda,volume,product,ratio_min,ratio_max,length_ratio_min,length_ratio_max"
    )]
    Torus(Opts),
    /// Thin ellipses (grid: ε values, decreasing).
    #[command(after_help = "Columns: parameter,lambda,volume,product,loop_length")]
    Ellipse(Opts),
    /// One-sided derivatives of λ_k along spheroid, isometric or homothety families.
    #[command(after_help = "Columns: epsilon,lambda (JSON adds the derivative estimates)")]
    Probe(Opts),
    /// Index m(1, g) along product, torus or round families.
    #[command(after_help = "Columns: parameter,lambda,volume,product,m_index,exceeds")]
    Mindex(Opts),
    /// Run the command named by `command = "..."` in a config file.
    Run {
        #[arg(value_name = "CONFIG")]
        file: std::path::PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
}

fn resolve(cmd: Command) -> Result<RunConfig, CliError> {
    let (name, opts) = match cmd {
        Command::Spectrum(o) => ("spectrum", o),
        Command::Modes(o) => ("modes", o),
        Command::Bound(o) => ("bound", o),
        Command::ExtremalSeq(o) => ("extremal-seq", o),
        Command::Concentrate(o) => ("concentrate", o),
        Command::Torus(o) => ("torus", o),
        Command::Ellipse(o) => ("ellipse", o),
        Command::Probe(o) => ("probe", o),
        Command::Mindex(o) => ("mindex", o),
        Command::Run { file, mut opts } => {
            if opts.config.is_some() {
                return Err(CliError::Config("`run` takes its config file as the positional argument".into()));
            }
            opts.config = Some(file);
            return RunConfig::resolve(None, &opts);
        }
    };
    RunConfig::resolve(Some(name), &opts)
}

fn run(cmd: Command) -> Result<(), CliError> {
    let config = resolve(cmd)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = config.workers {
        pool = pool.num_threads(w);
    }
    let pool = pool.build().map_err(|e| CliError::Config(e.to_string()))?;
    let outcome = pool.install(|| commands::dispatch(&config))?;
    output::emit(&config, &outcome)?;
    for note in &outcome.notes {
        eprintln!("{note}");
    }
    check(&outcome)
}

/// Violated invariants take precedence over unconverged rows.
fn check(outcome: &commands::Outcome) -> Result<(), CliError> {
    if !outcome.violations.is_empty() {
        return Err(CliError::Numeric(outcome.violations.join("; ")));
    }
    let stalled: Vec<&str> = outcome
        .rows
        .iter()
        .filter(|r| !r.converged)
        .map(|r| r.label.as_str())
        .collect();
    if !stalled.is_empty() {
        return Err(CliError::SolverCap(format!("rows not converged: {}", stalled.join(", "))));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("revlab: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use commands::{Outcome, RowStatus};

    fn outcome(converged: bool, violations: Vec<String>) -> Outcome {
        Outcome {
            csv: String::new(),
            json: String::new(),
            rows: vec![RowStatus {
                label: "x".into(),
                converged,
            }],
            violations,
            notes: vec![],
        }
    }

    #[test]
    fn command_line_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn unconverged_rows_exit_with_the_cap_code() {
        assert!(check(&outcome(true, vec![])).is_ok());
        assert_eq!(check(&outcome(false, vec![])).unwrap_err().exit_code(), ExitCode::from(3));
        assert_eq!(
            check(&outcome(false, vec!["margin".into()])).unwrap_err().exit_code(),
            ExitCode::from(4)
        );
    }

    #[test]
    fn refinement_cap_maps_to_exit_three() {
        let e: CliError = revlab_core::Error::RefinementCap { elements: 1 << 20 }.into();
        assert_eq!(e.exit_code(), ExitCode::from(3));
        let e: CliError = revlab_core::Error::UnknownFamily("x".into()).into();
        assert_eq!(e.exit_code(), ExitCode::from(2));
        let e: CliError = revlab_core::Error::UnresolvedCrossing.into();
        assert_eq!(e.exit_code(), ExitCode::from(4));
    }
}
