//! Batch front door: parse a run configuration, drive the pipeline, emit a
//! deterministic report on stdout.
//!
//! Exit codes: 0 success, 1 configuration error, 2 computation error,
//! 3 identity-suite residual above the configured threshold. Errors go to
//! stderr as a json document.

mod config;

use clap::{Parser, ValueEnum};
use config::{ProblemInput, ValidatedConfig};
use nppencil::harness;
use nppencil::herglotz::{herglotz_audit, AuditReport};
use nppencil::pencil::PencilCoefficients;
use nppencil::recurrence::{pade_value, pade_value_median, PadeRoute};
use nppencil::report::{PadeRow, Report, ReportFormat};
use nppencil::schur::{build_chain_from_measure, build_chain_from_values};
use nppencil::weyl::{
    determinacy_indicator, tangency_report, weyl_disk, DeterminacyThresholds, DiskMethod,
};
use nppencil::Error as CoreError;
use serde_json::json;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    Validate,
    Coeffs,
    Pade,
    Weyl,
    Converge,
    Identities,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Truncated Nevanlinna-Pick interpolation via tridiagonal linear pencils.
#[derive(Parser, Debug)]
#[command(name = "nppencil", version, about)]
struct Cli {
    /// What to compute.
    #[arg(long, value_enum)]
    command: Command,
    /// Path to the json run configuration.
    #[arg(long)]
    config: std::path::PathBuf,
    /// Report encoding on stdout.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(bytes) => {
            use std::io::Write;
            std::io::stdout().write_all(&bytes).expect("stdout");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            if let Some(bytes) = &failure.partial_output {
                use std::io::Write;
                std::io::stdout().write_all(bytes).expect("stdout");
            }
            eprintln!("{}", failure.document);
            ExitCode::from(failure.code)
        }
    }
}

struct Failure {
    code: u8,
    document: String,
    /// Report bytes to still print (identity suite over threshold).
    partial_output: Option<Vec<u8>>,
}

fn config_failure(e: config::ConfigError) -> Failure {
    Failure {
        code: 1,
        document: json!({
            "error": {"kind": "config", "pointer": e.pointer, "reason": e.reason}
        })
        .to_string(),
        partial_output: None,
    }
}

fn compute_failure(e: CoreError) -> Failure {
    Failure {
        code: 2,
        document: json!({
            "error": {"kind": "computation", "reason": e.to_string()}
        })
        .to_string(),
        partial_output: None,
    }
}

fn run(cli: &Cli) -> Result<Vec<u8>, Failure> {
    let bytes = std::fs::read(&cli.config).map_err(|e| {
        config_failure(config::ConfigError {
            pointer: "".into(),
            reason: format!("cannot read {}: {e}", cli.config.display()),
        })
    })?;
    let parsed = config::parse_config(&bytes).map_err(config_failure)?;
    let echo: serde_json::Value =
        serde_json::from_slice(&bytes).unwrap_or(serde_json::Value::Null);

    let precision_override = match std::env::var("TOOL_PRECISION_BITS") {
        Ok(s) => Some(s.parse::<u32>().map_err(|_| {
            config_failure(config::ConfigError {
                pointer: "/precision_bits".into(),
                reason: format!("TOOL_PRECISION_BITS={s:?} is not a valid bit count"),
            })
        })?),
        Err(_) => None,
    };
    let vc = config::validate(&parsed, echo, precision_override).map_err(config_failure)?;

    let format = match cli.format {
        Format::Json => ReportFormat::Json,
        Format::Csv => ReportFormat::Csv,
    };

    let (report, exit_override) = dispatch(cli.command, &vc).map_err(compute_failure)?;
    let bytes = report.emit(format).map_err(compute_failure)?;
    if let Some(code) = exit_override {
        return Err(Failure {
            code,
            document: json!({
                "error": {"kind": "identities", "reason": "residual above threshold"}
            })
            .to_string(),
            partial_output: Some(bytes),
        });
    }
    Ok(bytes)
}

fn coefficients_for(vc: &ValidatedConfig) -> Result<PencilCoefficients, CoreError> {
    let chain = match &vc.input {
        ProblemInput::Measure(m) => build_chain_from_measure(m, &vc.points, vc.depth)?,
        ProblemInput::Data(problem) => build_chain_from_values(problem, vc.depth)?,
    };
    PencilCoefficients::from_chain(&chain)
}

fn dispatch(command: Command, vc: &ValidatedConfig) -> Result<(Report, Option<u8>), CoreError> {
    let prec = vc.prec;
    match command {
        Command::Validate => {
            let audit = match &vc.input {
                ProblemInput::Measure(m) => herglotz_audit(&prec, m, &vc.grid)?,
                ProblemInput::Data(problem) => {
                    // no evaluator to probe; report the data's own class
                    // margins (validated at parse time)
                    let mut min_im = prec.real(f64::INFINITY);
                    let mut at = problem.points()[0].clone();
                    for (z, w) in problem.points().iter().zip(problem.values()) {
                        if w.im() < &min_im {
                            min_im = w.im().clone();
                            at = z.clone();
                        }
                    }
                    AuditReport {
                        violation: min_im <= 0,
                        min_im,
                        min_im_at: at,
                        symmetry_defect: prec.real(0.0),
                    }
                }
            };
            Ok((
                Report::Validate {
                    precision_bits: prec.bits(),
                    audit,
                    config_echo: vc.echo.clone(),
                },
                None,
            ))
        }
        Command::Coeffs => {
            let chain = match &vc.input {
                ProblemInput::Measure(m) => build_chain_from_measure(m, &vc.points, vc.depth)?,
                ProblemInput::Data(problem) => build_chain_from_values(problem, vc.depth)?,
            };
            Ok((Report::Coeffs { chain }, None))
        }
        Command::Pade => {
            let coeffs = coefficients_for(vc)?;
            let n = coeffs.len() - 1;
            let mut rows = Vec::with_capacity(vc.grid.len());
            for lam in &vc.grid {
                rows.push(PadeRow {
                    lambda: lam.clone(),
                    median: pade_value_median(&coeffs, lam, n)?,
                    ratio: pade_value(&coeffs, lam, n, PadeRoute::Ratio)?,
                    cfrac: pade_value(&coeffs, lam, n, PadeRoute::ContinuedFraction)?,
                    matrix: pade_value(&coeffs, lam, n, PadeRoute::Matrix)?,
                });
            }
            Ok((
                Report::Pade {
                    precision_bits: prec.bits(),
                    n,
                    rows,
                },
                None,
            ))
        }
        Command::Weyl => {
            let coeffs = coefficients_for(vc)?;
            let lambda = vc.lambda.clone().ok_or_else(|| CoreError::InvalidInput {
                what: "weyl command".into(),
                reason: "config `lambda` is required".into(),
            })?;
            let levels = vc.weyl_levels.unwrap_or(coeffs.len()).min(coeffs.len());
            let mut disks = Vec::new();
            let mut fit_radii = Vec::new();
            let mut printed_radii = Vec::new();
            for j in 1..=levels {
                disks.push(weyl_disk(&coeffs, &lambda, j, DiskMethod::Determinant)?);
                fit_radii.push(weyl_disk(&coeffs, &lambda, j, DiskMethod::ThreePointFit)?.radius);
                printed_radii
                    .push(weyl_disk(&coeffs, &lambda, j, DiskMethod::PaperFormula)?.radius);
            }
            let mut tangency = Vec::new();
            for j in 1..levels {
                tangency.push(tangency_report(&coeffs, &lambda, j)?);
            }
            let determinacy = determinacy_indicator(
                &coeffs,
                &lambda,
                coeffs.len() - 1,
                &DeterminacyThresholds::default(),
            )?;
            Ok((
                Report::Weyl {
                    precision_bits: prec.bits(),
                    lambda,
                    disks,
                    fit_radii,
                    printed_radii,
                    tangency,
                    determinacy,
                },
                None,
            ))
        }
        Command::Converge => {
            let measure = match &vc.input {
                ProblemInput::Measure(m) => m,
                ProblemInput::Data(_) => {
                    return Err(CoreError::InvalidInput {
                        what: "converge command".into(),
                        reason: "needs a measure (exact reference values)".into(),
                    })
                }
            };
            let report = harness::run_convergence(
                measure,
                &vc.points,
                vc.depth.saturating_sub(1).max(1),
                &vc.grid,
                "config",
            )?;
            Ok((Report::Convergence(report), None))
        }
        Command::Identities => {
            let report = match &vc.input {
                ProblemInput::Measure(m) => {
                    harness::run_identity_suite(m, &vc.points, vc.depth, vc.samples, vc.seed)?
                }
                ProblemInput::Data(_) => {
                    let coeffs = coefficients_for(vc)?;
                    harness::run_identity_suite_on_coeffs(&prec, &coeffs, vc.samples, vc.seed)?
                }
            };
            let exceeded = report.worst().to_f64() > vc.identity_threshold;
            Ok((
                Report::Identities {
                    report,
                    precision_bits: prec.bits(),
                    threshold: vc.identity_threshold,
                },
                exceeded.then_some(3),
            ))
        }
    }
}
