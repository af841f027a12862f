use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use entropyflow::experiments::{
    audit, describe, exit_code, output_stem, run, write_outputs, AuditOptions, ExperimentConfig,
    ExperimentKind, OutputFormat, RunOutput, EXIT_NUMERICAL, EXIT_OK,
};
use entropyflow::Error;

#[derive(Parser)]
#[command(name = "entropyflow", version, about = "Entropy flows under classical and quantum coarse graining")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment config and write its CSV and JSON summary.
    Run {
        config: PathBuf,
        /// Directory for the output files (overrides the config's directory).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Which files to write (overrides the config).
        #[arg(long)]
        format: Option<OutputFormat>,
        /// Add wallTime (seconds) to the summary. Breaks byte-identity.
        #[arg(long)]
        timing: bool,
    },
    /// Run every invariant suite and print the JSON report.
    Audit {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = AuditOptions::DEFAULT_MAX_DIM)]
        max_dim: usize,
        /// Add a non-monotone channel that claims to be monotone.
        #[arg(long)]
        inject_fault: bool,
        /// Also write auditAll.csv and auditAll.json here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "both")]
        format: OutputFormat,
    },
    /// Print the CSV column schema of an experiment kind.
    Describe { kind: String },
}

fn report_failure(out: &RunOutput) {
    if let Some((row, flag)) = out.first_failure() {
        eprintln!("invariant failed: row {row}, column {flag}");
    }
    if let Some(report) = &out.audit {
        for s in report.failed_suites() {
            eprintln!("suite {} failed ({})", s.name, s.inequality);
        }
    }
}

fn main_inner(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Run { config, out, format, timing } => {
            let cfg = ExperimentConfig::from_path(&config)?;
            let start = Instant::now();
            let result = run(&cfg)?;
            let format = format.or(cfg.output.as_ref().map(|o| o.format)).unwrap_or_default();
            let stem = output_stem(&cfg, out.as_deref());
            let extra = timing.then(|| ("wallTime", json!(start.elapsed().as_secs_f64())));
            let written = write_outputs(&result, &stem, format, extra)?;
            for p in written.csv.iter().chain(written.json.iter()) {
                eprintln!("wrote {}", p.display());
            }
            if result.passed {
                Ok(EXIT_OK)
            } else {
                report_failure(&result);
                Ok(EXIT_NUMERICAL)
            }
        }
        Command::Audit { seed, max_dim, inject_fault, out, format } => {
            let report = audit(&AuditOptions { seed, max_dim, inject_fault })?;
            print!("{}", report.to_json_string());
            if let Some(dir) = out {
                let result = RunOutput {
                    kind: ExperimentKind::AuditAll,
                    table: report.table(),
                    summary: report.to_json(),
                    passed: report.passed(),
                    audit: Some(report.clone()),
                };
                write_outputs(&result, &dir.join(ExperimentKind::AuditAll.as_str()), format, None)?;
            }
            if report.passed() {
                Ok(EXIT_OK)
            } else {
                for s in report.failed_suites() {
                    eprintln!("suite {} failed ({})", s.name, s.inequality);
                }
                Ok(EXIT_NUMERICAL)
            }
        }
        Command::Describe { kind } => {
            let kind: ExperimentKind = kind.parse()?;
            print!("{}", describe(kind));
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let code = match main_inner(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}
