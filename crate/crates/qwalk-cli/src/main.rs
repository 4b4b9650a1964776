use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qwalk_cli::report::SCHEMA;
use qwalk_cli::{run_analysis, run_configs, run_suite, AnalysisConfig, ReportFormat, Status};

#[derive(Parser)]
#[command(name = "qwalk", version, about = "Transcendence analysis of genus-zero quarter-plane walks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one model.
    Analyze {
        #[arg(long)]
        config: PathBuf,
        /// `json` or `text`; overrides `report_format` in the file.
        #[arg(long)]
        report: Option<ReportFormat>,
        /// Starting working precision in bits.
        #[arg(long)]
        precision: Option<u32>,
        /// Precision ceiling before a decision is reported as undecided.
        #[arg(long)]
        max_bits: Option<u32>,
        #[arg(long)]
        orbit_bound: Option<u64>,
        /// Truncation order of the series cross-check.
        #[arg(long)]
        series_order: Option<usize>,
        /// Omit the timestamp and timings so output is reproducible.
        #[arg(long)]
        no_timestamp: bool,
        /// Write the report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Analyze every `*.cfg` in a directory, or a bundled suite.
    Suite {
        #[arg(long, required_unless_present = "bundled", conflicts_with = "bundled")]
        dir: Option<PathBuf>,
        /// `five-models` or `configurations`.
        #[arg(long)]
        bundled: Option<String>,
        #[arg(long, default_value = "text")]
        report: ReportFormat,
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Print the JSON schema of analysis reports.
    Schema,
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), String> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {}", p.display(), e)),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze { config, report, precision, max_bits, orbit_bound, series_order, no_timestamp, output } => {
            let mut cfg = match AnalysisConfig::load(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("qwalk: {}: {}", config.display(), e);
                    return ExitCode::from(Status::ConfigError.code() as u8);
                }
            };
            if let Some(p) = precision {
                cfg.precision_bits = p;
                cfg.max_bits = cfg.max_bits.max(p);
            }
            if let Some(m) = max_bits {
                cfg.max_bits = m.max(cfg.precision_bits);
            }
            if let Some(b) = orbit_bound {
                cfg.orbit_bound = b;
            }
            if let Some(k) = series_order {
                cfg.series_order = k;
            }
            let fmt = report.unwrap_or(cfg.report_format);
            let r = run_analysis(&cfg, !no_timestamp);
            let text = match fmt {
                ReportFormat::Json => r.to_json(),
                ReportFormat::Text => r.to_text(),
            };
            if let Err(e) = emit(&text, output.as_ref()) {
                eprintln!("qwalk: {}", e);
                return ExitCode::from(Status::ConfigError.code() as u8);
            }
            ExitCode::from(r.status.code as u8)
        }
        Command::Suite { dir, bundled, report, no_timestamp } => {
            let suite = match (dir, bundled) {
                (Some(d), _) => run_suite(&d, !no_timestamp),
                (None, Some(name)) => match qwalk_cli::suites::bundled(&name) {
                    Some(configs) => Ok(run_configs(configs, !no_timestamp)),
                    None => {
                        eprintln!("qwalk: unknown bundled suite `{}`", name);
                        return ExitCode::from(Status::ConfigError.code() as u8);
                    }
                },
                (None, None) => unreachable!("clap requires one of --dir, --bundled"),
            };
            match suite {
                Ok(s) => {
                    let text = match report {
                        ReportFormat::Json => s.to_json(),
                        ReportFormat::Text => s.to_text(),
                    };
                    print!("{}", text);
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("qwalk: {}", e);
                    ExitCode::from(Status::ConfigError.code() as u8)
                }
            }
        }
        Command::Schema => {
            print!("{}", SCHEMA);
            ExitCode::SUCCESS
        }
    }
}
