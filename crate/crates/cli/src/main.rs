use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use supernyquist_cli::config::{parse_levels, parse_tones};
use supernyquist_cli::experiments::{run_bias, run_diffset, run_spectrum, run_weight, Report};
use supernyquist_cli::{run_experiment, run_preset, CliError, ExperimentConfig, Preset, Result};
use supernyquist_core::signal::map_frequency;
use supernyquist_core::SchemeKind;

#[derive(Parser)]
#[command(
    name = "supernyquist",
    version,
    about = "Co-prime and super-Nyquist sampling experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Difference sets and claim checks for a single-period co-prime pair.
    Diffset(SchemeArgs),
    /// Weight function z(l), enumerated (and closed form for super-Nyquist).
    Weight(SchemeArgs),
    /// Bias window and main-lobe width.
    Bias(SchemeArgs),
    /// Correlogram PSD estimate and peaks.
    Spectrum(SchemeArgs),
    /// Everything applicable to a config: weights, bias, claims, spectrum.
    Run(SchemeArgs),
    /// Reproduce a figure or table preset.
    Preset {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Map a frequency in hertz to the normalized frequency of a scheme.
    MapFreq {
        #[arg(long)]
        hz: f64,
        #[arg(long)]
        fs: f64,
        #[arg(long, default_value = "super-nyquist")]
        scheme: SchemeKind,
    },
}

#[derive(Args)]
struct SchemeArgs {
    #[arg(long)]
    scheme: Option<SchemeKind>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    /// Comma-separated multi-level factors, e.g. 2,3,5.
    #[arg(long)]
    levels: Option<String>,
    #[arg(long)]
    periods: Option<u64>,
    /// Snapshot count K.
    #[arg(long)]
    k: Option<u64>,
    /// Frequency grid size over [0, pi].
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated tones `nu` or `nu:amplitude`, nu in (0, 1).
    #[arg(long)]
    tones: Option<String>,
    #[arg(long)]
    noise_std: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl SchemeArgs {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let flags = ExperimentConfig {
            scheme: self.scheme,
            m: self.m,
            n: self.n,
            levels: self.levels.as_deref().map(parse_levels).transpose()?,
            periods: self.periods,
            tones: self.tones.as_deref().map(parse_tones).transpose()?,
            noise_std: self.noise_std,
            seed: self.seed,
            k: self.k,
            grid: self.grid,
            out: self.out.clone(),
            preset: None,
        };
        let file = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        let merged = file.merged_with(&flags);
        merged.check_preset_exclusive()?;
        Ok(merged)
    }
}

fn preset_config(
    name: &str,
    out: Option<PathBuf>,
    config: Option<PathBuf>,
) -> Result<ExperimentConfig> {
    let preset: Preset = name.parse()?;
    let file = match config {
        Some(path) => ExperimentConfig::from_file(&path)?,
        None => ExperimentConfig::default(),
    };
    if file.preset.is_some_and(|p| p != preset) {
        return Err(CliError::InvalidConfig(format!(
            "config names preset `{}` but `{preset}` was requested",
            file.preset.unwrap()
        )));
    }
    let cfg = file.merged_with(&ExperimentConfig {
        preset: Some(preset),
        out,
        ..Default::default()
    });
    cfg.check_preset_exclusive()?;
    Ok(cfg)
}

fn execute(cli: Cli) -> Result<Report> {
    match cli.command {
        Command::Diffset(a) => run_diffset(&a.resolve()?),
        Command::Weight(a) => run_weight(&a.resolve()?),
        Command::Bias(a) => run_bias(&a.resolve()?),
        Command::Spectrum(a) => {
            let cfg = a.resolve()?;
            if cfg.tones.as_ref().is_none_or(|t| t.is_empty()) {
                return Err(CliError::InvalidConfig("spectrum needs --tones".into()));
            }
            run_spectrum(&cfg)
        }
        Command::Run(a) => run_experiment(&a.resolve()?),
        Command::Preset { name, out, config } => {
            let cfg = preset_config(&name, out, config)?;
            run_preset(cfg.preset.expect("preset set"), &cfg.out_dir())
        }
        Command::MapFreq { hz, fs, scheme } => {
            let line = match map_frequency(hz, fs, scheme)? {
                Some(nu) => supernyquist_cli::output::fmt_num(nu),
                None => "unrepresentable".to_string(),
            };
            Ok(Report {
                files: Vec::new(),
                summary: vec![line],
            })
        }
    }
}

fn error_line(kind: &str, message: &str) -> String {
    serde_json::json!({ "error": kind, "message": message }).to_string()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            eprintln!("{}", error_line("Usage", e.to_string().trim()));
            return ExitCode::from(2);
        }
        Err(e) => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match execute(cli) {
        Ok(report) => {
            let mut stdout = std::io::stdout().lock();
            // A closed pipe downstream is not a failure of the run.
            let _ = report
                .summary
                .iter()
                .try_for_each(|line| writeln!(stdout, "{line}"))
                .and_then(|_| {
                    report
                        .files
                        .iter()
                        .try_for_each(|f| writeln!(stdout, "wrote {}", f.display()))
                });
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", error_line(e.kind(), &e.to_string()));
            ExitCode::FAILURE
        }
    }
}
