use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use overage::Method;
use overage_cli::scenario_file::MethodName;
use overage_cli::{evaluate_points, exit_code, preset, sweep_points, to_csv_string, Overrides, ScenarioFile, Settings};

/// Threshold-based age-of-information metrics for status-update queues.
#[derive(Parser)]
#[command(name = "overage", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Comma-separated subset of analytic, quadrature, simulation.
    #[arg(long, global = true, value_delimiter = ',')]
    methods: Option<Vec<MethodName>>,

    /// Simulation seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Packets generated per simulation run.
    #[arg(long, global = true)]
    packets: Option<u64>,

    /// Worker threads for sweep points (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Leave runtime_seconds empty so output is byte-for-byte reproducible.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one scenario file.
    Run { file: PathBuf },
    /// Evaluate every value of the file's sweep block.
    Sweep { file: PathBuf },
    /// Emit the data grid behind a figure (fig3, fig4a, fig4b, fig5, fig6).
    Figure { name: String },
    /// Check a scenario file and print it with defaults filled in.
    Validate { file: PathBuf },
}

impl Cli {
    fn overrides(&self) -> Overrides {
        Overrides {
            methods: self.methods.clone(),
            seed: self.seed,
            packets: self.packets,
        }
    }

    fn file_settings(&self, file: &ScenarioFile) -> Settings {
        let mut s = Settings::new(
            file.methods.iter().flatten().map(|&m| Method::from(m)).collect(),
            &file.sim.unwrap_or_default(),
        );
        s.timing = !self.no_timing;
        s
    }
}

fn load(cli: &Cli, path: &Path) -> Result<ScenarioFile> {
    Ok(ScenarioFile::read(path)?.normalized(&cli.overrides()))
}

fn execute(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Run { file } => {
            let file = load(cli, file)?;
            let scenario = file.scenario()?;
            to_csv_string(&evaluate_points(&[scenario], &cli.file_settings(&file), cli.workers)?)
        }
        Command::Sweep { file } => {
            let file = load(cli, file)?;
            let points = sweep_points(&file)?;
            to_csv_string(&evaluate_points(&points, &cli.file_settings(&file), cli.workers)?)
        }
        Command::Figure { name } => {
            let preset = preset(name)?;
            let methods = match &cli.methods {
                Some(m) => m.iter().map(|&m| Method::from(m)).collect(),
                None => Method::ALL.to_vec(),
            };
            let sim = overage_cli::scenario_file::SimSection {
                packets: cli.packets,
                seed: cli.seed,
                ..Default::default()
            };
            let mut settings = Settings::new(methods, &sim);
            settings.methods.sort();
            settings.methods.dedup();
            settings.metrics = preset.metrics.clone();
            settings.skip_undefined = true;
            settings.timing = !cli.no_timing;
            to_csv_string(&evaluate_points(&preset.points, &settings, cli.workers)?)
        }
        Command::Validate { file } => {
            let file = load(cli, file)?;
            file.scenario()?;
            if file.sweep.is_some() {
                sweep_points(&file)?;
            }
            cli.file_settings(&file).validate()?;
            let mut text = serde_json::to_string_pretty(&file)?;
            text.push('\n');
            Ok(text)
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli).and_then(|text| emit(&cli, &text)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err) as u8)
        }
    }
}
