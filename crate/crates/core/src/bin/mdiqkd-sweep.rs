//! Runs a loss or frequency sweep and writes the table.
//!
//! On failure prints `{"error": ..., "kind": ...}` to stderr and exits 2.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use mdiqkd::sweep::{
    emit_table, run_frequency_sweep, run_loss_sweep, write_table, OutputFormat, RangeSpec, SweepConfig, SweepKind,
};
use mdiqkd::Result;

#[derive(Debug, Parser)]
#[command(name = "mdiqkd-sweep", about = "Key rate sweeps for MDI-QKD with imperfect sources")]
struct Cli {
    /// TOML config file; built-in defaults are used without one.
    #[arg(long)]
    config: Option<PathBuf>,

    #[arg(long, value_parser = ["loss", "frequency"], default_value = "loss")]
    sweep: String,

    /// Uniform side-channel weights, comma separated.
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,

    /// Uniform modulation deviations in radians, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    delta: Option<Vec<f64>>,

    #[arg(long)]
    loss_start: Option<f64>,
    #[arg(long)]
    loss_stop: Option<f64>,
    #[arg(long)]
    loss_step: Option<f64>,

    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_parser = ["csv", "json-lines", "jsonl"])]
    format: Option<String>,
}

fn build_config(cli: &Cli) -> Result<SweepConfig> {
    let mut cfg = match &cli.config {
        Some(path) => SweepConfig::from_path(path)?,
        None => SweepConfig::default(),
    };
    if let Some(eps) = &cli.eps {
        cfg.scan.eps = eps.clone();
    }
    if let Some(delta) = &cli.delta {
        cfg.scan.delta = delta.clone();
    }
    cfg.loss = RangeSpec {
        start: cli.loss_start.unwrap_or(cfg.loss.start),
        stop: cli.loss_stop.unwrap_or(cfg.loss.stop),
        step: cli.loss_step.unwrap_or(cfg.loss.step),
    };
    if let Some(out) = &cli.out {
        cfg.output.path = Some(out.clone());
    }
    if let Some(fmt) = &cli.format {
        cfg.output.format = fmt.parse()?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<()> {
    let cfg = build_config(cli)?;
    let kind: SweepKind = cli.sweep.parse()?;

    let points = match kind {
        SweepKind::Loss => {
            let sweep = run_loss_sweep(&cfg)?;
            for c in &sweep.curves {
                let cutoff = c.cutoff_loss_db.map_or("none".to_string(), |l| format!("{l:.3} dB"));
                eprintln!(
                    "eps={:e} delta={} cutoff={}{}{}",
                    c.eps,
                    c.delta,
                    cutoff,
                    if c.censored { " (still positive at end of range)" } else { "" },
                    if c.revival { " WARNING: rate revives after reaching zero" } else { "" },
                );
            }
            sweep.points
        }
        SweepKind::Frequency => {
            let sweep = run_frequency_sweep(&cfg)?;
            for c in &sweep.curves {
                eprintln!(
                    "delta={} loss={} dB best f={:.3} GHz rate={:e} /s{}",
                    c.delta,
                    sweep.loss_db,
                    c.best_frequency_ghz,
                    c.best_rate_per_second,
                    if c.interior { "" } else { " (at range edge)" },
                );
            }
            sweep.points
        }
    };

    write_points(&points, cfg.output.format, cfg.output.path.as_deref())
}

fn write_points(points: &[mdiqkd::sweep::KeyRatePoint], format: OutputFormat, path: Option<&std::path::Path>) -> Result<()> {
    match path {
        Some(p) => write_table(points, format, p),
        None => {
            let stdout = std::io::stdout();
            emit_table(points, format, stdout.lock())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let summary = serde_json::json!({ "error": e.to_string(), "kind": e.kind() });
            let _ = writeln!(std::io::stderr(), "{summary}");
            ExitCode::from(2)
        }
    }
}

