use std::path::{Path, PathBuf};
use std::process::ExitCode;

use charvar::io::PointJson;
use charvar_cli::commands::{self, point_rows};
use charvar_cli::config::{self, Format, RunConfig};
use charvar_cli::output::{csv_bytes, emit, json_bytes};
use charvar_cli::{CliError, ErrorKind};
use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "charvar", version, about = "Character varieties of surface groups: solve, certify, volume")]
struct Cli {
    /// Run configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Suppress human-readable progress on standard error.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Project a starting tuple onto the representation variety.
    Solve,
    /// Check descent, closedness, kernel and nondegeneracy at a solved point.
    Certify {
        #[arg(long)]
        point: PathBuf,
    },
    /// Monte Carlo relative volume of the moduli space.
    Volume {
        /// Also write the per-sample table to this CSV file.
        #[arg(long)]
        samples_csv: Option<PathBuf>,
    },
    /// Solve and certify at every fiber holonomy of a Seifert problem.
    SeifertScan,
}

struct Ctx {
    cfg: RunConfig,
    out: Option<PathBuf>,
    format: Format,
    quiet: bool,
}

impl Ctx {
    fn say(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }
}

fn load_config(cli: &Cli, required: bool) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => config::load(p)?,
        None if required => return Err(CliError::config("--config is required for this command")),
        None => config::parse(r#"{"group":{"family":"SU","rank":2},"problem":{"surface":{"g":2}}}"#)?,
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let needs_config = !matches!(cli.command, Command::Certify { .. });
    let cfg = load_config(&cli, needs_config)?;
    let out_cfg = cfg.output.clone();
    let ctx = Ctx {
        out: cli.out.clone().or_else(|| out_cfg.as_ref().and_then(|o| o.path.clone())),
        format: cli.format.or(out_cfg.map(|o| o.format)).unwrap_or_default(),
        quiet: cli.quiet,
        cfg,
    };
    let out = ctx.out.as_deref();
    match cli.command {
        Command::Solve => {
            let s = commands::solve(&ctx.cfg)?;
            ctx.say(format!(
                "solved after {} iterations (start {}), residual {:e}, irreducible {:?}",
                s.iterations, s.attempt, s.point.residual_norm, s.point.irreducible
            ));
            let bytes = match ctx.format {
                Format::Json => json_bytes(&PointJson::from_point(&s.point))?,
                Format::Csv => csv_bytes(&point_rows(&s.point))?,
            };
            emit(out, &bytes)
        }
        Command::Certify { point } => {
            let text = std::fs::read_to_string(&point)
                .map_err(|e| CliError::config(format!("cannot read {}: {e}", point.display())))?;
            let p = commands::read_point(&text, &ctx.cfg)?;
            let report = commands::certify(&ctx.cfg, &p);
            for c in &report.checks {
                ctx.say(format!("{:<24} {:>12} {}", c.check, fmt_value(c.value), if c.pass { "pass" } else { "FAIL" }));
            }
            let bytes = match ctx.format {
                Format::Json => json_bytes(&report)?,
                Format::Csv => csv_bytes(&report.checks.iter().map(CheckRow::from).collect::<Vec<_>>())?,
            };
            emit(out, &bytes)?;
            if report.pass {
                Ok(())
            } else {
                Err(CliError::new(
                    ErrorKind::Certification,
                    format!("failed checks: {}", report.failed_checks().join(", ")),
                ))
            }
        }
        Command::Volume { samples_csv } => {
            let v = commands::volume(&ctx.cfg)?;
            ctx.say(format!(
                "{:?}: {} +- {} ({} landings of {})",
                v.estimate.method, v.estimate.value, v.estimate.stderr, v.estimate.landings, v.estimate.samples
            ));
            if let Some(p) = samples_csv {
                write_file(&p, &csv_bytes(&v.samples)?)?;
            }
            let bytes = match ctx.format {
                Format::Json => json_bytes(&v.estimate)?,
                Format::Csv => csv_bytes(&v.samples)?,
            };
            emit(out, &bytes)
        }
        Command::SeifertScan => {
            let r = commands::seifert_scan(&ctx.cfg)?;
            ctx.say(format!("{} certified component(s) of {} candidates", r.components, r.entries.len()));
            let bytes = match ctx.format {
                Format::Json => json_bytes(&r)?,
                Format::Csv => csv_bytes(&r.entries.iter().map(ScanRow::from).collect::<Vec<_>>())?,
            };
            emit(out, &bytes)
        }
    }
}

fn write_file(p: &Path, bytes: &[u8]) -> Result<(), CliError> {
    charvar_cli::output::write_atomic(p, bytes)
}

fn fmt_value(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.3e}"))
}

#[derive(serde::Serialize)]
struct CheckRow {
    check: String,
    value: Option<f64>,
    tolerance: f64,
    pass: bool,
}

impl From<&charvar_cli::Check> for CheckRow {
    fn from(c: &charvar_cli::Check) -> Self {
        Self { check: c.check.clone(), value: c.value, tolerance: c.tolerance, pass: c.pass }
    }
}

#[derive(serde::Serialize)]
struct ScanRow {
    zeta_index: usize,
    zeta_re: f64,
    zeta_im: f64,
    target_power: i64,
    solved: bool,
    residual: Option<f64>,
    irreducible: Option<bool>,
    certified: bool,
}

impl From<&commands::ScanEntry> for ScanRow {
    fn from(e: &commands::ScanEntry) -> Self {
        Self {
            zeta_index: e.zeta_index,
            zeta_re: e.candidate.zeta[0],
            zeta_im: e.candidate.zeta[1],
            target_power: e.candidate.target_power,
            solved: e.solved,
            residual: e.residual,
            irreducible: e.irreducible,
            certified: e.certified,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", CliError::config(e.to_string().trim_end()).to_json());
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
