//! Command-line front end: every subcommand reads a JSON run configuration,
//! runs its analysis on a ladder of grid spacings and writes a JSON report
//! plus CSV field files.

mod commands;
mod config;
mod error;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use clifford_orlicz::analysis::ProbeOperator;

use crate::commands::Outcome;
use crate::config::{BvpData, FieldSource, RunConfig};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "clifford-orlicz",
    version,
    about = "Clifford analysis on gridded domains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// JSON run configuration; omitted fields take their defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for the report and field files; the report goes to stdout
    /// when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Grid spacing of the coarsest level.
    #[arg(long, global = true)]
    h: Option<f64>,
    /// Number of halvings of the spacing.
    #[arg(long, global = true)]
    refine: Option<u32>,
    /// Seed of the random field suites and dual-norm trials.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct FieldArg {
    /// Builtin name, `random:<i>`, `random-zero-trace:<i>` or a CSV path.
    #[arg(long)]
    field: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Orlicz, Orlicz–Sobolev and Orlicz–Slobodeckji norms of a field.
    Norm {
        #[command(flatten)]
        field: FieldArg,
        /// CSV boundary field for the Slobodeckji norm.
        #[arg(long)]
        boundary: Option<PathBuf>,
    },
    /// Discrete Dirac operator.
    Dirac(FieldArg),
    /// Teodorescu transform and its right-inverse error.
    Teodorescu(FieldArg),
    /// Cauchy transform of the trace and its reproduction error.
    Cauchy(FieldArg),
    /// Borel–Pompeiu residual `f - xi tau f - zeta D f`.
    BorelPompeiu(FieldArg),
    /// Monogenic plus potential decomposition.
    Decompose(FieldArg),
    /// Solve `D u = f`, `tau u = g`.
    SolveBvp {
        /// `manufactured`, `zero` or `trace:<builtin>`.
        #[arg(long)]
        data: Option<String>,
        /// CSV interior data; needs `--g`.
        #[arg(long, requires = "g")]
        f: Option<PathBuf>,
        /// CSV boundary data; needs `--f`.
        #[arg(long, requires = "f")]
        g: Option<PathBuf>,
    },
    /// Operator-norm ratios over the seeded random suite.
    Probe {
        #[arg(long, value_enum)]
        operator: Option<OperatorArg>,
    },
    /// Write a builtin or random field and its boundary values as CSV.
    MakeField(FieldArg),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OperatorArg {
    Dirac,
    Teodorescu,
    CauchyTraceComposition,
}

impl From<OperatorArg> for ProbeOperator {
    fn from(op: OperatorArg) -> Self {
        match op {
            OperatorArg::Dirac => ProbeOperator::Dirac,
            OperatorArg::Teodorescu => ProbeOperator::Teodorescu,
            OperatorArg::CauchyTraceComposition => ProbeOperator::CauchyTraceComposition,
        }
    }
}

fn resolve(common: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(h) = common.h {
        cfg.h = h;
    }
    if let Some(r) = common.refine {
        cfg.refine = r;
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn parse_bvp_data(text: &str) -> Result<BvpData, CliError> {
    match text {
        "manufactured" => Ok(BvpData::Manufactured),
        "zero" => Ok(BvpData::Zero),
        _ => text
            .strip_prefix("trace:")
            .and_then(clifford_orlicz::analysis::BuiltinField::from_name)
            .map(|name| BvpData::BuiltinTrace { name })
            .ok_or_else(|| CliError::Usage(format!("unknown BVP data {text:?}"))),
    }
}

fn run(cli: Cli) -> Result<(&'static str, Outcome), CliError> {
    let mut cfg = resolve(&cli.common)?;
    let set_field = |cfg: &mut RunConfig, arg: &FieldArg| {
        if let Some(f) = &arg.field {
            cfg.field = FieldSource::parse(f);
        }
    };
    let name = match &cli.command {
        Command::Norm { field, boundary } => {
            set_field(&mut cfg, field);
            if boundary.is_some() {
                cfg.boundary.clone_from(boundary);
            }
            "norm"
        }
        Command::Dirac(a) => {
            set_field(&mut cfg, a);
            "dirac"
        }
        Command::Teodorescu(a) => {
            set_field(&mut cfg, a);
            "teodorescu"
        }
        Command::Cauchy(a) => {
            set_field(&mut cfg, a);
            "cauchy"
        }
        Command::BorelPompeiu(a) => {
            set_field(&mut cfg, a);
            "borel-pompeiu"
        }
        Command::Decompose(a) => {
            set_field(&mut cfg, a);
            "decompose"
        }
        Command::SolveBvp { data, f, g } => {
            if let Some(d) = data {
                cfg.bvp = parse_bvp_data(d)?;
            }
            if let (Some(f), Some(g)) = (f, g) {
                cfg.bvp = BvpData::Files {
                    f: f.clone(),
                    g: g.clone(),
                };
            }
            "solve-bvp"
        }
        Command::Probe { .. } => "probe",
        Command::MakeField(a) => {
            set_field(&mut cfg, a);
            "make-field"
        }
    };
    cfg.validate()?;
    let outcome = match &cli.command {
        Command::Norm { .. } => commands::norm(&cfg),
        Command::Dirac(_) => commands::dirac(&cfg),
        Command::Teodorescu(_) => commands::teodorescu_cmd(&cfg),
        Command::Cauchy(_) => commands::cauchy(&cfg),
        Command::BorelPompeiu(_) => commands::borel_pompeiu(&cfg),
        Command::Decompose(_) => commands::decompose(&cfg),
        Command::SolveBvp { .. } => commands::solve_bvp(&cfg),
        Command::Probe { operator } => {
            let ops: Vec<ProbeOperator> = match operator {
                Some(op) => vec![(*op).into()],
                None => ProbeOperator::ALL.to_vec(),
            };
            commands::probe(&cfg, &ops)
        }
        Command::MakeField(_) => commands::make_field(&cfg),
    }?;
    Ok((name, outcome))
}

fn emit(name: &str, outcome: &Outcome, out: Option<&PathBuf>) -> Result<(), CliError> {
    let mut json = serde_json::to_string_pretty(&outcome.report)
        .map_err(|e| CliError::Config(e.to_string()))?;
    json.push('\n');
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Io(dir.clone(), e))?;
            let path = dir.join(format!("{name}.json"));
            std::fs::write(&path, json).map_err(|e| CliError::Io(path, e))?;
            for a in &outcome.artifacts {
                let path = dir.join(&a.name);
                std::fs::write(&path, &a.contents).map_err(|e| CliError::Io(path, e))?;
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(json.as_bytes())
                .map_err(|e| CliError::Io("<stdout>".into(), e))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out = cli.common.out.clone();
    let result = run(cli).and_then(|(name, outcome)| emit(name, &outcome, out.as_ref()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
