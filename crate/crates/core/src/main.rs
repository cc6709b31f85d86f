use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use unruh_filter_lab::check::run_checks;
use unruh_filter_lab::format::format_g;
use unruh_filter_lab::pipeline::{dump_string, eval_pipeline, parse_pipeline, EvalOutput};
use unruh_filter_lab::sweep::{
    csv_string, r_grid, run_figure, run_scenario, write_csv, write_svg, Execution, ScenarioConfig,
    DEFAULT_R_STEPS,
};
use unruh_filter_lab::{Error, FamilyParameter, FilterMode, FilterSpec, PairPolicy, Party, RindlerParameter};

#[derive(Parser)]
#[command(name = "unruh-filter-lab", version, about = "Negativity of an accelerated qubit-qutrit pair under local filtering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Regenerate one of the six figure scenario sets.
    Figure {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=6))]
        id: u8,
        #[arg(long)]
        mu: f64,
        #[arg(long, default_value = "postselect")]
        mode: FilterMode,
        /// Base CSV path; curve k is written to `<stem>-0k.csv`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Evaluate grid points on one thread.
        #[arg(long)]
        serial: bool,
    },
    /// Sweep negativity over r for one scenario.
    Sweep {
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        accelerate: Party,
        #[arg(long)]
        filter: Option<Party>,
        #[arg(long, requires = "filter")]
        strength: Option<f64>,
        #[arg(long, requires = "filter")]
        mode: Option<FilterMode>,
        #[arg(long, requires = "filter")]
        pair: Option<PairPolicy>,
        #[arg(long, default_value_t = 0.0)]
        r_min: f64,
        #[arg(long, default_value_t = RindlerParameter::MAX)]
        r_max: f64,
        #[arg(long, default_value_t = DEFAULT_R_STEPS)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a pipeline such as `state(mu=0) | negativity`.
    Eval { pipeline: String },
    /// Run the self-verification suite.
    Check,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::OutOfRange { .. } | Error::InvalidConfig(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn numbered(base: &Path, k: usize) -> PathBuf {
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("figure");
    let ext = base.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    base.with_file_name(format!("{stem}-{k:02}.{ext}"))
}

fn figure(
    id: u8,
    mu: f64,
    mode: FilterMode,
    out: Option<PathBuf>,
    svg: Option<PathBuf>,
    serial: bool,
) -> Result<(), Failure> {
    let execution = if serial { Execution::Serial } else { Execution::Parallel };
    let run = run_figure(id, FamilyParameter::new(mu)?, mode, execution)?;
    let base = out.unwrap_or_else(|| PathBuf::from(format!("figure{id}.csv")));
    for (k, res) in run.results.iter().enumerate() {
        let path = numbered(&base, k + 1);
        write_csv(res, &path)?;
        println!("{}", path.display());
    }
    if let Some(path) = svg {
        write_svg(&run.results, &path, &run.labels())?;
        println!("{}", path.display());
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn sweep(
    mu: f64,
    accelerate: Party,
    filter: Option<Party>,
    strength: Option<f64>,
    mode: Option<FilterMode>,
    pair: Option<PairPolicy>,
    (r_min, r_max, steps): (f64, f64, usize),
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let filter = match filter {
        None => None,
        Some(target) => {
            let strength = strength
                .ok_or_else(|| Failure::Usage("--filter needs --strength".into()))?;
            Some(match target {
                Party::Qubit => {
                    if pair.is_some() {
                        return Err(Failure::Usage("--pair only applies to the qutrit filter".into()));
                    }
                    if mode.is_some_and(|m| m != FilterMode::Postselect) {
                        return Err(Failure::Usage("the qubit filter only supports --mode postselect".into()));
                    }
                    FilterSpec::qubit(strength)?
                }
                Party::Qutrit => FilterSpec::qutrit(
                    strength,
                    mode.unwrap_or(FilterMode::Postselect),
                    pair.unwrap_or(PairPolicy::Discard),
                )?,
            })
        }
    };
    let cfg = ScenarioConfig {
        mu: FamilyParameter::new(mu)?,
        accelerated: accelerate,
        filter,
        r_grid: r_grid(r_min, r_max, steps)?,
        strength_grid: None,
    };
    let res = run_scenario(&cfg)?;
    match out {
        Some(path) => write_csv(&res, &path)?,
        None => print!("{}", csv_string(&res)),
    }
    Ok(())
}

fn eval(text: &str) -> Result<(), Failure> {
    let expr = parse_pipeline(text).map_err(|e| {
        Failure::Usage(format!("{e}\n  {text}\n  {}^", " ".repeat(e.offset())))
    })?;
    match eval_pipeline(&expr).map_err(|e| Failure::Runtime(e.to_string()))? {
        EvalOutput::Scalar(x) => println!("{}", format_g(x, 15)),
        EvalOutput::State(rho) | EvalOutput::Dump(rho) => print!("{}", dump_string(&rho)),
    }
    Ok(())
}

fn check() -> Result<bool, Failure> {
    let report = run_checks()?;
    println!("{report}");
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Figure { id, mu, mode, out, svg, serial } => figure(id, mu, mode, out, svg, serial),
        Command::Sweep {
            mu,
            accelerate,
            filter,
            strength,
            mode,
            pair,
            r_min,
            r_max,
            steps,
            out,
        } => sweep(mu, accelerate, filter, strength, mode, pair, (r_min, r_max, steps), out),
        Command::Eval { pipeline } => eval(&pipeline),
        Command::Check => match check() {
            Ok(true) => Ok(()),
            Ok(false) => return ExitCode::from(1),
            Err(e) => Err(e),
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
