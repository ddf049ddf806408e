use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use monogamy_lab::families::{build_named, FamilyName};
use monogamy_lab::io::{parse_state, report_json, report_json_line, state_to_json};
use monogamy_lab::measures::{pairwise_report, set_wootters_fault, QuantumState};
use monogamy_lab::search::{
    conjecture_scan, monte_carlo_max, optimize_family, Objective, ObjectiveName, OptimizeFamily,
    DEFAULT_GENUINE_THRESHOLD, DEFAULT_STARTS,
};
use monogamy_lab::verify::{run_criterion, VerifyConfig, CRITERIA, SLOW_CRITERIA};
use monogamy_lab::Error;

const THREADS_ENV: &str = "MONOGAMY_LAB_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "monogamy-lab",
    version,
    about = "Pairwise entanglement measures, the sC/sE monogamy sums and numerical bound checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for every random draw (echoed in the output).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Flip the sign of the second Wootters eigenvalue (negative-path testing).
    #[arg(long, global = true, hide = true)]
    inject_fault: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pair measures, sC, sE and bound margins of a three-qubit state.
    Measure(StateArgs),
    /// Print a family member as a state file.
    Family(StateArgs),
    /// Haar Monte Carlo maximum of an objective.
    Sample {
        #[arg(long)]
        objective: String,
        #[arg(short = 'n', long, default_value_t = 100_000)]
        samples: u64,
        /// Number of qubits.
        #[arg(long = "n", default_value_t = 3)]
        qubits: usize,
    },
    /// Multistart maximization over a state family (acin, wclass, genw).
    Optimize {
        #[arg(long)]
        objective: String,
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = DEFAULT_STARTS)]
        starts: usize,
        /// Number of qubits (genw only).
        #[arg(long = "n", default_value_t = 3)]
        qubits: usize,
    },
    /// Largest sC over Haar samples passing a single-qubit mixedness filter.
    Scan {
        /// Number of qubits, 3 to 5.
        #[arg(long = "n", default_value_t = 3)]
        qubits: usize,
        #[arg(short = 'n', long, default_value_t = 100_000)]
        samples: u64,
        /// Minimum smaller eigenvalue of every single-qubit reduction; 0 disables.
        #[arg(long, default_value_t = DEFAULT_GENUINE_THRESHOLD)]
        threshold: f64,
    },
    /// Run the acceptance suite; exit 0 only if every check passes.
    Verify {
        /// Cap sample counts at 10^3 and skip slow criteria.
        #[arg(long)]
        quick: bool,
        /// Run only these criteria (repeatable), e.g. `--criterion 7a`.
        #[arg(long = "criterion")]
        criteria: Vec<String>,
    },
}

#[derive(Args, Debug)]
struct StateArgs {
    /// State file (pure or density-matrix JSON).
    #[arg(long, conflicts_with = "family")]
    input: Option<PathBuf>,
    /// Family name: w, ghz, wclass, acin, ghzclass, genw, wbar-mix, liu.
    #[arg(long, required_unless_present = "input")]
    family: Option<String>,
    /// Family parameters as a JSON object.
    #[arg(long, requires = "family")]
    params: Option<String>,
}

/// Failure categories mapped onto the exit-code contract.
enum Failure {
    /// A bound or acceptance check failed.
    Check(String),
    /// Bad input: unreadable file, invariant violation, unknown name.
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BoundViolation { .. } => Failure::Check(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    if cli.inject_fault {
        set_wootters_fault(true);
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got '{raw}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

struct Sink {
    out: Box<dyn Write>,
}

impl Sink {
    fn open(path: &Option<PathBuf>) -> Result<Self, Failure> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(io::BufWriter::new(fs::File::create(p)?)),
            None => Box::new(io::stdout().lock()),
        };
        Ok(Self { out })
    }

    fn line(&mut self, text: &str) -> Result<(), Failure> {
        writeln!(self.out, "{text}")?;
        self.out.flush()?;
        Ok(())
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Measure(args) => cmd_measure(cli, args),
        Command::Family(args) => cmd_family(cli, args),
        Command::Sample {
            objective,
            samples,
            qubits,
        } => cmd_sample(cli, objective, *samples, *qubits),
        Command::Optimize {
            objective,
            family,
            starts,
            qubits,
        } => cmd_optimize(cli, objective, family, *starts, *qubits),
        Command::Scan {
            qubits,
            samples,
            threshold,
        } => cmd_scan(cli, *qubits, *samples, *threshold),
        Command::Verify { quick, criteria } => cmd_verify(cli, *quick, criteria),
    }
}

fn load_state(args: &StateArgs) -> Result<QuantumState, Failure> {
    if let Some(path) = &args.input {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
        return Ok(parse_state(&text)?);
    }
    let name: FamilyName = args.family.as_deref().unwrap_or_default().parse()?;
    let params = args
        .params
        .as_deref()
        .map(serde_json::from_str::<Value>)
        .transpose()
        .map_err(|e| Failure::Input(format!("--params is not valid JSON: {e}")))?;
    Ok(build_named(name, params)?)
}

fn json_only(cli: &Cli, command: &str) -> Result<(), Failure> {
    if cli.format == Format::Csv {
        return Err(Failure::Input(format!(
            "csv output is available for `measure` and `sample` only, not `{command}`"
        )));
    }
    Ok(())
}

fn cmd_measure(cli: &Cli, args: &StateArgs) -> Outcome {
    let state = load_state(args)?;
    let report = pairwise_report(&state)?;
    let mut sink = Sink::open(&cli.output)?;
    match cli.format {
        Format::Json => sink.line(&report_json(&report)?)?,
        Format::Csv => {
            sink.line("pair,concurrence,eof")?;
            for (name, p) in ["AB", "AC", "BC"].iter().zip(report.pairs.as_array()) {
                sink.line(&format!("{name},{},{}", p.concurrence, p.eof))?;
            }
        }
    }
    Ok(true)
}

fn cmd_family(cli: &Cli, args: &StateArgs) -> Outcome {
    json_only(cli, "family")?;
    let state = load_state(args)?;
    Sink::open(&cli.output)?.line(&state_to_json(&state))?;
    Ok(true)
}

fn cmd_sample(cli: &Cli, objective: &str, samples: u64, qubits: usize) -> Outcome {
    let obj = Objective::new(objective.parse()?, qubits)?;
    let with_histogram = cli.format == Format::Csv;
    let result = monte_carlo_max(obj, samples, cli.seed, with_histogram)?;
    let mut sink = Sink::open(&cli.output)?;
    match cli.format {
        Format::Json => sink.line(&report_json(&result)?)?,
        Format::Csv => {
            let csv = result.histogram_csv().unwrap_or_default();
            sink.line(csv.trim_end())?;
        }
    }
    Ok(true)
}

fn cmd_optimize(cli: &Cli, objective: &str, family: &str, starts: usize, qubits: usize) -> Outcome {
    json_only(cli, "optimize")?;
    let name: ObjectiveName = objective.parse()?;
    let family: OptimizeFamily = family.parse()?;
    let obj = Objective::new(name, qubits)?;
    let result = optimize_family(obj, family, starts, cli.seed)?;
    let mut v = serde_json::to_value(&result).map_err(Error::from)?;
    v["family"] = json!(family.as_str());
    v["starts"] = json!(starts);
    Sink::open(&cli.output)?.line(&report_json(&v)?)?;
    Ok(true)
}

fn cmd_scan(cli: &Cli, qubits: usize, samples: u64, threshold: f64) -> Outcome {
    json_only(cli, "scan")?;
    let result = conjecture_scan(qubits, samples, cli.seed, threshold)?;
    Sink::open(&cli.output)?.line(&report_json(&result)?)?;
    Ok(true)
}

fn cmd_verify(cli: &Cli, quick: bool, only: &[String]) -> Outcome {
    json_only(cli, "verify")?;
    if let Some(bad) = only.iter().find(|id| !CRITERIA.contains(&id.as_str())) {
        return Err(Failure::Input(format!(
            "unknown criterion '{bad}'; expected one of: {}",
            CRITERIA.join(", ")
        )));
    }
    let cfg = VerifyConfig {
        seed: cli.seed,
        quick,
    };
    let selected: Vec<&str> = CRITERIA
        .iter()
        .copied()
        .filter(|id| {
            if only.is_empty() {
                !(quick && SLOW_CRITERIA.contains(id))
            } else {
                only.iter().any(|o| o == id)
            }
        })
        .collect();
    let mut sink = Sink::open(&cli.output)?;
    sink.line(&report_json_line(&json!({
        "suite": "acceptance",
        "seed": cli.seed,
        "quick": quick,
        "fault_injected": cli.inject_fault,
        "criteria": selected,
    }))?)?;
    let (mut total, mut failed) = (0usize, 0usize);
    for id in &selected {
        for check in run_criterion(id, &cfg) {
            total += 1;
            failed += usize::from(!check.passed);
            sink.line(&report_json_line(&check)?)?;
        }
    }
    sink.line(&report_json_line(&json!({
        "summary": { "checks": total, "failed": failed, "passed": total - failed }
    }))?)?;
    Ok(failed == 0)
}
