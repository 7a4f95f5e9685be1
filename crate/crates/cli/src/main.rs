use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nonlocality_core::report::{
    run_bounds, run_kappa3_models, run_scan, verify, Fault, ScanConfig, StateKind, VerifyOptions,
    DEFAULT_SEED,
};
use nonlocality_core::{canonical_scenario, classify, Error};

#[derive(Parser)]
#[command(name = "nonlocality", version, about = "Bell, steering and skewness nonlocality scans for two qubits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep θ and write one CSV row per grid point.
    Scan(ScanArgs),
    /// Print classical, quantum and superquantum bounds.
    Bounds,
    /// Write κ₃ as a function of ⟨S⟩ for the LHVT, singlet and product models.
    #[command(name = "kappa3-models")]
    Kappa3Models {
        #[arg(long, default_value_t = 401)]
        steps: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run the invariant suite.
    Verify {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
    /// Classify one θ and state; prints a JSON report.
    Classify(ClassifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    FlipSSign,
}

#[derive(Args)]
struct StateArgs {
    /// JSON file with scan settings; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_state)]
    state: Option<StateKind>,
    /// Bloch vector of Alice's qubit for product states, as x,y,z.
    #[arg(long, value_parser = parse_bloch, allow_hyphen_values = true)]
    bloch_a: Option<[f64; 3]>,
    #[arg(long, value_parser = parse_bloch, allow_hyphen_values = true)]
    bloch_b: Option<[f64; 3]>,
    /// Werner visibility for the mixed state.
    #[arg(long)]
    visibility: Option<f64>,
    #[arg(long)]
    max_order: Option<u32>,
    /// Read angle flags in degrees.
    #[arg(long)]
    degrees: bool,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, allow_hyphen_values = true)]
    theta_start: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta_end: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Write the CSV here instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, allow_hyphen_values = true)]
    theta: f64,
}

fn parse_state(s: &str) -> Result<StateKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_bloch(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("'{p}': {e}")))
        .collect::<Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|_| "expected three comma-separated components".to_string())
}

enum Failure {
    Core(Error),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Core(Error::Io(e))
    }
}

fn load_config(path: Option<&Path>) -> Result<ScanConfig, Error> {
    match path {
        None => Ok(ScanConfig::default()),
        Some(p) => ScanConfig::from_json(&fs::read_to_string(p)?),
    }
}

impl StateArgs {
    fn angle(&self, x: f64) -> f64 {
        if self.degrees {
            x.to_radians()
        } else {
            x
        }
    }

    fn apply(&self, cfg: &mut ScanConfig) {
        if let Some(s) = self.state {
            cfg.state = s;
        }
        if let Some(b) = self.bloch_a {
            cfg.bloch_a = b;
        }
        if let Some(b) = self.bloch_b {
            cfg.bloch_b = b;
        }
        if let Some(v) = self.visibility {
            cfg.visibility = v;
        }
        if let Some(n) = self.max_order {
            cfg.max_order = n;
        }
    }
}

fn scan_config(args: &ScanArgs) -> Result<ScanConfig, Error> {
    let mut cfg = load_config(args.state.config.as_deref())?;
    args.state.apply(&mut cfg);
    if let Some(t) = args.theta_start {
        cfg.theta_start = args.state.angle(t);
    }
    if let Some(t) = args.theta_end {
        cfg.theta_end = args.state.angle(t);
    }
    if let Some(n) = args.steps {
        cfg.steps = n;
    }
    if let Some(p) = &args.output {
        cfg.output_path = Some(p.display().to_string());
    }
    Ok(cfg)
}

fn emit(text: &str, output: Option<&Path>) -> io::Result<()> {
    match output {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Scan(args) => {
            let cfg = scan_config(&args)?;
            let csv = run_scan(&cfg)?;
            emit(&csv, cfg.output_path.as_deref().map(Path::new))?;
        }
        Command::Bounds => emit(&run_bounds()?, None)?,
        Command::Kappa3Models { steps, output } => {
            emit(&run_kappa3_models(steps)?, output.as_deref())?;
        }
        Command::Verify { seed, inject_fault } => {
            let fault = inject_fault.map(|FaultArg::FlipSSign| Fault::FlipSSign);
            let summary = verify(&VerifyOptions { seed, fault });
            emit(&summary.render(), None)?;
            if !summary.passed() {
                return Err(Failure::Verify);
            }
        }
        Command::Classify(args) => {
            let mut cfg = load_config(args.state.config.as_deref())?;
            args.state.apply(&mut cfg);
            let rho = cfg.density_matrix()?;
            let sc = canonical_scenario(args.state.angle(args.theta))?;
            let report = classify(&rho, &sc, cfg.max_order)?;
            let json = serde_json::to_string_pretty(&report).expect("report serializes");
            emit(&format!("{json}\n"), None)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::NoConvergence { .. } => 1,
                Error::Usage(_) | Error::Domain(_) => 2,
                Error::Io(_) => 3,
            })
        }
    }
}
