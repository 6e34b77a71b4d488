use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qbsc_cli::{execute, CliError, ExperimentConfig, EXIT_CHECK_FAILED, EXIT_PASS, EXIT_USAGE};

#[derive(Parser, Debug)]
#[command(name = "qbsc", version, about = "Quantum bit-string commitment simulator and bound auditor")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Honest commit and reveal for every string and basis
    RunProtocol,
    /// Alice's hashing attack
    Attack,
    /// Bob's cheat families over an angle grid
    SweepCheat,
    /// Holevo and accessible information of random-basis ensembles
    Locking,
    /// The full inequality suite
    VerifyBounds,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::RunProtocol => "run-protocol",
            Command::Attack => "attack",
            Command::SweepCheat => "sweep-cheat",
            Command::Locking => "locking",
            Command::VerifyBounds => "verify-bounds",
        }
    }
}

#[derive(Args, Debug)]
struct Common {
    /// JSON experiment file; flags override its fields
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Report path; the CSV table (if any) goes next to it
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    d: Option<usize>,
    #[arg(long = "k", global = true)]
    k_bases: Option<usize>,
    #[arg(long = "k-list", global = true, value_delimiter = ',')]
    k_list: Option<Vec<usize>>,
    /// identity | identity-hadamard | fourier | haar(k)
    #[arg(long, global = true)]
    unitaries: Option<String>,
    #[arg(long = "b", global = true)]
    b_claimed: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    gamma: Option<f64>,
    /// partial-measure | controlled-rotation | copy-fraction | all
    #[arg(long = "cheat-kind", global = true)]
    cheat_kind: Option<String>,
    #[arg(long = "theta-points", global = true)]
    theta_points: Option<usize>,
    #[arg(long, global = true)]
    restarts: Option<usize>,
    #[arg(long, global = true)]
    iters: Option<usize>,
    #[arg(long, global = true)]
    seeds: Option<usize>,
    #[arg(long, global = true)]
    cases: Option<usize>,
    /// Record wall time in the report (breaks byte-identical reruns)
    #[arg(long, global = true)]
    timing: bool,
    /// Negate the right-hand sides of one verify-bounds record
    #[arg(long = "inject-fault", global = true, hide = true)]
    inject_fault: Option<String>,
}

fn build_config(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let c = &cli.common;
    let mut cfg = match &c.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    let name = cli.command.name();
    if let Some(cmd) = cfg.command.as_deref() {
        if cmd != name {
            return Err(CliError::Usage(format!("config is for {cmd:?}, invoked as {name:?}")));
        }
    }
    cfg.merge(ExperimentConfig {
        command: Some(name.to_string()),
        n: c.n,
        d: c.d,
        k_bases: c.k_bases,
        k_list: c.k_list.clone(),
        unitaries: c.unitaries.clone(),
        b_claimed: c.b_claimed,
        gamma: c.gamma,
        cheat_kind: c.cheat_kind.clone(),
        theta_grid: None,
        theta_points: c.theta_points,
        restarts: c.restarts,
        iters: c.iters,
        seeds: c.seeds,
        cases: c.cases,
        seed: 0,
        output_path: c.out.clone(),
        jobs: c.jobs,
        timing: c.timing,
        inject_fault: c.inject_fault.clone(),
    });
    if let Some(seed) = c.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or("QBSC_LOG", "error");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

fn main() -> ExitCode {
    init_logging();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // --help and --version are not errors
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { EXIT_PASS as u8 });
        }
    };
    let status = build_config(&cli).and_then(|cfg| {
        if let Some(jobs) = cfg.jobs {
            rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build_global()
                .map_err(|e| CliError::Usage(format!("--jobs: {e}")))?;
        }
        execute(cli.command.name(), &cfg)
    });
    match status {
        Ok(report) if report.pass => ExitCode::from(EXIT_PASS as u8),
        Ok(_) => ExitCode::from(EXIT_CHECK_FAILED as u8),
        Err(e) => {
            eprintln!("qbsc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
