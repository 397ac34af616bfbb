//! Batch runner behind the `qmeasure` binary.
//!
//! Every command reads an optional JSON config, applies flag overrides, writes
//! its report into `--out` and a [`RunManifest`] next to it. Report bodies are
//! deterministic in (config, seed); wall-clock data lives in the manifest only.

mod gate;
mod io;
mod suites;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use gate::{
    hadamard_bounds, optimize, run_optimize, AncillaPreset, BoundsSpec, ImplementationSpec,
    OptimizeReport, ScenarioFile, SpinPreparation,
};
pub use io::write_atomic;
pub use suites::{
    exhibit_violation, run_exhibits, run_uup, run_way, uup_suite, way_suite, ExhibitConfig,
    ExhibitReport, FailureDump, Rejection, SuiteConfig, SuiteReport, WaySuiteConfig,
    TOTAL_DISTURBANCE_TOL,
};

use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "qmeasure",
    version,
    about = "Noise/disturbance relation checks and gate-error bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON config for the command.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Number of random models (trials for `exhibit-violation`).
    #[arg(long, global = true)]
    pub count: Option<usize>,
    /// Worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Check the universal noise-disturbance relation on random models.
    UupSuite,
    /// Check the conservation-law noise bound on random conserving models.
    WaySuite,
    /// Tabulate Hadamard gate-error bounds, optionally with optimized values.
    HadamardBounds,
    /// Evaluate or optimize one Hadamard implementation.
    Optimize,
    /// Search for violations of the Heisenberg-type relation.
    ExhibitViolation,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::UupSuite => "uup_suite",
            Command::WaySuite => "way_suite",
            Command::HadamardBounds => "hadamard_bounds",
            Command::Optimize => "optimize",
            Command::ExhibitViolation => "exhibit_violation",
        }
    }
}

/// Reproducibility record written beside every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// SHA-256 of the resolved config as canonical (key-sorted, compact) JSON.
    pub config_digest: String,
    pub seed: u64,
    pub version: String,
    pub started_unix_secs: u64,
    pub wall_time_secs: f64,
    pub outputs: Vec<PathBuf>,
}

/// Canonical JSON text of a config: object keys sorted, no whitespace.
pub fn canonical_json<T: Serialize>(config: &T) -> Result<String> {
    // serde_json's default map is ordered by key, so a round-trip through
    // `Value` sorts every object.
    Ok(serde_json::to_string(&serde_json::to_value(config)?)?)
}

pub fn config_digest<T: Serialize>(config: &T) -> Result<String> {
    Ok(hex::encode(Sha256::digest(
        canonical_json(config)?.as_bytes(),
    )))
}

/// What a command produced.
#[derive(Clone, Debug)]
pub struct CommandOutcome {
    pub summary: String,
    /// Set when a bound or relation that must hold was violated.
    pub violation: Option<String>,
    pub outputs: Vec<PathBuf>,
    pub manifest: RunManifest,
}

impl CommandOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.violation.is_some() {
            1
        } else {
            0
        }
    }
}

/// Report produced by a command before it is written.
#[derive(Clone, Debug)]
pub struct Produced {
    pub summary: String,
    pub violation: Option<String>,
    pub files: Vec<(String, Vec<u8>)>,
}

pub(crate) fn load_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Usage(format!("cannot read config {}: {e}", p.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| Error::Usage(format!("invalid config {}: {e}", p.display())))
        }
    }
}

pub(crate) fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

/// Run one parsed invocation, writing its report and manifest.
pub fn run(cli: &Cli) -> Result<CommandOutcome> {
    if cli.jobs == Some(0) {
        return Err(Error::Usage("--jobs must be ≥ 1".into()));
    }
    let started = Instant::now();
    let started_unix_secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let config = cli.config.as_deref();

    let body = || -> Result<(String, u64, Produced)> {
        match cli.command {
            Command::UupSuite => {
                let mut c: SuiteConfig = load_config(config)?;
                c.apply(cli.count, cli.seed);
                Ok((config_digest(&c)?, c.seed, uup_suite(&c)?))
            }
            Command::WaySuite => {
                let mut c: WaySuiteConfig = load_config(config)?;
                c.suite.apply(cli.count, cli.seed);
                Ok((config_digest(&c)?, c.suite.seed, way_suite(&c)?))
            }
            Command::HadamardBounds => {
                let mut c: BoundsSpec = load_config(config)?;
                if let (Some(opt), Some(seed)) = (c.optimize.as_mut(), cli.seed) {
                    opt.seed = seed;
                }
                let seed = c.optimize.as_ref().map_or(0, |o| o.seed);
                Ok((config_digest(&c)?, seed, hadamard_bounds(&c)?))
            }
            Command::Optimize => {
                let mut c: ScenarioFile = load_config(config)?;
                if let Some(seed) = cli.seed {
                    c.optimizer.seed = seed;
                }
                Ok((config_digest(&c)?, c.optimizer.seed, optimize(&c)?))
            }
            Command::ExhibitViolation => {
                let mut c: ExhibitConfig = load_config(config)?;
                if let Some(n) = cli.count {
                    c.trials = n as u64;
                }
                if let Some(seed) = cli.seed {
                    c.seed = seed;
                }
                Ok((config_digest(&c)?, c.seed, exhibit_violation(&c)?))
            }
        }
    };
    let (digest, seed, produced) = match cli.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Usage(format!("thread pool: {e}")))?
            .install(body)?,
        None => body()?,
    };

    std::fs::create_dir_all(&cli.out)?;
    let mut outputs = Vec::new();
    for (name, bytes) in &produced.files {
        let path = cli.out.join(name);
        write_atomic(&path, bytes)?;
        outputs.push(path);
    }
    let manifest = RunManifest {
        command: cli.command.name().to_string(),
        config_digest: digest,
        seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        started_unix_secs,
        wall_time_secs: started.elapsed().as_secs_f64(),
        outputs: outputs.clone(),
    };
    let manifest_path = cli
        .out
        .join(format!("{}.manifest.json", cli.command.name()));
    write_atomic(&manifest_path, &json_bytes(&manifest)?)?;
    Ok(CommandOutcome {
        summary: produced.summary,
        violation: produced.violation,
        outputs,
        manifest,
    })
}

/// Parse `args`, run, print a one-line summary and return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            println!("{}", outcome.summary);
            if let Some(v) = &outcome.violation {
                eprintln!("violation: {v}");
            }
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
