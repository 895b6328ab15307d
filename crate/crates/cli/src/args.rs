use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gaussfid::fidelity::{default_schedule, schedule_from_exponents};
use gaussfid::fock::OracleConfig;
use gaussfid::Tolerances;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "gaussfid", version, about = "Fidelity and overlap measures for Gaussian states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Debug, Args)]
pub struct Options {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,

    /// Recompute through the truncated Fock oracle (one or two modes).
    #[arg(long, global = true)]
    pub verify: bool,

    /// Trace deficit accepted by the oracle's adaptive cutoff.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub eps_trunc: f64,

    /// Largest oracle cutoff per mode.
    #[arg(long, global = true, default_value_t = 256)]
    pub max_cutoff: usize,

    /// Symplecticity residual tolerance.
    #[arg(long = "tol-symp", global = true, env = "GAUSSFID_TOLERANCE_SYMP")]
    pub tol_symp: Option<f64>,

    /// Williamson reconstruction tolerance.
    #[arg(long = "tol-recon", global = true, env = "GAUSSFID_TOLERANCE_RECON")]
    pub tol_recon: Option<f64>,

    /// Slack below 1 allowed for symplectic eigenvalues.
    #[arg(long = "tol-heis", global = true, env = "GAUSSFID_TOLERANCE_HEIS")]
    pub tol_heis: Option<f64>,

    /// Slack above 1 still counted as pure.
    #[arg(long = "tol-pure", global = true, env = "GAUSSFID_TOLERANCE_PURE")]
    pub tol_pure: Option<f64>,

    /// Largest asymmetry that is symmetrized instead of rejected.
    #[arg(long = "tol-symmetry", global = true, env = "GAUSSFID_TOLERANCE_SYMMETRY")]
    pub tol_symmetry: Option<f64>,
}

#[derive(Debug, Args)]
pub struct Pair {
    /// First state file.
    pub rho0: PathBuf,
    /// Second state file.
    pub rho1: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a state file against the covariance matrix invariants.
    Validate { state: PathBuf },
    /// Symplectic spectrum and diagonalizing symplectic matrix.
    Williamson { state: PathBuf },
    /// Purity Tr(ρ²) and whether the state is pure.
    Purity { state: PathBuf },
    /// s-overlap Tr(ρ0^s ρ1^(1-s)).
    Overlap {
        #[command(flatten)]
        pair: Pair,
        /// Exponent s in [0, 1].
        #[arg(long)]
        s: f64,
    },
    /// Bhattacharyya coefficient, the overlap at s = 1/2.
    Bhattacharyya {
        #[command(flatten)]
        pair: Pair,
    },
    /// Quantum Chernoff coefficient, the overlap minimized over s in [0, 1].
    Chernoff {
        #[command(flatten)]
        pair: Pair,
    },
    /// Closed-form fidelity; one state must be pure.
    Fidelity {
        #[command(flatten)]
        pair: Pair,
    },
    /// s-overlap along s = 1 - 10^-k next to the fidelity; ρ1 must be pure.
    LimitSweep {
        #[command(flatten)]
        pair: Pair,
        /// Exponents k, as `a..b` (inclusive) or a comma list.
        #[arg(long, conflicts_with = "schedule")]
        ks: Option<String>,
        /// Explicit increasing s values, comma separated.
        #[arg(long, value_delimiter = ',')]
        schedule: Option<Vec<f64>>,
    },
    /// Chernoff, Bhattacharyya and fidelity terms with their inequality margins.
    Bounds {
        #[command(flatten)]
        pair: Pair,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Williamson { .. } => "williamson",
            Command::Purity { .. } => "purity",
            Command::Overlap { .. } => "overlap",
            Command::Bhattacharyya { .. } => "bhattacharyya",
            Command::Chernoff { .. } => "chernoff",
            Command::Fidelity { .. } => "fidelity",
            Command::LimitSweep { .. } => "limit-sweep",
            Command::Bounds { .. } => "bounds",
        }
    }

    pub fn inputs(&self) -> Vec<&PathBuf> {
        match self {
            Command::Validate { state } | Command::Williamson { state } | Command::Purity { state } => {
                vec![state]
            }
            Command::Overlap { pair, .. }
            | Command::Bhattacharyya { pair }
            | Command::Chernoff { pair }
            | Command::Fidelity { pair }
            | Command::LimitSweep { pair, .. }
            | Command::Bounds { pair } => vec![&pair.rho0, &pair.rho1],
        }
    }
}

/// Checked settings for one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub format: Format,
    pub verify: bool,
    pub tolerances: Tolerances,
    pub oracle: OracleConfig,
    /// s for `overlap`, or the schedule for `limit-sweep`.
    pub schedule: Vec<f64>,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let o = &cli.options;
        let mut tolerances = Tolerances::default();
        for (name, flag, slot) in [
            ("--tol-symp", o.tol_symp, &mut tolerances.symplectic),
            ("--tol-recon", o.tol_recon, &mut tolerances.reconstruction),
            ("--tol-heis", o.tol_heis, &mut tolerances.heisenberg),
            ("--tol-pure", o.tol_pure, &mut tolerances.pure),
            ("--tol-symmetry", o.tol_symmetry, &mut tolerances.symmetry),
        ] {
            if let Some(value) = flag {
                if !(value.is_finite() && value >= 0.0) {
                    return Err(CliError::Usage(format!("{name} must be a finite non-negative number, got {value}")));
                }
                *slot = value;
            }
        }

        if !(o.eps_trunc > 0.0 && o.eps_trunc < 1.0) {
            return Err(CliError::Usage(format!("--eps-trunc must lie in (0, 1), got {}", o.eps_trunc)));
        }
        let oracle = OracleConfig {
            eps_trunc: o.eps_trunc,
            cap: o.max_cutoff,
            ..OracleConfig::default()
        };
        if oracle.cap < oracle.start_cutoff {
            return Err(CliError::Usage(format!(
                "--max-cutoff must be at least {}, got {}",
                oracle.start_cutoff, oracle.cap
            )));
        }

        let schedule = match &cli.command {
            Command::Overlap { s, .. } => {
                if !(*s > 0.0 && *s < 1.0) {
                    return Err(CliError::Usage(format!("--s must lie in (0, 1), got {s}")));
                }
                vec![*s]
            }
            Command::LimitSweep { ks, schedule, .. } => match (ks, schedule) {
                (Some(ks), _) => schedule_from_exponents(parse_exponents(ks)?),
                (None, Some(values)) => values.clone(),
                (None, None) => default_schedule(),
            },
            _ => Vec::new(),
        };
        if let Some(bad) = schedule.iter().find(|s| !(**s > 0.0 && **s < 1.0)) {
            return Err(CliError::Usage(format!("schedule value {bad} is outside (0, 1)")));
        }
        if schedule.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Usage("schedule must be strictly increasing".into()));
        }

        if o.verify && matches!(cli.command, Command::Validate { .. } | Command::Williamson { .. }) {
            return Err(CliError::Usage(format!("--verify is not available for {}", cli.command.name())));
        }

        Ok(RunConfig {
            format: o.format,
            verify: o.verify,
            tolerances,
            oracle,
            schedule,
        })
    }
}

/// `a..b` (inclusive) or `k1,k2,...`.
fn parse_exponents(text: &str) -> Result<Vec<u32>, CliError> {
    let bad = || CliError::Usage(format!("--ks expects `a..b` or a comma list of positive integers, got {text:?}"));
    let parse = |s: &str| s.trim().parse::<u32>().ok().filter(|k| (1..=15).contains(k)).ok_or_else(bad);
    if let Some((a, b)) = text.split_once("..") {
        let (a, b) = (parse(a)?, parse(b)?);
        if a > b {
            return Err(bad());
        }
        Ok((a..=b).collect())
    } else {
        text.split(',').map(parse).collect()
    }
}
