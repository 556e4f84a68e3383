use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "sno",
    version,
    about = "Spectral-and-nilpotent ordering of square complex matrices",
    long_about = "Compares matrices by weak majorization of their eigenvalues and, on equal spectra, by \
                  dominance of their Jordan block partitions. Issues eigenvalue-free certificates for the \
                  order and ranks stable LTI systems x' = Ax.\n\n\
                  Matrix files are JSON ({\"n\": 2, \"entries\": [[[re, im], ...], ...]}) or CSV \
                  (cells like 1.5, 1.5-2i, 3i).\n\n\
                  Exit codes: 0 verdict produced / certified, 1 not certified, 2 error."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide the spectral-and-nilpotent order between two matrices.
    Compare {
        /// Matrix file for A (.json or .csv)
        a: PathBuf,
        /// Matrix file for B
        b: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Certify A ≼ B without comparing eigenvalues directly.
    Certify {
        /// Matrix file for A (.json or .csv)
        a: PathBuf,
        /// Matrix file for B
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = CertKind::Gershgorin)]
        kind: CertKind,
        /// Radius exponent of the generalized Gershgorin disks, in [0, 1].
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        /// Try a γ grid `lo:hi:steps` (gershgorin kinds) and report any certifying γ.
        #[arg(long, value_name = "LO:HI:STEPS")]
        gamma_scan: Option<String>,
        /// Entrywise perturbation bound for A (gershgorin-robust).
        #[arg(long, default_value_t = 0.0)]
        eps_a: f64,
        /// Entrywise perturbation bound for B (gershgorin-robust).
        #[arg(long, default_value_t = 0.0)]
        eps_b: f64,
        /// Whether the files hold the nominal matrices or the perturbed ones
        #[arg(long, value_enum, default_value_t = RobustMode::Nominal)]
        robust_mode: RobustMode,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Rank two LTI systems by stability and sample their norm envelopes.
    Stability {
        /// Matrix file for A1 (.json or .csv)
        a: PathBuf,
        /// Matrix file for A2
        b: PathBuf,
        /// End of the time grid [default: 50 / |α| for the slower-decaying stable matrix, else 20].
        #[arg(long)]
        t_end: Option<f64>,
        /// Number of grid samples.
        #[arg(long, default_value_t = 400)]
        samples: usize,
        /// Write the envelopes as `t,gamma` CSV to PATH with `_a1` / `_a2` inserted before the extension.
        #[arg(long, value_name = "PATH")]
        envelope_csv: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Eigenvalue clustering radius [default: 1e-7 · (1 + ‖A‖₂) per matrix].
    #[arg(long)]
    pub cluster_tol: Option<f64>,
    /// Relative singular-value threshold for numerical rank.
    #[arg(long, default_value_t = sno_core::spectra::DEFAULT_RANK_TOL)]
    pub rank_tol: f64,
    /// Tie tolerance for lexicographic comparisons.
    #[arg(long, default_value_t = sno_core::DEFAULT_LEX_TOL)]
    pub lex_tol: f64,
    #[arg(long, short = 'o', value_enum, default_value_t = Output::Human)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CertKind {
    Gershgorin,
    GershgorinRobust,
    NilpotentRank,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RobustMode {
    Nominal,
    Given,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Human,
    Json,
}
