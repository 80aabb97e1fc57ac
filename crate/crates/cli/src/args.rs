use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact equivariant Riemann–Roch characters from fixed-point data.
#[derive(Debug, Parser)]
#[command(name = "quantred", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a spec file and list every violated invariant.
    Validate {
        #[arg(long)]
        spec: String,
    },
    /// Emit a spec document from a generator.
    Generate {
        #[command(subcommand)]
        generator: Generator,
        /// Write to a file instead of standard output.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// The character RR(M, E) over the maximal torus.
    Compute(Job),
    /// RR_0 and the localized characters of every stratum.
    Decompose(Job),
    /// Run every applicable identity check; exits with 3 on a failure.
    Verify(Job),
    /// Positivity data of every nonzero stratum, and rigidity.
    Certify(Job),
}

#[derive(Debug, Subcommand)]
pub enum Generator {
    /// Projective space with torus weights w_i and moment k·w_i + shift.
    Projective {
        /// Weights separated by ';', coordinates by ',' (e.g. "0;1").
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, allow_hyphen_values = true)]
        shift: Option<String>,
        #[arg(long)]
        name: Option<String>,
    },
    /// Full flag manifold through a regular dominant weight.
    Flag {
        #[arg(long, value_enum)]
        group: Group,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        name: Option<String>,
    },
    /// Product of two specs with the diagonal action.
    Product {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        name: Option<String>,
    },
    /// One of the shipped example specs.
    Gallery {
        /// Omit to list the names.
        name: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Group {
    Su2,
    A2,
    B2,
    G2,
    #[value(name = "a1xa1")]
    A1A1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Job {
    /// Spec file, or `gallery:NAME` for a shipped spec.
    #[arg(long)]
    pub spec: String,
    /// Bundle name; defaults to the moment bundle.
    #[arg(long)]
    pub bundle: Option<String>,
    /// Generic direction `v1,...,vr`; defaults to the first generic lattice vector.
    #[arg(long, allow_hyphen_values = true)]
    pub direction: Option<String>,
    /// Auxiliary direction breaking ties `⟨α, β⟩ = 0`.
    #[arg(long, allow_hyphen_values = true)]
    pub tiebreak: Option<String>,
    /// Slab cutoff in units of the level envelope.
    #[arg(long, default_value_t = quantred::localization::DEFAULT_CUTOFF)]
    pub cutoff: i64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}
