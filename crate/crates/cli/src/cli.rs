use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "w3",
    version,
    about = "Verification driver for rank-two W-algebra boundary computations"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, serde::Serialize)]
pub struct Common {
    /// Correlator configuration (JSON)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub replicas: Option<usize>,
    /// Mollification scale
    #[arg(long, global = true)]
    pub rho: Option<f64>,
    #[arg(long, global = true)]
    pub gamma: Option<f64>,
    /// Write the main output here instead of stdout
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug, serde::Serialize)]
#[serde(rename_all = "kebab-case", tag = "subcommand")]
pub enum Command {
    /// Multilinear form of L_{-λ} (or W_{-n}) applied to a primary
    Forms {
        /// Partition such as 1,2
        #[arg(long, conflicts_with = "w")]
        lambda: Option<String>,
        /// W mode n ∈ {1,2,3}
        #[arg(long)]
        w: Option<i64>,
        /// Weight as [c1, c2] JSON (rationals, numbers or {num,den}) or "c1,c2"
        #[arg(long)]
        alpha: String,
    },
    /// Build a singular vector and check that its form vanishes
    VerifySingular {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        level: u8,
        /// gamma or 2/gamma (levels 2 and 3)
        #[arg(long)]
        chi: Option<String>,
        /// fundamental-weight index for level 1
        #[arg(long, default_value_t = 1)]
        index: u8,
        /// rational κ for level 1; symbolic when omitted
        #[arg(long)]
        kappa: Option<String>,
    },
    /// Right-hand side of the equation of motion at a degenerate boundary insertion
    Eom {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        level: u8,
        /// boundary insertion index; defaults to the first with a matching tag
        #[arg(long)]
        insertion: Option<usize>,
    },
    /// Global Ward system of a configuration in matrix form
    Ward,
    /// Hypergeometric data of a BPZ family
    Bpz {
        /// bulk_boundary or boundary_4pt
        #[arg(long)]
        family: String,
        /// weights JSON file
        #[arg(long)]
        weights: PathBuf,
        #[arg(long)]
        chi: String,
    },
    /// Frobenius solutions on a grid, as CSV
    Hyp {
        /// {"a":[..3],"b":[..2]} numeric, or a bpz spec with --gamma
        #[arg(long)]
        spec: PathBuf,
        /// start:stop:step
        #[arg(long, default_value = "0.01:0.99:0.01")]
        grid: String,
    },
    /// Quadrature against closed forms for the three special integrals
    GammaIntegrals,
    /// Monte Carlo correlator estimate, or a fusion ladder as CSV
    Gmc {
        /// bump or gaussian
        #[arg(long, default_value = "bump")]
        mollifier: String,
        /// grid spacing in the bulk
        #[arg(long)]
        spacing: Option<f64>,
        /// comma-separated distances; switches to the fusion probe
        #[arg(long)]
        ladder: Option<String>,
        /// fusion pair "bulk:moving:fixed" or "boundary:moving:fixed"
        #[arg(long, requires = "ladder")]
        pair: Option<String>,
    },
    /// Every acceptance check
    Suite {
        /// group (singular, ward, freefield, hyp, gmc) or check name; repeatable
        #[arg(long, value_delimiter = ',')]
        skip: Vec<String>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Forms { .. } => "forms",
            Command::VerifySingular { .. } => "verify-singular",
            Command::Eom { .. } => "eom",
            Command::Ward => "ward",
            Command::Bpz { .. } => "bpz",
            Command::Hyp { .. } => "hyp",
            Command::GammaIntegrals => "gamma-integrals",
            Command::Gmc { .. } => "gmc",
            Command::Suite { .. } => "suite",
        }
    }
}
