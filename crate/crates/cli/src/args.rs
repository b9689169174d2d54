use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "nskd",
    version,
    about = "Non-signaling boxes, exact secrecy certificates for XOR-compressed keys, and key agreement simulation"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Seed for every random draw.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the primary artifact (box, partition, certificate, table, transcript) here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Format of the report on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build and inspect non-signaling boxes P(xy|uv).
    #[command(subcommand, name = "box")]
    Box(BoxCommand),
    /// Eavesdropper partitions of a marginal box and the key distance they reach.
    #[command(subcommand)]
    Attack(AttackCommand),
    /// Exact linear program for the distance of an XOR of Alice's bits from uniform.
    #[command(subcommand)]
    Lp(LpCommand),
    /// Asymptotic key rate 1 − h(δ) − log₂(1+4ε) at one point.
    Keyrate(KeyrateArgs),
    /// Key rate over a (δ, ε) grid, or the (δ, ε) curve of the noisy singlet source.
    Region(RegionArgs),
    /// Simulated key agreement: test, sift, reconcile, amplify.
    #[command(subcommand)]
    Protocol(ProtocolCommand),
}

#[derive(Debug, Subcommand)]
pub enum BoxCommand {
    /// Construct a PR, isotropic, quantum or singlet box, optionally as a tensor power.
    Make(MakeArgs),
    /// Check normalization, positivity and the non-signaling conditions.
    Validate(ValidateArgs),
    /// Average over the eight CHSH-preserving relabelings of every pair.
    Depolarize(BoxPath),
    /// Distance of a one-pair box to the local polytope of deterministic strategies.
    Local(BoxPath),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoxKind {
    Pr,
    Isotropic,
    Quantum,
    Singlet,
}

#[derive(Debug, Args)]
pub struct MakeArgs {
    /// Box family.
    #[arg(long, value_enum)]
    pub kind: BoxKind,
    /// CHSH error of the isotropic box, as p/q or an exact decimal.
    #[arg(long)]
    pub epsilon: Option<String>,
    /// Error at inputs (0,0) of the quantum box.
    #[arg(long, default_value = "0")]
    pub delta: String,
    /// Extra noise at the other inputs of the quantum box, in [0, 3/4].
    #[arg(long, default_value = "0")]
    pub noise: String,
    /// Singlet measurement angles in degrees: a0,a1,b0,b1.
    #[arg(long, value_delimiter = ',', num_args = 4, default_value = "90,60,0,30")]
    pub angles: Vec<f64>,
    /// Independent flip probability on each singlet output.
    #[arg(long, default_value_t = 0.0)]
    pub flip: f64,
    /// Number of independent copies.
    #[arg(long, default_value_t = 1)]
    pub pairs: usize,
}

#[derive(Debug, Args)]
pub struct BoxPath {
    /// Box file in JSON.
    pub path: PathBuf,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    pub path: PathBuf,
    /// Tolerance; 0 means exact for rational boxes.
    #[arg(long, default_value_t = 0.0)]
    pub tol: f64,
}

#[derive(Debug, Subcommand)]
pub enum AttackCommand {
    /// Optimal attack on one isotropic pair: eight deterministic boxes and a PR box.
    Single(SingleArgs),
    /// Product of single-pair attacks on independent pairs.
    Product(ProductArgs),
    /// Collective attack on n isotropic pairs that leaves at least one pair local.
    Collective(CollectiveArgs),
}

#[derive(Debug, Args)]
pub struct SingleArgs {
    /// CHSH error of the isotropic pair.
    #[arg(long, conflicts_with = "box_path", required_unless_present = "box_path")]
    pub epsilon: Option<String>,
    /// Attack this box instead; it must be unbiased with equal error at every input.
    #[arg(long = "box")]
    pub box_path: Option<std::path::PathBuf>,
    /// Alice's input.
    #[arg(long, default_value_t = 0)]
    pub u: u8,
    /// Bob's input.
    #[arg(long, default_value_t = 0)]
    pub v: u8,
}

#[derive(Debug, Args)]
pub struct ProductArgs {
    /// Comma-separated CHSH errors, one per pair.
    #[arg(long, value_delimiter = ',', required = true)]
    pub epsilon: Vec<String>,
}

#[derive(Debug, Args)]
pub struct CollectiveArgs {
    /// CHSH error of every pair, at most 3/(8n+4).
    #[arg(long)]
    pub epsilon: String,
    /// Number of pairs.
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Subcommand)]
pub enum LpCommand {
    /// Solve the program exactly with the simplex method.
    Solve(LpArgs),
    /// Build the product certificate λ₁⊗…⊗λₙ and verify Aᵀλ = b, λ ≥ 0 exactly.
    Certify(CertifyArgs),
}

#[derive(Debug, Args)]
pub struct LpArgs {
    /// Number of isotropic pairs.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// CHSH error of each isotropic pair.
    #[arg(long, conflicts_with_all = ["box_path", "program"])]
    pub epsilon: Option<String>,
    /// Marginal box file instead of isotropic pairs.
    #[arg(long = "box", conflicts_with = "program")]
    pub box_path: Option<PathBuf>,
    /// Solve a program read from JSON ({"vars", "rows", "objective"}).
    #[arg(long)]
    pub program: Option<PathBuf>,
    /// Alice's inputs, one bit per pair, e.g. 01.
    #[arg(long)]
    pub u: Option<String>,
    /// Bob's inputs.
    #[arg(long)]
    pub v: Option<String>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    /// Number of isotropic pairs.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// CHSH error of each isotropic pair.
    #[arg(long, conflicts_with = "box_path", required_unless_present = "box_path")]
    pub epsilon: Option<String>,
    /// Marginal box file; certificates for more than three pairs need isotropic pairs.
    #[arg(long = "box")]
    pub box_path: Option<PathBuf>,
    /// Alice's inputs, one bit per pair.
    #[arg(long)]
    pub u: Option<String>,
    /// Bob's inputs.
    #[arg(long)]
    pub v: Option<String>,
    /// Verify this certificate file instead of building one.
    #[arg(long)]
    pub certificate: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KeyrateArgs {
    /// CHSH error.
    #[arg(long)]
    pub epsilon: f64,
    /// Error at the key inputs.
    #[arg(long)]
    pub delta: f64,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    /// δ grid as start:stop:points.
    #[arg(long, default_value = "0:0.2:21")]
    pub delta: String,
    /// ε grid as start:stop:points.
    #[arg(long, default_value = "0:0.25:26")]
    pub epsilon: String,
    /// Emit the noisy singlet curve over this flip-probability grid instead.
    #[arg(long)]
    pub curve: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum ProtocolCommand {
    /// Run one seeded session (test, sift, reconcile, amplify) and write its transcript.
    Run(RunArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Config file in JSON; flags given here override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Raw key length.
    #[arg(long)]
    pub n: Option<usize>,
    /// Test sample size.
    #[arg(long)]
    pub k: Option<usize>,
    /// Error of the quantum source at inputs (0,0).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Extra noise of the quantum source at the other inputs.
    #[arg(long)]
    pub noise: Option<f64>,
    /// Use a singlet source with these angles (a0,a1,b0,b1) instead.
    #[arg(long, value_delimiter = ',', num_args = 4)]
    pub singlet: Option<Vec<f64>>,
    /// Output flip probability of the singlet source.
    #[arg(long)]
    pub flip: Option<f64>,
    /// Final key length, or "auto".
    #[arg(long)]
    pub s: Option<String>,
    /// Margin added to ε̂ before the feasibility check and the bound.
    #[arg(long)]
    pub slack: Option<f64>,
    /// Margin added to δ̂ before the feasibility check.
    #[arg(long)]
    pub delta_slack: Option<f64>,
    /// Sample from the depolarized source.
    #[arg(long)]
    pub depolarize: bool,
}
