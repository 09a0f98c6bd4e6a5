use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "relalg", version, about = "Relation algebras on finite structures", propagate_version = true)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = ReportFormat::Text)]
    pub report: ReportFormat,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Write the report (or, for `construct`, the structure) to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate terms (one per line) or a formula on a structure.
    Eval(EvalArgs),
    #[command(subcommand)]
    Translate(TranslateCmd),
    /// Bounded check of a preservation property.
    Check(CheckArgs),
    /// The operation table: every operation against every property column.
    Table1(Table1Args),
    #[command(subcommand)]
    Construct(ConstructCmd),
    #[command(subcommand)]
    Verify(VerifyCmd),
    #[command(subcommand)]
    Synth(SynthCmd),
    /// Ehrenfeucht–Fraïssé games of bounded rank.
    Ef(EfArgs),
    /// Named experiment presets.
    Run(RunArgs),
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["term", "formula"]))]
pub struct EvalArgs {
    #[arg(long)]
    pub term: Option<PathBuf>,
    /// Formula free in `x`, `y`.
    #[arg(long)]
    pub formula: Option<PathBuf>,
    #[arg(long)]
    pub structure: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum TranslateCmd {
    /// Compile a positive-existential three-variable formula to a homomorphism-safe term.
    PosexToTerm {
        #[arg(long)]
        formula: PathBuf,
        /// Verify the result on every structure up to this size.
        #[arg(long)]
        verify_size: Option<usize>,
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// Translate terms to three-variable first-order formulas.
    TermToFo3 {
        #[arg(long)]
        term: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum PropertyArg {
    Fp,
    Tfp,
    Ifp,
    Homsafe,
    Subsafe,
    Forward,
    Local,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("op").required(true).args(["term", "formula"]))]
pub struct CheckArgs {
    #[arg(value_enum)]
    pub property: PropertyArg,
    #[arg(long)]
    pub term: Option<PathBuf>,
    #[arg(long)]
    pub formula: Option<PathBuf>,
    #[arg(long)]
    pub max_size: Option<usize>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Check over all structures instead of the property's default class.
    #[arg(long)]
    pub all_structures: bool,
}

#[derive(Args, Debug)]
pub struct Table1Args {
    #[arg(long)]
    pub max_size: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum ConstructCmd {
    /// The cycle gadget with auxiliary nodes.
    Cmvee {
        #[arg(long)]
        m: usize,
    },
    /// The plain tripled cycle.
    Cm {
        #[arg(long)]
        m: usize,
    },
    /// The disjoint union of two gadgets with the set X.
    Counterexample {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        mprime: usize,
    },
    /// Total-function version of the counterexample.
    Sink {
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        mprime: usize,
    },
    /// The structure that defeats bounded-radius forwardness.
    Fig2 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Remove b0 before output.
        #[arg(long)]
        without_b0: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// Closure of {f, g} under a basis on the counterexample.
    Claim2 {
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        mprime: usize,
        /// Preset (fa, tra, homsafe, fwd, inj), comma-separated operation tokens, or `preset+tokens`.
        #[arg(long, default_value = "fa")]
        basis: String,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
    },
    /// Replay of the bounded-radius counterexample for one radius.
    Fig2 {
        #[arg(long)]
        m: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum SynthCmd {
    Forward(SynthArgs),
    LocalInjective(SynthArgs),
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    /// Oracle file: a term, or a formula in x, y prefixed with `fo:`.
    #[arg(long)]
    pub oracle_term: PathBuf,
    /// Symbol count (the oracle's symbols, padded) or a comma-separated list of names.
    #[arg(long)]
    pub symbols: String,
    #[arg(long, default_value_t = 1)]
    pub radius: usize,
    /// Search radii 0..=MAX and keep the first that validates.
    #[arg(long)]
    pub auto_radius: Option<usize>,
    /// Validate on every structure of the class up to this size.
    #[arg(long)]
    pub validate_size: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
pub struct EfArgs {
    #[command(subcommand)]
    pub command: Option<EfCmd>,
    #[arg(long)]
    pub left: Option<PathBuf>,
    #[arg(long)]
    pub right: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub rank: usize,
}

#[derive(Subcommand, Debug)]
pub enum EfCmd {
    /// Least rank at which Spoiler wins.
    MinRank {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_rank: usize,
    },
    /// Disjoint unions of pairwise equivalent structures stay equivalent.
    FvCheck {
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
    },
}

#[derive(Args, Debug)]
pub struct RunArgs {
    /// One of paper:table1, paper:separation, paper:fig2, paper:synthesis, paper:fv-lemma.
    pub preset: String,
}
