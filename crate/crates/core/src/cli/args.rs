use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::ambient::CompositionMode;
use crate::bounds::SizeSetting;
use crate::counting::Distinctness;
use crate::structure::CoreChoice;

#[derive(Debug, Parser)]
#[command(name = "sidon", version, about = "Energies, Sidon-type subsets and B°_k[g] sets")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GlobalOpts {
    /// Seed for randomized commands; derived from the inputs when absent.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Independent trials for randomized extraction.
    #[arg(long, global = true, default_value_t = 20)]
    pub trials: u64,
    /// Largest set handed to an exhaustive search.
    #[arg(long, global = true, default_value_t = crate::sidon::DEFAULT_EXACT_CAP)]
    pub cap: usize,
    /// Worker threads (results do not depend on it).
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,
    /// Write the JSON report here (and a run manifest next to it).
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Merge duplicate elements in input sets instead of rejecting them.
    #[arg(long, global = true)]
    pub allow_duplicates: bool,
}

/// Composition modes accepted on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    #[value(alias = "difference")]
    Diff,
    Sum,
    #[value(alias = "product")]
    Prod,
    Ratio,
}

impl From<ModeArg> for CompositionMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Diff => CompositionMode::Difference,
            ModeArg::Sum => CompositionMode::Sum,
            ModeArg::Prod => CompositionMode::Product,
            ModeArg::Ratio => CompositionMode::Ratio,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReadingArg {
    AllDistinct,
    WithinPairs,
}

impl From<ReadingArg> for Distinctness {
    fn from(r: ReadingArg) -> Self {
        match r {
            ReadingArg::AllDistinct => Distinctness::AllDistinct,
            ReadingArg::WithinPairs => Distinctness::WithinPairs,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SettingArg {
    FiniteGroup,
    Segment,
}

impl From<SettingArg> for SizeSetting {
    fn from(s: SettingArg) -> Self {
        match s {
            SettingArg::FiniteGroup => SizeSetting::FiniteGroup,
            SettingArg::Segment => SizeSetting::Segment,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoreArg {
    Rigid,
    PopularCore,
}

impl From<CoreArg> for CoreChoice {
    fn from(c: CoreArg) -> Self {
        match c {
            CoreArg::Rigid => CoreChoice::Rigid,
            CoreArg::PopularCore => CoreChoice::PopularCore,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SetArg {
    /// Set file (JSON or text format).
    #[arg(long)]
    pub set: PathBuf,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// E_k (or its sum/product analogue) and κ.
    Energy {
        #[command(flatten)]
        input: SetArg,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value = "diff")]
        mode: ModeArg,
        /// Also count tuples of distinct elements.
        #[arg(long)]
        with_prime: bool,
    },
    /// Tuples of distinct elements sharing one value (E'_k).
    EnergyPrime {
        #[command(flatten)]
        input: SetArg,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value = "diff")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "all-distinct")]
        reading: ReadingArg,
        /// Cross-check by enumeration (small sets only).
        #[arg(long)]
        enumerate: bool,
    },
    /// Representation function r_{A∘B}.
    Histogram {
        #[command(flatten)]
        input: SetArg,
        /// Right operand (defaults to the set itself).
        #[arg(long)]
        right: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "diff")]
        mode: ModeArg,
    },
    /// Multiplicity bound r ≤ g, and B°_k[g] membership when --k is given.
    Verify {
        #[command(flatten)]
        input: SetArg,
        #[arg(long)]
        g: u32,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, value_enum, default_value = "diff")]
        mode: ModeArg,
    },
    /// Exact Sid_k by exhaustive search.
    Exact {
        #[command(flatten)]
        input: SetArg,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value = "diff")]
        mode: ModeArg,
    },
    /// Randomized greedy subset with r ≤ k.
    Greedy {
        #[command(flatten)]
        input: SetArg,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value = "diff")]
        mode: ModeArg,
    },
    /// Randomized extraction with a certified multiplicity bound.
    Extract {
        #[command(flatten)]
        input: SetArg,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value = "diff")]
        mode: ModeArg,
    },
    /// Dense core A_* and its energy floor.
    DenseCore {
        #[command(flatten)]
        input: SetArg,
        #[arg(long)]
        g: u32,
    },
    /// Explicit constructions.
    Construct {
        #[command(subcommand)]
        which: ConstructCmd,
        /// Also write the constructed set (text format for .txt, JSON otherwise).
        #[arg(long, global = true)]
        set_out: Option<PathBuf>,
    },
    /// Energy-gap decomposition certificate.
    Decompose {
        #[command(flatten)]
        input: SetArg,
        #[arg(long, default_value = "1/4")]
        delta: String,
        #[arg(long, default_value = "1/16")]
        eps: String,
    },
    /// Decomposition followed by the rigid-structure step.
    Rigid {
        #[command(flatten)]
        input: SetArg,
        #[arg(long, default_value = "1/4")]
        delta: String,
        #[arg(long, default_value = "1/16")]
        eps: String,
    },
    /// Nonzero t with |A ∩ (A+t)| ≥ θ.
    PopularShifts {
        #[command(flatten)]
        input: SetArg,
        #[arg(long)]
        theta: u64,
    },
    /// Additive or multiplicative extraction driven by the decomposition.
    Pipeline {
        #[command(flatten)]
        input: SetArg,
        #[arg(long, default_value = "1/4")]
        delta: String,
        #[arg(long, default_value = "1/16")]
        eps: String,
        #[arg(long, value_enum, default_value = "rigid")]
        core: CoreArg,
    },
    /// Closed-form bounds.
    Bounds {
        #[command(subcommand)]
        which: BoundsCmd,
    },
    /// Intersections of slices of a B°_k[g] set; without --x, the S ∩ (S+w) check.
    Heritability {
        #[command(flatten)]
        input: SetArg,
        /// Shift set files X_1, X_2, ... (repeat the flag).
        #[arg(long)]
        x: Vec<PathBuf>,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = 2)]
        g: u32,
    },
    /// |nA - mA| against the Plünnecke–Ruzsa bound.
    AuditPlunnecke {
        #[command(flatten)]
        input: SetArg,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        /// Largest intermediate sumset.
        #[arg(long, default_value_t = 1 << 22)]
        budget: usize,
    },
    /// Recompute a decomposition certificate or pipeline report.
    VerifyCertificate {
        #[command(flatten)]
        input: SetArg,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Time the main operations on progressions.
    Bench {
        #[arg(long, default_value_t = 1024)]
        n: i64,
    },
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "construction", rename_all = "kebab-case")]
pub enum ConstructCmd {
    Sidon {
        #[arg(long)]
        n: i64,
    },
    Linstrom {
        #[arg(long)]
        g: i64,
        #[arg(long)]
        n: Option<i64>,
        /// Use this Sidon set instead of the built-in one.
        #[arg(long)]
        base: Option<PathBuf>,
    },
    Geometric {
        #[arg(long)]
        base: i64,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    Hyperbola {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        k: i64,
        /// Fixed shift; every admissible shift is scanned when absent.
        #[arg(long)]
        t: Option<i64>,
    },
    Fpmult {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        order: i64,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "bound", rename_all = "kebab-case")]
pub enum BoundsCmd {
    /// Sid_k(A) for A inside B + C.
    Sumset {
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        c: PathBuf,
        /// Target set; checks r_{B+C} ≥ σ on it and measures Sid_k.
        #[arg(long)]
        a: Option<PathBuf>,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        sigma: u64,
    },
    /// Difference and sum sets of A.
    Diffset {
        #[command(flatten)]
        input: SetArg,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Size of B°_k[g] sets.
    Size {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long)]
        g: u32,
        #[arg(long, value_enum)]
        setting: SettingArg,
        /// Check this set against the bound.
        #[arg(long)]
        set: Option<PathBuf>,
    },
}
