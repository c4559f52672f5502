use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "bhlab", version, about = "Regularized Eisenstein measures, p-adic zeta values and a complex oracle")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Args, Debug, Default, Clone)]
pub struct Flags {
    /// Prime p >= 5.
    #[arg(long, global = true)]
    pub p: Option<u64>,
    /// p-adic working precision M.
    #[arg(long, global = true)]
    pub prec: Option<u32>,
    /// q-expansion truncation order.
    #[arg(long, global = true)]
    pub qprec: Option<usize>,
    #[arg(long, global = true)]
    pub c: Option<u64>,
    #[arg(long = "N", global = true)]
    pub big_n: Option<u64>,
    /// Level n.
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// Weight index k.
    #[arg(long, global = true)]
    pub k: Option<u32>,
    /// Residue class a.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub a: Option<i64>,
    /// Coefficient index for `sigma`.
    #[arg(long, global = true)]
    pub m: Option<u64>,
    /// Argument of `zeta eval`: an integer or a fraction `u/v`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub s: Option<String>,
    /// Teichmüller twist exponent i in ω^i.
    #[arg(long = "omega-power", global = true)]
    pub omega_power: Option<u64>,
    /// Period ratio as `re,im`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tau: Option<String>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub out: Option<Format>,
    /// JSON file with default values for any of the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// One coefficient σ⁽ᵏ⁾_{a,n}(m).
    Sigma,
    /// A q-expansion.
    Qexp {
        #[arg(value_enum)]
        which: QexpKind,
    },
    /// A finite-level measure table or its Amice transform.
    Measure {
        #[arg(value_enum)]
        which: MeasureKind,
    },
    /// k-th moment of the Kubota–Leopoldt measure at level n.
    Moment,
    Zeta {
        #[arg(value_enum)]
        which: ZetaKind,
    },
    /// Exact and p-adic congruence suites.
    Verify {
        #[arg(value_enum)]
        which: VerifyKind,
    },
    /// Floating-point identity checks.
    Oracle {
        #[arg(value_enum)]
        which: OracleKind,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum QexpKind {
    Phi,
    Psi,
    Gk,
    Gkstar,
    DeltaP,
    G0n,
    An,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum MeasureKind {
    Kl,
    Mazur,
    Amice,
    Periods,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ZetaKind {
    Eval,
    Interpolate,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum VerifyKind {
    KlInterpolation,
    WeightCongruence,
    Distribution,
    Prop55,
    Interpolation,
    Exceptional,
    Residue,
    Limit,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum OracleKind {
    ZInterp,
    LambdaRatio,
    Qexp,
    CmPeriod,
    CmAddition,
    GkPoisson,
}
