use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gandhi_core::{EvalConfig, Strategy};

#[derive(Debug, Parser)]
#[command(name = "gandhi", version, about = "Successive primes from Gandhi's formula, computed exactly")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunFlags,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute p_{n+1} from p_1..p_n.
    Next {
        n: usize,
    },
    /// Generate the first COUNT primes starting from p_1 = 2.
    Sequence {
        count: usize,
    },
    /// Check identities and inequalities exactly.
    Verify(VerifyArgs),
    /// Time every strategy over a range of n.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    ExactDivisor,
    ExactCoprime,
    Interval,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::ExactDivisor => Strategy::ExactDivisor,
            StrategyArg::ExactCoprime => Strategy::ExactCoprime,
            StrategyArg::Interval => Strategy::Interval,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Plain,
}

/// Flags shared by every subcommand. Precedence is flag, then `GANDHI_*`
/// environment variable, then default.
#[derive(Debug, Clone, Args)]
pub struct RunFlags {
    #[arg(long, global = true, value_enum, env = "GANDHI_STRATEGY", default_value = "interval")]
    pub strategy: StrategyArg,

    /// Initial fractional precision for the interval strategy.
    #[arg(long, global = true, env = "GANDHI_PRECISION", default_value_t = 64)]
    pub precision: u64,

    #[arg(long, global = true, default_value_t = 65_536)]
    pub max_precision: u64,

    /// Largest primorial (in bits of 2^P - 1) the exact strategies will touch.
    #[arg(long, global = true, env = "GANDHI_BUDGET", default_value_t = 1 << 24)]
    pub budget: u64,

    #[arg(long, global = true, value_enum, env = "GANDHI_FORMAT", default_value = "plain")]
    pub format: OutputFormat,

    /// Skip comparing results with the sieve.
    #[arg(long, global = true)]
    pub no_cross_check: bool,

    /// Append every record as a JSON line to this file.
    #[arg(long, global = true)]
    pub log: Option<PathBuf>,
}

/// Resolved configuration for one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub strategy: Strategy,
    pub initial_precision_bits: u64,
    pub max_precision_bits: u64,
    pub exact_bit_budget: u64,
    pub output_format: OutputFormat,
    pub cross_check: bool,
    pub log: Option<PathBuf>,
}

impl RunConfig {
    pub fn eval(&self) -> EvalConfig {
        EvalConfig {
            initial_precision_bits: self.initial_precision_bits,
            max_precision_bits: self.max_precision_bits,
            exact_bit_budget: self.exact_bit_budget,
            cross_check: self.cross_check,
        }
    }
}

impl TryFrom<&RunFlags> for RunConfig {
    type Error = String;

    fn try_from(flags: &RunFlags) -> Result<Self, String> {
        if flags.precision == 0 {
            return Err("--precision must be positive".into());
        }
        if flags.precision > flags.max_precision {
            return Err(format!(
                "--precision {} exceeds --max-precision {}",
                flags.precision, flags.max_precision
            ));
        }
        Ok(RunConfig {
            strategy: flags.strategy.into(),
            initial_precision_bits: flags.precision,
            max_precision_bits: flags.max_precision,
            exact_bit_budget: flags.budget,
            output_format: flags.format,
            cross_check: !flags.no_cross_check,
            log: flags.log.clone(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Geometric,
    Theorem53,
    Theorem54,
    Mobius,
    Tailbound,
    Bounds,
    Gaps,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,

    /// Index range, e.g. `1..8`. Meaning per suite: n for theorem53, theorem54,
    /// bounds and gaps; the prime index of p# for tailbound.
    #[arg(long = "n")]
    pub n: Option<IndexRange>,

    /// Largest m for the Möbius sum check.
    #[arg(long)]
    pub max: Option<u64>,

    /// Largest exponent a for the geometric series check.
    #[arg(long)]
    pub a_max: Option<u32>,

    /// Largest truncation count K for the geometric series check.
    #[arg(long)]
    pub k_max: Option<u32>,

    /// Largest cutoff for the coprime tail bound.
    #[arg(long)]
    pub cutoff_max: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(long = "n", default_value = "1..12")]
    pub n: IndexRange,
}

/// An inclusive index range written `a..b`, `a..=b` or `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexRange {
    pub start: u64,
    pub end: u64,
}

impl IndexRange {
    pub fn iter(self) -> RangeInclusive<u64> {
        self.start..=self.end
    }
}

impl FromStr for IndexRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |v: &str| {
            v.trim()
                .parse::<u64>()
                .map_err(|e| format!("bad range bound {v:?}: {e}"))
        };
        let (start, end) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if start > end {
            return Err(format!("empty range {s:?}"));
        }
        Ok(IndexRange { start, end })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!("1..8".parse::<IndexRange>().unwrap(), IndexRange { start: 1, end: 8 });
        assert_eq!("2..=5".parse::<IndexRange>().unwrap(), IndexRange { start: 2, end: 5 });
        assert_eq!("7".parse::<IndexRange>().unwrap(), IndexRange { start: 7, end: 7 });
        assert!("5..2".parse::<IndexRange>().is_err());
        assert!("x..2".parse::<IndexRange>().is_err());
    }

    #[test]
    fn defaults() {
        let cli = Cli::try_parse_from(["gandhi", "next", "3"]).unwrap();
        let cfg = RunConfig::try_from(&cli.run).unwrap();
        assert_eq!(cfg.strategy, Strategy::Interval);
        assert_eq!(cfg.initial_precision_bits, 64);
        assert_eq!(cfg.max_precision_bits, 65_536);
        assert_eq!(cfg.exact_bit_budget, 1 << 24);
        assert_eq!(cfg.output_format, OutputFormat::Plain);
        assert!(cfg.cross_check);
    }

    #[test]
    fn flags_after_subcommand() {
        let cli = Cli::try_parse_from([
            "gandhi",
            "sequence",
            "20",
            "--strategy",
            "exact-coprime",
            "--no-cross-check",
            "--format",
            "csv",
        ])
        .unwrap();
        let cfg = RunConfig::try_from(&cli.run).unwrap();
        assert_eq!(cfg.strategy, Strategy::ExactCoprime);
        assert_eq!(cfg.output_format, OutputFormat::Csv);
        assert!(!cfg.cross_check);
    }

    #[test]
    fn precision_ordering_is_enforced() {
        let cli = Cli::try_parse_from(["gandhi", "next", "3", "--precision", "512", "--max-precision", "128"])
            .unwrap();
        assert!(RunConfig::try_from(&cli.run).is_err());
    }
}
