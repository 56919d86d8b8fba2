use std::io::{self, Write};
use std::time::Instant;

use gandhi_core::identitylab::{
    verify_coprime_tail_bound, verify_geometric_identity, verify_mobius_sum, verify_theorem_53,
    verify_theorem_54,
};
use gandhi_core::numtheory::{primorial, verify_gap_facts};
use gandhi_core::{
    bounds_report, gandhi_sequence_with, next_prime_gandhi, theta_exact_coprime, GandhiError,
    IdentityCheckResult, NextPrime, PrimeTable, Rational, Strategy,
};
use serde::Serialize;

use crate::config::{BenchArgs, IndexRange, RunConfig, Suite, VerifyArgs};
use crate::output::{fraction, Emitter, Record};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_RESOURCE: u8 = 2;
pub const EXIT_ORACLE_MISMATCH: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

pub fn exit_code(err: &GandhiError) -> u8 {
    match err {
        GandhiError::Budget { .. } | GandhiError::PrecisionExhausted { .. } => EXIT_RESOURCE,
        GandhiError::OracleMismatch { .. } => EXIT_ORACLE_MISMATCH,
        GandhiError::Domain(_) | GandhiError::Precision { .. } => EXIT_USAGE,
    }
}

fn fail(err: &GandhiError) -> u8 {
    eprintln!("error: {err}");
    exit_code(err)
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NextRecord {
    pub n: usize,
    pub p_next: u64,
    pub strategy: &'static str,
    pub theta_num: Option<String>,
    pub theta_den: Option<String>,
    pub precision_bits: Option<u64>,
    pub elapsed_ms: f64,
    pub inconclusive_rounds: u32,
    /// Interval endpoints as `mantissa · 2^exponent`.
    pub theta_lo_mantissa: Option<String>,
    pub theta_hi_mantissa: Option<String>,
    pub theta_exponent: Option<i64>,
}

impl NextRecord {
    fn new(next: &NextPrime, exact: Option<&Rational>, elapsed_ms: f64) -> Self {
        let enclosure = next.theta.enclosure.as_ref();
        NextRecord {
            n: next.n,
            p_next: next.prime,
            strategy: next.strategy.as_str(),
            theta_num: exact.map(|q| q.numer().to_string()),
            theta_den: exact.map(|q| q.denom().to_string()),
            precision_bits: next.precision_bits(),
            elapsed_ms,
            inconclusive_rounds: next.inconclusive_rounds,
            theta_lo_mantissa: enclosure.map(|e| e.lo().mantissa().to_string()),
            theta_hi_mantissa: enclosure.map(|e| e.hi().mantissa().to_string()),
            theta_exponent: enclosure.map(|e| -(e.frac_bits() as i64)),
        }
    }
}

impl Record for NextRecord {
    fn plain(&self) -> String {
        let theta = match (&self.theta_num, &self.theta_den) {
            (Some(n), Some(d)) => format!("{}/{}", abbreviate(n), abbreviate(d)),
            _ => "-".into(),
        };
        let precision = self
            .precision_bits
            .map_or_else(|| "-".into(), |b| b.to_string());
        format!(
            "n={} p_next={} strategy={} precision={} theta={} elapsed_ms={:.3}",
            self.n, self.p_next, self.strategy, precision, theta, self.elapsed_ms
        )
    }
}

/// `next N`: one application of the formula to the sieve's `p_1..p_n`.
pub fn cmd_next<W: Write>(n: usize, cfg: &RunConfig, out: &mut Emitter<W>) -> io::Result<u8> {
    let eval = cfg.eval();
    let table = PrimeTable::first(n.max(1));
    let start = Instant::now();
    let next = match next_prime_gandhi(n, &table, cfg.strategy, &eval) {
        Ok(next) => next,
        Err(e) => return Ok(fail(&e)),
    };
    let elapsed = millis(start);
    let exact = match (&next.theta.exact, &next.theta.enclosure) {
        (Some(q), _) => Some(q.clone()),
        // Interval run: attach the exact value when the budget allows, and
        // check that the enclosure really contains it.
        (None, Some(enclosure)) if cfg.cross_check => match theta_exact_coprime(n, &table, &eval) {
            Ok(theta) => {
                let q = theta.exact.expect("exact strategy sets exact");
                if !enclosure.contains(&q) {
                    eprintln!("error: enclosure {enclosure} misses exact θ({n}) = {}", fraction(&q));
                    return Ok(EXIT_ORACLE_MISMATCH);
                }
                Some(q)
            }
            Err(e) if e.is_resource() => None,
            Err(e) => return Ok(fail(&e)),
        },
        _ => None,
    };
    out.emit(&NextRecord::new(&next, exact.as_ref(), elapsed))?;
    Ok(EXIT_OK)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequenceRecord {
    pub index: usize,
    pub prime: u64,
    pub source: &'static str,
    pub strategy: &'static str,
    pub precision_bits: Option<u64>,
    pub inconclusive_rounds: u32,
    pub elapsed_ms: f64,
}

impl Record for SequenceRecord {
    fn plain(&self) -> String {
        let precision = self
            .precision_bits
            .map_or_else(|| "-".into(), |b| b.to_string());
        format!(
            "{:>4} {:>8}  {:<7} {:<13} precision={} elapsed_ms={:.3}",
            self.index, self.prime, self.source, self.strategy, precision, self.elapsed_ms
        )
    }
}

/// `sequence COUNT`: bootstrap from 2, one row per prime, partial output on failure.
pub fn cmd_sequence<W: Write>(count: usize, cfg: &RunConfig, out: &mut Emitter<W>) -> io::Result<u8> {
    if count == 0 {
        eprintln!("error: sequence length must be at least 1");
        return Ok(EXIT_USAGE);
    }
    let eval = cfg.eval();
    let strategy = cfg.strategy.as_str();
    let mut io_error = None;
    let mut tick = Instant::now();
    let result = gandhi_sequence_with(count, cfg.strategy, &eval, |step| {
        let record = SequenceRecord {
            index: step.index,
            prime: step.prime,
            source: if step.computed.is_some() { "formula" } else { "seed" },
            strategy,
            precision_bits: step.computed.as_ref().and_then(NextPrime::precision_bits),
            inconclusive_rounds: step.computed.as_ref().map_or(0, |c| c.inconclusive_rounds),
            elapsed_ms: millis(tick),
        };
        if io_error.is_none() {
            io_error = out.emit(&record).err();
        }
        tick = Instant::now();
    });
    if let Some(e) = io_error {
        return Err(e);
    }
    match result {
        Ok(_) => Ok(EXIT_OK),
        Err(e) => {
            eprintln!("error: {e}");
            Ok(exit_code(&e.source))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyRecord {
    pub suite: &'static str,
    pub instance: String,
    pub lhs: String,
    pub relation: &'static str,
    pub rhs: String,
    pub residual: String,
    pub pass: bool,
}

impl Record for VerifyRecord {
    fn plain(&self) -> String {
        format!(
            "{} {:<10} {:<28} {} {} {} (residual {})",
            if self.pass { "PASS" } else { "FAIL" },
            self.suite,
            self.instance,
            abbreviate(&self.lhs),
            self.relation,
            abbreviate(&self.rhs),
            abbreviate(&self.residual),
        )
    }
}

/// Shortens huge fractions for terminal output; json/csv keep full digits.
fn abbreviate(s: &str) -> String {
    const KEEP: usize = 24;
    if s.len() <= 2 * KEEP + 3 {
        return s.to_string();
    }
    format!("{}...{} ({} chars)", &s[..KEEP], &s[s.len() - KEEP..], s.len())
}

impl From<IdentityCheckResult> for VerifyRecord {
    fn from(r: IdentityCheckResult) -> Self {
        VerifyRecord {
            suite: r.identity,
            instance: r.instance,
            lhs: fraction(&r.lhs),
            relation: if r.expected_residual.is_some() { "=" } else { "<" },
            rhs: fraction(&r.rhs),
            residual: fraction(&r.residual),
            pass: r.pass,
        }
    }
}

/// Default ranges per suite.
struct Ranges {
    a_max: u32,
    k_max: u32,
    theorem53: IndexRange,
    theorem54: IndexRange,
    mobius_max: u64,
    tail_cutoff_max: u64,
    tail_primes: IndexRange,
    bounds: IndexRange,
    gaps: IndexRange,
}

impl Ranges {
    fn from_args(args: &VerifyArgs) -> Self {
        let r = |a, b| IndexRange { start: a, end: b };
        let n = |default| if args.suite == Suite::All { default } else { args.n.unwrap_or(default) };
        Ranges {
            a_max: args.a_max.unwrap_or(64),
            k_max: args.k_max.unwrap_or(64),
            theorem53: n(r(1, 5)),
            theorem54: n(r(0, 64)),
            mobius_max: args.max.unwrap_or(10_000),
            tail_cutoff_max: args.cutoff_max.unwrap_or(64),
            tail_primes: n(r(1, 4)),
            bounds: n(r(1, 8)),
            gaps: n(r(1, 1000)),
        }
    }
}

fn suite_records(suite: Suite, ranges: &Ranges, cfg: &RunConfig) -> Result<Vec<VerifyRecord>, GandhiError> {
    let eval = cfg.eval();
    let mut rows = Vec::new();
    match suite {
        Suite::Geometric => {
            for a in 1..=ranges.a_max {
                for k in 1..=ranges.k_max {
                    rows.push(verify_geometric_identity(a, k)?.into());
                }
            }
        }
        Suite::Theorem53 => {
            for n in ranges.theorem53.iter() {
                rows.push(verify_theorem_53(n as usize, &eval)?.into());
            }
        }
        Suite::Theorem54 => {
            for n in ranges.theorem54.iter() {
                let n = u32::try_from(n).map_err(|_| GandhiError::Domain("n too large".into()))?;
                rows.push(verify_theorem_54(n).into());
            }
        }
        Suite::Mobius => {
            rows.extend(verify_mobius_sum(ranges.mobius_max)?.into_iter().map(Into::into));
        }
        Suite::Tailbound => {
            for k in ranges.tail_primes.iter() {
                for cutoff in 1..=ranges.tail_cutoff_max {
                    rows.push(verify_coprime_tail_bound(cutoff, k as usize, &eval)?.into());
                }
            }
        }
        Suite::Bounds => {
            let table = PrimeTable::first(ranges.bounds.end as usize + 1);
            for n in ranges.bounds.iter() {
                let report = bounds_report(n as usize, &table, &eval)?;
                for check in report.checks {
                    let residual = Rational::from(&check.right - &check.left);
                    rows.push(VerifyRecord {
                        suite: "bounds",
                        instance: format!("n={n}:{}", check.name),
                        lhs: fraction(&check.left),
                        relation: check.relation.symbol(),
                        rhs: fraction(&check.right),
                        residual: fraction(&residual),
                        pass: check.pass,
                    });
                }
            }
        }
        Suite::Gaps => {
            let table = PrimeTable::first(ranges.gaps.end as usize + 2);
            for n in ranges.gaps.iter() {
                let n = n as usize;
                let (below_double, gap_two) = verify_gap_facts(n, &table)?;
                let (next, after) = (table.nth(n + 1).unwrap(), table.nth(n + 2).unwrap());
                rows.push(VerifyRecord {
                    suite: "gaps",
                    instance: format!("n={n}:below_double"),
                    lhs: after.to_string(),
                    relation: "<",
                    rhs: (2 * next).to_string(),
                    residual: (2 * next - after).to_string(),
                    pass: below_double,
                });
                rows.push(VerifyRecord {
                    suite: "gaps",
                    instance: format!("n={n}:gap_at_least_two"),
                    lhs: after.to_string(),
                    relation: ">=",
                    rhs: (next + 2).to_string(),
                    residual: (after as i64 - (next + 2) as i64).to_string(),
                    pass: gap_two,
                });
            }
        }
        Suite::All => unreachable!("expanded by cmd_verify"),
    }
    Ok(rows)
}

/// `verify SUITE`: exit 0 iff every emitted check passes.
pub fn cmd_verify<W: Write>(args: &VerifyArgs, cfg: &RunConfig, out: &mut Emitter<W>) -> io::Result<u8> {
    let ranges = Ranges::from_args(args);
    let suites = match args.suite {
        Suite::All => vec![
            Suite::Geometric,
            Suite::Theorem53,
            Suite::Theorem54,
            Suite::Mobius,
            Suite::Tailbound,
            Suite::Bounds,
            Suite::Gaps,
        ],
        one => vec![one],
    };
    let mut tally = Tally::default();
    for suite in suites {
        match suite_records(suite, &ranges, cfg) {
            Ok(rows) => tally.emit_all(&rows, out)?,
            Err(e) => return Ok(fail(&e)),
        }
    }
    eprintln!("{} checks, {} failed", tally.total, tally.failed);
    Ok(tally.exit_code())
}

#[derive(Default)]
struct Tally {
    total: usize,
    failed: usize,
}

impl Tally {
    fn emit_all<W: Write>(&mut self, rows: &[VerifyRecord], out: &mut Emitter<W>) -> io::Result<()> {
        for row in rows {
            self.total += 1;
            self.failed += usize::from(!row.pass);
            out.emit(row)?;
        }
        Ok(())
    }

    fn exit_code(&self) -> u8 {
        if self.failed == 0 {
            EXIT_OK
        } else {
            EXIT_VERIFY_FAILED
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub n: usize,
    pub strategy: &'static str,
    pub status: String,
    pub prime: Option<u64>,
    pub term_count: String,
    pub precision_bits: Option<u64>,
    /// Bit size of the largest operand: `P` for `2^P − 1`, or the precision.
    pub denominator_bits: String,
    pub elapsed_ms: Option<f64>,
}

impl Record for BenchRecord {
    fn plain(&self) -> String {
        format!(
            "n={:<3} {:<13} {:<16} prime={:<6} terms={:<8} precision={:<6} bits={:<12} elapsed_ms={}",
            self.n,
            self.strategy,
            self.status,
            self.prime.map_or_else(|| "-".into(), |p| p.to_string()),
            self.term_count,
            self.precision_bits.map_or_else(|| "-".into(), |b| b.to_string()),
            self.denominator_bits,
            self.elapsed_ms.map_or_else(|| "-".into(), |t| format!("{t:.3}")),
        )
    }
}

fn bench_cell(n: usize, strategy: Strategy, table: &PrimeTable, cfg: &RunConfig) -> BenchRecord {
    let eval = cfg.eval();
    let p_bits = primorial(n, table)
        .map(|p| p.value.to_string())
        .unwrap_or_default();
    let mut record = BenchRecord {
        n,
        strategy: strategy.as_str(),
        status: String::new(),
        prime: None,
        term_count: (gandhi_core::Integer::from(1) << n as u32).to_string(),
        precision_bits: None,
        denominator_bits: p_bits,
        elapsed_ms: None,
    };
    let start = Instant::now();
    match next_prime_gandhi(n, table, strategy, &eval) {
        Ok(next) => {
            record.elapsed_ms = Some(millis(start));
            record.status = "ok".into();
            record.prime = Some(next.prime);
            record.precision_bits = next.precision_bits();
            record.denominator_bits = next.theta.denominator_bits.to_string();
        }
        Err(GandhiError::Budget { .. }) => record.status = "skipped: budget".into(),
        Err(e) => record.status = format!("error: {e}"),
    }
    record
}

/// `bench`: every strategy at every n in range; infeasible cells are marked, not fatal.
pub fn cmd_bench<W: Write>(args: &BenchArgs, cfg: &RunConfig, out: &mut Emitter<W>) -> io::Result<u8> {
    if args.n.start == 0 {
        eprintln!("error: bench range must start at n ≥ 1");
        return Ok(EXIT_USAGE);
    }
    let table = PrimeTable::first(args.n.end as usize + 1);
    for n in args.n.iter() {
        for strategy in Strategy::ALL {
            out.emit(&bench_cell(n as usize, strategy, &table, cfg))?;
        }
    }
    Ok(EXIT_OK)
}
