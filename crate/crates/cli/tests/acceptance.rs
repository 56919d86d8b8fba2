//! Exit criteria. Each criterion prints one PASS/FAIL line; the test fails if
//! any criterion does.

use std::process::Command;
use std::time::{Duration, Instant};

use gandhi_core::dyadic::extract_next_prime;
use gandhi_core::identitylab::{verify_geometric_identity, verify_mobius_sum, verify_theorem_54};
use gandhi_core::numtheory::{mobius, sieve_primes, verify_gap_facts};
use gandhi_core::{
    next_prime_gandhi, next_prime_refined, theta_exact_coprime, theta_exact_divisor,
    theta_interval, EvalConfig, Extraction, Integer, PrimeTable, Rational, Strategy,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn gandhi(args: &[&str]) -> (i32, Vec<Value>, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_gandhi"))
        .args(args)
        .args(["--format", "json"])
        .output()
        .expect("run gandhi");
    let elapsed = start.elapsed();
    let rows = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).expect("json line"))
        .collect();
    (out.status.code().unwrap_or(-1), rows, elapsed)
}

fn pow2(exp: u32) -> Integer {
    Integer::from(1) << exp
}

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn criterion_1() -> Outcome {
    let (code, rows, elapsed) = gandhi(&["sequence", "20", "--strategy", "interval"]);
    check(code == 0, format!("exit code {code}"))?;
    let primes: Vec<u64> = rows.iter().map(|r| r["prime"].as_u64().unwrap()).collect();
    let oracle = sieve_primes(71).unwrap();
    check(primes == oracle.as_slice(), format!("got {primes:?}"))?;
    check(
        rows[1..].iter().all(|r| r["source"] == "formula"),
        "rows after the seed must come from the formula",
    )?;
    check(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!("2..71 in {elapsed:?}"))
}

fn criterion_2() -> Outcome {
    let table = PrimeTable::first(9);
    let cfg = EvalConfig::default();
    let start = Instant::now();
    for n in 1..=8 {
        let a = theta_exact_divisor(n, &table, &cfg).map_err(|e| e.to_string())?;
        let b = theta_exact_coprime(n, &table, &cfg).map_err(|e| e.to_string())?;
        let (a, b) = (a.exact.unwrap(), b.exact.unwrap());
        check(a == b, format!("θ({n}) differs between exact routes"))?;
        check(Rational::from(&a - &b) == 0, "nonzero residual")?;
    }
    let parity = start.elapsed();
    let (code, rows, elapsed) = gandhi(&["sequence", "9", "--strategy", "exact-divisor"]);
    check(code == 0, format!("exit code {code}"))?;
    check(rows.len() == 9, format!("{} rows", rows.len()))?;
    check(rows[8]["prime"] == 23, format!("last row {}", rows[8]))?;
    check(
        parity + elapsed < Duration::from_secs(300),
        format!("took {:?}", parity + elapsed),
    )?;
    Ok(format!("parity n=1..8 in {parity:?}, sequence 9 in {elapsed:?}"))
}

fn criterion_3() -> Outcome {
    // independent oracle: scan divisors, add reduced fractions one at a time
    let brute = |p: u64| {
        let mut acc = Rational::from((-1, 2));
        for d in (1..=p).filter(|d| p % d == 0) {
            acc += Rational::from((1, pow2(d as u32) - 1u32)) * i32::from(mobius(d).unwrap());
        }
        acc
    };
    let expected = [
        (1, 2, Rational::from((1, 6))),
        (2, 6, Rational::from((5, 126))),
        (3, 30, Rational::from((18_108_677u64, 2_147_483_646u64))),
    ];
    let table = PrimeTable::first(4);
    let cfg = EvalConfig::default();
    for (n, primorial, value) in &expected {
        check(brute(*primorial) == *value, format!("oracle disagrees with θ({n}) constant"))?;
        for theta in [
            theta_exact_divisor(*n, &table, &cfg),
            theta_exact_coprime(*n, &table, &cfg),
        ] {
            let got = theta.map_err(|e| e.to_string())?.exact.unwrap();
            check(got == *value, format!("θ({n}) = {got}"))?;
        }
    }
    Ok("θ(1)=1/6, θ(2)=5/126, θ(3)=18108677/2147483646".into())
}

fn criterion_4() -> Outcome {
    let (code, rows, elapsed) = gandhi(&["verify", "bounds", "--n", "1..8"]);
    check(code == 0, format!("exit code {code}"))?;
    check(rows.len() == 40, format!("{} rows", rows.len()))?;
    for n in 1..=8 {
        let mine: Vec<&Value> = rows
            .iter()
            .filter(|r| r["instance"].as_str().unwrap().starts_with(&format!("n={n}:")))
            .collect();
        check(mine.len() == 5, format!("n={n} has {} checks", mine.len()))?;
        check(mine.iter().all(|r| r["pass"] == true), format!("n={n} failed a bound"))?;
    }
    Ok(format!("5 inequalities × 8 values of n in {elapsed:?}"))
}

fn criterion_5() -> Outcome {
    let table = PrimeTable::first(20);
    let cfg = EvalConfig::default();
    let mut compared = 0;
    for n in 1..=19 {
        let strategies: &[Strategy] = if n <= 8 { &Strategy::ALL } else { &[Strategy::Interval] };
        for &s in strategies {
            let g = next_prime_gandhi(n, &table, s, &cfg).map_err(|e| e.to_string())?;
            let r = next_prime_refined(n, &table, s, &cfg).map_err(|e| e.to_string())?;
            check(g.prime == r.prime, format!("n={n} {s}: {} vs {}", g.prime, r.prime))?;
            compared += 1;
        }
    }
    Ok(format!("{compared} (n, strategy) pairs agree"))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mobius = verify_mobius_sum(10_000).map_err(|e| e.to_string())?;
    check(mobius.len() == 10_000 && mobius.iter().all(|r| r.pass), "Möbius sum failure")?;
    for a in 1..=64u32 {
        for k in 1..=64u32 {
            let r = verify_geometric_identity(a, k).map_err(|e| e.to_string())?;
            let tail = Rational::from((1, pow2(k * a))) / Rational::from(pow2(a) - 1u32);
            check(r.pass && r.residual == tail, format!("geometric a={a} K={k}"))?;
        }
    }
    for n in 0..=64 {
        let r = verify_theorem_54(n);
        check(r.pass && r.residual == 0, format!("tail sum n={n}"))?;
    }
    let table = PrimeTable::first(1002);
    for n in 1..=1000 {
        let facts = verify_gap_facts(n, &table).map_err(|e| e.to_string())?;
        check(facts == (true, true), format!("gap facts n={n}"))?;
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"))?;
    Ok(format!("all identity suites in {elapsed:?}"))
}

fn criterion_7() -> Outcome {
    let table = PrimeTable::first(8);
    let cfg = EvalConfig::default();
    let exact: Vec<Rational> = (1..=6)
        .map(|n| theta_exact_divisor(n, &table, &cfg).unwrap().exact.unwrap())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6a6e_6468);
    let mut conclusive = 0;
    for case in 0..500 {
        let n = rng.gen_range(1..=6usize);
        let bits = rng.gen_range(table.nth(n).unwrap()..=256);
        let coarse = theta_interval(n, &table, bits).map_err(|e| e.to_string())?;
        let enc = coarse.enclosure.unwrap();
        check(enc.contains(&exact[n - 1]), format!("case {case}: n={n} B={bits} misses θ"))?;
        let fine = theta_interval(n, &table, bits * 2).unwrap().enclosure.unwrap();
        check(fine.contains(&exact[n - 1]), format!("case {case}: n={n} B={} misses θ", bits * 2))?;
        if let Extraction::Prime(p) = extract_next_prime(&enc).map_err(|e| e.to_string())? {
            conclusive += 1;
            check(p == table.nth(n + 1).unwrap(), format!("case {case}: extracted {p}"))?;
            let again = extract_next_prime(&fine).map_err(|e| e.to_string())?;
            check(again == Extraction::Prime(p), format!("case {case}: unstable under doubling"))?;
        }
    }
    Ok(format!("500 cases sound, {conclusive} conclusive and stable"))
}

fn criterion_8() -> Outcome {
    let table = PrimeTable::first(5);
    let cfg = EvalConfig {
        initial_precision_bits: 8,
        ..EvalConfig::default()
    };
    let next = next_prime_gandhi(4, &table, Strategy::Interval, &cfg).map_err(|e| e.to_string())?;
    check(next.prime == 11, format!("got {}", next.prime))?;
    check(next.inconclusive_rounds >= 1, "no inconclusive round at 8 bits")?;
    let (code, rows, _) = gandhi(&["next", "4", "--precision", "8"]);
    check(code == 0 && rows[0]["p_next"] == 11, format!("cli: exit {code}"))?;
    check(
        rows[0]["inconclusive_rounds"].as_u64().unwrap_or(0) >= 1,
        "cli reported no inconclusive round",
    )?;
    Ok(format!(
        "{} inconclusive rounds, settled at {} bits",
        next.inconclusive_rounds,
        next.precision_bits().unwrap()
    ))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 interval sequence of 20 matches the sieve", criterion_1),
        ("2 exact strategy parity and exact sequence of 9", criterion_2),
        ("3 known exact values of θ", criterion_3),
        ("4 bound chain for n = 1..8", criterion_4),
        ("5 refined formula agrees for n = 1..19", criterion_5),
        ("6 identity suites", criterion_6),
        ("7 interval soundness, 500 random cases", criterion_7),
        ("8 precision escalation from 8 bits", criterion_8),
    ];
    let mut failures = Vec::new();
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(why) => {
                println!("FAIL  criterion {name}: {why}");
                failures.push(name);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
