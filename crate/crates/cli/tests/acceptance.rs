//! Acceptance run: one line per criterion. Every comparison is exact
//! (tolerance 0); runtime budgets are asserted where stated.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use supercong::config::{parse_certs, Command, Format, LambdaPolicy, RunConfig};
use supercong::{emit, run, Row, RunReport};
use supercong_core::congruences::{special_value_check, yeah_check, KernelContext, TheoremContext};
use supercong_core::cyclotomic::FiniteFieldChars;
use supercong_core::modarith::odd_primes_up_to;
use supercong_core::padic::{
    half_gamma_square_check, verify_gamma_table, verify_lemma_bc, verify_lemma_har, GammaTable,
};
use supercong_core::{RingDesc, Status};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= budget, || format!("{what} took {t:?}, budget {budget:?}"))
}

fn config(command: Command) -> RunConfig {
    let mut c = RunConfig::new(command);
    c.no_timestamp = true;
    c
}

fn run_ok(cfg: &RunConfig) -> Result<RunReport, String> {
    run(cfg).map_err(|e| e.to_string())
}

fn first_bad(rows: &[Row]) -> String {
    rows.iter()
        .find(|r| r.status != "PASS")
        .map(|r| format!("{} p={:?} n={:?} lambda={:?}: {}", r.family, r.p, r.n, r.lambda, r.note))
        .unwrap_or_default()
}

fn corollary(k: u32, budget: Duration) -> Outcome {
    let mut cfg = config(Command::Corollary);
    cfg.max_prime = Some(5000);
    cfg.mod_power = Some(k);
    let start = Instant::now();
    let report = run_ok(&cfg)?;
    within(start, budget, "scan")?;
    let s = report.summary;
    ensure(s.pass == 668 && s.fail == 0 && s.skipped == 0, || {
        format!("{s:?}; {}", first_bad(&report.checks))
    })?;
    ensure(report.checks.iter().all(|r| r.asserted == (k <= 3)), || {
        "assertion flag does not match the precision".into()
    })?;
    ensure(report.exit_code() == 0, || "nonzero exit code".into())?;
    Ok(format!("{} of 668 odd primes < 5000 pass mod p^{k}", s.pass))
}

fn c1() -> Outcome {
    corollary(3, Duration::from_secs(60))
}

fn c2() -> Outcome {
    corollary(4, Duration::from_secs(120)).map(|m| format!("{m} (informational, exit-code neutral)"))
}

fn c3() -> Outcome {
    let mut cfg = config(Command::Theorem);
    cfg.max_prime = Some(31);
    cfg.n = Some(vec![1, 2, 3, 4, 5]);
    cfg.lambda = LambdaPolicy::All;
    let report = run_ok(&cfg)?;
    let expected: u64 = odd_primes_up_to(31).iter().map(|p| 5 * (p - 1)).sum();
    ensure(report.checks.len() as u64 == expected, || {
        format!("{} rows, expected {expected}", report.checks.len())
    })?;
    ensure(report.summary.pass as u64 == expected, || first_bad(&report.checks))?;
    ensure(report.checks.iter().all(|r| r.modulus.is_some()), || "missing modulus".into())?;
    Ok(format!("{expected} (p, n, lambda) points, p <= 31, n = 1..5, all lambda: exact mod p^3"))
}

fn c4() -> Outcome {
    let mut points = 0;
    for p in odd_primes_up_to(31) {
        let ctx = TheoremContext::new(p).map_err(|e| e.to_string())?;
        for n in [1, 3] {
            for k in [3, 4] {
                let r = ctx.nasty_check(n, k).map_err(|e| e.to_string())?;
                ensure(r.is_pass(), || format!("p = {p}, n = {n}, k = {k}: {}", r.note))?;
                points += p - 1;
            }
        }
    }
    Ok(format!("{points} comparisons, p <= 31, n in {{1, 3}}, mod p^3 and p^4"))
}

fn c5() -> Outcome {
    let mut bc = 0;
    for p in odd_primes_up_to(199) {
        let r = verify_lemma_bc(p).map_err(|e| e.to_string())?;
        ensure(r.is_pass(), || format!("binomial lemma at p = {p}: {}", r.note))?;
        bc += 1;
    }
    let mut har = 0;
    for p in odd_primes_up_to(97).into_iter().filter(|&p| p >= 7) {
        let r = verify_lemma_har(p, &[1, 2, 3, 4]).map_err(|e| e.to_string())?;
        ensure(r.is_pass(), || format!("harmonic lemma at p = {p}: {}", r.note))?;
        for n in 1..=4 {
            let y = yeah_check(p, n).map_err(|e| e.to_string())?;
            ensure(y.is_pass(), || format!("odd-square congruence at p = {p}, n = {n}"))?;
        }
        har += 1;
    }
    for p in [3, 5] {
        let r = verify_lemma_har(p, &[1]).map_err(|e| e.to_string())?;
        ensure(r.status == Status::Skipped, || format!("p = {p} not skipped"))?;
    }
    Ok(format!(
        "binomial/Gamma lemma at {bc} primes <= 199; A, B and odd-square congruences at {har} primes in [7, 97]; p = 3, 5 skipped"
    ))
}

fn c6() -> Outcome {
    let primes = odd_primes_up_to(61);
    for &p in &primes {
        let chars = FiniteFieldChars::new(p).map_err(|e| e.to_string())?;
        let r = special_value_check(&chars).map_err(|e| e.to_string())?;
        ensure(r.is_pass(), || format!("p = {p}"))?;
    }
    Ok(format!("p 2F1(1) = -(-1/p) at {} primes <= 61", primes.len()))
}

fn c7() -> Outcome {
    let mut cfg = config(Command::Identities);
    cfg.max_n = Some(200);
    cfg.ids = Some("all".parse().map_err(|e: supercong::CliError| e.to_string())?);
    let start = Instant::now();
    let report = run_ok(&cfg)?;
    within(start, Duration::from_secs(120), "identity suite")?;
    ensure(report.asserted_failures() == 0, || first_bad(&report.checks))?;
    let row = |fam: &str| report.checks.iter().find(|r| r.family == fam);
    for fam in [
        "COOL", "NEW", "OLD", "REL2", "SUMK", "SUMNPK", "SUMNMK", "ALGSUM1", "ALGSUM2", "AUX_INV",
        "AUX_HK", "CATALAN_STEP", "GAUSS_APL", "SHALF_EVEN", "SHALF_ODD",
    ] {
        let r = row(fam).ok_or_else(|| format!("{fam} missing"))?;
        ensure(r.status == "PASS" && r.n == Some(200), || format!("{fam}: {}", r.note))?;
    }
    for (fam, n) in [("REC_SUMNMK", 100), ("REC_ALG", 100), ("REC_SLAMBDA", 100), ("REC_FINAL", 100), ("REC_SOL", 50)] {
        let r = row(fam).ok_or_else(|| format!("{fam} missing"))?;
        ensure(r.status == "PASS" && r.n == Some(n), || format!("{fam}: {}", r.note))?;
    }
    for fam in ["REC_FINAL_PRINTED", "REC_FINAL_SWAPPED"] {
        let r = row(fam).ok_or_else(|| format!("{fam} missing"))?;
        ensure(!r.asserted, || format!("{fam} must be informational"))?;
    }
    Ok(format!(
        "15 identities for n = 1..200, recurrences for n <= 100, solution set for n <= 50; {} rows",
        report.checks.len()
    ))
}

fn c8() -> Outcome {
    let mut cfg = config(Command::Identities);
    cfg.max_n = Some(60);
    cfg.certs = Some(parse_certs("CERT_SUMNMK,CERT_ALG").map_err(|e| e.to_string())?);
    let report = run_ok(&cfg)?;
    ensure(report.checks.len() == 2, || format!("{} rows", report.checks.len()))?;
    for r in &report.checks {
        ensure(r.status == "PASS", || format!("{}: {}", r.family, r.note))?;
    }
    let notes: Vec<String> = report.checks.iter().map(|r| format!("{} ({})", r.family, r.note)).collect();
    Ok(format!("telescoping defect 0 at every valid point, n <= 60: {}", notes.join(", ")))
}

fn c9() -> Outcome {
    for p in odd_primes_up_to(31) {
        let f = FiniteFieldChars::new(p).map_err(|e| e.to_string())?;
        for n in 1..=5 {
            let powers = f.jacobi_powers(n);
            for lam in 1..p {
                f.hypergeometric_int_with(&powers, lam)
                    .map_err(|e| format!("integrality at p = {p}, n = {n}: {e}"))?;
            }
        }
    }
    for p in odd_primes_up_to(13) {
        let f = FiniteFieldChars::new(p).map_err(|e| e.to_string())?;
        let (phi, eps) = (f.table().quadratic(), f.table().trivial());
        for n in 1..=3u64 {
            for lam in 1..p {
                let d = f
                    .hypergeometric_def2(&vec![phi; n as usize + 1], &vec![eps; n as usize], lam)
                    .map_err(|e| e.to_string())?;
                let i = f.hypergeometric_int(n, lam).map_err(|e| e.to_string())?;
                let scaled = d * BigRational::from_integer(BigInt::from(p).pow(n as u32));
                ensure(scaled == BigRational::from_integer(i), || format!("oracles differ at p = {p}"))?;
            }
        }
        let ring = f.ring();
        for chi in f.table().all() {
            for psi in f.table().all() {
                if chi.is_trivial() || psi.is_trivial() || chi.mul(&psi).is_trivial() {
                    continue;
                }
                let j = f.jacobi_sum(&chi, &psi);
                ensure(ring.mul(&j, &ring.conj(&j)) == ring.from_int(p), || {
                    format!("|J|^2 != p at p = {p}")
                })?;
            }
        }
    }
    for p in odd_primes_up_to(11) {
        for k in 1..=3 {
            let ring = RingDesc::new(p, k).map_err(|e| e.to_string())?;
            let t = GammaTable::new(&ring).map_err(|e| e.to_string())?;
            let r = verify_gamma_table(&t);
            ensure(r.is_pass(), || format!("Gamma table p = {p}, k = {k}: {}", r.note))?;
        }
    }
    for p in odd_primes_up_to(199) {
        let r = half_gamma_square_check(p, 3).map_err(|e| e.to_string())?;
        ensure(r.is_pass(), || format!("Gamma(1/2)^2 at p = {p}"))?;
    }
    for p in odd_primes_up_to(31).into_iter().filter(|&p| p >= 7) {
        let k = KernelContext::new(p).map_err(|e| e.to_string())?;
        for n in [1, 3, 5] {
            for lam in 1..p {
                let r = k.assembly_check(n, lam).map_err(|e| e.to_string())?;
                ensure(r.is_pass(), || format!("assembly at p = {p}, n = {n}, lambda = {lam}"))?;
            }
        }
    }
    let mut cfg = config(Command::Lemmas);
    cfg.max_prime = Some(23);
    cfg.nasty = true;
    let serial = emit(&run_ok(&cfg)?, Format::Json).map_err(|e| e.to_string())?;
    let again = emit(&run_ok(&cfg)?, Format::Json).map_err(|e| e.to_string())?;
    cfg.jobs = 4;
    let parallel = emit(&run_ok(&cfg)?, Format::Json).map_err(|e| e.to_string())?;
    ensure(serial == again, || "repeated runs differ".into())?;
    ensure(serial == parallel, || "serial and parallel reports differ".into())?;
    Ok("integrality, two oracles, |J|^2 = p, Gamma table, Gamma(1/2)^2, assembly, determinism, jobs 1 = jobs 4".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("corollary mod p^3, all odd p < 5000", c1),
        ("corollary mod p^4, all odd p < 5000", c2),
        ("mod p^3 theorem, p <= 31, n <= 5", c3),
        ("Gamma-quotient expansion equals the character sum", c4),
        ("binomial/Gamma and harmonic lemmas", c5),
        ("special value p 2F1(1)", c6),
        ("identity suite", c7),
        ("telescoping certificates", c8),
        ("property suites", c9),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(e) => {
                failed += 1;
                ("FAIL", e)
            }
        };
        println!(
            "[{tag}] {}. {title}: {detail} (tolerance 0, {:.1}s)",
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
