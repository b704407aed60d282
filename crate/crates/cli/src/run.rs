//! Subcommand drivers. Work is split into independent tasks (per prime, or
//! per identity), run on a bounded pool, and merged in task order.

use std::sync::Arc;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use supercong_core::congruences::{
    corollary_check, d_alt_check, special_value_check, xd_check, yeah_check, yp_check,
    KernelContext, TheoremContext,
};
use supercong_core::cyclotomic::FiniteFieldChars;
use supercong_core::identities::{
    rec_final_variants, verify_certificate, verify_combinations, verify_identity,
    verify_recurrence, verify_solutions, Certificate, Memo, RecurrenceId,
};
use supercong_core::modarith::odd_primes_up_to;
use supercong_core::padic::{
    half_gamma_square_check, mandy_check, verify_gamma_table, verify_lemma_bc, verify_lemma_har,
    verify_lemma_har_with, GammaTable,
};
use supercong_core::report::Sweep;
use supercong_core::{CheckReport, RingDesc};

use crate::config::*;
use crate::error::{CliError, CliResult};
use crate::output::{Row, RunReport};

type Task<'a> = Box<dyn Fn() -> CliResult<Vec<CheckReport>> + Send + Sync + 'a>;

/// Map over `items` on `jobs` workers; results keep the input order.
fn par_map<T, R, F>(items: &[T], jobs: usize, f: F) -> CliResult<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> CliResult<R> + Sync + Send,
{
    if jobs <= 1 {
        return items.iter().map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Pool(e.to_string()))?;
    pool.install(|| items.par_iter().map(f).collect())
}

fn execute(tasks: Vec<Task<'_>>, jobs: usize) -> CliResult<Vec<CheckReport>> {
    let nested = par_map(&tasks, jobs, |t| t())?;
    Ok(nested.into_iter().flatten().collect())
}

/// Run the configured subcommand and assemble its report.
pub fn run(cfg: &RunConfig) -> CliResult<RunReport> {
    cfg.validate()?;
    let start = Instant::now();
    let mut report = match cfg.command {
        Command::Report if cfg.input.is_some() => {
            let path = cfg.input.as_ref().expect("checked");
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            let mut report = crate::output::parse_json(&text)?;
            report.summary = crate::output::Summary::tally(&report.checks);
            return Ok(report);
        }
        _ => RunReport::new(cfg.echo(), collect(cfg)?.iter().map(Row::from).collect()),
    };
    if !cfg.no_timestamp {
        report.version = Some(env!("CARGO_PKG_VERSION").to_string());
        report.timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs());
        report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

fn collect(cfg: &RunConfig) -> CliResult<Vec<CheckReport>> {
    match cfg.command {
        Command::Corollary => cmd_corollary(cfg),
        Command::Theorem => cmd_theorem(cfg),
        Command::Lemmas => cmd_lemmas(cfg),
        Command::Identities => cmd_identities(cfg),
        Command::Report => {
            let mut out = Vec::new();
            for command in [
                Command::Corollary,
                Command::Theorem,
                Command::Lemmas,
                Command::Identities,
            ] {
                let sub = RunConfig {
                    command,
                    ..cfg.clone()
                };
                out.extend(collect(&sub)?);
            }
            Ok(out)
        }
    }
}

pub fn cmd_corollary(cfg: &RunConfig) -> CliResult<Vec<CheckReport>> {
    let max_p = cfg.max_prime.unwrap_or(COROLLARY_PRIME_GUARD);
    cfg.guard("--max-prime", max_p, COROLLARY_PRIME_GUARD)?;
    let ks = cfg.mod_power.map_or_else(|| vec![3, 4], |k| vec![k]);
    let tasks = odd_primes_up_to(max_p)
        .into_iter()
        .map(|p| {
            let ks = ks.clone();
            Box::new(move || {
                ks.iter()
                    .map(|&k| corollary_check(p, k).map_err(CliError::from))
                    .collect()
            }) as Task<'_>
        })
        .collect();
    execute(tasks, cfg.jobs)
}

fn chars_for(cfg: &RunConfig, p: u64) -> CliResult<FiniteFieldChars> {
    let chars = FiniteFieldChars::new(p)?;
    Ok(if cfg.force { chars.unguarded() } else { chars })
}

pub fn cmd_theorem(cfg: &RunConfig) -> CliResult<Vec<CheckReport>> {
    let max_p = cfg.max_prime.unwrap_or(ORACLE_PRIME_GUARD);
    cfg.guard("--max-prime", max_p, ORACLE_PRIME_GUARD)?;
    let ns = cfg.n.clone().unwrap_or_else(|| vec![1, 2, 3]);
    let primes = odd_primes_up_to(max_p);
    let contexts = par_map(&primes, cfg.jobs, |&p| {
        Ok(Arc::new(TheoremContext::with_chars(chars_for(cfg, p)?)?))
    })?;
    let mut tasks: Vec<Task<'_>> = Vec::new();
    for (ctx, &p) in contexts.iter().zip(&primes) {
        let lams = cfg.lambda.values(p);
        for &n in &ns {
            let ctx = Arc::clone(ctx);
            let lams = lams.clone();
            tasks.push(Box::new(move || Ok(ctx.theorem_sweep(n, &lams)?)));
        }
    }
    execute(tasks, cfg.jobs)
}

/// Fold per-lambda reports into one row for `(p, n)`.
fn fold(family: &str, p: u64, n: u64, reports: &[CheckReport]) -> CheckReport {
    let mut sweep = Sweep::new(CheckReport::new(family).prime(p).order(n));
    for r in reports {
        let label = format!("lambda = {}", r.lambda.unwrap_or(0));
        sweep.outcome(label, r.is_pass());
    }
    sweep.finish()
}

fn lemma_tasks(cfg: &RunConfig, p: u64) -> CliResult<Vec<CheckReport>> {
    let ns = cfg.n.clone().unwrap_or_else(|| vec![1, 2, 3, 4]);
    let odd: Vec<u64> = ns.iter().copied().filter(|n| n % 2 == 1).collect();
    let mut out = vec![verify_lemma_bc(p)?, half_gamma_square_check(p, 3)?];
    for &n in &odd {
        out.push(mandy_check(p, n)?);
    }
    for &n in &ns {
        out.push(yeah_check(p, n)?);
    }
    out.push(xd_check(p)?);
    out.push(yp_check(p)?);
    out.push(d_alt_check(p)?);
    if p <= TABLE_PROPERTY_GUARD {
        for k in 1..=3 {
            out.push(verify_gamma_table(&GammaTable::new(&RingDesc::new(p, k)?)?));
        }
    }
    if p < 7 {
        out.push(verify_lemma_har(p, &ns)?);
    } else if p <= CUBE_TABLE_GUARD || cfg.force {
        let kernel = KernelContext::new(p)?;
        let derivs = kernel.derivs().expect("p >= 7");
        out.push(verify_lemma_har_with(derivs, &ns)?);
        let lams = cfg.lambda.values(p);
        for &n in &odd {
            let per: Vec<CheckReport> = lams
                .iter()
                .map(|&l| kernel.assembly_check(n, l))
                .collect::<Result<_, _>>()?;
            out.push(fold("assembly", p, n, &per));
        }
        for &n in &ns {
            let per: Vec<CheckReport> = lams
                .iter()
                .map(|&l| kernel.equal_check(n, l))
                .collect::<Result<_, _>>()?;
            out.push(fold("equal", p, n, &per));
        }
    } else {
        out.push(
            CheckReport::new("lemma_har")
                .prime(p)
                .skipped(format!("p > {CUBE_TABLE_GUARD} needs --force")),
        );
    }
    if p <= SPECIAL_VALUE_GUARD {
        out.push(special_value_check(&FiniteFieldChars::new(p)?)?);
    }
    if cfg.nasty {
        let k = cfg.k.unwrap_or(3);
        if p <= ORACLE_PRIME_GUARD || cfg.force {
            let ctx = TheoremContext::with_chars(chars_for(cfg, p)?)?;
            for &n in &odd {
                out.push(ctx.nasty_check(n, k)?);
            }
        } else {
            out.push(
                CheckReport::new("nasty")
                    .prime(p)
                    .skipped(format!("p > {ORACLE_PRIME_GUARD} needs --force")),
            );
        }
    }
    Ok(out)
}

pub fn cmd_lemmas(cfg: &RunConfig) -> CliResult<Vec<CheckReport>> {
    let max_p = cfg.max_prime.unwrap_or(199);
    let tasks = odd_primes_up_to(max_p)
        .into_iter()
        .map(|p| Box::new(move || lemma_tasks(cfg, p)) as Task<'_>)
        .collect();
    execute(tasks, cfg.jobs)
}

pub fn cmd_identities(cfg: &RunConfig) -> CliResult<Vec<CheckReport>> {
    let (ids, certs) = match (&cfg.ids, &cfg.certs) {
        (None, None) => (IdSelection::all(), Certificate::ALL.to_vec()),
        (ids, certs) => (ids.clone().unwrap_or_default(), certs.clone().unwrap_or_default()),
    };
    let n_ids = cfg.max_n.unwrap_or(IDENTITY_N_GUARD);
    let n_certs = cfg.max_n.unwrap_or(CERT_N_GUARD);
    if !ids.is_empty() {
        cfg.guard("--max-n", n_ids, IDENTITY_N_GUARD)?;
    }
    if !certs.is_empty() {
        cfg.guard("--max-n (certificates)", n_certs, CERT_N_GUARD)?;
    }
    let n_rec = n_ids.min(RECURRENCE_N);
    let n_sol = n_ids.min(SOLUTION_N);
    let memo = Arc::new(Memo::new(n_ids.max(n_certs)));
    let mut tasks: Vec<Task<'_>> = Vec::new();
    for &id in &ids.identities {
        let m = Arc::clone(&memo);
        tasks.push(Box::new(move || Ok(vec![verify_identity(id, n_ids, &m)?])));
    }
    for &id in &ids.recurrences {
        let m = Arc::clone(&memo);
        tasks.push(Box::new(move || {
            let mut out = vec![verify_recurrence(id, n_rec, &m)?];
            if id == RecurrenceId::RecFinal {
                out.extend(rec_final_variants(n_rec, &m));
            }
            Ok(out)
        }));
    }
    if ids.solutions {
        let m = Arc::clone(&memo);
        tasks.push(Box::new(move || Ok(vec![verify_solutions(n_sol, &m)?])));
    }
    if ids.combinations {
        let m = Arc::clone(&memo);
        tasks.push(Box::new(move || Ok(verify_combinations(n_ids, &m)?)));
    }
    for &c in &certs {
        let m = Arc::clone(&memo);
        tasks.push(Box::new(move || Ok(vec![verify_certificate(c, n_certs, &m)?])));
    }
    execute(tasks, cfg.jobs)
}
