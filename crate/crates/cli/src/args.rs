//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{parse_certs, parse_list, Command, Format, RunConfig};
use crate::error::CliResult;

#[derive(Debug, Parser)]
#[command(name = "supercong", version, about = "Exact verification of hypergeometric supercongruences over F_p")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Legendre-symbol supercongruence for every odd prime up to --max-prime
    Corollary(Common),
    /// Character-sum oracle against the mod p^3 right side over a (p, n, lambda) grid
    Theorem(Common),
    /// Gamma-function lemmas, harmonic congruences and kernel assembly
    Lemmas(Common),
    /// Harmonic-sum identities, recurrences and telescoping certificates
    Identities(Common),
    /// Run every family at default limits, or re-render a saved JSON report
    Report(Common),
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Largest prime to scan
    #[arg(long)]
    pub max_prime: Option<u64>,
    /// Precision k of the corollary check (1..=5)
    #[arg(long)]
    pub mod_power: Option<u32>,
    /// Orders n, comma separated
    #[arg(long)]
    pub n: Option<String>,
    /// `all` or a comma-separated list of lambda values
    #[arg(long, default_value = "all")]
    pub lambda: String,
    /// Largest n for identities and certificates
    #[arg(long)]
    pub max_n: Option<u64>,
    /// Identity ids (`all` or a comma-separated list)
    #[arg(long)]
    pub ids: Option<String>,
    /// Certificates (`all` or a comma-separated list)
    #[arg(long)]
    pub certs: Option<String>,
    /// Worker threads
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Lift the default size limits
    #[arg(long)]
    pub force: bool,
    /// Leave version, timestamp and wall time out of the report
    #[arg(long)]
    pub no_timestamp: bool,
    /// Also compare the Gamma-quotient expansion with the character sum
    #[arg(long)]
    pub nasty: bool,
    /// Precision for --nasty (3..=5)
    #[arg(long)]
    pub k: Option<u32>,
    /// Write the report here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Saved JSON report to re-render (report only)
    #[arg(long)]
    pub input: Option<PathBuf>,
}

impl Cli {
    pub fn into_config(self) -> CliResult<RunConfig> {
        let (command, c) = match self.command {
            Sub::Corollary(c) => (Command::Corollary, c),
            Sub::Theorem(c) => (Command::Theorem, c),
            Sub::Lemmas(c) => (Command::Lemmas, c),
            Sub::Identities(c) => (Command::Identities, c),
            Sub::Report(c) => (Command::Report, c),
        };
        let cfg = RunConfig {
            command,
            max_prime: c.max_prime,
            mod_power: c.mod_power,
            n: c.n.as_deref().map(parse_list).transpose()?,
            lambda: c.lambda.parse()?,
            max_n: c.max_n,
            ids: c.ids.as_deref().map(str::parse).transpose()?,
            certs: c.certs.as_deref().map(parse_certs).transpose()?,
            jobs: c.jobs,
            format: c.format,
            force: c.force,
            no_timestamp: c.no_timestamp,
            nasty: c.nasty,
            k: c.k,
            out: c.out,
            input: c.input,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::LambdaPolicy;

    fn parse(args: &[&str]) -> CliResult<RunConfig> {
        Cli::try_parse_from(args).expect("clap").into_config()
    }

    #[test]
    fn theorem_flags() {
        let c = parse(&["supercong", "theorem", "--max-prime", "7", "--n", "1,3", "--lambda", "2"])
            .unwrap();
        assert_eq!(c.command, Command::Theorem);
        assert_eq!(c.n, Some(vec![1, 3]));
        assert_eq!(c.lambda, LambdaPolicy::List(vec![2]));
    }

    #[test]
    fn bad_values_are_config_errors() {
        assert!(parse(&["supercong", "corollary", "--mod-power", "9"]).is_err());
        assert!(parse(&["supercong", "identities", "--ids", "NOPE"]).is_err());
        assert!(parse(&["supercong", "theorem", "--n", "1,x"]).is_err());
        assert!(parse(&["supercong", "theorem", "--input", "a.json"]).is_err());
    }
}
