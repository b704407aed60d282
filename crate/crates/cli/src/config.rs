//! Run configuration and its validation.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use supercong_core::identities::{Certificate, IdentityId, RecurrenceId};

use crate::error::{CliError, CliResult};

/// Largest prime for the character-sum oracle without `--force`.
pub const ORACLE_PRIME_GUARD: u64 = 31;
/// Largest prime for the special-value check; the integer oracle is cheap enough there.
pub const SPECIAL_VALUE_GUARD: u64 = 61;
/// Largest `n` for the identity suite without `--force`.
pub const IDENTITY_N_GUARD: u64 = 200;
/// Largest `n` for certificate grids without `--force`.
pub const CERT_N_GUARD: u64 = 60;
/// Largest prime for the corollary scan without `--force`.
pub const COROLLARY_PRIME_GUARD: u64 = 5000;
/// Largest prime for checks that need a Gamma table modulo `p^3`.
pub const CUBE_TABLE_GUARD: u64 = 97;
/// Gamma-table property sweep bound.
pub const TABLE_PROPERTY_GUARD: u64 = 11;
/// Recurrences and solution checks stop here even for larger `--max-n`.
pub const RECURRENCE_N: u64 = 100;
pub const SOLUTION_N: u64 = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Corollary,
    Theorem,
    Lemmas,
    Identities,
    Report,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Corollary => "corollary",
            Command::Theorem => "theorem",
            Command::Lemmas => "lemmas",
            Command::Identities => "identities",
            Command::Report => "report",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Human,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum LambdaPolicy {
    #[default]
    All,
    List(Vec<u64>),
}

impl LambdaPolicy {
    /// The values of `lambda` used at prime `p`, reduced into `[1, p)`;
    /// multiples of `p` are dropped.
    pub fn values(&self, p: u64) -> Vec<u64> {
        match self {
            LambdaPolicy::All => (1..p).collect(),
            LambdaPolicy::List(v) => {
                let mut out: Vec<u64> = v.iter().map(|l| l % p).filter(|&l| l != 0).collect();
                out.sort_unstable();
                out.dedup();
                out
            }
        }
    }
}

impl FromStr for LambdaPolicy {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(LambdaPolicy::All);
        }
        parse_list(s).map(LambdaPolicy::List)
    }
}

impl fmt::Display for LambdaPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaPolicy::All => f.write_str("all"),
            LambdaPolicy::List(v) => f.write_str(&join(v)),
        }
    }
}

/// Which identity-suite items to run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdSelection {
    pub identities: Vec<IdentityId>,
    pub recurrences: Vec<RecurrenceId>,
    pub solutions: bool,
    pub combinations: bool,
}

impl IdSelection {
    pub fn all() -> Self {
        IdSelection {
            identities: IdentityId::ALL.to_vec(),
            recurrences: RecurrenceId::ALL.to_vec(),
            solutions: true,
            combinations: true,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.identities.is_empty() && self.recurrences.is_empty() && !self.solutions && !self.combinations
    }

    pub fn names(&self) -> Vec<String> {
        let mut out: Vec<String> = self.identities.iter().map(|i| i.name().to_string()).collect();
        out.extend(self.recurrences.iter().map(|r| r.name().to_string()));
        if self.solutions {
            out.push("REC_SOL".into());
        }
        if self.combinations {
            out.push("COMBO".into());
        }
        out
    }
}

impl FromStr for IdSelection {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(IdSelection::all());
        }
        let mut sel = IdSelection::default();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if let Some(id) = IdentityId::parse(item) {
                sel.identities.push(id);
            } else if let Some(id) = RecurrenceId::parse(item) {
                sel.recurrences.push(id);
            } else if item.eq_ignore_ascii_case("REC_SOL") {
                sel.solutions = true;
            } else if item.eq_ignore_ascii_case("COMBO") {
                sel.combinations = true;
            } else {
                return Err(CliError::Config(format!("unknown identity id `{item}`")));
            }
        }
        sel.identities.sort();
        sel.identities.dedup();
        sel.recurrences.sort();
        sel.recurrences.dedup();
        Ok(sel)
    }
}

pub fn parse_certs(s: &str) -> CliResult<Vec<Certificate>> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(Certificate::ALL.to_vec());
    }
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let c = Certificate::parse(item)
            .ok_or_else(|| CliError::Config(format!("unknown certificate `{item}`")))?;
        out.push(c);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

pub fn parse_list(s: &str) -> CliResult<Vec<u64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| CliError::Config(format!("`{t}` is not a non-negative integer")))
        })
        .collect()
}

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub max_prime: Option<u64>,
    pub mod_power: Option<u32>,
    pub n: Option<Vec<u64>>,
    pub lambda: LambdaPolicy,
    pub max_n: Option<u64>,
    pub ids: Option<IdSelection>,
    pub certs: Option<Vec<Certificate>>,
    pub jobs: usize,
    pub format: Format,
    pub force: bool,
    pub no_timestamp: bool,
    pub nasty: bool,
    pub k: Option<u32>,
    pub out: Option<PathBuf>,
    pub input: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            max_prime: None,
            mod_power: None,
            n: None,
            lambda: LambdaPolicy::All,
            max_n: None,
            ids: None,
            certs: None,
            jobs: 1,
            format: Format::Json,
            force: false,
            no_timestamp: false,
            nasty: false,
            k: None,
            out: None,
            input: None,
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        if let Some(p) = self.max_prime {
            if p < 3 {
                return Err(CliError::Config(format!("--max-prime must be at least 3, got {p}")));
            }
        }
        for (flag, k) in [("--mod-power", self.mod_power), ("--k", self.k)] {
            if let Some(k) = k {
                if !(1..=5).contains(&k) {
                    return Err(CliError::Config(format!("{flag} must be in 1..=5, got {k}")));
                }
            }
        }
        if self.jobs == 0 {
            return Err(CliError::Config("--jobs must be at least 1".into()));
        }
        if let Some(ns) = &self.n {
            if ns.is_empty() || ns.contains(&0) {
                return Err(CliError::Config("--n needs positive orders".into()));
            }
        }
        if self.max_n == Some(0) {
            return Err(CliError::Config("--max-n must be positive".into()));
        }
        if self.input.is_some() && self.command != Command::Report {
            return Err(CliError::Config("--input is only valid with `report`".into()));
        }
        Ok(())
    }

    /// Guard `value <= limit` unless `--force`.
    pub fn guard(&self, what: &str, value: u64, limit: u64) -> CliResult<()> {
        if value > limit && !self.force {
            return Err(CliError::Config(format!(
                "{what} = {value} exceeds the default limit {limit}; pass --force to run anyway"
            )));
        }
        Ok(())
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            command: self.command,
            max_prime: self.max_prime,
            mod_power: self.mod_power,
            n: self.n.clone(),
            lambda: self.lambda.to_string(),
            max_n: self.max_n,
            ids: self.ids.as_ref().map(IdSelection::names),
            certs: self
                .certs
                .as_ref()
                .map(|c| c.iter().map(|c| c.name().to_string()).collect()),
            force: self.force,
            nasty: self.nasty,
            k: self.k,
        }
    }
}

/// The part of a configuration that determines report content; the worker
/// count and output destination are left out so that serial and parallel
/// runs produce identical reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub command: Command,
    pub max_prime: Option<u64>,
    pub mod_power: Option<u32>,
    pub n: Option<Vec<u64>>,
    pub lambda: String,
    pub max_n: Option<u64>,
    pub ids: Option<Vec<String>>,
    pub certs: Option<Vec<String>>,
    pub force: bool,
    pub nasty: bool,
    pub k: Option<u32>,
}
