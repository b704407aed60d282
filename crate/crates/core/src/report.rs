//! Structured outcome of a single verification.

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;

use crate::modarith::Residue;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        }
    }

    pub fn parse(s: &str) -> Option<Status> {
        match s {
            "PASS" => Some(Status::Pass),
            "FAIL" => Some(Status::Fail),
            "SKIPPED" => Some(Status::Skipped),
            _ => None,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One side of a comparison: a residue representative or an exact rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckValue {
    Int(BigInt),
    Rational(BigRational),
}

impl fmt::Display for CheckValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckValue::Int(v) => write!(f, "{v}"),
            CheckValue::Rational(r) if r.is_integer() => write!(f, "{}", r.numer()),
            CheckValue::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl From<&Residue> for CheckValue {
    fn from(r: &Residue) -> Self {
        CheckValue::Int(BigInt::from_biguint(Sign::Plus, r.value().clone()))
    }
}

impl From<&BigRational> for CheckValue {
    fn from(r: &BigRational) -> Self {
        CheckValue::Rational(r.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub family: String,
    pub p: Option<u64>,
    pub n: Option<u64>,
    pub lambda: Option<u64>,
    pub modulus: Option<BigUint>,
    pub lhs: Option<CheckValue>,
    pub rhs: Option<CheckValue>,
    pub status: Status,
    /// Conjecture scans are reported but never count as failures.
    pub asserted: bool,
    pub note: String,
}

impl CheckReport {
    pub fn new(family: impl Into<String>) -> Self {
        CheckReport {
            family: family.into(),
            p: None,
            n: None,
            lambda: None,
            modulus: None,
            lhs: None,
            rhs: None,
            status: Status::Skipped,
            asserted: true,
            note: String::new(),
        }
    }

    pub fn prime(mut self, p: u64) -> Self {
        self.p = Some(p);
        self
    }

    pub fn order(mut self, n: u64) -> Self {
        self.n = Some(n);
        self
    }

    pub fn lambda(mut self, lam: u64) -> Self {
        self.lambda = Some(lam);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn informational(mut self) -> Self {
        self.asserted = false;
        self
    }

    pub fn compare_residues(mut self, lhs: &Residue, rhs: &Residue) -> Self {
        self.modulus = Some(lhs.ring().modulus().clone());
        self.status = if lhs == rhs { Status::Pass } else { Status::Fail };
        self.lhs = Some(lhs.into());
        self.rhs = Some(rhs.into());
        self
    }

    pub fn compare_rationals(mut self, lhs: &BigRational, rhs: &BigRational) -> Self {
        self.status = if lhs == rhs { Status::Pass } else { Status::Fail };
        self.lhs = Some(lhs.into());
        self.rhs = Some(rhs.into());
        self
    }

    pub fn skipped(mut self, reason: impl Into<String>) -> Self {
        self.status = Status::Skipped;
        self.note = reason.into();
        self
    }

    pub fn with_status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn is_fail(&self) -> bool {
        self.status == Status::Fail
    }

    /// A failure that should affect the exit code.
    pub fn is_asserted_fail(&self) -> bool {
        self.asserted && self.is_fail()
    }
}

/// Folds many pointwise comparisons into one report, keeping the first
/// failing witness (or the last passing point).
#[derive(Debug)]
pub struct Sweep {
    report: CheckReport,
    points: usize,
    failures: usize,
    first_failure: Option<String>,
}

impl Sweep {
    pub fn new(report: CheckReport) -> Self {
        Sweep {
            report,
            points: 0,
            failures: 0,
            first_failure: None,
        }
    }

    pub fn residues(&mut self, label: impl fmt::Display, lhs: &Residue, rhs: &Residue) -> bool {
        self.points += 1;
        let ok = lhs == rhs;
        if self.failures == 0 {
            self.report.modulus = Some(lhs.ring().modulus().clone());
            self.report.lhs = Some(lhs.into());
            self.report.rhs = Some(rhs.into());
        }
        self.record(ok, label);
        ok
    }

    pub fn rationals(
        &mut self,
        label: impl fmt::Display,
        lhs: &BigRational,
        rhs: &BigRational,
    ) -> bool {
        self.points += 1;
        let ok = lhs == rhs;
        if self.failures == 0 {
            self.report.lhs = Some(lhs.into());
            self.report.rhs = Some(rhs.into());
        }
        self.record(ok, label);
        ok
    }

    /// A point whose comparison happened elsewhere.
    pub fn outcome(&mut self, label: impl fmt::Display, ok: bool) -> bool {
        self.points += 1;
        self.record(ok, label);
        ok
    }

    fn record(&mut self, ok: bool, label: impl fmt::Display) {
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(label.to_string());
            }
        }
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn failures(&self) -> usize {
        self.failures
    }

    pub fn finish(self) -> CheckReport {
        self.finish_with(String::new())
    }

    pub fn finish_with(mut self, extra: impl Into<String>) -> CheckReport {
        let extra = extra.into();
        let mut note = match &self.first_failure {
            None => format!("{} points", self.points),
            Some(at) => format!(
                "{} of {} points failed; first at {at}",
                self.failures, self.points
            ),
        };
        if !extra.is_empty() {
            note.push_str("; ");
            note.push_str(&extra);
        }
        self.report.note = note;
        self.report.status = if self.failures > 0 {
            Status::Fail
        } else if self.points == 0 {
            Status::Skipped
        } else {
            Status::Pass
        };
        self.report
    }
}
