//! Exact-rational verification of the harmonic-sum identities, the
//! recurrences they satisfy, and creative-telescoping certificates.
//!
//! Every sum is evaluated directly. To keep big sweeps cheap, harmonic
//! numbers are stored as integers over the common denominator
//! `d = lcm(1..M)`: `a1[j] = d H_j` and `a2[j] = d^2 H^(2)_j`, so inner sums
//! accumulate integers and normalise once.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::report::{CheckReport, Sweep};

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn qi(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

fn frac(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

fn sgn(n: u64) -> i64 {
    if n % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Shared tables for one sweep up to `n_max`.
#[derive(Clone, Debug)]
pub struct Memo {
    n_max: u64,
    fact: Vec<BigInt>,
    d: BigInt,
    d2: BigInt,
    a1: Vec<BigInt>,
    a2: Vec<BigInt>,
    h1: Vec<BigRational>,
    h2: Vec<BigRational>,
    cat: Vec<BigRational>,
    aux_fact: Vec<BigRational>,
    alt_sq: Vec<BigRational>,
}

impl Memo {
    /// Tables large enough for every identity at `n <= n_max`, every
    /// recurrence shift, and `S_{1/2}(2n+1)`.
    pub fn new(n_max: u64) -> Self {
        let m = 4 * n_max + 10;
        let mut d = BigInt::one();
        for j in 1..=m {
            d = d.lcm(&BigInt::from(j));
        }
        let d2 = &d * &d;
        let mut a1 = vec![BigInt::zero()];
        let mut a2 = vec![BigInt::zero()];
        for j in 1..=m {
            let jb = BigInt::from(j);
            a1.push(&a1[j as usize - 1] + &d / &jb);
            a2.push(&a2[j as usize - 1] + &d2 / (&jb * &jb));
        }
        let mut fact = vec![BigInt::one()];
        for j in 1..=2 * m + 4 {
            fact.push(&fact[j as usize - 1] * BigInt::from(j));
        }
        let h1 = a1.iter().map(|a| frac(a.clone(), d.clone())).collect();
        let h2 = a2.iter().map(|a| frac(a.clone(), d2.clone())).collect();
        let top = n_max as usize + 8;
        let mut cat = vec![q(0)];
        let mut aux_fact = vec![q(0)];
        let mut alt_sq = vec![q(0)];
        for i in 1..=top {
            let c = &fact[2 * i] / (&fact[i] * &fact[i]);
            cat.push(&cat[i - 1] + frac(c, BigInt::from(i)));
            aux_fact.push(
                &aux_fact[i - 1] + frac(&fact[i] * &fact[i], fact[2 + 2 * i].clone()),
            );
            alt_sq.push(&alt_sq[i - 1] + frac(BigInt::from(sgn(i as u64)), BigInt::from(i * i)));
        }
        Memo {
            n_max,
            fact,
            d,
            d2,
            a1,
            a2,
            h1,
            h2,
            cat,
            aux_fact,
            alt_sq,
        }
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn fact(&self, n: u64) -> &BigInt {
        &self.fact[n as usize]
    }

    pub fn binom(&self, n: u64, k: u64) -> BigInt {
        if k > n {
            return BigInt::zero();
        }
        &self.fact[n as usize] / (&self.fact[k as usize] * &self.fact[(n - k) as usize])
    }

    /// `H_n` exactly.
    pub fn h(&self, n: u64) -> &BigRational {
        &self.h1[n as usize]
    }

    /// `H^(2)_n` exactly.
    pub fn h2(&self, n: u64) -> &BigRational {
        &self.h2[n as usize]
    }

    /// `sum_{i=1}^n C(2i,i)/i`.
    pub fn catalan_sum(&self, n: u64) -> &BigRational {
        &self.cat[n as usize]
    }

    /// `sum_{i=1}^n i!^2/(2+2i)!`.
    pub fn aux_fact_sum(&self, n: u64) -> &BigRational {
        &self.aux_fact[n as usize]
    }

    /// `sum_{i=1}^n (-1)^i/i^2`.
    pub fn alt_square_sum(&self, n: u64) -> &BigRational {
        &self.alt_sq[n as usize]
    }

    /// `(-1)^k C(n+k,k) C(n,k)` for `k = 0..=n`.
    pub fn h_row(&self, n: u64) -> Vec<BigInt> {
        let mut row = Vec::with_capacity(n as usize + 1);
        let mut cur = BigInt::one();
        for k in 0..=n {
            row.push(cur.clone());
            if k < n {
                cur = -(cur * BigInt::from(n - k) * BigInt::from(n + k + 1))
                    / BigInt::from((k + 1) * (k + 1));
            }
        }
        row
    }

    fn check(&self, top: u64) -> Result<()> {
        if top as usize >= self.a1.len() {
            return Err(Error::Range(format!(
                "index {top} exceeds the tables built for n <= {}",
                self.n_max
            )));
        }
        Ok(())
    }
}

/// The harmonic-sum identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdentityId {
    Cool,
    New,
    Old,
    Rel2,
    Sumk,
    Sumnpk,
    Sumnmk,
    Algsum1,
    Algsum2,
    AuxInv,
    AuxHk,
    CatalanStep,
    GaussApl,
    ShalfEven,
    ShalfOdd,
}

impl IdentityId {
    pub const ALL: [IdentityId; 15] = [
        IdentityId::Cool,
        IdentityId::New,
        IdentityId::Old,
        IdentityId::Rel2,
        IdentityId::Sumk,
        IdentityId::Sumnpk,
        IdentityId::Sumnmk,
        IdentityId::Algsum1,
        IdentityId::Algsum2,
        IdentityId::AuxInv,
        IdentityId::AuxHk,
        IdentityId::CatalanStep,
        IdentityId::GaussApl,
        IdentityId::ShalfEven,
        IdentityId::ShalfOdd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::Cool => "COOL",
            IdentityId::New => "NEW",
            IdentityId::Old => "OLD",
            IdentityId::Rel2 => "REL2",
            IdentityId::Sumk => "SUMK",
            IdentityId::Sumnpk => "SUMNPK",
            IdentityId::Sumnmk => "SUMNMK",
            IdentityId::Algsum1 => "ALGSUM1",
            IdentityId::Algsum2 => "ALGSUM2",
            IdentityId::AuxInv => "AUX_INV",
            IdentityId::AuxHk => "AUX_HK",
            IdentityId::CatalanStep => "CATALAN_STEP",
            IdentityId::GaussApl => "GAUSS_APL",
            IdentityId::ShalfEven => "SHALF_EVEN",
            IdentityId::ShalfOdd => "SHALF_ODD",
        }
    }

    pub fn parse(s: &str) -> Option<IdentityId> {
        IdentityId::ALL.into_iter().find(|id| id.name().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `sum_k (-1)^k C(n+k,k) C(n,k) k H_{idx(k)}` for the three index maps.
fn k_harmonic_sum(m: &Memo, n: u64, idx: impl Fn(u64) -> u64) -> BigRational {
    let row = m.h_row(n);
    let mut acc = BigInt::zero();
    for (k, hk) in row.iter().enumerate() {
        let k = k as u64;
        acc += hk * BigInt::from(k) * &m.a1[idx(k) as usize];
    }
    frac(acc, m.d.clone())
}

/// `sum_{k=0}^n (-1)^k C(n+k,k) C(n,k) H_{idx(k)}`.
fn plain_harmonic_sum(m: &Memo, n: u64, idx: impl Fn(u64) -> u64) -> BigRational {
    let row = m.h_row(n);
    let mut acc = BigInt::zero();
    for (k, hk) in row.iter().enumerate() {
        acc += hk * &m.a1[idx(k as u64) as usize];
    }
    frac(acc, m.d.clone())
}

/// `sum_{k=1}^n (-1)^k / (C(n+k,k) C(n,k))`.
pub fn inverse_binomial_sum(m: &Memo, n: u64) -> BigRational {
    let row = m.h_row(n);
    let den = row.iter().skip(1).fold(BigInt::one(), |acc, c| acc.lcm(&c.abs()));
    let mut acc = BigInt::zero();
    for c in row.iter().skip(1) {
        acc += &den / c;
    }
    frac(acc, den)
}

/// `sum_{k=1}^n (-1)^k C(n+k,k) C(n,k) (2k^2 (H_{n+k}-H_k)^2 - k^2 (H2_{n+k}-H2_k))`.
pub fn algsum1_lhs(m: &Memo, n: u64) -> BigRational {
    let row = m.h_row(n);
    let mut acc = BigInt::zero();
    for (k, hk) in row.iter().enumerate() {
        let k = k as u64;
        let d1 = &m.a1[(n + k) as usize] - &m.a1[k as usize];
        let d2 = &m.a2[(n + k) as usize] - &m.a2[k as usize];
        acc += hk * BigInt::from(k * k) * (BigInt::from(2) * &d1 * &d1 - d2);
    }
    frac(acc, m.d2.clone())
}

/// The closed form of [`algsum1_lhs`].
pub fn algsum1_rhs(m: &Memo, n: u64) -> BigRational {
    let ni = n as i64;
    let s = q(sgn(n));
    let f = m.fact(n);
    let t1 = q((1 + ni) * (1 + ni) * (-2 - 2 * ni + ni * ni))
        * frac(f * f, BigInt::from(2) * m.fact(2 + 2 * n))
        * &s;
    let t2 = frac(BigInt::from(ni * (-4 + 11 * ni + 6 * ni * ni + 3 * ni * ni * ni)), 4.into()) * &s;
    let t3 = frac(BigInt::from(-(-1 + ni + ni * ni)), 2.into());
    let w = q(ni * ni * (1 + ni) * (1 + ni)) * &s;
    let t4 = frac(3.into(), 2.into()) * &w * m.aux_fact_sum(n);
    let t5 = &w * m.alt_square_sum(n);
    t1 + t2 + t3 + t4 + t5
}

/// `S_lambda(m) = sum_{k=0}^m (-lambda)^k C(m+k,k) C(m,k) (1 + 2k(H_{m+k} - H_k))`.
pub fn s_lambda(memo: &Memo, m: u64, lam: &BigRational) -> BigRational {
    let row = memo.h_row(m);
    let (num, den) = (lam.numer(), lam.denom());
    let mut acc = BigInt::zero();
    let mut lam_num = BigInt::one();
    let mut den_pow: Vec<BigInt> = Vec::with_capacity(m as usize + 1);
    let mut cur = BigInt::one();
    for _ in 0..=m {
        den_pow.push(cur.clone());
        cur *= den;
    }
    for (k, hk) in row.iter().enumerate() {
        let k64 = k as u64;
        // (-1)^k sign already in hk; lambda^k = num^k / den^k
        let inner = &memo.d + BigInt::from(2 * k64) * (&memo.a1[(m + k64) as usize] - &memo.a1[k]);
        acc += hk * &lam_num * &den_pow[m as usize - k] * inner;
        lam_num *= num;
    }
    frac(acc, &memo.d * &den_pow[m as usize])
}

fn poch(x: &BigRational, k: u64) -> BigRational {
    (0..k).fold(q(1), |acc, i| acc * (x + q(i as i64)))
}

/// Gauss-theorem identity at rational `x`: (direct sum, `2F1` form, closed form).
pub fn gauss_apl(n: u64, x: &BigRational) -> (BigRational, BigRational, BigRational) {
    let ni = n as i64;
    let mut direct = q(0);
    let mut t = q(1);
    for k in 0..n {
        t = t * q(k as i64 - ni) * q(ni + 1 + k as i64) / (q(k as i64 + 1) * (x + q(k as i64)));
        direct += &t * q(k as i64 + 1);
    }
    let pref = -q(ni * (ni + 1)) / x;
    let mut series = q(0);
    let mut t = q(1);
    let x1 = x + q(1);
    for k in 0..n {
        series += &t;
        t = t * q(1 - ni + k as i64) * q(ni + 2 + k as i64) / (q(k as i64 + 1) * (&x1 + q(k as i64)));
    }
    let closed = if n == 0 {
        q(0)
    } else {
        &pref * poch(&(x - q(ni + 1)), n - 1) / poch(&(x + q(1)), n - 1)
    };
    (direct, &pref * series, closed)
}

/// Points used for the Gauss-theorem identity.
pub fn gauss_points() -> [BigRational; 3] {
    [q(2), q(3), frac(5.into(), 2.into())]
}

/// Both sides of an identity at `n >= 1`.
pub fn eval_identity(id: IdentityId, n: u64, m: &Memo) -> Result<(BigRational, BigRational)> {
    if n == 0 {
        return Err(Error::Range("identities are stated for n >= 1".into()));
    }
    let top = match id {
        IdentityId::ShalfEven | IdentityId::ShalfOdd => 4 * n + 2,
        _ => 2 * n + 2,
    };
    m.check(top)?;
    let ni = n as i64;
    let s = q(sgn(n));
    let hn = m.h(n);
    let cbin = qi(&m.binom(2 * n, n));
    Ok(match id {
        IdentityId::Cool => {
            let row = m.h_row(n);
            let mut acc = BigInt::zero();
            for (k, hk) in row.iter().enumerate() {
                let k = k as u64;
                acc += hk
                    * (&m.d
                        + BigInt::from(2 * k) * (&m.a1[(n + k) as usize] - &m.a1[k as usize]));
            }
            (frac(acc, m.d.clone()), &s * q(2 * ni + 1))
        }
        IdentityId::New => {
            let lhs = algsum1_lhs(m, n) + inverse_binomial_sum(m, n);
            (lhs, q(ni * (2 * ni - 1)) * &s)
        }
        IdentityId::Old => {
            let lhs: BigInt = m.h_row(n).iter().skip(1).sum();
            (qi(&lhs), q(-1) + &s)
        }
        IdentityId::Rel2 => {
            let row = m.h_row(n);
            let mut acc = BigInt::zero();
            for (j, hj) in row.iter().enumerate() {
                let j = j as u64;
                let a = &m.a1[(n + j) as usize] + &m.a1[(n - j) as usize]
                    - BigInt::from(2) * &m.a1[j as usize];
                acc += hj * (&m.d + BigInt::from(j) * a);
            }
            let rhs = q(1 + 2 * ni) * &cbin * &s
                - frac(3.into(), 2.into()) * q(ni * (1 + ni)) * &s * m.catalan_sum(n);
            (frac(acc, m.d.clone()), rhs)
        }
        IdentityId::Sumk => (
            k_harmonic_sum(m, n, |k| k),
            &s * q(ni * (ni + 1)) * (q(2) * hn - q(1)),
        ),
        IdentityId::Sumnpk => (
            k_harmonic_sum(m, n, |k| n + k),
            &s * q(ni * (ni + 1)) * q(2) * hn - &s * q(ni * ni),
        ),
        IdentityId::Sumnmk => (k_harmonic_sum(m, n, |k| n - k), sumnmk_rhs(m, n)),
        IdentityId::Algsum1 => (algsum1_lhs(m, n), algsum1_rhs(m, n)),
        IdentityId::Algsum2 => (
            inverse_binomial_sum(m, n),
            q(ni * (2 * ni - 1)) * &s - algsum1_rhs(m, n),
        ),
        IdentityId::AuxInv => {
            let row = m.h_row(n);
            let mut lhs = q(0);
            for (i, hi) in row.iter().enumerate() {
                let d = BigInt::from((n + i as u64) * (n + i as u64));
                lhs += frac(hi.clone(), d);
            }
            let f = m.fact(n);
            let rhs = -(&s * frac(f * f, BigInt::from(n * n) * m.fact(2 * n)));
            (lhs, rhs)
        }
        IdentityId::AuxHk => (plain_harmonic_sum(m, n, |k| k), &s * q(2) * hn),
        IdentityId::CatalanStep => (
            m.catalan_sum(n + 1).clone(),
            m.catalan_sum(n) + frac(BigInt::from(2 * (2 * n + 1)), BigInt::from((n + 1) * (n + 1))) * &cbin,
        ),
        IdentityId::GaussApl => {
            let (direct, _, closed) = gauss_apl(n, &q(2));
            (direct, closed)
        }
        IdentityId::ShalfEven => {
            let half = frac(1.into(), 2.into());
            let f = m.fact(n);
            let rhs = &s * qi(&(BigInt::from(4).pow(n as u32) * f * f)) / qi(m.fact(2 * n));
            (s_lambda(m, 2 * n, &half), rhs)
        }
        IdentityId::ShalfOdd => {
            let half = frac(1.into(), 2.into());
            let f = m.fact(n);
            let lead = &s * frac(m.fact(2 * n).clone(), BigInt::from(4).pow(n as u32) * f * f);
            let rhs = lead * (q(2 * ni + 1) * (hn - m.h(2 * n)) - q(1));
            (s_lambda(m, 2 * n + 1, &half), rhs)
        }
    })
}

/// The closed form of `sum_k (-1)^k C(n+k,k) C(n,k) k H_{n-k}`.
pub fn sumnmk_rhs(m: &Memo, n: u64) -> BigRational {
    let ni = n as i64;
    let s = q(sgn(n));
    -(&s * q((ni + 1) * (ni + 1))) + &s * q(2 * ni + 1) * qi(&m.binom(2 * n, n))
        + q(2 * ni * (ni + 1)) * &s * m.h(n)
        - frac(3.into(), 2.into()) * q(ni * (ni + 1)) * &s * m.catalan_sum(n)
}

/// Check an identity for `1 <= n <= n_max`; the Gauss identity is checked
/// in all three forms at every point of [`gauss_points`], and the
/// harmonic-weight identity in both its `H_k` and `H_{n+k}` forms.
pub fn verify_identity(id: IdentityId, n_max: u64, m: &Memo) -> Result<CheckReport> {
    let mut sweep = Sweep::new(CheckReport::new(id.name()).order(n_max));
    for n in 1..=n_max {
        match id {
            IdentityId::GaussApl => {
                for x in gauss_points() {
                    let (a, b, c) = gauss_apl(n, &x);
                    sweep.rationals(format_args!("n = {n}, x = {x}"), &a, &c);
                    sweep.rationals(format_args!("n = {n}, x = {x} (2F1)"), &b, &c);
                }
            }
            IdentityId::AuxHk => {
                let (lhs, rhs) = eval_identity(id, n, m)?;
                sweep.rationals(format_args!("n = {n} (H_k)"), &lhs, &rhs);
                let alt = plain_harmonic_sum(m, n, |k| n + k);
                sweep.rationals(format_args!("n = {n} (H_n+k)"), &alt, &rhs);
            }
            _ => {
                let (lhs, rhs) = eval_identity(id, n, m)?;
                sweep.rationals(format_args!("n = {n}"), &lhs, &rhs);
            }
        }
    }
    Ok(sweep.finish())
}

/// Relations between closed forms: the two combination laws and the
/// split of the `NEW` right side.
pub fn verify_combinations(n_max: u64, m: &Memo) -> Result<Vec<CheckReport>> {
    let rhs = |id, n| eval_identity(id, n, m).map(|(_, r)| r);
    let mut cool = Sweep::new(CheckReport::new("COMBO_COOL").order(n_max));
    let mut rel2 = Sweep::new(CheckReport::new("COMBO_REL2").order(n_max));
    let mut new = Sweep::new(CheckReport::new("COMBO_NEW").order(n_max));
    for n in 1..=n_max {
        let old = rhs(IdentityId::Old, n)?;
        let npk = rhs(IdentityId::Sumnpk, n)?;
        let sk = rhs(IdentityId::Sumk, n)?;
        let nmk = rhs(IdentityId::Sumnmk, n)?;
        let c = q(1) + &old + q(2) * &npk - q(2) * &sk;
        cool.rationals(format_args!("n = {n}"), &c, &rhs(IdentityId::Cool, n)?);
        let r = q(1) + &old + &npk + &nmk - q(2) * &sk;
        rel2.rationals(format_args!("n = {n}"), &r, &rhs(IdentityId::Rel2, n)?);
        let split = rhs(IdentityId::Algsum1, n)? + rhs(IdentityId::Algsum2, n)?;
        new.rationals(format_args!("n = {n}"), &split, &rhs(IdentityId::New, n)?);
    }
    Ok(vec![
        cool.finish_with("1 + OLD + 2 SUMNPK - 2 SUMK = COOL"),
        rel2.finish_with("1 + OLD + SUMNPK + SUMNMK - 2 SUMK = REL2"),
        new.finish_with("ALGSUM1 + ALGSUM2 = NEW"),
    ])
}

/// Recurrences checked against directly summed sequences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RecurrenceId {
    RecSumnmk,
    RecSlambda,
    RecAlg,
    RecFinal,
}

impl RecurrenceId {
    pub const ALL: [RecurrenceId; 4] = [
        RecurrenceId::RecSumnmk,
        RecurrenceId::RecSlambda,
        RecurrenceId::RecAlg,
        RecurrenceId::RecFinal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RecurrenceId::RecSumnmk => "REC_SUMNMK",
            RecurrenceId::RecSlambda => "REC_SLAMBDA",
            RecurrenceId::RecAlg => "REC_ALG",
            RecurrenceId::RecFinal => "REC_FINAL",
        }
    }

    pub fn parse(s: &str) -> Option<RecurrenceId> {
        RecurrenceId::ALL.into_iter().find(|id| id.name().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for RecurrenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Sample parameters for the order-4 recurrence.
pub fn lambda_samples() -> [BigRational; 4] {
    [q(1), q(2), frac(1.into(), 2.into()), q(-1)]
}

/// Coefficients of the order-3 recurrence for `SUMNMK`: `(a, b, c, rhs)`
/// with `a S(n+2) + b S(n+1) + c S(n) = rhs`.
pub fn rec_sumnmk_coeffs(m: &Memo, n: u64) -> (BigRational, BigRational, BigRational, BigRational) {
    let ni = n as i64;
    let a = q((ni + 2) * (2 * ni + 1) * (ni + 1) * (ni + 1));
    let b = q(2 * (ni + 3) * (2 * ni * ni + 4 * ni + 1) * (ni + 1));
    let c = q((ni + 1) * (ni + 2) * (ni + 3) * (2 * ni + 3));
    let rhs = -q((2 * ni + 1) * (2 * ni + 3) * (3 * ni + 1) * (3 * ni + 4) * sgn(n))
        * qi(&m.binom(2 * n, n));
    (a, b, c, rhs)
}

fn s_lambda_coeffs(n: u64, lam: &BigRational) -> [BigRational; 5] {
    let ni = n as i64;
    let l2 = lam * lam;
    let t = q(2) * lam - q(1);
    [
        q((ni + 2) * (ni + 2)),
        &t * q(4 * ni * ni + 18 * ni + 21),
        &l2 * q(16 * ni * ni + 80 * ni + 100) - lam * q(16 * ni * ni + 80 * ni + 100)
            + q(6 * ni * ni + 30 * ni + 39),
        &t * q(4 * ni * ni + 22 * ni + 31),
        q((ni + 3) * (ni + 3)),
    ]
}

/// `sum_{k=0}^n f(n,k)` for `f(n,k) = h(n,k)(2k^2 dH^2 - k^2 dH2)`; equals
/// [`algsum1_lhs`] since the `k = 0` term vanishes.
fn alg_sum(m: &Memo, n: u64) -> BigRational {
    algsum1_lhs(m, n)
}

/// The right side of the order-1 recurrence before substituting the auxiliary sums.
fn rec_alg_rhs_raw(m: &Memo, n: u64) -> BigRational {
    let ni = n as i64;
    let row = m.h_row(n);
    let mut inv_sq = q(0);
    for (i, hi) in row.iter().enumerate() {
        inv_sq += frac(hi.clone(), BigInt::from((n + i as u64) * (n + i as u64)));
    }
    let plain: BigInt = row.iter().sum();
    let diff = plain_harmonic_sum(m, n, |i| n + i) - plain_harmonic_sum(m, n, |i| i);
    q(4 * (1 + 2 * ni))
        + q(ni * ni * (ni + 1) * (ni + 2) * (3 * ni + 2)) * inv_sq
        + q(2 * ni * (4 * ni * ni + 3 * ni - 4) * (2 * ni + 1)) * qi(&plain)
        + q(8 * (ni - 1) * ni * (ni + 1) * (ni + 2) * (2 * ni + 1)) * diff
}

fn rec_alg_rhs_substituted(m: &Memo, n: u64) -> BigRational {
    let ni = n as i64;
    let s = q(sgn(n));
    let f = m.fact(n);
    q(4 * (2 * ni + 1)) - &s * q((ni + 1) * (ni + 2) * (3 * ni + 2)) * frac(f * f, m.fact(2 * n).clone())
        + q(2 * ni * (2 * ni + 1) * (4 * ni * ni + 3 * ni - 4)) * &s
}

/// `(-1)^n (n+1)^2 (n+2)(3n+2) n!^2 / (2n+2)! - 2`.
pub fn rec_final_rhs(m: &Memo, n: u64) -> BigRational {
    let ni = n as i64;
    let f = m.fact(n);
    q(sgn(n) * (ni + 1) * (ni + 1) * (ni + 2) * (3 * ni + 2)) * frac(f * f, m.fact(2 * n + 2).clone())
        - q(2)
}

/// Check a recurrence for `1 <= n <= n_max`.
pub fn verify_recurrence(id: RecurrenceId, n_max: u64, m: &Memo) -> Result<CheckReport> {
    m.check(2 * n_max + 10)?;
    let mut sweep = Sweep::new(CheckReport::new(id.name()).order(n_max));
    match id {
        RecurrenceId::RecSumnmk => {
            let seq: Vec<BigRational> =
                (0..=n_max + 2).map(|n| k_harmonic_sum(m, n, |k| n - k)).collect();
            for n in 1..=n_max {
                let (a, b, c, rhs) = rec_sumnmk_coeffs(m, n);
                let i = n as usize;
                let lhs = a * &seq[i + 2] + b * &seq[i + 1] + c * &seq[i];
                sweep.rationals(format_args!("n = {n}"), &lhs, &rhs);
            }
            Ok(sweep.finish())
        }
        RecurrenceId::RecSlambda => {
            for lam in lambda_samples() {
                let seq: Vec<BigRational> =
                    (0..=n_max + 4).map(|k| s_lambda(m, k, &lam)).collect();
                for n in 1..=n_max {
                    let cs = s_lambda_coeffs(n, &lam);
                    let i = n as usize;
                    let lhs = cs
                        .iter()
                        .enumerate()
                        .fold(q(0), |acc, (r, c)| acc + c * &seq[i + r]);
                    sweep.rationals(format_args!("lambda = {lam}, n = {n}"), &lhs, &q(0));
                }
            }
            Ok(sweep.finish_with("lambda in {1, 2, 1/2, -1}"))
        }
        RecurrenceId::RecAlg => {
            let seq: Vec<BigRational> = (0..=n_max + 1).map(|n| alg_sum(m, n)).collect();
            for n in 1..=n_max {
                let ni = n as i64;
                let i = n as usize;
                let lhs = q(2 * (2 * ni + 1) * (ni + 2) * (ni + 2)) * &seq[i]
                    + q(2 * (2 * ni + 1) * ni * ni) * &seq[i + 1];
                sweep.rationals(format_args!("n = {n} (sums)"), &lhs, &rec_alg_rhs_raw(m, n));
                sweep.rationals(
                    format_args!("n = {n} (closed forms)"),
                    &lhs,
                    &rec_alg_rhs_substituted(m, n),
                );
            }
            Ok(sweep.finish())
        }
        RecurrenceId::RecFinal => {
            let fit = fit_order1(m, 3, 12)?;
            let mut extra = match &fit {
                Some(f) => format!("fitted {f}"),
                None => String::from("no order-1 fit with degree <= 3"),
            };
            for n in 1..=n_max {
                let (s0, s1) = (inverse_binomial_sum(m, n), inverse_binomial_sum(m, n + 1));
                let ni = n as i64;
                let lhs = q(ni * ni) * &s1 + q((ni + 2) * (ni + 2)) * &s0;
                sweep.rationals(format_args!("n = {n}"), &lhs, &rec_final_rhs(m, n));
            }
            extra.insert_str(0, "n^2 S(n+1) + (n+2)^2 S(n); ");
            Ok(sweep.finish_with(extra))
        }
    }
}

/// The printed closing recurrence and the shape suggested for it, evaluated
/// but never asserted.
pub fn rec_final_variants(n_max: u64, m: &Memo) -> Vec<CheckReport> {
    let mut printed = Sweep::new(CheckReport::new("REC_FINAL_PRINTED").order(n_max).informational());
    let mut swapped = Sweep::new(CheckReport::new("REC_FINAL_SWAPPED").order(n_max).informational());
    for n in 1..=n_max {
        let ni = n as i64;
        let (s0, s1) = (inverse_binomial_sum(m, n), inverse_binomial_sum(m, n + 1));
        let rhs = rec_final_rhs(m, n);
        printed.rationals(format_args!("n = {n}"), &(q(ni + 2 + ni * ni) * &s0), &rhs);
        let cand = q((ni + 2) * (ni + 2)) * &s1 + q(ni * ni) * &s0;
        swapped.rationals(format_args!("n = {n}"), &cand, &rhs);
    }
    vec![
        printed.finish_with("(n+2) S(n) + n^2 S(n)"),
        swapped.finish_with("(n+2)^2 S(n+1) + n^2 S(n)"),
    ]
}

/// Polynomial with rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<BigRational>);

impl Poly {
    pub fn eval(&self, n: i64) -> BigRational {
        self.0.iter().rev().fold(q(0), |acc, c| acc * q(n) + c)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = !a.is_one() || i == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("n")?,
                _ => write!(f, "n^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Order-1 recurrence `a(n) S(n+1) + b(n) S(n) = R(n)` for the inverse
/// binomial sum, found by exact linear algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Order1Fit {
    pub a: Poly,
    pub b: Poly,
}

impl fmt::Display for Order1Fit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) S(n+1) + ({}) S(n) = R(n)", self.a, self.b)
    }
}

/// Fit polynomial coefficients of degree `<= deg` from `equations` points;
/// `None` when the system is inconsistent or underdetermined.
pub fn fit_order1(m: &Memo, deg: usize, equations: u64) -> Result<Option<Order1Fit>> {
    let unknowns = 2 * (deg + 1);
    let mut rows = Vec::new();
    for n in 1..=equations {
        let s0 = inverse_binomial_sum(m, n);
        let s1 = inverse_binomial_sum(m, n + 1);
        let mut row = Vec::with_capacity(unknowns + 1);
        let mut pw = q(1);
        let mut bpart = Vec::new();
        for _ in 0..=deg {
            row.push(&pw * &s1);
            bpart.push(&pw * &s0);
            pw *= q(n as i64);
        }
        row.extend(bpart);
        row.push(rec_final_rhs(m, n));
        rows.push(row);
    }
    let sol = match solve_exact(rows, unknowns) {
        Some(s) => s,
        None => return Ok(None),
    };
    let fit = Order1Fit {
        a: Poly(sol[..=deg].to_vec()),
        b: Poly(sol[deg + 1..].to_vec()),
    };
    Ok(Some(fit))
}

/// Gaussian elimination over `Q` on an augmented matrix; the unique
/// solution, if any.
pub fn solve_exact(mut rows: Vec<Vec<BigRational>>, unknowns: usize) -> Option<Vec<BigRational>> {
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..unknowns {
        let Some(r) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, r);
        let inv = rows[pivot_row][col].recip();
        for c in col..=unknowns {
            rows[pivot_row][c] = &rows[pivot_row][c] * &inv;
        }
        for r in 0..rows.len() {
            if r != pivot_row && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..=unknowns {
                    let v = &factor * &rows[pivot_row][c];
                    rows[r][c] -= v;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if pivots.len() < unknowns {
        return None;
    }
    if rows[pivot_row..].iter().any(|r| !r[unknowns].is_zero()) {
        return None;
    }
    Some((0..unknowns).map(|i| rows[i][unknowns].clone()).collect())
}

/// The homogeneous solutions and particular solution of the `SUMNMK`
/// recurrence, and the combination matching the sum.
pub fn verify_solutions(n_max: u64, m: &Memo) -> Result<CheckReport> {
    m.check(2 * n_max + 10)?;
    let h1 = |n: u64| q(sgn(n) * (n as i64) * (1 + n as i64));
    let h2 = |n: u64| q(sgn(n) * (1 + n as i64)) * (q(-1) + q(2 * n as i64) * m.h(n));
    let part = |n: u64| {
        let ni = n as i64;
        -frac(BigInt::from(sgn(n)), 2.into())
            * (q(-2 * (1 + 2 * ni)) * qi(&m.binom(2 * n, n))
                + q(3 * ni * (1 + ni)) * m.catalan_sum(n))
    };
    let seq = |n: u64| k_harmonic_sum(m, n, |k| n - k);
    let mut sweep = Sweep::new(CheckReport::new("REC_SOL").order(n_max));
    for n in 1..=n_max {
        let (a, b, c, rhs) = rec_sumnmk_coeffs(m, n);
        let apply = |f: &dyn Fn(u64) -> BigRational| &a * f(n + 2) + &b * f(n + 1) + &c * f(n);
        sweep.rationals(format_args!("h1, n = {n}"), &apply(&h1), &q(0));
        sweep.rationals(format_args!("h2, n = {n}"), &apply(&h2), &q(0));
        sweep.rationals(format_args!("p, n = {n}"), &apply(&part), &rhs);
    }
    // pin c1, c2 from the first two values
    let rows = (1..=2u64)
        .map(|n| vec![h1(n), h2(n), seq(n) - part(n)])
        .collect();
    let Some(c) = solve_exact(rows, 2) else {
        sweep.outcome("initial values determine c1, c2", false);
        return Ok(sweep.finish());
    };
    for n in 1..=n_max {
        let comb = &c[0] * h1(n) + &c[1] * h2(n) + part(n);
        sweep.rationals(format_args!("combination, n = {n}"), &comb, &seq(n));
    }
    Ok(sweep.finish_with(format!("c1 = {}, c2 = {}", c[0], c[1])))
}

/// Creative-telescoping certificates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Certificate {
    /// Order-2 certificate for `SUMNMK`.
    CertSumnmk,
    /// Order-1 certificate for the `ALGSUM1` sum, with the rational part
    /// carrying the sign that makes the telescoping equation hold.
    CertAlg,
    /// The same certificate with the sign as printed; evaluated only.
    CertAlgPrinted,
}

impl Certificate {
    pub const ALL: [Certificate; 3] = [
        Certificate::CertSumnmk,
        Certificate::CertAlg,
        Certificate::CertAlgPrinted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Certificate::CertSumnmk => "CERT_SUMNMK",
            Certificate::CertAlg => "CERT_ALG",
            Certificate::CertAlgPrinted => "CERT_ALG_PRINTED",
        }
    }

    pub fn parse(s: &str) -> Option<Certificate> {
        Certificate::ALL.into_iter().find(|c| c.name().eq_ignore_ascii_case(s))
    }

    pub fn is_asserted(self) -> bool {
        !matches!(self, Certificate::CertAlgPrinted)
    }

    /// Coefficients `c_i(n)`.
    pub fn coefficients(self, n: u64) -> Vec<BigRational> {
        let ni = n as i64;
        match self {
            Certificate::CertSumnmk => vec![
                q((ni + 2) * (ni + 3) * (2 * ni + 3)),
                q(2 * (ni + 3) * (2 * ni * ni + 4 * ni + 1)),
                q((ni + 1) * (ni + 2) * (2 * ni + 1)),
            ],
            _ => vec![q(2 * (ni + 2) * (ni + 2) * (2 * ni + 1)), q(2 * ni * ni * (2 * ni + 1))],
        }
    }

    /// Summand `f(n, k)`.
    pub fn summand(self, m: &Memo, n: u64, k: u64) -> BigRational {
        if k > n {
            return q(0);
        }
        let hk = qi(&(BigInt::from(sgn(k)) * m.binom(n + k, k) * m.binom(n, k)));
        let ki = k as i64;
        match self {
            Certificate::CertSumnmk => hk * q(ki) * m.h(n - k),
            _ => {
                let d1 = m.h(n + k) - m.h(k);
                let d2 = m.h2(n + k) - m.h2(k);
                hk * (q(2 * ki * ki) * &d1 * &d1 - q(ki * ki) * d2)
            }
        }
    }

    /// `g(n, k)`, or `None` where a printed denominator vanishes.
    pub fn g(self, m: &Memo, n: u64, k: u64) -> Option<BigRational> {
        let (ni, ki) = (n as i64, k as i64);
        let hk = || qi(&(BigInt::from(sgn(k)) * m.binom(n + k, k) * m.binom(n, k)));
        match self {
            Certificate::CertSumnmk => {
                let den = (ni + 1) * (ni + 1 - ki).pow(2) * (ni + 2 - ki).pow(2);
                if den == 0 || k > n {
                    return None;
                }
                let hnk = m.h(n - k);
                let a = q(2 * (ki - ni - 2) * (ki - ni - 1) * (ni + 1))
                    * q(ki * (4 * ni + 7) - 2 * (2 * ni.pow(3) + 10 * ni * ni + 17 * ni + 10))
                    * hnk;
                let b = q(-ki - ni - 1)
                    * q(16 * ni.pow(4) + 88 * ni.pow(3) + 179 * ni * ni + 163 * ni
                        + 2 * ki * ki * (4 * ni * ni + 11 * ni + 7)
                        - ki * (24 * ni.pow(3) + 98 * ni * ni + 131 * ni + 59)
                        + 58);
                Some(q((ki - 1) * ki * ki) * (a + b) * hk() / q(den))
            }
            Certificate::CertAlg | Certificate::CertAlgPrinted => {
                let den = (1 - ki + ni) * ni * (1 + ni);
                if den == 0 || k > n {
                    return None;
                }
                let (hk1, hnk) = (m.h(k), m.h(n + k));
                let (h2k, h2nk) = (m.h2(k), m.h2(n + k));
                let t1 = q(4 * (ki - 1).pow(2) * ni * (ni + 1).pow(2) * (2 * ni + 1) * ki * ki)
                    * (q(2) * hk1 * hk1 - q(4) * hnk * hk1 + q(2) * hnk * hnk + h2k - h2nk);
                let t2 = q(ni * (ni + 2) * ki.pow(3) - (ni.pow(3) + 2 * ni * ni + 2 * ni + 2) * ki * ki
                    - (ni + 1).pow(2) * (ni * ni - 2) * ki
                    + ni * (ni + 1).pow(2) * (ni * ni + ni - 2))
                    * q(8 * ni * (ni + 1) * (2 * ni + 1))
                    * (hk1 - hnk);
                let t3 = q((16 * ni.pow(5) + 48 * ni.pow(4) + 29 * ni.pow(3) + 14 * ni * ni + 20 * ni + 8) * ki * ki)
                    + q(ni * (ni + 1).pow(2) * (16 * ni.pow(4) + 23 * ni.pow(3) + ni * ni + 12 * ni + 8))
                    - q((32 * ni.pow(6) + 101 * ni.pow(5) + 98 * ni.pow(4) + 55 * ni.pow(3)
                        + 54 * ni * ni + 36 * ni + 8) * ki);
                let sign = if self == Certificate::CertAlg { -1 } else { 1 };
                let rational = q(sign) * (t1 - t2 + t3) * hk() / q(den);
                let mut s_inv = q(0);
                let mut s_plain = q(0);
                let mut s_diff = q(0);
                for i in 0..=k {
                    let hi = qi(&(BigInt::from(sgn(i)) * m.binom(n + i, i) * m.binom(n, i)));
                    s_inv += &hi / q(((n + i) * (n + i)) as i64);
                    s_diff += &hi * (m.h(n + i) - m.h(i));
                    s_plain += hi;
                }
                let sums = q(ni * ni * (ni + 1) * (ni + 2) * (3 * ni + 2)) * s_inv
                    + q(2 * ni * (4 * ni * ni + 3 * ni - 4) * (2 * ni + 1)) * s_plain
                    + q(8 * (ni - 1) * ni * (ni + 1) * (ni + 2) * (2 * ni + 1)) * s_diff;
                Some(rational + sums)
            }
        }
    }

    /// The recurrence the certificate proves, checked by direct summation.
    fn recurrence_holds(self, m: &Memo, n: u64) -> bool {
        match self {
            Certificate::CertSumnmk => {
                let (a, b, c, rhs) = rec_sumnmk_coeffs(m, n);
                let s = |n: u64| k_harmonic_sum(m, n, |k| n - k);
                a * s(n + 2) + b * s(n + 1) + c * s(n) == rhs
            }
            _ => {
                let ni = n as i64;
                let lhs = q(2 * (2 * ni + 1) * (ni + 2) * (ni + 2)) * alg_sum(m, n)
                    + q(2 * (2 * ni + 1) * ni * ni) * alg_sum(m, n + 1);
                lhs == rec_alg_rhs_raw(m, n)
            }
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exact telescoping defect `g(n,k+1) - g(n,k) - sum_i c_i(n) f(n+i,k)`, or
/// `None` at a degenerate point.
pub fn telescoping_defect(cert: Certificate, m: &Memo, n: u64, k: u64) -> Option<BigRational> {
    let g1 = cert.g(m, n, k + 1)?;
    let g0 = cert.g(m, n, k)?;
    let rhs = cert
        .coefficients(n)
        .iter()
        .enumerate()
        .fold(q(0), |acc, (i, c)| acc + c * cert.summand(m, n + i as u64, k));
    Some(g1 - g0 - rhs)
}

/// Telescoping at every non-degenerate `(n, k)` with `1 <= n <= n_max`,
/// `0 <= k <= n`, at least `n - 2` valid points per `n`, and the proved
/// recurrence at every `n` by direct summation.
pub fn verify_certificate(cert: Certificate, n_max: u64, m: &Memo) -> Result<CheckReport> {
    m.check(2 * n_max + 10)?;
    let mut report = CheckReport::new(cert.name()).order(n_max);
    if !cert.is_asserted() {
        report = report.informational();
    }
    let mut sweep = Sweep::new(report);
    let mut skipped = 0usize;
    for n in 1..=n_max {
        let mut valid = 0u64;
        for k in 0..=n {
            match telescoping_defect(cert, m, n, k) {
                Some(d) => {
                    valid += 1;
                    sweep.rationals(format_args!("(n, k) = ({n}, {k})"), &d, &q(0));
                }
                None => skipped += 1,
            }
        }
        sweep.outcome(
            format_args!("n = {n}: {valid} valid k-points"),
            valid + 2 >= n,
        );
        sweep.outcome(format_args!("recurrence at n = {n}"), cert.recurrence_holds(m, n));
    }
    Ok(sweep.finish_with(format!("{skipped} degenerate points skipped")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn identity_examples() {
        let m = Memo::new(10);
        assert_eq!(eval_identity(IdentityId::Old, 1, &m).unwrap(), (q(-2), q(-2)));
        assert_eq!(eval_identity(IdentityId::Cool, 2, &m).unwrap(), (q(5), q(5)));
        assert_eq!(eval_identity(IdentityId::Rel2, 1, &m).unwrap(), (q(0), q(0)));
        assert!(eval_identity(IdentityId::Cool, 0, &m).is_err());
    }

    #[test]
    fn all_identities_small() {
        let m = Memo::new(25);
        for id in IdentityId::ALL {
            let r = verify_identity(id, 25, &m).unwrap();
            assert!(r.is_pass(), "{id}: {}", r.note);
        }
    }

    #[test]
    fn names_round_trip() {
        for id in IdentityId::ALL {
            assert_eq!(IdentityId::parse(id.name()), Some(id));
        }
        for id in RecurrenceId::ALL {
            assert_eq!(RecurrenceId::parse(id.name()), Some(id));
        }
        for c in Certificate::ALL {
            assert_eq!(Certificate::parse(c.name()), Some(c));
        }
    }

    #[test]
    fn combinations_small() {
        let m = Memo::new(20);
        for r in verify_combinations(20, &m).unwrap() {
            assert!(r.is_pass(), "{}: {}", r.family, r.note);
        }
    }

    #[test]
    fn recurrences_small() {
        let m = Memo::new(15);
        for id in RecurrenceId::ALL {
            let r = verify_recurrence(id, 15, &m).unwrap();
            assert!(r.is_pass(), "{id}: {}", r.note);
        }
        assert!(verify_solutions(15, &m).unwrap().is_pass());
        for r in rec_final_variants(15, &m) {
            assert!(r.is_fail() && !r.asserted);
        }
    }

    #[test]
    fn rec_final_fit_is_unique() {
        let m = Memo::new(20);
        let fit = fit_order1(&m, 3, 12).unwrap().unwrap();
        assert_eq!(fit.a, Poly(vec![q(0), q(0), q(1), q(0)]));
        assert_eq!(fit.b, Poly(vec![q(4), q(4), q(1), q(0)]));
        assert_eq!(fit.a.to_string(), "n^2");
        assert_eq!(fit.b.to_string(), "n^2 + 4n + 4");
    }

    #[test]
    fn certificate_points() {
        let m = Memo::new(10);
        assert_eq!(telescoping_defect(Certificate::CertSumnmk, &m, 5, 2), Some(q(0)));
        assert_eq!(telescoping_defect(Certificate::CertAlg, &m, 6, 3), Some(q(0)));
        assert_eq!(telescoping_defect(Certificate::CertSumnmk, &m, 5, 5), None);
        assert_ne!(telescoping_defect(Certificate::CertAlgPrinted, &m, 6, 3), Some(q(0)));
    }

    #[test]
    fn certificates_small() {
        let m = Memo::new(12);
        assert!(verify_certificate(Certificate::CertSumnmk, 12, &m).unwrap().is_pass());
        assert!(verify_certificate(Certificate::CertAlg, 12, &m).unwrap().is_pass());
        let printed = verify_certificate(Certificate::CertAlgPrinted, 12, &m).unwrap();
        assert!(printed.is_fail() && !printed.asserted);
    }

    #[test]
    fn solve_exact_basics() {
        let rows = vec![vec![q(1), q(1), q(3)], vec![q(1), q(-1), q(1)]];
        assert_eq!(solve_exact(rows, 2), Some(vec![q(2), q(1)]));
        let singular = vec![vec![q(1), q(1), q(3)], vec![q(2), q(2), q(6)]];
        assert_eq!(solve_exact(singular, 2), None);
    }
}
