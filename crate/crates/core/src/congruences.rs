//! The binomial/harmonic evaluators `X`, `Y`, `Z`, `D`, the Gamma-quotient
//! kernel forms they approximate, and the checks that tie both to the exact
//! character-sum value of `-p^n {}_{n+1}F_n(lambda)`.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::cyclotomic::{CycInt, FiniteFieldChars};
use crate::error::{Error, Result};
use crate::harmonic::{odd_square_sum, HarmonicModTable};
use crate::modarith::{binomial_mod, is_odd_prime, legendre, teichmuller_in, Residue, RingDesc};
use crate::padic::{gamma_quotient, nasty_rhs, DerivTable, GammaTable, PadicPoint};
use crate::report::{CheckReport, Sweep};

/// `(p, lambda, n)` with `1 <= lambda < p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CongruenceInput {
    pub p: u64,
    pub n: u64,
    pub lam: u64,
}

impl CongruenceInput {
    pub fn new(p: u64, n: u64, lam: u64) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        if n == 0 {
            return Err(Error::Range("n must be positive".into()));
        }
        if lam == 0 || lam >= p {
            return Err(Error::Range(format!("lambda = {lam} must lie in [1, {}]", p - 1)));
        }
        Ok(CongruenceInput { p, n, lam })
    }

    /// `(p-1)/2`.
    pub fn h(&self) -> u64 {
        (self.p - 1) / 2
    }

    /// `l = (n+1)/2` when it is an integer.
    pub fn l(&self) -> Option<u64> {
        (self.n % 2 == 1).then_some((self.n + 1) / 2)
    }

    fn require_odd(&self) -> Result<u64> {
        self.l().ok_or(Error::EvenNUnsupported(self.n))
    }
}

/// Harmonic prefix tables shared by the evaluators at one prime:
/// `H^(1)` modulo `p^2` and `H^(2)` modulo `p`, both up to `p-1`.
#[derive(Clone, Debug)]
pub struct HarmonicData {
    p: u64,
    h1: HarmonicModTable,
    h2: HarmonicModTable,
}

impl HarmonicData {
    pub fn new(p: u64) -> Result<Self> {
        Ok(HarmonicData {
            p,
            h1: HarmonicModTable::new(1, p - 1, &RingDesc::new(p, 2)?)?,
            h2: HarmonicModTable::new(2, p - 1, &RingDesc::new(p, 1)?)?,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `H^(1)_n mod p^2`.
    pub fn h1(&self, n: u64) -> &Residue {
        self.h1.get(n)
    }

    /// `H^(2)_n mod p`.
    pub fn h2(&self, n: u64) -> &Residue {
        self.h2.get(n)
    }
}

fn check_data(inp: &CongruenceInput, data: &HarmonicData) -> Result<()> {
    if inp.p != data.p {
        return Err(Error::RingMismatch(format!(
            "harmonic data for p = {} used at p = {}",
            data.p, inp.p
        )));
    }
    Ok(())
}

/// `C((p-1)/2 + j, j) C((p-1)/2, j) (-1)^j` in `ring`.
fn signed_binomial_pair(j: u64, ring: &RingDesc) -> Result<Residue> {
    let h = (ring.p() - 1) / 2;
    Ok(ring.sign(j) * binomial_mod(h + j, j, ring)? * binomial_mod(h, j, ring)?)
}

/// `X(p, lambda, n) mod p` (odd `n`).
pub fn x_eval(inp: &CongruenceInput) -> Result<Residue> {
    x_eval_with(inp, &HarmonicData::new(inp.p)?)
}

pub fn x_eval_with(inp: &CongruenceInput, data: &HarmonicData) -> Result<Residue> {
    let l = inp.require_odd()?;
    check_data(inp, data)?;
    let r = RingDesc::new(inp.p, 1)?;
    let h = inp.h();
    let n1 = r.elem(inp.n as i64 + 1);
    let half = r.from_ratio(1, 2)?;
    let lam_inv = r.elem(inp.lam as i64).inverse()?;
    let mut acc = r.zero();
    let mut lam_pow = r.one();
    for j in 0..=h {
        let jr = r.elem(j as i64);
        let d1 = (data.h1(h + j) - data.h1(j)).reduce_to(&r)?;
        let d2 = data.h2(h + j) - data.h2(j);
        let inner = r.one()
            + r.elem(2) * &n1 * &jr * &d1
            + &jr * &jr * (&n1 * &n1 * &half * &d1 * &d1 - &n1 * &half * &d2);
        acc += signed_binomial_pair(j, &r)?.pow(l) * &lam_pow * inner;
        lam_pow = lam_pow * &lam_inv;
    }
    Ok(legendre_in(inp.lam, &r) * acc)
}

/// `Y(p, lambda, n) mod p^2` (odd `n`).
pub fn y_eval(inp: &CongruenceInput) -> Result<Residue> {
    y_eval_with(inp, &HarmonicData::new(inp.p)?)
}

pub fn y_eval_with(inp: &CongruenceInput, data: &HarmonicData) -> Result<Residue> {
    let l = inp.require_odd()?;
    check_data(inp, data)?;
    let r = RingDesc::new(inp.p, 2)?;
    let h = inp.h();
    let n1 = r.elem(inp.n as i64 + 1);
    let half = r.from_ratio(1, 2)?;
    let lam_inv_p = r.elem(inp.lam as i64).inverse()?.pow(inp.p);
    let mut acc = r.zero();
    let mut lam_pow = r.one();
    for j in 0..=h {
        let jr = r.elem(j as i64);
        let d1 = data.h1(h + j) - data.h1(j);
        let d3 = data.h1(h + j) - data.h1(h - j);
        let inner = r.one() + &n1 * &jr * &d1 - &n1 * &half * &jr * &d3;
        acc += signed_binomial_pair(j, &r)?.pow(l) * &lam_pow * inner;
        lam_pow = lam_pow * &lam_inv_p;
    }
    Ok(legendre_in(inp.lam, &r) * acc)
}

/// `Z(p, lambda, n) mod p^k`; defined for every `n` since `16^(-jl) = 4^(-j(n+1))`.
pub fn z_eval(inp: &CongruenceInput, k: u32) -> Result<Residue> {
    let r = RingDesc::new(inp.p, k)?;
    let e = inp.n + 1;
    let quarter = r.elem(4).inverse()?.pow(e);
    let lam_inv = r.elem(inp.lam as i64).inverse()?.pow(inp.p * inp.p);
    let step = quarter * lam_inv;
    let mut acc = r.zero();
    let mut pw = r.one();
    for j in 0..=inp.h() {
        acc += binomial_mod(2 * j, j, &r)?.pow(e) * &pw;
        pw = pw * &step;
    }
    Ok(legendre_in(inp.lam, &r) * acc)
}

/// `D(p, lambda) mod p`; the sum is empty for `p = 3`.
pub fn d_eval(p: u64, lam: u64) -> Result<Residue> {
    let r = RingDesc::new(p, 1)?;
    let lam_inv = r.elem(lam as i64).inverse()?;
    let half = r.from_ratio(1, 2)?;
    let mut acc = r.zero();
    let mut fact = r.one();
    let mut prod = r.one();
    let mut lam_pow = lam_inv.clone();
    let top = (p as i64 - 5) / 2;
    for j in 0..=top {
        let jr = r.elem(j);
        if j > 0 {
            fact *= &jr;
        }
        let f = &jr + &half;
        prod *= &f * &f;
        let j1 = r.elem(j + 1);
        acc += &fact * &fact * prod.inverse()? * &j1 * &j1 * &lam_pow;
        lam_pow = lam_pow * &lam_inv;
    }
    Ok(acc)
}

/// `sum_{j=1}^{(p-3)/2} C((p-1)/2+j, j)^-1 C((p-1)/2, j)^-1 (-1)^j mod p`.
pub fn d_alt(p: u64) -> Result<Residue> {
    let r = RingDesc::new(p, 1)?;
    let mut acc = r.zero();
    for j in 1..=(p - 1) / 2 - 1 {
        acc += signed_binomial_pair(j, &r)?.inverse()?;
    }
    Ok(acc)
}

pub fn d_alt_check(p: u64) -> Result<CheckReport> {
    Ok(CheckReport::new("d_alt")
        .prime(p)
        .lambda(1)
        .compare_residues(&d_eval(p, 1)?, &d_alt(p)?))
}

fn legendre_in(a: u64, ring: &RingDesc) -> Residue {
    ring.elem(legendre(a as i64, ring.p()) as i64)
}

/// The three Gamma-quotient sums whose `p`-adic combination is
/// `-p^n {}_{n+1}F_n(lambda)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kernel {
    /// Coefficient of `p^2`, meaningful modulo `p`.
    Coep2,
    /// Coefficient of `p`, meaningful modulo `p^2`.
    Coep,
    /// Constant coefficient, meaningful modulo `p^3`.
    Coe1,
}

impl Kernel {
    pub fn precision(self) -> u32 {
        match self {
            Kernel::Coep2 => 1,
            Kernel::Coep => 2,
            Kernel::Coe1 => 3,
        }
    }
}

/// Per-prime state for the kernel forms: a Gamma table modulo `p^3`,
/// `G1/G2` data when `p >= 7`, and harmonic tables.
#[derive(Clone, Debug)]
pub struct KernelContext {
    p: u64,
    r3: RingDesc,
    table: GammaTable,
    derivs: Option<DerivTable>,
    harmonics: HarmonicData,
}

impl KernelContext {
    pub fn new(p: u64) -> Result<Self> {
        let r3 = RingDesc::new(p, 3)?;
        let table = GammaTable::new(&r3)?;
        let derivs = if p >= 7 {
            Some(DerivTable::new(&table)?)
        } else {
            None
        };
        Ok(KernelContext {
            p,
            r3,
            harmonics: HarmonicData::new(p)?,
            table,
            derivs,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn table(&self) -> &GammaTable {
        &self.table
    }

    pub fn derivs(&self) -> Option<&DerivTable> {
        self.derivs.as_ref()
    }

    pub fn harmonics(&self) -> &HarmonicData {
        &self.harmonics
    }

    fn input(&self, n: u64, lam: u64) -> Result<CongruenceInput> {
        CongruenceInput::new(self.p, n, lam)
    }

    /// `(-phi(-1))^(n+1) phi(lambda)` and `(-Gamma_p(1/2))^(n+1)` mod `p^3`.
    fn leading(&self, n: u64, lam: u64) -> Result<(Residue, Residue)> {
        let r = &self.r3;
        let h = (self.p - 1) / 2;
        let minus_phi = r.sign(h + 1);
        let l = minus_phi.pow(n + 1) * legendre_in(lam, r);
        let g_half = self.table.gamma_ratio(1, 2)?;
        Ok((l, (-g_half).pow(n + 1)))
    }

    /// One kernel form at its natural precision.
    pub fn kernel_eval(&self, n: u64, lam: u64, which: Kernel) -> Result<Residue> {
        let inp = self.input(n, lam)?;
        let r = self.r3.with_precision(which.precision())?;
        let derivs = match which {
            Kernel::Coe1 => None,
            _ => Some(
                self.derivs
                    .as_ref()
                    .ok_or(Error::PrimeTooSmall { p: self.p, min: 7 })?,
            ),
        };
        let (l, kappa) = self.leading(n, lam)?;
        let h = inp.h();
        let omega = teichmuller_in(&self.r3.elem(lam as i64))?;
        let omega_inv = omega.inverse()?;
        let n1 = r.elem(n as i64 + 1);
        // omega^(h-j) for j = 1..h, walking down from omega^(h-1)
        let mut om = omega.pow(h - 1);
        let mut acc = r.zero();
        for j in 1..=h {
            let t = (gamma_quotient(&self.table, j, n + 1)? * &om).reduce_to(&r)?;
            let jr = r.elem(j as i64);
            let factor = match (which, derivs) {
                (Kernel::Coe1, _) => r.one(),
                (Kernel::Coep, Some(d)) => r.one() + &n1 * &jr * d.a(j).reduce_to(&r)?,
                (Kernel::Coep2, Some(d)) => {
                    r.one()
                        + r.elem(2) * &n1 * &jr * d.a(j).reduce_to(&r)?
                        + &jr * &jr * d.b(n, j)?
                }
                _ => unreachable!("derivative data checked above"),
            };
            acc += t * factor;
            om = om * &omega_inv;
        }
        Ok(l.reduce_to(&r)? + kappa.reduce_to(&r)? * acc)
    }

    /// The unexpanded Gamma form modulo `p^3`, valid for `n >= 2`:
    /// `c {L + kappa sum Gamma(1/2 + jc)^(n+1) / Gamma(1 + jc)^(n+1) omega^(h-j)}`
    /// with `c = 1 + p + p^2`.
    pub fn main_form(&self, n: u64, lam: u64) -> Result<Residue> {
        let inp = self.input(n, lam)?;
        if n < 2 {
            return Err(Error::Range("the unexpanded form drops the n = 1 tail".into()));
        }
        let r = &self.r3;
        let p = self.p as i64;
        let c = r.elem(1 + p + p * p);
        let (l, kappa) = self.leading(n, lam)?;
        let h = inp.h();
        let omega = teichmuller_in(&r.elem(lam as i64))?;
        let omega_inv = omega.inverse()?;
        let half = r.from_ratio(1, 2)?;
        let mut om = omega.pow(h - 1);
        let mut acc = r.zero();
        for j in 1..=h {
            let jc = r.elem(j as i64) * &c;
            let num = self.table.gamma(&PadicPoint::from_residue(&half + &jc))?;
            let den = self.table.gamma(&PadicPoint::from_residue(r.one() + &jc))?;
            acc += (num * den.inverse()?).pow(n + 1) * &om;
            om = om * &omega_inv;
        }
        Ok(c * (l + kappa * acc))
    }

    /// Right side of the main congruence modulo `p^3`.
    pub fn theorem_rhs(&self, n: u64, lam: u64) -> Result<Residue> {
        let inp = self.input(n, lam)?;
        let r = &self.r3;
        let lift = |x: &Residue, e: u32| r.from_biguint(x.value()).times_p_pow(e);
        if n % 2 == 1 {
            let mut x = x_eval_with(&inp, &self.harmonics)?;
            if n == 1 {
                x += d_eval(self.p, lam)?;
            }
            let y = y_eval_with(&inp, &self.harmonics)?;
            let z = z_eval(&inp, 3)?;
            // (-phi(-1))^(n+1) = 1 for odd n
            return Ok(lift(&x, 2) + lift(&y, 1) + z);
        }
        if self.derivs.is_none() {
            return self.main_form(n, lam);
        }
        let coep2 = self.kernel_eval(n, lam, Kernel::Coep2)?;
        let coep = self.kernel_eval(n, lam, Kernel::Coep)?;
        let sign = r.sign((inp.h() + 1) * (n + 1));
        Ok(lift(&coep2, 2) + lift(&coep, 1) + sign * z_eval(&inp, 3)?)
    }

    /// `COE1 == (-phi(-1))^(n+1) Z mod p^3`.
    pub fn equal_check(&self, n: u64, lam: u64) -> Result<CheckReport> {
        let inp = self.input(n, lam)?;
        let coe1 = self.kernel_eval(n, lam, Kernel::Coe1)?;
        let z = self.r3.sign((inp.h() + 1) * (n + 1)) * z_eval(&inp, 3)?;
        Ok(CheckReport::new("equal")
            .prime(self.p)
            .order(n)
            .lambda(lam)
            .compare_residues(&coe1, &z))
    }

    /// Kernel forms against the binomial forms for odd `n`, `p >= 7`:
    /// `COEP2 = X mod p`, `COEP = Y mod p^2`, and the assembled sums mod `p^3`.
    pub fn assembly_check(&self, n: u64, lam: u64) -> Result<CheckReport> {
        let report = CheckReport::new("assembly").prime(self.p).order(n).lambda(lam);
        if self.derivs.is_none() {
            return Ok(report.skipped("G1/G2 expansion requires p >= 7"));
        }
        if n % 2 == 0 {
            return Ok(report.skipped("binomial forms need odd n"));
        }
        let inp = self.input(n, lam)?;
        let x = x_eval_with(&inp, &self.harmonics)?;
        let y = y_eval_with(&inp, &self.harmonics)?;
        let z = z_eval(&inp, 3)?;
        let coep2 = self.kernel_eval(n, lam, Kernel::Coep2)?;
        let coep = self.kernel_eval(n, lam, Kernel::Coep)?;
        let coe1 = self.kernel_eval(n, lam, Kernel::Coe1)?;
        let r = &self.r3;
        let lift = |v: &Residue, e: u32| r.from_biguint(v.value()).times_p_pow(e);
        let mut sweep = Sweep::new(report);
        sweep.outcome("COEP2 = X mod p", coep2 == x);
        sweep.outcome("COEP = Y mod p^2", coep == y);
        let kern = lift(&coep2, 2) + lift(&coep, 1) + coe1;
        let bin = lift(&x, 2) + lift(&y, 1) + z;
        sweep.residues("assembled mod p^3", &kern, &bin);
        Ok(sweep.finish())
    }
}

/// `((n+1)/2) j (H_{h+j} - H_{h-j}) == -2(n+1) j p sum_{r<j} 1/(2r+1)^2 mod p^2`.
pub fn yeah_check(p: u64, n: u64) -> Result<CheckReport> {
    let data = HarmonicData::new(p)?;
    let r = RingDesc::new(p, 2)?;
    let h = (p - 1) / 2;
    let n1 = r.elem(n as i64 + 1);
    let half = r.from_ratio(1, 2)?;
    let mut sweep = Sweep::new(CheckReport::new("yeah").prime(p).order(n));
    for j in 0..=h {
        let jr = r.elem(j as i64);
        let lhs = &n1 * &half * &jr * (data.h1(h + j) - data.h1(h - j));
        let rhs = -(r.elem(2) * &n1 * &jr * odd_square_sum(j, &r)?.times_p_pow(1));
        sweep.residues(format_args!("j = {j}"), &lhs, &rhs);
    }
    Ok(sweep.finish())
}

/// `X(p,1,1) + D(p,1) + 1 == 0 mod p`.
pub fn xd_check(p: u64) -> Result<CheckReport> {
    let inp = CongruenceInput::new(p, 1, 1)?;
    let lhs = x_eval(&inp)? + d_eval(p, 1)? + RingDesc::new(p, 1)?.one();
    let zero = lhs.ring().zero();
    Ok(CheckReport::new("xd").prime(p).order(1).lambda(1).compare_residues(&lhs, &zero))
}

/// `sum_{i=1}^{(p-1)/2} C(2i, i)/i` modulo `p^k`.
pub fn catalan_type_sum(p: u64, k: u32) -> Result<Residue> {
    let r = RingDesc::new(p, k)?;
    let mut acc = r.zero();
    for i in 1..=(p - 1) / 2 {
        acc += binomial_mod(2 * i, i, &r)? * r.elem(i as i64).inverse()?;
    }
    Ok(acc)
}

/// `Y(p,1,1) == p + (3/8)(-1)^((p-1)/2) sum C(2i,i)/i mod p^2`.
pub fn yp_check(p: u64) -> Result<CheckReport> {
    let inp = CongruenceInput::new(p, 1, 1)?;
    let r = RingDesc::new(p, 2)?;
    let lhs = y_eval(&inp)?;
    let rhs = r.elem(p as i64)
        + r.from_ratio(3, 8)? * r.sign((p - 1) / 2) * catalan_type_sum(p, 2)?;
    Ok(CheckReport::new("yp").prime(p).order(1).lambda(1).compare_residues(&lhs, &rhs))
}

/// Left side of the Legendre-symbol supercongruence modulo `p^k`:
/// `sum_{m=0}^{h} C(2m,m)^2 16^-m + (3/8) p (-1)^h sum_{i=1}^{h} C(2i,i)/i`.
pub fn corollary_lhs(p: u64, k: u32) -> Result<Residue> {
    let ring = RingDesc::new(p, k)?;
    match ring.modulus_u64().filter(|&m| m < 1 << 62) {
        Some(m) => corollary_lhs_u64(p, m, &ring),
        None => corollary_lhs_big(p, &ring),
    }
}

fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    debug_assert_eq!(r0, 1, "inverse of a non-unit");
    s0.rem_euclid(m as i128) as u64
}

fn corollary_lhs_u64(p: u64, m: u64, ring: &RingDesc) -> Result<Residue> {
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % m as u128) as u64;
    let h = (p - 1) / 2;
    // a = C(2i,i)/4^i, c = C(2i,i)
    let (mut a, mut c) = (1u64, 1u64);
    let (mut s1, mut s2) = (1u64, 0u64);
    for i in 1..=h {
        a = mul(mul(a, 2 * i - 1), inv_mod(2 * i, m));
        s1 = (s1 + mul(a, a)) % m;
        c = mul(mul(c, 2 * (2 * i - 1)), inv_mod(i, m));
        s2 = (s2 + mul(c, inv_mod(i, m))) % m;
    }
    let s1 = ring.elem(s1 as i64);
    let s2 = ring.elem(s2 as i64);
    Ok(s1 + ring.from_ratio(3, 8)?.times_p_pow(1) * ring.sign(h) * s2)
}

fn corollary_lhs_big(p: u64, ring: &RingDesc) -> Result<Residue> {
    let h = (p - 1) / 2;
    let mut a = ring.one();
    let mut s1 = ring.one();
    for i in 1..=h {
        a = a * ring.elem(2 * i as i64 - 1) * ring.elem(2 * i as i64).inverse()?;
        s1 += &a * &a;
    }
    let s2 = catalan_type_sum(p, ring.k())?;
    Ok(s1 + ring.from_ratio(3, 8)?.times_p_pow(1) * ring.sign(h) * s2)
}

/// Compare [`corollary_lhs`] with `(-1/p)`; only `k <= 3` is asserted.
pub fn corollary_check(p: u64, k: u32) -> Result<CheckReport> {
    let lhs = corollary_lhs(p, k)?;
    let rhs = legendre_in(p - 1, lhs.ring());
    let report = CheckReport::new("corollary")
        .prime(p)
        .note(format!("k = {k}"))
        .compare_residues(&lhs, &rhs);
    Ok(if k > 3 { report.informational() } else { report })
}

/// Per-prime state for comparing the exact character sum with the
/// congruence right side.
#[derive(Clone, Debug)]
pub struct TheoremContext {
    kernel: KernelContext,
    chars: FiniteFieldChars,
}

impl TheoremContext {
    pub fn new(p: u64) -> Result<Self> {
        Self::with_chars(FiniteFieldChars::new(p)?)
    }

    pub fn with_chars(chars: FiniteFieldChars) -> Result<Self> {
        Ok(TheoremContext {
            kernel: KernelContext::new(chars.p())?,
            chars,
        })
    }

    pub fn kernel(&self) -> &KernelContext {
        &self.kernel
    }

    pub fn chars(&self) -> &FiniteFieldChars {
        &self.chars
    }

    /// `-p^n {}_{n+1}F_n(lambda)` as an exact integer.
    pub fn lhs_exact(&self, powers: &[CycInt], lam: u64) -> Result<BigInt> {
        Ok(-self.chars.hypergeometric_int_with(powers, lam)?)
    }

    fn check_with(&self, powers: &[CycInt], n: u64, lam: u64) -> Result<CheckReport> {
        let r3 = &self.kernel.r3;
        let lhs = r3.from_bigint(&self.lhs_exact(powers, lam)?);
        let rhs = self.kernel.theorem_rhs(n, lam)?;
        let how = match (n, n % 2, self.kernel.derivs.is_some()) {
            (1, _, _) => "p^2 (X + D) + p Y + Z",
            (_, 1, _) => "p^2 X + p Y + Z",
            (_, _, true) => "p^2 COEP2 + p COEP + sign Z",
            _ => "unexpanded Gamma form",
        };
        Ok(CheckReport::new("theorem")
            .prime(self.kernel.p)
            .order(n)
            .lambda(lam)
            .compare_residues(&lhs, &rhs)
            .note(how))
    }

    pub fn theorem_check(&self, n: u64, lam: u64) -> Result<CheckReport> {
        let powers = self.chars.jacobi_powers(n);
        self.check_with(&powers, n, lam)
    }

    /// One report per `lambda`, sharing the Jacobi powers.
    pub fn theorem_sweep(&self, n: u64, lams: &[u64]) -> Result<Vec<CheckReport>> {
        let powers = self.chars.jacobi_powers(n);
        lams.iter().map(|&lam| self.check_with(&powers, n, lam)).collect()
    }

    /// The Gross-Koblitz expansion against the character sum, modulo `p^k`,
    /// for every `lambda`. Builds its own table modulo `p^k`.
    pub fn nasty_check(&self, n: u64, k: u32) -> Result<CheckReport> {
        let ring = RingDesc::new(self.kernel.p, k)?;
        let table = GammaTable::new(&ring)?;
        let powers = self.chars.jacobi_powers(n);
        let mut sweep = Sweep::new(
            CheckReport::new("nasty").prime(self.kernel.p).order(n),
        );
        for lam in 1..self.kernel.p {
            let lhs = ring.from_bigint(&self.lhs_exact(&powers, lam)?);
            let rhs = nasty_rhs(&table, n, lam)?;
            sweep.residues(format_args!("lambda = {lam}"), &lhs, &rhs);
        }
        Ok(sweep.finish_with(format!("k = {k}")))
    }
}

/// Single-point convenience wrapper around [`TheoremContext`].
pub fn theorem_check(inp: &CongruenceInput) -> Result<CheckReport> {
    TheoremContext::new(inp.p)?.theorem_check(inp.n, inp.lam)
}

/// `p * {}_2F_1(1) == -(-1/p)` from the character sum.
pub fn special_value_check(chars: &FiniteFieldChars) -> Result<CheckReport> {
    let p = chars.p();
    let v = chars.hypergeometric_int(1, 1)?;
    let expected = BigInt::from(-(legendre(-1, p) as i64));
    let ok = v == expected;
    let mut r = CheckReport::new("special_value").prime(p).order(1).lambda(1);
    r.lhs = Some(crate::report::CheckValue::Int(v));
    r.rhs = Some(crate::report::CheckValue::Int(expected));
    Ok(r.with_status(if ok {
        crate::Status::Pass
    } else {
        crate::Status::Fail
    }))
}

/// Small helper for reports: a residue as a plain `u64` when it fits.
pub fn residue_u64(r: &Residue) -> Option<u64> {
    r.value().to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn inp(p: u64, n: u64, lam: u64) -> CongruenceInput {
        CongruenceInput::new(p, n, lam).unwrap()
    }

    fn ring(p: u64, k: u32) -> RingDesc {
        RingDesc::new(p, k).unwrap()
    }

    #[test]
    fn evaluator_examples() {
        assert_eq!(x_eval(&inp(3, 1, 1)).unwrap(), ring(3, 1).elem(2));
        assert_eq!(y_eval(&inp(3, 1, 1)).unwrap(), ring(3, 2).zero());
        assert_eq!(z_eval(&inp(3, 1, 1), 3).unwrap(), ring(3, 3).elem(8));
        assert_eq!(z_eval(&inp(5, 1, 1), 3).unwrap(), ring(5, 3).elem(101));
        assert_eq!(d_eval(5, 1).unwrap(), ring(5, 1).elem(4));
        assert!(d_eval(3, 1).unwrap().is_zero());
        assert!(d_eval(3, 2).unwrap().is_zero());
        assert_eq!(x_eval(&inp(5, 2, 1)), Err(Error::EvenNUnsupported(2)));
    }

    #[test]
    fn input_validation() {
        assert!(CongruenceInput::new(4, 1, 1).is_err());
        assert!(CongruenceInput::new(5, 1, 0).is_err());
        assert!(CongruenceInput::new(5, 1, 5).is_err());
        assert_eq!(inp(7, 3, 2).l(), Some(2));
        assert_eq!(inp(7, 2, 2).l(), None);
    }

    #[test]
    fn d_forms_agree() {
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 97] {
            assert!(d_alt_check(p).unwrap().is_pass(), "p = {p}");
        }
    }

    #[test]
    fn theorem_desk_example() {
        let r = theorem_check(&inp(3, 1, 1)).unwrap();
        assert!(r.is_pass());
        assert_eq!(r.lhs.unwrap().to_string(), "26");
    }

    #[test]
    fn theorem_small_sweep() {
        for p in [3u64, 5, 7, 11] {
            let ctx = TheoremContext::new(p).unwrap();
            let lams: Vec<u64> = (1..p).collect();
            for n in 1..=4 {
                for r in ctx.theorem_sweep(n, &lams).unwrap() {
                    assert!(r.is_pass(), "{r:?}");
                }
            }
        }
    }

    #[test]
    fn kernel_identities() {
        let ctx = KernelContext::new(11).unwrap();
        for n in 1..=4 {
            for lam in 1..11 {
                assert!(ctx.equal_check(n, lam).unwrap().is_pass());
                let a = ctx.assembly_check(n, lam).unwrap();
                assert!(!a.is_fail(), "{a:?}");
            }
        }
    }

    #[test]
    fn main_form_matches_kernels() {
        let ctx = KernelContext::new(7).unwrap();
        for n in [2u64, 3, 4] {
            for lam in 1..7 {
                let r = &ctx.r3;
                let lift = |x: &Residue, e: u32| r.from_biguint(x.value()).times_p_pow(e);
                let k = lift(&ctx.kernel_eval(n, lam, Kernel::Coep2).unwrap(), 2)
                    + lift(&ctx.kernel_eval(n, lam, Kernel::Coep).unwrap(), 1)
                    + ctx.kernel_eval(n, lam, Kernel::Coe1).unwrap();
                assert_eq!(k, ctx.main_form(n, lam).unwrap(), "n = {n}, lam = {lam}");
            }
        }
    }

    #[test]
    fn nasty_matches_oracle() {
        for p in [3u64, 5, 7, 11] {
            let ctx = TheoremContext::new(p).unwrap();
            for n in [1u64, 3] {
                assert!(ctx.nasty_check(n, 3).unwrap().is_pass(), "p = {p}, n = {n}");
                assert!(ctx.nasty_check(n, 4).unwrap().is_pass(), "p = {p}, n = {n}");
            }
        }
    }

    #[test]
    fn yeah_xd_yp() {
        assert!(yeah_check(7, 1).unwrap().is_pass());
        assert!(yeah_check(97, 3).unwrap().is_pass());
        for p in [3u64, 5, 7, 11, 13, 101] {
            assert!(xd_check(p).unwrap().is_pass(), "xd p = {p}");
            assert!(yp_check(p).unwrap().is_pass(), "yp p = {p}");
        }
    }

    #[test]
    fn corollary_examples() {
        assert_eq!(corollary_lhs(3, 3).unwrap(), ring(3, 3).elem(26));
        assert_eq!(corollary_lhs(5, 3).unwrap(), ring(5, 3).one());
        assert!(corollary_check(3, 3).unwrap().is_pass());
        assert!(corollary_check(5, 3).unwrap().is_pass());
        let k4 = corollary_check(3, 4).unwrap();
        assert!(!k4.asserted);
        for p in [7u64, 11, 13, 101] {
            assert_eq!(corollary_lhs(p, 3).unwrap(), corollary_lhs_big(p, &ring(p, 3)).unwrap());
        }
    }

    #[test]
    fn special_values() {
        for p in [3u64, 5, 7, 13] {
            let chars = FiniteFieldChars::new(p).unwrap();
            assert!(special_value_check(&chars).unwrap().is_pass());
        }
    }
}
