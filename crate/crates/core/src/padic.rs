//! Morita's p-adic Gamma function modulo `p^k`, its logarithmic
//! derivatives `G1 = Gamma'/Gamma` and `G2 = Gamma''/Gamma`, and the
//! Gamma-quotient expansion of `-p^n {}_{n+1}F_n(lambda)`.
//!
//! `Gamma_p` is locally constant modulo `p^k` on classes modulo `p^k`, so a
//! table indexed by `r in [0, p^k)` determines it on all of `Z_p`.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::harmonic::{odd_square_sum, HarmonicModTable};
use crate::modarith::{binomial_mod, legendre, teichmuller_in, Residue, RingDesc};
use crate::report::{CheckReport, Sweep};

/// Largest table built without an explicit override.
pub const GAMMA_TABLE_LIMIT: u64 = 1 << 25;
/// Precision range accepted by [`nasty_rhs`].
pub const NASTY_MIN_K: u32 = 3;
pub const NASTY_MAX_K: u32 = 5;

/// A point of `Z_p` truncated modulo `p^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicPoint(Residue);

impl PadicPoint {
    pub fn from_residue(r: Residue) -> Self {
        PadicPoint(r)
    }

    pub fn from_int(v: i64, ring: &RingDesc) -> Self {
        PadicPoint(ring.elem(v))
    }

    /// `num/den` with `p` not dividing `den`.
    pub fn from_ratio(num: i64, den: i64, ring: &RingDesc) -> Result<Self> {
        ring.from_ratio(num, den).map(PadicPoint)
    }

    pub fn residue(&self) -> &Residue {
        &self.0
    }

    pub fn ring(&self) -> &RingDesc {
        self.0.ring()
    }

    /// Representative in `[0, p^k)`.
    pub fn representative(&self) -> u64 {
        self.0.value().to_u64().expect("table-sized modulus")
    }

    pub fn add_int(&self, z: i64) -> PadicPoint {
        PadicPoint(&self.0 + &self.ring().elem(z))
    }

    /// `1 - x`.
    pub fn reflect(&self) -> PadicPoint {
        PadicPoint(self.ring().one() - &self.0)
    }

    /// Constant term of the p-adic expansion, taken in `[1, p]`.
    pub fn constant_term(&self) -> u64 {
        let p = self.ring().p();
        match self.representative() % p {
            0 => p,
            r => r,
        }
    }
}

/// `Gamma_p(r) mod p^k` for every `r in [0, p^k)`.
#[derive(Clone, Debug)]
pub struct GammaTable {
    ring: RingDesc,
    modulus: u64,
    values: Vec<u32>,
}

impl GammaTable {
    /// Build the table, refusing more than [`GAMMA_TABLE_LIMIT`] entries.
    pub fn new(ring: &RingDesc) -> Result<Self> {
        Self::with_limit(ring, GAMMA_TABLE_LIMIT)
    }

    pub fn with_limit(ring: &RingDesc, limit: u64) -> Result<Self> {
        let m = ring
            .modulus_u64()
            .filter(|&m| m <= u32::MAX as u64)
            .ok_or_else(|| Error::TableTooLarge(ring.modulus().to_string()))?;
        if m > limit {
            return Err(Error::TableTooLarge(format!("{m}")));
        }
        let p = ring.p();
        let mut values = Vec::with_capacity(m as usize);
        let mut cur = 1u64;
        values.push(1u32);
        for r in 0..m - 1 {
            cur = if r % p != 0 {
                (m - r) * cur % m
            } else {
                (m - cur) % m
            };
            values.push(cur as u32);
        }
        Ok(GammaTable {
            ring: ring.clone(),
            modulus: m,
            values,
        })
    }

    pub fn ring(&self) -> &RingDesc {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn raw(&self, r: u64) -> u64 {
        self.values[(r % self.modulus) as usize] as u64
    }

    /// `Gamma_p(r)` for an integer argument (any sign).
    pub fn at_int(&self, r: i64) -> Residue {
        let idx = (r as i128).rem_euclid(self.modulus as i128) as u64;
        self.ring.elem(self.raw(idx) as i64)
    }

    pub fn gamma(&self, x: &PadicPoint) -> Result<Residue> {
        let r = x.residue().reduce_to(&self.ring)?;
        let idx = r.value().to_u64().expect("reduced below modulus");
        Ok(self.ring.elem(self.raw(idx) as i64))
    }

    /// `Gamma_p(num/den)`.
    pub fn gamma_ratio(&self, num: i64, den: i64) -> Result<Residue> {
        self.gamma(&PadicPoint::from_ratio(num, den, &self.ring)?)
    }
}

/// `Gamma_p(x)` straight from the product definition, without a table.
pub fn gamma_p_direct(x: &PadicPoint) -> Residue {
    let ring = x.ring();
    let p = ring.p();
    let m = ring.modulus_u64().expect("direct Gamma needs a u64 modulus") as u128;
    let r = x.representative();
    let mut acc: u128 = 1;
    for j in 1..r {
        if j % p != 0 {
            acc = acc * j as u128 % m;
        }
    }
    ring.elem(acc as i64) * ring.sign(r)
}

/// `Gamma_p(x) Gamma_p(1 - x) == (-1)^(x_0)`.
pub fn reflection_check(table: &GammaTable, x: &PadicPoint) -> Result<bool> {
    let lhs = table.gamma(x)? * table.gamma(&x.reflect())?;
    Ok(lhs == table.ring.sign(x.constant_term()))
}

/// Invariants of a Gamma table: the step ratio, units, reflection at every
/// index, and the factorial relation for `0 <= n <= p-1`.
pub fn verify_gamma_table(table: &GammaTable) -> CheckReport {
    let ring = table.ring();
    let (p, m) = (ring.p(), table.modulus);
    let mut sweep = Sweep::new(
        CheckReport::new("gamma_table")
            .prime(p)
            .note(format!("k = {}", ring.k())),
    );
    let mut ok_ratio = table.raw(0) == 1;
    let mut ok_unit = true;
    let mut ok_refl = true;
    let mut first_bad = None;
    for r in 0..m {
        let g = table.raw(r) as u128;
        if g % p as u128 == 0 {
            ok_unit = false;
            first_bad.get_or_insert(r);
        }
        if r + 1 < m {
            let next = table.raw(r + 1) as u128;
            let factor = if r % p != 0 { (m - r) as u128 } else { (m - 1) as u128 };
            if next != factor * g % m as u128 {
                ok_ratio = false;
                first_bad.get_or_insert(r);
            }
        }
        let x = PadicPoint::from_int(r as i64, ring);
        let refl = (g * table.raw((m + 1 - r) % m) as u128 % m as u128) as u64;
        let expected = if x.constant_term() % 2 == 0 { 1 } else { m - 1 };
        if refl != expected {
            ok_refl = false;
            first_bad.get_or_insert(r);
        }
    }
    let at = first_bad.map_or(alloc::string::String::new(), |r| format!(" (r = {r})"));
    sweep.outcome(format_args!("ratio{at}"), ok_ratio);
    sweep.outcome(format_args!("unit{at}"), ok_unit);
    sweep.outcome(format_args!("reflection{at}"), ok_refl);
    let mut fact = ring.one();
    for n in 0..p {
        if n > 0 {
            fact *= ring.elem(n as i64);
        }
        let rhs = ring.sign(n + 1) * table.at_int(n as i64 + 1);
        sweep.residues(format_args!("{n}! = (-1)^(n+1) Gamma(n+1)"), &fact, &rhs);
    }
    sweep.finish_with(format!("k = {}", ring.k()))
}

/// `G1(x) mod p^2` and `G2(x) mod p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaDerivs {
    pub g1: Residue,
    pub g2: Residue,
}

/// Solve `Gamma(x+z) = Gamma(x)(1 + z G1 + z^2 G2 / 2) mod p^3` at
/// `z = p, 2p` and validate at `z = 3p`. Needs a table modulo at least `p^3`.
pub fn g1_g2(table: &GammaTable, x: &PadicPoint) -> Result<GammaDerivs> {
    let p = table.ring.p();
    if p < 7 {
        return Err(Error::PrimeTooSmall { p, min: 7 });
    }
    if table.ring.k() < 3 {
        return Err(Error::Precision {
            k: table.ring.k(),
            min: 3,
            max: NASTY_MAX_K,
        });
    }
    let r3 = table.ring.with_precision(3)?;
    let pi = p as i64;
    let at = |z: i64| -> Result<Residue> { table.gamma(&x.add_int(z))?.reduce_to(&r3) };
    let g0 = at(0)?;
    let inv = g0.inverse()?;
    let one = r3.one();
    let u = at(pi)? * &inv - &one;
    let v = at(2 * pi)? * &inv - &one;
    let w = at(3 * pi)? * &inv - &one;
    let half = r3.from_ratio(1, 2)?;
    // u = a + b, v = 2a + 4b with a = p G1, b = p^2 G2 / 2
    let b = (&v - &(&u + &u)) * &half;
    let a = &u - &b;
    let singular = || Error::SingularSystem(format!("{}", x.residue()));
    if r3.elem(3) * &a + r3.elem(9) * &b != w {
        return Err(singular());
    }
    let g1 = a.div_p_pow(1).map_err(|_| singular())?;
    let g2 = (&b + &b).div_p_pow(2).map_err(|_| singular())?;
    Ok(GammaDerivs { g1, g2 })
}

/// `G1/G2` at `1/2 + j` and `1 + j` for `0 <= j <= (p-1)/2`.
#[derive(Clone, Debug)]
pub struct DerivTable {
    p: u64,
    half: Vec<GammaDerivs>,
    int: Vec<GammaDerivs>,
}

impl DerivTable {
    pub fn new(table: &GammaTable) -> Result<Self> {
        let ring = table.ring();
        let p = ring.p();
        let h = (p - 1) / 2;
        let mut half = Vec::with_capacity(h as usize + 1);
        let mut int = Vec::with_capacity(h as usize + 1);
        let one_half = PadicPoint::from_ratio(1, 2, ring)?;
        for j in 0..=h {
            half.push(g1_g2(table, &one_half.add_int(j as i64))?);
            int.push(g1_g2(table, &PadicPoint::from_int(1 + j as i64, ring))?);
        }
        Ok(DerivTable { p, half, int })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn half(&self, j: u64) -> &GammaDerivs {
        &self.half[j as usize]
    }

    pub fn int(&self, j: u64) -> &GammaDerivs {
        &self.int[j as usize]
    }

    /// `A(j) = G1(1/2 + j) - G1(1 + j) mod p^2`.
    pub fn a(&self, j: u64) -> Residue {
        &self.half(j).g1 - &self.int(j).g1
    }

    /// `B(n, j) mod p`.
    pub fn b(&self, n: u64, j: u64) -> Result<Residue> {
        let rp = self.half(j).g2.ring().clone();
        let g1h = self.half(j).g1.reduce_to(&rp)?;
        let g1i = self.int(j).g1.reduce_to(&rp)?;
        let (g2h, g2i) = (&self.half(j).g2, &self.int(j).g2);
        let n1 = rp.elem(n as i64 + 1);
        let half = rp.from_ratio(1, 2)?;
        let t1 = &n1 * &half * (g2h - g2i);
        let t2 = &n1 * rp.elem(n as i64) * &half * &g1h * &g1h;
        let t3 = &n1 * rp.elem(n as i64 + 2) * &half * &g1i * &g1i;
        let t4 = &n1 * &n1 * &g1h * &g1i;
        Ok(t1 + t2 + t3 - t4)
    }
}

/// `-phi_p(-1) (-1)^j C((p-1)/2 + j, j) C((p-1)/2, j)` in `ring`.
pub fn bc_binomial(j: u64, ring: &RingDesc) -> Result<Residue> {
    let p = ring.p();
    let h = (p - 1) / 2;
    let c = binomial_mod(h + j, j, ring)? * binomial_mod(h, j, ring)?;
    Ok(ring.sign(h + 1 + j) * c)
}

/// `Gamma_p(1/2 + j)^e / Gamma_p(1 + j)^e`.
pub fn gamma_quotient(table: &GammaTable, j: u64, e: u64) -> Result<Residue> {
    let num = table.gamma_ratio(1 + 2 * j as i64, 2)?;
    let den = table.at_int(1 + j as i64);
    Ok((num * den.inverse()?).pow(e))
}

/// The binomial/Gamma congruence modulo `p^2` for `1 <= j <= (p-1)/2`.
pub fn verify_lemma_bc(p: u64) -> Result<CheckReport> {
    let ring = RingDesc::new(p, 2)?;
    let table = GammaTable::new(&ring)?;
    let mut sweep = Sweep::new(CheckReport::new("lemma_bc").prime(p));
    for j in 1..=(p - 1) / 2 {
        let lhs = bc_binomial(j, &ring)?;
        let rhs = gamma_quotient(&table, j, 2)?;
        sweep.residues(format_args!("j = {j}"), &lhs, &rhs);
    }
    Ok(sweep.finish())
}

/// The harmonic expansions of `A(j) mod p^2` and `B(n, j) mod p`.
pub fn verify_lemma_har(p: u64, ns: &[u64]) -> Result<CheckReport> {
    let report = CheckReport::new("lemma_har").prime(p);
    if p < 7 {
        return Ok(report.skipped("G1/G2 expansion requires p >= 7"));
    }
    let r3 = RingDesc::new(p, 3)?;
    let table = GammaTable::new(&r3)?;
    let derivs = DerivTable::new(&table)?;
    verify_lemma_har_with(&derivs, ns)
}

pub fn verify_lemma_har_with(derivs: &DerivTable, ns: &[u64]) -> Result<CheckReport> {
    let p = derivs.p();
    let h = (p - 1) / 2;
    let r2 = RingDesc::new(p, 2)?;
    let r1 = RingDesc::new(p, 1)?;
    let h1 = HarmonicModTable::new(1, p - 1, &r2)?;
    let h2 = HarmonicModTable::new(2, p - 1, &r1)?;
    let mut sweep = Sweep::new(CheckReport::new("lemma_har").prime(p));
    for j in 0..=h {
        let dh = h1.get(h + j) - h1.get(j);
        let rhs = &dh + r2.elem(2) * odd_square_sum(j, &r2)?.times_p_pow(1);
        sweep.residues(format_args!("A({j})"), &derivs.a(j), &rhs);
        let dh1 = dh.reduce_to(&r1)?;
        let dh2 = h2.get(h + j) - h2.get(j);
        for &n in ns {
            let n1 = r1.elem(n as i64 + 1);
            let half = r1.from_ratio(1, 2)?;
            let rhs = &n1 * &n1 * &half * &dh1 * &dh1 - &n1 * &half * &dh2;
            sweep.residues(format_args!("B({n}, {j})"), &derivs.b(n, j)?, &rhs);
        }
    }
    Ok(sweep.finish())
}

/// `Gamma_p(1/2)^2 = -phi_p(-1)`, checked modulo `p^k` without a table.
pub fn half_gamma_square_check(p: u64, k: u32) -> Result<CheckReport> {
    let ring = RingDesc::new(p, k)?;
    let g = gamma_p_direct(&PadicPoint::from_ratio(1, 2, &ring)?);
    let lhs = &g * &g;
    let rhs = -ring.elem(legendre(-1, p) as i64);
    Ok(CheckReport::new("gamma_half_square")
        .prime(p)
        .compare_residues(&lhs, &rhs))
}

/// `[bc_binomial(j)]^((n+1)/2) == Gamma(1/2+j)^(n+1) / Gamma(1+j)^(n+1) mod p^2`
/// for odd `n` and every `0 <= j <= (p-1)/2`.
pub fn mandy_check(p: u64, n: u64) -> Result<CheckReport> {
    if n % 2 == 0 {
        return Err(Error::EvenNUnsupported(n));
    }
    let ring = RingDesc::new(p, 2)?;
    let table = GammaTable::new(&ring)?;
    let mut sweep = Sweep::new(CheckReport::new("mandy").prime(p).order(n));
    for j in 0..=(p - 1) / 2 {
        let base = if j == 0 {
            ring.sign((p - 1) / 2 + 1)
        } else {
            bc_binomial(j, &ring)?
        };
        let lhs = base.pow((n + 1) / 2);
        let rhs = gamma_quotient(&table, j, n + 1)?;
        sweep.residues(format_args!("j = {j}"), &lhs, &rhs);
    }
    Ok(sweep.finish())
}

/// Right side of the Gross-Koblitz expansion of `-p^n {}_{n+1}F_n(lambda)`
/// modulo `p^k`, for odd `n`, using a table modulo `p^k`.
pub fn nasty_rhs(table: &GammaTable, n: u64, lam: u64) -> Result<Residue> {
    let ring = table.ring();
    let (p, k) = (ring.p(), ring.k());
    if !(NASTY_MIN_K..=NASTY_MAX_K).contains(&k) {
        return Err(Error::Precision {
            k,
            min: NASTY_MIN_K,
            max: NASTY_MAX_K,
        });
    }
    if n % 2 == 0 {
        return Err(Error::EvenNUnsupported(n));
    }
    if lam % p == 0 {
        return Err(Error::NotAUnit {
            value: format!("{lam}"),
            p,
        });
    }
    let h = (p - 1) / 2;
    let e = n + 1;
    let omega = teichmuller_in(&ring.elem(lam as i64))?;
    let inv_pm1 = ring.elem(p as i64 - 1).inverse()?;
    let half = ring.from_ratio(1, 2)?;
    let frac = |j: u64| ring.elem(j as i64) * &inv_pm1;
    let gamma = |x: Residue| table.gamma(&PadicPoint::from_residue(x));
    let mut head = ring.zero();
    let mut omega_j = ring.one();
    let mut tail = ring.zero();
    for j in 0..=p - 2 {
        if j < h {
            let q = gamma(frac(j))? * gamma(&half + &frac(j))?.inverse()?;
            head += q.pow(e) * &omega_j;
        } else if j > h {
            let q = gamma(frac(j))? * gamma(&frac(j) - &half)?.inverse()?;
            tail += q.pow(e) * &omega_j;
        }
        omega_j = omega_j * &omega;
    }
    // (-phi(-1))^((n+1)/2) = (-1)^((h+1)(n+1)/2)
    let pref = ring.sign((h + 1) * e / 2);
    let inner = ring.elem(legendre(lam as i64, p) as i64)
        + pref * (head + tail.times_p_pow(e.min(k as u64) as u32));
    Ok(ring.elem(1 - p as i64).inverse()? * inner)
}

/// [`nasty_rhs`] building its own table modulo `p^k`.
pub fn nasty_rhs_at(n: u64, lam: u64, p: u64, k: u32) -> Result<Residue> {
    if !(NASTY_MIN_K..=NASTY_MAX_K).contains(&k) {
        return Err(Error::Precision {
            k,
            min: NASTY_MIN_K,
            max: NASTY_MAX_K,
        });
    }
    let ring = RingDesc::new(p, k)?;
    nasty_rhs(&GammaTable::new(&ring)?, n, lam)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::harmonic_mod;

    fn ring(p: u64, k: u32) -> RingDesc {
        RingDesc::new(p, k).unwrap()
    }

    #[test]
    fn gamma_examples() {
        let r7 = ring(7, 1);
        let t7 = GammaTable::new(&r7).unwrap();
        assert_eq!(t7.at_int(0), r7.one());
        assert_eq!(t7.at_int(4), r7.elem(6));
        assert_eq!(t7.at_int(1), r7.elem(-1));
        let r25 = ring(5, 2);
        let t25 = GammaTable::new(&r25).unwrap();
        let x = PadicPoint::from_ratio(3, 2, &r25).unwrap();
        assert_eq!(x.representative(), 14);
        assert_eq!(t25.gamma(&x).unwrap(), r25.elem(16));
        assert_eq!(gamma_p_direct(&x), r25.elem(16));
    }

    #[test]
    fn reflection_examples() {
        for p in [3u64, 5, 7] {
            let r = ring(p, 2);
            let t = GammaTable::new(&r).unwrap();
            assert!(reflection_check(&t, &PadicPoint::from_int(1, &r)).unwrap());
            let half = PadicPoint::from_ratio(1, 2, &r).unwrap();
            assert!(reflection_check(&t, &half).unwrap());
        }
        let r = ring(5, 2);
        assert_eq!(PadicPoint::from_ratio(1, 2, &r).unwrap().representative(), 13);
    }

    #[test]
    fn table_invariants_small() {
        for p in [3u64, 5, 7] {
            for k in 1..=3 {
                let t = GammaTable::new(&ring(p, k)).unwrap();
                assert!(verify_gamma_table(&t).is_pass(), "p = {p}, k = {k}");
            }
        }
    }

    #[test]
    fn table_guard() {
        let r = ring(199, 4);
        assert!(matches!(GammaTable::new(&r), Err(Error::TableTooLarge(_))));
    }

    #[test]
    fn g1_g2_examples() {
        let r = ring(7, 3);
        let t = GammaTable::new(&r).unwrap();
        let half = PadicPoint::from_ratio(1, 2, &r).unwrap();
        let d = g1_g2(&t, &half).unwrap();
        assert_eq!(d.g1.ring().k(), 2);
        assert_eq!(d.g2.ring().k(), 1);
        let derivs = DerivTable::new(&t).unwrap();
        let r2 = ring(7, 2);
        assert_eq!(derivs.a(0), harmonic_mod(3, 1, &r2).unwrap());
        let r5 = ring(5, 3);
        let t5 = GammaTable::new(&r5).unwrap();
        assert_eq!(
            g1_g2(&t5, &PadicPoint::from_int(1, &r5)),
            Err(Error::PrimeTooSmall { p: 5, min: 7 })
        );
    }

    #[test]
    fn g1_consistent_along_p() {
        // G1' = G2 - G1^2
        let r = ring(11, 3);
        let t = GammaTable::new(&r).unwrap();
        for x in [1i64, 2, 5] {
            let a = g1_g2(&t, &PadicPoint::from_int(x, &r)).unwrap();
            let b = g1_g2(&t, &PadicPoint::from_int(x + 11, &r)).unwrap();
            let r2 = a.g1.ring().clone();
            let g1 = a.g1.reduce_to(&a.g2.ring().clone()).unwrap();
            let slope = &a.g2 - &(&g1 * &g1);
            let lift = r2.from_biguint(slope.value()).times_p_pow(1);
            assert_eq!(b.g1, &a.g1 + &lift, "x = {x}");
        }
    }

    #[test]
    fn lemma_bc_examples() {
        let r = ring(5, 2);
        assert_eq!(bc_binomial(1, &r).unwrap(), r.elem(6));
        assert!(verify_lemma_bc(5).unwrap().is_pass());
        assert!(verify_lemma_bc(3).unwrap().is_pass());
        assert!(verify_lemma_bc(31).unwrap().is_pass());
    }

    #[test]
    fn lemma_har_small() {
        assert_eq!(verify_lemma_har(5, &[1]).unwrap().status, crate::Status::Skipped);
        for p in [7u64, 11, 13] {
            let r = verify_lemma_har(p, &[1, 2, 3, 4]).unwrap();
            assert!(r.is_pass(), "p = {p}: {}", r.note);
        }
    }

    #[test]
    fn half_gamma_and_mandy() {
        for p in [3u64, 5, 7, 11, 13] {
            assert!(half_gamma_square_check(p, 2).unwrap().is_pass());
            assert!(mandy_check(p, 1).unwrap().is_pass());
            assert!(mandy_check(p, 3).unwrap().is_pass());
        }
    }

    #[test]
    fn nasty_examples() {
        assert_eq!(nasty_rhs_at(1, 1, 3, 3).unwrap(), ring(3, 3).elem(26));
        assert!(matches!(nasty_rhs_at(1, 1, 3, 6), Err(Error::Precision { .. })));
        assert_eq!(nasty_rhs_at(2, 1, 5, 3), Err(Error::EvenNUnsupported(2)));
        let r = ring(7, 3);
        let inv = r.elem(1 - 7).inverse().unwrap();
        assert_eq!(inv, r.elem(1 + 7 + 49));
    }
}
