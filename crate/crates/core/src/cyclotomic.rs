//! Exact arithmetic in `Z[zeta_m]` and the character-sum oracle for
//! Greene's hypergeometric functions over `F_p`.
//!
//! Elements of `Z[zeta_m]` are coordinate vectors over the power basis
//! `1, zeta, ..., zeta^(phi(m)-1)` of `Z[x]/Phi_m(x)`. Because the basis is
//! a genuine basis, "this character sum is a rational integer" is the
//! checkable statement "every coordinate above the constant is zero".
//!
//! Characters of `F_p^*` are indexed by their exponent on a fixed
//! generator `g` (the smallest primitive root): `chi_t(g^a) = zeta^(t a)`
//! with `zeta = zeta_{p-1}`, and every character is extended by
//! `chi(0) = 0`, the trivial one included.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::modarith::{is_odd_prime, pow_mod_u64, Residue};

/// Default guard for [`FiniteFieldChars::hypergeometric_def2`].
pub const DEF2_PRIME_LIMIT: u64 = 31;
/// Default guard for [`FiniteFieldChars::hypergeometric_int`].
pub const INT_PRIME_LIMIT: u64 = 61;

/// `Phi_m(x)` as integer coefficients, lowest degree first.
pub fn cyclotomic_poly(m: u64) -> Vec<i64> {
    assert!(m >= 1, "cyclotomic_poly needs m >= 1");
    let mut memo = BTreeMap::new();
    cyclotomic_memo(m, &mut memo)
}

fn cyclotomic_memo(m: u64, memo: &mut BTreeMap<u64, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = memo.get(&m) {
        return p.clone();
    }
    // x^m - 1
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            let phi_d = cyclotomic_memo(d, memo);
            num = div_exact_monic(&num, &phi_d);
        }
    }
    memo.insert(m, num.clone());
    num
}

fn div_exact_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    debug_assert_eq!(den[dn], 1);
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut q = vec![0i64; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    q
}

/// Smallest positive primitive root modulo an odd prime.
pub fn primitive_root(p: u64) -> Result<u64> {
    if !is_odd_prime(p) {
        return Err(Error::InvalidPrime(p));
    }
    let order = p - 1;
    let mut factors = Vec::new();
    let mut r = order;
    let mut q = 2;
    while q * q <= r {
        if r % q == 0 {
            factors.push(q);
            while r % q == 0 {
                r /= q;
            }
        }
        q += 1;
    }
    if r > 1 {
        factors.push(r);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod_u64(g, order / q, p) != 1))
        .ok_or(Error::InvalidPrime(p))
        .or(if p == 3 { Ok(2) } else { Err(Error::InvalidPrime(p)) })
}

/// `Z[x]/Phi_m(x)` with precomputed reductions of `x^e`, `0 <= e < m`.
#[derive(Clone, Debug)]
pub struct CycRing {
    m: u64,
    poly: Vec<i64>,
    powers: Vec<Vec<i64>>,
}

/// An element of `Z[zeta_m]` in power-basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycInt {
    coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// True iff the element lies in `Z`.
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(Zero::is_zero)
    }

    pub fn constant(&self) -> &BigInt {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl CycRing {
    pub fn new(m: u64) -> Self {
        let poly = cyclotomic_poly(m);
        let phi = poly.len() - 1;
        let mut powers = Vec::with_capacity(m as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..m {
            powers.push(cur.clone());
            // multiply by x, reduce the x^phi coordinate with the monic poly
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for (i, c) in cur.iter_mut().enumerate() {
                    *c -= top * poly[i];
                }
            }
        }
        CycRing { m, poly, powers }
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    /// `phi(m)`, the length of every coordinate vector.
    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn polynomial(&self) -> &[i64] {
        &self.poly
    }

    pub fn zero(&self) -> CycInt {
        CycInt {
            coeffs: vec![BigInt::zero(); self.degree()],
        }
    }

    pub fn from_int(&self, v: impl Into<BigInt>) -> CycInt {
        let mut z = self.zero();
        z.coeffs[0] = v.into();
        z
    }

    pub fn one(&self) -> CycInt {
        self.from_int(1)
    }

    /// `zeta^e` for any integer exponent.
    pub fn zeta_pow(&self, e: i64) -> CycInt {
        let e = e.rem_euclid(self.m as i64) as usize;
        CycInt {
            coeffs: self.powers[e].iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    /// Reduce `sum_e v[e] x^e` (exponents taken mod `m`) into the basis.
    pub fn reduce_cyclic(&self, v: &[BigInt]) -> CycInt {
        let mut out = self.zero();
        for (e, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &self.powers[e % self.m as usize];
            for (o, &r) in out.coeffs.iter_mut().zip(row) {
                if r != 0 {
                    *o += c * r;
                }
            }
        }
        out
    }

    /// Same as [`reduce_cyclic`](Self::reduce_cyclic) for small counts.
    pub fn reduce_counts(&self, counts: &[i64]) -> CycInt {
        let mut acc = vec![0i128; self.degree()];
        for (e, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let row = &self.powers[e % self.m as usize];
            for (o, &r) in acc.iter_mut().zip(row) {
                *o += c as i128 * r as i128;
            }
        }
        CycInt {
            coeffs: acc.into_iter().map(BigInt::from).collect(),
        }
    }

    pub fn add(&self, a: &CycInt, b: &CycInt) -> CycInt {
        CycInt {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, a: &CycInt, b: &CycInt) -> CycInt {
        CycInt {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn scale(&self, a: &CycInt, s: &BigInt) -> CycInt {
        CycInt {
            coeffs: a.coeffs.iter().map(|x| x * s).collect(),
        }
    }

    pub fn mul(&self, a: &CycInt, b: &CycInt) -> CycInt {
        let m = self.m as usize;
        let mut acc = vec![BigInt::zero(); m];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    acc[(i + j) % m] += x * y;
                }
            }
        }
        self.reduce_cyclic(&acc)
    }

    pub fn pow(&self, a: &CycInt, mut e: u64) -> CycInt {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Complex conjugation `zeta -> zeta^(-1)`.
    pub fn conj(&self, a: &CycInt) -> CycInt {
        let m = self.m as usize;
        let mut acc = vec![BigInt::zero(); m];
        for (i, x) in a.coeffs.iter().enumerate() {
            acc[(m - i) % m] += x;
        }
        self.reduce_cyclic(&acc)
    }

    /// Image under `zeta -> z`, where `z` must be a root of `Phi_m` in the
    /// residue ring (e.g. a Teichmuller lift of a generator).
    pub fn evaluate_at(&self, a: &CycInt, z: &Residue) -> Residue {
        let ring = z.ring();
        let mut acc = ring.zero();
        let mut zp = ring.one();
        for c in &a.coeffs {
            acc += ring.from_bigint(c) * &zp;
            zp = zp * z;
        }
        acc
    }
}

/// A multiplicative character `chi_t` of `F_p^*` relative to generator `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MultChar {
    pub t: u64,
    pub p: u64,
    pub g: u64,
}

impl MultChar {
    pub fn is_trivial(&self) -> bool {
        self.t == 0
    }

    pub fn mul(&self, other: &MultChar) -> MultChar {
        assert_eq!(self.p, other.p, "characters of different fields");
        MultChar {
            t: (self.t + other.t) % (self.p - 1),
            ..*self
        }
    }

    pub fn conj(&self) -> MultChar {
        MultChar {
            t: (self.p - 1 - self.t) % (self.p - 1),
            ..*self
        }
    }
}

/// Discrete logarithms to base `g` for `F_p^*`.
#[derive(Clone, Debug)]
pub struct CharTable {
    p: u64,
    g: u64,
    dlog: Vec<u64>,
}

impl CharTable {
    pub fn new(p: u64) -> Result<Self> {
        let g = primitive_root(p)?;
        let mut dlog = vec![0u64; p as usize];
        let mut x = 1u64;
        for a in 0..p - 1 {
            dlog[x as usize] = a;
            x = x * g % p;
        }
        Ok(CharTable { p, g, dlog })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn generator(&self) -> u64 {
        self.g
    }

    /// `log_g(a)` for `a` a unit.
    pub fn log(&self, a: u64) -> Option<u64> {
        let a = a % self.p;
        (a != 0).then(|| self.dlog[a as usize])
    }

    pub fn char(&self, t: u64) -> MultChar {
        MultChar {
            t: t % (self.p - 1),
            p: self.p,
            g: self.g,
        }
    }

    /// The trivial character `epsilon_p`.
    pub fn trivial(&self) -> MultChar {
        self.char(0)
    }

    /// The quadratic character `phi_p`.
    pub fn quadratic(&self) -> MultChar {
        self.char((self.p - 1) / 2)
    }

    pub fn all(&self) -> impl Iterator<Item = MultChar> + '_ {
        (0..self.p - 1).map(move |t| self.char(t))
    }

    /// Exponent `e` with `chi(x) = zeta^e`, or `None` when `x = 0`.
    pub fn exponent(&self, chi: &MultChar, x: u64) -> Option<u64> {
        self.log(x).map(|a| chi.t * a % (self.p - 1))
    }
}

/// `B(-1) J(A, conj B)` over denominator `p`, i.e. Greene's character binomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreeneBinomial {
    pub numerator: CycInt,
    pub denominator: u64,
}

/// Characters of `F_p` together with `Z[zeta_{p-1}]`: the exact oracle.
#[derive(Clone, Debug)]
pub struct FiniteFieldChars {
    table: CharTable,
    ring: CycRing,
    def2_limit: u64,
    int_limit: u64,
}

impl FiniteFieldChars {
    pub fn new(p: u64) -> Result<Self> {
        let table = CharTable::new(p)?;
        Ok(FiniteFieldChars {
            ring: CycRing::new(p - 1),
            table,
            def2_limit: DEF2_PRIME_LIMIT,
            int_limit: INT_PRIME_LIMIT,
        })
    }

    /// Override the oracle guards.
    pub fn with_limits(mut self, def2: u64, int: u64) -> Self {
        self.def2_limit = def2;
        self.int_limit = int;
        self
    }

    /// Lift every guard.
    pub fn unguarded(self) -> Self {
        self.with_limits(u64::MAX, u64::MAX)
    }

    pub fn p(&self) -> u64 {
        self.table.p
    }

    pub fn table(&self) -> &CharTable {
        &self.table
    }

    pub fn ring(&self) -> &CycRing {
        &self.ring
    }

    /// `chi(x)` as an element of `Z[zeta]` (zero at `x = 0`).
    pub fn char_value(&self, chi: &MultChar, x: u64) -> CycInt {
        match self.table.exponent(chi, x) {
            Some(e) => self.ring.zeta_pow(e as i64),
            None => self.ring.zero(),
        }
    }

    /// `J(chi, psi) = sum_x chi(x) psi(1-x)`.
    pub fn jacobi_sum(&self, chi: &MultChar, psi: &MultChar) -> CycInt {
        let p = self.p();
        let m = (p - 1) as usize;
        let mut counts = vec![0i64; m];
        // x = 0 and x = 1 contribute nothing since chi(0) = psi(0) = 0
        for x in 2..p {
            let a = self.table.exponent(chi, x).expect("unit");
            let b = self.table.exponent(psi, p + 1 - x).expect("unit");
            counts[((a + b) % (p - 1)) as usize] += 1;
        }
        self.ring.reduce_counts(&counts)
    }

    pub fn greene_binomial(&self, a: &MultChar, b: &MultChar) -> GreeneBinomial {
        let j = self.jacobi_sum(a, &b.conj());
        let sign = self.char_value(b, self.p() - 1);
        GreeneBinomial {
            numerator: self.ring.mul(&sign, &j),
            denominator: self.p(),
        }
    }

    /// Greene's `{}_{n+1}F_n(A_0..A_n; B_1..B_n | x)` evaluated from its
    /// character-sum definition, asserted rational.
    pub fn hypergeometric_def2(
        &self,
        tops: &[MultChar],
        bots: &[MultChar],
        x: u64,
    ) -> Result<BigRational> {
        let p = self.p();
        if p > self.def2_limit {
            return Err(Error::OracleGuard {
                p,
                limit: self.def2_limit,
            });
        }
        if tops.is_empty() || tops.len() != bots.len() + 1 {
            return Err(Error::Range(alloc::format!(
                "expected n+1 top and n bottom characters, got {} and {}",
                tops.len(),
                bots.len()
            )));
        }
        let n = bots.len() as u32;
        let eps = self.table.trivial();
        let mut total = self.ring.zero();
        for chi in self.table.all() {
            let cx = self.char_value(&chi, x);
            if cx.is_zero() {
                continue;
            }
            let mut term = cx;
            for (i, a) in tops.iter().enumerate() {
                let b = if i == 0 { eps } else { bots[i - 1] };
                let bin = self.greene_binomial(&a.mul(&chi), &b.mul(&chi));
                term = self.ring.mul(&term, &bin.numerator);
            }
            total = self.ring.add(&total, &term);
        }
        if !total.is_rational() {
            return Err(Error::NonRationalResult);
        }
        // p/(p-1) * p^-(n+1) * total
        let den = BigInt::from(p - 1) * BigInt::from(p).pow(n);
        Ok(BigRational::new(total.constant().clone(), den))
    }

    /// `J(phi, chi_t)` for every `t`, computed once per prime.
    pub fn jacobi_table(&self) -> Vec<CycInt> {
        let phi = self.table.quadratic();
        self.table.all().map(|chi| self.jacobi_sum(&phi, &chi)).collect()
    }

    /// `J(phi, chi_t)^(n+1)` for every `t`.
    pub fn jacobi_powers(&self, n: u64) -> Vec<CycInt> {
        self.jacobi_table()
            .iter()
            .map(|j| self.ring.pow(j, n + 1))
            .collect()
    }

    /// The integer `p^n {}_{n+1}F_n(lam)` (all tops `phi`, all bottoms
    /// `epsilon`), from `-p^n F = (1/(1-p)) sum_chi J(phi,chi)^(n+1) conj(chi)(lam)`.
    pub fn hypergeometric_int(&self, n: u64, lam: u64) -> Result<BigInt> {
        self.check_int_guard()?;
        let powers = self.jacobi_powers(n);
        self.hypergeometric_int_with(&powers, lam)
    }

    fn check_int_guard(&self) -> Result<()> {
        if self.p() > self.int_limit {
            return Err(Error::OracleGuard {
                p: self.p(),
                limit: self.int_limit,
            });
        }
        Ok(())
    }

    /// Same as [`hypergeometric_int`](Self::hypergeometric_int) reusing
    /// precomputed [`jacobi_powers`](Self::jacobi_powers).
    pub fn hypergeometric_int_with(&self, powers: &[CycInt], lam: u64) -> Result<BigInt> {
        self.check_int_guard()?;
        let p = self.p();
        let m = (p - 1) as usize;
        let a = self
            .table
            .log(lam)
            .ok_or_else(|| Error::Range(alloc::format!("lambda = {lam} is not a unit mod {p}")))?;
        let mut acc = vec![BigInt::zero(); m];
        for (t, pw) in powers.iter().enumerate() {
            // conj(chi_t)(lam) = zeta^(-t a)
            let shift = (m - (t as u64 * a % m as u64) as usize) % m;
            for (i, c) in pw.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    acc[(i + shift) % m] += c;
                }
            }
        }
        let sum = self.ring.reduce_cyclic(&acc);
        if !sum.is_rational() {
            return Err(Error::NonIntegerResult);
        }
        let (q, r) = sum.constant().div_rem(&BigInt::from(p - 1));
        if !r.is_zero() {
            return Err(Error::NonIntegerResult);
        }
        Ok(q)
    }

    /// Orthogonality sum `sum_{a in F_p^*} chi(a)`.
    pub fn character_sum(&self, chi: &MultChar) -> CycInt {
        let mut counts = vec![0i64; (self.p() - 1) as usize];
        for x in 1..self.p() {
            counts[self.table.exponent(chi, x).expect("unit") as usize] += 1;
        }
        self.ring.reduce_counts(&counts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_poly(7), vec![1; 7]);
    }

    #[test]
    fn cyclotomic_degree_is_totient() {
        for m in 1..=60u64 {
            let phi = (1..=m).filter(|&k| k.gcd(&m) == 1).count();
            assert_eq!(cyclotomic_poly(m).len() - 1, phi, "m = {m}");
        }
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(primitive_root(3).unwrap(), 2);
        assert_eq!(primitive_root(5).unwrap(), 2);
        assert_eq!(primitive_root(7).unwrap(), 3);
        assert_eq!(primitive_root(23).unwrap(), 5);
        assert!(primitive_root(2).is_err());
    }

    #[test]
    fn zeta_has_order_m() {
        let r = CycRing::new(12);
        assert_eq!(r.zeta_pow(12), r.one());
        assert_eq!(r.zeta_pow(6), r.from_int(-1));
        assert_eq!(r.mul(&r.zeta_pow(5), &r.zeta_pow(9)), r.zeta_pow(2));
        assert_eq!(r.conj(&r.zeta_pow(5)), r.zeta_pow(-5));
    }

    #[test]
    fn jacobi_examples() {
        let f5 = FiniteFieldChars::new(5).unwrap();
        let phi = f5.table().quadratic();
        let eps = f5.table().trivial();
        assert_eq!(f5.jacobi_sum(&phi, &phi), f5.ring().from_int(-1));
        for p in [3u64, 5, 7, 11] {
            let f = FiniteFieldChars::new(p).unwrap();
            let e = f.table().trivial();
            assert_eq!(f.jacobi_sum(&e, &e), f.ring().from_int(p as i64 - 2));
        }
        let f3 = FiniteFieldChars::new(3).unwrap();
        let phi3 = f3.table().quadratic();
        assert_eq!(f3.jacobi_sum(&phi3, &f3.table().trivial()), f3.ring().from_int(-1));
        let _ = eps;
    }

    #[test]
    fn greene_binomial_examples() {
        let f3 = FiniteFieldChars::new(3).unwrap();
        let (e3, phi3) = (f3.table().trivial(), f3.table().quadratic());
        let b = f3.greene_binomial(&e3, &e3);
        assert_eq!((b.numerator, b.denominator), (f3.ring().from_int(1), 3));
        let b = f3.greene_binomial(&phi3, &e3);
        assert_eq!((b.numerator, b.denominator), (f3.ring().from_int(-1), 3));
        let f5 = FiniteFieldChars::new(5).unwrap();
        let phi5 = f5.table().quadratic();
        let b = f5.greene_binomial(&phi5, &phi5);
        assert_eq!((b.numerator, b.denominator), (f5.ring().from_int(-1), 5));
    }

    #[test]
    fn def2_examples() {
        let f3 = FiniteFieldChars::new(3).unwrap();
        let phi = f3.table().quadratic();
        let eps = f3.table().trivial();
        let v = f3.hypergeometric_def2(&[phi, phi], &[eps], 1).unwrap();
        assert_eq!(v, BigRational::new(1.into(), 3.into()));
        let v0 = f3.hypergeometric_def2(&[phi, phi], &[eps], 0).unwrap();
        assert!(v0.is_zero());
        let f37 = FiniteFieldChars::new(37).unwrap();
        let phi37 = f37.table().quadratic();
        let eps37 = f37.table().trivial();
        assert_eq!(
            f37.hypergeometric_def2(&[phi37, phi37], &[eps37], 1),
            Err(Error::OracleGuard { p: 37, limit: 31 })
        );
    }

    #[test]
    fn hypergeometric_int_examples() {
        for (p, expected) in [(3u64, 1i64), (5, -1), (13, -1)] {
            let f = FiniteFieldChars::new(p).unwrap();
            assert_eq!(f.hypergeometric_int(1, 1).unwrap(), BigInt::from(expected), "p = {p}");
        }
        let f67 = FiniteFieldChars::new(67).unwrap();
        assert!(matches!(f67.hypergeometric_int(1, 1), Err(Error::OracleGuard { .. })));
        assert!(FiniteFieldChars::new(67).unwrap().unguarded().hypergeometric_int(1, 1).is_ok());
    }

    #[test]
    fn orthogonality() {
        for p in [3u64, 5, 7, 11, 13] {
            let f = FiniteFieldChars::new(p).unwrap();
            for chi in f.table().all() {
                let expected = if chi.is_trivial() { p as i64 - 1 } else { 0 };
                assert_eq!(f.character_sum(&chi), f.ring().from_int(expected));
            }
        }
    }
}
