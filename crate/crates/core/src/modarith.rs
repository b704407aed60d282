//! Modular arithmetic over `Z/p^kZ` for odd primes `p`.
//!
//! [`RingDesc`] describes the ring and is cheap to clone; [`Residue`] is a
//! canonical representative in `[0, p^k)` tagged with its ring. Mixing
//! residues from different rings in an arithmetic operator panics, the
//! fallible conversions go through [`Residue::reduce_to`].

use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Debug)]
struct RingInner {
    p: u64,
    k: u32,
    modulus: BigUint,
}

/// The ring `Z/p^kZ` for an odd prime `p` and `k >= 1`.
#[derive(Clone, Debug)]
pub struct RingDesc(Arc<RingInner>);

impl PartialEq for RingDesc {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.k == other.0.k)
    }
}

impl Eq for RingDesc {}

impl fmt::Display for RingDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}^{}", self.0.p, self.0.k)
    }
}

impl RingDesc {
    /// `Z/p^kZ`. Rejects `p = 2`, composite `p` and `k = 0`.
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidExponent(k));
        }
        let modulus = BigUint::from(p).pow(k);
        Ok(RingDesc(Arc::new(RingInner { p, k, modulus })))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn k(&self) -> u32 {
        self.0.k
    }

    pub fn modulus(&self) -> &BigUint {
        &self.0.modulus
    }

    /// The modulus as a `u64`, when it fits.
    pub fn modulus_u64(&self) -> Option<u64> {
        self.0.modulus.to_u64()
    }

    /// Same prime, different precision.
    pub fn with_precision(&self, k: u32) -> Result<RingDesc> {
        if k == self.k() {
            return Ok(self.clone());
        }
        RingDesc::new(self.p(), k)
    }

    pub fn zero(&self) -> Residue {
        Residue {
            value: BigUint::zero(),
            ring: self.clone(),
        }
    }

    pub fn one(&self) -> Residue {
        Residue {
            value: BigUint::one(),
            ring: self.clone(),
        }
    }

    pub fn elem(&self, v: i64) -> Residue {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_biguint(&self, v: &BigUint) -> Residue {
        Residue {
            value: v % self.modulus(),
            ring: self.clone(),
        }
    }

    /// Canonical representative of an arbitrary integer.
    pub fn from_bigint(&self, v: &BigInt) -> Residue {
        let m = BigInt::from_biguint(Sign::Plus, self.modulus().clone());
        let r = v.mod_floor(&m);
        Residue {
            value: r.to_biguint().expect("mod_floor is non-negative"),
            ring: self.clone(),
        }
    }

    /// `num/den`, which must have `p`-free denominator.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Residue> {
        let d = self.elem(den).inverse()?;
        Ok(self.elem(num) * d)
    }

    pub fn from_rational(&self, r: &BigRational) -> Result<Residue> {
        let d = self.from_bigint(r.denom()).inverse()?;
        Ok(self.from_bigint(r.numer()) * d)
    }

    /// `(-1)^e` as a residue.
    pub fn sign(&self, e: u64) -> Residue {
        if e % 2 == 0 {
            self.one()
        } else {
            self.elem(-1)
        }
    }
}

/// An element of `Z/p^kZ`, stored canonically in `[0, p^k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residue {
    value: BigUint,
    ring: RingDesc,
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Residue {
    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn ring(&self) -> &RingDesc {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        !(&self.value % self.ring.p()).is_zero()
    }

    /// Valuation of the representative at `p`, capped at `k`.
    pub fn valuation(&self) -> u32 {
        let p = BigUint::from(self.ring.p());
        let mut v = 0;
        let mut x = self.value.clone();
        while v < self.ring.k() && !x.is_zero() && (&x % &p).is_zero() {
            x /= &p;
            v += 1;
        }
        if x.is_zero() {
            self.ring.k()
        } else {
            v
        }
    }

    pub fn pow(&self, e: u64) -> Residue {
        Residue {
            value: self.value.modpow(&BigUint::from(e), self.ring.modulus()),
            ring: self.ring.clone(),
        }
    }

    pub fn pow_big(&self, e: &BigUint) -> Residue {
        Residue {
            value: self.value.modpow(e, self.ring.modulus()),
            ring: self.ring.clone(),
        }
    }

    /// Signed exponent; negative powers need a unit.
    pub fn pow_signed(&self, e: i64) -> Result<Residue> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inverse()?.pow(e.unsigned_abs()))
        }
    }

    pub fn inverse(&self) -> Result<Residue> {
        mod_inverse(self)
    }

    /// Reduce to a lower (or equal) precision of the same prime.
    pub fn reduce_to(&self, ring: &RingDesc) -> Result<Residue> {
        if ring.p() != self.ring.p() || ring.k() > self.ring.k() {
            return Err(Error::RingMismatch(alloc::format!(
                "cannot reduce {} to {}",
                self.ring,
                ring
            )));
        }
        Ok(ring.from_biguint(&self.value))
    }

    /// Multiply by `p^e`, keeping the ring.
    pub fn times_p_pow(&self, e: u32) -> Residue {
        let f = BigUint::from(self.ring.p()).pow(e);
        self.ring.from_biguint(&(&self.value * f))
    }

    /// Divide a multiple of `p^e` by `p^e`, landing in `Z/p^(k-e)Z`.
    pub fn div_p_pow(&self, e: u32) -> Result<Residue> {
        let k = self.ring.k();
        if e >= k {
            return Err(Error::Range(alloc::format!("cannot divide by p^{e} in {}", self.ring)));
        }
        let f = BigUint::from(self.ring.p()).pow(e);
        let (q, r) = self.value.div_rem(&f);
        if !r.is_zero() {
            return Err(Error::Range(alloc::format!("{} is not divisible by p^{e}", self.value)));
        }
        Ok(self.ring.with_precision(k - e)?.from_biguint(&q))
    }

    fn check_ring(&self, other: &Residue) {
        assert!(
            self.ring == other.ring,
            "residue ring mismatch: {} vs {}",
            self.ring,
            other.ring
        );
    }
}

impl Add<&Residue> for &Residue {
    type Output = Residue;
    fn add(self, rhs: &Residue) -> Residue {
        self.check_ring(rhs);
        let mut v = &self.value + &rhs.value;
        if &v >= self.ring.modulus() {
            v -= self.ring.modulus();
        }
        Residue {
            value: v,
            ring: self.ring.clone(),
        }
    }
}

impl Sub<&Residue> for &Residue {
    type Output = Residue;
    fn sub(self, rhs: &Residue) -> Residue {
        self.check_ring(rhs);
        let v = if self.value >= rhs.value {
            &self.value - &rhs.value
        } else {
            &self.value + self.ring.modulus() - &rhs.value
        };
        Residue {
            value: v,
            ring: self.ring.clone(),
        }
    }
}

impl Mul<&Residue> for &Residue {
    type Output = Residue;
    fn mul(self, rhs: &Residue) -> Residue {
        self.check_ring(rhs);
        Residue {
            value: (&self.value * &rhs.value) % self.ring.modulus(),
            ring: self.ring.clone(),
        }
    }
}

impl Neg for &Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        if self.value.is_zero() {
            self.clone()
        } else {
            Residue {
                value: self.ring.modulus() - &self.value,
                ring: self.ring.clone(),
            }
        }
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        -&self
    }
}

macro_rules! forward_binop {
    ($tr:ident, $f:ident, $tra:ident, $fa:ident) => {
        impl $tr<Residue> for Residue {
            type Output = Residue;
            fn $f(self, rhs: Residue) -> Residue {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Residue> for Residue {
            type Output = Residue;
            fn $f(self, rhs: &Residue) -> Residue {
                (&self).$f(rhs)
            }
        }
        impl $tr<Residue> for &Residue {
            type Output = Residue;
            fn $f(self, rhs: Residue) -> Residue {
                self.$f(&rhs)
            }
        }
        impl $tra<&Residue> for Residue {
            fn $fa(&mut self, rhs: &Residue) {
                *self = (&*self).$f(rhs);
            }
        }
        impl $tra<Residue> for Residue {
            fn $fa(&mut self, rhs: Residue) {
                *self = (&*self).$f(&rhs);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);

/// Deterministic Miller-Rabin for `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_odd_prime(n: u64) -> bool {
    n != 2 && is_prime(n)
}

pub(crate) fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod_u64(r, b, m);
        }
        b = mul_mod_u64(b, b, m);
        e >>= 1;
    }
    r
}

/// All primes `<= bound`, ascending (sieve of Eratosthenes).
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Odd primes `<= bound`.
pub fn odd_primes_up_to(bound: u64) -> Vec<u64> {
    primes_up_to(bound).into_iter().filter(|&p| p != 2).collect()
}

/// Inverse of a unit modulo `p^k` (extended Euclid).
pub fn mod_inverse(a: &Residue) -> Result<Residue> {
    let ring = a.ring();
    if !a.is_unit() {
        return Err(Error::NotInvertible {
            value: a.value().to_string(),
            p: ring.p(),
            k: ring.k(),
        });
    }
    let x = BigInt::from_biguint(Sign::Plus, a.value().clone());
    let m = BigInt::from_biguint(Sign::Plus, ring.modulus().clone());
    let eg = x.extended_gcd(&m);
    debug_assert!(eg.gcd.is_one());
    Ok(ring.from_bigint(&eg.x))
}

/// Legendre symbol via Euler's criterion; `0` when `p | a`.
pub fn legendre(a: i64, p: u64) -> i8 {
    let r = (a as i128).rem_euclid(p as i128) as u64;
    if r == 0 {
        return 0;
    }
    match pow_mod_u64(r, (p - 1) / 2, p) {
        1 => 1,
        x if x == p - 1 => -1,
        _ => panic!("Euler criterion failed: {p} is not prime"),
    }
}

/// Teichmuller lift `omega(lam)` modulo `p^s`, computed as `lam^(p^(s-1))`
/// by `s-1` successive `p`-th powers.
pub fn teichmuller(lam: i64, p: u64, s: u32) -> Result<Residue> {
    let ring = RingDesc::new(p, s)?;
    teichmuller_in(&ring.elem(lam))
}

/// Teichmuller lift of a residue, in that residue's ring.
pub fn teichmuller_in(lam: &Residue) -> Result<Residue> {
    let ring = lam.ring();
    if !lam.is_unit() {
        return Err(Error::NotAUnit {
            value: lam.value().to_string(),
            p: ring.p(),
        });
    }
    let mut x = lam.clone();
    for _ in 1..ring.k() {
        x = x.pow(ring.p());
    }
    Ok(x)
}

/// `C(top, bot)` modulo `p^k` for `0 <= bot <= top <= p-1`.
pub fn binomial_mod(top: u64, bot: u64, ring: &RingDesc) -> Result<Residue> {
    if bot > top {
        return Err(Error::Range(alloc::format!("C({top}, {bot}) has bot > top")));
    }
    if top >= ring.p() {
        return Err(Error::Range(alloc::format!(
            "C({top}, {bot}) needs top < p = {}",
            ring.p()
        )));
    }
    let mut num = ring.one();
    let mut den = ring.one();
    for i in 1..=bot {
        num *= ring.elem((top - bot + i) as i64);
        den *= ring.elem(i as i64);
    }
    Ok(num * den.inverse()?)
}

/// Exact integer binomial; zero when `bot > top`.
pub fn binomial(top: u64, bot: u64) -> BigUint {
    if bot > top {
        return BigUint::zero();
    }
    let bot = bot.min(top - bot);
    let mut acc = BigUint::one();
    for i in 1..=bot {
        acc = acc * BigUint::from(top - bot + i) / BigUint::from(i);
    }
    acc
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// `phi_p(x)` as `-1`, `0` or `1` lifted into the ring.
pub fn legendre_residue(a: i64, ring: &RingDesc) -> Residue {
    ring.elem(legendre(a, ring.p()) as i64)
}

/// Symmetric representative in `(-p^k/2, p^k/2]`.
pub fn signed_value(x: &Residue) -> BigInt {
    let m = BigInt::from_biguint(Sign::Plus, x.ring().modulus().clone());
    let v = BigInt::from_biguint(Sign::Plus, x.value().clone());
    if &v * 2 > m {
        v - m
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u64, k: u32) -> RingDesc {
        RingDesc::new(p, k).unwrap()
    }

    #[test]
    fn sieve_small_cases() {
        assert_eq!(primes_up_to(10), vec![2, 3, 5, 7]);
        assert_eq!(primes_up_to(2), vec![2]);
        assert!(primes_up_to(1).is_empty());
    }

    #[test]
    fn sieve_count_matches_trial_division() {
        let trial = (2..=5000u64)
            .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .count();
        assert_eq!(trial, 669);
        assert_eq!(primes_up_to(5000).len(), trial);
    }

    #[test]
    fn miller_rabin_agrees_with_sieve() {
        let sieve = primes_up_to(20_000);
        let mr: Vec<u64> = (0..=20_000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieve, mr);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
    }

    #[test]
    fn ring_rejects_two_and_composites() {
        assert_eq!(RingDesc::new(2, 3), Err(Error::InvalidPrime(2)));
        assert_eq!(RingDesc::new(9, 1), Err(Error::InvalidPrime(9)));
        assert_eq!(RingDesc::new(5, 0), Err(Error::InvalidExponent(0)));
        assert_eq!(ring(3, 3).modulus(), &BigUint::from(27u32));
    }

    #[test]
    fn negative_values_normalise() {
        let r = ring(3, 3);
        assert_eq!(r.elem(-1).value(), &BigUint::from(26u32));
        assert_eq!(r.elem(-28).value(), &BigUint::from(26u32));
        assert_eq!((r.elem(5) - r.elem(7)).value(), &BigUint::from(25u32));
        assert_eq!(signed_value(&r.elem(26)), BigInt::from(-1));
    }

    #[test]
    fn inverse_examples() {
        let r = ring(3, 3);
        assert_eq!(r.elem(16).inverse().unwrap(), r.elem(22));
        assert_eq!(r.elem(4).inverse().unwrap(), r.elem(7));
        assert_eq!(r.one().inverse().unwrap(), r.one());
        assert!(matches!(r.elem(6).inverse(), Err(Error::NotInvertible { .. })));
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(-1, 3), -1);
        assert_eq!(legendre(-1, 5), 1);
        assert_eq!(legendre(0, 7), 0);
        assert_eq!(legendre(14, 7), 0);
        assert_eq!(legendre(2, 7), 1);
        assert_eq!(legendre(3, 7), -1);
    }

    #[test]
    fn teichmuller_examples() {
        assert_eq!(teichmuller(1, 7, 4).unwrap(), ring(7, 4).one());
        assert_eq!(teichmuller(2, 5, 1).unwrap(), ring(5, 1).elem(2));
        assert_eq!(teichmuller(2, 5, 2).unwrap(), ring(5, 2).elem(7));
        assert_eq!(ring(5, 2).elem(7).pow(4), ring(5, 2).one());
        assert!(matches!(teichmuller(10, 5, 2), Err(Error::NotAUnit { .. })));
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial_mod(2, 1, &ring(3, 3)).unwrap(), ring(3, 3).elem(2));
        assert_eq!(binomial_mod(4, 0, &ring(5, 3)).unwrap(), ring(5, 3).one());
        assert_eq!(binomial_mod(4, 2, &ring(5, 3)).unwrap(), ring(5, 3).elem(6));
        assert!(matches!(binomial_mod(5, 2, &ring(5, 3)), Err(Error::Range(_))));
        assert_eq!(binomial(10, 3), BigUint::from(120u32));
        assert_eq!(binomial(3, 10), BigUint::zero());
    }

    #[test]
    fn valuation_and_p_division() {
        let r = ring(5, 3);
        assert_eq!(r.elem(50).valuation(), 2);
        assert_eq!(r.zero().valuation(), 3);
        assert_eq!(r.elem(50).div_p_pow(2).unwrap(), ring(5, 1).elem(2));
        assert!(r.elem(51).div_p_pow(1).is_err());
        assert_eq!(r.elem(3).times_p_pow(2), r.elem(75));
    }

    #[test]
    #[should_panic(expected = "ring mismatch")]
    fn mixing_rings_panics() {
        let _ = ring(3, 2).one() + ring(3, 3).one();
    }
}
