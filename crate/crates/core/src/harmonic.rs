//! Generalised harmonic sums `H_n^(i) = sum_{j=1}^n j^(-i)`, exact and
//! modulo `p^k`, with prefix tables for dense sweeps.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::modarith::{Residue, RingDesc};

/// `H_n^(i)` exactly. `harmonic(0, i) = 0`.
pub fn harmonic(n: u64, i: u32) -> BigRational {
    (1..=n).fold(BigRational::zero(), |acc, j| {
        acc + BigRational::new(BigInt::from(1), BigInt::from(j).pow(i))
    })
}

/// `H_n^(i)` modulo `p^k`; requires `n < p` so no `1/p` term appears.
pub fn harmonic_mod(n: u64, i: u32, ring: &RingDesc) -> Result<Residue> {
    if n >= ring.p() {
        return Err(Error::Range(format!(
            "H_{n}^({i}) has a term 1/p modulo p = {}",
            ring.p()
        )));
    }
    let mut acc = ring.zero();
    for j in 1..=n {
        acc += ring.elem(j as i64).pow(i as u64).inverse()?;
    }
    Ok(acc)
}

/// `sum_{r=0}^{j-1} 1/(2r+1)^2` modulo `p^k`; the empty sum is 0.
pub fn odd_square_sum(j: u64, ring: &RingDesc) -> Result<Residue> {
    let mut acc = ring.zero();
    for r in 0..j {
        let d = 2 * r + 1;
        if d % ring.p() == 0 {
            return Err(Error::Range(format!(
                "1/{d}^2 is not defined modulo p = {}",
                ring.p()
            )));
        }
        acc += ring.elem(d as i64).pow(2).inverse()?;
    }
    Ok(acc)
}

/// Exact prefix table `H_0^(i), ..., H_N^(i)`.
#[derive(Clone, Debug)]
pub struct HarmonicTable {
    order: u32,
    values: Vec<BigRational>,
}

impl HarmonicTable {
    pub fn new(order: u32, upto: u64) -> Self {
        let mut values = Vec::with_capacity(upto as usize + 1);
        values.push(BigRational::zero());
        for j in 1..=upto {
            let next = &values[j as usize - 1]
                + BigRational::new(BigInt::from(1), BigInt::from(j).pow(order));
            values.push(next);
        }
        HarmonicTable { order, values }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn upto(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn get(&self, n: u64) -> &BigRational {
        &self.values[n as usize]
    }
}

/// Modular prefix table `H_0^(i), ..., H_N^(i)` with `N < p`.
#[derive(Clone, Debug)]
pub struct HarmonicModTable {
    order: u32,
    values: Vec<Residue>,
}

impl HarmonicModTable {
    pub fn new(order: u32, upto: u64, ring: &RingDesc) -> Result<Self> {
        if upto >= ring.p() {
            return Err(Error::Range(format!(
                "harmonic table up to {upto} crosses p = {}",
                ring.p()
            )));
        }
        let mut values = Vec::with_capacity(upto as usize + 1);
        values.push(ring.zero());
        for j in 1..=upto {
            let term = ring.elem(j as i64).pow(order as u64).inverse()?;
            let next = &values[j as usize - 1] + &term;
            values.push(next);
        }
        Ok(HarmonicModTable { order, values })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn get(&self, n: u64) -> &Residue {
        &self.values[n as usize]
    }
}

/// Exact tables for orders `1..=max_order`, shared read-only once built.
#[derive(Clone, Debug)]
pub struct HarmonicCache {
    tables: Vec<HarmonicTable>,
}

impl HarmonicCache {
    pub fn new(max_order: u32, upto: u64) -> Self {
        HarmonicCache {
            tables: (1..=max_order).map(|i| HarmonicTable::new(i, upto)).collect(),
        }
    }

    pub fn upto(&self) -> u64 {
        self.tables.first().map_or(0, HarmonicTable::upto)
    }

    /// `H_n^(i)`; panics if the cache was built too small.
    pub fn get(&self, n: u64, i: u32) -> &BigRational {
        self.tables[i as usize - 1].get(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn exact_examples() {
        assert_eq!(harmonic(0, 1), q(0, 1));
        assert_eq!(harmonic(3, 1), q(11, 6));
        assert_eq!(harmonic(2, 2), q(5, 4));
    }

    #[test]
    fn modular_examples() {
        let r27 = RingDesc::new(3, 3).unwrap();
        assert!(harmonic_mod(0, 1, &r27).unwrap().is_zero());
        assert_eq!(harmonic_mod(2, 1, &r27).unwrap(), r27.elem(15));
        let r25 = RingDesc::new(5, 2).unwrap();
        assert!(harmonic_mod(4, 1, &r25).unwrap().is_zero());
        assert!(matches!(harmonic_mod(5, 1, &r25), Err(Error::Range(_))));
    }

    #[test]
    fn odd_square_examples() {
        let r49 = RingDesc::new(7, 2).unwrap();
        assert!(odd_square_sum(0, &r49).unwrap().is_zero());
        assert_eq!(odd_square_sum(2, &r49).unwrap(), r49.elem(12));
        let r343 = RingDesc::new(7, 3).unwrap();
        assert_eq!(odd_square_sum(1, &r343).unwrap(), r343.one());
        assert!(odd_square_sum(4, &r49).is_err());
    }

    #[test]
    fn tables_match_direct_sums() {
        let t = HarmonicTable::new(2, 30);
        for n in 0..=30 {
            assert_eq!(t.get(n), &harmonic(n, 2));
        }
        let ring = RingDesc::new(31, 3).unwrap();
        let tm = HarmonicModTable::new(1, 30, &ring).unwrap();
        for n in 0..=30 {
            assert_eq!(tm.get(n), &harmonic_mod(n, 1, &ring).unwrap());
            assert_eq!(tm.get(n), &ring.from_rational(&harmonic(n, 1)).unwrap());
        }
    }

    #[test]
    fn wolstenholme_smoke() {
        for p in [5u64, 7, 11, 13, 17, 19, 23] {
            let num = harmonic(p - 1, 1).numer().clone();
            assert_eq!(num % BigInt::from(p * p), BigInt::zero(), "p = {p}");
        }
    }
}
