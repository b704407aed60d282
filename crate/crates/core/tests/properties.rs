use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use supercong_core::cyclotomic::FiniteFieldChars;
use supercong_core::harmonic::{harmonic, harmonic_mod};
use supercong_core::identities::{eval_identity, IdentityId, Memo};
use supercong_core::modarith::{
    binomial, binomial_mod, is_prime, odd_primes_up_to, teichmuller, RingDesc,
};
use supercong_core::padic::{reflection_check, GammaTable, PadicPoint};

fn odd_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(odd_primes_up_to(200))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_is_inverse(p in odd_prime(), k in 1u32..=5, a in 1i64..1_000_000) {
        let ring = RingDesc::new(p, k).unwrap();
        let x = ring.elem(a);
        if a % p as i64 == 0 {
            prop_assert!(x.inverse().is_err());
        } else {
            prop_assert_eq!(&x * x.inverse().unwrap(), ring.one());
        }
    }

    #[test]
    fn teichmuller_is_a_root_of_unity(p in odd_prime(), s in 1u32..=4, lam in 1i64..10_000) {
        prop_assume!(lam % p as i64 != 0);
        let w = teichmuller(lam, p, s).unwrap();
        prop_assert_eq!(w.pow(p - 1), w.ring().one());
        let r1 = RingDesc::new(p, 1).unwrap();
        prop_assert_eq!(w.reduce_to(&r1).unwrap(), r1.elem(lam));
    }

    #[test]
    fn binomial_mod_matches_exact(p in odd_prime(), k in 1u32..=3, top in 0u64..60, bot in 0u64..60) {
        prop_assume!(bot <= top);
        let ring = RingDesc::new(p, k).unwrap();
        let got = binomial_mod(top, bot, &ring);
        if top < p {
            prop_assert_eq!(got.unwrap(), ring.from_biguint(&binomial(top, bot)));
        } else {
            prop_assert!(got.is_err());
        }
    }

    #[test]
    fn harmonic_mod_matches_exact(p in odd_prime(), n in 1u64..200, i in 1u32..=3) {
        prop_assume!(n < p);
        let ring = RingDesc::new(p, 2).unwrap();
        let exact: BigRational = harmonic(n, i);
        prop_assert_eq!(harmonic_mod(n, i, &ring).unwrap(), ring.from_rational(&exact).unwrap());
    }

    #[test]
    fn gamma_reflection(p in prop::sample::select(vec![3u64, 5, 7, 11, 13]), r in 0i64..2197) {
        let ring = RingDesc::new(p, 3).unwrap();
        let table = GammaTable::new(&ring).unwrap();
        prop_assert!(reflection_check(&table, &PadicPoint::from_int(r, &ring)).unwrap());
    }

    #[test]
    fn gamma_is_locally_constant(p in prop::sample::select(vec![5u64, 7, 11]), r in 0i64..1000, t in 1i64..5) {
        let ring = RingDesc::new(p, 2).unwrap();
        let table = GammaTable::new(&ring).unwrap();
        let m = (p * p) as i64;
        let a = table.gamma(&PadicPoint::from_int(r, &ring)).unwrap();
        let b = table.gamma(&PadicPoint::from_int(r + t * m, &ring)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn cool_and_old_hold(n in 1u64..60) {
        let m = Memo::new(60);
        for id in [IdentityId::Cool, IdentityId::Old, IdentityId::Sumk, IdentityId::AuxHk] {
            let (lhs, rhs) = eval_identity(id, n, &m).unwrap();
            prop_assert_eq!(lhs, rhs, "{} at n = {}", id, n);
        }
    }
}

#[test]
fn jacobi_magnitude() {
    for p in [3u64, 5, 7, 11, 13] {
        let f = FiniteFieldChars::new(p).unwrap();
        let ring = f.ring();
        let table = f.table();
        for chi in table.all() {
            for psi in table.all() {
                if chi.is_trivial() || psi.is_trivial() || chi.mul(&psi).is_trivial() {
                    continue;
                }
                let j = f.jacobi_sum(&chi, &psi);
                let norm = ring.mul(&j, &ring.conj(&j));
                assert_eq!(norm, ring.from_int(p), "p = {p}, t = {}, {}", chi.t, psi.t);
            }
        }
    }
}

#[test]
fn character_orthogonality() {
    for p in [5u64, 7, 13] {
        let f = FiniteFieldChars::new(p).unwrap();
        for chi in f.table().all() {
            let s = f.character_sum(&chi);
            let expected = if chi.is_trivial() { f.ring().from_int(p - 1) } else { f.ring().zero() };
            assert_eq!(s, expected);
        }
    }
}

#[test]
fn two_oracles_agree() {
    for p in [3u64, 5, 7, 11, 13] {
        let f = FiniteFieldChars::new(p).unwrap();
        let phi = f.table().quadratic();
        let eps = f.table().trivial();
        for n in 1..=3u64 {
            let tops = vec![phi; n as usize + 1];
            let bots = vec![eps; n as usize];
            for lam in 1..p {
                let def2 = f.hypergeometric_def2(&tops, &bots, lam).unwrap();
                let scaled = def2 * BigRational::from_integer(BigInt::from(p).pow(n as u32));
                let int = f.hypergeometric_int(n, lam).unwrap();
                assert_eq!(scaled, BigRational::from_integer(int), "p = {p}, n = {n}, lambda = {lam}");
            }
        }
    }
}

#[test]
fn oracle_is_integral_up_to_the_guard() {
    for p in odd_primes_up_to(31) {
        let f = FiniteFieldChars::new(p).unwrap();
        for n in 1..=5 {
            let powers = f.jacobi_powers(n);
            for lam in 1..p {
                assert!(f.hypergeometric_int_with(&powers, lam).is_ok());
            }
        }
    }
}

#[test]
fn primes_helpers() {
    assert_eq!(odd_primes_up_to(4999).len(), 668);
    assert!(is_prime(4999) && !is_prime(4998));
    assert!(BigInt::one() > BigInt::zero());
}
