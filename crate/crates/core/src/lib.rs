//! Exact arithmetic for Greene's hypergeometric functions over `F_p`, the
//! p-adic Gamma function, and the supercongruences relating them.
//!
//! Everything here is exact: residues modulo `p^k` are arbitrary-precision
//! integers, character sums live in `Z[zeta_{p-1}]`, and harmonic-sum
//! identities are checked over the rationals. No floating point is used.
//!
//! The crate is `no_std` and only needs `alloc`. IO, parallel sweeps and
//! report formats live in the `supercong` companion crate.
#![no_std]

extern crate alloc;

pub mod congruences;
pub mod cyclotomic;
pub mod error;
pub mod harmonic;
pub mod identities;
pub mod modarith;
pub mod padic;
pub mod report;

pub use error::{Error, Result};
pub use modarith::{RingDesc, Residue};
pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
pub use report::{CheckReport, CheckValue, Status};
