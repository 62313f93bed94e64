//! Exact coefficient fields.
//!
//! Three domains are supported, all of characteristic `p`:
//!
//! * [`PrimeField`]: the prime field `F_p`;
//! * [`ExtField`]: a finite extension `F_{p^k}`, used to specialize the
//!   parameter `c` at a point that avoids the finitely many degenerate values;
//! * [`RationalFuncField`]: the rational function field `F_p(c)`, in which
//!   `c` stays a transcendental.
//!
//! Fields are passed around as context objects and elements are plain values,
//! so that elements of `F_{p^k}` need not carry their lookup tables.

mod ext;
mod prime;
mod ratfunc;
pub(crate) mod upoly;

pub use ext::{irreducible_modulus, is_irreducible, ExtElem, ExtField, IRREDUCIBLE_MODULI};
pub use prime::PrimeField;
pub use ratfunc::{RationalFunc, RationalFuncField};

use std::fmt::Debug;
use std::hash::Hash;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("specialization hits a pole of the denominator")]
    SpecializationPole,
}

/// An exact field of positive characteristic.
///
/// All operations are pure; implementors are cheap to clone and shareable
/// across threads.
pub trait Field: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn characteristic(&self) -> u32;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    /// Image of an integer under `Z -> F`.
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, CoeffError>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn format(&self, a: &Self::Elem) -> String;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, CoeffError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Size measure used to pick pivots during symbolic row reduction.
    fn cost(&self, _a: &Self::Elem) -> u32 {
        0
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `a + b * s`, the inner step of every elimination and dot product.
    fn mul_add(&self, a: &Self::Elem, b: &Self::Elem, s: &Self::Elem) -> Self::Elem {
        self.add(a, &self.mul(b, s))
    }
}

/// The generalized binomial coefficient `x (x - 1) ... (x - m + 1) / m!`.
///
/// Only defined for `m < p`, where `m!` is invertible.
pub fn binomial<K: Field>(field: &K, x: &K::Elem, m: u32) -> Result<K::Elem, CoeffError> {
    let p = field.characteristic();
    if m >= p {
        return Err(CoeffError::InvalidArgument(format!(
            "binomial order {m} must be below the characteristic {p}"
        )));
    }
    let mut num = field.one();
    let mut fact = field.one();
    for t in 0..m {
        num = field.mul(&num, &field.sub(x, &field.from_i64(t as i64)));
        fact = field.mul(&fact, &field.from_i64(t as i64 + 1));
    }
    field.div(&num, &fact)
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
