//! Sparse multivariate polynomials, the `S_n` action, and the operators
//! (reduction, divided differences, derivatives) that act on `A = Sym(h*)`.

mod monomial;
mod multipoly;

pub use monomial::{monomials_of_degree, Monomial};
pub use multipoly::{MultiPoly, Reducer};
pub(crate) use multipoly::Accumulator;

use std::collections::HashMap;

use thiserror::Error;

use crate::coeff::{CoeffError, Field, RationalFunc, RationalFuncField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    /// Exact division left a remainder; this signals a bug, not bad input.
    #[error("internal error: inexact division ({0})")]
    InexactDivision(String),
}

/// A permutation of `{0, ..., n-1}`, acting on variables by `x_i -> x_{images[i]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, PolyError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(PolyError::InvalidPermutation(format!("{images:?}")));
            }
        }
        Ok(Self { images })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    /// The transposition `s_{ij}`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i, j);
        Self { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len());
        Self {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.len()];
        for (i, &t) in self.images.iter().enumerate() {
            images[t] = i;
        }
        Self { images }
    }
}

/// Canonical monomial basis of the degree-`d` piece of `A`: monomials in
/// `x_1..x_{n-1}`, largest first in grlex with `x_1 > ... > x_{n-1}`.
pub fn monomial_basis(n: usize, d: u32) -> Vec<Monomial> {
    monomials_of_degree(n - 1, d)
}

/// Position of each basis monomial.
pub fn basis_index(basis: &[Monomial]) -> HashMap<Monomial, usize> {
    basis.iter().enumerate().map(|(i, m)| (*m, i)).collect()
}

/// `dim A_d = C(d + n - 2, n - 2)`.
pub fn graded_dimension(n: usize, d: u32) -> usize {
    let k = (n - 2) as u64;
    let top = d as u64 + k;
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (top - i) / (i + 1);
    }
    acc as usize
}

/// Substitute `c = c0` in every coefficient.
pub fn specialize_poly<K: Field>(
    sym: &RationalFuncField,
    f: &MultiPoly<RationalFunc>,
    target: &K,
    c0: &K::Elem,
) -> Result<MultiPoly<K::Elem>, CoeffError> {
    f.try_map_coeffs(|r| {
        let v = sym.specialize(r, target, c0)?;
        Ok((!target.is_zero(&v)).then_some(v))
    })
}
