//! Global parameters `(p, n)` and the coefficient setting for `c`.

use thiserror::Error;

use crate::coeff::{is_prime, CoeffError, Field, RationalFunc, RationalFuncField};
use crate::poly::{graded_dimension, Monomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("p must divide n (p = {p}, n = {n})")]
    NotDivisible { p: u32, n: usize },
    #[error("n = {0} is outside the supported range 2..={max}", max = Monomial::MAX_VARS)]
    UnsupportedRank(usize),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// The characteristic `p` and the number of ambient variables `n`, with `p | n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Session {
    p: u32,
    n: usize,
}

impl Session {
    pub fn new(p: u32, n: usize) -> Result<Self, SessionError> {
        if !is_prime(p) {
            return Err(SessionError::NotPrime(p));
        }
        if !(2..=Monomial::MAX_VARS).contains(&n) {
            return Err(SessionError::UnsupportedRank(n));
        }
        if !n.is_multiple_of(p as usize) {
            return Err(SessionError::NotDivisible { p, n });
        }
        Ok(Self { p, n })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Top degree `(p-1)(n-1)` of the finite-dimensional quotient.
    pub fn socle_degree(&self) -> u32 {
        (self.p - 1) * (self.n as u32 - 1)
    }

    /// One degree past the socle plus a safety degree.
    pub fn default_d_max(&self) -> u32 {
        self.socle_degree() + 2
    }

    /// Coefficients of `((1 - t^p) / (1 - t))^(n-1)`.
    pub fn expected_hilbert(&self) -> Vec<usize> {
        let mut dims = vec![1usize];
        for _ in 1..self.n {
            let mut next = vec![0usize; dims.len() + self.p as usize - 1];
            for (i, &a) in dims.iter().enumerate() {
                for slot in &mut next[i..i + self.p as usize] {
                    *slot += a;
                }
            }
            dims = next;
        }
        dims
    }

    /// `p^(n-1)`.
    pub fn expected_total(&self) -> usize {
        (self.p as usize).pow(self.n as u32 - 1)
    }

    /// `dim A_d`.
    pub fn dim_a(&self, d: u32) -> usize {
        graded_dimension(self.n, d)
    }
}

/// A session together with a coefficient field and the value of `c` in it.
#[derive(Debug, Clone)]
pub struct Instance<K: Field> {
    pub session: Session,
    pub field: K,
    pub c: K::Elem,
}

impl Instance<RationalFuncField> {
    /// `c` kept as a transcendental over `F_p`.
    pub fn symbolic(session: Session) -> Result<Self, SessionError> {
        let field = RationalFuncField::new(session.p())?;
        let c: RationalFunc = field.c();
        Ok(Self { session, field, c })
    }
}

impl<K: Field> Instance<K> {
    pub fn specialized(session: Session, field: K, c: K::Elem) -> Result<Self, SessionError> {
        if field.characteristic() != session.p() {
            return Err(CoeffError::DomainMismatch(format!(
                "field of characteristic {} for p = {}",
                field.characteristic(),
                session.p()
            ))
            .into());
        }
        Ok(Self { session, field, c })
    }

    pub fn n(&self) -> usize {
        self.session.n()
    }

    pub fn p(&self) -> u32 {
        self.session.p()
    }
}
