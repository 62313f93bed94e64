//! Extension fields `F_{p^k}` with Zech-logarithm arithmetic.
//!
//! An element is stored as its discrete logarithm with respect to a fixed
//! primitive element, so multiplication is an addition of exponents and
//! addition goes through the Zech table `log(1 + g^i)`.

use std::sync::Arc;

use rand::Rng;

use super::upoly;
use super::{is_prime, CoeffError, Field};

/// Irreducible moduli for the `(p, k)` pairs used at desk scale.
///
/// Coefficients are listed from the constant term up to the (unit) leading
/// coefficient.
pub static IRREDUCIBLE_MODULI: &[(u32, u32, &[u32])] = &[
    // x^2 + x + 1
    (2, 2, &[1, 1, 1]),
    // x^3 + x + 1
    (2, 3, &[1, 1, 0, 1]),
    // x^4 + x + 1
    (2, 4, &[1, 1, 0, 0, 1]),
    // x^5 + x^2 + 1
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    // x^6 + x + 1
    (2, 6, &[1, 1, 0, 0, 0, 0, 1]),
    // x^7 + x + 1
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    // x^8 + x^4 + x^3 + x^2 + 1
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    // x^2 + 1
    (3, 2, &[1, 0, 1]),
    // x^3 + 2x + 1
    (3, 3, &[1, 2, 0, 1]),
    // x^4 + x + 2
    (3, 4, &[2, 1, 0, 0, 1]),
    // x^5 + 2x + 1
    (3, 5, &[1, 2, 0, 0, 0, 1]),
    // x^2 + 2
    (5, 2, &[2, 0, 1]),
    // x^3 + x + 1
    (5, 3, &[1, 1, 0, 1]),
    // x^2 + 1
    (7, 2, &[1, 0, 1]),
    // x^3 + 2
    (7, 3, &[2, 0, 0, 1]),
    // x^2 + 1
    (11, 2, &[1, 0, 1]),
    // x^2 + 2
    (13, 2, &[2, 0, 1]),
];

/// Brute-force irreducibility test: trial division by every monic polynomial
/// of degree at most `deg / 2`.
pub fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let Some(deg) = upoly::degree(modulus) else {
        return false;
    };
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut cand = digits(idx, p, d);
            cand.push(1);
            let (_, r) = upoly::divrem(modulus, &cand, p);
            if r.is_empty() {
                return false;
            }
        }
    }
    true
}

/// The tabulated modulus for `(p, k)`, or the first irreducible monic
/// polynomial of degree `k` in lexicographic order of its coefficients.
pub fn irreducible_modulus(p: u32, k: u32) -> Result<Vec<u32>, CoeffError> {
    if !is_prime(p) {
        return Err(CoeffError::InvalidArgument(format!("{p} is not prime")));
    }
    if k == 0 {
        return Err(CoeffError::InvalidArgument("extension degree must be positive".into()));
    }
    if let Some((_, _, m)) = IRREDUCIBLE_MODULI.iter().find(|(pp, kk, _)| *pp == p && *kk == k) {
        return Ok(m.to_vec());
    }
    let count = (p as u64)
        .checked_pow(k)
        .ok_or_else(|| CoeffError::InvalidArgument("extension too large".into()))?;
    for idx in 0..count {
        let mut cand = digits(idx, p, k as usize);
        cand.push(1);
        if is_irreducible(&cand, p) {
            return Ok(cand);
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn digits(mut v: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((v % p as u64) as u32);
        v /= p as u64;
    }
    out
}

/// An element of [`ExtField`], stored as a discrete logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtElem(u32);

impl ExtElem {
    pub(crate) const ZERO: ExtElem = ExtElem(u32::MAX);
}

#[derive(Debug)]
struct Tables {
    /// exp[i] = packed digits of g^i
    exp: Vec<u32>,
    /// log[packed] = i, or u32::MAX for zero
    log: Vec<u32>,
    /// zech[i] = log(1 + g^i)
    zech: Vec<u32>,
}

/// The finite field `F_p[X] / (modulus)`.
#[derive(Debug, Clone)]
pub struct ExtField {
    p: u32,
    k: u32,
    modulus: Vec<u32>,
    order: u32,
    /// log of -1
    neg_one: u32,
    tables: Arc<Tables>,
}

impl PartialEq for ExtField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for ExtField {}

impl ExtField {
    /// Largest supported field order.
    pub const MAX_ORDER: u64 = 1 << 22;

    /// `F_{p^k}` with the tabulated (or first found) modulus.
    pub fn new(p: u32, k: u32) -> Result<Self, CoeffError> {
        let modulus = irreducible_modulus(p, k)?;
        Self::with_modulus(p, &modulus)
    }

    /// The smallest extension of `F_p` with at least `min_order` elements.
    pub fn with_min_order(p: u32, min_order: u64) -> Result<Self, CoeffError> {
        let mut k = 1u32;
        while (p as u64).pow(k) < min_order {
            k += 1;
        }
        Self::new(p, k)
    }

    /// `F_p[X] / (modulus)`; the modulus is listed from the constant term up
    /// and must be monic and irreducible.
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Self, CoeffError> {
        if !is_prime(p) {
            return Err(CoeffError::InvalidArgument(format!("{p} is not prime")));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(CoeffError::InvalidArgument(format!(
                "modulus coefficients must lie in [0, {p})"
            )));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(CoeffError::InvalidArgument(
                "modulus must be monic of positive degree".into(),
            ));
        }
        if !is_irreducible(modulus, p) {
            return Err(CoeffError::InvalidArgument(format!(
                "modulus {} is reducible over F_{p}",
                upoly::format(modulus, "x")
            )));
        }
        let k = (modulus.len() - 1) as u32;
        let order = (p as u64).pow(k);
        if order > Self::MAX_ORDER {
            return Err(CoeffError::InvalidArgument(format!(
                "field order {order} exceeds {}",
                Self::MAX_ORDER
            )));
        }
        let order = order as u32;
        let tables = build_tables(p, k, modulus, order);
        let neg_one = tables.log[(p - 1) as usize];
        Ok(Self {
            p,
            k,
            modulus: modulus.to_vec(),
            order,
            neg_one,
            tables: Arc::new(tables),
        })
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Element with the given coefficients on `1, a, a^2, ...`.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<ExtElem, CoeffError> {
        if coeffs.len() != self.k as usize {
            return Err(CoeffError::InvalidArgument(format!(
                "expected {} coefficients, got {}",
                self.k,
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|&c| c >= self.p) {
            return Err(CoeffError::InvalidArgument(format!(
                "coefficients must lie in [0, {})",
                self.p
            )));
        }
        Ok(self.from_packed(pack(coeffs, self.p)))
    }

    pub fn coeffs(&self, e: &ExtElem) -> Vec<u32> {
        digits(self.packed(e) as u64, self.p, self.k as usize)
    }

    /// Embedding of `F_p`.
    pub fn embed(&self, v: u32) -> ExtElem {
        self.from_packed(v % self.p)
    }

    /// The class `a` of the indeterminate.
    pub fn generator(&self) -> ExtElem {
        if self.k == 1 {
            // X = -modulus[0] mod (X + modulus[0])
            return self.embed((self.p - self.modulus[0]) % self.p);
        }
        self.from_packed(self.p)
    }

    /// Every element, in increasing packed order.
    pub fn elements(&self) -> impl Iterator<Item = ExtElem> + '_ {
        (0..self.order).map(|v| self.from_packed(v))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> ExtElem {
        self.from_packed(rng.gen_range(0..self.order))
    }

    fn from_packed(&self, v: u32) -> ExtElem {
        ExtElem(self.tables.log[v as usize])
    }

    fn packed(&self, e: &ExtElem) -> u32 {
        if *e == ExtElem::ZERO {
            0
        } else {
            self.tables.exp[e.0 as usize]
        }
    }
}

fn pack(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0u32, |acc, &d| acc * p + d)
}

fn mul_packed(a: u32, b: u32, p: u32, k: u32, modulus: &[u32]) -> u32 {
    let da = digits(a as u64, p, k as usize);
    let db = digits(b as u64, p, k as usize);
    let prod = upoly::mul(&da, &db, p);
    let (_, r) = upoly::divrem(&prod, modulus, p);
    pack(&r, p)
}

fn prime_factors(mut m: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn build_tables(p: u32, k: u32, modulus: &[u32], order: u32) -> Tables {
    let group = order - 1;
    let factors = prime_factors(group);
    let pow = |g: u32, mut e: u32| {
        let mut base = g;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_packed(acc, base, p, k, modulus);
            }
            base = mul_packed(base, base, p, k, modulus);
            e >>= 1;
        }
        acc
    };
    let g = (1..order)
        .find(|&g| factors.iter().all(|&r| pow(g, group / r) != 1))
        .expect("the multiplicative group of a finite field is cyclic");

    let mut exp = vec![0u32; group as usize];
    let mut log = vec![u32::MAX; order as usize];
    let mut cur = 1u32;
    for (i, slot) in exp.iter_mut().enumerate() {
        *slot = cur;
        log[cur as usize] = i as u32;
        cur = mul_packed(cur, g, p, k, modulus);
    }
    let zech = exp
        .iter()
        .map(|&v| {
            let low = v % p;
            let bumped = v - low + (low + 1) % p;
            log[bumped as usize]
        })
        .collect();
    Tables { exp, log, zech }
}

impl Field for ExtField {
    type Elem = ExtElem;

    fn characteristic(&self) -> u32 {
        self.p
    }

    fn zero(&self) -> ExtElem {
        ExtElem::ZERO
    }

    fn one(&self) -> ExtElem {
        ExtElem(0)
    }

    fn from_i64(&self, v: i64) -> ExtElem {
        self.embed(v.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        if *a == ExtElem::ZERO {
            return *b;
        }
        if *b == ExtElem::ZERO {
            return *a;
        }
        let m = self.order - 1;
        let d = if b.0 >= a.0 { b.0 - a.0 } else { b.0 + m - a.0 };
        let z = self.tables.zech[d as usize];
        if z == u32::MAX {
            return ExtElem::ZERO;
        }
        let s = a.0 + z;
        ExtElem(if s >= m { s - m } else { s })
    }

    fn neg(&self, a: &ExtElem) -> ExtElem {
        self.mul(a, &ExtElem(self.neg_one))
    }

    fn sub(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        self.add(a, &self.neg(b))
    }

    #[inline]
    fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        if *a == ExtElem::ZERO || *b == ExtElem::ZERO {
            return ExtElem::ZERO;
        }
        let m = self.order - 1;
        let s = a.0 + b.0;
        ExtElem(if s >= m { s - m } else { s })
    }

    fn inv(&self, a: &ExtElem) -> Result<ExtElem, CoeffError> {
        if *a == ExtElem::ZERO {
            return Err(CoeffError::DivisionByZero);
        }
        let m = self.order - 1;
        Ok(ExtElem(if a.0 == 0 { 0 } else { m - a.0 }))
    }

    fn is_zero(&self, a: &ExtElem) -> bool {
        *a == ExtElem::ZERO
    }

    fn format(&self, a: &ExtElem) -> String {
        let mut digits = self.coeffs(a);
        upoly::trim(&mut digits);
        let s = upoly::format(&digits, "a");
        if s.contains('+') {
            format!("({s})")
        } else {
            s
        }
    }
}

// Used only to sanity check the tables against schoolbook arithmetic.
#[cfg(test)]
fn packed_inverse(v: u32, p: u32, k: u32, modulus: &[u32]) -> u32 {
    let order = p.pow(k);
    (1..order)
        .find(|&w| mul_packed(v, w, p, k, modulus) == 1)
        .unwrap_or_else(|| panic!("{v} has no inverse in F_{p}^{k}"))
}
