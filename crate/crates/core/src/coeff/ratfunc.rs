use std::fmt;

use super::upoly::{self, UPoly};
use super::{binomial, CoeffError, Field};

/// A reduced fraction `num(c) / den(c)` over `F_p`.
///
/// The denominator is monic and coprime to the numerator; zero is `0 / 1`.
/// Equality of normalized fractions is equality of the stored fields.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalFunc {
    num: UPoly,
    den: UPoly,
}

impl RationalFunc {
    pub fn numerator(&self) -> &[u32] {
        &self.num
    }

    pub fn denominator(&self) -> &[u32] {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        upoly::is_one(&self.den)
    }

    /// Degree of the numerator plus degree of the denominator.
    pub fn weight(&self) -> u32 {
        (self.num.len().saturating_sub(1) + self.den.len() - 1) as u32
    }

    fn poly(num: UPoly) -> Self {
        Self { num, den: vec![1] }
    }
}

impl fmt::Display for RationalFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})/({})",
            upoly::format(&self.num, "c"),
            upoly::format(&self.den, "c")
        )
    }
}

/// The rational function field `F_p(c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFuncField {
    p: u32,
}

impl RationalFuncField {
    pub fn new(p: u32) -> Result<Self, CoeffError> {
        super::PrimeField::new(p)?;
        Ok(Self { p })
    }

    /// The transcendental `c`.
    pub fn c(&self) -> RationalFunc {
        RationalFunc::poly(vec![0, 1])
    }

    /// `num / den` from coefficient lists (constant term first), normalized.
    pub fn fraction(&self, num: &[u32], den: &[u32]) -> Result<RationalFunc, CoeffError> {
        let p = self.p;
        let mut n: UPoly = num.iter().map(|&x| x % p).collect();
        let mut d: UPoly = den.iter().map(|&x| x % p).collect();
        upoly::trim(&mut n);
        upoly::trim(&mut d);
        if d.is_empty() {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(self.normalize(n, d))
    }

    pub fn polynomial(&self, coeffs: &[u32]) -> RationalFunc {
        self.fraction(coeffs, &[1]).expect("unit denominator")
    }

    /// `c (c - 1) ... (c - m + 1) / m!` for `m < p`.
    pub fn binomial_c(&self, m: u32) -> Result<RationalFunc, CoeffError> {
        binomial(self, &self.c(), m)
    }

    /// Evaluate at `c = c0` in a field of the same characteristic.
    pub fn specialize<K: Field>(
        &self,
        r: &RationalFunc,
        target: &K,
        c0: &K::Elem,
    ) -> Result<K::Elem, CoeffError> {
        if target.characteristic() != self.p {
            return Err(CoeffError::DomainMismatch(format!(
                "cannot specialize F_{}(c) into a field of characteristic {}",
                self.p,
                target.characteristic()
            )));
        }
        let eval = |coeffs: &[u32]| {
            coeffs.iter().rev().fold(target.zero(), |acc, &x| {
                target.add(&target.mul(&acc, c0), &target.from_i64(x as i64))
            })
        };
        let den = eval(&r.den);
        if target.is_zero(&den) {
            return Err(CoeffError::SpecializationPole);
        }
        target.div(&eval(&r.num), &den)
    }

    fn normalize(&self, num: UPoly, den: UPoly) -> RationalFunc {
        let p = self.p;
        if num.is_empty() {
            return RationalFunc::poly(Vec::new());
        }
        let g = upoly::gcd(&num, &den, p);
        let (mut n, mut d) = if upoly::is_one(&g) {
            (num, den)
        } else {
            (upoly::div_exact(&num, &g, p), upoly::div_exact(&den, &g, p))
        };
        let lc = *d.last().unwrap();
        if lc != 1 {
            let inv = upoly::inv_mod(lc, p);
            n = upoly::scale(&n, inv, p);
            d = upoly::scale(&d, inv, p);
        }
        RationalFunc { num: n, den: d }
    }

    fn combine(&self, a: &RationalFunc, b: &RationalFunc, subtract: bool) -> RationalFunc {
        let p = self.p;
        let op = |x: &[u32], y: &[u32]| {
            if subtract {
                upoly::sub(x, y, p)
            } else {
                upoly::add(x, y, p)
            }
        };
        if a.num.is_empty() {
            return if subtract { self.neg(b) } else { b.clone() };
        }
        if b.num.is_empty() {
            return a.clone();
        }
        if a.is_polynomial() && b.is_polynomial() {
            return RationalFunc::poly(op(&a.num, &b.num));
        }
        if a.den == b.den {
            return self.normalize(op(&a.num, &b.num), a.den.clone());
        }
        // Henrici: only the common factor of the denominators can cancel.
        let g = upoly::gcd(&a.den, &b.den, p);
        if upoly::is_one(&g) {
            let num = op(&upoly::mul(&a.num, &b.den, p), &upoly::mul(&b.num, &a.den, p));
            let den = upoly::mul(&a.den, &b.den, p);
            // coprime denominators: the sum is already reduced
            return self.normalize_monic(num, den);
        }
        let ad = upoly::div_exact(&a.den, &g, p);
        let bd = upoly::div_exact(&b.den, &g, p);
        let num = op(&upoly::mul(&a.num, &bd, p), &upoly::mul(&b.num, &ad, p));
        let den = upoly::mul(&a.den, &bd, p);
        self.normalize(num, den)
    }

    fn normalize_monic(&self, num: UPoly, den: UPoly) -> RationalFunc {
        if num.is_empty() {
            return RationalFunc::poly(Vec::new());
        }
        RationalFunc { num, den }
    }
}

impl Field for RationalFuncField {
    type Elem = RationalFunc;

    fn characteristic(&self) -> u32 {
        self.p
    }

    fn zero(&self) -> RationalFunc {
        RationalFunc::poly(Vec::new())
    }

    fn one(&self) -> RationalFunc {
        RationalFunc::poly(vec![1])
    }

    fn from_i64(&self, v: i64) -> RationalFunc {
        let r = v.rem_euclid(self.p as i64) as u32;
        RationalFunc::poly(if r == 0 { Vec::new() } else { vec![r] })
    }

    fn add(&self, a: &RationalFunc, b: &RationalFunc) -> RationalFunc {
        self.combine(a, b, false)
    }

    fn sub(&self, a: &RationalFunc, b: &RationalFunc) -> RationalFunc {
        self.combine(a, b, true)
    }

    fn neg(&self, a: &RationalFunc) -> RationalFunc {
        RationalFunc {
            num: upoly::neg(&a.num, self.p),
            den: a.den.clone(),
        }
    }

    fn mul(&self, a: &RationalFunc, b: &RationalFunc) -> RationalFunc {
        let p = self.p;
        if a.num.is_empty() || b.num.is_empty() {
            return self.zero();
        }
        if a.is_polynomial() && b.is_polynomial() {
            return RationalFunc::poly(upoly::mul(&a.num, &b.num, p));
        }
        // cross-cancel before multiplying
        let g1 = upoly::gcd(&a.num, &b.den, p);
        let g2 = upoly::gcd(&b.num, &a.den, p);
        let an = upoly::div_exact(&a.num, &g1, p);
        let bd = upoly::div_exact(&b.den, &g1, p);
        let bn = upoly::div_exact(&b.num, &g2, p);
        let ad = upoly::div_exact(&a.den, &g2, p);
        RationalFunc {
            num: upoly::mul(&an, &bn, p),
            den: upoly::mul(&ad, &bd, p),
        }
    }

    fn inv(&self, a: &RationalFunc) -> Result<RationalFunc, CoeffError> {
        if a.num.is_empty() {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(self.normalize(a.den.clone(), a.num.clone()))
    }

    fn is_zero(&self, a: &RationalFunc) -> bool {
        a.num.is_empty()
    }

    fn format(&self, a: &RationalFunc) -> String {
        a.to_string()
    }

    fn cost(&self, a: &RationalFunc) -> u32 {
        a.weight()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{ExtField, PrimeField};
    use proptest::prelude::*;

    fn field() -> RationalFuncField {
        RationalFuncField::new(5).unwrap()
    }

    #[test]
    fn inverse_of_c() {
        let f = field();
        let c = f.c();
        assert_eq!(f.mul(&c, &f.inv(&c).unwrap()), f.one());
    }

    #[test]
    fn gcd_cancellation() {
        let f = field();
        // (c^2 - 1) / (c - 1) = (c + 1) / 1
        let r = f.fraction(&[4, 0, 1], &[4, 1]).unwrap();
        assert_eq!(r.numerator(), &[1, 1]);
        assert_eq!(r.denominator(), &[1]);
        assert_eq!(r.to_string(), "(c+1)/(1)");
    }

    #[test]
    fn denominator_made_monic() {
        let f = field();
        let r = f.fraction(&[1], &[0, 2]).unwrap();
        assert_eq!(r.denominator(), &[0, 1]);
        assert_eq!(r.numerator(), &[3]);
    }

    #[test]
    fn binomial_values() {
        let f = field();
        assert_eq!(f.binomial_c(0).unwrap(), f.one());
        assert_eq!(f.binomial_c(1).unwrap(), f.c());
        // c(c-1)/2 = 3c^2 + 2c over F_5
        assert_eq!(f.binomial_c(2).unwrap(), f.polynomial(&[0, 2, 3]));
        assert!(f.binomial_c(5).is_err());
    }

    #[test]
    fn specialization_examples() {
        let f = field();
        let fp = PrimeField::new(5).unwrap();
        assert_eq!(f.specialize(&f.c(), &fp, &3).unwrap(), 3);
        assert_eq!(f.specialize(&f.binomial_c(2).unwrap(), &fp, &2).unwrap(), 1);

        let f2 = RationalFuncField::new(2).unwrap();
        let fp2 = PrimeField::new(2).unwrap();
        let r = f2.fraction(&[1], &[1, 1]).unwrap();
        assert_eq!(f2.specialize(&r, &fp2, &1), Err(CoeffError::SpecializationPole));

        let f3 = PrimeField::new(3).unwrap();
        assert!(matches!(
            f.specialize(&f.c(), &f3, &1),
            Err(CoeffError::DomainMismatch(_))
        ));
    }

    #[test]
    fn specialized_binomial_matches_falling_factorial_oracle() {
        for p in [2u32, 3, 5, 7] {
            let f = RationalFuncField::new(p).unwrap();
            let fp = PrimeField::new(p).unwrap();
            for m in 0..p {
                let b = f.binomial_c(m).unwrap();
                for c0 in 0..p {
                    // integer falling factorial over m!, exact before reduction
                    let mut num: u64 = 1;
                    let mut den: u64 = 1;
                    for t in 0..m as u64 {
                        num *= (c0 as u64).saturating_sub(t);
                        den *= t + 1;
                    }
                    let expected = ((num / den) % p as u64) as u32;
                    assert_eq!(f.specialize(&b, &fp, &c0).unwrap(), expected);
                }
            }
        }
    }

    fn arb_ratfunc() -> impl Strategy<Value = (Vec<u32>, Vec<u32>)> {
        (
            prop::collection::vec(0u32..5, 0..5),
            prop::collection::vec(0u32..5, 1..4).prop_map(|mut v| {
                v.push(1);
                v
            }),
        )
    }

    proptest! {
        #[test]
        fn arithmetic_commutes_with_specialization(
            (an, ad) in arb_ratfunc(),
            (bn, bd) in arb_ratfunc(),
            c0 in prop::collection::vec(0u32..5, 3),
        ) {
            let f = field();
            let ext = ExtField::new(5, 3).unwrap();
            let c0 = ext.from_coeffs(&c0).unwrap();
            let a = f.fraction(&an, &ad).unwrap();
            let b = f.fraction(&bn, &bd).unwrap();
            let (Ok(sa), Ok(sb)) = (f.specialize(&a, &ext, &c0), f.specialize(&b, &ext, &c0)) else {
                return Ok(());
            };
            if let Ok(s) = f.specialize(&f.add(&a, &b), &ext, &c0) {
                prop_assert_eq!(s, ext.add(&sa, &sb));
            }
            if let Ok(s) = f.specialize(&f.mul(&a, &b), &ext, &c0) {
                prop_assert_eq!(s, ext.mul(&sa, &sb));
            }
            if let Ok(s) = f.specialize(&f.sub(&a, &b), &ext, &c0) {
                prop_assert_eq!(s, ext.sub(&sa, &sb));
            }
        }

        #[test]
        fn normalization_is_canonical(
            (an, ad) in arb_ratfunc(),
            k in prop::collection::vec(0u32..5, 1..3).prop_map(|mut v| { v.push(1); v }),
        ) {
            // multiplying numerator and denominator by a common factor changes nothing
            let f = field();
            let a = f.fraction(&an, &ad).unwrap();
            let scaled = f.fraction(&upoly::mul(&an, &k, 5), &upoly::mul(&ad, &k, 5)).unwrap();
            prop_assert_eq!(a.clone(), scaled);
            if !f.is_zero(&a) {
                prop_assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
            }
        }
    }
}
