use std::cmp::Ordering;
use std::fmt;

/// A monomial in at most [`Monomial::MAX_VARS`] variables.
///
/// Exponents are packed one byte per variable with `x1` in the most
/// significant byte, so comparing the packed words is lexicographic order
/// with `x1 > x2 > ...`. Total degree must stay below 256.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(u64);

const BYTE_SUM: u64 = 0x0101_0101_0101_0101;

impl Monomial {
    pub const MAX_VARS: usize = 8;
    pub const MAX_DEGREE: u32 = 255;
    pub const ONE: Monomial = Monomial(0);

    #[inline]
    fn shift(i: usize) -> u32 {
        debug_assert!(i < Self::MAX_VARS);
        (56 - 8 * i) as u32
    }

    /// Panics if there are too many variables or the degree is too large.
    pub fn from_exponents(exps: &[u32]) -> Self {
        assert!(exps.len() <= Self::MAX_VARS, "at most 8 variables are supported");
        assert!(
            exps.iter().sum::<u32>() <= Self::MAX_DEGREE,
            "total degree must stay below 256"
        );
        let packed = exps
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &e)| acc | ((e as u64) << Self::shift(i)));
        Monomial(packed)
    }

    pub fn var(i: usize) -> Self {
        Monomial(1u64 << Self::shift(i))
    }

    #[inline]
    pub fn exponent(self, i: usize) -> u32 {
        ((self.0 >> Self::shift(i)) & 0xff) as u32
    }

    pub fn exponents(self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exponent(i)).collect()
    }

    #[inline]
    pub fn degree(self) -> u32 {
        (self.0.wrapping_mul(BYTE_SUM) >> 56) as u32
    }

    #[inline]
    pub fn mul(self, other: Monomial) -> Monomial {
        debug_assert!(self.degree() + other.degree() <= Self::MAX_DEGREE);
        Monomial(self.0 + other.0)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(self, other: Monomial) -> Option<Monomial> {
        let ok = (0..Self::MAX_VARS).all(|i| self.exponent(i) >= other.exponent(i));
        ok.then(|| Monomial(self.0 - other.0))
    }

    #[inline]
    pub fn with_exponent(self, i: usize, e: u32) -> Monomial {
        debug_assert!(e <= Self::MAX_DEGREE);
        let s = Self::shift(i);
        Monomial((self.0 & !(0xffu64 << s)) | ((e as u64) << s))
    }

    /// Exchange the exponents of `x_i` and `x_j`.
    #[inline]
    pub fn swap(self, i: usize, j: usize) -> Monomial {
        let (ei, ej) = (self.exponent(i), self.exponent(j));
        self.with_exponent(i, ej).with_exponent(j, ei)
    }

    /// Image under `x_i -> x_{images[i]}`.
    pub fn permute(self, images: &[usize]) -> Monomial {
        images
            .iter()
            .enumerate()
            .fold(Monomial::ONE, |acc, (i, &t)| {
                Monomial(acc.0 | ((self.exponent(i) as u64) << Self::shift(t)))
            })
    }

    /// `x1^a1*x2*...`, or `1` for the unit monomial.
    pub fn format(self, nvars: usize) -> String {
        let parts: Vec<String> = (0..nvars)
            .filter_map(|i| match self.exponent(i) {
                0 => None,
                1 => Some(format!("x{}", i + 1)),
                e => Some(format!("x{}^{e}", i + 1)),
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format(Self::MAX_VARS))
    }
}

/// All degree-`d` monomials in `nvars` variables, largest first in grlex.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == nvars {
            cur[i] = left;
            out.push(Monomial::from_exponents(cur));
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(nvars, i + 1, left - e, cur, out);
        }
    }
    if nvars == 0 {
        return if d == 0 { vec![Monomial::ONE] } else { Vec::new() };
    }
    let mut out = Vec::new();
    rec(nvars, 0, d, &mut vec![0; nvars], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packing_roundtrip() {
        let m = Monomial::from_exponents(&[3, 0, 7, 1]);
        assert_eq!(m.exponents(4), vec![3, 0, 7, 1]);
        assert_eq!(m.degree(), 11);
        assert_eq!(m.format(4), "x1^3*x3^7*x4");
        assert_eq!(Monomial::ONE.format(3), "1");
    }

    #[test]
    fn grlex_order() {
        let x1 = Monomial::var(0);
        let x2 = Monomial::var(1);
        assert!(x1 > x2);
        assert!(x2.mul(x2) > x1);
        assert!(x1.mul(x2) > x2.mul(x2));
        assert!(x1.mul(x1) > x1.mul(x2));
    }

    #[test]
    fn degree_lists() {
        let ms = monomials_of_degree(3, 2);
        let text: Vec<String> = ms.iter().map(|m| m.format(3)).collect();
        assert_eq!(text, ["x1^2", "x1*x2", "x1*x3", "x2^2", "x2*x3", "x3^2"]);
        assert!(ms.windows(2).all(|w| w[0] > w[1]));
        assert_eq!(monomials_of_degree(1, 3).len(), 1);
    }

    #[test]
    fn permute_and_swap() {
        let m = Monomial::from_exponents(&[2, 1, 0]);
        assert_eq!(m.swap(0, 2), Monomial::from_exponents(&[0, 1, 2]));
        // x1 -> x2, x2 -> x3, x3 -> x1
        assert_eq!(m.permute(&[1, 2, 0]), Monomial::from_exponents(&[0, 2, 1]));
    }
}
