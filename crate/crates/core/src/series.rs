//! Truncated power series in `z` with coefficients in `A`, the generating
//! functions `g`, `F`, `F_i`, and the singular vectors `f_i = [z^p] F_i`.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::coeff::{binomial, CoeffError, Field};
use crate::poly::MultiPoly;
use crate::session::Instance;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("{lemma}: coefficient of z^{order} does not vanish")]
    LemmaViolation { lemma: &'static str, order: usize },
    #[error(transparent)]
    Coeff(#[from] CoeffError),
}

/// `sum_{l <= N} a_l z^l`, with every `a_l` a reduced polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries<E> {
    nvars: usize,
    coeffs: Vec<MultiPoly<E>>,
}

impl<E: Clone + PartialEq> TruncatedSeries<E> {
    pub fn zero(nvars: usize, order: usize) -> Self {
        Self {
            nvars,
            coeffs: vec![MultiPoly::zero(nvars); order + 1],
        }
    }

    pub fn one<K: Field<Elem = E>>(nvars: usize, order: usize, k: &K) -> Self {
        let mut s = Self::zero(nvars, order);
        s.coeffs[0] = MultiPoly::one(nvars, k);
        s
    }

    /// `sum_l x^l z^l`, the expansion of `1 / (1 - x z)` around `z = 0`.
    pub fn geometric<K: Field<Elem = E>>(x: &MultiPoly<E>, order: usize, k: &K) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        coeffs.push(MultiPoly::one(x.nvars(), k));
        for l in 1..=order {
            let next = coeffs[l - 1].mul(x, k);
            coeffs.push(next);
        }
        Self {
            nvars: x.nvars(),
            coeffs,
        }
    }

    /// The truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, l: usize) -> &MultiPoly<E> {
        &self.coeffs[l]
    }

    pub fn coeffs(&self) -> &[MultiPoly<E>] {
        &self.coeffs
    }

    pub fn add<K: Field<Elem = E>>(&self, other: &Self, k: &K) -> Self {
        self.zip(other, |a, b| a.add(b, k))
    }

    pub fn sub<K: Field<Elem = E>>(&self, other: &Self, k: &K) -> Self {
        self.zip(other, |a, b| a.sub(b, k))
    }

    pub fn scale<K: Field<Elem = E>>(&self, s: &E, k: &K) -> Self {
        self.map(|a| a.scale(s, k))
    }

    /// Cauchy product, discarding orders above `N`.
    pub fn mul<K: Field<Elem = E>>(&self, other: &Self, k: &K) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|l| {
                (0..=l).fold(MultiPoly::zero(self.nvars), |acc, a| {
                    let (x, y) = (&self.coeffs[a], &other.coeffs[l - a]);
                    if x.is_zero() || y.is_zero() {
                        acc
                    } else {
                        acc.add(&x.mul(y, k), k)
                    }
                })
            })
            .collect();
        Self {
            nvars: self.nvars,
            coeffs,
        }
    }

    /// Multiplication by `z`.
    pub fn shift(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        coeffs.push(MultiPoly::zero(self.nvars));
        coeffs.extend(self.coeffs[..self.order()].iter().cloned());
        Self {
            nvars: self.nvars,
            coeffs,
        }
    }

    /// `d/dz`; the result has order `N - 1`.
    pub fn derivative<K: Field<Elem = E>>(&self, k: &K) -> Self {
        let coeffs = (1..self.coeffs.len())
            .map(|l| self.coeffs[l].scale(&k.from_i64(l as i64), k))
            .collect();
        Self {
            nvars: self.nvars,
            coeffs,
        }
    }

    /// Apply `op` to every coefficient.
    pub fn map(&self, op: impl Fn(&MultiPoly<E>) -> MultiPoly<E>) -> Self {
        Self {
            nvars: self.nvars,
            coeffs: self.coeffs.iter().map(op).collect(),
        }
    }

    /// True if `[z^l]` is homogeneous of degree `l` (or zero) for every `l`.
    pub fn is_graded(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(l, a)| a.is_zero() || (a.is_homogeneous() && a.degree() == Some(l as u32)))
    }

    /// One line `z^l: <poly>` per order.
    pub fn dump<K: Field<Elem = E>>(&self, k: &K) -> String {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(l, a)| format!("z^{l}: {}\n", a.format(k)))
            .collect()
    }

    fn zip(&self, other: &Self, op: impl Fn(&MultiPoly<E>, &MultiPoly<E>) -> MultiPoly<E>) -> Self {
        let order = self.order().min(other.order());
        Self {
            nvars: self.nvars,
            coeffs: (0..=order)
                .map(|l| op(&self.coeffs[l], &other.coeffs[l]))
                .collect(),
        }
    }
}

/// `g(z) = prod_j (1 - x_j z)` in `A[[z]]`.
pub fn build_g<K: Field>(inst: &Instance<K>, order: usize) -> TruncatedSeries<K::Elem> {
    let (n, k) = (inst.n(), &inst.field);
    let mut g = TruncatedSeries::one(n, order, k);
    for j in 0..n {
        let mut factor = TruncatedSeries::one(n, order, k);
        if order >= 1 {
            factor.coeffs[1] = MultiPoly::reduced_var(n, j, k).neg(k);
        }
        g = g.mul(&factor, k);
    }
    g
}

/// Powers `(g - 1)^m` for `m = 0..=max_m`.
fn powers_of_g_minus_one<K: Field>(
    inst: &Instance<K>,
    order: usize,
    max_m: usize,
) -> Vec<TruncatedSeries<K::Elem>> {
    let (n, k) = (inst.n(), &inst.field);
    let one = TruncatedSeries::one(n, order, k);
    let h = build_g(inst, order).sub(&one, k);
    let mut out = vec![one];
    for m in 1..=max_m {
        let next = out[m - 1].mul(&h, k);
        out.push(next);
    }
    out
}

/// `F(z) = sum_{m < p} binom(c, m) (g(z) - 1)^m`.
pub fn build_f<K: Field>(
    inst: &Instance<K>,
    order: usize,
) -> Result<TruncatedSeries<K::Elem>, SeriesError> {
    let (n, k, p) = (inst.n(), &inst.field, inst.p() as usize);
    // z^2 divides g - 1, so only m <= order / 2 contribute
    let top = (p - 1).min(order / 2);
    let powers = powers_of_g_minus_one(inst, order, top);
    let mut f = TruncatedSeries::zero(n, order);
    for (m, hm) in powers.iter().enumerate() {
        let b = binomial(k, &inst.c, m as u32)?;
        f = f.add(&hm.scale(&b, k), k);
    }
    Ok(f)
}

/// `F_i(z) = F(z) / (1 - x_i z)` for a 0-based index `i < n - 1`.
pub fn build_fi<K: Field>(
    inst: &Instance<K>,
    i: usize,
    order: usize,
) -> Result<TruncatedSeries<K::Elem>, SeriesError> {
    let k = &inst.field;
    let f = build_f(inst, order)?;
    let x = MultiPoly::reduced_var(inst.n(), i, k);
    Ok(f.mul(&TruncatedSeries::geometric(&x, order, k), k))
}

/// `f_i = [z^p] F_i(z)`.
pub fn extract_fi<K: Field>(inst: &Instance<K>, i: usize) -> Result<MultiPoly<K::Elem>, SeriesError> {
    let p = inst.p() as usize;
    let f = build_f(inst, p)?;
    Ok(fi_from_f(inst, &f, i))
}

fn fi_from_f<K: Field>(
    inst: &Instance<K>,
    f: &TruncatedSeries<K::Elem>,
    i: usize,
) -> MultiPoly<K::Elem> {
    let (n, k, p) = (inst.n(), &inst.field, inst.p() as usize);
    let x = MultiPoly::reduced_var(n, i, k);
    let mut xl = MultiPoly::one(n, k);
    let mut out = MultiPoly::zero(n);
    // [z^p] F(z) sum_l x^l z^l = sum_l x^l [z^(p-l)] F
    for l in 0..=p {
        let a = f.coeff(p - l);
        if !a.is_zero() {
            out = out.add(&a.mul(&xl, k), k);
        }
        xl = xl.mul(&x, k);
    }
    out
}

/// All of `f_1, ..., f_{n-1}`.
pub fn singular_vectors<K: Field>(inst: &Instance<K>) -> Result<Vec<MultiPoly<K::Elem>>, SeriesError> {
    let f = build_f(inst, inst.p() as usize)?;
    Ok((0..inst.n() - 1)
        .into_par_iter()
        .map(|i| fi_from_f(inst, &f, i))
        .collect())
}

/// `sum_j x_j / (1 - x_j z) = sum_l (x_1^(l+1) + ... + x_n^(l+1)) z^l`.
fn power_sum_series<K: Field>(inst: &Instance<K>, order: usize) -> TruncatedSeries<K::Elem> {
    let (n, k) = (inst.n(), &inst.field);
    let mut s = TruncatedSeries::zero(n, order);
    for j in 0..n {
        let x = MultiPoly::reduced_var(n, j, k);
        let term = TruncatedSeries::geometric(&x, order, k).map(|a| a.mul(&x, k));
        s = s.add(&term, k);
    }
    s
}

/// `binom(c - 1, p - 1) (g - 1)^(p - 1)`, the tail shared by `V` and `G`.
fn tail<K: Field>(inst: &Instance<K>, order: usize) -> Result<TruncatedSeries<K::Elem>, SeriesError> {
    let k = &inst.field;
    let p = inst.p() as usize;
    let powers = powers_of_g_minus_one(inst, order, p - 1);
    let cm1 = k.sub(&inst.c, &k.one());
    let b = binomial(k, &cm1, p as u32 - 1)?;
    Ok(powers[p - 1].scale(&b, k))
}

/// Orders that were checked by a lemma verification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub lemma: &'static str,
    /// Orders `l` at which the vanishing `[z^l] = 0` was confirmed.
    pub vanishing_orders: Vec<usize>,
    /// Orders through which the accompanying identity was confirmed.
    pub identity_orders: Vec<usize>,
}

/// `[z^0] g = 1` and `[z^1] g = 0`.
pub fn check_g_low_orders<K: Field>(inst: &Instance<K>) -> Result<LemmaReport, SeriesError> {
    const LEMMA: &str = "z^2 divides g - 1";
    let k = &inst.field;
    let g = build_g(inst, 2);
    if *g.coeff(0) != MultiPoly::one(inst.n(), k) {
        return Err(SeriesError::LemmaViolation { lemma: LEMMA, order: 0 });
    }
    if !g.coeff(1).is_zero() {
        return Err(SeriesError::LemmaViolation { lemma: LEMMA, order: 1 });
    }
    Ok(LemmaReport {
        lemma: LEMMA,
        vanishing_orders: vec![0, 1],
        identity_orders: Vec::new(),
    })
}

/// `V(z) = sum_j x_j / (1 - x_j z) * c binom(c - 1, p - 1) (g - 1)^(p - 1)`.
pub fn build_v<K: Field>(inst: &Instance<K>, order: usize) -> Result<TruncatedSeries<K::Elem>, SeriesError> {
    let k = &inst.field;
    let s = power_sum_series(inst, order);
    Ok(s.mul(&tail(inst, order)?, k).scale(&inst.c, k))
}

/// `[z^l] V = 0` for `l < p`, and `F' = V - c sum_j x_j / (1 - x_j z) F`
/// through order `N - 1` with `N = p`.
pub fn check_lemma_v<K: Field>(inst: &Instance<K>) -> Result<LemmaReport, SeriesError> {
    const LEMMA: &str = "V vanishes below order p";
    let k = &inst.field;
    let order = inst.p() as usize;
    let v = build_v(inst, order)?;
    for l in 0..order {
        if !v.coeff(l).is_zero() {
            return Err(SeriesError::LemmaViolation { lemma: LEMMA, order: l });
        }
    }
    let f = build_f(inst, order)?;
    let rhs = v.sub(&power_sum_series(inst, order).mul(&f, k).scale(&inst.c, k), k);
    let lhs = f.derivative(k);
    for l in 0..order {
        if lhs.coeff(l) != rhs.coeff(l) {
            return Err(SeriesError::LemmaViolation {
                lemma: "F' = V - c sum x_j/(1 - x_j z) F",
                order: l,
            });
        }
    }
    Ok(LemmaReport {
        lemma: LEMMA,
        vanishing_orders: (0..order).collect(),
        identity_orders: (0..order).collect(),
    })
}

/// `zc / (1 - x_2 z) - zc / (1 - x_1 z)`.
fn pole_difference<K: Field>(inst: &Instance<K>, order: usize) -> TruncatedSeries<K::Elem> {
    let (n, k) = (inst.n(), &inst.field);
    let x1 = MultiPoly::reduced_var(n, 0, k);
    let x2 = MultiPoly::reduced_var(n, 1, k);
    TruncatedSeries::geometric(&x2, order, k)
        .sub(&TruncatedSeries::geometric(&x1, order, k), k)
        .shift()
        .scale(&inst.c, k)
}

/// `G(z) = (zc / (1 - x_2 z) - zc / (1 - x_1 z)) binom(c - 1, p - 1) (g - 1)^(p - 1)`.
pub fn build_g_tail<K: Field>(
    inst: &Instance<K>,
    order: usize,
) -> Result<TruncatedSeries<K::Elem>, SeriesError> {
    let k = &inst.field;
    Ok(pole_difference(inst, order).mul(&tail(inst, order)?, k))
}

/// `[z^l] G = 0` for `l <= p`, and
/// `d_{y_2 - y_1} F = G - (zc / (1 - x_2 z) - zc / (1 - x_1 z)) F`
/// through order `N = p + 1`.
pub fn check_lemma_g<K: Field>(inst: &Instance<K>) -> Result<LemmaReport, SeriesError> {
    const LEMMA: &str = "G vanishes through order p";
    let k = &inst.field;
    let order = inst.p() as usize + 1;
    let g = build_g_tail(inst, order)?;
    for l in 0..order {
        if !g.coeff(l).is_zero() {
            return Err(SeriesError::LemmaViolation { lemma: LEMMA, order: l });
        }
    }
    let f = build_f(inst, order)?;
    let lhs = f.map(|a| a.partial_diff(1, 0, k));
    let rhs = g.sub(&pole_difference(inst, order).mul(&f, k), k);
    for l in 0..=order {
        if lhs.coeff(l) != rhs.coeff(l) {
            return Err(SeriesError::LemmaViolation {
                lemma: "d_{y_2-y_1} F = G - (zc/(1-x_2 z) - zc/(1-x_1 z)) F",
                order: l,
            });
        }
    }
    Ok(LemmaReport {
        lemma: LEMMA,
        vanishing_orders: (0..order).collect(),
        identity_orders: (0..=order).collect(),
    })
}

/// `W[j][i] = f_i` evaluated at `x_n = -1, x_j = 1`, all other variables 0.
pub fn witness_values<K: Field>(
    inst: &Instance<K>,
    generators: &[MultiPoly<K::Elem>],
) -> Vec<Vec<K::Elem>> {
    let (n, k) = (inst.n(), &inst.field);
    (0..n - 1)
        .map(|j| {
            let mut point = vec![k.zero(); n];
            point[j] = k.one();
            point[n - 1] = k.from_i64(-1);
            generators.iter().map(|f| f.evaluate(&point, k)).collect()
        })
        .collect()
}

/// The closed-form values of [`witness_values`]: for `p = 2`, `1 - c` on
/// the diagonal and `-c` elsewhere; for odd `p`, `(-1)^M binom(c - 1, M)`
/// with `M = (p - 1) / 2` on the diagonal and 0 elsewhere.
pub fn expected_witness<K: Field>(inst: &Instance<K>) -> Result<(K::Elem, K::Elem), CoeffError> {
    let (k, p) = (&inst.field, inst.p());
    if p == 2 {
        return Ok((k.sub(&k.one(), &inst.c), k.neg(&inst.c)));
    }
    let m = (p - 1) / 2;
    let b = binomial(k, &k.sub(&inst.c, &k.one()), m)?;
    let diag = if m % 2 == 1 { k.neg(&b) } else { b };
    Ok((diag, k.zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{ExtField, PrimeField, RationalFuncField};
    use crate::poly::{Monomial, Permutation};
    use crate::session::Session;
    use rand::SeedableRng;

    fn symbolic(p: u32, n: usize) -> Instance<RationalFuncField> {
        Instance::symbolic(Session::new(p, n).unwrap()).unwrap()
    }

    fn at_prime(p: u32, n: usize, c: u32) -> Instance<PrimeField> {
        let field = PrimeField::new(p).unwrap();
        Instance::specialized(Session::new(p, n).unwrap(), field, c).unwrap()
    }

    #[test]
    fn g_for_two_variables() {
        // p = 2, n = 2: g = 1 - x1^2 z^2
        let inst = at_prime(2, 2, 0);
        let k = &inst.field;
        let g = build_g(&inst, 3);
        assert_eq!(g.dump(k), "z^0: 1\nz^1: 0\nz^2: 1 * x1^2\nz^3: 0\n");
    }

    #[test]
    fn g_matches_elementary_symmetric_oracle() {
        // [z^2] g = e_2(x_1..x_4), expanded by brute force over pairs
        let inst = at_prime(2, 4, 0);
        let k = &inst.field;
        let g = build_g(&inst, 4);
        let mut e2 = MultiPoly::zero(4);
        for a in 0..4 {
            for b in a + 1..4 {
                let t = MultiPoly::var(4, a, k).mul(&MultiPoly::var(4, b, k), k);
                e2 = e2.add(&t, k);
            }
        }
        assert_eq!(*g.coeff(2), e2.reduce(k));
        assert!(g.is_graded());
    }

    #[test]
    fn f_in_the_smallest_case() {
        let inst = symbolic(2, 2);
        let k = &inst.field;
        let f = build_f(&inst, 2).unwrap();
        // F = 1 - c x1^2 z^2; in characteristic 2, -c = c
        assert_eq!(f.dump(k), "z^0: (1)/(1)\nz^1: 0\nz^2: (c)/(1) * x1^2\n");
        let f1 = extract_fi(&inst, 0).unwrap();
        assert_eq!(f1.format(k), "(c+1)/(1) * x1^2");
        let fi = build_fi(&inst, 0, 2).unwrap();
        assert_eq!(*fi.coeff(0), MultiPoly::one(2, k));
        assert_eq!(*fi.coeff(2), f1);
    }

    #[test]
    fn c_zero_degenerates_to_powers() {
        for (p, n) in [(2, 2), (2, 4), (3, 3), (3, 6), (5, 5)] {
            let inst = at_prime(p, n, 0);
            let k = &inst.field;
            assert_eq!(build_f(&inst, p as usize).unwrap(), TruncatedSeries::one(n, p as usize, k));
            for (i, f) in singular_vectors(&inst).unwrap().iter().enumerate() {
                let mut e = vec![0; n];
                e[i] = p;
                assert_eq!(*f, MultiPoly::monomial(n, Monomial::from_exponents(&e), 1, k));
            }
        }
    }

    #[test]
    fn lemmas_hold_symbolically() {
        for (p, n) in [(2, 2), (2, 4), (3, 3), (3, 6), (5, 5)] {
            let inst = symbolic(p, n);
            check_g_low_orders(&inst).unwrap();
            let v = check_lemma_v(&inst).unwrap();
            assert_eq!(v.vanishing_orders.len(), p as usize);
            let g = check_lemma_g(&inst).unwrap();
            assert_eq!(g.vanishing_orders.len(), p as usize + 1);
        }
    }

    #[test]
    fn constructed_series_are_graded() {
        let inst = symbolic(3, 3);
        assert!(build_g(&inst, 4).is_graded());
        assert!(build_f(&inst, 4).unwrap().is_graded());
        assert!(build_fi(&inst, 1, 4).unwrap().is_graded());
        assert!(build_v(&inst, 4).unwrap().is_graded());
        assert!(build_g_tail(&inst, 4).unwrap().is_graded());
    }

    #[test]
    fn singular_vectors_are_homogeneous_of_degree_p() {
        for (p, n) in [(2, 6), (3, 3), (5, 5)] {
            let inst = symbolic(p, n);
            for f in singular_vectors(&inst).unwrap() {
                assert!(f.is_homogeneous() && f.is_reduced());
                assert_eq!(f.degree(), Some(p));
            }
        }
    }

    #[test]
    fn fi_symmetric_in_the_other_variables() {
        let inst = symbolic(3, 6);
        let k = &inst.field;
        let fs = singular_vectors(&inst).unwrap();
        for (i, f) in fs.iter().enumerate() {
            for a in 0..6 {
                for b in a + 1..6 {
                    if a == i || b == i {
                        continue;
                    }
                    let s = Permutation::transposition(6, a, b);
                    assert_eq!(f.act(&s, k), *f, "f_{} under s_{}{}", i + 1, a + 1, b + 1);
                }
            }
        }
    }

    #[test]
    fn witness_values_match_closed_form() {
        for (p, n) in [(2, 2), (2, 4), (3, 3), (3, 6), (5, 5)] {
            let inst = symbolic(p, n);
            let fs = singular_vectors(&inst).unwrap();
            let w = witness_values(&inst, &fs);
            let (diag, off) = expected_witness(&inst).unwrap();
            for (j, row) in w.iter().enumerate() {
                for (i, v) in row.iter().enumerate() {
                    assert_eq!(*v, if i == j { diag.clone() } else { off.clone() });
                }
            }
        }
    }

    #[test]
    fn specialized_and_symbolic_agree() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for (p, n) in [(2, 4), (3, 3), (5, 5)] {
            let sym = symbolic(p, n);
            let fs = singular_vectors(&sym).unwrap();
            let ext = ExtField::with_min_order(p, 64).unwrap();
            for _ in 0..3 {
                let c0 = ext.random(&mut rng);
                let inst = Instance::specialized(sym.session, ext.clone(), c0).unwrap();
                let direct = singular_vectors(&inst).unwrap();
                for (f, g) in fs.iter().zip(&direct) {
                    let spec = f
                        .try_map_coeffs(|r| {
                            let v = sym.field.specialize(r, &ext, &c0)?;
                            Ok((!ext.is_zero(&v)).then_some(v))
                        })
                        .unwrap();
                    assert_eq!(spec, *g);
                }
            }
        }
    }
}
