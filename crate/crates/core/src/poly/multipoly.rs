use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};

use super::monomial::Monomial;
use super::{Permutation, PolyError};
use crate::coeff::{CoeffError, Field};

/// A sparse polynomial in the ambient variables `x_1, ..., x_n`.
///
/// Indices are 0-based in the API (`x_1` is variable 0). A polynomial is
/// *reduced* when no term involves the last variable; reduced polynomials are
/// the canonical representatives of `A = k[x_1..x_n] / (x_1 + ... + x_n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly<E> {
    nvars: usize,
    terms: BTreeMap<Monomial, E>,
}

impl<E: Clone> MultiPoly<E> {
    pub fn zero(nvars: usize) -> Self {
        assert!(
            nvars <= Monomial::MAX_VARS,
            "at most {} variables are supported",
            Monomial::MAX_VARS
        );
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms, largest monomial first.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &E)> + '_ {
        self.terms.iter().rev().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, m: Monomial) -> Option<&E> {
        self.terms.get(&m)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn is_reduced(&self) -> bool {
        let last = self.nvars - 1;
        self.terms.keys().all(|m| m.exponent(last) == 0)
    }
}

impl<E: Clone + PartialEq> MultiPoly<E> {
    pub fn constant<K: Field<Elem = E>>(nvars: usize, c: E, k: &K) -> Self {
        Self::monomial(nvars, Monomial::ONE, c, k)
    }

    pub fn one<K: Field<Elem = E>>(nvars: usize, k: &K) -> Self {
        Self::constant(nvars, k.one(), k)
    }

    pub fn monomial<K: Field<Elem = E>>(nvars: usize, m: Monomial, c: E, k: &K) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(m, c, k);
        p
    }

    /// The ambient variable `x_{i+1}` (not reduced).
    pub fn var<K: Field<Elem = E>>(nvars: usize, i: usize, k: &K) -> Self {
        assert!(i < nvars);
        Self::monomial(nvars, Monomial::var(i), k.one(), k)
    }

    /// The image of `x_{i+1}` in `A`: a variable, or `-(x_1 + ... + x_{n-1})`
    /// for the eliminated one.
    pub fn reduced_var<K: Field<Elem = E>>(nvars: usize, i: usize, k: &K) -> Self {
        Self::var(nvars, i, k).reduce(k)
    }

    pub fn from_terms<K: Field<Elem = E>>(
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, E)>,
        k: &K,
    ) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c, k);
        }
        p
    }

    pub fn add_term<K: Field<Elem = E>>(&mut self, m: Monomial, c: E, k: &K) {
        if k.is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = k.add(o.get(), &c);
                if k.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add<K: Field<Elem = E>>(&self, other: &Self, k: &K) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone(), k);
        }
        out
    }

    pub fn sub<K: Field<Elem = E>>(&self, other: &Self, k: &K) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, k.neg(c), k);
        }
        out
    }

    pub fn neg<K: Field<Elem = E>>(&self, k: &K) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (*m, k.neg(c))).collect(),
        }
    }

    pub fn scale<K: Field<Elem = E>>(&self, s: &E, k: &K) -> Self {
        if k.is_zero(s) {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (*m, k.mul(c, s))).collect(),
        }
    }

    pub fn mul_monomial<K: Field<Elem = E>>(&self, m: Monomial, s: &E, k: &K) -> Self {
        if k.is_zero(s) {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (t.mul(m), k.mul(c, s)))
                .collect(),
        }
    }

    pub fn mul<K: Field<Elem = E>>(&self, other: &Self, k: &K) -> Self {
        let mut acc: HashMap<Monomial, E> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let prod = k.mul(ca, cb);
                acc.entry(ma.mul(*mb))
                    .and_modify(|e| *e = k.add(e, &prod))
                    .or_insert(prod);
            }
        }
        Self::from_map(self.nvars, acc, k)
    }

    pub fn pow<K: Field<Elem = E>>(&self, e: u32, k: &K) -> Self {
        let mut acc = Self::one(self.nvars, k);
        for _ in 0..e {
            acc = acc.mul(self, k);
        }
        acc
    }

    pub(crate) fn from_map<K: Field<Elem = E>>(
        nvars: usize,
        acc: HashMap<Monomial, E>,
        k: &K,
    ) -> Self {
        Self {
            nvars,
            terms: acc.into_iter().filter(|(_, c)| !k.is_zero(c)).collect(),
        }
    }

    /// Substitute `x_n -> -(x_1 + ... + x_{n-1})`.
    pub fn reduce<K: Field<Elem = E>>(&self, k: &K) -> Self {
        let mut r = Reducer::new(self.nvars, k);
        r.reduce(self.terms.iter().map(|(m, c)| (*m, c.clone())))
    }

    /// Action of a permutation on the variables; reduced inputs give reduced
    /// outputs.
    pub fn act<K: Field<Elem = E>>(&self, sigma: &Permutation, k: &K) -> Self {
        assert_eq!(sigma.len(), self.nvars);
        let moved = Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.permute(sigma.images()), c.clone()))
                .collect(),
        };
        if self.is_reduced() {
            moved.reduce(k)
        } else {
            moved
        }
    }

    /// The transposition `s_{ij}` applied in the ambient ring, without reduction.
    pub fn swap_vars(&self, i: usize, j: usize) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.swap(i, j), c.clone()))
                .collect(),
        }
    }

    /// `(f - s_{ml} f) / (x_m - x_l)` computed on the ambient lift, then reduced.
    pub fn divided_difference<K: Field<Elem = E>>(&self, m: usize, l: usize, k: &K) -> Self {
        assert!(m != l, "divided difference needs distinct indices");
        let mut acc = Accumulator::new(k);
        for (mono, c) in &self.terms {
            acc.divided_difference(*mono, m, l, c);
        }
        Reducer::new(self.nvars, k).reduce(acc.into_terms())
    }

    /// `(d/dx_i - d/dx_j) f` on the ambient lift, then reduced.
    pub fn partial_diff<K: Field<Elem = E>>(&self, i: usize, j: usize, k: &K) -> Self {
        assert!(i != j, "partial derivative pairing needs distinct indices");
        let mut acc = Accumulator::new(k);
        for (mono, c) in &self.terms {
            acc.partial_diff(*mono, i, j, c);
        }
        Reducer::new(self.nvars, k).reduce(acc.into_terms())
    }

    pub fn evaluate<K: Field<Elem = E>>(&self, point: &[E], k: &K) -> E {
        assert_eq!(point.len(), self.nvars);
        self.terms.iter().fold(k.zero(), |acc, (m, c)| {
            let v = (0..self.nvars).fold(c.clone(), |v, i| {
                k.mul(&v, &k.pow(&point[i], m.exponent(i) as u64))
            });
            k.add(&acc, &v)
        })
    }

    pub fn try_map_coeffs<E2, F>(&self, mut f: F) -> Result<MultiPoly<E2>, CoeffError>
    where
        E2: Clone,
        F: FnMut(&E) -> Result<Option<E2>, CoeffError>,
    {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if let Some(v) = f(c)? {
                terms.insert(*m, v);
            }
        }
        Ok(MultiPoly {
            nvars: self.nvars,
            terms,
        })
    }

    /// `coeff * x1^a*x2` terms joined by ` + `, largest monomial first.
    pub fn format<K: Field<Elem = E>>(&self, k: &K) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms()
            .map(|(m, c)| {
                if m == Monomial::ONE {
                    k.format(c)
                } else {
                    format!("{} * {}", k.format(c), m.format(self.nvars))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Exact division by `x_m - x_l` through the change of coordinates
    /// `x_m = u + x_l`: divide by `u`, then substitute back.
    pub fn divide_by_difference<K: Field<Elem = E>>(
        &self,
        m: usize,
        l: usize,
        k: &K,
    ) -> Result<Self, PolyError> {
        assert!(m != l);
        let shifted = self.shift_var(m, l, false, k);
        let mut quotient = Self::zero(self.nvars);
        for (mono, c) in &shifted.terms {
            let e = mono.exponent(m);
            if e == 0 {
                return Err(PolyError::InexactDivision(format!(
                    "remainder term {} when dividing by x{} - x{}",
                    mono.format(self.nvars),
                    m + 1,
                    l + 1
                )));
            }
            quotient.add_term(mono.with_exponent(m, e - 1), c.clone(), k);
        }
        Ok(quotient.shift_var(m, l, true, k))
    }

    /// Substitute `x_m -> x_m + x_l` (or `x_m - x_l` when `negate`).
    fn shift_var<K: Field<Elem = E>>(&self, m: usize, l: usize, negate: bool, k: &K) -> Self {
        let mut out = Self::zero(self.nvars);
        for (mono, c) in &self.terms {
            let a = mono.exponent(m);
            let base = mono.with_exponent(m, 0);
            let row = binomial_row(a, k);
            for (t, b) in row.iter().enumerate() {
                // x_m^(a-t) * (+-x_l)^t
                let sign = if negate && t % 2 == 1 { k.neg(b) } else { b.clone() };
                let mm = base
                    .with_exponent(m, a - t as u32)
                    .with_exponent(l, base.exponent(l) + t as u32);
                out.add_term(mm, k.mul(c, &sign), k);
            }
        }
        out
    }
}

fn binomial_row<K: Field>(a: u32, k: &K) -> Vec<K::Elem> {
    let mut row = vec![k.one()];
    for _ in 0..a {
        let mut next = vec![k.one(); row.len() + 1];
        for t in 1..row.len() {
            next[t] = k.add(&row[t - 1], &row[t]);
        }
        row = next;
    }
    row
}

/// Hash-based accumulator for ambient terms, used by the operator kernels.
pub(crate) struct Accumulator<'a, K: Field> {
    field: &'a K,
    terms: HashMap<Monomial, K::Elem>,
}

impl<'a, K: Field> Accumulator<'a, K> {
    pub(crate) fn new(field: &'a K) -> Self {
        Self {
            field,
            terms: HashMap::new(),
        }
    }

    #[inline]
    pub(crate) fn add(&mut self, m: Monomial, c: K::Elem) {
        let k = self.field;
        self.terms
            .entry(m)
            .and_modify(|e| *e = k.add(e, &c))
            .or_insert(c);
    }

    /// Add `c * (x^mono - s_{ab} x^mono) / (x_a - x_b)`.
    pub(crate) fn divided_difference(&mut self, mono: Monomial, a: usize, b: usize, c: &K::Elem) {
        let (ea, eb) = (mono.exponent(a), mono.exponent(b));
        if ea == eb {
            return;
        }
        // (x_a^hi x_b^lo - x_a^lo x_b^hi) / (x_a - x_b) with the right sign
        let (lo, hi, coeff) = if ea > eb {
            (eb, ea, c.clone())
        } else {
            (ea, eb, self.field.neg(c))
        };
        let base = mono.with_exponent(a, lo).with_exponent(b, lo);
        let span = hi - lo;
        for t in 0..span {
            let m = base
                .with_exponent(a, lo + span - 1 - t)
                .with_exponent(b, lo + t);
            self.add(m, coeff.clone());
        }
    }

    /// Add `c * (d/dx_i - d/dx_j) x^mono`.
    pub(crate) fn partial_diff(&mut self, mono: Monomial, i: usize, j: usize, c: &K::Elem) {
        let k = self.field;
        let ei = mono.exponent(i);
        if ei > 0 {
            let v = k.mul(c, &k.from_i64(ei as i64));
            self.add(mono.with_exponent(i, ei - 1), v);
        }
        let ej = mono.exponent(j);
        if ej > 0 {
            let v = k.neg(&k.mul(c, &k.from_i64(ej as i64)));
            self.add(mono.with_exponent(j, ej - 1), v);
        }
    }

    pub(crate) fn into_terms(self) -> impl Iterator<Item = (Monomial, K::Elem)> {
        self.terms.into_iter()
    }
}

/// Reduction modulo `x_1 + ... + x_n`, caching the powers of
/// `-(x_1 + ... + x_{n-1})`.
pub struct Reducer<'a, K: Field> {
    field: &'a K,
    nvars: usize,
    powers: Vec<MultiPoly<K::Elem>>,
}

impl<'a, K: Field> Reducer<'a, K> {
    pub fn new(nvars: usize, field: &'a K) -> Self {
        Self {
            field,
            nvars,
            powers: vec![MultiPoly::one(nvars, field)],
        }
    }

    fn power(&mut self, e: usize) -> &MultiPoly<K::Elem> {
        let k = self.field;
        while self.powers.len() <= e {
            let minus_sum = MultiPoly::from_terms(
                self.nvars,
                (0..self.nvars - 1).map(|i| (Monomial::var(i), k.from_i64(-1))),
                k,
            );
            let next = self.powers.last().unwrap().mul(&minus_sum, k);
            self.powers.push(next);
        }
        &self.powers[e]
    }

    pub fn reduce(
        &mut self,
        terms: impl IntoIterator<Item = (Monomial, K::Elem)>,
    ) -> MultiPoly<K::Elem> {
        let k = self.field;
        let last = self.nvars - 1;
        let mut acc: HashMap<Monomial, K::Elem> = HashMap::new();
        for (m, c) in terms {
            let e = m.exponent(last) as usize;
            if e == 0 {
                acc.entry(m)
                    .and_modify(|v| *v = k.add(v, &c))
                    .or_insert(c);
                continue;
            }
            let base = m.with_exponent(last, 0);
            for (pm, pc) in self.power(e).terms.iter() {
                let v = k.mul(&c, pc);
                acc.entry(base.mul(*pm))
                    .and_modify(|x| *x = k.add(x, &v))
                    .or_insert(v);
            }
        }
        MultiPoly::from_map(self.nvars, acc, k)
    }
}
