//! Sparse exact row reduction over any [`Field`].

use rayon::prelude::*;

use crate::coeff::{ExtField, Field, PrimeField, RationalFuncField};

mod lift;

pub use lift::{symbolic_rref, Route};

/// Nonzero entries `(column, value)` with strictly increasing columns.
pub type SparseRow<E> = Vec<(u32, E)>;

/// Row-echelon form: every row has leading entry 1, and leading columns
/// strictly increase down the rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Echelon<E> {
    ncols: usize,
    rows: Vec<SparseRow<E>>,
    reduced: bool,
}

impl<E: Clone + PartialEq + Send + Sync> Echelon<E> {
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseRow<E>] {
        &self.rows
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r[0].0 as usize).collect()
    }

    /// Clear every entry above a pivot, giving the reduced row-echelon form.
    pub fn into_rref<K: Field<Elem = E>>(mut self, k: &K) -> Self {
        if self.reduced {
            return self;
        }
        for j in (0..self.rows.len()).rev() {
            let (head, tail) = self.rows.split_at_mut(j);
            let pivot = &tail[0];
            let col = pivot[0].0;
            head.par_iter_mut().for_each(|row| {
                if let Ok(pos) = row.binary_search_by_key(&col, |e| e.0) {
                    let a = row[pos].1.clone();
                    *row = axpy(k, row, &k.neg(&a), pivot);
                }
            });
        }
        self.reduced = true;
        self
    }

    /// Basis of `{v : R v = 0}`; one vector per free column, with a 1 there.
    ///
    /// Requires the reduced form.
    pub fn nullspace<K: Field<Elem = E>>(&self, k: &K) -> Vec<SparseRow<E>> {
        assert!(self.reduced, "nullspace needs the reduced row-echelon form");
        let mut is_pivot = vec![false; self.ncols];
        for r in &self.rows {
            is_pivot[r[0].0 as usize] = true;
        }
        let mut basis: Vec<SparseRow<E>> = (0..self.ncols)
            .filter(|&q| !is_pivot[q])
            .map(|q| vec![(q as u32, k.one())])
            .collect();
        let free_pos: Vec<Option<usize>> = {
            let mut pos = vec![None; self.ncols];
            for (i, v) in basis.iter().enumerate() {
                pos[v[0].0 as usize] = Some(i);
            }
            pos
        };
        for r in &self.rows {
            let pc = r[0].0;
            for (q, a) in &r[1..] {
                if let Some(i) = free_pos[*q as usize] {
                    basis[i].push((pc, k.neg(a)));
                }
            }
        }
        for v in &mut basis {
            v.sort_by_key(|e| e.0);
        }
        basis
    }

    /// Whether `v` lies in the row space.
    pub fn contains<K: Field<Elem = E>>(&self, v: &SparseRow<E>, k: &K) -> bool {
        let mut cur = v.clone();
        for r in &self.rows {
            let col = r[0].0;
            match cur.first() {
                None => return true,
                Some(&(c, _)) if c > col => continue,
                _ => {}
            }
            if let Ok(pos) = cur.binary_search_by_key(&col, |e| e.0) {
                let a = cur[pos].1.clone();
                cur = axpy(k, &cur, &k.neg(&a), r);
            }
        }
        cur.is_empty()
    }
}

/// `x + a y` for sorted sparse rows.
pub fn axpy<K: Field>(k: &K, x: &[(u32, K::Elem)], a: &K::Elem, y: &[(u32, K::Elem)]) -> SparseRow<K::Elem> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        let (cx, cy) = (x[i].0, y[j].0);
        if cx < cy {
            out.push(x[i].clone());
            i += 1;
        } else if cy < cx {
            out.push((cy, k.mul(a, &y[j].1)));
            j += 1;
        } else {
            let v = k.mul_add(&x[i].1, a, &y[j].1);
            if !k.is_zero(&v) {
                out.push((cx, v));
            }
            i += 1;
            j += 1;
        }
    }
    out.extend_from_slice(&x[i..]);
    out.extend(y[j..].iter().map(|(c, v)| (*c, k.mul(a, v))));
    out
}

pub fn dot<K: Field>(k: &K, x: &[(u32, K::Elem)], dense: &[K::Elem]) -> K::Elem {
    x.iter()
        .fold(k.zero(), |acc, (c, v)| k.mul_add(&acc, v, &dense[*c as usize]))
}

fn row_cost<K: Field>(k: &K, r: &[(u32, K::Elem)]) -> u64 {
    r.iter().map(|(_, v)| k.cost(v) as u64).sum()
}

/// Row-echelon form of the span of `rows`.
///
/// Columns are processed left to right; rows wait in a bucket keyed by their
/// leading column. In each bucket the pivot is the row whose leading entry is
/// cheapest, then the cheapest and shortest row, then the earliest.
pub fn row_echelon<K: Field>(k: &K, ncols: usize, rows: Vec<SparseRow<K::Elem>>) -> Echelon<K::Elem> {
    let mut buckets: Vec<Vec<SparseRow<K::Elem>>> = vec![Vec::new(); ncols];
    for r in rows {
        debug_assert!(r.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(r.iter().all(|(c, _)| (*c as usize) < ncols));
        if let Some(&(c, _)) = r.first() {
            buckets[c as usize].push(r);
        }
    }
    let mut out = Vec::new();
    for col in 0..ncols {
        let mut bucket = std::mem::take(&mut buckets[col]);
        if bucket.is_empty() {
            continue;
        }
        let best = (0..bucket.len())
            .min_by_key(|&i| {
                let r = &bucket[i];
                (k.cost(&r[0].1), row_cost(k, r), r.len(), i)
            })
            .unwrap();
        let pivot = bucket.swap_remove(best);
        let inv = k.inv(&pivot[0].1).expect("leading entries are nonzero");
        let pivot: SparseRow<K::Elem> = pivot.into_iter().map(|(c, v)| (c, k.mul(&v, &inv))).collect();
        let reduced: Vec<SparseRow<K::Elem>> = bucket
            .par_iter()
            .map(|r| axpy(k, &r[1..], &k.neg(&r[0].1), &pivot[1..]))
            .collect();
        for r in reduced {
            if let Some(&(c, _)) = r.first() {
                buckets[c as usize].push(r);
            }
        }
        out.push(pivot);
    }
    Echelon {
        ncols,
        rows: out,
        reduced: false,
    }
}

/// Canonical reduced row-echelon basis of the span of `rows`.
pub fn rref<K: Field>(k: &K, ncols: usize, rows: Vec<SparseRow<K::Elem>>) -> Echelon<K::Elem> {
    row_echelon(k, ncols, rows).into_rref(k)
}

pub fn rank<K: Field>(k: &K, ncols: usize, rows: Vec<SparseRow<K::Elem>>) -> usize {
    row_echelon(k, ncols, rows).rank()
}

/// Fields with a preferred way of reducing a span.
pub trait Reduce: Field {
    /// Echelon form of the span of `rows`, reduced when `reduced` is set.
    fn span(&self, ncols: usize, rows: Vec<SparseRow<Self::Elem>>, reduced: bool) -> Echelon<Self::Elem> {
        let e = row_echelon(self, ncols, rows);
        if reduced {
            e.into_rref(self)
        } else {
            e
        }
    }
}

impl Reduce for PrimeField {}

impl Reduce for ExtField {}

impl Reduce for RationalFuncField {
    /// Always reduced; see [`symbolic_rref`].
    fn span(&self, ncols: usize, rows: Vec<SparseRow<Self::Elem>>, _reduced: bool) -> Echelon<Self::Elem> {
        symbolic_rref(self, ncols, rows).0
    }
}
