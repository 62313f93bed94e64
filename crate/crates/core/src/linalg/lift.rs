//! Row spaces over `F_p(c)` recovered from their values at many points.
//!
//! The reduced row-echelon form is computed at points `c = t` of a large
//! extension `F_{p^k}`, each entry is rebuilt as a fraction by rational
//! reconstruction, and the result is then checked exactly: every input row
//! must lie in the span of the candidate rows. Together with the rank at a
//! single point, which bounds the generic rank from below, this certifies the
//! answer. Any failure falls back to direct elimination over `F_p(c)`.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rayon::prelude::*;
use std::collections::HashMap;

use super::{row_echelon, Echelon, SparseRow};
use crate::coeff::{ExtElem, ExtField, Field, RationalFunc, RationalFuncField};

const MIN_FIELD_ORDER: u64 = 1 << 12;
const FIRST_BATCH: usize = 12;
const CHECK_POINTS: usize = 3;
const MAX_POINTS: usize = 384;

/// How a symbolic row space was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Interpolated from `points` evaluations, then verified exactly.
    Lifted { points: usize },
    /// Gaussian elimination over `F_p(c)`.
    Direct,
}

/// Reduced row-echelon form over `F_p(c)` of the span of `rows`.
pub fn symbolic_rref(
    k: &RationalFuncField,
    ncols: usize,
    rows: Vec<SparseRow<RationalFunc>>,
) -> (Echelon<RationalFunc>, Route) {
    if let Some((e, points)) = lift(k, ncols, &rows) {
        return (e, Route::Lifted { points });
    }
    (row_echelon(k, ncols, rows).into_rref(k), Route::Direct)
}

struct Sample {
    point: ExtElem,
    pivots: Vec<u32>,
    rows: Vec<SparseRow<ExtElem>>,
}

/// More pivots first, then the lexicographically smaller list. The generic
/// pivot set beats every specialization.
fn better(a: &[u32], b: &[u32]) -> bool {
    a.len() > b.len() || (a.len() == b.len() && a < b)
}

fn lift(
    k: &RationalFuncField,
    ncols: usize,
    rows: &[SparseRow<RationalFunc>],
) -> Option<(Echelon<RationalFunc>, usize)> {
    let ext = ExtField::with_min_order(k.characteristic(), MIN_FIELD_ORDER).ok()?;
    // Points outside F_p, in a fixed shuffled order.
    let mut points: Vec<ExtElem> = ext
        .elements()
        .filter(|e| ext.coeffs(e)[1..].iter().any(|&d| d != 0))
        .collect();
    points.shuffle(&mut StdRng::seed_from_u64(0x5eed));
    let mut points = points.into_iter();

    // Full rank at one point is full rank generically.
    let mut used = 0;
    let first = loop {
        used += 1;
        if let Some(s) = sample(k, &ext, ncols, rows, points.next()?) {
            break s;
        }
    };
    if first.pivots.len() == ncols {
        return Some((identity(k, ncols), used));
    }
    let mut best = first.pivots.clone();
    let mut samples = vec![first];
    let mut need = FIRST_BATCH;
    loop {
        let want = need + CHECK_POINTS;
        while samples.len() < want {
            let batch: Vec<ExtElem> = points.by_ref().take(want - samples.len()).collect();
            if batch.is_empty() || used >= MAX_POINTS * 2 {
                return None;
            }
            used += batch.len();
            let fresh: Vec<Sample> = batch
                .into_par_iter()
                .filter_map(|t| sample(k, &ext, ncols, rows, t))
                .collect();
            for s in fresh {
                if better(&s.pivots, &best) {
                    best = s.pivots.clone();
                    samples.retain(|x| x.pivots == best);
                }
                if s.pivots == best {
                    samples.push(s);
                }
            }
        }
        let (fit, check) = samples.split_at(need);
        if let Some(cand) = reconstruct(k, &ext, ncols, fit, check) {
            return verify(k, &cand, rows).then_some((cand, samples.len()));
        }
        if need >= MAX_POINTS {
            return None;
        }
        need *= 2;
    }
}

fn sample(
    k: &RationalFuncField,
    ext: &ExtField,
    ncols: usize,
    rows: &[SparseRow<RationalFunc>],
    t: ExtElem,
) -> Option<Sample> {
    // Entries repeat heavily, so each distinct value is evaluated once.
    let mut seen: HashMap<&RationalFunc, ExtElem> = HashMap::new();
    let mut spec = Vec::with_capacity(rows.len());
    for r in rows {
        let mut out = Vec::with_capacity(r.len());
        for (c, v) in r {
            let x = match seen.get(v) {
                Some(x) => *x,
                None => {
                    let x = k.specialize(v, ext, &t).ok()?;
                    seen.insert(v, x);
                    x
                }
            };
            if !ext.is_zero(&x) {
                out.push((*c, x));
            }
        }
        spec.push(out);
    }
    let e = row_echelon(ext, ncols, spec).into_rref(ext);
    Some(Sample {
        point: t,
        pivots: e.pivot_columns().into_iter().map(|c| c as u32).collect(),
        rows: e.rows().to_vec(),
    })
}

fn identity(k: &RationalFuncField, ncols: usize) -> Echelon<RationalFunc> {
    Echelon {
        ncols,
        rows: (0..ncols as u32).map(|c| vec![(c, k.one())]).collect(),
        reduced: true,
    }
}

fn value_at(row: &SparseRow<ExtElem>, col: u32) -> ExtElem {
    match row.binary_search_by_key(&col, |e| e.0) {
        Ok(i) => row[i].1,
        Err(_) => ExtElem::ZERO,
    }
}

/// Candidate rows, or `None` when the sample points were too few.
fn reconstruct(
    k: &RationalFuncField,
    ext: &ExtField,
    ncols: usize,
    fit: &[Sample],
    check: &[Sample],
) -> Option<Echelon<RationalFunc>> {
    let xs: Vec<ExtElem> = fit.iter().map(|s| s.point).collect();
    let nrows = fit[0].rows.len();
    let built: Option<Vec<SparseRow<RationalFunc>>> = (0..nrows)
        .into_par_iter()
        .map(|i| {
            let mut cols: Vec<u32> = fit
                .iter()
                .chain(check)
                .flat_map(|s| s.rows[i][1..].iter().map(|e| e.0))
                .collect();
            cols.sort_unstable();
            cols.dedup();
            let mut row = vec![(fit[0].rows[i][0].0, k.one())];
            for q in cols {
                let ys: Vec<ExtElem> = fit.iter().map(|s| value_at(&s.rows[i], q)).collect();
                let f = rational_reconstruct(k, ext, &xs, &ys)?;
                for s in check {
                    let got = k.specialize(&f, ext, &s.point).ok()?;
                    if got != value_at(&s.rows[i], q) {
                        return None;
                    }
                }
                if !k.is_zero(&f) {
                    row.push((q, f));
                }
            }
            Some(row)
        })
        .collect();
    Some(Echelon {
        ncols,
        rows: built?,
        reduced: true,
    })
}

/// Exact check that every row of `rows` lies in the span of `cand`.
fn verify(k: &RationalFuncField, cand: &Echelon<RationalFunc>, rows: &[SparseRow<RationalFunc>]) -> bool {
    let mut pivot_row = vec![usize::MAX; cand.ncols];
    for (i, r) in cand.rows.iter().enumerate() {
        pivot_row[r[0].0 as usize] = i;
    }
    rows.par_iter().all(|v| {
        let mut rest: HashMap<u32, RationalFunc> = HashMap::new();
        for (col, a) in v {
            match pivot_row[*col as usize] {
                usize::MAX => {
                    let e = rest.entry(*col).or_insert_with(|| k.zero());
                    *e = k.add(e, a);
                }
                i => {
                    for (q, b) in &cand.rows[i][1..] {
                        let e = rest.entry(*q).or_insert_with(|| k.zero());
                        *e = k.sub(e, &k.mul(a, b));
                    }
                }
            }
        }
        rest.values().all(|x| k.is_zero(x))
    })
}

type Dense = Vec<ExtElem>;

fn trim(a: &mut Dense) {
    while a.last() == Some(&ExtElem::ZERO) {
        a.pop();
    }
}

fn poly_sub(ext: &ExtField, a: &[ExtElem], b: &[ExtElem]) -> Dense {
    let mut out: Dense = (0..a.len().max(b.len()))
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(ExtElem::ZERO);
            let y = b.get(i).copied().unwrap_or(ExtElem::ZERO);
            ext.sub(&x, &y)
        })
        .collect();
    trim(&mut out);
    out
}

fn poly_mul(ext: &ExtField, a: &[ExtElem], b: &[ExtElem]) -> Dense {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ExtElem::ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = ext.mul_add(&out[i + j], x, y);
        }
    }
    trim(&mut out);
    out
}

fn poly_divrem(ext: &ExtField, a: &[ExtElem], b: &[ExtElem]) -> (Dense, Dense) {
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let inv = ext.inv(b.last().unwrap()).unwrap();
    let mut q = vec![ExtElem::ZERO; r.len() - b.len() + 1];
    for s in (0..q.len()).rev() {
        let f = ext.mul(&r[s + b.len() - 1], &inv);
        q[s] = f;
        for (j, y) in b.iter().enumerate() {
            r[s + j] = ext.sub(&r[s + j], &ext.mul(&f, y));
        }
    }
    trim(&mut r);
    (q, r)
}

/// Newton interpolation, returned in the monomial basis.
fn interpolate(ext: &ExtField, xs: &[ExtElem], ys: &[ExtElem]) -> Dense {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = ext.sub(&dd[i], &dd[i - 1]);
            let den = ext.sub(&xs[i], &xs[i - j]);
            dd[i] = ext.div(&num, &den).unwrap();
        }
    }
    let mut out: Dense = vec![dd[n - 1]];
    for i in (0..n - 1).rev() {
        // out = out * (c - xs[i]) + dd[i]
        out.insert(0, ExtElem::ZERO);
        for j in 0..out.len() - 1 {
            let t = ext.mul(&out[j + 1], &xs[i]);
            out[j] = ext.sub(&out[j], &t);
        }
        out[0] = ext.add(&out[0], &dd[i]);
    }
    trim(&mut out);
    out
}

/// Coefficients over `F_p`, if every coefficient lies in the prime field.
fn descend(ext: &ExtField, a: &[ExtElem]) -> Option<Vec<u32>> {
    a.iter()
        .map(|e| {
            let d = ext.coeffs(e);
            d[1..].iter().all(|&x| x == 0).then_some(d[0])
        })
        .collect()
}

/// The fraction with numerator and denominator degrees summing below
/// `xs.len()` that takes the values `ys`, when it exists and is defined over
/// `F_p`.
fn rational_reconstruct(
    k: &RationalFuncField,
    ext: &ExtField,
    xs: &[ExtElem],
    ys: &[ExtElem],
) -> Option<RationalFunc> {
    let n = xs.len();
    let mut modulus: Dense = vec![ext.one()];
    for x in xs {
        modulus = poly_mul(ext, &modulus, &[ext.neg(x), ext.one()]);
    }
    let (mut r0, mut r1) = (modulus, interpolate(ext, xs, ys));
    let (mut t0, mut t1): (Dense, Dense) = (Vec::new(), vec![ext.one()]);
    let num_bound = (n - 1) / 2;
    while r1.len() > num_bound + 1 {
        let (q, r) = poly_divrem(ext, &r0, &r1);
        let t = poly_sub(ext, &t0, &poly_mul(ext, &q, &t1));
        (r0, r1) = (r1, r);
        (t0, t1) = (t1, t);
    }
    if r1.is_empty() {
        return Some(k.zero());
    }
    if t1.len() > n - num_bound {
        return None;
    }
    let lead = ext.inv(t1.last().unwrap()).ok()?;
    let num: Dense = r1.iter().map(|x| ext.mul(x, &lead)).collect();
    let den: Dense = t1.iter().map(|x| ext.mul(x, &lead)).collect();
    let (num, den) = (descend(ext, &num)?, descend(ext, &den)?);
    k.fraction(&num, &den).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field() -> RationalFuncField {
        RationalFuncField::new(3).unwrap()
    }

    #[test]
    fn reconstructs_known_fractions() {
        let k = field();
        let ext = ExtField::with_min_order(3, MIN_FIELD_ORDER).unwrap();
        let g = ext.generator();
        let xs: Vec<ExtElem> = (1..12).map(|i| ext.pow(&g, i * 37)).collect();
        for (num, den) in [
            (vec![], vec![1]),
            (vec![2], vec![1]),
            (vec![1, 2, 0, 1], vec![1]),
            (vec![1], vec![1, 1, 0, 0, 1]),
            (vec![0, 1, 1], vec![2, 0, 1]),
        ] {
            let f = k.fraction(&num, &den).unwrap();
            let ys: Vec<ExtElem> = xs.iter().map(|x| k.specialize(&f, &ext, x).unwrap()).collect();
            assert_eq!(rational_reconstruct(&k, &ext, &xs, &ys), Some(f));
        }
    }

    #[test]
    fn matches_direct_elimination() {
        let k = field();
        let c = k.c();
        let poly = |cs: &[u32]| k.polynomial(cs);
        // rank 2 generically, with fractional reduced entries
        let rows = vec![
            vec![(0, poly(&[0, 1])), (1, poly(&[1])), (3, poly(&[1, 1]))],
            vec![(0, poly(&[1])), (2, poly(&[2, 0, 1])), (3, poly(&[0, 0, 1]))],
            vec![(0, k.add(&c, &k.one())), (1, poly(&[1])), (2, poly(&[2, 0, 1])), (3, poly(&[1, 1, 1]))],
        ];
        let direct = row_echelon(&k, 4, rows.clone()).into_rref(&k);
        let (lifted, route) = symbolic_rref(&k, 4, rows);
        assert!(matches!(route, Route::Lifted { .. }));
        assert_eq!(lifted, direct);
        assert_eq!(lifted.rank(), 2);
    }

    #[test]
    fn zero_matrix() {
        let k = field();
        let (e, _) = symbolic_rref(&k, 3, vec![Vec::new(), Vec::new()]);
        assert_eq!(e.rank(), 0);
    }
}
