//! The contravariant form `beta_c` on `A x Sym(h)`, its kernel `J_c`, and the
//! comparison `I_c = J_c`.
//!
//! `Sym(h)` uses the basis of monomials in `u_i = y_i - y_n`, stored as
//! [`Monomial`]s in `n - 1` variables. Gram entries are built by peeling one
//! `u_i` at a time: `beta(f, u_i g) = beta(D_{u_i} f, g)`, with `beta(1, 1) = 1`.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::coeff::{ExtElem, ExtField, Field, RationalFunc, RationalFuncField};
use crate::dunkl::{dunkl_apply, dunkl_monomials, DunklOp};
use crate::graded::{ideal_degree_dim, spanning_rows};
use crate::linalg::{Echelon, Reduce, SparseRow};
use crate::poly::{basis_index, monomial_basis, monomials_of_degree, specialize_poly, Monomial, MultiPoly};
use crate::series::singular_vectors;
use crate::session::{Instance, Session};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContraformError {
    #[error("an element of I_c pairs to a nonzero value in degree {degree}")]
    ContainmentFailure { degree: u32 },
    #[error("dim J_c = {dim_j} exceeds dim I_c = {dim_i} in degree {degree}")]
    DimensionGap { degree: u32, dim_i: usize, dim_j: usize },
    #[error("generator coefficients must be polynomial in c")]
    NonPolynomial,
}

/// Monomials of degree `d` in `u_1, ..., u_{n-1}`.
pub fn u_basis(n: usize, d: u32) -> Vec<Monomial> {
    monomials_of_degree(n - 1, d)
}

/// `beta_c` restricted to `A_d x Sym(h)_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix<E> {
    pub degree: u32,
    /// Monomial basis of `A_d`, indexing rows.
    pub rows: Vec<Monomial>,
    /// Monomials in the `u_i`, indexing columns.
    pub cols: Vec<Monomial>,
    /// Row-major entries.
    pub entries: Vec<Vec<E>>,
}

impl<E: Clone + PartialEq + Send + Sync> GramMatrix<E> {
    pub fn entry(&self, f: usize, g: usize) -> &E {
        &self.entries[f][g]
    }

    /// Column `g` as a sparse vector over the basis of `A_d`.
    pub fn column<K: Field<Elem = E>>(&self, k: &K, g: usize) -> SparseRow<E> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, r)| !k.is_zero(&r[g]))
            .map(|(f, r)| (f as u32, r[g].clone()))
            .collect()
    }

    /// `(beta(v, g))_g` for `v` in the monomial basis of `A_d`.
    pub fn pair<K: Field<Elem = E>>(&self, k: &K, v: &[(u32, E)]) -> Vec<E> {
        let mut out = vec![k.zero(); self.cols.len()];
        for (f, a) in v {
            for (o, b) in out.iter_mut().zip(&self.entries[*f as usize]) {
                *o = k.mul_add(o, a, b);
            }
        }
        out
    }

    pub fn map<K: Field, F: Fn(&E) -> K::Elem>(&self, f: F) -> GramMatrix<K::Elem> {
        GramMatrix {
            degree: self.degree,
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            entries: self.entries.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }
}

/// Gram matrices in degrees `0, 1, 2, ...`, each built from the previous one.
pub struct GramTower<'a, K: Field> {
    inst: &'a Instance<K>,
    prev: Option<GramMatrix<K::Elem>>,
}

impl<'a, K: Field> GramTower<'a, K> {
    pub fn new(inst: &'a Instance<K>) -> Self {
        Self { inst, prev: None }
    }
}

impl<K: Field> Iterator for GramTower<'_, K> {
    type Item = GramMatrix<K::Elem>;

    fn next(&mut self) -> Option<Self::Item> {
        let next = match &self.prev {
            None => GramMatrix {
                degree: 0,
                rows: vec![Monomial::ONE],
                cols: vec![Monomial::ONE],
                entries: vec![vec![self.inst.field.one()]],
            },
            Some(prev) => extend(self.inst, prev),
        };
        self.prev = Some(next.clone());
        Some(next)
    }
}

/// Degree `d + 1` from degree `d`: the entry at `(f, u_i g)`, with `i` the first
/// variable of the column monomial, is `sum_m (D_{u_i} f)[m] beta(m, g)`.
fn extend<K: Field>(inst: &Instance<K>, prev: &GramMatrix<K::Elem>) -> GramMatrix<K::Elem> {
    let k = &inst.field;
    let n = inst.n();
    let d = prev.degree + 1;
    let rows = monomial_basis(n, d);
    let cols = u_basis(n, d);
    let prev_rows = basis_index(&prev.rows);
    let prev_cols = basis_index(&prev.cols);
    let peel: Vec<(usize, usize)> = cols
        .iter()
        .map(|g| {
            let i = (0..n - 1).find(|&i| g.exponent(i) > 0).unwrap();
            let rest = g.with_exponent(i, g.exponent(i) - 1);
            (i, prev_cols[&rest])
        })
        .collect();
    // images[i][f] = D_{u_i} x^f over the basis of A_{d-1}
    let images: Vec<Vec<SparseRow<K::Elem>>> = (0..n - 1)
        .into_par_iter()
        .map(|i| {
            dunkl_monomials(inst, DunklOp::u(n, i), &rows)
                .into_iter()
                .map(|p| p.terms().map(|(m, a)| (prev_rows[&m] as u32, a.clone())).collect())
                .collect()
        })
        .collect();
    let entries = (0..rows.len())
        .into_par_iter()
        .map(|f| {
            peel.iter()
                .map(|&(i, g)| {
                    images[i][f]
                        .iter()
                        .fold(k.zero(), |acc, (m, a)| k.mul_add(&acc, a, &prev.entries[*m as usize][g]))
                })
                .collect()
        })
        .collect();
    GramMatrix {
        degree: d,
        rows,
        cols,
        entries,
    }
}

pub fn gram_matrix<K: Field>(inst: &Instance<K>, d: u32) -> GramMatrix<K::Elem> {
    GramTower::new(inst).nth(d as usize).unwrap()
}

/// `beta(f, u_{w_1} ... u_{w_d})` by applying `D_{u_{w_1}}`, then `D_{u_{w_2}}`,
/// and so on, then reading off the constant term. Indices are 0-based.
pub fn peel<K: Field>(inst: &Instance<K>, f: &MultiPoly<K::Elem>, word: &[usize]) -> K::Elem {
    let n = inst.n();
    let mut cur = f.clone();
    for &i in word {
        cur = dunkl_apply(inst, DunklOp::u(n, i), &cur);
    }
    cur.coeff(Monomial::ONE).cloned().unwrap_or_else(|| inst.field.zero())
}

/// One degree of `J_c = ker beta_c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelSlice<E> {
    pub degree: u32,
    pub dim_a: usize,
    pub dim: usize,
    /// Reduced row-echelon basis in the monomial basis of `A_d`.
    pub basis: Echelon<E>,
}

/// Left kernel `{v : beta(v, g) = 0 for all g}` of a Gram matrix.
pub fn jc_degree_dim<K: Reduce>(k: &K, gram: &GramMatrix<K::Elem>) -> KernelSlice<K::Elem> {
    let dim_a = gram.rows.len();
    let cols: Vec<SparseRow<K::Elem>> = (0..gram.cols.len())
        .map(|g| gram.column(k, g))
        .filter(|c| !c.is_empty())
        .collect();
    let null = k.span(dim_a, cols, true).nullspace(k);
    let basis = k.span(dim_a, null, true);
    KernelSlice {
        degree: gram.degree,
        dim_a,
        dim: basis.rank(),
        basis,
    }
}

/// Whether every `m f_k` spanning `I_d` pairs to zero with all of `Sym(h)_d`.
pub fn ideal_in_kernel<K: Field>(k: &K, generators: &[MultiPoly<K::Elem>], gram: &GramMatrix<K::Elem>) -> bool {
    let index = basis_index(&gram.rows);
    spanning_rows(generators, gram.degree, &index)
        .par_iter()
        .all(|r| gram.pair(k, r).iter().all(|x| k.is_zero(x)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompareRecord {
    pub d: u32,
    #[serde(rename = "dim_A")]
    pub dim_a: usize,
    #[serde(rename = "dim_I")]
    pub dim_i: usize,
    #[serde(rename = "dim_J")]
    pub dim_j: usize,
    /// `I_d` pairs to zero with `Sym(h)_d`.
    pub contained: bool,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub records: Vec<CompareRecord>,
    pub containment: bool,
    pub verdict: bool,
}

impl ComparisonReport {
    fn new(records: Vec<CompareRecord>) -> Self {
        let containment = records.iter().all(|r| r.contained);
        let verdict = containment && records.iter().all(|r| r.equal);
        Self {
            records,
            containment,
            verdict,
        }
    }

    pub fn dims_j(&self) -> Vec<usize> {
        self.records.iter().map(|r| r.dim_j).collect()
    }

    pub fn into_result(self) -> Result<Self, ContraformError> {
        if let Some(r) = self.records.iter().find(|r| !r.contained) {
            return Err(ContraformError::ContainmentFailure { degree: r.d });
        }
        if let Some(r) = self.records.iter().find(|r| !r.equal) {
            return Err(ContraformError::DimensionGap {
                degree: r.d,
                dim_i: r.dim_i,
                dim_j: r.dim_j,
            });
        }
        Ok(self)
    }
}

/// Per-degree `dim I_d`, `dim J_d` and containment, with Gram matrices over
/// the instance's own field.
pub fn compare_ideals<K: Reduce>(inst: &Instance<K>, generators: &[MultiPoly<K::Elem>], d_max: u32) -> ComparisonReport {
    let k = &inst.field;
    let n = inst.n();
    let records = GramTower::new(inst)
        .take(d_max as usize + 1)
        .map(|gram| {
            let d = gram.degree;
            let dim_i = ideal_degree_dim(k, n, generators, d, false).dim;
            let dim_j = jc_degree_dim(k, &gram).dim;
            CompareRecord {
                d,
                dim_a: gram.rows.len(),
                dim_i,
                dim_j,
                contained: ideal_in_kernel(k, generators, &gram),
                equal: dim_i == dim_j,
            }
        })
        .collect();
    ComparisonReport::new(records)
}

/// Largest degree in `c` of a coefficient of the generators.
fn c_degree(generators: &[MultiPoly<RationalFunc>]) -> Result<u32, ContraformError> {
    let mut deg = 0;
    for g in generators {
        for (_, a) in g.terms() {
            if !a.is_polynomial() {
                return Err(ContraformError::NonPolynomial);
            }
            deg = deg.max(a.numerator().len().saturating_sub(1) as u32);
        }
    }
    Ok(deg)
}

/// Exact comparison over `F_p(c)` without forming symbolic Gram matrices.
///
/// Gram entries in degree `d` are polynomials in `c` of degree at most `d`, so
/// each pairing `beta(m f_k, g)` has degree at most `d + e` where `e` bounds the
/// generators. It vanishes identically once it vanishes at `d_max + e + 1`
/// distinct points, which is what is checked. Each point also bounds
/// `dim J_d` from above, since rank can only drop under specialization.
/// Containment gives `dim J_d >= dim I_d`, so the two agree exactly whenever
/// some point reaches `ideal_dims[d]`. The recorded `dim_J` is the smallest
/// value seen.
pub fn compare_symbolic(
    session: Session,
    sym: &RationalFuncField,
    generators: &[MultiPoly<RationalFunc>],
    ideal_dims: &[usize],
    d_max: u32,
) -> Result<ComparisonReport, ContraformError> {
    let e = c_degree(generators)?;
    let npoints = (d_max + e + 1) as usize;
    let ext = ExtField::with_min_order(session.p(), (npoints as u64 + session.p() as u64).max(1 << 10))
        .expect("extension field of small order");
    let points: Vec<ExtElem> = ext
        .elements()
        .filter(|x| ext.coeffs(x)[1..].iter().any(|&v| v != 0))
        .take(npoints)
        .collect();
    let per_point: Vec<Vec<(bool, usize)>> = points
        .par_iter()
        .map(|t| {
            let inst = Instance::specialized(session, ext.clone(), *t).expect("same characteristic");
            let gens: Vec<MultiPoly<ExtElem>> = generators
                .iter()
                .map(|g| specialize_poly(sym, g, &ext, t).expect("polynomial coefficients"))
                .collect();
            GramTower::new(&inst)
                .take(d_max as usize + 1)
                .map(|gram| {
                    let dim_j = jc_degree_dim(&ext, &gram).dim;
                    (ideal_in_kernel(&ext, &gens, &gram), dim_j)
                })
                .collect()
        })
        .collect();
    let records = (0..=d_max as usize)
        .map(|d| {
            let dim_j = per_point.iter().map(|r| r[d].1).min().unwrap();
            CompareRecord {
                d: d as u32,
                dim_a: session.dim_a(d as u32),
                dim_i: ideal_dims[d],
                dim_j,
                contained: per_point.iter().all(|r| r[d].0),
                equal: ideal_dims[d] == dim_j,
            }
        })
        .collect();
    Ok(ComparisonReport::new(records))
}

/// Comparison at `c = c0` for each of `points`, building the generators at
/// each point directly.
pub fn compare_at_points<K: Reduce>(
    session: Session,
    field: &K,
    points: &[K::Elem],
    d_max: u32,
) -> Result<Vec<ComparisonReport>, crate::series::SeriesError> {
    points
        .iter()
        .map(|c0| {
            let inst = Instance::specialized(session, field.clone(), c0.clone()).expect("same characteristic");
            let gens = singular_vectors(&inst)?;
            Ok(compare_ideals(&inst, &gens, d_max))
        })
        .collect()
}

/// Whether all reports give the same kernel dimensions.
pub fn kernel_dims_agree(reports: &[ComparisonReport]) -> bool {
    reports.windows(2).all(|w| w[0].dims_j() == w[1].dims_j())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::PrimeField;
    use crate::graded::hilbert_series;
    use proptest::prelude::*;

    fn symbolic(p: u32, n: usize) -> (Instance<RationalFuncField>, Vec<MultiPoly<RationalFunc>>) {
        let inst = Instance::symbolic(Session::new(p, n).unwrap()).unwrap();
        let gens = singular_vectors(&inst).unwrap();
        (inst, gens)
    }

    fn ext_instance(p: u32, n: usize, power: u64) -> Instance<ExtField> {
        let ext = ExtField::with_min_order(p, 1000).unwrap();
        let c0 = ext.pow(&ext.generator(), power);
        Instance::specialized(Session::new(p, n).unwrap(), ext, c0).unwrap()
    }

    #[test]
    fn low_degrees() {
        for (p, n) in [(2, 4), (3, 3), (3, 6)] {
            let (inst, _) = symbolic(p, n);
            let k = &inst.field;
            let mut tower = GramTower::new(&inst);
            let g0 = tower.next().unwrap();
            assert_eq!(g0.entries, vec![vec![k.one()]]);
            let g1 = tower.next().unwrap();
            for (f, row) in g1.entries.iter().enumerate() {
                for (g, x) in row.iter().enumerate() {
                    assert_eq!(*x, if f == g { k.one() } else { k.zero() });
                }
            }
            assert_eq!(jc_degree_dim(k, &g0).dim, 0);
            assert_eq!(jc_degree_dim(k, &g1).dim, 0);
        }
    }

    #[test]
    fn kernel_in_generator_degree() {
        for (p, n) in [(2, 2), (2, 4), (3, 3)] {
            let (inst, _) = symbolic(p, n);
            let gram = gram_matrix(&inst, p);
            assert_eq!(jc_degree_dim(&inst.field, &gram).dim, n - 1);
        }
    }

    #[test]
    fn entries_match_peeling() {
        let inst = ext_instance(3, 3, 5);
        let k = &inst.field;
        let gram = gram_matrix(&inst, 4);
        for (fi, &f) in gram.rows.iter().enumerate() {
            let fp = MultiPoly::monomial(3, f, k.one(), k);
            for (gi, g) in gram.cols.iter().enumerate() {
                let word: Vec<usize> = (0..2).flat_map(|i| std::iter::repeat_n(i, g.exponent(i) as usize)).collect();
                assert_eq!(peel(&inst, &fp, &word), gram.entries[fi][gi]);
            }
        }
    }

    #[test]
    fn specialization_commutes_with_gram() {
        let (inst, _) = symbolic(2, 4);
        let ext = ExtField::with_min_order(2, 1000).unwrap();
        let c0 = ext.pow(&ext.generator(), 11);
        let spec = Instance::specialized(inst.session, ext.clone(), c0).unwrap();
        for (s, t) in GramTower::new(&inst).zip(GramTower::new(&spec)).take(4) {
            let mapped = s.map::<ExtField, _>(|x| inst.field.specialize(x, &ext, &c0).unwrap());
            assert_eq!(mapped, t);
        }
    }

    #[test]
    fn two_variables_symbolic() {
        let (inst, gens) = symbolic(2, 2);
        let report = compare_ideals(&inst, &gens, 3).into_result().unwrap();
        assert_eq!(report.dims_j(), vec![0, 0, 1, 1]);
    }

    #[test]
    fn four_variables_symbolic() {
        let (inst, gens) = symbolic(2, 4);
        let report = compare_ideals(&inst, &gens, inst.session.socle_degree() + 1)
            .into_result()
            .unwrap();
        assert_eq!(report.records[2].dim_j, 3);
        let last = report.records.last().unwrap();
        assert_eq!(last.dim_j, last.dim_a);
    }

    #[test]
    fn evaluation_certificate_matches_symbolic_gram() {
        let (inst, gens) = symbolic(3, 3);
        let d_max = inst.session.socle_degree() + 1;
        let direct = compare_ideals(&inst, &gens, d_max);
        let series = hilbert_series(&inst.field, 3, &gens, d_max);
        let dims_i: Vec<usize> = (0..=d_max).map(|d| inst.session.dim_a(d) - series.dims[d as usize]).collect();
        let lifted = compare_symbolic(inst.session, &inst.field, &gens, &dims_i, d_max).unwrap();
        assert_eq!(direct, lifted);
        assert!(lifted.verdict);
    }

    #[test]
    fn wrong_generator_breaks_containment() {
        let (inst, _) = symbolic(3, 3);
        let gens = vec![MultiPoly::var(3, 0, &inst.field)];
        let err = compare_ideals(&inst, &gens, 4).into_result().unwrap_err();
        assert_eq!(err, ContraformError::ContainmentFailure { degree: 1 });
    }

    #[test]
    fn degenerate_value_shows_gap() {
        // c = 1 lies in the excluded set for p = 3, where the generators collapse
        let session = Session::new(3, 3).unwrap();
        let k = PrimeField::new(3).unwrap();
        let inst = Instance::specialized(session, k, 1).unwrap();
        let gens = singular_vectors(&inst).unwrap();
        let report = compare_ideals(&inst, &gens, 5);
        assert!(report.containment);
        assert!(report.records.iter().all(|r| r.dim_j >= r.dim_i));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn peeling_order_is_irrelevant(
            exps in prop::collection::vec(0u32..3, 3),
            pool in prop::collection::vec(0usize..3, 6),
            seed in any::<u64>(),
        ) {
            use rand::SeedableRng;
            let inst = ext_instance(2, 4, 7);
            let k = &inst.field;
            let mut e = exps.clone();
            e.push(0);
            let word = &pool[..e.iter().sum::<u32>() as usize];
            let f = MultiPoly::monomial(4, Monomial::from_exponents(&e), k.one(), k);
            let mut shuffled = word.to_vec();
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            rand::seq::SliceRandom::shuffle(&mut shuffled[..], &mut rng);
            prop_assert_eq!(peel(&inst, &f, word), peel(&inst, &f, &shuffled));
        }
    }
}
