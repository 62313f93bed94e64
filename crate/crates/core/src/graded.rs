//! Degree-by-degree linear algebra on the ideal `I_c = <f_1, ..., f_{n-1}>`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::coeff::{RationalFunc, RationalFuncField};
use crate::linalg::{Echelon, Reduce, SparseRow};
use crate::poly::{basis_index, monomial_basis, specialize_poly, Monomial, MultiPoly};
use crate::session::Session;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error("quotient dimensions deviate from the complete-intersection series in degree {degree}")]
    CIFailure { degree: u32 },
    #[error("d_max = {d_max} must be at least {needed}")]
    InsufficientDegree { d_max: u32, needed: u32 },
}

/// `m * f_k` for every monomial `m` of degree `d - deg f` and every generator,
/// as rows over the monomial basis of `A_d`.
pub fn spanning_rows<E: Clone + PartialEq>(
    generators: &[MultiPoly<E>],
    d: u32,
    index: &HashMap<Monomial, usize>,
) -> Vec<SparseRow<E>> {
    let Some(e) = generators.iter().find_map(|g| g.degree()) else {
        return Vec::new();
    };
    if d < e {
        return Vec::new();
    }
    let n = generators[0].nvars();
    let mut rows = Vec::new();
    for m in monomial_basis(n, d - e) {
        for g in generators {
            let mut row: SparseRow<E> = g
                .terms()
                .map(|(t, v)| (index[&t.mul(m)] as u32, v.clone()))
                .collect();
            row.sort_unstable_by_key(|x| x.0);
            if !row.is_empty() {
                rows.push(row);
            }
        }
    }
    rows
}

/// One degree of a graded subspace of `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slice<E> {
    pub degree: u32,
    pub dim_a: usize,
    pub dim: usize,
    /// Reduced row-echelon basis, kept only on request.
    pub basis: Option<Echelon<E>>,
}

/// Degree slices `0..=d_max` of a graded subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSubspace<E> {
    pub slices: Vec<Slice<E>>,
}

impl<E> GradedSubspace<E> {
    pub fn dims(&self) -> Vec<usize> {
        self.slices.iter().map(|s| s.dim).collect()
    }

    /// Dimensions of the quotient `A / I`.
    pub fn quotient(&self) -> HilbertSeries {
        HilbertSeries {
            dims: self.slices.iter().map(|s| s.dim_a - s.dim).collect(),
        }
    }
}

/// `dim I_d` and, if `retain`, its canonical basis.
pub fn ideal_degree_dim<K: Reduce>(
    k: &K,
    n: usize,
    generators: &[MultiPoly<K::Elem>],
    d: u32,
    retain: bool,
) -> Slice<K::Elem> {
    let basis = monomial_basis(n, d);
    let index = basis_index(&basis);
    let rows = spanning_rows(generators, d, &index);
    let ech = k.span(basis.len(), rows, retain);
    Slice {
        degree: d,
        dim_a: basis.len(),
        dim: ech.rank(),
        basis: retain.then_some(ech),
    }
}

/// All slices of `I` through `d_max`; degrees are computed independently.
pub fn ideal_subspace<K: Reduce>(
    k: &K,
    n: usize,
    generators: &[MultiPoly<K::Elem>],
    d_max: u32,
    retain: bool,
) -> GradedSubspace<K::Elem> {
    let slices = (0..=d_max)
        .into_par_iter()
        .map(|d| ideal_degree_dim(k, n, generators, d, retain))
        .collect();
    GradedSubspace { slices }
}

/// `dims[d] = dim (A / I)_d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertSeries {
    pub dims: Vec<usize>,
}

impl HilbertSeries {
    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Largest degree with a nonzero piece.
    pub fn top_degree(&self) -> Option<u32> {
        self.dims.iter().rposition(|&x| x > 0).map(|d| d as u32)
    }
}

pub fn hilbert_series<K: Reduce>(
    k: &K,
    n: usize,
    generators: &[MultiPoly<K::Elem>],
    d_max: u32,
) -> HilbertSeries {
    ideal_subspace(k, n, generators, d_max, false).quotient()
}

/// Comparison of a computed series with `((1 - t^p) / (1 - t))^(n-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertReport {
    pub dims: Vec<usize>,
    pub expected: Vec<usize>,
    pub formula_match: bool,
    pub socle_degree: u32,
    pub total_dim: usize,
    pub first_mismatch: Option<u32>,
}

impl HilbertReport {
    pub fn into_result(self) -> Result<Self, GradedError> {
        match self.first_mismatch {
            Some(degree) => Err(GradedError::CIFailure { degree }),
            None => Ok(self),
        }
    }
}

/// Check coefficient-wise agreement through the socle degree, vanishing
/// above it, and total dimension `p^(n-1)`.
pub fn check_complete_intersection(
    session: &Session,
    series: &HilbertSeries,
) -> Result<HilbertReport, GradedError> {
    let needed = session.socle_degree() + 1;
    let d_max = series.dims.len().saturating_sub(1) as u32;
    if series.dims.is_empty() || d_max < needed {
        return Err(GradedError::InsufficientDegree { d_max, needed });
    }
    let expected = session.expected_hilbert();
    let first_mismatch = series
        .dims
        .iter()
        .enumerate()
        .find(|&(d, &x)| x != expected.get(d).copied().unwrap_or(0))
        .map(|(d, _)| d as u32);
    let total_dim = series.total();
    let formula_match = first_mismatch.is_none() && total_dim == session.expected_total();
    Ok(HilbertReport {
        dims: series.dims.clone(),
        expected,
        formula_match,
        socle_degree: series.top_degree().unwrap_or(0),
        total_dim,
        first_mismatch,
    })
}

/// Whether the generators are linearly independent over the field.
pub fn check_linear_independence<K: Reduce>(k: &K, generators: &[MultiPoly<K::Elem>]) -> bool {
    let Some(d) = generators.first().and_then(|g| g.degree()) else {
        return generators.is_empty();
    };
    let n = generators[0].nvars();
    let basis = monomial_basis(n, d);
    let index = basis_index(&basis);
    let rows: Vec<SparseRow<K::Elem>> = generators
        .iter()
        .map(|g| {
            let mut row: SparseRow<K::Elem> = g.terms().map(|(t, v)| (index[&t] as u32, v.clone())).collect();
            row.sort_unstable_by_key(|x| x.0);
            row
        })
        .collect();
    k.span(basis.len(), rows, false).rank() == generators.len()
}

/// One specialization `c = c0` in a sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub c: String,
    pub independent: Option<bool>,
    pub hilbert_match: Option<bool>,
    /// First degree whose quotient dimension differs from the formula.
    pub first_deviation: Option<u32>,
    pub error: Option<String>,
}

/// Specialize the symbolic generators at each `c0` and record whether
/// independence and the Hilbert series survive. Errors are kept per row.
pub fn sweep_c<K: Reduce>(
    session: &Session,
    sym: &RationalFuncField,
    generators: &[MultiPoly<RationalFunc>],
    field: &K,
    values: &[K::Elem],
    d_max: u32,
) -> Vec<SweepRow> {
    values
        .iter()
        .map(|c0| {
            let label = field.format(c0);
            let spec: Result<Vec<_>, _> = generators
                .iter()
                .map(|f| specialize_poly(sym, f, field, c0))
                .collect();
            let gens = match spec {
                Ok(g) => g,
                Err(e) => {
                    return SweepRow {
                        c: label,
                        independent: None,
                        hilbert_match: None,
                        first_deviation: None,
                        error: Some(e.to_string()),
                    }
                }
            };
            let independent = gens.iter().all(|g| !g.is_zero()) && check_linear_independence(field, &gens);
            let series = if gens.iter().all(|g| g.is_zero()) {
                HilbertSeries {
                    dims: (0..=d_max).map(|d| session.dim_a(d)).collect(),
                }
            } else {
                let nonzero: Vec<_> = gens.into_iter().filter(|g| !g.is_zero()).collect();
                hilbert_series(field, session.n(), &nonzero, d_max)
            };
            match check_complete_intersection(session, &series) {
                Ok(r) => SweepRow {
                    c: label,
                    independent: Some(independent),
                    hilbert_match: Some(r.formula_match),
                    first_deviation: r.first_mismatch,
                    error: None,
                },
                Err(e) => SweepRow {
                    c: label,
                    independent: Some(independent),
                    hilbert_match: None,
                    first_deviation: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{ExtField, PrimeField};
    use crate::series::singular_vectors;
    use crate::session::Instance;
    use rand::SeedableRng;

    fn symbolic(p: u32, n: usize) -> (Instance<RationalFuncField>, Vec<MultiPoly<RationalFunc>>) {
        let inst = Instance::symbolic(Session::new(p, n).unwrap()).unwrap();
        let gens = singular_vectors(&inst).unwrap();
        (inst, gens)
    }

    #[test]
    fn below_generator_degree_is_empty() {
        let (inst, gens) = symbolic(3, 3);
        assert_eq!(ideal_degree_dim(&inst.field, 3, &gens, 2, false).dim, 0);
        assert_eq!(ideal_degree_dim(&inst.field, 3, &gens, 3, false).dim, 2);
    }

    #[test]
    fn smallest_case() {
        let (inst, gens) = symbolic(2, 2);
        let s = ideal_degree_dim(&inst.field, 2, &gens, 2, true);
        assert_eq!((s.dim_a, s.dim), (1, 1));
        let h = hilbert_series(&inst.field, 2, &gens, 3);
        assert_eq!(h.dims, vec![1, 1, 0, 0]);
    }

    #[test]
    fn symbolic_series_small_cases() {
        for (p, n, dims) in [(2, 4, vec![1, 3, 3, 1, 0, 0]), (3, 3, vec![1, 2, 3, 2, 1, 0, 0])] {
            let (inst, gens) = symbolic(p, n);
            let h = hilbert_series(&inst.field, n, &gens, inst.session.default_d_max());
            assert_eq!(h.dims, dims);
            let r = check_complete_intersection(&inst.session, &h).unwrap();
            assert!(r.formula_match);
            assert_eq!(r.total_dim, inst.session.expected_total());
            assert_eq!(r.socle_degree, inst.session.socle_degree());
        }
    }

    #[test]
    fn insufficient_degree_rejected() {
        let s = Session::new(3, 3).unwrap();
        let h = HilbertSeries { dims: vec![1, 2, 3] };
        assert!(matches!(
            check_complete_intersection(&s, &h),
            Err(GradedError::InsufficientDegree { .. })
        ));
    }

    #[test]
    fn independence() {
        let (inst, gens) = symbolic(3, 6);
        assert!(check_linear_independence(&inst.field, &gens));
        let dup = vec![gens[0].clone(), gens[0].clone()];
        assert!(!check_linear_independence(&inst.field, &dup));
        // p = 2, n = 2 at c = 1: f_1 = (1 - c) x1^2 vanishes
        let (inst, gens) = symbolic(2, 2);
        let f2 = PrimeField::new(2).unwrap();
        let g = specialize_poly(&inst.field, &gens[0], &f2, &1).unwrap();
        assert!(g.is_zero());
        assert!(!check_linear_independence(&f2, &[g]));
    }

    #[test]
    fn sweep_smallest_case() {
        let (inst, gens) = symbolic(2, 2);
        let f2 = PrimeField::new(2).unwrap();
        let rows = sweep_c(&inst.session, &inst.field, &gens, &f2, &[0, 1], 3);
        assert_eq!(rows[0].independent, Some(true));
        assert_eq!(rows[0].hilbert_match, Some(true));
        assert_eq!(rows[1].independent, Some(false));
        assert_eq!(rows[1].hilbert_match, Some(false));
        assert_eq!(rows[1].first_deviation, Some(2));
        assert!(sweep_c(&inst.session, &inst.field, &gens, &f2, &[], 3).is_empty());
    }

    #[test]
    fn symbolic_rank_dominates_specializations() {
        let (inst, gens) = symbolic(3, 3);
        let ext = ExtField::with_min_order(3, 64).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let sym = ideal_subspace(&inst.field, 3, &gens, 6, false).dims();
        for _ in 0..3 {
            let c0 = ext.random(&mut rng);
            let spec: Vec<_> = gens
                .iter()
                .map(|f| specialize_poly(&inst.field, f, &ext, &c0).unwrap())
                .collect();
            let dims = ideal_subspace(&ext, 3, &spec, 6, false).dims();
            assert!(dims.iter().zip(&sym).all(|(a, b)| a <= b));
        }
        for c0 in 0..3u32 {
            let f3 = PrimeField::new(3).unwrap();
            let spec: Vec<_> = gens
                .iter()
                .map(|f| specialize_poly(&inst.field, f, &f3, &c0).unwrap())
                .collect();
            let dims = ideal_subspace(&f3, 3, &spec, 6, false).dims();
            assert!(dims.iter().zip(&sym).all(|(a, b)| a <= b));
        }
    }

    #[test]
    fn bases_are_canonical() {
        let (inst, gens) = symbolic(2, 4);
        let a = ideal_subspace(&inst.field, 4, &gens, 4, true);
        let mut rev = gens.clone();
        rev.reverse();
        let b = ideal_subspace(&inst.field, 4, &rev, 4, true);
        assert_eq!(a, b);
    }
}
